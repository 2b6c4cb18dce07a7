/*
 * Copyright 2026 The hevec Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HEVEC_TRANSPOSE_H_
#define HEVEC_TRANSPOSE_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "hevec/rns.h"

namespace hevec {

// Row-major matrix of words.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<Word> data;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0) {}

  Word& at(size_t r, size_t c) { return data[r * cols + c]; }
  Word at(size_t r, size_t c) const { return data[r * cols + c]; }

  bool operator==(const Matrix& other) const {
    return rows == other.rows && cols == other.cols && data == other.data;
  }
};

// Structure and timing of one pass through the quadrant-swap transpose unit.
struct TransposeTiming {
  int unit_size = 0;        // K of the outermost quadrant-swap stage
  int active_layers = 0;    // recursion layers actually exercised
  int bypassed_layers = 0;  // outer layers skipped for rectangular inputs
  int64_t step_cycles = 0;  // each of the three steps takes K/2 cycles
  int64_t latency_cycles = 0;
  int elements_per_cycle = 0;  // steady state, fully pipelined
};

struct TransposeResult {
  Matrix out;
  TransposeTiming timing;
};

// Swaps the top-right and bottom-left quadrants of a K x K matrix by running
// the three-step row-stream procedure of the quadrant-swap unit (two buffers
// `top` and `bottom` of K/2 half-rows each). Returns the output row stream.
Matrix QuadrantSwap(const Matrix& in);

// Transposes a power-of-two matrix with recursive quadrant swaps. Square
// inputs use every layer; rectangular inputs are handled as a row (or
// column) of square blocks with the outer layers bypassed.
absl::StatusOr<TransposeResult> TransposeQuadrantSwap(const Matrix& in);

}  // namespace hevec

#endif  // HEVEC_TRANSPOSE_H_
