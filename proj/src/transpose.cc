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

#include "hevec/transpose.h"

#include <algorithm>
#include <bit>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace hevec {
namespace {

bool IsPow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Matrix Block(const Matrix& m, size_t r0, size_t c0, size_t k) {
  Matrix out(k, k);
  for (size_t r = 0; r < k; ++r) {
    std::copy_n(m.data.begin() + (r0 + r) * m.cols + c0, k,
                out.data.begin() + r * k);
  }
  return out;
}

void PutBlock(Matrix& m, size_t r0, size_t c0, const Matrix& block) {
  const size_t k = block.rows;
  for (size_t r = 0; r < k; ++r) {
    std::copy_n(block.data.begin() + r * k, k,
                m.data.begin() + (r0 + r) * m.cols + c0);
  }
}

Matrix TransposeSquare(const Matrix& m) {
  if (m.rows <= 1) return m;
  Matrix swapped = QuadrantSwap(m);
  const size_t h = m.rows / 2;
  Matrix out(m.rows, m.cols);
  for (size_t br = 0; br < 2; ++br) {
    for (size_t bc = 0; bc < 2; ++bc) {
      PutBlock(out, br * h, bc * h,
               TransposeSquare(Block(swapped, br * h, bc * h, h)));
    }
  }
  return out;
}

}  // namespace

Matrix QuadrantSwap(const Matrix& in) {
  const size_t k = in.rows;
  const size_t h = k / 2;
  std::vector<std::vector<Word>> top(h), bottom(h);
  Matrix out(k, k);
  auto left = [&](size_t r) {
    return std::vector<Word>(in.data.begin() + r * k,
                             in.data.begin() + r * k + h);
  };
  auto right = [&](size_t r) {
    return std::vector<Word>(in.data.begin() + r * k + h,
                             in.data.begin() + (r + 1) * k);
  };
  auto emit = [&](size_t r, const std::vector<Word>& lo,
                  const std::vector<Word>& hi) {
    std::copy(lo.begin(), lo.end(), out.data.begin() + r * k);
    std::copy(hi.begin(), hi.end(), out.data.begin() + r * k + h);
  };
  // Step 1: buffer the first half of the stream.
  for (size_t i = 0; i < h; ++i) {
    top[i] = left(i);
    bottom[i] = right(i);
  }
  // Step 2: emit top[i] beside the bypassed word, refill top[i].
  for (size_t i = 0; i < h; ++i) {
    emit(i, top[i], left(h + i));
    top[i] = right(h + i);
  }
  // Step 3: drain, second swap mux puts bottom[i] first.
  for (size_t i = 0; i < h; ++i) {
    emit(h + i, bottom[i], top[i]);
  }
  return out;
}

absl::StatusOr<TransposeResult> TransposeQuadrantSwap(const Matrix& in) {
  if (!IsPow2(in.rows) || !IsPow2(in.cols)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "transpose needs power-of-two dimensions, got ", in.rows, "x",
        in.cols));
  }
  const size_t k = std::min(in.rows, in.cols);
  const size_t wide = std::max(in.rows, in.cols);
  TransposeResult result;
  result.out = Matrix(in.cols, in.rows);
  const size_t blocks = wide / k;
  for (size_t b = 0; b < blocks; ++b) {
    // Wide inputs are a row of square blocks; tall inputs a column of them.
    const bool wide_input = in.cols >= in.rows;
    Matrix t = TransposeSquare(
        Block(in, wide_input ? 0 : b * k, wide_input ? b * k : 0, k));
    PutBlock(result.out, wide_input ? b * k : 0, wide_input ? 0 : b * k, t);
  }
  TransposeTiming& timing = result.timing;
  timing.unit_size = static_cast<int>(wide);
  timing.active_layers = std::countr_zero(k);
  timing.bypassed_layers = std::countr_zero(wide) - timing.active_layers;
  timing.step_cycles = static_cast<int64_t>(wide / 2);
  timing.latency_cycles = 3 * timing.step_cycles;
  timing.elements_per_cycle = static_cast<int>(wide);
  return result;
}

}  // namespace hevec
