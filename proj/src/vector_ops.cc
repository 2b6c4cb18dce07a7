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

#include "hevec/vector_ops.h"

#include "hevec/automorphism.h"
#include "hevec/ntt.h"

namespace hevec {
namespace {

std::vector<Word> Reduced(std::span<const Word> a, Word q) {
  std::vector<Word> out(a.begin(), a.end());
  for (Word& x : out) x %= q;
  return out;
}

}  // namespace

std::vector<Word> VecAdd(std::span<const Word> a, std::span<const Word> b,
                         Word q) {
  std::vector<Word> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    out[i] = ModAdd(a[i] % q, b[i] % q, q);
  }
  return out;
}

std::vector<Word> VecMul(std::span<const Word> a, std::span<const Word> b,
                         Word q) {
  std::vector<Word> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = ModMul(a[i] % q, b[i] % q, q);
  return out;
}

std::vector<Word> VecMulScalar(std::span<const Word> a, Word scalar, Word q) {
  std::vector<Word> out(a.size());
  const Word s = scalar % q;
  for (size_t i = 0; i < a.size(); ++i) out[i] = ModMul(a[i] % q, s, q);
  return out;
}

std::vector<Word> VecNtt(std::span<const Word> a, const PrimeModulus& modulus) {
  std::vector<Word> out = Reduced(a, modulus.q);
  ForwardNttInPlace(out, modulus);
  return out;
}

std::vector<Word> VecIntt(std::span<const Word> a,
                          const PrimeModulus& modulus) {
  std::vector<Word> out = Reduced(a, modulus.q);
  InverseNttInPlace(out, modulus);
  return out;
}

std::vector<Word> VecAutomorphism(std::span<const Word> a, uint64_t k, Word q,
                                  Domain domain) {
  std::vector<Word> in = Reduced(a, q);
  return ApplyAutomorphism(in, q, k, domain);
}

}  // namespace hevec
