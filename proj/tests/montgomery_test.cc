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

#include "hevec/montgomery.h"

#include <random>

#include "gtest/gtest.h"
#include "hevec/rns.h"

namespace hevec {
namespace {

TEST(MontgomeryModulusTest, RejectsModuliOutsideTheFamily) {
  EXPECT_FALSE(MontgomeryModulus::Create(65537).ok());   // +1 mod 2^16
  EXPECT_FALSE(MontgomeryModulus::Create(65535).ok());   // not prime
  EXPECT_FALSE(MontgomeryModulus::Create(12289).ok());
  EXPECT_TRUE(MontgomeryModulus::Create(131071).ok());
}

TEST(MontgomeryModulusTest, ZeroAndRoundTrip) {
  auto m = MontgomeryModulus::Create(131071);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->Mul(0, m->ToMontgomery(5)), 0);
  for (Word a = 0; a < 1000; ++a) {
    EXPECT_EQ(m->FromMontgomery(m->ToMontgomery(a)), a);
  }
}

class MontgomeryOracleTest : public ::testing::TestWithParam<int> {};

TEST_P(MontgomeryOracleTest, AgreesWithWideReduction) {
  // Largest admissible prime below 2^GetParam().
  Word q = 0;
  for (uint64_t k = (uint64_t{1} << (GetParam() - 16)); k > 0; --k) {
    uint64_t cand = (k << 16) - 1;
    if (cand < (uint64_t{1} << GetParam()) && IsPrime(cand)) {
      q = static_cast<Word>(cand);
      break;
    }
  }
  ASSERT_NE(q, 0);
  auto m = MontgomeryModulus::Create(q);
  ASSERT_TRUE(m.ok());
  std::mt19937_64 rng(GetParam());
  std::uniform_int_distribution<Word> dist(0, q - 1);
  for (int i = 0; i < 100000; ++i) {
    Word a = dist(rng), b = dist(rng);
    Word got = m->FromMontgomery(m->Mul(m->ToMontgomery(a), m->ToMontgomery(b)));
    ASSERT_EQ(got, ModMul(a, b, q)) << a << " " << b;
  }
  EXPECT_EQ(m->FromMontgomery(m->Mul(m->ToMontgomery(q - 1),
                                     m->ToMontgomery(q - 1))),
            1);
}

INSTANTIATE_TEST_SUITE_P(WordSizes, MontgomeryOracleTest,
                         ::testing::Values(17, 24, 28, 31, 32));

}  // namespace
}  // namespace hevec
