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

#include "hevec/bgv.h"

#include <cstdlib>
#include <set>

#include "gtest/gtest.h"
#include "hevec/automorphism.h"
#include "hevec/vector_ops.h"

namespace hevec {
namespace {

// Independent plaintext-side oracle: a*b mod (x^N + 1, t) over int64.
Plaintext NegacyclicProductModT(const Plaintext& a, const Plaintext& b,
                                Word t) {
  const size_t n = a.coeffs.size();
  std::vector<int64_t> acc(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      int64_t p = int64_t{a.coeffs[i]} * b.coeffs[j];
      if (i + j < n) {
        acc[i + j] += p;
      } else {
        acc[i + j - n] -= p;
      }
    }
  }
  Plaintext out;
  for (int64_t v : acc) {
    int64_t r = v % t;
    out.coeffs.push_back(static_cast<Word>(r < 0 ? r + t : r));
  }
  return out;
}

class BgvTest : public ::testing::Test {
 protected:
  void SetUp() override {
    params_ = BgvParams::Create(1024, 6, 30, 257, 11).value();
    sk_ = KeyGen(params_);
  }

  Ciphertext Enc(const Plaintext& m, size_t level) {
    return Encrypt(params_, m, sk_, level, prng_).value();
  }
  Plaintext Dec(const Ciphertext& ct) {
    return Decrypt(params_, ct, sk_).value();
  }
  Plaintext Rand() { return RandomPlaintext(params_.n, params_.t, prng_); }
  KeySwitchHint Hint(HintTarget target, size_t level) {
    return GenerateHint(params_, sk_, target, level, prng_).value();
  }

  BgvParams params_;
  SecretKey sk_;
  Prng prng_{99};
};

TEST_F(BgvTest, KeyGenDeterministicTernaryAndSeedSensitive) {
  SecretKey again = KeyGen(params_);
  EXPECT_EQ(again.coeffs, sk_.coeffs);
  EXPECT_EQ(again.ntt, sk_.ntt);
  std::set<int> values;
  for (int8_t c : sk_.coeffs) values.insert(c);
  EXPECT_EQ(values, (std::set<int>{-1, 0, 1}));
  BgvParams other = params_;
  other.seed = 12;
  EXPECT_NE(KeyGen(other).coeffs, sk_.coeffs);
}

TEST_F(BgvTest, EncryptDecryptRoundTrip) {
  for (int i = 0; i < 5; ++i) {
    Plaintext m = Rand();
    for (size_t level : {1, 3, 6}) EXPECT_EQ(Dec(Enc(m, level)), m);
  }
  Plaintext zero{std::vector<Word>(params_.n, 0)};
  EXPECT_EQ(Dec(Enc(zero, 6)), zero);
}

TEST_F(BgvTest, EncryptRejectsBadInput) {
  Plaintext m = Rand();
  EXPECT_FALSE(Encrypt(params_, m, sk_, 7, prng_).ok());
  EXPECT_FALSE(Encrypt(params_, m, sk_, 0, prng_).ok());
  m.coeffs[0] = 300;
  EXPECT_FALSE(Encrypt(params_, m, sk_, 2, prng_).ok());
}

TEST_F(BgvTest, FreshNoiseBounds) {
  Plaintext m = Rand();
  Ciphertext ct = Enc(m, 6);
  const double bound = params_.t * 6 * params_.error_stddev;
  EXPECT_LE(Noise(params_, ct, sk_, m), bound);
  EXPECT_GT(Noise(params_, ct, sk_, m), 0);
  Ciphertext exact = Encrypt(params_, m, sk_, 6, prng_, true).value();
  EXPECT_EQ(Noise(params_, exact, sk_, m), 0);
  EXPECT_EQ(ct.origin, CiphertextOrigin::kFresh);
}

TEST_F(BgvTest, HomAddIsAdditive) {
  Plaintext m1 = Rand(), m2 = Rand(), m3 = Rand();
  Ciphertext sum =
      HomAdd(HomAdd(Enc(m1, 4), Enc(m2, 4)).value(), Enc(m3, 4)).value();
  EXPECT_EQ(Dec(sum), PlaintextAdd(PlaintextAdd(m1, m2, 257), m3, 257));
  EXPECT_EQ(sum.origin, CiphertextOrigin::kDerived);
  Ciphertext c1 = Enc(m1, 4), c2 = Enc(m2, 4);
  EXPECT_EQ(Dec(HomAdd(c1, c2).value()), Dec(HomAdd(c2, c1).value()));
  EXPECT_FALSE(HomAdd(Enc(m1, 4), Enc(m2, 3)).ok());
}

TEST_F(BgvTest, HomAddMatchesOracleOnManyPairs) {
  for (int i = 0; i < 100; ++i) {
    Plaintext a = Rand(), b = Rand();
    Plaintext expected;
    for (size_t c = 0; c < params_.n; ++c) {
      expected.coeffs.push_back((a.coeffs[c] + b.coeffs[c]) % params_.t);
    }
    ASSERT_EQ(Dec(HomAdd(Enc(a, 2), Enc(b, 2)).value()), expected);
  }
}

TEST_F(BgvTest, HomMulMatchesPlaintextProduct) {
  KeySwitchHint relin = Hint(HintTarget::Relinearize(), 6);
  Plaintext m0 = Rand(), m1 = Rand();
  Ciphertext prod = HomMul(params_, Enc(m0, 6), Enc(m1, 6), relin).value();
  EXPECT_EQ(Dec(prod), NegacyclicProductModT(m0, m1, params_.t));
  Plaintext one{std::vector<Word>(params_.n, 0)};
  one.coeffs[0] = 1;
  EXPECT_EQ(Dec(HomMul(params_, Enc(one, 6), Enc(m0, 6), relin).value()), m0);
}

TEST_F(BgvTest, MulNoiseDominatesAddNoise) {
  KeySwitchHint relin = Hint(HintTarget::Relinearize(), 6);
  Plaintext m0 = Rand(), m1 = Rand();
  Ciphertext c0 = Enc(m0, 6), c1 = Enc(m1, 6);
  double add_noise =
      Noise(params_, HomAdd(c0, c1).value(), sk_, PlaintextAdd(m0, m1, 257));
  Ciphertext prod = HomMul(params_, c0, c1, relin).value();
  // The phase of a product is m0*m1 + t*e with the product computed over
  // the integers, so measure against the lifted integer product.
  double mul_noise = Noise(params_, prod, sk_, Dec(prod));
  EXPECT_GT(mul_noise, 1000 * add_noise);
}

TEST_F(BgvTest, HomMulRejectsWrongHint) {
  KeySwitchHint rot = Hint(HintTarget::Automorphism(5), 6);
  KeySwitchHint relin3 = Hint(HintTarget::Relinearize(), 3);
  Plaintext m = Rand();
  EXPECT_FALSE(HomMul(params_, Enc(m, 6), Enc(m, 6), rot).ok());
  EXPECT_FALSE(HomMul(params_, Enc(m, 6), Enc(m, 6), relin3).ok());
  EXPECT_FALSE(HomMul(params_, Enc(m, 6), Enc(m, 5), relin3).ok());
}

// u0 - u1*s - x*s_from must be a small multiple of t modulo Q.
TEST_F(BgvTest, KeySwitchDecryptionIdentity) {
  for (HintTarget target : {HintTarget::Relinearize(),
                            HintTarget::Automorphism(5),
                            HintTarget::Automorphism(2 * 1024 - 1)}) {
    // One modulus leaves no headroom: the digit noise t*y*e exceeds q_1.
    for (size_t level : {2, 3, 6}) {
      KeySwitchHint hint = Hint(target, level);
      Ciphertext carrier = Enc(Rand(), level);
      const RnsPoly& x = carrier.a;  // uniform
      KeySwitchOutput u = KeySwitch(params_, x, hint).value();
      std::vector<int64_t> src = HintSource(sk_, target, params_);
      Ciphertext check;
      check.level = level;
      check.a = u.u1;
      for (size_t j = 0; j < level; ++j) {
        const PrimeModulus& m = params_.basis[j];
        std::vector<Word> s(params_.n);
        for (size_t i = 0; i < params_.n; ++i) {
          int64_t r = src[i] % int64_t{m.q};
          s[i] = static_cast<Word>(r < 0 ? r + m.q : r);
        }
        std::vector<Word> s_ntt = VecNtt(s, m);
        std::vector<Word> xs = VecMul(x.residues[j].coeffs(), s_ntt, m.q);
        std::vector<Word> b(params_.n);
        for (size_t i = 0; i < params_.n; ++i) {
          b[i] = ModSub(u.u0.residues[j][i], xs[i], m.q);
        }
        check.b.residues.push_back(
            ResidueVector::Create(b, m, Domain::kNtt).value());
      }
      Plaintext zero{std::vector<Word>(params_.n, 0)};
      EXPECT_EQ(Dec(check), zero) << target.ToString() << " " << level;
      double noise = Noise(params_, check, sk_, zero);
      // |sum_i y_i e_i| * t with y_i < q_i and |e_i| <= 6 sigma.
      double bound = params_.t * level * params_.n * double(1u << 30) * 19.2;
      EXPECT_LT(noise, bound);
    }
  }
}

TEST_F(BgvTest, KeySwitchRejectsLevelMismatch) {
  KeySwitchHint hint = Hint(HintTarget::Relinearize(), 3);
  EXPECT_FALSE(KeySwitch(params_, Enc(Rand(), 4).a, hint).ok());
}

TEST_F(BgvTest, HintSizesAndDistinctness) {
  KeySwitchHint h5 = Hint(HintTarget::Automorphism(5), 4);
  KeySwitchHint h25 = Hint(HintTarget::Automorphism(25), 4);
  EXPECT_EQ(h5.ByteSize(), 2 * 4 * 4 * 1024 * 4);
  EXPECT_EQ(h5.ksh0.size(), 4);
  EXPECT_EQ(h5.ksh0[0].size(), 4);
  EXPECT_NE(h5.ksh0[0][0], h25.ksh0[0][0]);
  EXPECT_FALSE(h5.target == h25.target);
  EXPECT_EQ(KeySwitchHintBytes(16, 16384), 33554432);
  EXPECT_FALSE(
      GenerateHint(params_, sk_, HintTarget::Automorphism(4), 2, prng_).ok());
}

TEST_F(BgvTest, RotateAppliesAutomorphism) {
  Plaintext m = Rand();
  KeySwitchHint h5 = Hint(HintTarget::Automorphism(5), 6);
  Ciphertext r = Rotate(params_, Enc(m, 6), 5, h5).value();
  Plaintext expected{ApplyAutomorphism(m.coeffs, 257, 5,
                                       Domain::kCoefficient)};
  EXPECT_EQ(Dec(r), expected);

  KeySwitchHint h1 = Hint(HintTarget::Automorphism(1), 6);
  EXPECT_EQ(Dec(Rotate(params_, Enc(m, 6), 1, h1).value()), m);

  const uint64_t k_inv = GaloisInverse(5, params_.n);
  KeySwitchHint hinv = Hint(HintTarget::Automorphism(k_inv), 6);
  EXPECT_EQ(Dec(Rotate(params_, r, k_inv, hinv).value()), m);
  EXPECT_FALSE(Rotate(params_, r, 25, h5).ok());
}

TEST_F(BgvTest, ModSwitchPreservesPlaintextAndShrinksNoise) {
  for (int trial = 0; trial < 5; ++trial) {
    Plaintext m = Rand();
    KeySwitchHint relin = Hint(HintTarget::Relinearize(), 3);
    Ciphertext ct = HomMul(params_, Enc(m, 3), Enc(m, 3), relin).value();
    Plaintext before = Dec(ct);
    Ciphertext sw = ModSwitch(params_, ct).value();
    EXPECT_EQ(sw.level, 2);
    EXPECT_EQ(Dec(sw), before);
    const double ql = params_.basis[2].q;
    int64_t corr = static_cast<int64_t>(params_.basis[2].q % 257);
    if (corr > 128) corr -= 257;
    const double noise_before = Noise(params_, ct, sk_, before);
    const double noise_after = Noise(params_, sw, sk_, before);
    // Rounding term: |delta_b - delta_a*s| / q_L < t * (1 + N).
    const double rounding = 257.0 * (1 + params_.n);
    EXPECT_LE(noise_after,
              std::abs(corr) * (noise_before / ql + rounding) + 257);
    EXPECT_LT(noise_after, noise_before / 1000);
  }
  EXPECT_FALSE(ModSwitch(params_, Enc(Rand(), 1)).ok());
}

TEST_F(BgvTest, ModSwitchDownToLevelOne) {
  Plaintext m = Rand();
  Ciphertext ct = Enc(m, 6);
  for (size_t level = 6; level > 1; --level) {
    ct = ModSwitch(params_, ct).value();
    EXPECT_EQ(ct.level, level - 1);
    EXPECT_EQ(Dec(ct), m);
  }
}

TEST(BgvParamsTest, ValidationAndWarning) {
  BgvParams p = BgvParams::Create(1024, 6, 30).value();
  EXPECT_TRUE(SecurityWarning(p).has_value());
  BgvParams big = BgvParams::Create(16384, 1, 30).value();
  EXPECT_FALSE(SecurityWarning(big).has_value());
  BgvParams bad = p;
  bad.t = bad.basis[0].q;
  EXPECT_FALSE(bad.Validate().ok());
  bad = p;
  bad.n = 4096;
  EXPECT_FALSE(bad.Validate().ok());
  bad = p;
  bad.basis.moduli[1] = bad.basis.moduli[0];
  EXPECT_FALSE(bad.Validate().ok());
}

}  // namespace
}  // namespace hevec
