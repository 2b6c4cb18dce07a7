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

#include "hevec/dsl.h"

#include <set>

#include "gtest/gtest.h"
#include "hevec/automorphism.h"
#include "hevec/evaluator.h"
#include "test_util.h"

namespace hevec {
namespace {

int CountKind(const HomProgram& p, OpKind kind) {
  int c = 0;
  for (const HomOpNode& node : p.nodes) c += node.kind == kind;
  return c;
}

TEST(MatVecTest, FullSizeHintCount) {
  HomProgram p = BuildMatVec(4, 16384, 16).value();
  std::vector<HintId> hints = p.DistinctHints();
  EXPECT_EQ(hints.size(), 15);
  EXPECT_EQ(hints.size() * KeySwitchHintBytes(15, 16384), 15 * 29491200);
  // Hints are used at level 15 after the switch before the products.
  for (const HintId& h : hints) EXPECT_EQ(h.level, 15);
  EXPECT_EQ(static_cast<int64_t>(hints.size()) * KeySwitchHintBytes(16, 16384),
            int64_t{480} * 1024 * 1024);
  EXPECT_EQ(CountKind(p, OpKind::kMul), 4);
  EXPECT_EQ(CountKind(p, OpKind::kRotate), 4 * 14);
  EXPECT_EQ(CountKind(p, OpKind::kAdd), 4 * 14);
}

TEST(MatVecTest, SmallestInstance) {
  HomProgram p = BuildMatVec(1, 4, 3).value();
  EXPECT_EQ(CountKind(p, OpKind::kMul), 1);
  EXPECT_EQ(CountKind(p, OpKind::kRotate), 2);
  EXPECT_EQ(CountKind(p, OpKind::kAdd), 2);
  EXPECT_EQ(CountKind(p, OpKind::kModSwitch), 2);
}

TEST(ProgramBuilderTest, MulChainUsesUpTheLevels) {
  const size_t levels = 5;
  ProgramBuilder ok(16);
  int x = ok.Input(levels);
  for (size_t i = 0; i + 1 < levels; ++i) x = ok.Mul(x, x);
  ok.Output(x);
  absl::StatusOr<HomProgram> p = ok.Build();
  ASSERT_TRUE(p.ok()) << p.status();
  EXPECT_EQ(p->nodes[x].level, 1);

  ProgramBuilder too_deep(16);
  int y = too_deep.Input(levels);
  for (size_t i = 0; i < levels; ++i) y = too_deep.Mul(y, y);
  too_deep.Output(y);
  EXPECT_FALSE(too_deep.Build().ok());
}

TEST(ProgramBuilderTest, RotationIndicesAndHints) {
  ProgramBuilder b(64);
  int x = b.Input(3);
  int r1 = b.Rotate(x, 1), r2 = b.Rotate(x, 2), r1b = b.Rotate(x, 1);
  b.Output(b.Add(b.Add(r1, r2), r1b));
  HomProgram p = b.Build().value();
  EXPECT_NE(p.nodes[r1].galois, p.nodes[r2].galois);
  EXPECT_EQ(p.nodes[r1].galois, 5);
  EXPECT_EQ(p.nodes[r2].galois, 25);
  EXPECT_EQ(*p.nodes[r1].hint, *p.nodes[r1b].hint);
  EXPECT_EQ(p.DistinctHints().size(), 2);
  std::set<uint64_t> ks;
  for (int r = 0; r < 32; ++r) ks.insert(RotationIndex(r, 64));
  EXPECT_EQ(ks.size(), 32);
}

TEST(ProgramBuilderTest, AlignsLevelsWithMemoizedSwitches) {
  ProgramBuilder b(16);
  int hi = b.Input(4), lo = b.Input(2);
  int s1 = b.Add(hi, lo);
  int s2 = b.Add(lo, hi);
  b.Output(s1);
  b.Output(s2);
  HomProgram p = b.Build().value();
  EXPECT_EQ(CountKind(p, OpKind::kModSwitch), 2);
  EXPECT_EQ(p.nodes[s1].level, 2);
  EXPECT_EQ(p.nodes[s1].operands[0], p.nodes[s2].operands[1]);
}

TEST(ProgramBuilderTest, HintCountFormula) {
  absl::StatusOr<HomProgram> p =
      testing_util::RandomProgram(64, 6, 4, 30, 5);
  ASSERT_TRUE(p.ok());
  std::set<size_t> mul_levels;
  std::set<std::pair<uint64_t, size_t>> rotations;
  for (const HomOpNode& node : p->nodes) {
    if (node.kind == OpKind::kMul) mul_levels.insert(node.level);
    if (node.kind == OpKind::kRotate) rotations.insert({node.galois, node.level});
  }
  EXPECT_EQ(p->DistinctHints().size(), mul_levels.size() + rotations.size());
}

TEST(ProgramBuilderTest, StickyErrors) {
  ProgramBuilder b(16);
  int x = b.Input(2);
  b.Add(x, 7);
  b.Rotate(x, 1);
  EXPECT_FALSE(b.Build().ok());
  EXPECT_FALSE(ProgramBuilder(12).Build().ok());
  ProgramBuilder c(16);
  c.MulPlain(c.Input(2), Plaintext{std::vector<Word>(8, 0)});
  EXPECT_FALSE(c.Build().ok());
}

TEST(ProgramFormatTest, RoundTrip) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    HomProgram p = testing_util::RandomProgram(16, 5, 3, 25, seed).value();
    std::string text = FormatProgram(p);
    absl::StatusOr<HomProgram> back = ParseProgram(text);
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(FormatProgram(*back), text);
  }
}

TEST(ProgramFormatTest, ReportsLineNumbers) {
  absl::StatusOr<HomProgram> p =
      ParseProgram("program n=16 t=257\nnode 0 input level=2\nnode 1 frob 0\n");
  ASSERT_FALSE(p.ok());
  EXPECT_NE(p.status().message().find("line 3"), std::string::npos);
  EXPECT_FALSE(ParseProgram("node 0 input level=2\n").ok());
  EXPECT_FALSE(ParseProgram("program n=16 t=257\nnode 0 add 1 2 level=2\n").ok());
}

TEST(EvalPlainTest, IdentityAndArity) {
  ProgramBuilder b(8);
  int x = b.Input(2);
  b.Output(x);
  HomProgram p = b.Build().value();
  Plaintext m{{1, 2, 3, 4, 5, 6, 7, 8}};
  EXPECT_EQ(EvalPlain(p, {m}).value()[0], m);
  EXPECT_FALSE(EvalPlain(p, {}).ok());
}

TEST(EvalPlainTest, MatVecOnUnitVectors) {
  // With M_i = 1 and V = e_0, every product is 1; summing sigma_{5^(2^s)}
  // images of the constant 1 leaves N at the constant coefficient.
  const size_t n = 16;
  HomProgram p = BuildMatVec(2, n, 3).value();
  Plaintext one{std::vector<Word>(n, 0)};
  one.coeffs[0] = 1;
  std::vector<Plaintext> out = EvalPlain(p, {one, one, one}).value();
  for (const Plaintext& o : out) {
    EXPECT_EQ(o.coeffs[0], n);
    for (size_t i = 1; i < n; ++i) EXPECT_EQ(o.coeffs[i], 0);
  }
  // A monomial x: the inner sum adds its images under sigma_k for every k in
  // the subgroup generated by 5.
  Plaintext x{std::vector<Word>(n, 0)};
  x.coeffs[1] = 1;
  std::vector<Word> expected(n, 0);
  for (int r = 0; r < static_cast<int>(n); ++r) {
    uint64_t k = RotationIndex(r, n);
    size_t dest = (k % n);
    bool neg = (k % (2 * n)) >= n;
    expected[dest] = (expected[dest] + (neg ? 256 : 1)) % 257;
  }
  std::vector<Plaintext> out2 = EvalPlain(p, {x, one, one}).value();
  EXPECT_EQ(out2[0].coeffs, expected);
}

class EncryptedEvalTest : public ::testing::Test {
 protected:
  void SetUp() override {
    params_ = BgvParams::Create(256, 6, 30, 257, 3).value();
    sk_ = KeyGen(params_);
  }
  BgvParams params_;
  SecretKey sk_;
  Prng prng_{17};
};

TEST_F(EncryptedEvalTest, RandomProgramsDecryptToPlainEvaluation) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    HomProgram p =
        testing_util::RandomProgram(params_.n, 6, 4, 20, seed).value();
    std::vector<Plaintext> plain;
    std::vector<Ciphertext> enc;
    for (int id : p.inputs) {
      plain.push_back(RandomPlaintext(params_.n, params_.t, prng_));
      enc.push_back(
          Encrypt(params_, plain.back(), sk_, p.nodes[id].level, prng_)
              .value());
    }
    HintSet hints = GenerateProgramHints(params_, sk_, p, prng_).value();
    std::vector<Ciphertext> out =
        EvaluateEncrypted(params_, p, enc, hints).value();
    std::vector<Plaintext> expected = EvalPlain(p, plain).value();
    for (size_t i = 0; i < out.size(); ++i) {
      EXPECT_EQ(Decrypt(params_, out[i], sk_).value(), expected[i])
          << "seed " << seed;
    }
  }
}

TEST_F(EncryptedEvalTest, MatVec) {
  HomProgram p = BuildMatVec(4, params_.n, 4).value();
  std::vector<Plaintext> plain;
  std::vector<Ciphertext> enc;
  for (size_t i = 0; i < p.inputs.size(); ++i) {
    plain.push_back(RandomPlaintext(params_.n, params_.t, prng_));
    enc.push_back(Encrypt(params_, plain.back(), sk_, 4, prng_).value());
  }
  HintSet hints = GenerateProgramHints(params_, sk_, p, prng_).value();
  EXPECT_EQ(hints.size(), 1 + 8);
  std::vector<Ciphertext> out =
      EvaluateEncrypted(params_, p, enc, hints).value();
  std::vector<Plaintext> expected = EvalPlain(p, plain).value();
  for (size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(Decrypt(params_, out[i], sk_).value(), expected[i]);
  }
  hints.erase(hints.begin());
  EXPECT_FALSE(EvaluateEncrypted(params_, p, enc, hints).ok());
}

}  // namespace
}  // namespace hevec
