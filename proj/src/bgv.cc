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

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "boost/multiprecision/cpp_int.hpp"
#include "hevec/automorphism.h"
#include "hevec/ntt.h"
#include "hevec/vector_ops.h"

namespace hevec {
namespace {

using BigInt = boost::multiprecision::cpp_int;

ResidueVector MakeVector(std::vector<Word> coeffs, const PrimeModulus& m,
                         Domain domain) {
  return ResidueVector::Create(std::move(coeffs), m, domain).value();
}

// Reduces signed integer coefficients modulo each of the first `level`
// moduli and transforms to the NTT domain.
RnsPoly SignedToNtt(const std::vector<int64_t>& coeffs, const RnsBasis& basis,
                    size_t level) {
  RnsPoly out;
  for (size_t j = 0; j < level; ++j) {
    const PrimeModulus& m = basis[j];
    const int64_t q = m.q;
    std::vector<Word> v(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) {
      int64_t r = coeffs[i] % q;
      v[i] = static_cast<Word>(r < 0 ? r + q : r);
    }
    ForwardNttInPlace(v, m);
    out.residues.push_back(MakeVector(std::move(v), m, Domain::kNtt));
  }
  return out;
}

RnsPoly PolyAdd(const RnsPoly& x, const RnsPoly& y) {
  RnsPoly out;
  for (size_t j = 0; j < x.level(); ++j) {
    const ResidueVector& a = x.residues[j];
    out.residues.push_back(MakeVector(
        VecAdd(a.coeffs(), y.residues[j].coeffs(), a.q()), a.modulus(),
        a.domain()));
  }
  return out;
}

RnsPoly PolyMul(const RnsPoly& x, const RnsPoly& y) {
  RnsPoly out;
  for (size_t j = 0; j < x.level(); ++j) {
    const ResidueVector& a = x.residues[j];
    out.residues.push_back(MakeVector(
        VecMul(a.coeffs(), y.residues[j].coeffs(), a.q()), a.modulus(),
        a.domain()));
  }
  return out;
}

RnsPoly PolyAutomorphism(const RnsPoly& x, uint64_t k) {
  RnsPoly out;
  for (const ResidueVector& a : x.residues) {
    out.residues.push_back(MakeVector(
        VecAutomorphism(a.coeffs(), k, a.q(), a.domain()), a.modulus(),
        a.domain()));
  }
  return out;
}

RnsPoly UniformPoly(const RnsBasis& basis, size_t level, size_t n,
                    Prng& prng) {
  RnsPoly out;
  for (size_t j = 0; j < level; ++j) {
    std::uniform_int_distribution<Word> dist(0, basis[j].q - 1);
    std::vector<Word> v(n);
    for (Word& x : v) x = dist(prng);
    out.residues.push_back(MakeVector(std::move(v), basis[j], Domain::kNtt));
  }
  return out;
}

std::vector<int64_t> SampleError(size_t n, double stddev, Prng& prng) {
  std::normal_distribution<double> normal(0.0, stddev);
  const double bound = 6.0 * stddev;
  std::vector<int64_t> e(n);
  for (int64_t& x : e) {
    double v;
    do {
      v = std::round(normal(prng));
    } while (std::fabs(v) > bound);
    x = static_cast<int64_t>(v);
  }
  return e;
}

absl::Status CheckSameShape(const Ciphertext& x, const Ciphertext& y) {
  if (x.level != y.level) {
    return absl::InvalidArgumentError(absl::StrCat(
        "ciphertext levels differ: ", x.level, " vs ", y.level));
  }
  return absl::OkStatus();
}

// b - a*s lifted to integers in (-Q/2, Q/2].
std::vector<BigInt> LiftPhase(const BgvParams& params, const Ciphertext& ct,
                              const SecretKey& sk) {
  const size_t level = ct.level;
  const size_t n = params.n;
  std::vector<std::vector<Word>> residues(level);
  BigInt q_big = 1;
  for (size_t j = 0; j < level; ++j) {
    const PrimeModulus& m = params.basis[j];
    std::vector<Word> as = VecMul(ct.a.residues[j].coeffs(),
                                  sk.ntt.residues[j].coeffs(), m.q);
    std::vector<Word> phase(n);
    for (size_t i = 0; i < n; ++i) {
      phase[i] = ModSub(ct.b.residues[j][i], as[i], m.q);
    }
    InverseNttInPlace(phase, m);
    residues[j] = std::move(phase);
    q_big *= m.q;
  }
  std::vector<BigInt> q_hat(level);
  std::vector<Word> q_hat_inv(level);
  for (size_t j = 0; j < level; ++j) {
    const Word q = params.basis[j].q;
    q_hat[j] = q_big / q;
    q_hat_inv[j] = ModInv(static_cast<Word>(q_hat[j] % q), q);
  }
  const BigInt half = q_big / 2;
  std::vector<BigInt> out(n);
  for (size_t i = 0; i < n; ++i) {
    BigInt x = 0;
    for (size_t j = 0; j < level; ++j) {
      const Word q = params.basis[j].q;
      x += q_hat[j] * ModMul(residues[j][i], q_hat_inv[j], q);
    }
    x %= q_big;
    if (x > half) x -= q_big;
    out[i] = std::move(x);
  }
  return out;
}

Word CenteredModT(const BigInt& x, Word t) {
  BigInt r = x % t;
  if (r < 0) r += t;
  return static_cast<Word>(r);
}

}  // namespace

absl::Status BgvParams::Validate() const {
  if (n < 2 || (n & (n - 1)) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("ring dimension ", n, " is not a power of two"));
  }
  if (basis.size() == 0) {
    return absl::InvalidArgumentError("empty modulus basis");
  }
  if (t < 2) return absl::InvalidArgumentError("plaintext modulus below 2");
  for (size_t j = 0; j < basis.size(); ++j) {
    const PrimeModulus& m = basis[j];
    if (m.n_max % n != 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "modulus ", m.q, " does not support N=", n));
    }
    if (t >= m.q || m.q % t == 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "plaintext modulus ", t, " not coprime to and below ", m.q));
    }
    for (size_t i = 0; i < j; ++i) {
      if (basis[i].q == m.q) {
        return absl::InvalidArgumentError(
            absl::StrCat("modulus ", m.q, " repeated"));
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<BgvParams> BgvParams::Create(size_t n, size_t levels, int bits,
                                            Word t, uint64_t seed) {
  absl::StatusOr<RnsBasis> basis = GenerateModuli(n, levels, bits, seed);
  if (!basis.ok()) return basis.status();
  BgvParams params;
  params.n = n;
  params.basis = *std::move(basis);
  params.t = t;
  params.seed = seed;
  if (auto s = params.Validate(); !s.ok()) return s;
  return params;
}

std::optional<std::string> SecurityWarning(const BgvParams& params) {
  // Largest log2(Q) for 128-bit security with ternary secrets.
  static constexpr std::pair<size_t, double> kBounds[] = {
      {1024, 27},   {2048, 54},    {4096, 109},
      {8192, 218},  {16384, 438},  {32768, 881}};
  double log_q = 0;
  for (const PrimeModulus& m : params.basis.moduli) log_q += std::log2(m.q);
  double bound = 0;
  for (const auto& [n, b] : kBounds) {
    if (params.n >= n) bound = b;
  }
  if (log_q <= bound) return std::nullopt;
  return absl::StrCat("N=", params.n, " with log2(Q)=",
                      static_cast<int>(std::ceil(log_q)),
                      " is below 128-bit security guidance (max log2(Q) ",
                      static_cast<int>(bound), ")");
}

std::string HintTarget::ToString() const {
  if (kind == Kind::kRelinearize) return "relin";
  return absl::StrCat("aut", k);
}

int64_t KeySwitchHintBytes(size_t level, size_t n, int word_bits) {
  return 2 * static_cast<int64_t>(level * level * n) * (word_bits / 8);
}

int64_t KeySwitchHint::ByteSize(int word_bits) const {
  if (ksh0.empty() || ksh0[0].empty()) return 0;
  return KeySwitchHintBytes(level, ksh0[0][0].n(), word_bits);
}

SecretKey KeyGen(const BgvParams& params) {
  Prng prng(params.seed ^ 0x5ec7e7c0ffeeULL);
  std::uniform_int_distribution<int> dist(-1, 1);
  SecretKey sk;
  sk.coeffs.resize(params.n);
  std::vector<int64_t> wide(params.n);
  for (size_t i = 0; i < params.n; ++i) {
    sk.coeffs[i] = static_cast<int8_t>(dist(prng));
    wide[i] = sk.coeffs[i];
  }
  sk.ntt = SignedToNtt(wide, params.basis, params.max_level());
  return sk;
}

absl::StatusOr<Ciphertext> Encrypt(const BgvParams& params, const Plaintext& m,
                                   const SecretKey& sk, size_t level,
                                   Prng& prng, bool zero_error) {
  if (level < 1 || level > params.max_level()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "level ", level, " outside [1, ", params.max_level(), "]"));
  }
  if (m.coeffs.size() != params.n) {
    return absl::InvalidArgumentError("plaintext length differs from N");
  }
  std::vector<int64_t> noisy(params.n, 0);
  if (!zero_error) noisy = SampleError(params.n, params.error_stddev, prng);
  for (size_t i = 0; i < params.n; ++i) {
    if (m.coeffs[i] >= params.t) {
      return absl::InvalidArgumentError("plaintext coefficient not below t");
    }
    noisy[i] = noisy[i] * params.t + m.coeffs[i];
  }
  Ciphertext ct;
  ct.level = level;
  ct.a = UniformPoly(params.basis, level, params.n, prng);
  RnsPoly s = sk.ntt;
  s.residues.resize(level);
  ct.b = PolyAdd(PolyMul(ct.a, s), SignedToNtt(noisy, params.basis, level));
  ct.origin = CiphertextOrigin::kFresh;
  return ct;
}

absl::StatusOr<Plaintext> Decrypt(const BgvParams& params,
                                  const Ciphertext& ct, const SecretKey& sk) {
  if (ct.level < 1 || ct.level > params.max_level()) {
    return absl::InvalidArgumentError("ciphertext level out of range");
  }
  std::vector<BigInt> phase = LiftPhase(params, ct, sk);
  Plaintext m;
  m.coeffs.resize(params.n);
  for (size_t i = 0; i < params.n; ++i) {
    m.coeffs[i] = CenteredModT(phase[i], params.t);
  }
  return m;
}

double Noise(const BgvParams& params, const Ciphertext& ct,
             const SecretKey& sk, const Plaintext& expected) {
  std::vector<BigInt> phase = LiftPhase(params, ct, sk);
  BigInt worst = 0;
  for (size_t i = 0; i < params.n; ++i) {
    BigInt d = phase[i] - expected.coeffs[i];
    if (d < 0) d = -d;
    if (d > worst) worst = d;
  }
  return worst.convert_to<double>();
}

absl::StatusOr<Ciphertext> HomAdd(const Ciphertext& ct0,
                                  const Ciphertext& ct1) {
  if (auto s = CheckSameShape(ct0, ct1); !s.ok()) return s;
  Ciphertext out;
  out.level = ct0.level;
  out.a = PolyAdd(ct0.a, ct1.a);
  out.b = PolyAdd(ct0.b, ct1.b);
  out.origin = CiphertextOrigin::kDerived;
  return out;
}

absl::StatusOr<KeySwitchOutput> KeySwitch(const BgvParams& params,
                                          const RnsPoly& x,
                                          const KeySwitchHint& hint) {
  const size_t level = x.level();
  if (hint.level != level) {
    return absl::InvalidArgumentError(absl::StrCat(
        "hint level ", hint.level, " does not match operand level ", level));
  }
  const size_t n = params.n;
  std::vector<std::vector<Word>> y(level);
  for (size_t i = 0; i < level; ++i) {
    y[i] = VecIntt(x.residues[i].coeffs(), params.basis[i]);
  }
  std::vector<std::vector<Word>> u0(level, std::vector<Word>(n, 0));
  std::vector<std::vector<Word>> u1(level, std::vector<Word>(n, 0));
  for (size_t i = 0; i < level; ++i) {
    for (size_t j = 0; j < level; ++j) {
      const PrimeModulus& qj = params.basis[j];
      std::vector<Word> xqj =
          i == j ? std::vector<Word>(x.residues[i].coeffs().begin(),
                                     x.residues[i].coeffs().end())
                 : VecNtt(y[i], qj);
      u0[j] = VecAdd(u0[j], VecMul(xqj, hint.ksh0[i][j].coeffs(), qj.q), qj.q);
      u1[j] = VecAdd(u1[j], VecMul(xqj, hint.ksh1[i][j].coeffs(), qj.q), qj.q);
    }
  }
  KeySwitchOutput out;
  for (size_t j = 0; j < level; ++j) {
    out.u0.residues.push_back(
        MakeVector(std::move(u0[j]), params.basis[j], Domain::kNtt));
    out.u1.residues.push_back(
        MakeVector(std::move(u1[j]), params.basis[j], Domain::kNtt));
  }
  return out;
}

std::vector<int64_t> HintSource(const SecretKey& sk, const HintTarget& target,
                                const BgvParams& params) {
  const size_t n = params.n;
  std::vector<int64_t> out(n, 0);
  if (target.kind == HintTarget::Kind::kRelinearize) {
    for (size_t i = 0; i < n; ++i) {
      if (sk.coeffs[i] == 0) continue;
      for (size_t j = 0; j < n; ++j) {
        const int64_t p = int64_t{sk.coeffs[i]} * sk.coeffs[j];
        if (i + j < n) {
          out[i + j] += p;
        } else {
          out[i + j - n] -= p;
        }
      }
    }
    return out;
  }
  for (size_t i = 0; i < n; ++i) {
    const size_t dest = AutomorphismDestination(i, target.k, n,
                                                Domain::kCoefficient);
    const bool negated = (i * target.k) % (2 * n) >= n;
    out[dest] = negated ? sk.coeffs[i] : -int64_t{sk.coeffs[i]};
  }
  return out;
}

absl::StatusOr<KeySwitchHint> GenerateHint(const BgvParams& params,
                                           const SecretKey& sk,
                                           const HintTarget& target,
                                           size_t level, Prng& prng) {
  if (level < 1 || level > params.max_level()) {
    return absl::InvalidArgumentError("hint level out of range");
  }
  if (target.kind == HintTarget::Kind::kAutomorphism) {
    if (auto s = ValidateGaloisIndex(target.k, params.n); !s.ok()) return s;
  }
  const std::vector<int64_t> source = HintSource(sk, target, params);
  KeySwitchHint hint;
  hint.target = target;
  hint.level = level;
  hint.ksh0.resize(level);
  hint.ksh1.resize(level);
  for (size_t i = 0; i < level; ++i) {
    std::vector<int64_t> e = SampleError(params.n, params.error_stddev, prng);
    std::vector<int64_t> plain = e, with_source = e;
    for (size_t c = 0; c < params.n; ++c) {
      plain[c] *= params.t;
      with_source[c] = plain[c] + source[c];
    }
    for (size_t j = 0; j < level; ++j) {
      const PrimeModulus& qj = params.basis[j];
      RnsBasis single;
      single.moduli = {qj};
      RnsPoly a = UniformPoly(single, 1, params.n, prng);
      RnsPoly body = SignedToNtt(i == j ? with_source : plain, single, 1);
      std::vector<Word> b =
          VecAdd(VecMul(a.residues[0].coeffs(), sk.ntt.residues[j].coeffs(),
                        qj.q),
                 body.residues[0].coeffs(), qj.q);
      hint.ksh0[i].push_back(MakeVector(std::move(b), qj, Domain::kNtt));
      hint.ksh1[i].push_back(std::move(a.residues[0]));
    }
  }
  return hint;
}

absl::StatusOr<Ciphertext> HomMul(const BgvParams& params,
                                  const Ciphertext& ct0,
                                  const Ciphertext& ct1,
                                  const KeySwitchHint& hint) {
  if (auto s = CheckSameShape(ct0, ct1); !s.ok()) return s;
  if (!(hint.target == HintTarget::Relinearize())) {
    return absl::InvalidArgumentError("multiplication needs a relin hint");
  }
  RnsPoly l2 = PolyMul(ct0.a, ct1.a);
  RnsPoly l1 = PolyAdd(PolyMul(ct0.a, ct1.b), PolyMul(ct1.a, ct0.b));
  RnsPoly l0 = PolyMul(ct0.b, ct1.b);
  absl::StatusOr<KeySwitchOutput> u = KeySwitch(params, l2, hint);
  if (!u.ok()) return u.status();
  Ciphertext out;
  out.level = ct0.level;
  out.a = PolyAdd(l1, u->u1);
  out.b = PolyAdd(l0, u->u0);
  out.origin = CiphertextOrigin::kDerived;
  return out;
}

absl::StatusOr<Ciphertext> Rotate(const BgvParams& params,
                                  const Ciphertext& ct, uint64_t k,
                                  const KeySwitchHint& hint) {
  if (auto s = ValidateGaloisIndex(k, params.n); !s.ok()) return s;
  if (!(hint.target == HintTarget::Automorphism(k))) {
    return absl::InvalidArgumentError(absl::StrCat(
        "hint ", hint.target.ToString(), " does not match automorphism ", k));
  }
  RnsPoly a = PolyAutomorphism(ct.a, k);
  RnsPoly b = PolyAutomorphism(ct.b, k);
  absl::StatusOr<KeySwitchOutput> u = KeySwitch(params, a, hint);
  if (!u.ok()) return u.status();
  Ciphertext out;
  out.level = ct.level;
  out.a = std::move(u->u1);
  out.b = PolyAdd(b, u->u0);
  out.origin = CiphertextOrigin::kDerived;
  return out;
}

ModSwitchConstants GetModSwitchConstants(const BgvParams& params,
                                         size_t level) {
  ModSwitchConstants c;
  const Word t = params.t;
  c.ql = params.basis[level - 1].q;
  c.neg_ql_inv_mod_t = ModNeg(ModInv(c.ql % t, t), t);
  // Centered representative of q_L mod t.
  int64_t ql_t = c.ql % t;
  if (ql_t > static_cast<int64_t>(t / 2)) ql_t -= t;
  for (size_t j = 0; j + 1 < level; ++j) {
    const Word q = params.basis[j].q;
    c.ql_mod_qj.push_back(c.ql % q);
    const Word corr =
        static_cast<Word>(ql_t < 0 ? q - static_cast<Word>(-ql_t) : ql_t);
    const Word s = ModMul(ModInv(c.ql % q, q), corr, q);
    c.scale.push_back(s);
    c.neg_scale.push_back(ModNeg(s, q));
  }
  return c;
}

absl::StatusOr<Ciphertext> ModSwitch(const BgvParams& params,
                                     const Ciphertext& ct) {
  if (ct.level < 2) {
    return absl::FailedPreconditionError("cannot modulus-switch at level 1");
  }
  const size_t level = ct.level;
  const ModSwitchConstants c = GetModSwitchConstants(params, level);
  const PrimeModulus& ql = params.basis[level - 1];
  auto switch_poly = [&](const RnsPoly& poly) {
    std::vector<Word> last = VecIntt(poly.residues[level - 1].coeffs(), ql);
    std::vector<Word> k = VecMulScalar(last, c.neg_ql_inv_mod_t, params.t);
    RnsPoly out;
    for (size_t j = 0; j + 1 < level; ++j) {
      const PrimeModulus& qj = params.basis[j];
      std::vector<Word> delta = VecNtt(
          VecAdd(VecMulScalar(k, c.ql_mod_qj[j], qj.q), last, qj.q), qj);
      std::vector<Word> r =
          VecAdd(VecMulScalar(poly.residues[j].coeffs(), c.scale[j], qj.q),
                 VecMulScalar(delta, c.neg_scale[j], qj.q), qj.q);
      out.residues.push_back(MakeVector(std::move(r), qj, Domain::kNtt));
    }
    return out;
  };
  Ciphertext out;
  out.level = level - 1;
  out.a = switch_poly(ct.a);
  out.b = switch_poly(ct.b);
  out.origin = CiphertextOrigin::kDerived;
  return out;
}

Plaintext PlaintextAdd(const Plaintext& a, const Plaintext& b, Word t) {
  Plaintext out;
  out.coeffs.resize(a.coeffs.size());
  for (size_t i = 0; i < a.coeffs.size(); ++i) {
    out.coeffs[i] = ModAdd(a.coeffs[i], b.coeffs[i], t);
  }
  return out;
}

Plaintext PlaintextMul(const Plaintext& a, const Plaintext& b, Word t) {
  return {NegacyclicMulSchoolbook(a.coeffs, b.coeffs, t)};
}

Plaintext PlaintextAutomorphism(const Plaintext& a, uint64_t k, Word t) {
  return {ApplyAutomorphism(a.coeffs, t, k, Domain::kCoefficient)};
}

Plaintext RandomPlaintext(size_t n, Word t, Prng& prng) {
  std::uniform_int_distribution<Word> dist(0, t - 1);
  Plaintext m;
  m.coeffs.resize(n);
  for (Word& x : m.coeffs) x = dist(prng);
  return m;
}

}  // namespace hevec
