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

#include "hevec/evaluator.h"

#include "absl/strings/str_cat.h"
#include "hevec/vector_ops.h"

namespace hevec {

absl::StatusOr<HintSet> GenerateProgramHints(const BgvParams& params,
                                             const SecretKey& sk,
                                             const HomProgram& program,
                                             Prng& prng) {
  HintSet hints;
  for (const HintId& id : program.DistinctHints()) {
    absl::StatusOr<KeySwitchHint> h =
        GenerateHint(params, sk, id.target, id.level, prng);
    if (!h.ok()) return h.status();
    hints.emplace(id, *std::move(h));
  }
  return hints;
}

RnsPoly EncodePlaintext(const BgvParams& params, const Plaintext& p,
                        size_t level) {
  RnsPoly out;
  for (size_t j = 0; j < level; ++j) {
    const PrimeModulus& m = params.basis[j];
    out.residues.push_back(
        ResidueVector::Create(VecNtt(p.coeffs, m), m, Domain::kNtt).value());
  }
  return out;
}

absl::StatusOr<std::vector<Ciphertext>> EvaluateEncrypted(
    const BgvParams& params, const HomProgram& program,
    const std::vector<Ciphertext>& inputs, const HintSet& hints) {
  if (program.n != params.n || program.t != params.t) {
    return absl::InvalidArgumentError("program and parameters disagree");
  }
  if (inputs.size() != program.inputs.size()) {
    return absl::InvalidArgumentError("wrong number of input ciphertexts");
  }
  std::vector<Ciphertext> values(program.nodes.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    const HomOpNode& node = program.nodes[program.inputs[i]];
    if (inputs[i].level != node.level) {
      return absl::InvalidArgumentError(absl::StrCat(
          "input ", i, " is at level ", inputs[i].level, ", expected ",
          node.level));
    }
    values[node.id] = inputs[i];
  }
  auto hint_for = [&](const HomOpNode& node)
      -> absl::StatusOr<const KeySwitchHint*> {
    auto it = hints.find(*node.hint);
    if (it == hints.end()) {
      return absl::NotFoundError(
          absl::StrCat("missing hint ", node.hint->ToString()));
    }
    return &it->second;
  };
  auto times_plain = [&](const Ciphertext& ct, const RnsPoly& p) {
    Ciphertext out = ct;
    for (size_t j = 0; j < ct.level; ++j) {
      const Word q = params.basis[j].q;
      auto mul = [&](const ResidueVector& v) {
        return ResidueVector::Create(
                   VecMul(v.coeffs(), p.residues[j].coeffs(), q), v.modulus(),
                   Domain::kNtt)
            .value();
      };
      out.a.residues[j] = mul(ct.a.residues[j]);
      out.b.residues[j] = mul(ct.b.residues[j]);
    }
    out.origin = CiphertextOrigin::kDerived;
    return out;
  };
  for (const HomOpNode& node : program.nodes) {
    const auto& ops = node.operands;
    absl::StatusOr<Ciphertext> r;
    switch (node.kind) {
      case OpKind::kInput:
        continue;
      case OpKind::kAdd:
        r = HomAdd(values[ops[0]], values[ops[1]]);
        break;
      case OpKind::kMul: {
        absl::StatusOr<const KeySwitchHint*> h = hint_for(node);
        if (!h.ok()) return h.status();
        r = HomMul(params, values[ops[0]], values[ops[1]], **h);
        break;
      }
      case OpKind::kRotate: {
        absl::StatusOr<const KeySwitchHint*> h = hint_for(node);
        if (!h.ok()) return h.status();
        r = Rotate(params, values[ops[0]], node.galois, **h);
        break;
      }
      case OpKind::kMulPlain:
        r = times_plain(values[ops[0]],
                        EncodePlaintext(params,
                                        program.constants[node.constant],
                                        node.level));
        break;
      case OpKind::kAddPlain: {
        Ciphertext ct = values[ops[0]];
        RnsPoly p = EncodePlaintext(params, program.constants[node.constant],
                                    node.level);
        for (size_t j = 0; j < ct.level; ++j) {
          const ResidueVector& b = ct.b.residues[j];
          ct.b.residues[j] =
              ResidueVector::Create(
                  VecAdd(b.coeffs(), p.residues[j].coeffs(), b.q()),
                  b.modulus(), Domain::kNtt)
                  .value();
        }
        ct.origin = CiphertextOrigin::kDerived;
        r = std::move(ct);
        break;
      }
      case OpKind::kModSwitch:
        r = ModSwitch(params, values[ops[0]]);
        break;
    }
    if (!r.ok()) {
      return absl::Status(r.status().code(),
                          absl::StrCat("node ", node.id, ": ",
                                       r.status().message()));
    }
    values[node.id] = *std::move(r);
  }
  std::vector<Ciphertext> out;
  for (int id : program.outputs) out.push_back(values[id]);
  return out;
}

}  // namespace hevec
