/*
 * Copyright 2026 The kapre Authors.
 *
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

#include "tamper.hpp"

#include <stdexcept>

#include "kapre/errors.hpp"
#include "oracle.hpp"

namespace kapre::testing {
namespace {

SourceElement random_element(RandomSource& rng) {
  return SourceElement::from_exponent(Scalar::random_nonzero(rng));
}

void mutate_element(SourceElement& e, std::uint32_t variant, RandomSource& rng) {
  if (variant % 2 == 0) {
    SourceElement r;
    do {
      r = random_element(rng);
    } while (r == e);
    e = r;
  } else {
    e *= random_element(rng);
  }
}

void mutate_bytes(Bytes& b, std::uint32_t variant, RandomSource& rng) {
  const std::size_t pos = random_between(rng, 0, static_cast<std::uint32_t>(b.size() - 1));
  if (variant % 2 == 0) {
    b[pos] ^= static_cast<std::uint8_t>(1u << random_between(rng, 0, 7));
  } else {
    b[pos] ^= static_cast<std::uint8_t>(random_between(rng, 1, 255));
  }
}

void mutate_scalar(Scalar& s, RandomSource& rng) { s = s + Scalar::random_nonzero(rng); }

void mutate_target(TargetElement& t, RandomSource& rng) {
  const TargetElement base = pair(SourceElement::base(), SourceElement::base());
  t = t * base.pow(Scalar::random_nonzero(rng));
}

}  // namespace

std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::kVerify2: return "verify2";
    case Stage::kDec2Tag: return "dec2-tag";
    case Stage::kDec1Equation: return "level1-equation";
    case Stage::kDec1Tag: return "dec1-tag";
    case Stage::kAccepted: return "accepted";
  }
  return "?";
}

Stage documented_stage_level2(std::size_t part) {
  if (part <= 6) return Stage::kVerify2;
  if (part == 7) return Stage::kDec1Equation;
  return Stage::kDec2Tag;
}

Stage documented_stage_level1(std::size_t part) {
  switch (part) {
    case 0: case 1: case 3: case 4: return Stage::kDec1Equation;
    default: return Stage::kDec1Tag;
  }
}

void mutate_level2(Level2Ciphertext& c, std::size_t part, std::uint32_t variant,
                   RandomSource& rng) {
  switch (part) {
    case 0: mutate_scalar(c.k, rng); break;
    case 1: mutate_element(c.c1, variant, rng); break;
    case 2: mutate_element(c.c2, variant, rng); break;
    case 3: mutate_element(c.c3, variant, rng); break;
    case 4: mutate_element(c.c4, variant, rng); break;
    case 5: mutate_bytes(c.c5, variant, rng); break;
    case 6: mutate_element(c.c6, variant, rng); break;
    case 7: mutate_element(c.c7, variant, rng); break;
    case 8: mutate_element(c.c8, variant, rng); break;
    case 9: mutate_bytes(c.c9, variant, rng); break;
    default: throw std::out_of_range("level-2 component");
  }
}

void mutate_level1(Level1Ciphertext& c, std::size_t part, std::uint32_t variant,
                   RandomSource& rng) {
  switch (part) {
    case 0: mutate_scalar(c.k, rng); break;
    case 1: mutate_element(c.c1, variant, rng); break;
    case 2: mutate_target(c.c2, rng); break;
    case 3: mutate_bytes(c.c3, variant, rng); break;
    case 4: mutate_element(c.c4, variant, rng); break;
    case 5: mutate_element(c.c5, variant, rng); break;
    case 6: mutate_bytes(c.c6, variant, rng); break;
    default: throw std::out_of_range("level-1 component");
  }
}

Scenario make_scenario(std::uint32_t n, const TypeSet& types, std::uint64_t seed) {
  SeededRandom rng(seed, "scenario");
  Scenario s;
  s.par = setup(PairingContext::bls12_381(), 32, rng);
  s.owner = keygen(s.par, n, rng);
  s.delegatee = keygen(s.par, n, rng);
  s.types = types;
  s.rk = rekeygen(s.par, types, s.owner.sk, s.owner.pk, s.delegatee.pk);
  return s;
}

Stage first_rejection_level2(const Scenario& s, const Level2Ciphertext& c,
                             RandomSource& rng) {
  if (!verify2(s.par, s.owner.pk, c, rng)) return Stage::kVerify2;
  try {
    dec2(s.par, s.owner.sk, s.owner.pk, c, rng);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTagMismatch) return Stage::kDec2Tag;
    return Stage::kVerify2;
  }
  Level1Ciphertext c1;
  try {
    c1 = reenc(s.par, s.owner.pk, s.rk, c, rng);
  } catch (const Error&) {
    return Stage::kVerify2;
  }
  return first_rejection_level1(s, c1);
}

Stage first_rejection_level1(const Scenario& s, const Level1Ciphertext& c) {
  try {
    dec1(s.par, s.delegatee.sk, c);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTagMismatch) return Stage::kDec1Tag;
    if (e.code() == ErrorCode::kInvalidCiphertext) return Stage::kDec1Equation;
    throw;
  }
  return Stage::kAccepted;
}

OpenedLevel1 open_level1(const Params& par, const SecretKey& sk, const Level1Ciphertext& c) {
  OpenedLevel1 out;
  out.equation = verify1(par, c);
  const TargetElement key = c.c2.pow(sk.a1.inverse());
  out.tag = bytes_equal(mask_bytes(key, c.c5, par.message_len), c.c6);
  out.plaintext = xor_bytes(mask_bytes(key, c.c1, par.message_len), c.c3);
  return out;
}

}  // namespace kapre::testing
