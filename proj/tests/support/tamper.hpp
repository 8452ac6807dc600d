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

#ifndef KAPRE_TESTS_SUPPORT_TAMPER_HPP_
#define KAPRE_TESTS_SUPPORT_TAMPER_HPP_

// Component mutation and the stage at which each mutation must be rejected.
//
// Level 2 (k, c1..c9):
//   k, c1..c6  verify2 (tag, key or type equation)
//   c7         level-1 equation after re-encryption (c7 becomes c4')
//   c8, c9     key-confirmation tag in dec2 (and again in dec1)
// Level 1 (k, c1'..c6'):
//   k, c1', c3', c4'  level-1 equation
//   c2', c5', c6'     key-confirmation tag

#include <array>
#include <cstdint>
#include <string_view>

#include "kapre/scheme.hpp"

namespace kapre::testing {

enum class Stage { kVerify2, kDec2Tag, kDec1Equation, kDec1Tag, kAccepted };

std::string_view stage_name(Stage s);

inline constexpr std::array<std::string_view, 10> kLevel2Parts = {
    "k", "c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9"};
inline constexpr std::array<std::string_view, 7> kLevel1Parts = {
    "k", "c1'", "c2'", "c3'", "c4'", "c5'", "c6'"};

Stage documented_stage_level2(std::size_t part);
Stage documented_stage_level1(std::size_t part);

/// Changes component `part`; `variant` alternates between replacement and
/// perturbation (bit flips for byte strings).
void mutate_level2(Level2Ciphertext& c, std::size_t part, std::uint32_t variant,
                   RandomSource& rng);
void mutate_level1(Level1Ciphertext& c, std::size_t part, std::uint32_t variant,
                   RandomSource& rng);

struct Scenario {
  Params par;
  KeyPair owner;
  KeyPair delegatee;
  TypeSet types;
  ReKey rk;
};

Scenario make_scenario(std::uint32_t n, const TypeSet& types, std::uint64_t seed);

/// Runs verify2, dec2 (owner), reenc and dec1 (delegatee) in order and
/// returns the first rejection, or kAccepted if dec1 returns any plaintext.
Stage first_rejection_level2(const Scenario& s, const Level2Ciphertext& c,
                             RandomSource& rng);
Stage first_rejection_level1(const Scenario& s, const Level1Ciphertext& c);

// dec1 with each gate evaluated separately instead of short-circuiting.
struct OpenedLevel1 {
  bool equation = false;  // level-1 equation over (c1', c3', c4')
  bool tag = false;       // H1(K, c5') == c6'
  Bytes plaintext;        // H1(K, c1') xor c3'
};

OpenedLevel1 open_level1(const Params& par, const SecretKey& sk, const Level1Ciphertext& c);

}  // namespace kapre::testing

#endif  // KAPRE_TESTS_SUPPORT_TAMPER_HPP_
