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

#ifndef KAPRE_TESTS_SUPPORT_ORACLE_HPP_
#define KAPRE_TESTS_SUPPORT_ORACLE_HPP_

// Reference computations that do not go through the library's own arithmetic:
// exponents mod p via OpenSSL BIGNUM, subgroup membership via scalar
// multiplication by the group order.

#include <cstdint>
#include <deque>
#include <vector>

#include <blst.h>

#include "kapre/pairing.hpp"
#include "kapre/random.hpp"

namespace kapre::testing {

/// Exponent arithmetic in Z_p on BIGNUMs.
struct ModP {
  static Scalar add(const Scalar& a, const Scalar& b);
  static Scalar sub(const Scalar& a, const Scalar& b);
  static Scalar mul(const Scalar& a, const Scalar& b);
  static Scalar inv(const Scalar& a);
  static Scalar pow(const Scalar& a, std::uint64_t e);
  /// p - 1
  static Scalar minus_one();
};

/// [p]P == O, computed by blst_p1_mult with the order's bits.
bool g1_killed_by_order(const blst_p1_affine& p);
bool g2_killed_by_order(const blst_p2_affine& p);

/// A point on E(Fp) outside the order-p subgroup, found by square roots
/// from x = start upward.
blst_p1_affine g1_point_outside_subgroup(std::uint64_t start = 1);

/// Replays a fixed prefix, then falls through to a seeded stream.
class ScriptedRandom final : public RandomSource {
 public:
  ScriptedRandom(std::vector<std::uint8_t> prefix, std::uint64_t seed)
      : prefix_(prefix.begin(), prefix.end()), tail_(seed, "scripted") {}

  void fill(std::span<std::uint8_t> out) override;

 private:
  std::deque<std::uint8_t> prefix_;
  SeededRandom tail_;
};

Bytes random_bytes(RandomSource& rng, std::size_t n);
std::uint64_t random_u64(RandomSource& rng);
/// Uniform in [lo, hi].
std::uint32_t random_between(RandomSource& rng, std::uint32_t lo, std::uint32_t hi);

}  // namespace kapre::testing

#endif  // KAPRE_TESTS_SUPPORT_ORACLE_HPP_
