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

#ifndef KAPRE_PAIRING_HPP_
#define KAPRE_PAIRING_HPP_

// Symmetric-pairing group abstraction e: G x G -> G_T over BLS12-381.
//
// BLS12-381 is an asymmetric (Type-3) curve. A SourceElement is therefore kept
// in dual form: a G1 point and a G2 point sharing the same discrete logarithm
// relative to the fixed generators (G1, G2). Group operations act on both
// halves; pair(a, b) evaluates e(a.first, b.second), which is symmetric in a
// and b for consistent elements.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <blst.h>

#include "kapre/random.hpp"

namespace kapre {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Element of Z_p, p the prime group order.
class Scalar {
 public:
  static constexpr std::size_t kBytes = 32;

  Scalar();  // zero

  static Scalar from_u64(std::uint64_t v);
  /// Uniform in [0, p-1].
  static Scalar random(RandomSource& rng);
  /// Uniform in [1, p-1].
  static Scalar random_nonzero(RandomSource& rng);
  /// Strict decode of a 32-byte big-endian integer; values >= p are rejected.
  static Scalar from_bytes(ByteView in);
  /// Big-endian integer of any length reduced mod p.
  static Scalar reduce(ByteView wide);

  std::array<std::uint8_t, kBytes> to_bytes() const;

  bool is_zero() const;
  Scalar inverse() const;  // throws kInvalidArgument for zero
  Scalar pow(std::uint64_t e) const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  bool operator==(const Scalar& o) const;

  /// Little-endian canonical form, as blst's scalar multiplication expects.
  blst_scalar to_blst() const;

 private:
  blst_fr v_;
};

class SourceElement {
 public:
  static constexpr std::size_t kFirstBytes = 48;
  static constexpr std::size_t kSecondBytes = 96;
  static constexpr std::size_t kBytes = kFirstBytes + kSecondBytes;
  using Encoding = std::array<std::uint8_t, kBytes>;

  SourceElement();  // identity

  static SourceElement identity() { return SourceElement(); }
  /// The fixed base (G1, G2) of the backend.
  static SourceElement base();
  /// base^x.
  static SourceElement from_exponent(const Scalar& x);

  bool is_identity() const;
  SourceElement operator*(const SourceElement& o) const;
  SourceElement& operator*=(const SourceElement& o);
  SourceElement inverse() const;
  SourceElement pow(const Scalar& s) const;
  bool operator==(const SourceElement& o) const;

  /// Compressed G1 || compressed G2.
  Encoding encode() const;
  /// Full validation: both halves on-curve, in the prime-order subgroups, and
  /// sharing one discrete logarithm. Throws kInvalidElement.
  static SourceElement decode(ByteView in);
  /// Decodes `count` concatenated encodings with a single batched
  /// dual-consistency check.
  static std::vector<SourceElement> decode_many(ByteView in, std::size_t count);

  const blst_p1_affine& first() const { return p1_; }
  const blst_p2_affine& second() const { return p2_; }

  /// Construction from raw halves without consistency checks. Test and
  /// kernel use only.
  static SourceElement from_halves(const blst_p1& p1, const blst_p2& p2);

 private:
  blst_p1_affine p1_;
  blst_p2_affine p2_;
};

/// Element of G_T, the order-p subgroup of Fp12^*.
class TargetElement {
 public:
  static constexpr std::size_t kBytes = 576;
  using Encoding = std::array<std::uint8_t, kBytes>;

  TargetElement();  // identity

  static TargetElement identity() { return TargetElement(); }

  bool is_identity() const;
  TargetElement operator*(const TargetElement& o) const;
  TargetElement inverse() const;
  TargetElement pow(const Scalar& s) const;
  bool operator==(const TargetElement& o) const;

  /// Twelve 48-byte big-endian Fp coefficients in blst tower order.
  Encoding encode() const;
  /// Rejects non-canonical coefficients and elements outside G_T.
  static TargetElement decode(ByteView in);

  static TargetElement from_fp12(const blst_fp12& v);
  const blst_fp12& raw() const { return v_; }

 private:
  blst_fp12 v_;
};

/// Immutable description of the backend curve.
struct PairingContext {
  std::string curve;
  std::array<std::uint8_t, Scalar::kBytes> order;  // p, big-endian
  std::size_t source_bytes = SourceElement::kBytes;
  std::size_t target_bytes = TargetElement::kBytes;
  std::size_t scalar_bytes = Scalar::kBytes;

  static const PairingContext& bls12_381();
  /// Throws kInvalidArgument for unknown names.
  static const PairingContext& by_name(std::string_view name);
};

TargetElement pair(const SourceElement& a, const SourceElement& b);

/// e(a, b) == e(c, d), evaluated with one shared final exponentiation.
bool pairings_equal(const SourceElement& a, const SourceElement& b,
                    const SourceElement& c, const SourceElement& d);

SourceElement source_pow(const SourceElement& base, const Scalar& s);
TargetElement gt_pow(const TargetElement& base, const Scalar& s);

/// Domain-separated hash into Z_p^*; never returns zero.
Scalar hash_to_scalar(std::string_view domain_tag, ByteView data);

/// H1 realized as an extendable-output mask over
/// encode(key_material) || encode(binder).
Bytes mask_bytes(const TargetElement& key_material, const SourceElement& binder,
                 std::size_t out_len);

/// Byte-wise XOR of equal-length strings.
Bytes xor_bytes(ByteView a, ByteView b);

/// Constant-time equality of byte strings.
bool bytes_equal(ByteView a, ByteView b);

/// True if every element's two halves share one discrete logarithm.
/// Randomized-linear-combination check with weights derived from `elements`.
bool dual_consistent(std::span<const SourceElement> elements);

}  // namespace kapre

#endif  // KAPRE_PAIRING_HPP_
