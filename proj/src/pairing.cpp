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

#include "kapre/pairing.hpp"

#include <algorithm>
#include <cstring>

#include <openssl/crypto.h>

#include "digest.hpp"
#include "kapre/errors.hpp"

namespace kapre {
namespace {

constexpr std::size_t kScalarBits = 255;
constexpr std::size_t kFpBytes = 48;
constexpr std::size_t kWeightBytes = 16;

blst_p1 to_projective(const blst_p1_affine& a) {
  blst_p1 p;
  blst_p1_from_affine(&p, &a);
  return p;
}

blst_p2 to_projective(const blst_p2_affine& a) {
  blst_p2 p;
  blst_p2_from_affine(&p, &a);
  return p;
}

blst_fp12 miller(const blst_p1_affine& p, const blst_p2_affine& q) {
  if (blst_p1_affine_is_inf(&p) || blst_p2_affine_is_inf(&q)) {
    return *blst_fp12_one();
  }
  blst_fp12 f;
  blst_miller_loop(&f, &q, &p);
  return f;
}

[[noreturn]] void invalid(const char* what) {
  throw Error(ErrorCode::kInvalidElement, what);
}

// Parses both halves and checks curve and subgroup membership. Dual
// consistency is the caller's job.
SourceElement parse_halves(ByteView in) {
  blst_p1_affine a1;
  blst_p2_affine a2;
  if (blst_p1_uncompress(&a1, in.data()) != BLST_SUCCESS) {
    invalid("G1 half is not a valid compressed point");
  }
  if (blst_p2_uncompress(&a2, in.data() + SourceElement::kFirstBytes) !=
      BLST_SUCCESS) {
    invalid("G2 half is not a valid compressed point");
  }
  if (!blst_p1_affine_in_g1(&a1)) invalid("G1 half outside the subgroup");
  if (!blst_p2_affine_in_g2(&a2)) invalid("G2 half outside the subgroup");
  SourceElement e =
      SourceElement::from_halves(to_projective(a1), to_projective(a2));
  auto canonical = e.encode();
  if (!std::equal(canonical.begin(), canonical.end(), in.begin())) {
    invalid("non-canonical point encoding");
  }
  return e;
}

}  // namespace

// ---------------------------------------------------------------- Scalar

Scalar::Scalar() { std::memset(&v_, 0, sizeof(v_)); }

Scalar Scalar::from_u64(std::uint64_t v) {
  const std::uint64_t limbs[4] = {v, 0, 0, 0};
  Scalar s;
  blst_fr_from_uint64(&s.v_, limbs);
  return s;
}

Scalar Scalar::random(RandomSource& rng) {
  std::uint8_t wide[64];
  rng.fill(wide);
  return reduce(wide);
}

Scalar Scalar::random_nonzero(RandomSource& rng) {
  for (;;) {
    Scalar s = random(rng);
    if (!s.is_zero()) return s;
  }
}

Scalar Scalar::from_bytes(ByteView in) {
  if (in.size() != kBytes) {
    throw Error(ErrorCode::kInvalidElement, "scalar must be 32 bytes");
  }
  blst_scalar raw;
  blst_scalar_from_bendian(&raw, in.data());
  if (!blst_scalar_fr_check(&raw)) {
    throw Error(ErrorCode::kInvalidElement, "scalar not below group order");
  }
  Scalar s;
  blst_fr_from_scalar(&s.v_, &raw);
  return s;
}

Scalar Scalar::reduce(ByteView wide) {
  blst_scalar raw;
  std::memset(&raw, 0, sizeof(raw));
  if (!wide.empty()) blst_scalar_from_be_bytes(&raw, wide.data(), wide.size());
  Scalar s;
  blst_fr_from_scalar(&s.v_, &raw);
  return s;
}

std::array<std::uint8_t, Scalar::kBytes> Scalar::to_bytes() const {
  blst_scalar raw;
  blst_scalar_from_fr(&raw, &v_);
  std::array<std::uint8_t, kBytes> out{};
  blst_bendian_from_scalar(out.data(), &raw);
  return out;
}

bool Scalar::is_zero() const {
  static const blst_fr kZero{};
  return std::memcmp(&v_, &kZero, sizeof(v_)) == 0;
}

Scalar Scalar::inverse() const {
  if (is_zero()) {
    throw Error(ErrorCode::kInvalidArgument, "zero has no inverse");
  }
  Scalar r;
  blst_fr_inverse(&r.v_, &v_);
  return r;
}

Scalar Scalar::pow(std::uint64_t e) const {
  Scalar result = from_u64(1);
  Scalar base = *this;
  while (e != 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar r;
  blst_fr_add(&r.v_, &v_, &o.v_);
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar r;
  blst_fr_sub(&r.v_, &v_, &o.v_);
  return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar r;
  blst_fr_mul(&r.v_, &v_, &o.v_);
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r;
  blst_fr_cneg(&r.v_, &v_, true);
  return r;
}

bool Scalar::operator==(const Scalar& o) const {
  return std::memcmp(&v_, &o.v_, sizeof(v_)) == 0;
}

blst_scalar Scalar::to_blst() const {
  blst_scalar raw;
  blst_scalar_from_fr(&raw, &v_);
  return raw;
}

// --------------------------------------------------------- SourceElement

SourceElement::SourceElement() {
  std::memset(&p1_, 0, sizeof(p1_));
  std::memset(&p2_, 0, sizeof(p2_));
}

SourceElement SourceElement::base() {
  SourceElement e;
  e.p1_ = *blst_p1_affine_generator();
  e.p2_ = *blst_p2_affine_generator();
  return e;
}

SourceElement SourceElement::from_exponent(const Scalar& x) {
  return base().pow(x);
}

SourceElement SourceElement::from_halves(const blst_p1& p1, const blst_p2& p2) {
  SourceElement e;
  blst_p1_to_affine(&e.p1_, &p1);
  blst_p2_to_affine(&e.p2_, &p2);
  return e;
}

bool SourceElement::is_identity() const {
  return blst_p1_affine_is_inf(&p1_) && blst_p2_affine_is_inf(&p2_);
}

SourceElement SourceElement::operator*(const SourceElement& o) const {
  blst_p1 a = to_projective(p1_);
  blst_p2 b = to_projective(p2_);
  blst_p1_add_or_double_affine(&a, &a, &o.p1_);
  blst_p2_add_or_double_affine(&b, &b, &o.p2_);
  return from_halves(a, b);
}

SourceElement& SourceElement::operator*=(const SourceElement& o) {
  *this = *this * o;
  return *this;
}

SourceElement SourceElement::inverse() const {
  blst_p1 a = to_projective(p1_);
  blst_p2 b = to_projective(p2_);
  blst_p1_cneg(&a, true);
  blst_p2_cneg(&b, true);
  return from_halves(a, b);
}

SourceElement SourceElement::pow(const Scalar& s) const {
  const blst_scalar k = s.to_blst();
  blst_p1 a = to_projective(p1_);
  blst_p2 b = to_projective(p2_);
  blst_p1_mult(&a, &a, k.b, kScalarBits);
  blst_p2_mult(&b, &b, k.b, kScalarBits);
  return from_halves(a, b);
}

bool SourceElement::operator==(const SourceElement& o) const {
  return blst_p1_affine_is_equal(&p1_, &o.p1_) &&
         blst_p2_affine_is_equal(&p2_, &o.p2_);
}

SourceElement::Encoding SourceElement::encode() const {
  Encoding out{};
  blst_p1_affine_compress(out.data(), &p1_);
  blst_p2_affine_compress(out.data() + kFirstBytes, &p2_);
  return out;
}

SourceElement SourceElement::decode(ByteView in) {
  if (in.size() != kBytes) invalid("source element must be 144 bytes");
  SourceElement e = parse_halves(in);
  if (!dual_consistent(std::span<const SourceElement>(&e, 1))) {
    invalid("G1 and G2 halves do not share a discrete logarithm");
  }
  return e;
}

std::vector<SourceElement> SourceElement::decode_many(ByteView in,
                                                      std::size_t count) {
  if (in.size() != count * kBytes) invalid("element list has wrong length");
  std::vector<SourceElement> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(parse_halves(in.subspan(i * kBytes, kBytes)));
  }
  if (!dual_consistent(out)) {
    invalid("G1 and G2 halves do not share a discrete logarithm");
  }
  return out;
}

// --------------------------------------------------------- TargetElement

TargetElement::TargetElement() : v_(*blst_fp12_one()) {}

TargetElement TargetElement::from_fp12(const blst_fp12& v) {
  TargetElement t;
  t.v_ = v;
  return t;
}

bool TargetElement::is_identity() const { return blst_fp12_is_one(&v_); }

TargetElement TargetElement::operator*(const TargetElement& o) const {
  TargetElement r;
  blst_fp12_mul(&r.v_, &v_, &o.v_);
  return r;
}

TargetElement TargetElement::inverse() const {
  TargetElement r;
  blst_fp12_inverse(&r.v_, &v_);
  return r;
}

TargetElement TargetElement::pow(const Scalar& s) const {
  // Fixed 4-bit window. Every G_T element lies in the cyclotomic subgroup,
  // so cyclotomic squaring applies.
  blst_fp12 table[16];
  table[0] = *blst_fp12_one();
  for (int i = 1; i < 16; ++i) blst_fp12_mul(&table[i], &table[i - 1], &v_);

  const auto be = s.to_bytes();
  blst_fp12 acc = *blst_fp12_one();
  bool started = false;
  for (std::uint8_t byte : be) {
    for (int half = 1; half >= 0; --half) {
      const unsigned nibble = (byte >> (4 * half)) & 0xf;
      if (started) {
        for (int k = 0; k < 4; ++k) blst_fp12_cyclotomic_sqr(&acc, &acc);
      }
      if (nibble != 0) {
        blst_fp12_mul(&acc, &acc, &table[nibble]);
        started = true;
      }
    }
  }
  return from_fp12(acc);
}

bool TargetElement::operator==(const TargetElement& o) const {
  return blst_fp12_is_equal(&v_, &o.v_);
}

TargetElement::Encoding TargetElement::encode() const {
  Encoding out{};
  blst_bendian_from_fp12(out.data(), &v_);
  return out;
}

TargetElement TargetElement::decode(ByteView in) {
  if (in.size() != kBytes) invalid("target element must be 576 bytes");
  blst_fp12 v;
  // Mirrors blst_bendian_from_fp12: fp2 index outer, fp6 index inner.
  const std::uint8_t* cursor = in.data();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        blst_fp& c = v.fp6[j].fp2[i].fp[k];
        blst_fp_from_bendian(&c, cursor);
        std::uint8_t back[kFpBytes];
        blst_bendian_from_fp(back, &c);
        if (std::memcmp(back, cursor, kFpBytes) != 0) {
          invalid("non-canonical field coefficient");
        }
        cursor += kFpBytes;
      }
    }
  }
  if (std::all_of(in.begin(), in.end(), [](std::uint8_t b) { return b == 0; })) {
    invalid("zero is not a group element");
  }
  if (!blst_fp12_in_group(&v)) invalid("element outside the target group");
  return from_fp12(v);
}

// -------------------------------------------------------- PairingContext

const PairingContext& PairingContext::bls12_381() {
  static const PairingContext ctx = [] {
    PairingContext c;
    c.curve = "bls12-381";
    c.order = {0x73, 0xed, 0xa7, 0x53, 0x29, 0x9d, 0x7d, 0x48,
               0x33, 0x39, 0xd8, 0x08, 0x09, 0xa1, 0xd8, 0x05,
               0x53, 0xbd, 0xa4, 0x02, 0xff, 0xfe, 0x5b, 0xfe,
               0xff, 0xff, 0xff, 0xff, 0x00, 0x00, 0x00, 0x01};
    return c;
  }();
  return ctx;
}

const PairingContext& PairingContext::by_name(std::string_view name) {
  if (name == "bls12-381" || name == "default") return bls12_381();
  throw Error(ErrorCode::kInvalidArgument,
              "unsupported curve: " + std::string(name));
}

// ------------------------------------------------------------ operations

TargetElement pair(const SourceElement& a, const SourceElement& b) {
  blst_fp12 f = miller(a.first(), b.second());
  blst_final_exp(&f, &f);
  return TargetElement::from_fp12(f);
}

bool pairings_equal(const SourceElement& a, const SourceElement& b,
                    const SourceElement& c, const SourceElement& d) {
  const blst_fp12 lhs = miller(a.first(), b.second());
  const blst_fp12 rhs = miller(c.first(), d.second());
  return blst_fp12_finalverify(&lhs, &rhs);
}

SourceElement source_pow(const SourceElement& base, const Scalar& s) {
  return base.pow(s);
}

TargetElement gt_pow(const TargetElement& base, const Scalar& s) {
  return base.pow(s);
}

Scalar hash_to_scalar(std::string_view domain_tag, ByteView data) {
  if (domain_tag.size() > 255) {
    throw Error(ErrorCode::kInvalidArgument, "domain tag too long");
  }
  const std::uint8_t tag_len = static_cast<std::uint8_t>(domain_tag.size());
  for (std::uint8_t counter = 0;; ++counter) {
    std::uint8_t wide[64];
    internal::shake256({std::span(&tag_len, 1), internal::as_bytes(domain_tag),
                        data, std::span(&counter, 1)},
                       wide);
    Scalar s = Scalar::reduce(wide);
    if (!s.is_zero()) return s;
  }
}

Bytes mask_bytes(const TargetElement& key_material, const SourceElement& binder,
                 std::size_t out_len) {
  static constexpr std::uint8_t kTag[] = {2, 'H', '1'};
  const auto k = key_material.encode();
  const auto b = binder.encode();
  Bytes out(out_len);
  internal::shake256({kTag, k, b}, out);
  return out;
}

Bytes xor_bytes(ByteView a, ByteView b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument, "xor of unequal lengths");
  }
  Bytes out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

bool bytes_equal(ByteView a, ByteView b) {
  return a.size() == b.size() &&
         CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

bool dual_consistent(std::span<const SourceElement> elements) {
  if (elements.empty()) return true;

  Bytes transcript;
  transcript.reserve(elements.size() * SourceElement::kBytes);
  for (const SourceElement& e : elements) {
    const auto enc = e.encode();
    transcript.insert(transcript.end(), enc.begin(), enc.end());
  }
  Bytes weights(elements.size() * kWeightBytes);
  internal::shake256({internal::as_bytes("kapre-dual-check"), transcript},
                     weights);

  blst_p1 acc1;
  blst_p2 acc2;
  std::memset(&acc1, 0, sizeof(acc1));
  std::memset(&acc2, 0, sizeof(acc2));
  for (std::size_t i = 0; i < elements.size(); ++i) {
    std::uint8_t le[kWeightBytes];
    std::copy_n(weights.begin() + i * kWeightBytes, kWeightBytes, le);
    le[kWeightBytes - 1] |= 0x80;  // keep every weight nonzero
    blst_p1 t1 = to_projective(elements[i].first());
    blst_p2 t2 = to_projective(elements[i].second());
    blst_p1_mult(&t1, &t1, le, 8 * kWeightBytes);
    blst_p2_mult(&t2, &t2, le, 8 * kWeightBytes);
    blst_p1_add_or_double(&acc1, &acc1, &t1);
    blst_p2_add_or_double(&acc2, &acc2, &t2);
  }
  const SourceElement folded = SourceElement::from_halves(acc1, acc2);
  // e(sum w_i P1_i, G2) == e(G1, sum w_i P2_i)
  const blst_fp12 lhs = miller(folded.first(), *blst_p2_affine_generator());
  const blst_fp12 rhs = miller(*blst_p1_affine_generator(), folded.second());
  return blst_fp12_finalverify(&lhs, &rhs);
}

}  // namespace kapre
