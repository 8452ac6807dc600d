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

#include "oracle.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

#include <openssl/bn.h>

namespace kapre::testing {
namespace {

using BnPtr = std::unique_ptr<BIGNUM, decltype(&BN_free)>;
using CtxPtr = std::unique_ptr<BN_CTX, decltype(&BN_CTX_free)>;

BnPtr to_bn(const Scalar& s) {
  const auto bytes = s.to_bytes();
  return BnPtr(BN_bin2bn(bytes.data(), static_cast<int>(bytes.size()), nullptr), BN_free);
}

BnPtr order_bn() {
  const auto& order = PairingContext::bls12_381().order;
  return BnPtr(BN_bin2bn(order.data(), static_cast<int>(order.size()), nullptr), BN_free);
}

Scalar from_bn(const BIGNUM* v) {
  std::uint8_t out[Scalar::kBytes];
  if (BN_bn2binpad(v, out, sizeof(out)) != sizeof(out)) {
    throw std::runtime_error("BIGNUM does not fit 32 bytes");
  }
  return Scalar::from_bytes(out);
}

template <class Op>
Scalar binary(const Scalar& a, const Scalar& b, Op op) {
  CtxPtr ctx(BN_CTX_new(), BN_CTX_free);
  BnPtr x = to_bn(a), y = to_bn(b), p = order_bn(), r(BN_new(), BN_free);
  if (op(r.get(), x.get(), y.get(), p.get(), ctx.get()) != 1) {
    throw std::runtime_error("BIGNUM operation failed");
  }
  return from_bn(r.get());
}

std::vector<std::uint8_t> order_le() {
  const auto& order = PairingContext::bls12_381().order;
  return std::vector<std::uint8_t>(order.rbegin(), order.rend());
}

}  // namespace

Scalar ModP::add(const Scalar& a, const Scalar& b) { return binary(a, b, BN_mod_add); }
Scalar ModP::sub(const Scalar& a, const Scalar& b) { return binary(a, b, BN_mod_sub); }
Scalar ModP::mul(const Scalar& a, const Scalar& b) { return binary(a, b, BN_mod_mul); }

Scalar ModP::inv(const Scalar& a) {
  CtxPtr ctx(BN_CTX_new(), BN_CTX_free);
  BnPtr x = to_bn(a), p = order_bn();
  BnPtr r(BN_mod_inverse(nullptr, x.get(), p.get(), ctx.get()), BN_free);
  if (!r) throw std::runtime_error("no inverse");
  return from_bn(r.get());
}

Scalar ModP::pow(const Scalar& a, std::uint64_t e) {
  CtxPtr ctx(BN_CTX_new(), BN_CTX_free);
  BnPtr x = to_bn(a), p = order_bn(), r(BN_new(), BN_free), ex(BN_new(), BN_free);
  BN_set_word(ex.get(), e);
  BN_mod_exp(r.get(), x.get(), ex.get(), p.get(), ctx.get());
  return from_bn(r.get());
}

Scalar ModP::minus_one() {
  BnPtr p = order_bn();
  BN_sub_word(p.get(), 1);
  return from_bn(p.get());
}

bool g1_killed_by_order(const blst_p1_affine& p) {
  blst_p1 in, out;
  blst_p1_from_affine(&in, &p);
  const auto le = order_le();
  blst_p1_mult(&out, &in, le.data(), 255);
  return blst_p1_is_inf(&out);
}

bool g2_killed_by_order(const blst_p2_affine& p) {
  blst_p2 in, out;
  blst_p2_from_affine(&in, &p);
  const auto le = order_le();
  blst_p2_mult(&out, &in, le.data(), 255);
  return blst_p2_is_inf(&out);
}

blst_p1_affine g1_point_outside_subgroup(std::uint64_t start) {
  for (std::uint64_t x = start;; ++x) {
    const std::uint64_t limbs_x[6] = {x, 0, 0, 0, 0, 0};
    const std::uint64_t limbs_b[6] = {4, 0, 0, 0, 0, 0};
    blst_fp fx, b, rhs, y;
    blst_fp_from_uint64(&fx, limbs_x);
    blst_fp_from_uint64(&b, limbs_b);
    blst_fp_sqr(&rhs, &fx);
    blst_fp_mul(&rhs, &rhs, &fx);
    blst_fp_add(&rhs, &rhs, &b);
    if (!blst_fp_sqrt(&y, &rhs)) continue;
    blst_p1_affine p{fx, y};
    if (blst_p1_affine_on_curve(&p) && !g1_killed_by_order(p)) return p;
  }
}

void ScriptedRandom::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  for (; i < out.size() && !prefix_.empty(); ++i) {
    out[i] = prefix_.front();
    prefix_.pop_front();
  }
  if (i < out.size()) tail_.fill(out.subspan(i));
}

Bytes random_bytes(RandomSource& rng, std::size_t n) {
  Bytes out(n);
  rng.fill(out);
  return out;
}

std::uint64_t random_u64(RandomSource& rng) {
  std::uint8_t b[8];
  rng.fill(b);
  std::uint64_t v = 0;
  for (std::uint8_t x : b) v = (v << 8) | x;
  return v;
}

std::uint32_t random_between(RandomSource& rng, std::uint32_t lo, std::uint32_t hi) {
  return lo + static_cast<std::uint32_t>(random_u64(rng) % (std::uint64_t{hi} - lo + 1));
}

}  // namespace kapre::testing
