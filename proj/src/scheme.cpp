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

#include "kapre/scheme.hpp"

#include <string>

#include "kapre/errors.hpp"

namespace kapre {
namespace {

SourceElement sample_generator(const SourceElement& base, RandomSource& rng) {
  for (;;) {
    SourceElement e = base.pow(Scalar::random(rng));
    if (!e.is_identity()) return e;
  }
}

void check_message(const Params& par, ByteView m) {
  if (m.size() != par.message_len) {
    throw Error(ErrorCode::kInvalidArgument,
                "message must be exactly " + std::to_string(par.message_len) +
                    " bytes");
  }
}

void check_type(const PublicKey& pk, std::uint32_t rho) {
  if (rho < 1 || rho > pk.n) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "type index " + std::to_string(rho) + " outside [1, " +
                    std::to_string(pk.n) + "]");
  }
}

void check_key_pair(const SecretKey& sk, const PublicKey& pk) {
  if (sk.n != pk.n) {
    throw Error(ErrorCode::kInvalidArgument, "secret and public key disagree on n");
  }
}

bool well_formed(const Params& par, const PublicKey& pk,
                 const Level2Ciphertext& c) {
  return c.rho >= 1 && c.rho <= pk.n && c.c5.size() == par.message_len &&
         c.c9.size() == par.message_len;
}

std::vector<const SourceElement*> aggregate_factors(const PublicKey& pk,
                                                    const TypeSet& types) {
  types.check_within(pk.n);
  std::vector<const SourceElement*> factors;
  factors.reserve(types.size());
  for (std::uint32_t v : types) factors.push_back(&pk.power(pk.n + 1 - v));
  return factors;
}

// g^{a3^{n+1}}, the power deliberately left out of the public key.
SourceElement hidden_power(const Params& par, const SecretKey& sk) {
  return par.g.pow(sk.a3.pow(static_cast<std::uint64_t>(sk.n) + 1));
}

}  // namespace

void Params::validate() const {
  if (ctx == nullptr) throw Error(ErrorCode::kInvalidArgument, "no pairing context");
  for (const SourceElement* gen : {&g, &d, &u, &v, &w}) {
    if (gen->is_identity()) {
      throw Error(ErrorCode::kInvalidArgument, "generator is the identity");
    }
  }
  if (message_len < kMinMessageBytes) {
    throw Error(ErrorCode::kInvalidArgument, "message length below minimum");
  }
  if (!(z == pair(g, g))) {
    throw Error(ErrorCode::kInvalidArgument, "Z does not equal e(g, g)");
  }
}

const SourceElement& PublicKey::power(std::uint32_t k) const {
  if (k < 1 || k > 2 * n || k == n + 1) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "no published power g_" + std::to_string(k));
  }
  const std::size_t idx = k <= n ? k - 1 : k - 2;
  if (idx >= delta.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "delta list too short");
  }
  return delta[idx];
}

void TypeSet::check_within(std::uint32_t n) const {
  for (std::uint32_t t : members_) {
    if (t < 1 || t > n) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "type index " + std::to_string(t) + " outside [1, " +
                      std::to_string(n) + "]");
    }
  }
}

Params setup(const PairingContext& ctx, std::uint32_t message_len,
             RandomSource& rng) {
  if (message_len < kMinMessageBytes) {
    throw Error(ErrorCode::kInvalidArgument,
                "message length must be at least " +
                    std::to_string(kMinMessageBytes) + " bytes");
  }
  const SourceElement base = SourceElement::base();
  Params par;
  par.ctx = &ctx;
  par.g = sample_generator(base, rng);
  par.d = sample_generator(base, rng);
  par.u = sample_generator(base, rng);
  par.v = sample_generator(base, rng);
  par.w = sample_generator(base, rng);
  par.z = pair(par.g, par.g);
  par.message_len = message_len;
  return par;
}

KeyPair keygen(const Params& par, std::uint32_t n, RandomSource& rng,
               kernels::Exec exec) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "type count must be >= 1");

  KeyPair kp;
  kp.sk.a1 = Scalar::random_nonzero(rng);
  kp.sk.a2 = Scalar::random_nonzero(rng);
  kp.sk.a3 = Scalar::random_nonzero(rng);
  kp.sk.n = n;

  std::vector<std::uint32_t> exponents;
  exponents.reserve(2 * static_cast<std::size_t>(n) - 1);
  for (std::uint32_t k = 1; k <= 2 * n; ++k) {
    if (k != n + 1) exponents.push_back(k);
  }
  kp.pk.pk1 = par.g.pow(kp.sk.a1);
  kp.pk.pk2 = par.g.pow(kp.sk.a2);
  kp.pk.delta = kernels::power_ladder(exec, par.g, kp.sk.a3, exponents);
  kp.pk.n = n;
  return kp;
}

SourceElement aggregate(const PublicKey& pk, const TypeSet& types) {
  return kernels::product_batched(aggregate_factors(pk, types));
}

ReKey rekeygen(const Params& par, const TypeSet& types, const SecretKey& sk_i,
               const PublicKey& pk_i, const PublicKey& pk_j) {
  (void)par;
  check_key_pair(sk_i, pk_i);
  ReKey rk;
  rk.r1 = pk_j.pk1.pow(sk_i.a1.inverse());
  rk.r2 = aggregate(pk_i, types).pow(sk_i.a2);
  rk.types = types;
  rk.n = pk_i.n;
  return rk;
}

ReKey rekeygen(const Params& par, const TypeSet& types, const SecretKey& sk_i,
               const PublicKey& pk_j) {
  types.check_within(sk_i.n);
  std::vector<std::uint32_t> exponents;
  for (std::uint32_t v : types) exponents.push_back(sk_i.n + 1 - v);
  const std::vector<SourceElement> powers = kernels::power_ladder(
      kernels::Exec::kParallel, par.g, sk_i.a3, exponents);
  std::vector<const SourceElement*> factors;
  for (const SourceElement& p : powers) factors.push_back(&p);

  ReKey rk;
  rk.r1 = pk_j.pk1.pow(sk_i.a1.inverse());
  rk.r2 = kernels::product_batched(factors).pow(sk_i.a2);
  rk.types = types;
  rk.n = sk_i.n;
  return rk;
}

Level2Ciphertext enc2(const Params& par, const PublicKey& pk, ByteView m,
                      std::uint32_t rho, RandomSource& rng) {
  detail::Enc2Coins coins;
  coins.t = Scalar::random(rng);
  coins.k = Scalar::random(rng);
  coins.r = Scalar::random_nonzero(rng);
  coins.eta = Scalar::random(rng);
  return detail::enc2_with(par, pk, m, rho, coins);
}

Level1Ciphertext enc1(const Params& par, const PublicKey& pk, ByteView m,
                      RandomSource& rng) {
  detail::Enc1Coins coins;
  coins.k = Scalar::random(rng);
  coins.r = Scalar::random_nonzero(rng);
  coins.eta = Scalar::random(rng);
  return detail::enc1_with(par, pk, m, coins);
}

bool verify2(const Params& par, const PublicKey& pk, const Level2Ciphertext& c,
             RandomSource& rng) {
  if (!well_formed(par, pk, c)) return false;
  if (!pairings_equal(c.c3, pk.pk2 * pk.power(c.rho), c.c4, par.g)) {
    return false;
  }
  const Scalar d1 = Scalar::random_nonzero(rng);
  const Scalar d2 = Scalar::random_nonzero(rng);
  const SourceElement tag = detail::tag_base(par, detail::hash_h(c.c1, c.c5), c.k);
  return pairings_equal(c.c1, pk.pk1.pow(d1) * tag.pow(d2),
                        c.c2.pow(d1) * c.c6.pow(d2), par.d);
}

Level2Checks check2(const Params& par, const PublicKey& pk,
                    const Level2Ciphertext& c) {
  Level2Checks out;
  if (!well_formed(par, pk, c)) return out;
  const SourceElement tag = detail::tag_base(par, detail::hash_h(c.c1, c.c5), c.k);
  out.tag = pairings_equal(c.c1, tag, c.c6, par.d);
  out.key = pairings_equal(c.c1, pk.pk1, c.c2, par.d);
  out.type = pairings_equal(c.c3, pk.pk2 * pk.power(c.rho), c.c4, par.g);
  return out;
}

bool verify1(const Params& par, const Level1Ciphertext& c) {
  if (c.c3.size() != par.message_len || c.c6.size() != par.message_len) {
    return false;
  }
  const SourceElement tag = detail::tag_base(par, detail::hash_h(c.c1, c.c3), c.k);
  return pairings_equal(c.c1, tag, c.c4, par.d);
}

Level1Ciphertext reenc(const Params& par, const PublicKey& pk_i,
                       const ReKey& rk, const Level2Ciphertext& c,
                       RandomSource& rng) {
  if (rk.n != pk_i.n) {
    throw Error(ErrorCode::kInvalidArgument, "re-key was issued for another n");
  }
  if (!rk.types.contains(c.rho)) {
    throw Error(ErrorCode::kTypeNotInSet, "ciphertext type not covered by grant");
  }
  if (!verify2(par, pk_i, c, rng)) {
    throw Error(ErrorCode::kInvalidCiphertext, "second-level ciphertext invalid");
  }
  return detail::transform(par, pk_i, rk, c);
}

Bytes dec2(const Params& par, const SecretKey& sk, const PublicKey& pk,
           const Level2Ciphertext& c, RandomSource& rng) {
  check_key_pair(sk, pk);
  if (!verify2(par, pk, c, rng)) {
    throw Error(ErrorCode::kInvalidCiphertext, "second-level ciphertext invalid");
  }
  const TargetElement key = pair(c.c2, par.g).pow(sk.a1.inverse());
  if (!bytes_equal(mask_bytes(key, c.c8, par.message_len), c.c9)) {
    throw Error(ErrorCode::kTagMismatch, "key confirmation tag mismatch");
  }
  const TargetElement blind = pair(c.c3, hidden_power(par, sk));
  return xor_bytes(xor_bytes(mask_bytes(key, c.c1, par.message_len), c.c5),
                   mask_bytes(blind, c.c1, par.message_len));
}

Bytes dec1(const Params& par, const SecretKey& sk, const Level1Ciphertext& c) {
  if (!verify1(par, c)) {
    throw Error(ErrorCode::kInvalidCiphertext, "first-level ciphertext invalid");
  }
  const TargetElement key = c.c2.pow(sk.a1.inverse());
  if (!bytes_equal(mask_bytes(key, c.c5, par.message_len), c.c6)) {
    throw Error(ErrorCode::kTagMismatch, "key confirmation tag mismatch");
  }
  return xor_bytes(mask_bytes(key, c.c1, par.message_len), c.c3);
}

namespace detail {

SourceElement tag_base(const Params& par, const Scalar& h, const Scalar& k) {
  return par.u.pow(h) * par.v.pow(k) * par.w;
}

Scalar hash_h(const SourceElement& c1, ByteView slot) {
  const auto first = c1.encode();
  Bytes data;
  data.reserve(8 + first.size() + slot.size());
  auto put_len = [&data](std::size_t len) {
    for (int i = 3; i >= 0; --i) {
      data.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
    }
  };
  put_len(first.size());
  data.insert(data.end(), first.begin(), first.end());
  put_len(slot.size());
  data.insert(data.end(), slot.begin(), slot.end());
  return hash_to_scalar("H", data);
}

Level2Ciphertext enc2_with(const Params& par, const PublicKey& pk, ByteView m,
                           std::uint32_t rho, const Enc2Coins& coins) {
  check_message(par, m);
  check_type(pk, rho);
  const std::size_t l = par.message_len;

  Level2Ciphertext c;
  c.rho = rho;
  c.k = coins.k;
  const TargetElement key = par.z.pow(coins.r);
  c.c1 = par.d.pow(coins.r);
  c.c2 = pk.pk1.pow(coins.r);
  c.c3 = par.g.pow(coins.t);
  c.c4 = (pk.pk2 * pk.power(rho)).pow(coins.t);

  // e(g_1, g_n)^t = e(g_{n+1}, g)^t, recoverable by the proxy only for rho in S.
  const TargetElement blind = pair(pk.power(1), pk.power(pk.n)).pow(coins.t);
  const Bytes inner = xor_bytes(mask_bytes(key, c.c1, l), m);
  c.c5 = xor_bytes(inner, mask_bytes(blind, c.c1, l));

  c.c6 = tag_base(par, hash_h(c.c1, c.c5), c.k).pow(coins.r);
  c.c7 = tag_base(par, hash_h(c.c1, inner), c.k).pow(coins.r);
  c.c8 = par.g.pow(coins.eta);
  c.c9 = mask_bytes(key, c.c8, l);
  return c;
}

Level1Ciphertext enc1_with(const Params& par, const PublicKey& pk, ByteView m,
                           const Enc1Coins& coins) {
  check_message(par, m);
  const std::size_t l = par.message_len;

  Level1Ciphertext c;
  c.k = coins.k;
  const TargetElement key = par.z.pow(coins.r);
  c.c1 = par.d.pow(coins.r);
  c.c2 = pair(pk.pk1, par.g).pow(coins.r);
  c.c3 = xor_bytes(mask_bytes(key, c.c1, l), m);
  c.c4 = tag_base(par, hash_h(c.c1, c.c3), c.k).pow(coins.r);
  c.c5 = par.g.pow(coins.eta);
  c.c6 = mask_bytes(key, c.c5, l);
  return c;
}

Level1Ciphertext transform(const Params& par, const PublicKey& pk_i,
                           const ReKey& rk, const Level2Ciphertext& c) {
  check_type(pk_i, c.rho);
  const std::uint32_t n = pk_i.n;

  std::vector<const SourceElement*> correction;
  for (std::uint32_t v : rk.types) {
    if (v != c.rho) correction.push_back(&pk_i.power(n + 1 - v + c.rho));
  }
  const TargetElement numerator = pair(aggregate(pk_i, rk.types), c.c4);
  const TargetElement denominator =
      pair(rk.r2 * kernels::product_batched(correction), c.c3);
  const TargetElement blind = numerator * denominator.inverse();

  Level1Ciphertext out;
  out.k = c.k;
  out.c1 = c.c1;
  out.c2 = pair(c.c2, rk.r1);
  out.c3 = xor_bytes(c.c5, mask_bytes(blind, c.c1, par.message_len));
  out.c4 = c.c7;
  out.c5 = c.c8;
  out.c6 = c.c9;
  return out;
}

}  // namespace detail
}  // namespace kapre
