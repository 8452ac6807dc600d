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

#ifndef KAPRE_SCHEME_HPP_
#define KAPRE_SCHEME_HPP_

// Key-aggregate proxy re-encryption.
//
// A delegator i holds n file types. One constant-size re-encryption key
// rk_{i->j,S} = (r1, r2) lets a proxy convert i's second-level ciphertexts of
// any type in S into first-level ciphertexts for delegatee j:
//
//   r1 = (g^{a_{j,1}})^{1/a_{i,1}}
//   r2 = (prod_{v in S} g_{n+1-v})^{a_{i,2}}
//
// where g_k = g^{a_{i,3}^k} are the delegator's published powers. The power
// g_{n+1} is never published; reencryption recovers e(g_{n+1}, g^t) only for
// rho in S, because the aggregate telescopes against the correction product
// prod_{v in S, v != rho} g_{n+1-v+rho}.
//
// Rejections are reported as kapre::Error with codes kTypeNotInSet,
// kInvalidCiphertext or kTagMismatch.

#include <cstdint>
#include <initializer_list>
#include <set>
#include <vector>

#include "kapre/kernels.hpp"
#include "kapre/pairing.hpp"
#include "kapre/random.hpp"

namespace kapre {

inline constexpr std::size_t kMinMessageBytes = 16;

struct Params {
  const PairingContext* ctx = nullptr;
  SourceElement g, d, u, v, w;
  TargetElement z;  // e(g, g)
  std::uint32_t message_len = 0;

  /// Throws kInvalidArgument when a generator is the identity, z != e(g, g)
  /// or message_len < kMinMessageBytes.
  void validate() const;

  bool operator==(const Params&) const = default;
};

struct SecretKey {
  Scalar a1, a2, a3;
  std::uint32_t n = 0;

  bool operator==(const SecretKey&) const = default;
};

struct PublicKey {
  SourceElement pk1;  // g^{a1}
  SourceElement pk2;  // g^{a2}
  // g_k = g^{a3^k} for k in {1..2n} \ {n+1}, in increasing k.
  std::vector<SourceElement> delta;
  std::uint32_t n = 0;

  /// g_k; throws kIndexOutOfRange for k == n+1 or k outside [1, 2n].
  const SourceElement& power(std::uint32_t k) const;

  bool operator==(const PublicKey&) const = default;
};

struct KeyPair {
  PublicKey pk;
  SecretKey sk;
};

/// Set of type indices; membership in [1, n] is checked against a key.
class TypeSet {
 public:
  TypeSet() = default;
  TypeSet(std::initializer_list<std::uint32_t> members)
      : members_(members) {}
  explicit TypeSet(std::set<std::uint32_t> members)
      : members_(std::move(members)) {}

  bool contains(std::uint32_t t) const { return members_.count(t) != 0; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  /// Throws kIndexOutOfRange if any member lies outside [1, n].
  void check_within(std::uint32_t n) const;

  bool operator==(const TypeSet&) const = default;

 private:
  std::set<std::uint32_t> members_;
};

struct ReKey {
  SourceElement r1;
  SourceElement r2;
  TypeSet types;       // S, carried for the proxy's policy gate
  std::uint32_t n = 0; // delegator's type count

  bool operator==(const ReKey&) const = default;
};

struct Level2Ciphertext {
  std::uint32_t rho = 0;
  Scalar k;
  SourceElement c1, c2, c3, c4;
  Bytes c5;
  SourceElement c6, c7, c8;
  Bytes c9;

  bool operator==(const Level2Ciphertext&) const = default;
};

struct Level1Ciphertext {
  Scalar k;
  SourceElement c1;
  TargetElement c2;
  Bytes c3;
  SourceElement c4, c5;
  Bytes c6;

  bool operator==(const Level1Ciphertext&) const = default;
};

Params setup(const PairingContext& ctx, std::uint32_t message_len,
             RandomSource& rng);

KeyPair keygen(const Params& par, std::uint32_t n, RandomSource& rng,
               kernels::Exec exec = kernels::Exec::kParallel);

/// prod_{v in S} g_{n+1-v}; identity for an empty set.
SourceElement aggregate(const PublicKey& pk, const TypeSet& types);

ReKey rekeygen(const Params& par, const TypeSet& types, const SecretKey& sk_i,
               const PublicKey& pk_i, const PublicKey& pk_j);
/// Variant that recomputes the needed powers from sk_i.a3 instead of
/// reading them from the delegator's public key.
ReKey rekeygen(const Params& par, const TypeSet& types, const SecretKey& sk_i,
               const PublicKey& pk_j);

Level2Ciphertext enc2(const Params& par, const PublicKey& pk, ByteView m,
                      std::uint32_t rho, RandomSource& rng);
Level1Ciphertext enc1(const Params& par, const PublicKey& pk, ByteView m,
                      RandomSource& rng);

/// Validity of a second-level ciphertext:
///   type binding  e(c3, pk2 * g_rho) == e(c4, g)
///   tag and key binding, batched with fresh nonzero d1, d2:
///     e(c1, pk1^{d1} * (u^h v^k w)^{d2}) == e(c2^{d1} * c6^{d2}, d)
/// with h = H(c1, c5).
bool verify2(const Params& par, const PublicKey& pk, const Level2Ciphertext& c,
             RandomSource& rng);

/// Unbatched diagnostics for a second-level ciphertext.
struct Level2Checks {
  bool tag = false;   // e(c1, u^h v^k w) == e(c6, d)
  bool key = false;   // e(c1, pk1) == e(c2, d)
  bool type = false;  // e(c3, pk2 * g_rho) == e(c4, g)
  bool all() const { return tag && key && type; }
};
Level2Checks check2(const Params& par, const PublicKey& pk,
                    const Level2Ciphertext& c);

/// e(c1, u^h v^k w) == e(c4, d) with h = H(c1, c3).
bool verify1(const Params& par, const Level1Ciphertext& c);

Level1Ciphertext reenc(const Params& par, const PublicKey& pk_i,
                       const ReKey& rk, const Level2Ciphertext& c,
                       RandomSource& rng);

Bytes dec2(const Params& par, const SecretKey& sk, const PublicKey& pk,
           const Level2Ciphertext& c, RandomSource& rng);
Bytes dec1(const Params& par, const SecretKey& sk, const Level1Ciphertext& c);

namespace detail {

struct Enc2Coins {
  Scalar t, k, r, eta;
};
struct Enc1Coins {
  Scalar k, r, eta;
};

Level2Ciphertext enc2_with(const Params& par, const PublicKey& pk, ByteView m,
                           std::uint32_t rho, const Enc2Coins& coins);
Level1Ciphertext enc1_with(const Params& par, const PublicKey& pk, ByteView m,
                           const Enc1Coins& coins);

/// The proxy's transformation without the policy gate or validity checks.
/// Requires rho in [1, n]; rho need not be in rk.types.
Level1Ciphertext transform(const Params& par, const PublicKey& pk_i,
                           const ReKey& rk, const Level2Ciphertext& c);

/// u^h * v^k * w
SourceElement tag_base(const Params& par, const Scalar& h, const Scalar& k);

/// H over length-prefixed slots.
Scalar hash_h(const SourceElement& c1, ByteView slot);

}  // namespace detail
}  // namespace kapre

#endif  // KAPRE_SCHEME_HPP_
