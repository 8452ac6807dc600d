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

#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "kapre/codec.hpp"
#include "kapre/errors.hpp"
#include "kapre/scheme.hpp"
#include "support/oracle.hpp"
#include "support/tamper.hpp"

namespace kapre {
namespace {

using testing::ModP;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected kapre::Error";
  return ErrorCode::kMalformed;
}

class SchemeTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    SeededRandom rng(21, "scheme-test");
    par_ = new Params(setup(PairingContext::bls12_381(), 32, rng));
    alice_ = new KeyPair(keygen(*par_, 10, rng));
    bob_ = new KeyPair(keygen(*par_, 10, rng));
    carol_ = new KeyPair(keygen(*par_, 10, rng));
  }
  static void TearDownTestSuite() {
    delete par_;
    delete alice_;
    delete bob_;
    delete carol_;
  }

  // g^{a3^k} from the secret exponent, computed on BIGNUMs.
  static SourceElement oracle_power(const KeyPair& kp, std::uint32_t k) {
    return par_->g.pow(ModP::pow(kp.sk.a3, k));
  }

  Bytes message() { return testing::random_bytes(rng, par_->message_len); }

  static inline Params* par_ = nullptr;
  static inline KeyPair* alice_ = nullptr;
  static inline KeyPair* bob_ = nullptr;
  static inline KeyPair* carol_ = nullptr;
  SeededRandom rng{22, "scheme-test-body"};
};

// ----------------------------------------------------------------- setup

TEST_F(SchemeTest, SetupZIsPairOfG) {
  EXPECT_EQ(par_->z, pair(par_->g, par_->g));
  EXPECT_NO_THROW(par_->validate());
}

TEST_F(SchemeTest, SetupDrawsFreshGenerators) {
  std::vector<SourceElement> seen;
  for (int i = 0; i < 10; ++i) {
    const Params p = setup(PairingContext::bls12_381(), 32, rng);
    for (const SourceElement* e : {&p.g, &p.d, &p.u, &p.v, &p.w}) {
      for (const SourceElement& s : seen) EXPECT_FALSE(s == *e);
      seen.push_back(*e);
    }
  }
}

TEST_F(SchemeTest, SetupResamplesIdentityGenerator) {
  // The second 64-byte draw (for d) is zero, so d = base^0 must be redrawn.
  std::vector<std::uint8_t> prefix(128, 0x5a);
  std::fill(prefix.begin() + 64, prefix.end(), 0);
  testing::ScriptedRandom scripted(prefix, 9);
  const Params p = setup(PairingContext::bls12_381(), 32, scripted);
  EXPECT_FALSE(p.d.is_identity());
  EXPECT_NO_THROW(p.validate());

  Params broken = p;
  broken.d = SourceElement::identity();
  EXPECT_EQ(code_of([&] { broken.validate(); }), ErrorCode::kInvalidArgument);
}

TEST_F(SchemeTest, SetupRejectsShortMessages) {
  EXPECT_EQ(code_of([&] { setup(PairingContext::bls12_381(), 15, rng); }),
            ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW(setup(PairingContext::bls12_381(), 16, rng));
}

// ---------------------------------------------------------------- keygen

TEST_F(SchemeTest, KeygenDeltaSizes) {
  EXPECT_EQ(alice_->pk.delta.size(), 19u);
  const KeyPair one = keygen(*par_, 1, rng);
  ASSERT_EQ(one.pk.delta.size(), 1u);
  EXPECT_EQ(one.pk.delta[0], oracle_power(one, 1));
  EXPECT_EQ(code_of([&] { keygen(*par_, 0, rng); }), ErrorCode::kInvalidArgument);
}

TEST_F(SchemeTest, KeygenPublishesPowersExceptTheGap) {
  const std::uint32_t n = alice_->pk.n;
  EXPECT_EQ(alice_->pk.pk1, par_->g.pow(alice_->sk.a1));
  EXPECT_EQ(alice_->pk.pk2, par_->g.pow(alice_->sk.a2));
  for (std::uint32_t k = 1; k <= 2 * n; ++k) {
    if (k == n + 1) {
      EXPECT_EQ(code_of([&] { alice_->pk.power(k); }), ErrorCode::kIndexOutOfRange);
    } else {
      EXPECT_EQ(alice_->pk.power(k), oracle_power(*alice_, k)) << "g_" << k;
    }
  }
  EXPECT_EQ(code_of([&] { alice_->pk.power(0); }), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code_of([&] { alice_->pk.power(2 * n + 1); }), ErrorCode::kIndexOutOfRange);
}

TEST_F(SchemeTest, KeygenPowerStructure) {
  const PublicKey& pk = alice_->pk;
  const std::uint32_t n = pk.n;
  EXPECT_EQ(pair(pk.power(1), pk.power(n)), pair(par_->g, oracle_power(*alice_, n + 1)));
  for (std::uint32_t r = 1; r + 1 <= n; ++r) {
    EXPECT_EQ(pair(pk.power(1), pk.power(r)), pair(par_->g, pk.power(r + 1)));
  }
}

TEST_F(SchemeTest, KeygenSerialAndParallelAgree) {
  SeededRandom a(5, "same"), b(5, "same");
  const KeyPair x = keygen(*par_, 6, a, kernels::Exec::kSerial);
  const KeyPair y = keygen(*par_, 6, b, kernels::Exec::kParallel);
  EXPECT_EQ(x.pk, y.pk);
  EXPECT_EQ(x.sk, y.sk);
}

// ------------------------------------------------------------- aggregate

TEST_F(SchemeTest, AggregateOfWorkedExampleSet) {
  const TypeSet s = {1, 3, 5, 8, 9};
  const std::uint32_t n = 10;
  const std::vector<std::uint32_t> expected_indices = {10, 8, 6, 3, 2};
  std::vector<std::uint32_t> indices;
  for (std::uint32_t v : s) indices.push_back(n + 1 - v);
  EXPECT_EQ(indices, expected_indices);

  const PublicKey& pk = alice_->pk;
  EXPECT_EQ(aggregate(pk, s),
            pk.power(10) * pk.power(8) * pk.power(6) * pk.power(3) * pk.power(2));
}

TEST_F(SchemeTest, AggregateOfEmptySetIsIdentity) {
  EXPECT_TRUE(aggregate(alice_->pk, TypeSet{}).is_identity());
}

TEST_F(SchemeTest, AggregateMatchesNaiveProduct) {
  const KeyPair kp = keygen(*par_, 16, rng);
  for (int trial = 0; trial < 10; ++trial) {
    std::set<std::uint32_t> members;
    for (std::uint32_t v = 1; v <= 16; ++v) {
      if (testing::random_between(rng, 0, 1)) members.insert(v);
    }
    // Multiply in descending type order, exponents from the secret key.
    SourceElement naive;
    for (auto it = members.rbegin(); it != members.rend(); ++it) {
      naive = naive * oracle_power(kp, 16 + 1 - *it);
    }
    EXPECT_EQ(aggregate(kp.pk, TypeSet(members)), naive);
  }
}

TEST_F(SchemeTest, AggregateRejectsOutOfRangeTypes) {
  EXPECT_EQ(code_of([&] { aggregate(alice_->pk, TypeSet{11}); }), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code_of([&] { aggregate(alice_->pk, TypeSet{0}); }), ErrorCode::kIndexOutOfRange);
}

// -------------------------------------------------------------- rekeygen

TEST_F(SchemeTest, RekeyOfWorkedExample) {
  const PublicKey& pk = alice_->pk;
  const ReKey rk = rekeygen(*par_, TypeSet{1, 3, 5, 8, 9}, alice_->sk, pk, bob_->pk);
  EXPECT_EQ(rk.r2, (pk.power(10) * pk.power(8) * pk.power(6) * pk.power(3) * pk.power(2))
                       .pow(alice_->sk.a2));
  EXPECT_EQ(rk.r1, par_->g.pow(ModP::mul(bob_->sk.a1, ModP::inv(alice_->sk.a1))));
  EXPECT_EQ(rk.n, 10u);
  EXPECT_EQ(rk.types, (TypeSet{1, 3, 5, 8, 9}));
}

TEST_F(SchemeTest, SelfDelegationKeyIsG) {
  const ReKey rk = rekeygen(*par_, TypeSet{2}, alice_->sk, alice_->pk, alice_->pk);
  EXPECT_EQ(rk.r1, par_->g);
}

TEST_F(SchemeTest, RekeyFromSecretMatchesRekeyFromPublicKey) {
  for (const TypeSet& s : {TypeSet{}, TypeSet{4}, TypeSet{1, 2, 3, 10}}) {
    EXPECT_EQ(rekeygen(*par_, s, alice_->sk, alice_->pk, bob_->pk),
              rekeygen(*par_, s, alice_->sk, bob_->pk));
  }
}

TEST_F(SchemeTest, RekeyTokenLengthIsConstant) {
  for (std::uint32_t n : {2u, 16u, 256u}) {
    const KeyPair a = keygen(*par_, n, rng);
    std::set<std::uint32_t> all;
    for (std::uint32_t v = 1; v <= n; ++v) all.insert(v);
    const ReKey one = rekeygen(*par_, TypeSet{1}, a.sk, a.pk, bob_->pk);
    const ReKey full = rekeygen(*par_, TypeSet(all), a.sk, a.pk, bob_->pk);
    EXPECT_EQ(codec::rekey_token(one).size(), 2 * SourceElement::kBytes);
    EXPECT_EQ(codec::rekey_token(full).size(), 2 * SourceElement::kBytes);
  }
}

// ------------------------------------------------------------ encryption

TEST_F(SchemeTest, Enc2OutputVerifies) {
  for (std::uint32_t rho = 1; rho <= 10; ++rho) {
    const Level2Ciphertext c = enc2(*par_, alice_->pk, message(), rho, rng);
    EXPECT_TRUE(verify2(*par_, alice_->pk, c, rng));
    EXPECT_TRUE(check2(*par_, alice_->pk, c).all());
  }
}

TEST_F(SchemeTest, Enc2RejectsBadInput) {
  EXPECT_EQ(code_of([&] { enc2(*par_, alice_->pk, message(), 0, rng); }),
            ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code_of([&] { enc2(*par_, alice_->pk, message(), 11, rng); }),
            ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(code_of([&] { enc2(*par_, alice_->pk, Bytes(31), 1, rng); }),
            ErrorCode::kInvalidArgument);
}

TEST_F(SchemeTest, Level2RoundTrip) {
  for (int i = 0; i < 100; ++i) {
    const Bytes m = message();
    const std::uint32_t rho = testing::random_between(rng, 1, 10);
    EXPECT_EQ(dec2(*par_, alice_->sk, alice_->pk, enc2(*par_, alice_->pk, m, rho, rng), rng), m);
  }
}

TEST_F(SchemeTest, Level2UnmaskingFromKnownCoins) {
  const std::uint32_t n = alice_->pk.n;
  for (int i = 0; i < 10; ++i) {
    const Bytes m = message();
    const std::uint32_t rho = testing::random_between(rng, 1, n);
    const detail::Enc2Coins coins{Scalar::random(rng), Scalar::random(rng),
                                  Scalar::random_nonzero(rng), Scalar::random(rng)};
    const Level2Ciphertext c = detail::enc2_with(*par_, alice_->pk, m, rho, coins);

    // K = Z^r and e(g_1, g_n)^t = Z^{t a3^{n+1}}, both from exponents.
    const TargetElement k = gt_pow(par_->z, coins.r);
    const TargetElement blind =
        gt_pow(par_->z, ModP::mul(coins.t, ModP::pow(alice_->sk.a3, n + 1)));
    EXPECT_EQ(blind, pair(c.c3, oracle_power(*alice_, n + 1)));
    const Bytes recovered =
        xor_bytes(xor_bytes(c.c5, mask_bytes(k, c.c1, m.size())), mask_bytes(blind, c.c1, m.size()));
    EXPECT_EQ(recovered, m);
    EXPECT_EQ(c.c9, mask_bytes(k, c.c8, m.size()));
    EXPECT_EQ(gt_pow(pair(c.c2, par_->g), ModP::inv(alice_->sk.a1)), k);
  }
}

TEST_F(SchemeTest, Level1RoundTrip) {
  for (int i = 0; i < 100; ++i) {
    const Bytes m = message();
    const Level1Ciphertext c = enc1(*par_, bob_->pk, m, rng);
    EXPECT_TRUE(verify1(*par_, c));
    EXPECT_EQ(dec1(*par_, bob_->sk, c), m);
  }
}

TEST_F(SchemeTest, Enc1KeyComponentFromKnownCoins) {
  const detail::Enc1Coins coins{Scalar::random(rng), Scalar::random_nonzero(rng),
                                Scalar::random(rng)};
  const Level1Ciphertext c = detail::enc1_with(*par_, bob_->pk, message(), coins);
  EXPECT_EQ(c.c2, pair(bob_->pk.pk1, par_->g.pow(coins.r)));
  EXPECT_EQ(c.c2, gt_pow(pair(bob_->pk.pk1, par_->g), coins.r));
}

TEST_F(SchemeTest, Dec2RejectsFlippedTag) {
  Level2Ciphertext c = enc2(*par_, alice_->pk, message(), 4, rng);
  c.c9[0] ^= 0x01;
  EXPECT_EQ(code_of([&] { dec2(*par_, alice_->sk, alice_->pk, c, rng); }),
            ErrorCode::kTagMismatch);
}

TEST_F(SchemeTest, Dec1RejectsReplacedTagComponent) {
  Level1Ciphertext c = enc1(*par_, bob_->pk, message(), rng);
  c.c4 = SourceElement::from_exponent(Scalar::random_nonzero(rng));
  EXPECT_FALSE(verify1(*par_, c));
  EXPECT_EQ(code_of([&] { dec1(*par_, bob_->sk, c); }), ErrorCode::kInvalidCiphertext);
}

// --------------------------------------------------------- re-encryption

TEST_F(SchemeTest, ReencryptionOfWorkedExample) {
  const TypeSet s = {1, 3, 5, 8, 9};
  const std::uint32_t n = 10, rho = 3;
  std::set<std::uint32_t> correction;
  for (std::uint32_t v : s) {
    if (v != rho) correction.insert(n + 1 - v + rho);
  }
  EXPECT_EQ(correction, (std::set<std::uint32_t>{13, 9, 6, 5}));

  const ReKey rk = rekeygen(*par_, s, alice_->sk, alice_->pk, bob_->pk);
  const Bytes m = message();
  const Level1Ciphertext c1 = reenc(*par_, alice_->pk, rk, enc2(*par_, alice_->pk, m, rho, rng), rng);
  EXPECT_EQ(dec1(*par_, bob_->sk, c1), m);
}

TEST_F(SchemeTest, ReencryptionWithSingletonSet) {
  for (std::uint32_t rho : {1u, 5u, 10u}) {
    const ReKey rk = rekeygen(*par_, TypeSet{rho}, alice_->sk, alice_->pk, bob_->pk);
    const Bytes m = message();
    const auto c1 = reenc(*par_, alice_->pk, rk, enc2(*par_, alice_->pk, m, rho, rng), rng);
    EXPECT_EQ(dec1(*par_, bob_->sk, c1), m);
  }
}

TEST_F(SchemeTest, ReencryptionCopiesTagComponents) {
  const ReKey rk = rekeygen(*par_, TypeSet{2, 7}, alice_->sk, alice_->pk, bob_->pk);
  const Level2Ciphertext c = enc2(*par_, alice_->pk, message(), 7, rng);
  const Level1Ciphertext c1 = reenc(*par_, alice_->pk, rk, c, rng);
  EXPECT_EQ(c1.k, c.k);
  EXPECT_EQ(c1.c1, c.c1);
  EXPECT_EQ(c1.c2, pair(c.c2, rk.r1));
  EXPECT_EQ(c1.c4, c.c7);
  EXPECT_EQ(c1.c5, c.c8);
  EXPECT_EQ(c1.c6, c.c9);
}

TEST_F(SchemeTest, ReencryptionRejectsTypeOutsideSet) {
  const ReKey rk = rekeygen(*par_, TypeSet{1, 3}, alice_->sk, alice_->pk, bob_->pk);
  const Level2Ciphertext c = enc2(*par_, alice_->pk, message(), 2, rng);
  EXPECT_EQ(code_of([&] { reenc(*par_, alice_->pk, rk, c, rng); }), ErrorCode::kTypeNotInSet);
}

TEST_F(SchemeTest, EmptyGrantReencryptsNothing) {
  const ReKey rk = rekeygen(*par_, TypeSet{}, alice_->sk, alice_->pk, bob_->pk);
  for (std::uint32_t rho = 1; rho <= 10; ++rho) {
    const Level2Ciphertext c = enc2(*par_, alice_->pk, message(), rho, rng);
    EXPECT_EQ(code_of([&] { reenc(*par_, alice_->pk, rk, c, rng); }), ErrorCode::kTypeNotInSet);
  }
}

TEST_F(SchemeTest, ReencryptionRejectsInvalidCiphertext) {
  const ReKey rk = rekeygen(*par_, TypeSet{4}, alice_->sk, alice_->pk, bob_->pk);
  Level2Ciphertext c = enc2(*par_, alice_->pk, message(), 4, rng);
  c.c2 = c.c2 * par_->g;
  EXPECT_EQ(code_of([&] { reenc(*par_, alice_->pk, rk, c, rng); }),
            ErrorCode::kInvalidCiphertext);
}

TEST_F(SchemeTest, WrongRecipientFailsTagCheck) {
  const ReKey rk = rekeygen(*par_, TypeSet{1, 2, 3}, alice_->sk, alice_->pk, bob_->pk);
  for (int i = 0; i < 100; ++i) {
    const Level1Ciphertext c1 =
        reenc(*par_, alice_->pk, rk, enc2(*par_, alice_->pk, message(), 2, rng), rng);
    // The session key differs under the two recipients' exponents.
    ASSERT_FALSE(gt_pow(c1.c2, ModP::inv(bob_->sk.a1)) ==
                 gt_pow(c1.c2, ModP::inv(carol_->sk.a1)));
    EXPECT_EQ(code_of([&] { dec1(*par_, carol_->sk, c1); }), ErrorCode::kTagMismatch);
  }
}

// With the policy gate bypassed K is untouched, so the tag still verifies and
// only the plaintext is garbled. c4' = c7 binds the ungarbled value, so the
// level-1 equation rejects as well and dec1 never releases m'.
TEST_F(SchemeTest, BypassedPolicyGarblesPlaintext) {
  const ReKey rk = rekeygen(*par_, TypeSet{1, 3}, alice_->sk, alice_->pk, bob_->pk);
  for (int i = 0; i < 20; ++i) {
    const Bytes m = message();
    const Level1Ciphertext c1 =
        detail::transform(*par_, alice_->pk, rk, enc2(*par_, alice_->pk, m, 2, rng));
    const testing::OpenedLevel1 opened = testing::open_level1(*par_, bob_->sk, c1);
    EXPECT_TRUE(opened.tag);
    EXPECT_FALSE(opened.plaintext == m);
    EXPECT_FALSE(opened.equation);
    EXPECT_EQ(code_of([&] { dec1(*par_, bob_->sk, c1); }), ErrorCode::kInvalidCiphertext);
  }
}

TEST_F(SchemeTest, TelescopingIdentity) {
  const TargetElement z = par_->z;
  for (std::uint32_t n = 1; n <= 8; ++n) {
    const KeyPair kp = keygen(*par_, n, rng);
    const Scalar a = kp.sk.a3;
    const TargetElement target = gt_pow(z, ModP::pow(a, n + 1));
    // Every nonempty subset for n <= 4, a sample of 20 otherwise.
    std::vector<std::uint32_t> masks;
    if (n <= 4) {
      for (std::uint32_t m = 1; m < (1u << n); ++m) masks.push_back(m);
    } else {
      for (int i = 0; i < 20; ++i) masks.push_back(testing::random_between(rng, 1, (1u << n) - 1));
    }
    for (std::uint32_t mask : masks) {
      std::set<std::uint32_t> s;
      for (std::uint32_t v = 1; v <= n; ++v) {
        if (mask & (1u << (v - 1))) s.insert(v);
      }
      for (std::uint32_t rho : s) {
        // Exponent side: sum a^{n+1-v+rho} over S minus the same sum without rho.
        Scalar lhs, rhs;
        SourceElement corr;
        for (std::uint32_t v : s) {
          lhs = ModP::add(lhs, ModP::pow(a, n + 1 - v + rho));
          if (v != rho) {
            rhs = ModP::add(rhs, ModP::pow(a, n + 1 - v + rho));
            corr *= kp.pk.power(n + 1 - v + rho);
          }
        }
        EXPECT_EQ(ModP::sub(lhs, rhs), ModP::pow(a, n + 1));
        const TargetElement group_side =
            pair(aggregate(kp.pk, TypeSet(s)), kp.pk.power(rho)) * pair(corr, par_->g).inverse();
        EXPECT_EQ(group_side, target) << "n=" << n << " rho=" << rho;
      }
    }
  }
}

// ---------------------------------------------------------- verification

TEST_F(SchemeTest, BatchCheckAgreesWithIndividualEquations) {
  const Level2Ciphertext valid = enc2(*par_, alice_->pk, message(), 6, rng);
  int agreements = 0;
  for (int i = 0; i < 200; ++i) {
    Level2Ciphertext c = valid;
    switch (i % 5) {
      case 0: break;
      case 1: c.c2 = SourceElement::from_exponent(Scalar::random_nonzero(rng)); break;
      case 2: c.c6 = SourceElement::from_exponent(Scalar::random_nonzero(rng)); break;
      case 3: c.c4 = SourceElement::from_exponent(Scalar::random_nonzero(rng)); break;
      case 4: c.c5[i % c.c5.size()] ^= 0x80; break;
    }
    const Level2Checks checks = check2(*par_, alice_->pk, c);
    if (verify2(*par_, alice_->pk, c, rng) == checks.all()) ++agreements;
    if (i % 5 == 1) EXPECT_TRUE(checks.tag && !checks.key && checks.type);
    if (i % 5 == 2) EXPECT_TRUE(!checks.tag && checks.key && checks.type);
    if (i % 5 == 3) EXPECT_TRUE(checks.tag && checks.key && !checks.type);
  }
  EXPECT_EQ(agreements, 200);
}

TEST_F(SchemeTest, RhoTamperingFailsTypeEquation) {
  Level2Ciphertext c = enc2(*par_, alice_->pk, message(), 6, rng);
  c.rho = 5;
  const Level2Checks checks = check2(*par_, alice_->pk, c);
  EXPECT_TRUE(checks.tag && checks.key);
  EXPECT_FALSE(checks.type);
  EXPECT_FALSE(verify2(*par_, alice_->pk, c, rng));
  c.rho = 11;
  EXPECT_FALSE(verify2(*par_, alice_->pk, c, rng));
}

}  // namespace
}  // namespace kapre
