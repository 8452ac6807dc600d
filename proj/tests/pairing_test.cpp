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

#include "kapre/errors.hpp"
#include "kapre/pairing.hpp"
#include "support/oracle.hpp"

namespace kapre {
namespace {

using testing::ModP;

class PairingTest : public ::testing::Test {
 protected:
  SeededRandom rng{11, "pairing-test"};
  const SourceElement g = SourceElement::base();
};

TEST_F(PairingTest, ScalarArithmeticMatchesBignum) {
  for (int i = 0; i < 50; ++i) {
    const Scalar a = Scalar::random(rng), b = Scalar::random_nonzero(rng);
    EXPECT_EQ(a + b, ModP::add(a, b));
    EXPECT_EQ(a - b, ModP::sub(a, b));
    EXPECT_EQ(a * b, ModP::mul(a, b));
    EXPECT_EQ(b.inverse(), ModP::inv(b));
    EXPECT_EQ(a.pow(17), ModP::pow(a, 17));
    EXPECT_EQ(b * b.inverse(), Scalar::from_u64(1));
  }
  EXPECT_EQ(-Scalar::from_u64(1), ModP::minus_one());
}

TEST_F(PairingTest, ScalarDecodingIsStrict) {
  const auto& order = PairingContext::bls12_381().order;
  EXPECT_THROW(Scalar::from_bytes(order), Error);
  Bytes above(order.begin(), order.end());
  above.back() += 1;
  EXPECT_THROW(Scalar::from_bytes(above), Error);
  EXPECT_THROW(Scalar::from_bytes(Bytes(32, 0xff)), Error);
  EXPECT_THROW(Scalar::from_bytes(Bytes(31, 0)), Error);
  EXPECT_EQ(Scalar::from_bytes(ModP::minus_one().to_bytes()), ModP::minus_one());
  EXPECT_THROW(Scalar().inverse(), Error);
}

TEST_F(PairingTest, SmallExponentBilinearity) {
  const TargetElement z = pair(g, g);
  EXPECT_EQ(pair(g.pow(Scalar::from_u64(2)), g.pow(Scalar::from_u64(3))),
            gt_pow(z, Scalar::from_u64(6)));
}

TEST_F(PairingTest, IdentityPairsToIdentity) {
  const SourceElement h = SourceElement::from_exponent(Scalar::random_nonzero(rng));
  EXPECT_TRUE(pair(SourceElement::identity(), h).is_identity());
  EXPECT_TRUE(pair(h, SourceElement::identity()).is_identity());
}

TEST_F(PairingTest, PairIsSymmetricAndMatchesExponentProduct) {
  const TargetElement z = pair(g, g);
  for (int i = 0; i < 50; ++i) {
    const Scalar a = Scalar::random(rng), b = Scalar::random(rng);
    const TargetElement ab = pair(source_pow(g, a), source_pow(g, b));
    EXPECT_EQ(ab, pair(source_pow(g, b), source_pow(g, a)));
    EXPECT_EQ(ab, gt_pow(z, ModP::mul(a, b)));
  }
}

TEST_F(PairingTest, BilinearOverIndependentBases) {
  for (int i = 0; i < 10; ++i) {
    const SourceElement h = SourceElement::from_exponent(Scalar::random_nonzero(rng));
    const SourceElement k = SourceElement::from_exponent(Scalar::random_nonzero(rng));
    const Scalar a = Scalar::random(rng), b = Scalar::random(rng);
    EXPECT_EQ(pair(source_pow(h, a), source_pow(k, b)), gt_pow(pair(h, k), ModP::mul(a, b)));
  }
}

TEST_F(PairingTest, NonDegenerate) { EXPECT_FALSE(pair(g, g).is_identity()); }

TEST_F(PairingTest, PairingsEqualAgreesWithDirectComparison) {
  const Scalar a = Scalar::random_nonzero(rng), b = Scalar::random_nonzero(rng);
  const SourceElement ga = g.pow(a), gb = g.pow(b), gab = g.pow(a * b);
  EXPECT_TRUE(pairings_equal(ga, gb, gab, g));
  EXPECT_FALSE(pairings_equal(ga, gb, gab, ga));
}

TEST_F(PairingTest, SourcePowEdgeCases) {
  EXPECT_EQ(source_pow(g, Scalar::from_u64(1)), g);
  EXPECT_TRUE(source_pow(g, Scalar()).is_identity());
  for (int i = 0; i < 10; ++i) {
    const Scalar s = Scalar::random(rng);
    EXPECT_TRUE((source_pow(g, s) * source_pow(g, ModP::sub(Scalar(), s))).is_identity());
  }
  EXPECT_EQ(source_pow(g, ModP::minus_one()), g.inverse());
}

TEST_F(PairingTest, SourcePowComposesAsScalarProduct) {
  for (int i = 0; i < 50; ++i) {
    const Scalar a = Scalar::random(rng), b = Scalar::random(rng);
    EXPECT_EQ(source_pow(source_pow(g, a), b), source_pow(g, ModP::mul(a, b)));
  }
}

TEST_F(PairingTest, GroupLawHolds) {
  const SourceElement x = SourceElement::from_exponent(Scalar::random(rng));
  const SourceElement y = SourceElement::from_exponent(Scalar::random(rng));
  const SourceElement w = SourceElement::from_exponent(Scalar::random(rng));
  EXPECT_EQ((x * y) * w, x * (y * w));
  EXPECT_EQ(x * SourceElement::identity(), x);
  EXPECT_TRUE((x * x.inverse()).is_identity());
  const TargetElement t = pair(x, y);
  EXPECT_TRUE((t * t.inverse()).is_identity());
  EXPECT_EQ(t * TargetElement::identity(), t);
}

TEST_F(PairingTest, EncodingsRoundTrip) {
  for (int i = 0; i < 100; ++i) {
    const SourceElement e = SourceElement::from_exponent(Scalar::random(rng));
    const auto enc = e.encode();
    EXPECT_EQ(SourceElement::decode(enc), e);
    EXPECT_EQ(SourceElement::decode(enc).encode(), enc);
    const TargetElement t = pair(e, g);
    EXPECT_EQ(TargetElement::decode(t.encode()), t);
    const Scalar s = Scalar::random(rng);
    EXPECT_EQ(Scalar::from_bytes(s.to_bytes()), s);
  }
  EXPECT_TRUE(SourceElement::decode(SourceElement::identity().encode()).is_identity());
  EXPECT_TRUE(TargetElement::decode(TargetElement::identity().encode()).is_identity());
}

TEST_F(PairingTest, DecodeManyMatchesSingleDecodes) {
  Bytes joined;
  std::vector<SourceElement> expect;
  for (int i = 0; i < 9; ++i) {
    expect.push_back(SourceElement::from_exponent(Scalar::random(rng)));
    const auto enc = expect.back().encode();
    joined.insert(joined.end(), enc.begin(), enc.end());
  }
  EXPECT_EQ(SourceElement::decode_many(joined, expect.size()), expect);
  EXPECT_THROW(SourceElement::decode_many(joined, expect.size() + 1), Error);
}

TEST_F(PairingTest, MismatchedHalvesAreRejected) {
  const SourceElement a = SourceElement::from_exponent(Scalar::random_nonzero(rng));
  const SourceElement b = SourceElement::from_exponent(Scalar::random_nonzero(rng));
  auto enc = a.encode();
  const auto other = b.encode();
  std::copy(other.begin() + SourceElement::kFirstBytes, other.end(),
            enc.begin() + SourceElement::kFirstBytes);
  try {
    SourceElement::decode(enc);
    FAIL() << "decode accepted halves with different logarithms";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidElement);
  }
  Bytes joined(a.encode().begin(), a.encode().end());
  joined.insert(joined.end(), enc.begin(), enc.end());
  EXPECT_THROW(SourceElement::decode_many(joined, 2), Error);
  const std::vector<SourceElement> mixed = {a, SourceElement::from_halves(
                                                   [&] { blst_p1 p; blst_p1_from_affine(&p, &a.first()); return p; }(),
                                                   [&] { blst_p2 p; blst_p2_from_affine(&p, &b.second()); return p; }())};
  EXPECT_FALSE(dual_consistent(mixed));
  EXPECT_TRUE(dual_consistent(std::vector<SourceElement>{a, b}));
}

TEST_F(PairingTest, PointOutsideSubgroupIsRejected) {
  const blst_p1_affine bad = testing::g1_point_outside_subgroup();
  ASSERT_FALSE(testing::g1_killed_by_order(bad));
  ASSERT_TRUE(testing::g1_killed_by_order(g.first()));
  ASSERT_TRUE(testing::g2_killed_by_order(g.second()));

  auto enc = g.encode();
  blst_p1_affine_compress(enc.data(), &bad);
  try {
    SourceElement::decode(enc);
    FAIL() << "decode accepted a point outside the subgroup";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidElement);
  }
}

TEST_F(PairingTest, MalformedEncodingsAreRejected) {
  auto enc = g.encode();
  EXPECT_THROW(SourceElement::decode(ByteView(enc).first(100)), Error);
  enc[0] &= 0x7f;  // drop the compression flag
  EXPECT_THROW(SourceElement::decode(enc), Error);

  auto t = pair(g, g).encode();
  t[10] ^= 0x01;
  EXPECT_THROW(TargetElement::decode(t), Error);
  EXPECT_THROW(TargetElement::decode(Bytes(TargetElement::kBytes, 0)), Error);
  EXPECT_THROW(TargetElement::decode(Bytes(TargetElement::kBytes, 0xff)), Error);
}

TEST_F(PairingTest, HashToScalarIsDeterministicAndDomainSeparated) {
  for (int i = 0; i < 100; ++i) {
    const Bytes x = testing::random_bytes(rng, 1 + i);
    EXPECT_EQ(hash_to_scalar("H", x), hash_to_scalar("H", x));
    EXPECT_FALSE(hash_to_scalar("H", x) == hash_to_scalar("H1", x));
  }
}

TEST_F(PairingTest, HashToScalarNeverReturnsZero) {
  for (int i = 0; i < 1000; ++i) {
    EXPECT_FALSE(hash_to_scalar("H", testing::random_bytes(rng, 24)).is_zero());
  }
}

TEST_F(PairingTest, MaskIsLengthExactAndBinderSensitive) {
  const TargetElement k = pair(g, g.pow(Scalar::random(rng)));
  const SourceElement b = SourceElement::from_exponent(Scalar::random(rng));
  const Bytes mask = mask_bytes(k, b, 32);
  EXPECT_EQ(mask.size(), 32u);
  EXPECT_EQ(mask_bytes(k, b, 32), mask);
  EXPECT_EQ(mask_bytes(k, b, 77).size(), 77u);

  const Bytes m = testing::random_bytes(rng, 32);
  EXPECT_EQ(xor_bytes(xor_bytes(m, mask), mask), m);

  for (int i = 0; i < 100; ++i) {
    const SourceElement b2 = SourceElement::from_exponent(Scalar::random(rng));
    ASSERT_FALSE(b2 == b);
    EXPECT_FALSE(mask_bytes(k, b2, 32) == mask);
  }
  EXPECT_FALSE(mask_bytes(k * k, b, 32) == mask);
}

TEST_F(PairingTest, XorRejectsUnequalLengths) {
  EXPECT_THROW(xor_bytes(Bytes(3), Bytes(4)), Error);
  EXPECT_TRUE(bytes_equal(Bytes{1, 2, 3}, Bytes{1, 2, 3}));
  EXPECT_FALSE(bytes_equal(Bytes{1, 2, 3}, Bytes{1, 2, 4}));
  EXPECT_FALSE(bytes_equal(Bytes{1, 2, 3}, Bytes{1, 2}));
}

TEST_F(PairingTest, ContextDescribesCurve) {
  const PairingContext& ctx = PairingContext::bls12_381();
  EXPECT_EQ(ctx.source_bytes, 144u);
  EXPECT_EQ(ctx.target_bytes, 576u);
  EXPECT_EQ(ctx.scalar_bytes, 32u);
  EXPECT_EQ(&PairingContext::by_name("bls12-381"), &ctx);
  EXPECT_THROW(PairingContext::by_name("bn254"), Error);
}

}  // namespace
}  // namespace kapre
