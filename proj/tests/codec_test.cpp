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

#include "kapre/codec.hpp"
#include "kapre/errors.hpp"
#include "support/oracle.hpp"

namespace kapre::codec {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected kapre::Error";
  return ErrorCode::kIo;
}

class CodecTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    SeededRandom rng(41, "codec-test");
    par_ = new Params(setup(PairingContext::bls12_381(), 32, rng));
    a_ = new KeyPair(keygen(*par_, 4, rng));
    b_ = new KeyPair(keygen(*par_, 4, rng));
  }
  static void TearDownTestSuite() {
    delete par_;
    delete a_;
    delete b_;
  }

  Ciphertext2File sample_ct2() {
    Bytes m(par_->message_len, 0x42);
    return Ciphertext2File{fingerprint(*par_), key_id(a_->pk),
                           enc2(*par_, a_->pk, m, 3, rng), Bytes{1, 2, 3, 4}};
  }

  static inline Params* par_ = nullptr;
  static inline KeyPair* a_ = nullptr;
  static inline KeyPair* b_ = nullptr;
  SeededRandom rng{42, "codec-body"};
};

TEST_F(CodecTest, AllKindsRoundTrip) {
  const Fingerprint fp = fingerprint(*par_);
  EXPECT_EQ(decode_params(encode(*par_)), *par_);

  const PublicKeyFile pk{fp, a_->pk};
  EXPECT_EQ(decode_public_key(encode(pk)), pk);

  const SecretKeyFile sk{fp, a_->sk};
  EXPECT_EQ(decode_secret_key(encode(sk)), sk);

  const ReKey rk = rekeygen(*par_, TypeSet{1, 3, 4}, a_->sk, a_->pk, b_->pk);
  const GrantFile grant{fp, key_id(a_->pk), key_id(b_->pk), rk};
  EXPECT_EQ(decode_grant(encode(grant)), grant);

  const Ciphertext2File ct2 = sample_ct2();
  EXPECT_EQ(decode_ciphertext2(encode(ct2)), ct2);

  const Ciphertext1File ct1{fp, key_id(b_->pk), reenc(*par_, a_->pk, rk, ct2.ct, rng), {}};
  EXPECT_EQ(decode_ciphertext1(encode(ct1)), ct1);
}

TEST_F(CodecTest, EncodingIsCanonical) {
  const Bytes e = encode(sample_ct2());
  EXPECT_EQ(encode(decode_ciphertext2(e)), e);
  const Bytes p = encode(PublicKeyFile{fingerprint(*par_), a_->pk});
  EXPECT_EQ(encode(decode_public_key(p)), p);
}

TEST_F(CodecTest, HeaderLayout) {
  const Bytes e = encode(*par_);
  ASSERT_GE(e.size(), kHeaderBytes);
  EXPECT_EQ(std::string(e.begin(), e.begin() + 5), "KAPRE");
  EXPECT_EQ(e[5], 0x01);
  EXPECT_EQ(e[6], 0x01);
  EXPECT_EQ(peek_kind(encode(sample_ct2())), Kind::kCiphertext2);
}

TEST_F(CodecTest, RejectsBadHeaders) {
  Bytes e = encode(PublicKeyFile{fingerprint(*par_), a_->pk});
  Bytes bad = e;
  bad[0] = 'X';
  EXPECT_EQ(code_of([&] { decode_public_key(bad); }), ErrorCode::kBadMagic);
  bad = e;
  bad[5] = 0x02;
  EXPECT_EQ(code_of([&] { decode_public_key(bad); }), ErrorCode::kBadVersion);
  bad = e;
  bad[6] = 0x09;
  EXPECT_EQ(code_of([&] { decode_public_key(bad); }), ErrorCode::kBadKind);
  EXPECT_EQ(code_of([&] { decode_secret_key(e); }), ErrorCode::kBadKind);
  EXPECT_EQ(code_of([&] { decode_public_key(Bytes{'K', 'A', 'P'}); }), ErrorCode::kTruncated);
  EXPECT_EQ(code_of([&] { decode_public_key(Bytes{}); }), ErrorCode::kTruncated);
}

TEST_F(CodecTest, RejectsTruncationAndTrailingBytes) {
  const Bytes e = encode(sample_ct2());
  for (std::size_t cut : {std::size_t{8}, std::size_t{40}, e.size() / 2, e.size() - 1}) {
    EXPECT_EQ(code_of([&] { decode_ciphertext2(ByteView(e).first(cut)); }), ErrorCode::kTruncated)
        << "cut at " << cut;
  }
  Bytes longer = e;
  longer.push_back(0);
  EXPECT_EQ(code_of([&] { decode_ciphertext2(longer); }), ErrorCode::kTrailingGarbage);
}

TEST_F(CodecTest, KindWithForeignBodyIsMalformed) {
  Bytes e = encode(SecretKeyFile{fingerprint(*par_), a_->sk});
  e[6] = static_cast<std::uint8_t>(Kind::kPublicKey);
  EXPECT_EQ(code_of([&] { decode_public_key(e); }), ErrorCode::kMalformed);
}

TEST_F(CodecTest, ElementOutsideSubgroupIsInvalid) {
  const blst_p1_affine bad = testing::g1_point_outside_subgroup(5);
  ASSERT_FALSE(testing::g1_killed_by_order(bad));
  Ciphertext2File f = sample_ct2();
  Bytes e = encode(f);
  // c1 is the first element field: header, params, owner, rho, k, then c1.
  const std::size_t c1_offset = kHeaderBytes + (4 + 8) + (4 + 8) + (4 + 4) + (4 + 32) + 4;
  const auto c1 = f.ct.c1.encode();
  ASSERT_TRUE(std::equal(c1.begin(), c1.end(), e.begin() + c1_offset));
  blst_p1_affine_compress(e.data() + c1_offset, &bad);
  EXPECT_EQ(code_of([&] { decode_ciphertext2(e); }), ErrorCode::kInvalidElement);
}

TEST_F(CodecTest, InconsistentHalvesAreInvalid) {
  Bytes e = encode(PublicKeyFile{fingerprint(*par_), a_->pk});
  // Swap the G2 half of pk1 with that of pk2.
  const std::size_t pk1 = kHeaderBytes + (4 + 8) + (4 + 4) + 4;
  const std::size_t pk2 = pk1 + SourceElement::kBytes + 4;
  std::swap_ranges(e.begin() + pk1 + SourceElement::kFirstBytes,
                   e.begin() + pk1 + SourceElement::kBytes,
                   e.begin() + pk2 + SourceElement::kFirstBytes);
  EXPECT_EQ(code_of([&] { decode_public_key(e); }), ErrorCode::kInvalidElement);
}

TEST_F(CodecTest, NonCanonicalTypeBitmapIsMalformed) {
  // n = 4 leaves the top four bits of the single bitmap byte unused.
  const ReKey rk = rekeygen(*par_, TypeSet{2}, a_->sk, a_->pk, b_->pk);
  Bytes e = encode(GrantFile{fingerprint(*par_), key_id(a_->pk), key_id(b_->pk), rk});
  const std::size_t bitmap = kHeaderBytes + 3 * (4 + 8) + (4 + 4) + 4;
  ASSERT_EQ(e[bitmap], 0x02);
  e[bitmap] |= 0x80;
  EXPECT_EQ(code_of([&] { decode_grant(e); }), ErrorCode::kMalformed);
}

TEST_F(CodecTest, RekeyTokenIsTwoElements) {
  const ReKey rk = rekeygen(*par_, TypeSet{1, 2, 3, 4}, a_->sk, a_->pk, b_->pk);
  const Bytes token = rekey_token(rk);
  ASSERT_EQ(token.size(), 2 * SourceElement::kBytes);
  const auto r1 = rk.r1.encode();
  EXPECT_TRUE(std::equal(r1.begin(), r1.end(), token.begin()));
}

TEST_F(CodecTest, GrantLengthDoesNotDependOnSetSize) {
  const Fingerprint fp = fingerprint(*par_);
  const auto len = [&](const TypeSet& s) {
    return encode(GrantFile{fp, key_id(a_->pk), key_id(b_->pk),
                            rekeygen(*par_, s, a_->sk, a_->pk, b_->pk)})
        .size();
  };
  EXPECT_EQ(len(TypeSet{1}), len(TypeSet{1, 2, 3, 4}));
  EXPECT_EQ(len(TypeSet{}), len(TypeSet{2, 3}));
}

TEST_F(CodecTest, ArmorRoundTrips) {
  for (const Bytes& e : {encode(*par_), encode(sample_ct2()),
                         encode(SecretKeyFile{fingerprint(*par_), a_->sk})}) {
    const std::string text = armor(e);
    EXPECT_TRUE(text.starts_with("-----BEGIN KAPRE "));
    EXPECT_EQ(dearmor(text), e);
    EXPECT_EQ(unwrap(Bytes(text.begin(), text.end())), e);
    EXPECT_EQ(unwrap(e), e);
  }
  const std::string text = armor(encode(*par_));
  EXPECT_TRUE(text.starts_with("-----BEGIN KAPRE PARAMS-----\n"));
  EXPECT_TRUE(text.ends_with("-----END KAPRE PARAMS-----\n"));
}

TEST_F(CodecTest, ArmorRejectsDamage) {
  const std::string text = armor(encode(sample_ct2()));
  std::string bad = text;
  bad.replace(bad.find("CIPHERTEXT2-----\n"), 11, "CIPHERTEXT1");
  EXPECT_THROW(dearmor(bad), Error);
  bad = text;
  bad[40] = '*';
  EXPECT_THROW(dearmor(bad), Error);
  EXPECT_THROW(dearmor(text.substr(0, text.size() / 2)), Error);
  EXPECT_THROW(dearmor(text + "extra\n"), Error);
  EXPECT_THROW(dearmor("hello"), Error);
}

TEST_F(CodecTest, IdentifiersAreStable) {
  EXPECT_EQ(fingerprint(*par_), fingerprint(decode_params(encode(*par_))));
  EXPECT_FALSE(key_id(a_->pk) == key_id(b_->pk));
  EXPECT_EQ(to_hex(Bytes{0x00, 0xab, 0x10}), "00ab10");
}

TEST_F(CodecTest, RandomInputsNeverCrash) {
  const std::vector<Bytes> valid = {
      encode(*par_), encode(PublicKeyFile{fingerprint(*par_), a_->pk}),
      encode(SecretKeyFile{fingerprint(*par_), a_->sk}), encode(sample_ct2())};
  const std::vector<std::function<void(ByteView)>> decoders = {
      [](ByteView b) { decode_params(b); },     [](ByteView b) { decode_public_key(b); },
      [](ByteView b) { decode_secret_key(b); }, [](ByteView b) { decode_grant(b); },
      [](ByteView b) { decode_ciphertext2(b); }, [](ByteView b) { decode_ciphertext1(b); }};
  int rejected = 0;
  for (int i = 0; i < 1000; ++i) {
    Bytes input = testing::random_bytes(rng, testing::random_between(rng, 0, 300));
    if (i % 2 == 1) {
      input = valid[i % valid.size()];
      input[testing::random_between(rng, 0, static_cast<std::uint32_t>(input.size() - 1))] ^=
          static_cast<std::uint8_t>(testing::random_between(rng, 1, 255));
    }
    for (const auto& decode : decoders) {
      try {
        decode(input);
      } catch (const Error&) {
        ++rejected;
      }
    }
  }
  // Pure random bytes never carry the magic, so at least those are rejected
  // by every decoder.
  EXPECT_GE(rejected, 500 * 6);
}

}  // namespace
}  // namespace kapre::codec
