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

#include <sys/stat.h>

#include <filesystem>

#include "kapre/codec.hpp"
#include "kapre/errors.hpp"

namespace kapre::codec {
namespace {

namespace fs = std::filesystem;

class KeystoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("kapre-ks-" + std::to_string(::getpid()) + "-" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  static mode_t mode_of(const fs::path& p) {
    struct stat st {};
    EXPECT_EQ(::stat(p.c_str(), &st), 0);
    return st.st_mode & 0777;
  }

  fs::path root_;
  SeededRandom rng{51, "keystore"};
};

TEST_F(KeystoreTest, LayoutAndRoundTrip) {
  Keystore ks(root_);
  const Params par = setup(PairingContext::bls12_381(), 16, rng);
  const KeyPair a = keygen(par, 3, rng), b = keygen(par, 3, rng);
  ks.write_params(par, false);
  ks.write_user("alice", a, fingerprint(par));
  ks.write_user("bob", b, fingerprint(par));
  const GrantFile grant{fingerprint(par), key_id(a.pk), key_id(b.pk),
                        rekeygen(par, TypeSet{1, 3}, a.sk, a.pk, b.pk)};
  ks.write_grant("alice", "bob", grant);

  EXPECT_TRUE(fs::exists(root_ / "params.kpar"));
  EXPECT_TRUE(fs::exists(root_ / "users" / "alice" / "key.kpub"));
  EXPECT_TRUE(fs::exists(root_ / "users" / "alice" / "key.ksec"));
  EXPECT_TRUE(fs::exists(root_ / "grants" / "alice-bob.krk"));

  EXPECT_EQ(ks.read_params(), par);
  EXPECT_EQ(ks.read_public_key("alice").key, a.pk);
  EXPECT_EQ(ks.read_secret_key("bob").key, b.sk);
  EXPECT_EQ(ks.read_grant("alice", "bob"), grant);
  EXPECT_TRUE(ks.has_user("alice"));
  EXPECT_FALSE(ks.has_user("carol"));
  EXPECT_TRUE(ks.has_grant("alice", "bob"));
  EXPECT_FALSE(ks.has_grant("bob", "alice"));

  const Bytes stored = read_file(root_ / "params.kpar");
  EXPECT_TRUE(is_armored(stored));
}

TEST_F(KeystoreTest, SecretKeysAreOwnerOnly) {
  const mode_t old = ::umask(0);
  Keystore ks(root_);
  const Params par = setup(PairingContext::bls12_381(), 16, rng);
  ks.write_user("alice", keygen(par, 2, rng), fingerprint(par));
  ::umask(old);
  EXPECT_EQ(mode_of(ks.secret_key_path("alice")), 0600u);
  EXPECT_EQ(mode_of(ks.public_key_path("alice")) & 0600u, 0600u);
}

TEST_F(KeystoreTest, RefusesToOverwrite) {
  Keystore ks(root_);
  const Params par = setup(PairingContext::bls12_381(), 16, rng);
  ks.write_params(par, false);
  EXPECT_THROW(ks.write_params(par, false), Error);
  EXPECT_NO_THROW(ks.write_params(par, true));
  const KeyPair a = keygen(par, 2, rng);
  ks.write_user("alice", a, fingerprint(par));
  EXPECT_THROW(ks.write_user("alice", a, fingerprint(par)), Error);
}

TEST_F(KeystoreTest, AtomicWriteLeavesNoTemporaries) {
  fs::create_directories(root_);
  const fs::path target = root_ / "f.bin";
  for (int i = 0; i < 5; ++i) write_file_atomic(target, Bytes(100 + i, 0x61));
  EXPECT_EQ(read_file(target), Bytes(104, 0x61));
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(root_)) ++entries;
  EXPECT_EQ(entries, 1u);
}

TEST_F(KeystoreTest, NamesAreValidated) {
  EXPECT_TRUE(Keystore::valid_name("alice_01"));
  EXPECT_TRUE(Keystore::valid_name(std::string(64, 'a')));
  for (std::string bad : {"", "a-b", "../x", "a b", "a/b", "é"}) {
    EXPECT_FALSE(Keystore::valid_name(bad)) << bad;
  }
  EXPECT_FALSE(Keystore::valid_name(std::string(65, 'a')));
  Keystore ks(root_);
  EXPECT_THROW(ks.public_key_path("../etc"), Error);
  EXPECT_THROW(ks.grant_path("a", "b-c"), Error);
}

TEST_F(KeystoreTest, MissingFilesReportIo) {
  Keystore ks(root_);
  try {
    ks.read_params();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

}  // namespace
}  // namespace kapre::codec
