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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "kapre/bench.hpp"
#include "kapre/codec.hpp"
#include "kapre/scheme.hpp"

namespace kapre::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

Bytes slurp_bytes(const fs::path& p) {
  const std::string s = slurp(p);
  return Bytes(s.begin(), s.end());
}

void spit(const fs::path& p, ByteView data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("kapre-cli-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ks_ = (dir_ / "ks").string();
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Spawns the binary in dir_ with KAPRE_KEYSTORE unset unless `env_keystore`.
  Result spawn(const std::vector<std::string>& args,
               std::optional<std::string> env_keystore = std::nullopt) {
    std::string cmd = "cd " + quote(dir_.string()) + " && env -u KAPRE_KEYSTORE ";
    if (env_keystore) cmd += "KAPRE_KEYSTORE=" + quote(*env_keystore) + " ";
    cmd += quote(KAPRE_CLI_PATH);
    for (const std::string& a : args) cmd += " " + quote(a);
    const fs::path out = dir_ / ".stdout", err = dir_ / ".stderr";
    cmd += " > " + quote(out.string()) + " 2> " + quote(err.string());
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    transcript_ += r.out + r.err;
    return r;
  }

  // Runs with --keystore pointing at ks_.
  Result kapre(std::vector<std::string> args) {
    args.insert(args.begin(), {"--keystore", ks_});
    return spawn(args);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::string ks_;
  std::string transcript_;
};

TEST_F(CliTest, ThreeRoleScenario) {
  ASSERT_EQ(kapre({"setup", "--l", "32"}).code, 0);
  ASSERT_EQ(kapre({"keygen", "alice", "--types", "10"}).code, 0);
  ASSERT_EQ(kapre({"keygen", "bob", "--types", "10"}).code, 0);
  ASSERT_EQ(kapre({"grant", "alice", "bob", "--set", "1,3,5,8,9"}).code, 0);

  SeededRandom rng(61, "cli");
  Bytes m(32);
  rng.fill(m);
  spit(path("m.bin"), m);
  ASSERT_EQ(kapre({"encrypt", "--user", "alice", "--type", "3", "--in", path("m.bin"), "--raw",
                   "--out", path("m.kct2")}).code, 0);
  ASSERT_EQ(kapre({"reencrypt", "--from", "alice", "--to", "bob", "--in", path("m.kct2"),
                   "--out", path("m.kct1")}).code, 0);
  ASSERT_EQ(kapre({"decrypt", "--user", "bob", "--in", path("m.kct1"), "--out", path("m.out")}).code, 0);
  EXPECT_EQ(slurp_bytes(path("m.out")), m);

  ASSERT_EQ(kapre({"encrypt", "--user", "alice", "--type", "2", "--in", path("m.bin"), "--raw",
                   "--out", path("t2.kct2")}).code, 0);
  const Result denied = kapre({"reencrypt", "--from", "alice", "--to", "bob", "--in",
                               path("t2.kct2"), "--out", path("t2.kct1")});
  EXPECT_EQ(denied.code, kExitCrypto);
  EXPECT_NE(denied.err.find(kOpaqueFailure), std::string::npos);
  EXPECT_FALSE(fs::exists(path("t2.kct1")));

  // The owner can always open its own second-level ciphertexts.
  ASSERT_EQ(kapre({"decrypt", "--user", "alice", "--in", path("t2.kct2"), "--out", path("t2.out")}).code, 0);
  EXPECT_EQ(slurp_bytes(path("t2.out")), m);
  // Bob cannot.
  EXPECT_EQ(kapre({"decrypt", "--user", "bob", "--in", path("t2.kct2"), "--out", path("x")}).code,
            kExitCrypto);
}

TEST_F(CliTest, SetupExitCodes) {
  EXPECT_EQ(kapre({"setup", "--l", "32"}).code, 0);
  const Result again = kapre({"setup"});
  EXPECT_EQ(again.code, kExitUsage);
  EXPECT_NE(again.err.find("--force"), std::string::npos);
  EXPECT_EQ(kapre({"setup", "--force"}).code, 0);
  EXPECT_EQ(kapre({"setup", "--l", "8", "--force"}).code, kExitUsage);
  EXPECT_EQ(kapre({"setup", "--curve", "nope", "--force"}).code, kExitUsage);
  EXPECT_EQ(kapre({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(kapre({}).code, kExitUsage);
  EXPECT_EQ(kapre({"--help"}).code, 0);
}

TEST_F(CliTest, KeygenExitCodes) {
  EXPECT_EQ(kapre({"keygen", "alice", "--types", "4"}).code, kExitUsage);  // no params yet
  ASSERT_EQ(kapre({"setup"}).code, 0);
  EXPECT_EQ(kapre({"keygen", "alice", "--types", "0"}).code, kExitValidation);
  EXPECT_EQ(kapre({"keygen", "alice", "--types", "4"}).code, 0);
  EXPECT_EQ(kapre({"keygen", "alice", "--types", "4"}).code, kExitUsage);
  EXPECT_EQ(kapre({"keygen", "bad/name", "--types", "4"}).code, kExitUsage);
  struct stat st {};
  ASSERT_EQ(::stat((fs::path(ks_) / "users" / "alice" / "key.ksec").c_str(), &st), 0);
  EXPECT_EQ(st.st_mode & 0777, 0600u);
}

TEST_F(CliTest, GrantExitCodes) {
  ASSERT_EQ(kapre({"setup"}).code, 0);
  ASSERT_EQ(kapre({"keygen", "alice", "--types", "10"}).code, 0);
  EXPECT_EQ(kapre({"grant", "alice", "bob", "--set", "1"}).code, kExitUsage);  // bob unknown
  ASSERT_EQ(kapre({"keygen", "bob", "--types", "2"}).code, 0);
  EXPECT_EQ(kapre({"grant", "alice", "bob", "--set", "11"}).code, kExitValidation);
  EXPECT_EQ(kapre({"grant", "alice", "bob", "--set", "0"}).code, kExitValidation);
  EXPECT_EQ(kapre({"grant", "alice", "bob", "--set", "1,x"}).code, kExitValidation);
  const Result empty = kapre({"grant", "alice", "bob", "--set", ""});
  EXPECT_EQ(empty.code, 0);
  EXPECT_NE(empty.err.find("re-encrypts nothing"), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(ks_) / "grants" / "alice-bob.krk"));
  // The delegator's n bounds S, not the delegatee's.
  EXPECT_EQ(kapre({"grant", "alice", "bob", "--set", "10"}).code, 0);
}

TEST_F(CliTest, EncryptExitCodes) {
  ASSERT_EQ(kapre({"setup", "--l", "16"}).code, 0);
  ASSERT_EQ(kapre({"keygen", "alice", "--types", "3"}).code, 0);
  spit(path("m16"), Bytes(16, 1));
  spit(path("m15"), Bytes(15, 1));
  EXPECT_EQ(kapre({"encrypt", "--user", "alice", "--type", "4", "--in", path("m16"), "--raw"}).code,
            kExitValidation);
  EXPECT_EQ(kapre({"encrypt", "--user", "alice", "--type", "1", "--in", path("m15"), "--raw"}).code,
            kExitValidation);
  EXPECT_EQ(kapre({"encrypt", "--user", "alice", "--type", "1", "--in", path("none"), "--raw"}).code,
            kExitUsage);
  EXPECT_EQ(kapre({"encrypt", "--user", "alice", "--in", path("m16")}).code, kExitUsage);
  EXPECT_EQ(kapre({"encrypt", "--user", "alice", "--level", "1", "--type", "1", "--in",
                   path("m16")}).code, kExitUsage);
  EXPECT_EQ(kapre({"encrypt", "--user", "nobody", "--type", "1", "--in", path("m16")}).code,
            kExitUsage);
  EXPECT_EQ(kapre({"encrypt", "--user", "alice", "--type", "1", "--in", path("m16"), "--raw"}).code, 0);
  EXPECT_TRUE(fs::exists(path("m16.kct2")));
  EXPECT_EQ(kapre({"encrypt", "--user", "alice", "--level", "1", "--in", path("m15")}).code, 0);
  EXPECT_TRUE(fs::exists(path("m15.kct1")));
}

TEST_F(CliTest, HybridModeHandlesArbitraryFiles) {
  ASSERT_EQ(kapre({"setup"}).code, 0);
  ASSERT_EQ(kapre({"keygen", "alice", "--types", "4"}).code, 0);
  ASSERT_EQ(kapre({"keygen", "bob", "--types", "4"}).code, 0);
  ASSERT_EQ(kapre({"grant", "alice", "bob", "--set", "2,4"}).code, 0);
  for (std::size_t size : {std::size_t{0}, std::size_t{1}, std::size_t{100000}}) {
    SeededRandom rng(size, "hybrid");
    Bytes data(size);
    rng.fill(data);
    spit(path("f"), data);
    ASSERT_EQ(kapre({"encrypt", "--user", "alice", "--type", "4", "--in", path("f"), "--armor",
                     "--out", path("f.kct2")}).code, 0);
    ASSERT_EQ(kapre({"reencrypt", "--from", "alice", "--to", "bob", "--in", path("f.kct2"),
                     "--out", path("f.kct1")}).code, 0);
    ASSERT_EQ(kapre({"decrypt", "--user", "bob", "--in", path("f.kct1"), "--out", path("f.out")}).code, 0);
    EXPECT_EQ(slurp_bytes(path("f.out")), data) << size << " bytes";
  }
  // A damaged payload fails authentication.
  const Bytes env = codec::unwrap(slurp_bytes(path("f.kct1")));
  Bytes bad = env;
  bad[bad.size() - 20] ^= 0x01;
  spit(path("bad.kct1"), bad);
  EXPECT_EQ(kapre({"decrypt", "--user", "bob", "--in", path("bad.kct1"), "--out", path("x")}).code,
            kExitCrypto);
}

TEST_F(CliTest, TamperedLevel1FileExitsFour) {
  ASSERT_EQ(kapre({"setup"}).code, 0);
  ASSERT_EQ(kapre({"keygen", "bob", "--types", "2"}).code, 0);
  spit(path("m"), Bytes(32, 9));
  ASSERT_EQ(kapre({"encrypt", "--user", "bob", "--level", "1", "--in", path("m"), "--raw",
                   "--out", path("m.kct1")}).code, 0);
  const Bytes env = slurp_bytes(path("m.kct1"));

  // One offset inside every field: header, params, recipient, k, c1', c2',
  // c3', c4', c5', c6', and the payload length.
  std::vector<std::size_t> offsets = {0, 5, 6};
  std::size_t pos = codec::kHeaderBytes;
  for (std::size_t len : {std::size_t{8}, std::size_t{8}, std::size_t{32}, std::size_t{144},
                          std::size_t{576}, std::size_t{32}, std::size_t{144}, std::size_t{144},
                          std::size_t{32}, std::size_t{0}}) {
    offsets.push_back(pos + 3);           // length prefix
    if (len > 0) offsets.push_back(pos + 4 + len / 2);
    pos += 4 + len;
  }
  ASSERT_EQ(pos, env.size());
  for (std::size_t off : offsets) {
    Bytes bad = env;
    bad[off] ^= 0x04;
    spit(path("bad.kct1"), bad);
    const Result r = kapre({"decrypt", "--user", "bob", "--in", path("bad.kct1"), "--out", path("x")});
    EXPECT_EQ(r.code, kExitCrypto) << "offset " << off;
    EXPECT_NE(r.err.find(kOpaqueFailure), std::string::npos);
  }
  EXPECT_EQ(kapre({"decrypt", "--user", "bob", "--in", path("m.kct1"), "--out", path("ok")}).code, 0);
}

TEST_F(CliTest, KeystoreResolutionOrder) {
  const std::string flag = path("flag_ks"), env = path("env_ks");
  EXPECT_EQ(spawn({"--keystore", flag, "setup"}, env).code, 0);
  EXPECT_TRUE(fs::exists(fs::path(flag) / "params.kpar"));
  EXPECT_FALSE(fs::exists(fs::path(env) / "params.kpar"));

  EXPECT_EQ(spawn({"setup"}, env).code, 0);
  EXPECT_TRUE(fs::exists(fs::path(env) / "params.kpar"));
  EXPECT_FALSE(fs::exists(dir_ / "keystore"));

  EXPECT_EQ(spawn({"setup"}).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "keystore" / "params.kpar"));
}

TEST_F(CliTest, ResolveKeystoreInProcess) {
  const char* saved = std::getenv(kKeystoreEnv);
  const std::optional<std::string> keep = saved ? std::optional<std::string>(saved) : std::nullopt;
  ::setenv(kKeystoreEnv, "/env/path", 1);
  EXPECT_EQ(resolve_keystore("/flag/path"), "/flag/path");
  EXPECT_EQ(resolve_keystore(""), "/env/path");
  ::unsetenv(kKeystoreEnv);
  EXPECT_EQ(resolve_keystore(""), kDefaultKeystore);
  if (keep) ::setenv(kKeystoreEnv, keep->c_str(), 1);
}

TEST_F(CliTest, SeedNeedsInsecureMode) {
  const Result r = kapre({"--seed", "3", "setup"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("--insecure-test-mode"), std::string::npos);
  EXPECT_FALSE(fs::exists(fs::path(ks_) / "params.kpar"));
  EXPECT_EQ(kapre({"--seed", "3", "--insecure-test-mode", "setup"}).code, 0);
}

TEST_F(CliTest, SeededRunsMatchLibraryByteForByte) {
  const std::vector<std::string> seed = {"--seed", "7", "--insecure-test-mode"};
  auto seeded = [&](std::vector<std::string> args) {
    args.insert(args.begin(), seed.begin(), seed.end());
    return kapre(args);
  };
  const auto armored = [](const Bytes& env) {
    const std::string t = codec::armor(env);
    return Bytes(t.begin(), t.end());
  };
  const fs::path ks(ks_);

  ASSERT_EQ(seeded({"setup", "--l", "32"}).code, 0);
  SeededRandom setup_rng(7, rng_label("setup"));
  const Params par = setup(PairingContext::bls12_381(), 32, setup_rng);
  const codec::Fingerprint fp = codec::fingerprint(par);
  EXPECT_EQ(slurp_bytes(ks / "params.kpar"), armored(codec::encode(par)));

  ASSERT_EQ(seeded({"keygen", "alice", "--types", "5"}).code, 0);
  ASSERT_EQ(seeded({"keygen", "bob", "--types", "5"}).code, 0);
  SeededRandom ra(7, rng_label("keygen", "alice")), rb(7, rng_label("keygen", "bob"));
  const KeyPair alice = keygen(par, 5, ra), bob = keygen(par, 5, rb);
  EXPECT_EQ(slurp_bytes(ks / "users/alice/key.kpub"),
            armored(codec::encode(codec::PublicKeyFile{fp, alice.pk})));
  EXPECT_EQ(slurp_bytes(ks / "users/alice/key.ksec"),
            armored(codec::encode(codec::SecretKeyFile{fp, alice.sk})));
  EXPECT_EQ(slurp_bytes(ks / "users/bob/key.kpub"),
            armored(codec::encode(codec::PublicKeyFile{fp, bob.pk})));

  ASSERT_EQ(seeded({"grant", "alice", "bob", "--set", "2,3,5"}).code, 0);
  const ReKey rk = rekeygen(par, TypeSet{2, 3, 5}, alice.sk, alice.pk, bob.pk);
  EXPECT_EQ(slurp_bytes(ks / "grants/alice-bob.krk"),
            armored(codec::encode(codec::GrantFile{fp, codec::key_id(alice.pk),
                                                   codec::key_id(bob.pk), rk})));

  Bytes m(32);
  SeededRandom(8, "message").fill(m);
  spit(path("m"), m);
  ASSERT_EQ(seeded({"encrypt", "--user", "alice", "--type", "3", "--in", path("m"), "--raw",
                    "--out", path("m.kct2")}).code, 0);
  SeededRandom re(7, rng_label("encrypt", "alice"));
  const Level2Ciphertext c2 = enc2(par, alice.pk, m, 3, re);
  EXPECT_EQ(slurp_bytes(path("m.kct2")),
            codec::encode(codec::Ciphertext2File{fp, codec::key_id(alice.pk), c2, {}}));

  ASSERT_EQ(seeded({"reencrypt", "--from", "alice", "--to", "bob", "--in", path("m.kct2"),
                    "--out", path("m.kct1")}).code, 0);
  SeededRandom rr(7, rng_label("reencrypt", "alice", "bob"));
  const Level1Ciphertext c1 = reenc(par, alice.pk, rk, c2, rr);
  EXPECT_EQ(slurp_bytes(path("m.kct1")),
            codec::encode(codec::Ciphertext1File{fp, codec::key_id(bob.pk), c1, {}}));

  ASSERT_EQ(seeded({"decrypt", "--user", "bob", "--in", path("m.kct1"), "--out", path("m.out")}).code, 0);
  EXPECT_EQ(slurp_bytes(path("m.out")), dec1(par, bob.sk, c1));
  EXPECT_EQ(slurp_bytes(path("m.out")), m);

  // Hybrid: content key, then nonce, then the scheme's coins.
  const Bytes file = {'h', 'e', 'l', 'l', 'o'};
  spit(path("h"), file);
  ASSERT_EQ(seeded({"encrypt", "--user", "alice", "--type", "5", "--in", path("h"), "--out",
                    path("h.kct2")}).code, 0);
  SeededRandom rh(7, rng_label("encrypt", "alice"));
  Bytes content_key(32), nonce(kDemNonceBytes);
  rh.fill(content_key);
  rh.fill(nonce);
  const Bytes payload = dem_seal(content_key, nonce, file);
  const Level2Ciphertext h2 = enc2(par, alice.pk, content_key, 5, rh);
  EXPECT_EQ(slurp_bytes(path("h.kct2")),
            codec::encode(codec::Ciphertext2File{fp, codec::key_id(alice.pk), h2, payload}));
  EXPECT_EQ(dem_open(content_key, payload), file);
}

TEST_F(CliTest, OutputNeverContainsSecretKeyMaterial) {
  for (bool json : {false, true}) {
    std::vector<std::string> g = {"--seed", "11", "--insecure-test-mode"};
    if (json) g.push_back("--json");
    auto run = [&](std::vector<std::string> args) {
      args.insert(args.begin(), g.begin(), g.end());
      return kapre(args);
    };
    fs::remove_all(ks_);
    ASSERT_EQ(run({"setup"}).code, 0);
    ASSERT_EQ(run({"keygen", "alice", "--types", "3"}).code, 0);
    ASSERT_EQ(run({"keygen", "bob", "--types", "3"}).code, 0);
    ASSERT_EQ(run({"grant", "alice", "bob", "--set", "1,2"}).code, 0);
    spit(path("m"), Bytes(32, 0x11));
    ASSERT_EQ(run({"encrypt", "--user", "alice", "--type", "2", "--in", path("m"), "--raw",
                   "--out", path("m.kct2")}).code, 0);
    ASSERT_EQ(run({"reencrypt", "--from", "alice", "--to", "bob", "--in", path("m.kct2"),
                   "--out", path("m.kct1")}).code, 0);
    ASSERT_EQ(run({"decrypt", "--user", "bob", "--in", path("m.kct1"), "--out", path("o")}).code, 0);
    for (const char* user : {"alice", "bob"}) {
      const std::string f = (fs::path(ks_) / "users" / user / "key.ksec").string();
      ASSERT_EQ(run({"inspect", f}).code, 0);
    }
    run({"decrypt", "--user", "alice", "--in", path("m.kct1"), "--out", path("x")});
  }

  codec::Keystore ks(ks_);
  for (const char* user : {"alice", "bob"}) {
    const SecretKey sk = ks.read_secret_key(user).key;
    for (const Scalar* s : {&sk.a1, &sk.a2, &sk.a3}) {
      const auto bytes = s->to_bytes();
      const std::string hex = codec::to_hex(bytes);
      std::string upper = hex;
      for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      EXPECT_EQ(transcript_.find(hex.substr(0, 16)), std::string::npos);
      EXPECT_EQ(transcript_.find(upper.substr(0, 16)), std::string::npos);
      EXPECT_EQ(transcript_.find(std::string(bytes.begin(), bytes.begin() + 12)), std::string::npos);
    }
    // No line of the armored secret-key body appears either.
    std::istringstream armor(slurp(ks.secret_key_path(user)));
    std::string line;
    while (std::getline(armor, line)) {
      if (line.starts_with("-----")) continue;
      EXPECT_EQ(transcript_.find(line.substr(0, 24)), std::string::npos);
    }
  }
}

TEST_F(CliTest, InspectReportsMetadata) {
  ASSERT_EQ(kapre({"setup", "--l", "20"}).code, 0);
  ASSERT_EQ(kapre({"keygen", "alice", "--types", "6"}).code, 0);
  const Result r = kapre({"--json", "inspect", (fs::path(ks_) / "users/alice/key.kpub").string()});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["kind"], "PUBLIC KEY");
  EXPECT_EQ(j["n"], 6);
  EXPECT_EQ(j["key_id"].get<std::string>().size(), 16u);
  const Result p = kapre({"--json", "inspect", (fs::path(ks_) / "params.kpar").string()});
  EXPECT_EQ(nlohmann::json::parse(p.out)["l"], 20);
  spit(path("junk"), Bytes{'n', 'o', 'p', 'e'});
  EXPECT_EQ(kapre({"inspect", path("junk")}).code, kExitCrypto);
  EXPECT_EQ(kapre({"inspect", path("missing")}).code, kExitUsage);
}

TEST_F(CliTest, BenchWritesCsv) {
  const Result r = kapre({"bench", "--n", "2", "--set-frac", "1.0", "--iters", "30", "--out",
                          path("b.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path("b.csv"));
  const auto rows = bench::parse_csv(in);
  EXPECT_EQ(rows.size(), bench::operation_names().size());
  EXPECT_EQ(kapre({"bench", "--iters", "29"}).code, kExitValidation);
  EXPECT_EQ(kapre({"bench", "--set-frac", "1.5"}).code, kExitValidation);
}

}  // namespace
}  // namespace kapre::cli
