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

// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any
// criterion fails. Tolerances are the constants below.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kapre/bench.hpp"
#include "kapre/codec.hpp"
#include "kapre/errors.hpp"
#include "kapre/scheme.hpp"
#include "support/oracle.hpp"
#include "support/tamper.hpp"

namespace {

using namespace kapre;
namespace fs = std::filesystem;

constexpr std::uint32_t kCorrectnessTrials = 100;
constexpr double kCorrectnessBudgetSeconds = 120.0;
constexpr std::size_t kTokenToleranceBytes = 0;
constexpr double kRekeygenRatioLimit = 2.0;
constexpr std::uint32_t kRekeygenIterations = 50;
constexpr std::uint32_t kBatchValid = 200;
constexpr std::uint32_t kBatchCorrupted = 200;
constexpr std::uint32_t kBatchSoundnessTrials = 1000;
constexpr std::uint32_t kMutationsPerPart = 20;
constexpr std::uint32_t kPolicyTrials = 100;
constexpr std::uint32_t kFuzzCases = 10000;
constexpr std::uint32_t kRoundTripsPerKind = 100;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("unexpected exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s (%s; %.1fs)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

Bytes random_message(const Params& par, RandomSource& rng) {
  Bytes m(par.message_len);
  rng.fill(m);
  return m;
}

TypeSet random_nonempty_set(std::uint32_t n, RandomSource& rng) {
  std::set<std::uint32_t> s;
  while (s.empty()) {
    for (std::uint32_t v = 1; v <= n; ++v) {
      if (testing::random_between(rng, 0, 1)) s.insert(v);
    }
  }
  return TypeSet(s);
}

TypeSet first_types(std::uint32_t count) {
  std::set<std::uint32_t> s;
  for (std::uint32_t v = 1; v <= count; ++v) s.insert(v);
  return TypeSet(s);
}

Outcome correctness() {
  SeededRandom rng(1, "acceptance-correctness");
  const Params par = setup(PairingContext::bls12_381(), 32, rng);
  const auto start = std::chrono::steady_clock::now();
  std::uint32_t failed = 0, runs = 0;
  for (std::uint32_t n : {1u, 2u, 8u, 16u}) {
    const KeyPair alice = keygen(par, n, rng), bob = keygen(par, n, rng);
    for (std::uint32_t i = 0; i < kCorrectnessTrials; ++i) {
      const Bytes m = random_message(par, rng);
      const std::uint32_t rho = testing::random_between(rng, 1, n);
      if (dec2(par, alice.sk, alice.pk, enc2(par, alice.pk, m, rho, rng), rng) != m) ++failed;
      if (dec1(par, bob.sk, enc1(par, bob.pk, m, rng)) != m) ++failed;
      const TypeSet s = random_nonempty_set(n, rng);
      const std::vector<std::uint32_t> members(s.begin(), s.end());
      const std::uint32_t in_set =
          members[testing::random_between(rng, 0, static_cast<std::uint32_t>(members.size() - 1))];
      const ReKey rk = rekeygen(par, s, alice.sk, alice.pk, bob.pk);
      const Level1Ciphertext c1 = reenc(par, alice.pk, rk, enc2(par, alice.pk, m, in_set, rng), rng);
      if (dec1(par, bob.sk, c1) != m) ++failed;
      runs += 3;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << failed << "/" << runs << " round trips failed, " << secs << "s of "
    << kCorrectnessBudgetSeconds << "s budget";
  return {failed == 0 && secs < kCorrectnessBudgetSeconds, d.str()};
}

Outcome worked_example() {
  SeededRandom rng(2, "acceptance-worked");
  const Params par = setup(PairingContext::bls12_381(), 32, rng);
  const KeyPair alice = keygen(par, 10, rng), bob = keygen(par, 10, rng);
  const TypeSet s{1, 3, 5, 8, 9};
  const std::vector<std::uint32_t> expected = {10, 8, 6, 3, 2};
  std::vector<std::uint32_t> indices;
  for (std::uint32_t v : s) indices.push_back(10 + 1 - v);
  const PublicKey& pk = alice.pk;
  const SourceElement product =
      pk.power(10) * pk.power(8) * pk.power(6) * pk.power(3) * pk.power(2);
  const bool agg = aggregate(pk, s) == product;
  const bool r2 = rekeygen(par, s, alice.sk, alice.pk, bob.pk).r2 == product.pow(alice.sk.a2);
  std::ostringstream d;
  d << "indices {";
  for (std::size_t i = 0; i < indices.size(); ++i) d << (i ? "," : "") << indices[i];
  d << "}, aggregate " << (agg ? "matches" : "differs") << ", r2 " << (r2 ? "matches" : "differs");
  return {indices == expected && agg && r2, d.str()};
}

Outcome constant_token() {
  SeededRandom rng(3, "acceptance-token");
  const Params par = setup(PairingContext::bls12_381(), 32, rng);
  std::set<std::size_t> lengths;
  std::size_t cases = 0;
  for (std::uint32_t n : {16u, 64u, 256u}) {
    const KeyPair alice = keygen(par, n, rng), bob = keygen(par, n, rng);
    for (std::uint32_t size : {1u, n / 4, n}) {
      lengths.insert(codec::rekey_token(rekeygen(par, first_types(size), alice.sk, alice.pk, bob.pk)).size());
      ++cases;
    }
  }
  const std::size_t spread = *lengths.rbegin() - *lengths.begin();
  std::ostringstream d;
  d << cases << " cases, token " << *lengths.begin() << " bytes, spread " << spread;
  return {spread <= kTokenToleranceBytes, d.str()};
}

Outcome baseline_separation() {
  SeededRandom rng(4, "acceptance-baseline");
  const Params par = setup(PairingContext::bls12_381(), 32, rng);
  const KeyPair alice = keygen(par, 256, rng), bob = keygen(par, 256, rng);
  bool exact = true;
  for (std::uint32_t size : {1u, 16u, 64u, 256u}) {
    const TypeSet s = first_types(size);
    const std::size_t token = codec::rekey_token(rekeygen(par, s, alice.sk, alice.pk, bob.pk)).size();
    std::size_t measured = 0;
    for (const auto& [r1, r2] : bench::baseline_rekeygen(s, alice.sk, alice.pk, bob.pk)) {
      measured += r1.encode().size() + r2.encode().size();
    }
    exact = exact && measured == size * token && bench::baseline_rekey_bytes(size) == measured;
  }
  const std::size_t ours = codec::rekey_token(rekeygen(par, first_types(256), alice.sk, alice.pk, bob.pk)).size();
  const std::size_t naive = bench::baseline_rekey_bytes(256);
  std::ostringstream d;
  d << "baseline = |S| x token " << (exact ? "exactly" : "NOT exactly") << ", ratio " << ours << "/"
    << naive;
  return {exact && naive == 256 * ours, d.str()};
}

Outcome rekeygen_scaling() {
  bench::SweepConfig cfg;
  cfg.n_values = {16, 256};
  cfg.set_fractions = {1.0};
  cfg.iterations = kRekeygenIterations;
  cfg.operations = {"rekeygen"};
  const bench::BenchReport r = bench::run_sweep(cfg);
  const double ratio = r.median_of_means_ns[1] / r.median_of_means_ns[0];
  std::ostringstream d;
  d << "t(256)/t(16) = " << ratio << " over " << kRekeygenIterations
    << " iterations, limit " << kRekeygenRatioLimit;
  return {ratio < kRekeygenRatioLimit, d.str()};
}

// Corrupts exactly one of the tag and key equations.
void corrupt_one_equation(Level2Ciphertext& c, std::uint32_t which, RandomSource& rng) {
  const SourceElement junk = SourceElement::from_exponent(Scalar::random_nonzero(rng));
  if (which % 2 == 0) {
    c.c6 = c.c6 * junk;
  } else {
    c.c2 = c.c2 * junk;
  }
}

Outcome batch_soundness() {
  SeededRandom rng(6, "acceptance-batch");
  const Params par = setup(PairingContext::bls12_381(), 32, rng);
  const KeyPair alice = keygen(par, 8, rng);
  std::uint32_t disagree = 0, not_single = 0, passed = 0;
  for (std::uint32_t i = 0; i < kBatchValid + kBatchCorrupted; ++i) {
    Level2Ciphertext c =
        enc2(par, alice.pk, random_message(par, rng), testing::random_between(rng, 1, 8), rng);
    if (i >= kBatchValid) {
      corrupt_one_equation(c, i, rng);
      const Level2Checks k = check2(par, alice.pk, c);
      if (k.tag == k.key || !k.type) ++not_single;
    }
    const Level2Checks k = check2(par, alice.pk, c);
    if (verify2(par, alice.pk, c, rng) != (k.tag && k.key && k.type)) ++disagree;
  }
  for (std::uint32_t i = 0; i < kBatchSoundnessTrials; ++i) {
    Level2Ciphertext c =
        enc2(par, alice.pk, random_message(par, rng), testing::random_between(rng, 1, 8), rng);
    corrupt_one_equation(c, i, rng);
    if (verify2(par, alice.pk, c, rng)) ++passed;
  }
  std::ostringstream d;
  d << disagree << " disagreements over " << kBatchValid << "+" << kBatchCorrupted << ", "
    << passed << "/" << kBatchSoundnessTrials << " corrupted passed";
  return {disagree == 0 && not_single == 0 && passed == 0, d.str()};
}

Outcome tamper_suite() {
  const testing::Scenario s = testing::make_scenario(8, TypeSet{2, 4, 5, 7}, 7);
  SeededRandom rng(7, "acceptance-tamper");
  std::uint32_t wrong = 0, accepted = 0, total = 0;
  for (std::size_t part = 0; part < testing::kLevel2Parts.size(); ++part) {
    for (std::uint32_t i = 0; i < kMutationsPerPart; ++i, ++total) {
      Level2Ciphertext c = enc2(s.par, s.owner.pk, random_message(s.par, rng), 5, rng);
      testing::mutate_level2(c, part, i, rng);
      const testing::Stage got = testing::first_rejection_level2(s, c, rng);
      if (got == testing::Stage::kAccepted) ++accepted;
      if (got != testing::documented_stage_level2(part)) ++wrong;
    }
  }
  for (std::size_t part = 0; part < testing::kLevel1Parts.size(); ++part) {
    for (std::uint32_t i = 0; i < kMutationsPerPart; ++i, ++total) {
      const Bytes m = random_message(s.par, rng);
      Level1Ciphertext c = i % 2 == 0
                               ? enc1(s.par, s.delegatee.pk, m, rng)
                               : reenc(s.par, s.owner.pk, s.rk, enc2(s.par, s.owner.pk, m, 4, rng), rng);
      testing::mutate_level1(c, part, i, rng);
      const testing::Stage got = testing::first_rejection_level1(s, c);
      if (got == testing::Stage::kAccepted) ++accepted;
      if (got != testing::documented_stage_level1(part)) ++wrong;
    }
  }
  std::ostringstream d;
  d << total << " mutations, " << wrong << " off-stage, " << accepted << " accepted";
  return {wrong == 0 && accepted == 0, d.str()};
}

Outcome out_of_set_policy() {
  SeededRandom rng(8, "acceptance-policy");
  const Params par = setup(PairingContext::bls12_381(), 32, rng);
  const KeyPair alice = keygen(par, 8, rng), bob = keygen(par, 8, rng);
  const TypeSet s{1, 3, 6};
  const ReKey rk = rekeygen(par, s, alice.sk, alice.pk, bob.pk);
  const std::vector<std::uint32_t> outside = {2, 4, 5, 7, 8};
  std::uint32_t rejected = 0, garbled = 0, tag_ok = 0;
  for (std::uint32_t i = 0; i < kPolicyTrials; ++i) {
    const Bytes m = random_message(par, rng);
    const std::uint32_t rho = outside[i % outside.size()];
    const Level2Ciphertext c = enc2(par, alice.pk, m, rho, rng);
    try {
      reenc(par, alice.pk, rk, c, rng);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kTypeNotInSet) ++rejected;
    }
    const testing::OpenedLevel1 o =
        testing::open_level1(par, bob.sk, detail::transform(par, alice.pk, rk, c));
    if (o.tag) ++tag_ok;
    if (o.plaintext != m) ++garbled;
  }
  std::ostringstream d;
  d << "rejected " << rejected << "/" << kPolicyTrials << ", bypassed: garbled " << garbled << "/"
    << kPolicyTrials << " with tag verifying " << tag_ok << "/" << kPolicyTrials;
  return {rejected == kPolicyTrials && garbled == kPolicyTrials && tag_ok == kPolicyTrials,
          d.str()};
}

Outcome codec_totality() {
  SeededRandom rng(9, "acceptance-codec");
  using Decoder = std::function<void(ByteView)>;
  const std::vector<Decoder> decoders = {
      [](ByteView b) { codec::decode_params(b); },      [](ByteView b) { codec::decode_public_key(b); },
      [](ByteView b) { codec::decode_secret_key(b); },  [](ByteView b) { codec::decode_grant(b); },
      [](ByteView b) { codec::decode_ciphertext2(b); }, [](ByteView b) { codec::decode_ciphertext1(b); },
      [](ByteView b) { codec::dearmor(std::string(b.begin(), b.end())); }};

  std::uint32_t mismatches = 0;
  std::vector<Bytes> corpus;
  for (std::uint32_t i = 0; i < kRoundTripsPerKind; ++i) {
    const Params par = setup(PairingContext::bls12_381(), 16 + i % 17, rng);
    const std::uint32_t n = 1 + i % 6;
    const KeyPair a = keygen(par, n, rng), b = keygen(par, n, rng);
    const codec::Fingerprint fp = codec::fingerprint(par);
    const codec::PublicKeyFile pk{fp, a.pk};
    const codec::SecretKeyFile sk{fp, a.sk};
    const codec::GrantFile grant{fp, codec::key_id(a.pk), codec::key_id(b.pk),
                                 rekeygen(par, random_nonempty_set(n, rng), a.sk, a.pk, b.pk)};
    const Bytes payload = testing::random_bytes(rng, i % 40);
    const std::uint32_t rho = *grant.rekey.types.begin();
    const codec::Ciphertext2File ct2{fp, codec::key_id(a.pk),
                                     enc2(par, a.pk, random_message(par, rng), rho, rng), payload};
    const codec::Ciphertext1File ct1{fp, codec::key_id(b.pk),
                                     reenc(par, a.pk, grant.rekey, ct2.ct, rng), payload};
    const Bytes e[] = {codec::encode(par), codec::encode(pk),   codec::encode(sk),
                       codec::encode(grant), codec::encode(ct2), codec::encode(ct1)};
    mismatches += !(codec::decode_params(e[0]) == par);
    mismatches += !(codec::decode_public_key(e[1]) == pk);
    mismatches += !(codec::decode_secret_key(e[2]) == sk);
    mismatches += !(codec::decode_grant(e[3]) == grant);
    mismatches += !(codec::decode_ciphertext2(e[4]) == ct2);
    mismatches += !(codec::decode_ciphertext1(e[5]) == ct1);
    for (const Bytes& x : e) mismatches += codec::dearmor(codec::armor(x)) != x;
    if (i < 4) corpus.insert(corpus.end(), std::begin(e), std::end(e));
  }

  std::uint32_t crashes = 0;
  for (std::uint32_t i = 0; i < kFuzzCases; ++i) {
    Bytes input;
    switch (i % 4) {
      case 0:
        input = testing::random_bytes(rng, testing::random_between(rng, 0, 600));
        break;
      case 1: {  // valid header, random body
        input = corpus[i % corpus.size()];
        input.resize(codec::kHeaderBytes);
        const Bytes tail = testing::random_bytes(rng, testing::random_between(rng, 0, 600));
        input.insert(input.end(), tail.begin(), tail.end());
        break;
      }
      case 2: {  // byte flips in a valid envelope
        input = corpus[i % corpus.size()];
        for (std::uint32_t k = testing::random_between(rng, 1, 4); k > 0; --k) {
          input[testing::random_between(rng, 0, static_cast<std::uint32_t>(input.size() - 1))] ^=
              static_cast<std::uint8_t>(testing::random_between(rng, 1, 255));
        }
        break;
      }
      default: {  // truncated or extended valid envelope
        input = corpus[i % corpus.size()];
        input.resize(testing::random_between(rng, 0, static_cast<std::uint32_t>(input.size() + 8)));
        break;
      }
    }
    for (const Decoder& decode : decoders) {
      try {
        decode(input);
      } catch (const Error&) {
      } catch (...) {
        ++crashes;
      }
    }
  }
  std::ostringstream d;
  d << kFuzzCases << " fuzz inputs x " << decoders.size() << " decoders, " << crashes
    << " non-library failures; " << mismatches << " round-trip mismatches over "
    << kRoundTripsPerKind << " per kind";
  return {crashes == 0 && mismatches == 0, d.str()};
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Outcome cli_end_to_end() {
  const fs::path dir = fs::temp_directory_path() / ("kapre-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string ks = (dir / "ks").string();
  auto run = [&](const std::vector<std::string>& args) {
    std::string cmd = quote(KAPRE_CLI_PATH) + " --keystore " + quote(ks);
    for (const std::string& a : args) cmd += " " + quote(a);
    cmd += " > /dev/null 2>> " + quote((dir / "stderr").string());
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  auto at = [&](const char* name) { return (dir / name).string(); };

  SeededRandom rng(10, "acceptance-cli");
  Bytes input(32);
  rng.fill(input);
  {
    std::ofstream out(at("m.bin"), std::ios::binary);
    out.write(reinterpret_cast<const char*>(input.data()), static_cast<std::streamsize>(input.size()));
  }
  std::vector<int> codes = {
      run({"setup"}),
      run({"keygen", "alice", "--types", "10"}),
      run({"keygen", "bob", "--types", "10"}),
      run({"grant", "alice", "bob", "--set", "1,3,5,8,9"}),
      run({"encrypt", "--user", "alice", "--type", "3", "--in", at("m.bin"), "--raw", "--out", at("m.kct2")}),
      run({"reencrypt", "--from", "alice", "--to", "bob", "--in", at("m.kct2"), "--out", at("m.kct1")}),
      run({"decrypt", "--user", "bob", "--in", at("m.kct1"), "--out", at("m.out")})};
  const Bytes got = codec::read_file(at("m.out"));
  const int enc_type2 = run({"encrypt", "--user", "alice", "--type", "2", "--in", at("m.bin"),
                             "--raw", "--out", at("t.kct2")});
  const int denied = run({"reencrypt", "--from", "alice", "--to", "bob", "--in", at("t.kct2"),
                          "--out", at("t.kct1")});
  fs::remove_all(dir);

  bool ok = got == input && enc_type2 == 0 && denied == 4;
  std::ostringstream d;
  d << "exit codes";
  for (int c : codes) {
    d << " " << c;
    ok = ok && c == 0;
  }
  d << ", output " << (got == input ? "matches" : "differs") << ", type 2 reencrypt exits " << denied;
  return {ok, d.str()};
}

}  // namespace

int main() {
  report(1, "round trips for n in {1,2,8,16}", correctness);
  report(2, "worked aggregate example", worked_example);
  report(3, "constant re-key token size", constant_token);
  report(4, "per-type baseline key size", baseline_separation);
  report(5, "rekeygen scaling", rekeygen_scaling);
  report(6, "batch verification agreement and soundness", batch_soundness);
  report(7, "tamper rejection stages", tamper_suite);
  report(8, "out-of-set policy", out_of_set_policy);
  report(9, "codec totality", codec_totality);
  report(10, "CLI end to end", cli_end_to_end);
  std::printf("%s: %d criteria failed\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
