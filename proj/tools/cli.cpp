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

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "kapre/bench.hpp"
#include "kapre/codec.hpp"
#include "kapre/errors.hpp"
#include "kapre/scheme.hpp"

namespace kapre::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr long long kMaxMessageBytes = 1 << 16;
constexpr long long kMaxTypes = 1 << 16;

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void usage_error(std::string message) {
  throw Failure{kExitUsage, std::move(message)};
}
[[noreturn]] void validation_error(std::string message) {
  throw Failure{kExitValidation, std::move(message)};
}
[[noreturn]] void opaque_failure() { throw Failure{kExitCrypto, kOpaqueFailure}; }

// Every library error inside `f` becomes the opaque failure.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    opaque_failure();
  }
}

struct Globals {
  std::string keystore;
  bool json = false;
  std::uint64_t seed = 0;
  bool seeded = false;
  bool insecure = false;
};

class Session {
 public:
  Session(const Globals& g, std::ostream& out, std::ostream& err)
      : g_(g), out_(out), err_(err), ks_(resolve_keystore(g.keystore)) {}

  codec::Keystore& keystore() { return ks_; }
  std::ostream& err() { return err_; }

  std::unique_ptr<RandomSource> rng(const std::string& label) const {
    if (g_.seeded) return std::make_unique<SeededRandom>(g_.seed, label);
    return std::make_unique<SystemRandom>();
  }

  void report(const Json& j, const std::string& human) {
    if (g_.json) {
      out_ << j.dump() << '\n';
    } else {
      out_ << human;
    }
  }

  void write_stdout(ByteView data) {
    out_.write(reinterpret_cast<const char*>(data.data()),
               static_cast<std::streamsize>(data.size()));
    out_.flush();
  }

  const Params& params() {
    if (!params_) {
      if (!ks_.has_params()) {
        usage_error("no parameters in keystore " + ks_.root().string() +
                    "; run `kapre setup` first");
      }
      params_ = guarded([&] { return ks_.read_params(); });
      fp_ = codec::fingerprint(*params_);
    }
    return *params_;
  }

  const codec::Fingerprint& fingerprint() {
    params();
    return fp_;
  }

  PublicKey public_key(const std::string& user) {
    require_user_file(ks_.public_key_path(user), user, "public key");
    const codec::PublicKeyFile f = guarded([&] { return ks_.read_public_key(user); });
    if (f.params != fingerprint()) opaque_failure();
    return f.key;
  }

  SecretKey secret_key(const std::string& user) {
    require_user_file(ks_.secret_key_path(user), user, "secret key");
    const codec::SecretKeyFile f = guarded([&] { return ks_.read_secret_key(user); });
    if (f.params != fingerprint()) opaque_failure();
    return f.key;
  }

 private:
  void require_user_file(const fs::path& path, const std::string& user, const char* what) {
    if (!fs::exists(path)) usage_error("no " + std::string(what) + " for user '" + user + "'");
  }

  Globals g_;
  std::ostream& out_;
  std::ostream& err_;
  codec::Keystore ks_;
  std::optional<Params> params_;
  codec::Fingerprint fp_{};
};

void require_name(const std::string& name) {
  if (!codec::Keystore::valid_name(name)) {
    usage_error("invalid name '" + name + "' (expected [A-Za-z0-9_]{1,64})");
  }
}

Bytes read_input(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) usage_error("cannot read input file " + path);
  try {
    return codec::read_file(path);
  } catch (const Error&) {
    usage_error("cannot read input file " + path);
  }
}

void write_output(const std::string& path, ByteView data, bool secret) {
  try {
    codec::write_file_atomic(path, data, secret);
  } catch (const Error& e) {
    usage_error(e.what());
  }
}

Bytes envelope_output(const Bytes& envelope, bool armored) {
  if (!armored) return envelope;
  const std::string text = codec::armor(envelope);
  return Bytes(text.begin(), text.end());
}

std::string hex(const codec::Fingerprint& f) { return codec::to_hex(f); }

std::optional<std::uint32_t> parse_index(std::string_view token) {
  if (token.empty() || token.size() > 9) return std::nullopt;
  std::uint32_t v = 0;
  for (char c : token) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint32_t>(c - '0');
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view list) {
  std::vector<std::string_view> out;
  if (trim(list).empty()) return out;
  for (;;) {
    const std::size_t comma = list.find(',');
    out.push_back(trim(list.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return out;
}

TypeSet parse_set(const std::string& list, std::uint32_t n) {
  std::set<std::uint32_t> members;
  for (std::string_view token : split_commas(list)) {
    const auto v = parse_index(token);
    if (!v) validation_error("bad type index '" + std::string(token) + "' in --set");
    if (*v < 1 || *v > n) {
      validation_error("type index " + std::to_string(*v) + " outside [1, " +
                       std::to_string(n) + "]");
    }
    members.insert(*v);
  }
  return TypeSet(std::move(members));
}

std::string join(const TypeSet& s) {
  std::string out;
  for (std::uint32_t t : s) {
    if (!out.empty()) out += ',';
    out += std::to_string(t);
  }
  return out;
}

std::string with_extension(const std::string& in, codec::Kind kind) {
  const std::string ext(codec::kind_extension(kind));
  for (codec::Kind k : {codec::Kind::kCiphertext2, codec::Kind::kCiphertext1}) {
    const std::string old(codec::kind_extension(k));
    if (in.size() > old.size() && in.compare(in.size() - old.size(), old.size(), old) == 0) {
      return in.substr(0, in.size() - old.size()) + ext;
    }
  }
  return in + ext;
}

// ---------------------------------------------------------------- commands

struct SetupArgs {
  long long l = 32;
  std::string curve = "bls12-381";
  bool force = false;
};

int cmd_setup(Session& s, const SetupArgs& a) {
  if (a.l < static_cast<long long>(kMinMessageBytes) || a.l > kMaxMessageBytes) {
    usage_error("--l must lie in [" + std::to_string(kMinMessageBytes) + ", " +
                std::to_string(kMaxMessageBytes) + "]");
  }
  const PairingContext* ctx = nullptr;
  try {
    ctx = &PairingContext::by_name(a.curve);
  } catch (const Error&) {
    usage_error("unknown curve '" + a.curve + "'");
  }
  codec::Keystore& ks = s.keystore();
  if (ks.has_params() && !a.force) {
    usage_error("parameters already exist in " + ks.root().string() +
                "; pass --force to overwrite");
  }
  const Params par = setup(*ctx, static_cast<std::uint32_t>(a.l), *s.rng(rng_label("setup")));
  try {
    ks.write_params(par, true);
  } catch (const Error& e) {
    usage_error(e.what());
  }
  const std::string fp = hex(codec::fingerprint(par));
  s.report({{"command", "setup"}, {"curve", ctx->curve}, {"l", a.l}, {"fingerprint", fp},
            {"path", ks.params_path().string()}},
           "params written to " + ks.params_path().string() + "\ncurve: " + ctx->curve +
               "\nl: " + std::to_string(a.l) + "\nfingerprint: " + fp + "\n");
  return kExitOk;
}

struct KeygenArgs {
  std::string user;
  long long types = 0;
};

int cmd_keygen(Session& s, const KeygenArgs& a) {
  require_name(a.user);
  if (a.types < 1 || a.types > kMaxTypes) {
    validation_error("--types must lie in [1, " + std::to_string(kMaxTypes) + "]");
  }
  const Params& par = s.params();
  codec::Keystore& ks = s.keystore();
  if (ks.has_user(a.user)) usage_error("user '" + a.user + "' already exists");
  const KeyPair kp = keygen(par, static_cast<std::uint32_t>(a.types),
                            *s.rng(rng_label("keygen", a.user)));
  try {
    ks.write_user(a.user, kp, s.fingerprint());
  } catch (const Error& e) {
    usage_error(e.what());
  }
  const std::string id = hex(codec::key_id(kp.pk));
  s.report({{"command", "keygen"}, {"user", a.user}, {"n", a.types}, {"key_id", id}},
           "keys for '" + a.user + "' written to " +
               ks.public_key_path(a.user).parent_path().string() +
               "\nn: " + std::to_string(a.types) + "\nkey id: " + id + "\n");
  return kExitOk;
}

struct GrantArgs {
  std::string from, to, set;
};

int cmd_grant(Session& s, const GrantArgs& a) {
  require_name(a.from);
  require_name(a.to);
  const Params& par = s.params();
  const SecretKey sk = s.secret_key(a.from);
  const PublicKey pk_from = s.public_key(a.from);
  const PublicKey pk_to = s.public_key(a.to);
  const TypeSet types = parse_set(a.set, pk_from.n);
  const ReKey rk = guarded([&] { return rekeygen(par, types, sk, pk_from, pk_to); });
  codec::Keystore& ks = s.keystore();
  const codec::GrantFile grant{s.fingerprint(), codec::key_id(pk_from), codec::key_id(pk_to), rk};
  try {
    ks.write_grant(a.from, a.to, grant);
  } catch (const Error& e) {
    usage_error(e.what());
  }
  if (types.empty()) s.err() << "warning: empty type set; this grant re-encrypts nothing\n";
  Json set = Json::array();
  for (std::uint32_t t : types) set.push_back(t);
  s.report({{"command", "grant"}, {"from", a.from}, {"to", a.to}, {"set", set},
            {"path", ks.grant_path(a.from, a.to).string()}},
           "grant written to " + ks.grant_path(a.from, a.to).string() + "\nS: {" +
               join(types) + "}\n");
  return kExitOk;
}

struct EncryptArgs {
  std::string user, in, out;
  long long type = 0;
  bool has_type = false;
  int level = 2;
  bool raw = false;
  bool armor = false;
};

int cmd_encrypt(Session& s, const EncryptArgs& a) {
  require_name(a.user);
  if (a.level != 1 && a.level != 2) usage_error("--level must be 1 or 2");
  if (a.level == 2 && !a.has_type) usage_error("second-level encryption needs --type");
  if (a.level == 1 && a.has_type) usage_error("--type applies to second-level encryption only");
  const Params& par = s.params();
  const PublicKey pk = s.public_key(a.user);
  if (a.level == 2 && (a.type < 1 || a.type > pk.n)) {
    validation_error("--type must lie in [1, " + std::to_string(pk.n) + "]");
  }
  const Bytes input = read_input(a.in);
  if (a.raw && input.size() != par.message_len) {
    validation_error("raw mode needs exactly " + std::to_string(par.message_len) +
                     " input bytes, got " + std::to_string(input.size()));
  }

  const auto rng = s.rng(rng_label("encrypt", a.user));
  Bytes message = input;
  Bytes payload;
  if (!a.raw) {
    message.assign(par.message_len, 0);
    rng->fill(message);
    Bytes nonce(kDemNonceBytes);
    rng->fill(nonce);
    payload = dem_seal(message, nonce, input);
  }

  Bytes envelope;
  codec::Kind kind;
  if (a.level == 2) {
    kind = codec::Kind::kCiphertext2;
    const auto ct = enc2(par, pk, message, static_cast<std::uint32_t>(a.type), *rng);
    envelope = codec::encode(codec::Ciphertext2File{s.fingerprint(), codec::key_id(pk), ct, payload});
  } else {
    kind = codec::Kind::kCiphertext1;
    const auto ct = enc1(par, pk, message, *rng);
    envelope = codec::encode(codec::Ciphertext1File{s.fingerprint(), codec::key_id(pk), ct, payload});
  }
  const std::string out = a.out.empty() ? with_extension(a.in, kind) : a.out;
  write_output(out, envelope_output(envelope, a.armor), false);

  Json j = {{"command", "encrypt"}, {"user", a.user}, {"level", a.level},
            {"mode", a.raw ? "raw" : "hybrid"}, {"out", out}};
  if (a.level == 2) j["type"] = a.type;
  s.report(j, "level-" + std::to_string(a.level) + " ciphertext written to " + out + "\n");
  return kExitOk;
}

struct ReencryptArgs {
  std::string from, to, in, out;
  bool armor = false;
};

int cmd_reencrypt(Session& s, const ReencryptArgs& a) {
  require_name(a.from);
  require_name(a.to);
  const Params& par = s.params();
  const PublicKey pk = s.public_key(a.from);
  codec::Keystore& ks = s.keystore();
  if (!ks.has_grant(a.from, a.to)) {
    usage_error("no grant from '" + a.from + "' to '" + a.to + "'");
  }
  const Bytes input = read_input(a.in);
  const codec::GrantFile grant = guarded([&] { return ks.read_grant(a.from, a.to); });
  const codec::Ciphertext2File ct =
      guarded([&] { return codec::decode_ciphertext2(codec::unwrap(input)); });
  const codec::Fingerprint owner = codec::key_id(pk);
  if (grant.params != s.fingerprint() || ct.params != s.fingerprint() ||
      grant.delegator != owner || ct.owner != owner) {
    opaque_failure();
  }
  const auto rng = s.rng(rng_label("reencrypt", a.from, a.to));
  const Level1Ciphertext c1 = guarded([&] { return reenc(par, pk, grant.rekey, ct.ct, *rng); });
  const Bytes envelope =
      codec::encode(codec::Ciphertext1File{s.fingerprint(), grant.delegatee, c1, ct.payload});
  const std::string out =
      a.out.empty() ? with_extension(a.in, codec::Kind::kCiphertext1) : a.out;
  write_output(out, envelope_output(envelope, a.armor), false);
  s.report({{"command", "reencrypt"}, {"from", a.from}, {"to", a.to}, {"out", out}},
           "level-1 ciphertext written to " + out + "\n");
  return kExitOk;
}

struct DecryptArgs {
  std::string user, in, out;
};

int cmd_decrypt(Session& s, const DecryptArgs& a) {
  require_name(a.user);
  const Params& par = s.params();
  const SecretKey sk = s.secret_key(a.user);
  const PublicKey pk = s.public_key(a.user);
  const Bytes input = read_input(a.in);
  const codec::Fingerprint me = codec::key_id(pk);

  const Bytes plaintext = guarded([&] {
    const Bytes envelope = codec::unwrap(input);
    Bytes message, payload;
    switch (codec::peek_kind(envelope)) {
      case codec::Kind::kCiphertext2: {
        const auto f = codec::decode_ciphertext2(envelope);
        if (f.params != s.fingerprint() || f.owner != me) opaque_failure();
        message = dec2(par, sk, pk, f.ct, *s.rng(rng_label("decrypt", a.user)));
        payload = f.payload;
        break;
      }
      case codec::Kind::kCiphertext1: {
        const auto f = codec::decode_ciphertext1(envelope);
        if (f.params != s.fingerprint() || f.recipient != me) opaque_failure();
        message = dec1(par, sk, f.ct);
        payload = f.payload;
        break;
      }
      default:
        opaque_failure();
    }
    return payload.empty() ? message : dem_open(message, payload);
  });

  if (a.out == "-") {
    s.write_stdout(plaintext);
    return kExitOk;
  }
  write_output(a.out, plaintext, true);
  s.report({{"command", "decrypt"}, {"user", a.user}, {"bytes", plaintext.size()},
            {"out", a.out}},
           std::to_string(plaintext.size()) + " bytes written to " + a.out + "\n");
  return kExitOk;
}

int cmd_inspect(Session& s, const std::string& path) {
  const Bytes input = read_input(path);
  Json j = {{"command", "inspect"}, {"file", path}, {"armored", codec::is_armored(input)}};
  guarded([&] {
    const Bytes env = codec::unwrap(input);
    const codec::Kind kind = codec::peek_kind(env);
    j["kind"] = std::string(codec::kind_name(kind));
    j["version"] = codec::kVersion;
    j["bytes"] = env.size();
    switch (kind) {
      case codec::Kind::kParams: {
        const Params par = codec::decode_params(env);
        j["curve"] = par.ctx->curve;
        j["l"] = par.message_len;
        j["fingerprint"] = hex(codec::fingerprint(par));
        break;
      }
      case codec::Kind::kPublicKey: {
        const auto f = codec::decode_public_key(env);
        j["params"] = hex(f.params);
        j["n"] = f.key.n;
        j["key_id"] = hex(codec::key_id(f.key));
        break;
      }
      case codec::Kind::kSecretKey: {
        const auto f = codec::decode_secret_key(env);
        j["params"] = hex(f.params);
        j["n"] = f.key.n;
        break;
      }
      case codec::Kind::kReKey: {
        const auto f = codec::decode_grant(env);
        j["params"] = hex(f.params);
        j["delegator"] = hex(f.delegator);
        j["delegatee"] = hex(f.delegatee);
        j["n"] = f.rekey.n;
        Json set = Json::array();
        for (std::uint32_t t : f.rekey.types) set.push_back(t);
        j["set"] = set;
        j["token_bytes"] = codec::rekey_token(f.rekey).size();
        break;
      }
      case codec::Kind::kCiphertext2: {
        const auto f = codec::decode_ciphertext2(env);
        j["params"] = hex(f.params);
        j["owner"] = hex(f.owner);
        j["type"] = f.ct.rho;
        j["mode"] = f.payload.empty() ? "raw" : "hybrid";
        j["payload_bytes"] = f.payload.size();
        break;
      }
      case codec::Kind::kCiphertext1: {
        const auto f = codec::decode_ciphertext1(env);
        j["params"] = hex(f.params);
        j["recipient"] = hex(f.recipient);
        j["mode"] = f.payload.empty() ? "raw" : "hybrid";
        j["payload_bytes"] = f.payload.size();
        break;
      }
    }
    return 0;
  });
  std::ostringstream human;
  for (const auto& [key, value] : j.items()) {
    if (key == "command") continue;
    human << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
  s.report(j, human.str());
  return kExitOk;
}

struct BenchArgs {
  std::string n = "16,64,256";
  std::string fractions = "0.25,1.0";
  long long iters = 50;
  std::string out;
  std::uint64_t seed = 1;
};

int cmd_bench(Session& s, const BenchArgs& a) {
  bench::SweepConfig cfg;
  cfg.n_values.clear();
  cfg.set_fractions.clear();
  for (std::string_view token : split_commas(a.n)) {
    const auto v = parse_index(token);
    if (!v || *v < 1 || *v > kMaxTypes) validation_error("bad --n value '" + std::string(token) + "'");
    cfg.n_values.push_back(*v);
  }
  for (std::string_view token : split_commas(a.fractions)) {
    double f = 0;
    std::istringstream in{std::string(token)};
    if (!(in >> f) || !in.eof() || !(f > 0.0 && f <= 1.0)) {
      validation_error("bad --set-frac value '" + std::string(token) + "'");
    }
    cfg.set_fractions.push_back(f);
  }
  if (cfg.n_values.empty() || cfg.set_fractions.empty()) {
    validation_error("--n and --set-frac need at least one value");
  }
  if (a.iters < bench::kMinIterations || a.iters > 100000) {
    validation_error("--iters must lie in [" + std::to_string(bench::kMinIterations) + ", 100000]");
  }
  cfg.iterations = static_cast<std::uint32_t>(a.iters);
  cfg.seed = a.seed;

  const bench::BenchReport report = bench::run_sweep(cfg);
  if (!a.out.empty()) {
    try {
      bench::emit_csv(report, a.out);
    } catch (const Error& e) {
      usage_error(e.what());
    }
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const bench::BenchRow& r = report.rows[i];
    rows.push_back({{"operation", r.operation}, {"n", r.n}, {"set_size", r.set_size},
                    {"mean_ns", r.mean_ns}, {"std_ns", r.std_ns},
                    {"median_of_means_ns", report.median_of_means_ns[i]},
                    {"iters", r.iters}, {"bytes", r.bytes}, {"seed", r.seed}});
  }
  std::string human = bench::summary(report);
  if (!a.out.empty()) human += "csv written to " + a.out + "\n";
  s.report({{"command", "bench"}, {"rows", rows}, {"out", a.out}}, human);
  return kExitOk;
}

}  // namespace

std::string resolve_keystore(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kKeystoreEnv); env != nullptr && *env != '\0') return env;
  return kDefaultKeystore;
}

std::string rng_label(std::string_view command, std::string_view a, std::string_view b) {
  std::string out(command);
  if (!a.empty()) out.append(":").append(a);
  if (!b.empty()) out.append(":").append(b);
  return out;
}

Bytes dem_seal(ByteView content_key, ByteView nonce, ByteView plaintext) {
  if (nonce.size() != kDemNonceBytes) {
    throw Error(ErrorCode::kInvalidArgument, "DEM nonce must be 12 bytes");
  }
  const std::string_view label = "kapre-dem";
  unsigned char key[32];
  unsigned int key_len = 0;
  Bytes keyed(label.begin(), label.end());
  keyed.insert(keyed.end(), content_key.begin(), content_key.end());
  EVP_Digest(keyed.data(), keyed.size(), key, &key_len, EVP_sha256(), nullptr);

  Bytes out(nonce.begin(), nonce.end());
  out.resize(kDemNonceBytes + plaintext.size() + kDemTagBytes);
  std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(EVP_CIPHER_CTX_new(),
                                                                       EVP_CIPHER_CTX_free);
  int len = 0;
  const bool ok =
      ctx && EVP_EncryptInit_ex(ctx.get(), EVP_chacha20_poly1305(), nullptr, key, nonce.data()) == 1 &&
      EVP_EncryptUpdate(ctx.get(), out.data() + kDemNonceBytes, &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) == 1 &&
      EVP_EncryptFinal_ex(ctx.get(), out.data() + kDemNonceBytes + len, &len) == 1 &&
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG, kDemTagBytes,
                          out.data() + kDemNonceBytes + plaintext.size()) == 1;
  OPENSSL_cleanse(key, sizeof(key));
  if (!ok) throw Error(ErrorCode::kInvalidArgument, "DEM encryption failed");
  return out;
}

Bytes dem_open(ByteView content_key, ByteView payload) {
  if (payload.size() < kDemNonceBytes + kDemTagBytes) {
    throw Error(ErrorCode::kInvalidCiphertext, "payload too short");
  }
  const std::string_view label = "kapre-dem";
  unsigned char key[32];
  unsigned int key_len = 0;
  Bytes keyed(label.begin(), label.end());
  keyed.insert(keyed.end(), content_key.begin(), content_key.end());
  EVP_Digest(keyed.data(), keyed.size(), key, &key_len, EVP_sha256(), nullptr);

  const std::size_t body = payload.size() - kDemNonceBytes - kDemTagBytes;
  Bytes out(body + 1);  // never zero-sized
  Bytes tag(payload.end() - kDemTagBytes, payload.end());
  std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(EVP_CIPHER_CTX_new(),
                                                                       EVP_CIPHER_CTX_free);
  int len = 0;
  const bool ok =
      ctx && EVP_DecryptInit_ex(ctx.get(), EVP_chacha20_poly1305(), nullptr, key, payload.data()) == 1 &&
      EVP_DecryptUpdate(ctx.get(), out.data(), &len, payload.data() + kDemNonceBytes,
                        static_cast<int>(body)) == 1 &&
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, kDemTagBytes, tag.data()) == 1 &&
      EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &len) == 1;
  OPENSSL_cleanse(key, sizeof(key));
  if (!ok) throw Error(ErrorCode::kInvalidCiphertext, "payload authentication failed");
  out.resize(body);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Key-aggregate proxy re-encryption", "kapre"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--keystore", g.keystore,
                 "Keystore directory (default: $KAPRE_KEYSTORE, then ./keystore)");
  app.add_flag("--json", g.json, "Machine-readable output");
  CLI::Option* seed_opt =
      app.add_option("--seed", g.seed, "Deterministic randomness (needs --insecure-test-mode)");
  app.add_flag("--insecure-test-mode", g.insecure, "Permit --seed; never for real keys");

  SetupArgs setup_args;
  CLI::App* setup_cmd = app.add_subcommand("setup", "Generate public parameters");
  setup_cmd->add_option("--l", setup_args.l, "Message length in bytes (>= 16)");
  setup_cmd->add_option("--curve", setup_args.curve, "Curve (bls12-381)");
  setup_cmd->add_flag("--force", setup_args.force, "Overwrite existing parameters");

  KeygenArgs keygen_args;
  CLI::App* keygen_cmd = app.add_subcommand("keygen", "Generate a user's key pair");
  keygen_cmd->add_option("user", keygen_args.user, "User name")->required();
  keygen_cmd->add_option("--types", keygen_args.types, "Number of file types n")->required();

  GrantArgs grant_args;
  CLI::App* grant_cmd = app.add_subcommand("grant", "Create a re-encryption key");
  grant_cmd->add_option("from", grant_args.from, "Delegator")->required();
  grant_cmd->add_option("to", grant_args.to, "Delegatee")->required();
  grant_cmd->add_option("--set", grant_args.set, "Comma-separated type indices")->required();

  EncryptArgs enc_args;
  CLI::App* enc_cmd = app.add_subcommand("encrypt", "Encrypt a file");
  enc_cmd->add_option("--user", enc_args.user, "Owner (level 2) or recipient (level 1)")
      ->required();
  CLI::Option* type_opt = enc_cmd->add_option("--type", enc_args.type, "File type (level 2)");
  enc_cmd->add_option("--level", enc_args.level, "Ciphertext level, 1 or 2 (default 2)");
  enc_cmd->add_option("--in", enc_args.in, "Input file")->required();
  enc_cmd->add_option("--out", enc_args.out, "Output file");
  enc_cmd->add_flag("--raw", enc_args.raw, "Encrypt exactly l bytes directly");
  enc_cmd->add_flag("--armor", enc_args.armor, "ASCII-armored output");

  ReencryptArgs re_args;
  CLI::App* re_cmd = app.add_subcommand("reencrypt", "Re-encrypt a level-2 ciphertext");
  re_cmd->add_option("--from", re_args.from, "Delegator")->required();
  re_cmd->add_option("--to", re_args.to, "Delegatee")->required();
  re_cmd->add_option("--in", re_args.in, "Level-2 ciphertext")->required();
  re_cmd->add_option("--out", re_args.out, "Output file");
  re_cmd->add_flag("--armor", re_args.armor, "ASCII-armored output");

  DecryptArgs dec_args;
  CLI::App* dec_cmd = app.add_subcommand("decrypt", "Decrypt a ciphertext of either level");
  dec_cmd->add_option("--user", dec_args.user, "Recipient")->required();
  dec_cmd->add_option("--in", dec_args.in, "Ciphertext")->required();
  dec_cmd->add_option("--out", dec_args.out, "Plaintext output, '-' for stdout")->required();

  std::string inspect_path;
  CLI::App* inspect_cmd = app.add_subcommand("inspect", "Print envelope metadata");
  inspect_cmd->add_option("file", inspect_path, "Envelope file")->required();

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run the benchmark sweep");
  bench_cmd->add_option("--n", bench_args.n, "Comma-separated type counts");
  bench_cmd->add_option("--set-frac", bench_args.fractions, "Comma-separated |S|/n fractions");
  bench_cmd->add_option("--iters", bench_args.iters, "Timed iterations per row (>= 30)");
  bench_cmd->add_option("--out", bench_args.out, "CSV output file");
  bench_cmd->add_option("--bench-seed", bench_args.seed, "Seed recorded in every row");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("kapre");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    g.seeded = seed_opt->count() > 0;
    if (g.seeded && !g.insecure) usage_error("--seed requires --insecure-test-mode");
    if (g.seeded) err << "warning: insecure test mode, randomness is deterministic\n";
    enc_args.has_type = type_opt->count() > 0;

    Session session(g, out, err);
    if (setup_cmd->parsed()) return cmd_setup(session, setup_args);
    if (keygen_cmd->parsed()) return cmd_keygen(session, keygen_args);
    if (grant_cmd->parsed()) return cmd_grant(session, grant_args);
    if (enc_cmd->parsed()) return cmd_encrypt(session, enc_args);
    if (re_cmd->parsed()) return cmd_reencrypt(session, re_args);
    if (dec_cmd->parsed()) return cmd_decrypt(session, dec_args);
    if (inspect_cmd->parsed()) return cmd_inspect(session, inspect_path);
    if (bench_cmd->parsed()) return cmd_bench(session, bench_args);
    usage_error("no command given");
  } catch (const Failure& f) {
    err << "kapre: " << f.message << '\n';
    return f.code;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) {
      err << "kapre: " << e.what() << '\n';
      return kExitUsage;
    }
    if (e.code() == ErrorCode::kInvalidArgument || e.code() == ErrorCode::kIndexOutOfRange) {
      err << "kapre: " << e.what() << '\n';
      return kExitValidation;
    }
    err << "kapre: " << kOpaqueFailure << '\n';
    return kExitCrypto;
  } catch (const std::exception& e) {
    err << "kapre: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace kapre::cli
