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

#include "kapre/codec.hpp"

#include <algorithm>

#include <openssl/evp.h>

#include "digest.hpp"
#include "kapre/errors.hpp"

namespace kapre::codec {
namespace {

constexpr std::size_t kLengthBytes = 4;
constexpr std::uint32_t kMaxTypes = 1u << 20;

[[noreturn]] void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

class Writer {
 public:
  explicit Writer(Kind kind) {
    out_.insert(out_.end(), kMagic.begin(), kMagic.end());
    out_.push_back(kVersion);
    out_.push_back(static_cast<std::uint8_t>(kind));
  }

  void field(ByteView bytes) {
    put_u32(static_cast<std::uint32_t>(bytes.size()));
    out_.insert(out_.end(), bytes.begin(), bytes.end());
  }

  void u32(std::uint32_t v) {
    const std::uint8_t be[4] = {static_cast<std::uint8_t>(v >> 24),
                                static_cast<std::uint8_t>(v >> 16),
                                static_cast<std::uint8_t>(v >> 8),
                                static_cast<std::uint8_t>(v)};
    field(be);
  }

  void element(const SourceElement& e) { field(e.encode()); }
  void element(const TargetElement& e) { field(e.encode()); }
  void scalar(const Scalar& s) { field(s.to_bytes()); }

  Bytes finish() { return std::move(out_); }

 private:
  void put_u32(std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  Bytes out_;
};

Kind check_header(ByteView env) {
  const std::size_t have = std::min(env.size(), kMagic.size());
  if (!std::equal(env.begin(), env.begin() + have, kMagic.begin())) {
    fail(ErrorCode::kBadMagic, "not a KAPRE envelope");
  }
  if (env.size() < kHeaderBytes) fail(ErrorCode::kTruncated, "envelope header truncated");
  if (env[5] != kVersion) fail(ErrorCode::kBadVersion, "unsupported envelope version");
  const std::uint8_t kind = env[6];
  if (kind < 0x01 || kind > 0x06) fail(ErrorCode::kBadKind, "unknown envelope kind");
  return static_cast<Kind>(kind);
}

class Reader {
 public:
  Reader(ByteView env, Kind expected) : rest_(env) {
    if (check_header(env) != expected) {
      fail(ErrorCode::kBadKind, "expected a " + std::string(kind_name(expected)) +
                                    " envelope");
    }
    rest_ = rest_.subspan(kHeaderBytes);
  }

  ByteView field() {
    if (rest_.size() < kLengthBytes) fail(ErrorCode::kTruncated, "field header truncated");
    const std::size_t len = (std::size_t{rest_[0]} << 24) | (std::size_t{rest_[1]} << 16) |
                            (std::size_t{rest_[2]} << 8) | std::size_t{rest_[3]};
    rest_ = rest_.subspan(kLengthBytes);
    if (rest_.size() < len) fail(ErrorCode::kTruncated, "field body truncated");
    ByteView out = rest_.first(len);
    rest_ = rest_.subspan(len);
    return out;
  }

  ByteView field(std::size_t expected_len) {
    ByteView f = field();
    if (f.size() != expected_len) fail(ErrorCode::kMalformed, "field has unexpected length");
    return f;
  }

  std::uint32_t u32() {
    ByteView f = field(4);
    return (std::uint32_t{f[0]} << 24) | (std::uint32_t{f[1]} << 16) |
           (std::uint32_t{f[2]} << 8) | std::uint32_t{f[3]};
  }

  Fingerprint id() {
    ByteView f = field(Fingerprint{}.size());
    Fingerprint out{};
    std::copy(f.begin(), f.end(), out.begin());
    return out;
  }

  Scalar scalar() { return Scalar::from_bytes(field(Scalar::kBytes)); }

  ByteView element() { return field(SourceElement::kBytes); }

  Bytes message_slot() {
    ByteView f = field();
    if (f.size() < kMinMessageBytes) fail(ErrorCode::kMalformed, "message slot too short");
    return Bytes(f.begin(), f.end());
  }

  void finish() const {
    if (!rest_.empty()) fail(ErrorCode::kTrailingGarbage, "trailing bytes after envelope");
  }

 private:
  ByteView rest_;
};

// Decodes a batch of element fields with one dual-consistency check.
std::vector<SourceElement> decode_elements(const std::vector<ByteView>& fields) {
  Bytes joined;
  joined.reserve(fields.size() * SourceElement::kBytes);
  for (ByteView f : fields) joined.insert(joined.end(), f.begin(), f.end());
  return SourceElement::decode_many(joined, fields.size());
}

std::uint32_t type_count(Reader& r) {
  const std::uint32_t n = r.u32();
  if (n < 1 || n > kMaxTypes) fail(ErrorCode::kMalformed, "type count out of range");
  return n;
}

Scalar nonzero(Scalar s) {
  if (s.is_zero()) fail(ErrorCode::kMalformed, "secret scalar is zero");
  return s;
}

}  // namespace

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::kParams: return "PARAMS";
    case Kind::kPublicKey: return "PUBLIC KEY";
    case Kind::kSecretKey: return "SECRET KEY";
    case Kind::kReKey: return "REKEY";
    case Kind::kCiphertext2: return "CIPHERTEXT2";
    case Kind::kCiphertext1: return "CIPHERTEXT1";
  }
  return "UNKNOWN";
}

std::string_view kind_extension(Kind kind) {
  switch (kind) {
    case Kind::kParams: return ".kpar";
    case Kind::kPublicKey: return ".kpub";
    case Kind::kSecretKey: return ".ksec";
    case Kind::kReKey: return ".krk";
    case Kind::kCiphertext2: return ".kct2";
    case Kind::kCiphertext1: return ".kct1";
  }
  return "";
}

Fingerprint fingerprint(const Params& par) {
  const Bytes enc = encode(par);
  const auto digest = internal::sha256({internal::as_bytes("kapre-params"), enc});
  Fingerprint out{};
  std::copy_n(digest.begin(), out.size(), out.begin());
  return out;
}

Fingerprint key_id(const PublicKey& pk) {
  const auto a = pk.pk1.encode();
  const auto b = pk.pk2.encode();
  const auto digest = internal::sha256({internal::as_bytes("kapre-key-id"), a, b});
  Fingerprint out{};
  std::copy_n(digest.begin(), out.size(), out.begin());
  return out;
}

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

// ----------------------------------------------------------------- encode

Bytes encode(const Params& par) {
  Writer w(Kind::kParams);
  w.field(internal::as_bytes(par.ctx ? par.ctx->curve : std::string()));
  w.u32(par.message_len);
  for (const SourceElement* e : {&par.g, &par.d, &par.u, &par.v, &par.w}) w.element(*e);
  w.element(par.z);
  return w.finish();
}

Bytes encode(const PublicKeyFile& f) {
  Writer w(Kind::kPublicKey);
  w.field(f.params);
  w.u32(f.key.n);
  w.element(f.key.pk1);
  w.element(f.key.pk2);
  Bytes delta;
  delta.reserve(f.key.delta.size() * SourceElement::kBytes);
  for (const SourceElement& e : f.key.delta) {
    const auto enc = e.encode();
    delta.insert(delta.end(), enc.begin(), enc.end());
  }
  w.field(delta);
  return w.finish();
}

Bytes encode(const SecretKeyFile& f) {
  Writer w(Kind::kSecretKey);
  w.field(f.params);
  w.u32(f.key.n);
  w.scalar(f.key.a1);
  w.scalar(f.key.a2);
  w.scalar(f.key.a3);
  return w.finish();
}

Bytes encode(const GrantFile& f) {
  Writer w(Kind::kReKey);
  w.field(f.params);
  w.field(f.delegator);
  w.field(f.delegatee);
  w.u32(f.rekey.n);
  // Bitmap of S over [1, n]: bit (t-1) is bit (t-1)%8 of byte (t-1)/8.
  Bytes bitmap((static_cast<std::size_t>(f.rekey.n) + 7) / 8, 0);
  for (std::uint32_t t : f.rekey.types) {
    if (t < 1 || t > f.rekey.n) {
      throw Error(ErrorCode::kInvalidArgument, "type outside [1, n] in re-key");
    }
    bitmap[(t - 1) / 8] |= static_cast<std::uint8_t>(1u << ((t - 1) % 8));
  }
  w.field(bitmap);
  w.element(f.rekey.r1);
  w.element(f.rekey.r2);
  return w.finish();
}

Bytes encode(const Ciphertext2File& f) {
  const Level2Ciphertext& c = f.ct;
  Writer w(Kind::kCiphertext2);
  w.field(f.params);
  w.field(f.owner);
  w.u32(c.rho);
  w.scalar(c.k);
  w.element(c.c1);
  w.element(c.c2);
  w.element(c.c3);
  w.element(c.c4);
  w.field(c.c5);
  w.element(c.c6);
  w.element(c.c7);
  w.element(c.c8);
  w.field(c.c9);
  w.field(f.payload);
  return w.finish();
}

Bytes encode(const Ciphertext1File& f) {
  const Level1Ciphertext& c = f.ct;
  Writer w(Kind::kCiphertext1);
  w.field(f.params);
  w.field(f.recipient);
  w.scalar(c.k);
  w.element(c.c1);
  w.element(c.c2);
  w.field(c.c3);
  w.element(c.c4);
  w.element(c.c5);
  w.field(c.c6);
  w.field(f.payload);
  return w.finish();
}

// ----------------------------------------------------------------- decode

Kind peek_kind(ByteView envelope) { return check_header(envelope); }

Params decode_params(ByteView envelope) {
  Reader r(envelope, Kind::kParams);
  ByteView curve = r.field();
  const std::string curve_name(curve.begin(), curve.end());
  const PairingContext* ctx = nullptr;
  try {
    ctx = &PairingContext::by_name(curve_name);
  } catch (const Error&) {
    fail(ErrorCode::kMalformed, "unknown curve identifier");
  }
  Params par;
  par.ctx = ctx;
  par.message_len = r.u32();
  std::vector<ByteView> gens;
  for (int i = 0; i < 5; ++i) gens.push_back(r.element());
  par.z = TargetElement::decode(r.field(TargetElement::kBytes));
  r.finish();

  const std::vector<SourceElement> e = decode_elements(gens);
  par.g = e[0];
  par.d = e[1];
  par.u = e[2];
  par.v = e[3];
  par.w = e[4];
  try {
    par.validate();
  } catch (const Error& err) {
    fail(ErrorCode::kMalformed, err.what());
  }
  return par;
}

PublicKeyFile decode_public_key(ByteView envelope) {
  Reader r(envelope, Kind::kPublicKey);
  PublicKeyFile f;
  f.params = r.id();
  const std::uint32_t n = type_count(r);
  std::vector<ByteView> fields = {r.element(), r.element()};
  ByteView delta = r.field((2 * static_cast<std::size_t>(n) - 1) * SourceElement::kBytes);
  r.finish();
  for (std::size_t off = 0; off < delta.size(); off += SourceElement::kBytes) {
    fields.push_back(delta.subspan(off, SourceElement::kBytes));
  }
  std::vector<SourceElement> e = decode_elements(fields);
  f.key.n = n;
  f.key.pk1 = e[0];
  f.key.pk2 = e[1];
  f.key.delta.assign(e.begin() + 2, e.end());
  return f;
}

SecretKeyFile decode_secret_key(ByteView envelope) {
  Reader r(envelope, Kind::kSecretKey);
  SecretKeyFile f;
  f.params = r.id();
  f.key.n = type_count(r);
  f.key.a1 = nonzero(r.scalar());
  f.key.a2 = nonzero(r.scalar());
  f.key.a3 = nonzero(r.scalar());
  r.finish();
  return f;
}

GrantFile decode_grant(ByteView envelope) {
  Reader r(envelope, Kind::kReKey);
  GrantFile f;
  f.params = r.id();
  f.delegator = r.id();
  f.delegatee = r.id();
  const std::uint32_t n = type_count(r);
  ByteView bitmap = r.field((static_cast<std::size_t>(n) + 7) / 8);
  std::vector<ByteView> fields = {r.element(), r.element()};
  r.finish();

  std::set<std::uint32_t> members;
  for (std::size_t bit = 0; bit < bitmap.size() * 8; ++bit) {
    if (bitmap[bit / 8] & (1u << (bit % 8))) {
      if (bit >= n) fail(ErrorCode::kMalformed, "type bitmap has bits beyond n");
      members.insert(static_cast<std::uint32_t>(bit + 1));
    }
  }
  std::vector<SourceElement> e = decode_elements(fields);
  f.rekey.r1 = e[0];
  f.rekey.r2 = e[1];
  f.rekey.types = TypeSet(std::move(members));
  f.rekey.n = n;
  return f;
}

Ciphertext2File decode_ciphertext2(ByteView envelope) {
  Reader r(envelope, Kind::kCiphertext2);
  Ciphertext2File f;
  Level2Ciphertext& c = f.ct;
  f.params = r.id();
  f.owner = r.id();
  c.rho = r.u32();
  c.k = r.scalar();
  std::vector<ByteView> fields = {r.element(), r.element(), r.element(), r.element()};
  c.c5 = r.message_slot();
  for (int i = 0; i < 3; ++i) fields.push_back(r.element());
  c.c9 = r.message_slot();
  ByteView payload = r.field();
  r.finish();
  if (c.c5.size() != c.c9.size()) fail(ErrorCode::kMalformed, "message slots differ in length");

  const std::vector<SourceElement> e = decode_elements(fields);
  c.c1 = e[0];
  c.c2 = e[1];
  c.c3 = e[2];
  c.c4 = e[3];
  c.c6 = e[4];
  c.c7 = e[5];
  c.c8 = e[6];
  f.payload.assign(payload.begin(), payload.end());
  return f;
}

Ciphertext1File decode_ciphertext1(ByteView envelope) {
  Reader r(envelope, Kind::kCiphertext1);
  Ciphertext1File f;
  Level1Ciphertext& c = f.ct;
  f.params = r.id();
  f.recipient = r.id();
  c.k = r.scalar();
  std::vector<ByteView> fields = {r.element()};
  c.c2 = TargetElement::decode(r.field(TargetElement::kBytes));
  c.c3 = r.message_slot();
  fields.push_back(r.element());
  fields.push_back(r.element());
  c.c6 = r.message_slot();
  ByteView payload = r.field();
  r.finish();
  if (c.c3.size() != c.c6.size()) fail(ErrorCode::kMalformed, "message slots differ in length");

  const std::vector<SourceElement> e = decode_elements(fields);
  c.c1 = e[0];
  c.c4 = e[1];
  c.c5 = e[2];
  f.payload.assign(payload.begin(), payload.end());
  return f;
}

Bytes rekey_token(const ReKey& rk) {
  Bytes out;
  const auto a = rk.r1.encode();
  const auto b = rk.r2.encode();
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::size_t component_bytes(const PublicKey& pk) {
  return (2 + pk.delta.size()) * SourceElement::kBytes;
}

std::size_t component_bytes(const Level2Ciphertext& c) {
  return Scalar::kBytes + 7 * SourceElement::kBytes + c.c5.size() + c.c9.size();
}

std::size_t component_bytes(const Level1Ciphertext& c) {
  return Scalar::kBytes + 3 * SourceElement::kBytes + TargetElement::kBytes +
         c.c3.size() + c.c6.size();
}

// ------------------------------------------------------------------ armor

namespace {

constexpr std::string_view kBegin = "-----BEGIN KAPRE ";
constexpr std::string_view kEnd = "-----END KAPRE ";
constexpr std::string_view kDashes = "-----";
constexpr std::size_t kArmorColumns = 64;

std::string base64_encode(ByteView in) {
  std::string out(4 * ((in.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                in.data(), static_cast<int>(in.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

Bytes base64_decode(std::string_view in) {
  if (in.size() % 4 != 0) fail(ErrorCode::kMalformed, "bad base64 length");
  Bytes out(3 * (in.size() / 4));
  const int n = EVP_DecodeBlock(out.data(),
                                reinterpret_cast<const unsigned char*>(in.data()),
                                static_cast<int>(in.size()));
  if (n < 0) fail(ErrorCode::kMalformed, "bad base64");
  std::size_t pad = 0;
  if (!in.empty() && in.back() == '=') ++pad;
  if (in.size() > 1 && in[in.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  if (base64_encode(out) != in) fail(ErrorCode::kMalformed, "non-canonical base64");
  return out;
}

}  // namespace

std::string armor(ByteView envelope) {
  const std::string label(kind_name(peek_kind(envelope)));
  const std::string body = base64_encode(envelope);
  std::string out;
  out.append(kBegin).append(label).append(kDashes).push_back('\n');
  for (std::size_t off = 0; off < body.size(); off += kArmorColumns) {
    out.append(body, off, kArmorColumns).push_back('\n');
  }
  out.append(kEnd).append(label).append(kDashes).push_back('\n');
  return out;
}

bool is_armored(ByteView data) {
  return data.size() >= kBegin.size() &&
         std::equal(kBegin.begin(), kBegin.end(), data.begin());
}

Bytes dearmor(std::string_view text) {
  auto next_line = [&text]() -> std::string_view {
    if (text.empty()) fail(ErrorCode::kTruncated, "armor truncated");
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };

  const std::string_view header = next_line();
  if (!header.starts_with(kBegin) || !header.ends_with(kDashes) ||
      header.size() < kBegin.size() + kDashes.size()) {
    fail(ErrorCode::kBadMagic, "missing armor header");
  }
  const std::string_view label = header.substr(
      kBegin.size(), header.size() - kBegin.size() - kDashes.size());

  std::string body;
  for (;;) {
    const std::string_view line = next_line();
    if (line.starts_with(kEnd)) {
      if (line.substr(kEnd.size()) != std::string(label) + std::string(kDashes)) {
        fail(ErrorCode::kMalformed, "armor footer does not match header");
      }
      break;
    }
    body.append(line);
  }
  if (text.find_first_not_of("\r\n") != std::string_view::npos) {
    fail(ErrorCode::kTrailingGarbage, "text after armor footer");
  }
  Bytes envelope = base64_decode(body);
  if (kind_name(peek_kind(envelope)) != label) {
    fail(ErrorCode::kMalformed, "armor label does not match envelope kind");
  }
  return envelope;
}

Bytes unwrap(ByteView data) {
  if (is_armored(data)) {
    return dearmor(std::string_view(reinterpret_cast<const char*>(data.data()),
                                    data.size()));
  }
  return Bytes(data.begin(), data.end());
}

}  // namespace kapre::codec
