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

#ifndef KAPRE_CODEC_HPP_
#define KAPRE_CODEC_HPP_

// Binary envelopes for parameters, keys, grants and ciphertexts.
//
//   envelope := "KAPRE" | version (0x01) | kind | field*
//   field    := length (u32, big-endian) | bytes
//
// Fields appear in declaration order. Group elements use the pairing engine's
// canonical encodings, scalars are 32-byte big-endian. Every element is
// subgroup- and dual-consistency-checked on decode. Decoding rejects unknown
// magic, version or kind, truncation and trailing bytes.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "kapre/pairing.hpp"
#include "kapre/scheme.hpp"

namespace kapre::codec {

inline constexpr std::array<std::uint8_t, 5> kMagic = {'K', 'A', 'P', 'R', 'E'};
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::size_t kHeaderBytes = kMagic.size() + 2;

enum class Kind : std::uint8_t {
  kParams = 0x01,
  kPublicKey = 0x02,
  kSecretKey = 0x03,
  kReKey = 0x04,
  kCiphertext2 = 0x05,
  kCiphertext1 = 0x06,
};

std::string_view kind_name(Kind kind);      // armor label, e.g. "PUBLIC KEY"
std::string_view kind_extension(Kind kind); // ".kpub" etc.

/// 8-byte truncated SHA-256 identifiers.
using Fingerprint = std::array<std::uint8_t, 8>;

Fingerprint fingerprint(const Params& par);
Fingerprint key_id(const PublicKey& pk);
std::string to_hex(ByteView bytes);

struct PublicKeyFile {
  Fingerprint params{};
  PublicKey key;
  bool operator==(const PublicKeyFile&) const = default;
};

struct SecretKeyFile {
  Fingerprint params{};
  SecretKey key;
  bool operator==(const SecretKeyFile&) const = default;
};

struct GrantFile {
  Fingerprint params{};
  Fingerprint delegator{};
  Fingerprint delegatee{};
  ReKey rekey;
  bool operator==(const GrantFile&) const = default;
};

struct Ciphertext2File {
  Fingerprint params{};
  Fingerprint owner{};
  Level2Ciphertext ct;
  Bytes payload;  // empty in raw mode; DEM blob in hybrid mode
  bool operator==(const Ciphertext2File&) const = default;
};

struct Ciphertext1File {
  Fingerprint params{};
  Fingerprint recipient{};
  Level1Ciphertext ct;
  Bytes payload;
  bool operator==(const Ciphertext1File&) const = default;
};

Bytes encode(const Params& par);
Bytes encode(const PublicKeyFile& f);
Bytes encode(const SecretKeyFile& f);
Bytes encode(const GrantFile& f);
Bytes encode(const Ciphertext2File& f);
Bytes encode(const Ciphertext1File& f);

/// Validates magic, version and kind only.
Kind peek_kind(ByteView envelope);

Params decode_params(ByteView envelope);
PublicKeyFile decode_public_key(ByteView envelope);
SecretKeyFile decode_secret_key(ByteView envelope);
GrantFile decode_grant(ByteView envelope);
Ciphertext2File decode_ciphertext2(ByteView envelope);
Ciphertext1File decode_ciphertext1(ByteView envelope);

/// r1 || r2: the cryptographic part of a re-key, 2 x 144 bytes whatever the
/// size of S or n.
Bytes rekey_token(const ReKey& rk);

/// Bare component sizes, excluding envelope framing.
std::size_t component_bytes(const PublicKey& pk);
std::size_t component_bytes(const Level2Ciphertext& c);
std::size_t component_bytes(const Level1Ciphertext& c);

/// ASCII armor: "-----BEGIN KAPRE <KIND>-----", base64 in 64-column lines,
/// "-----END KAPRE <KIND>-----".
std::string armor(ByteView envelope);
Bytes dearmor(std::string_view text);
bool is_armored(ByteView data);
/// Returns the binary envelope whether `data` is armored or not.
Bytes unwrap(ByteView data);

/// Directory keystore:
///   <root>/params.kpar
///   <root>/users/<name>/key.kpub, key.ksec
///   <root>/grants/<from>-<to>.krk
/// Entries are armored envelopes written by atomic rename. Secret keys are
/// created with mode 0600.
class Keystore {
 public:
  explicit Keystore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  /// [A-Za-z0-9_]{1,64}
  static bool valid_name(std::string_view name);

  std::filesystem::path params_path() const;
  std::filesystem::path public_key_path(std::string_view user) const;
  std::filesystem::path secret_key_path(std::string_view user) const;
  std::filesystem::path grant_path(std::string_view from,
                                   std::string_view to) const;

  bool has_params() const;
  bool has_user(std::string_view user) const;
  bool has_grant(std::string_view from, std::string_view to) const;

  void write_params(const Params& par, bool overwrite);
  void write_user(std::string_view user, const KeyPair& kp,
                  const Fingerprint& params);
  void write_grant(std::string_view from, std::string_view to,
                   const GrantFile& grant);

  Params read_params() const;
  PublicKeyFile read_public_key(std::string_view user) const;
  SecretKeyFile read_secret_key(std::string_view user) const;
  GrantFile read_grant(std::string_view from, std::string_view to) const;

 private:
  std::filesystem::path user_dir(std::string_view user) const;

  std::filesystem::path root_;
};

Bytes read_file(const std::filesystem::path& path);
/// Write-to-temporary then rename. `secret` creates the file with mode 0600.
void write_file_atomic(const std::filesystem::path& path, ByteView data,
                       bool secret = false);

}  // namespace kapre::codec

#endif  // KAPRE_CODEC_HPP_
