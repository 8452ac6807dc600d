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

#ifndef KAPRE_TOOLS_CLI_HPP_
#define KAPRE_TOOLS_CLI_HPP_

// The `kapre` command line.
//
// Exit status: 0 success, 2 usage or environment (missing keystore entries,
// unreadable files, existing entries), 3 validation of user-supplied values,
// 4 any cryptographic failure, reported without its cause.
//
// With --seed (which requires --insecure-test-mode) each command draws its
// randomness from SeededRandom(seed, rng_label(...)), so a library caller
// can reproduce the command's output byte for byte.

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kapre/pairing.hpp"

namespace kapre::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitCrypto = 4;

inline constexpr char kOpaqueFailure[] = "invalid ciphertext or unauthorized";
inline constexpr char kDefaultKeystore[] = "./keystore";
inline constexpr char kKeystoreEnv[] = "KAPRE_KEYSTORE";

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Keystore root: flag, else $KAPRE_KEYSTORE, else ./keystore.
std::string resolve_keystore(const std::string& flag_value);

/// "setup", "keygen:<user>", "grant:<from>:<to>", "encrypt:<user>",
/// "reencrypt:<from>:<to>", "decrypt:<user>".
std::string rng_label(std::string_view command, std::string_view a = {},
                      std::string_view b = {});

// Hybrid payload: nonce (12) | ChaCha20-Poly1305 ciphertext | tag (16), keyed
// by SHA-256("kapre-dem" | content key). In hybrid mode encrypt draws the
// content key (l bytes) first, then the nonce, then the scheme's coins.
inline constexpr std::size_t kDemNonceBytes = 12;
inline constexpr std::size_t kDemTagBytes = 16;

Bytes dem_seal(ByteView content_key, ByteView nonce, ByteView plaintext);
/// Throws kInvalidCiphertext on authentication failure.
Bytes dem_open(ByteView content_key, ByteView payload);

}  // namespace kapre::cli

#endif  // KAPRE_TOOLS_CLI_HPP_
