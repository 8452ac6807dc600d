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

#include "digest.hpp"

#include <memory>

#include <openssl/evp.h>

#include "kapre/errors.hpp"

namespace kapre::internal {
namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

MdCtx start(const EVP_MD* md, std::initializer_list<Part> parts) {
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), md, nullptr) != 1) {
    throw Error(ErrorCode::kIo, "digest initialization failed");
  }
  for (const Part& p : parts) {
    if (!p.empty() && EVP_DigestUpdate(ctx.get(), p.data(), p.size()) != 1) {
      throw Error(ErrorCode::kIo, "digest update failed");
    }
  }
  return ctx;
}

}  // namespace

void shake256(std::initializer_list<Part> parts, std::span<std::uint8_t> out) {
  MdCtx ctx = start(EVP_shake256(), parts);
  if (EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) {
    throw Error(ErrorCode::kIo, "SHAKE256 finalization failed");
  }
}

std::array<std::uint8_t, 32> sha256(std::initializer_list<Part> parts) {
  MdCtx ctx = start(EVP_sha256(), parts);
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != 32) {
    throw Error(ErrorCode::kIo, "SHA-256 finalization failed");
  }
  return out;
}

}  // namespace kapre::internal
