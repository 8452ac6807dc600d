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

#include "kapre/random.hpp"

#include <algorithm>

#include <openssl/rand.h>

#include "digest.hpp"
#include "kapre/errors.hpp"

namespace kapre {

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error(ErrorCode::kIo, "system randomness unavailable");
  }
}

SeededRandom::SeededRandom(std::uint64_t seed, std::string_view label) {
  prefix_.reserve(8 + label.size());
  for (int i = 7; i >= 0; --i) {
    prefix_.push_back(static_cast<char>((seed >> (8 * i)) & 0xff));
  }
  prefix_.append(label);
}

void SeededRandom::refill() {
  std::uint8_t ctr[8];
  for (int i = 0; i < 8; ++i) {
    ctr[i] = static_cast<std::uint8_t>(counter_ >> (8 * (7 - i)));
  }
  ++counter_;
  internal::shake256({internal::as_bytes("kapre-seeded-rng"),
                      internal::as_bytes(prefix_), ctr},
                     block_);
  used_ = 0;
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  std::size_t off = 0;
  while (off < out.size()) {
    if (used_ == sizeof(block_)) refill();
    std::size_t n = std::min(out.size() - off, sizeof(block_) - used_);
    std::copy_n(block_ + used_, n, out.data() + off);
    used_ += n;
    off += n;
  }
}

}  // namespace kapre
