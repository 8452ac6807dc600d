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

#ifndef KAPRE_RANDOM_HPP_
#define KAPRE_RANDOM_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace kapre {

/// Source of uniformly random bytes. Instances are not thread-safe; use one
/// per thread of execution.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

/// Operating-system CSPRNG (OpenSSL RAND_bytes).
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic stream: SHAKE256(seed || label || counter) blocks.
/// For reproducible test vectors only; never for real keys.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed, std::string_view label = {});

  void fill(std::span<std::uint8_t> out) override;

 private:
  void refill();

  std::string prefix_;
  std::uint64_t counter_ = 0;
  std::uint8_t block_[136] = {};
  std::size_t used_ = sizeof(block_);
};

}  // namespace kapre

#endif  // KAPRE_RANDOM_HPP_
