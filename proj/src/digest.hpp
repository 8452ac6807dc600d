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

#ifndef KAPRE_SRC_DIGEST_HPP_
#define KAPRE_SRC_DIGEST_HPP_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>

namespace kapre::internal {

using Part = std::span<const std::uint8_t>;

inline Part as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

void shake256(std::initializer_list<Part> parts, std::span<std::uint8_t> out);
std::array<std::uint8_t, 32> sha256(std::initializer_list<Part> parts);

}  // namespace kapre::internal

#endif  // KAPRE_SRC_DIGEST_HPP_
