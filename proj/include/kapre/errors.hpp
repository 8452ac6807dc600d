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

#ifndef KAPRE_ERRORS_HPP_
#define KAPRE_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace kapre {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidElement,
  kIndexOutOfRange,
  // Rejections produced by the scheme itself. Callers at a trust boundary
  // must collapse these into one opaque failure.
  kTypeNotInSet,
  kInvalidCiphertext,
  kTagMismatch,
  // Codec framing.
  kBadMagic,
  kBadVersion,
  kBadKind,
  kTruncated,
  kTrailingGarbage,
  kMalformed,
  kParamsMismatch,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// True for the three rejection outcomes of the scheme (the "bottom" symbol).
inline bool is_rejection(ErrorCode code) {
  return code == ErrorCode::kTypeNotInSet ||
         code == ErrorCode::kInvalidCiphertext ||
         code == ErrorCode::kTagMismatch;
}

}  // namespace kapre

#endif  // KAPRE_ERRORS_HPP_
