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

#include "kapre/errors.hpp"

namespace kapre {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidElement: return "invalid-element";
    case ErrorCode::kIndexOutOfRange: return "index-out-of-range";
    case ErrorCode::kTypeNotInSet: return "type-not-in-set";
    case ErrorCode::kInvalidCiphertext: return "invalid-ciphertext";
    case ErrorCode::kTagMismatch: return "tag-mismatch";
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kBadVersion: return "bad-version";
    case ErrorCode::kBadKind: return "bad-kind";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kTrailingGarbage: return "trailing-garbage";
    case ErrorCode::kMalformed: return "malformed";
    case ErrorCode::kParamsMismatch: return "params-mismatch";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace kapre
