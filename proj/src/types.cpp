/*
 * Copyright 2026 The scads Authors.
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

#include "scads/types.hpp"

namespace scads {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnlabelledRecord: return "UnlabelledRecord";
    case ErrorCode::kDuplicateRoundId: return "DuplicateRoundId";
    case ErrorCode::kMissingExpertReport: return "MissingExpertReport";
    case ErrorCode::kEmptySplit: return "EmptySplit";
    case ErrorCode::kUnlabelledRound: return "UnlabelledRound";
    case ErrorCode::kTooManyExperts: return "TooManyExperts";
    case ErrorCode::kProfileCountMismatch: return "ProfileCountMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kNonMonotoneRounds: return "NonMonotoneRounds";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace scads
