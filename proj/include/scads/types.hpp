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

#ifndef SCADS_TYPES_HPP
#define SCADS_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scads {

// Every failure the core can report. The C API maps these one-to-one onto
// scads_status values, so the order here is part of the ABI.
enum class ErrorCode : int {
  kZeroVector = 1,
  kDimensionMismatch,
  kUnlabelledRecord,
  kDuplicateRoundId,
  kMissingExpertReport,
  kEmptySplit,
  kUnlabelledRound,
  kTooManyExperts,
  kProfileCountMismatch,
  kLengthMismatch,
  kInvalidConfig,
  kIoError,
  kParseError,
  kNonMonotoneRounds,
  kEmptyDataset,
  kInvalidArgument,
  kInternal,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Per-label 0/1 indicator; doubles as a label set over the configured labels.
using BinaryVector = std::vector<std::uint8_t>;

// Expert subset as a bitmask over expert indices.
class Coalition {
 public:
  static constexpr std::size_t kMaxExperts = 20;

  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint32_t bits) : bits_(bits) {}

  static constexpr Coalition full(std::size_t n) {
    return Coalition(n >= 32 ? ~0u : ((1u << n) - 1u));
  }
  static constexpr Coalition single(std::size_t i) { return Coalition(1u << i); }

  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr Coalition with(std::size_t i) const { return Coalition(bits_ | (1u << i)); }
  constexpr Coalition without(std::size_t i) const { return Coalition(bits_ & ~(1u << i)); }
  constexpr std::uint32_t bits() const { return bits_; }
  int size() const { return __builtin_popcount(bits_); }

  friend constexpr bool operator==(Coalition, Coalition) = default;

 private:
  std::uint32_t bits_ = 0;
};

}  // namespace scads

#endif  // SCADS_TYPES_HPP
