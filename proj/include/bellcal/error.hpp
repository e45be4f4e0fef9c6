// Copyright 2026 The bellcal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bellcal {

enum class ErrorCode {
  kZeroNorm,
  kTagConflict,
  kNonHermitian,
  kFrequencyCollision,
  kInvalidSampleCount,
  kSampleCountMismatch,
  kUnknownChannel,
  kMissingChannels,
  kDegenerateQuad,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroNorm: return "ZeroNorm";
    case ErrorCode::kTagConflict: return "TagConflict";
    case ErrorCode::kNonHermitian: return "NonHermitian";
    case ErrorCode::kFrequencyCollision: return "FrequencyCollision";
    case ErrorCode::kInvalidSampleCount: return "InvalidSampleCount";
    case ErrorCode::kSampleCountMismatch: return "SampleCountMismatch";
    case ErrorCode::kUnknownChannel: return "UnknownChannel";
    case ErrorCode::kMissingChannels: return "MissingChannels";
    case ErrorCode::kDegenerateQuad: return "DegenerateQuad";
  }
  return "Unknown";
}

/// Every library failure is reported through this one exception type; callers
/// that need to branch inspect code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bellcal
