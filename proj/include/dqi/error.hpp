/*
 * Copyright 2026 The DQI Workbench Authors.
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

#ifndef DQI_ERROR_HPP_
#define DQI_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dqi {

enum class ErrorCode {
  kMalformedRecord,
  kUnknownLabel,
  kEmptyFile,
  kIoError,
  kDuplicateId,
  kNothingToUndo,
  kMissingId,
  kUnknownId,
  kInvalidSample,
  kBadN,
  kEmptyDataset,
  kTooFewSentences,
  kMissingSplit,
  kInvalidParams,
  kMissingBand,
  kBadFactor,
  kNoContentTokens,
  kEmptyLexicon,
  kUnsatisfiableConstraints,
  kSplitFrozen,
  kEmptySide,
  kNoErrors,
  kBadConfig,
  kConstraintViolation,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above so the
// CLI and HTTP layers can map it to an exit status or response code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dqi

#endif  // DQI_ERROR_HPP_
