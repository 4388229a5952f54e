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

#include "dqi/error.hpp"

namespace dqi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kNothingToUndo: return "NothingToUndo";
    case ErrorCode::kMissingId: return "MissingId";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kInvalidSample: return "InvalidSample";
    case ErrorCode::kBadN: return "BadN";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kTooFewSentences: return "TooFewSentences";
    case ErrorCode::kMissingSplit: return "MissingSplit";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kMissingBand: return "MissingBand";
    case ErrorCode::kBadFactor: return "BadFactor";
    case ErrorCode::kNoContentTokens: return "NoContentTokens";
    case ErrorCode::kEmptyLexicon: return "EmptyLexicon";
    case ErrorCode::kUnsatisfiableConstraints: return "UnsatisfiableConstraints";
    case ErrorCode::kSplitFrozen: return "SplitFrozen";
    case ErrorCode::kEmptySide: return "EmptySide";
    case ErrorCode::kNoErrors: return "NoErrors";
    case ErrorCode::kBadConfig: return "BadConfig";
    case ErrorCode::kConstraintViolation: return "ConstraintViolation";
  }
  return "Unknown";
}

}  // namespace dqi
