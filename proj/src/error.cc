/* Copyright 2026 The DGDF Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "dgdf/error.h"

namespace dgdf {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kInvalidShape: return "InvalidShape";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kResourceGuard: return "ResourceGuard";
    case ErrorCode::kUnknownOp: return "UnknownOp";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kEmptyMask: return "EmptyMask";
    case ErrorCode::kNonPositivePrediction: return "NonPositivePrediction";
    case ErrorCode::kInvalidRatio: return "InvalidRatio";
    case ErrorCode::kDegenerateResult: return "DegenerateResult";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kTruncatedData: return "TruncatedData";
    case ErrorCode::kDivergenceGuard: return "DivergenceGuard";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace dgdf
