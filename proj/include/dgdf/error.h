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

#ifndef DGDF_ERROR_H_
#define DGDF_ERROR_H_

#include <stdexcept>
#include <string>

namespace dgdf {

enum class ErrorCode {
  kShapeMismatch,
  kIndexOutOfRange,
  kInvalidShape,
  kInvalidInput,
  kInvalidConfig,
  kResourceGuard,
  kUnknownOp,
  kNonFinite,
  kEmptyMask,
  kNonPositivePrediction,
  kInvalidRatio,
  kDegenerateResult,
  kMalformedHeader,
  kTruncatedData,
  kDivergenceGuard,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// Every library failure is reported through this exception type; the code
// lets callers (the CLI in particular) map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

#define DGDF_CHECK(cond, code, msg)         \
  do {                                      \
    if (!(cond)) throw ::dgdf::Error(code, msg); \
  } while (0)

#define DGDF_CHECK_SHAPE(cond, msg) \
  DGDF_CHECK(cond, ::dgdf::ErrorCode::kShapeMismatch, msg)

}  // namespace dgdf

#endif  // DGDF_ERROR_H_
