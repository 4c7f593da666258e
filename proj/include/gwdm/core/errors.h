// Copyright 2026 The GuessWhat-DM Authors
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

#ifndef GWDM_CORE_ERRORS_H_
#define GWDM_CORE_ERRORS_H_

#include <exception>
#include <stdexcept>
#include <string>

namespace gwdm {

// Process exit codes used by the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual int exit_code() const { return kExitData; }
};

#define GWDM_DEFINE_ERROR(Name, code)                              \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(what) {}        \
    int exit_code() const override { return code; }                \
  }

// Shapes of operands do not agree.
GWDM_DEFINE_ERROR(DimensionError, kExitData);
// Integer index outside its valid range.
GWDM_DEFINE_ERROR(IndexError, kExitData);
// Invalid argument to an operation (empty input, bad option value).
GWDM_DEFINE_ERROR(ArgumentError, kExitUsage);
// Malformed input line or record.
GWDM_DEFINE_ERROR(ParseError, kExitData);
// Record parsed but violates a data invariant.
GWDM_DEFINE_ERROR(IntegrityError, kExitData);
// File layout does not match its declared format.
GWDM_DEFINE_ERROR(FormatError, kExitData);
// Checkpoint cannot be loaded into the requested model.
GWDM_DEFINE_ERROR(CompatibilityError, kExitData);
// Lookup of a key that is not present (image features, vocab entries).
GWDM_DEFINE_ERROR(AbsentKeyError, kExitData);
// Invalid or inconsistent configuration.
GWDM_DEFINE_ERROR(ConfigError, kExitUsage);
// A required upstream artifact (checkpoint) is missing.
GWDM_DEFINE_ERROR(DependencyError, kExitData);
// Non-finite values, failed gradient checks, singular systems.
GWDM_DEFINE_ERROR(NumericError, kExitNumeric);
GWDM_DEFINE_ERROR(RankError, kExitNumeric);
GWDM_DEFINE_ERROR(IoError, kExitData);

#undef GWDM_DEFINE_ERROR

inline int ExitCodeFor(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return err->exit_code();
  return kExitData;
}

}  // namespace gwdm

#endif  // GWDM_CORE_ERRORS_H_
