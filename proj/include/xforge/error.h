//
// Copyright 2026 The xforge Authors
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
//

#ifndef XFORGE_ERROR_H_
#define XFORGE_ERROR_H_

#include <stdexcept>
#include <string>

namespace xforge {

// Base class for every error raised by the toolkit. `kind()` is a stable
// machine-readable tag used by the CLI error report.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define XFORGE_DEFINE_ERROR(Name, tag)                                  \
  class Name : public Error {                                           \
   public:                                                              \
    explicit Name(const std::string& message) : Error(tag, message) {} \
  };

// Malformed input structure (JSON, TSV, CoNLL-U, dictionary lines).
XFORGE_DEFINE_ERROR(ParseError, "parse")
// A dataset invariant does not hold (offsets, unique ids).
XFORGE_DEFINE_ERROR(IntegrityError, "integrity")
// Caller supplied an argument outside the operation's precondition.
XFORGE_DEFINE_ERROR(ArgumentError, "argument")
// A token is missing from a permutation table.
XFORGE_DEFINE_ERROR(CoverageError, "coverage")
// A dependency parse is not a tree.
XFORGE_DEFINE_ERROR(StructureError, "structure")
// Parses do not line up with the dataset text.
XFORGE_DEFINE_ERROR(AlignmentError, "alignment")
// Binary representation file is malformed.
XFORGE_DEFINE_ERROR(FormatError, "format")
// Span search has nothing to search in.
XFORGE_DEFINE_ERROR(NoMatchError, "no-match")
// Manifest failed validation.
XFORGE_DEFINE_ERROR(ValidationError, "validation")
// File system failure.
XFORGE_DEFINE_ERROR(IoError, "io")

#undef XFORGE_DEFINE_ERROR

}  // namespace xforge

#endif  // XFORGE_ERROR_H_
