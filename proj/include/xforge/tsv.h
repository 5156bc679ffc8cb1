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

#ifndef XFORGE_TSV_H_
#define XFORGE_TSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace xforge::tsv {

// Backslash escaping for '\\', '\t', '\n', '\r'.
std::string Escape(std::string_view field);
// Throws ParseError on a dangling or unknown escape.
std::string Unescape(std::string_view field);

// Splits on '\t' without unescaping.
std::vector<std::string_view> SplitFields(std::string_view line);

// Splits into lines on '\n', dropping a trailing '\r' and a final empty line.
std::vector<std::string_view> SplitLines(std::string_view bytes);

}  // namespace xforge::tsv

#endif  // XFORGE_TSV_H_
