// Copyright 2026 The mgram Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MGRAM_BASE_UTF8_H_
#define MGRAM_BASE_UTF8_H_

#include <string>
#include <string_view>

namespace mgram {

// Decodes UTF-8. Throws Error(kEncoding) on malformed input.
std::u32string Utf8ToU32(std::string_view text);

std::string U32ToUtf8(std::u32string_view text);
std::string U32ToUtf8(char32_t c);

bool IsValidUtf8(std::string_view text);

}  // namespace mgram

#endif  // MGRAM_BASE_UTF8_H_
