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

#ifndef MGRAM_FST_TEXT_IO_H_
#define MGRAM_FST_TEXT_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "mgram/fst/transducer.h"

namespace mgram {

// One arc per line as `src dst ilabel olabel weight` and one final state per
// line as `state weight`, tab separated, start state first. Labels are
// numeric ids. A machine whose start state has no arcs and is not final is
// written as the empty text.
std::string TransducerToText(const Transducer& t);
Transducer TransducerFromText(std::string_view text, std::string_view source);

void WriteTransducer(const Transducer& t, const std::filesystem::path& path);
Transducer ReadTransducer(const std::filesystem::path& path);

}  // namespace mgram

#endif  // MGRAM_FST_TEXT_IO_H_
