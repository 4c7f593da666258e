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

#ifndef GWDM_DATA_LINE_READER_H_
#define GWDM_DATA_LINE_READER_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace gwdm {

// Calls `fn(line, line_number)` for every line of a text file (1-based line
// numbers, trailing '\r' stripped). Files ending in ".gz" are read through
// zlib. Throws IoError if the file cannot be opened.
void ForEachLine(const std::string& path,
                 const std::function<void(std::string_view, int64_t)>& fn);

// Reads a whole file into memory.
std::string ReadFile(const std::string& path);

// Writes `content` to `path`, replacing any existing file.
void WriteFile(const std::string& path, std::string_view content);

bool FileExists(const std::string& path);

}  // namespace gwdm

#endif  // GWDM_DATA_LINE_READER_H_
