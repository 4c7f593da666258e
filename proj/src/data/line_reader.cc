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

#include "gwdm/data/line_reader.h"

#include <zlib.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gwdm/core/errors.h"

namespace gwdm {
namespace {

bool EndsWith(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void EmitLine(std::string& line, int64_t& number,
              const std::function<void(std::string_view, int64_t)>& fn) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  fn(line, ++number);
  line.clear();
}

}  // namespace

void ForEachLine(const std::string& path,
                 const std::function<void(std::string_view, int64_t)>& fn) {
  int64_t number = 0;
  if (EndsWith(path, ".gz")) {
    gzFile file = gzopen(path.c_str(), "rb");
    if (file == nullptr) throw IoError("cannot open " + path);
    std::string line;
    char buf[1 << 16];
    int n;
    try {
      while ((n = gzread(file, buf, sizeof(buf))) > 0) {
        for (int i = 0; i < n; ++i) {
          if (buf[i] == '\n') {
            EmitLine(line, number, fn);
          } else {
            line.push_back(buf[i]);
          }
        }
      }
      if (n < 0) throw IoError("decompression failed for " + path);
      if (!line.empty()) EmitLine(line, number, fn);
    } catch (...) {
      gzclose(file);
      throw;
    }
    gzclose(file);
    return;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    EmitLine(line, number, fn);
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path);
}

bool FileExists(const std::string& path) {
  return std::filesystem::exists(path);
}

}  // namespace gwdm
