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

#include "gwdm/train/checkpoint.h"

#include <bit>
#include <cstdio>
#include <cstring>
#include <set>
#include <sstream>

#include "gwdm/data/line_reader.h"

namespace gwdm {
namespace {

constexpr std::string_view kMagic = "GWDM-CHECKPOINT 1";

void PutFloat(std::string& out, float f) {
  const uint32_t bits = std::bit_cast<uint32_t>(f);
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((bits >> (8 * k)) & 0xff));
}

float GetFloat(const unsigned char* p) {
  uint32_t bits = 0;
  for (int k = 0; k < 4; ++k) bits |= static_cast<uint32_t>(p[k]) << (8 * k);
  return std::bit_cast<float>(bits);
}

}  // namespace

std::string EncodeCheckpoint(const Checkpoint& c) {
  std::set<std::string> names;
  std::ostringstream head;
  head << kMagic << '\n'
       << "module " << c.module << '\n'
       << "profile " << c.profile << '\n'
       << "vocab_hash " << c.vocab_hash << '\n';
  for (const auto& [k, v] : c.dims) head << "dim " << k << ' ' << v << '\n';
  for (const auto& [name, t] : c.tensors) {
    if (!names.insert(name).second) throw ArgumentError("duplicate tensor name " + name);
    if (t.shape.size() != 2) throw DimensionError("tensor " + name + " is not 2-D");
    head << "tensor " << name << ' ' << t.shape[0] << ' ' << t.shape[1] << '\n';
  }
  head << "end\n";
  std::string out = head.str();
  for (const auto& [name, t] : c.tensors) {
    for (float f : t.data) PutFloat(out, f);
  }
  return out;
}

Checkpoint DecodeCheckpoint(std::string_view bytes) {
  Checkpoint c;
  size_t pos = 0;
  auto next_line = [&]() -> std::string {
    const size_t end = bytes.find('\n', pos);
    if (end == std::string_view::npos) throw FormatError("checkpoint header is truncated");
    std::string line(bytes.substr(pos, end - pos));
    pos = end + 1;
    return line;
  };
  if (next_line() != kMagic) throw FormatError("not a checkpoint file");
  size_t floats = 0;
  std::vector<std::pair<std::string, std::vector<int>>> index;
  for (;;) {
    const std::string line = next_line();
    if (line == "end") break;
    std::istringstream in(line);
    std::string key;
    in >> key;
    if (key == "module") {
      in >> c.module;
    } else if (key == "profile") {
      in >> c.profile;
    } else if (key == "vocab_hash") {
      in >> c.vocab_hash;
    } else if (key == "dim") {
      std::string name;
      int v = 0;
      if (!(in >> name >> v)) throw FormatError("bad dim line: " + line);
      c.dims[name] = v;
    } else if (key == "tensor") {
      std::string name;
      int r = 0, cols = 0;
      if (!(in >> name >> r >> cols) || r < 0 || cols < 0) {
        throw FormatError("bad tensor line: " + line);
      }
      index.push_back({name, {r, cols}});
      floats += static_cast<size_t>(r) * cols;
    } else {
      throw FormatError("unknown checkpoint header line: " + line);
    }
  }
  const size_t blob = bytes.size() - pos;
  if (blob != floats * 4) {
    throw FormatError("checkpoint blob has " + std::to_string(blob) + " bytes, expected " +
                      std::to_string(floats * 4));
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + pos);
  for (auto& [name, shape] : index) {
    Tensor t;
    t.shape = shape;
    t.data.resize(static_cast<size_t>(shape[0]) * shape[1]);
    for (float& f : t.data) {
      f = GetFloat(p);
      p += 4;
    }
    c.tensors.emplace_back(name, std::move(t));
  }
  return c;
}

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  WriteFile(path, EncodeCheckpoint(ckpt));
}

Checkpoint LoadCheckpoint(const std::string& path) {
  if (!FileExists(path)) throw DependencyError("missing checkpoint " + path);
  try {
    return DecodeCheckpoint(ReadFile(path));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void ExpectCompatible(const Checkpoint& c, const std::string& module, const std::string& profile,
                      const std::string& vocab_hash) {
  if (c.module != module) {
    throw CompatibilityError("checkpoint is for module '" + c.module + "', expected '" + module +
                             "'");
  }
  if (c.profile != profile) {
    throw CompatibilityError("checkpoint uses the '" + c.profile + "' profile, expected '" +
                             profile + "'");
  }
  if (c.vocab_hash != vocab_hash) {
    throw CompatibilityError("checkpoint vocabulary " + c.vocab_hash +
                             " does not match vocabulary " + vocab_hash);
  }
}

std::string HashBytes(std::string_view bytes) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gwdm
