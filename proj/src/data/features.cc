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

#include "gwdm/data/features.h"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "gwdm/core/errors.h"
#include "gwdm/data/line_reader.h"

namespace gwdm {
namespace {

std::string RowError(int64_t row, const std::string& what) {
  return "feature table row " + std::to_string(row) + ": " + what;
}

void ParseRow(std::string_view line, int64_t row, FeatureTable& table) {
  const size_t tab = line.find('\t');
  if (tab == std::string_view::npos) throw FormatError(RowError(row, "missing tab"));
  int64_t id = 0;
  auto [p, ec] = std::from_chars(line.data(), line.data() + tab, id);
  if (ec != std::errc() || p != line.data() + tab) {
    throw FormatError(RowError(row, "bad image id"));
  }
  std::vector<float> values;
  std::string_view rest = line.substr(tab + 1);
  while (!rest.empty()) {
    const size_t comma = rest.find(',');
    const std::string field(rest.substr(0, comma));
    char* end = nullptr;
    const float v = std::strtof(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() || !std::isfinite(v)) {
      throw FormatError(RowError(row, "bad value '" + field + "'"));
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (static_cast<int>(values.size()) != table.dim()) {
    throw FormatError(RowError(row, "has " + std::to_string(values.size()) +
                                        " values, expected " + std::to_string(table.dim())));
  }
  table.Set(id, std::move(values));
}

}  // namespace

const std::vector<float>& FeatureTable::Lookup(int64_t image_id) const {
  auto it = rows_.find(image_id);
  if (it == rows_.end()) {
    throw AbsentKeyError("no image features for image " + std::to_string(image_id));
  }
  return it->second;
}

bool FeatureTable::Set(int64_t image_id, std::vector<float> values) {
  if (static_cast<int>(values.size()) != dim_) {
    throw DimensionError("feature vector length " + std::to_string(values.size()) +
                         " != " + std::to_string(dim_));
  }
  auto [it, inserted] = rows_.insert_or_assign(image_id, std::move(values));
  if (!inserted) {
    warnings_.push_back("duplicate image id " + std::to_string(image_id) +
                        "; keeping the last row");
  }
  return !inserted;
}

std::string FeatureTable::Serialize() const {
  std::string out = "dim=" + std::to_string(dim_) + "\n";
  char buf[32];
  for (const auto& [id, values] : rows_) {
    out += std::to_string(id);
    out += '\t';
    for (size_t i = 0; i < values.size(); ++i) {
      if (i > 0) out += ',';
      std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(values[i]));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

FeatureTable FeatureTable::Parse(std::string_view text) {
  FeatureTable table;
  bool header = false;
  int64_t row = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header) {
      if (line.rfind("dim=", 0) != 0) throw FormatError("feature table: missing dim= header");
      table.dim_ = std::stoi(std::string(line.substr(4)));
      if (table.dim_ <= 0) throw FormatError("feature table: dim must be positive");
      header = true;
      continue;
    }
    ++row;
    if (line.empty()) continue;
    ParseRow(line, row, table);
  }
  if (!header) throw FormatError("feature table: empty file");
  return table;
}

FeatureTable FeatureTable::Load(const std::string& path) {
  FeatureTable table;
  bool header = false;
  ForEachLine(path, [&](std::string_view line, int64_t number) {
    if (!header) {
      if (line.rfind("dim=", 0) != 0) throw FormatError(path + ": missing dim= header");
      table.dim_ = std::stoi(std::string(line.substr(4)));
      if (table.dim_ <= 0) throw FormatError(path + ": dim must be positive");
      header = true;
      return;
    }
    if (line.empty()) return;
    ParseRow(line, number - 1, table);
  });
  if (!header) throw FormatError(path + ": empty feature table");
  return table;
}

void FeatureTable::Save(const std::string& path) const { WriteFile(path, Serialize()); }

}  // namespace gwdm
