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

#ifndef GWDM_TRAIN_CONFIG_H_
#define GWDM_TRAIN_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gwdm/models/dims.h"
#include "gwdm/train/loop.h"

namespace gwdm {

// Flat key=value run configuration. Every key has exactly one effective
// value, resolved as flag > file > profile default.
class RunConfig {
 public:
  enum class Source { kDefault, kFile, kFlag };

  // Throws ConfigError for an unknown profile.
  static RunConfig Defaults(const std::string& profile);

  // Parses "key = value" lines; '#' starts a comment. Throws ConfigError on
  // malformed lines, unknown keys and duplicates.
  static std::map<std::string, std::string> ParseText(std::string_view text);
  static std::map<std::string, std::string> ParseFile(const std::string& path);

  // Picks the profile first, then layers file values and flag values over
  // the profile defaults.
  static RunConfig Resolve(const std::map<std::string, std::string>& file,
                           const std::map<std::string, std::string>& flags);

  static bool IsKey(const std::string& key);
  static std::vector<std::string> Keys();

  void Set(const std::string& key, const std::string& value, Source source);

  const std::string& Str(const std::string& key) const;
  int Int(const std::string& key) const;
  double Double(const std::string& key) const;
  uint64_t Seed() const;
  std::vector<int> IntList(const std::string& key) const;
  Source SourceOf(const std::string& key) const;

  // "key=value  # source" per line, sorted by key.
  std::string Echo() const;

  // Checks value ranges. Throws ConfigError.
  void Validate() const;

  // Training-loop settings with the given shuffling seed.
  LoopConfig Loop(uint64_t seed) const;

 private:
  struct Entry {
    std::string value;
    Source source = Source::kDefault;
  };
  std::map<std::string, Entry> values_;
};

std::string SourceName(RunConfig::Source s);

}  // namespace gwdm

#endif  // GWDM_TRAIN_CONFIG_H_
