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

#include "gwdm/train/config.h"

#include <charconv>
#include <set>
#include <sstream>

#include "gwdm/core/errors.h"
#include "gwdm/data/line_reader.h"
#include "gwdm/models/decider.h"

namespace gwdm {
namespace {

struct KeySpec {
  const char* key;
  const char* toy;
  const char* paper;
};

constexpr KeySpec kKeys[] = {
    {"seed", "1", "1"},
    {"profile", "toy", "paper"},
    {"n_games", "6000", "6000"},
    {"lr", "0.001", "0.001"},
    {"batch_size", "32", "64"},
    {"max_epochs", "30", "30"},
    {"patience", "5", "5"},
    {"clip_norm", "5", "5"},
    {"min_word_freq", "3", "3"},
    {"max_question_len", "12", "30"},
    {"decode", "greedy", "greedy"},
    {"temperature", "1", "1"},
    {"oracle_word_emb", "64", "300"},
    {"oracle_hidden", "64", "512"},
    {"oracle_category_emb", "16", "256"},
    {"oracle_mlp_hidden", "128", "512"},
    {"guesser_word_emb", "64", "300"},
    {"guesser_hidden", "64", "512"},
    {"guesser_category_emb", "16", "256"},
    {"guesser_mlp_hidden", "64", "512"},
    {"qgen_word_emb", "64", "512"},
    {"qgen_projection", "32", "512"},
    {"qgen_hidden", "128", "1024"},
    {"dm_hidden", "128", "512"},
    {"dm_class_weighting", "uniform", "uniform"},
    {"dm2_label", "guess", "guess"},
    {"hybrid_dm", "0", "0"},
    {"sweep_maxq", "5,8,10", "5,8,10,12,20,25,30"},
    {"maxq", "10", "10"},
    {"baseline_questions", "5", "5"},
    {"variant", "dm2", "dm2"},
    {"jobs", "1", "1"},
};

std::string Trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

template <typename N>
N ParseNumber(const std::string& key, const std::string& text) {
  N value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config key '" + key + "' expects a number, got '" + text + "'");
  }
  return value;
}

}  // namespace

std::string SourceName(RunConfig::Source s) {
  switch (s) {
    case RunConfig::Source::kDefault: return "default";
    case RunConfig::Source::kFile: return "file";
    case RunConfig::Source::kFlag: return "flag";
  }
  return "default";
}

RunConfig RunConfig::Defaults(const std::string& profile) {
  if (profile != "toy" && profile != "paper") {
    throw ConfigError("unknown profile '" + profile + "' (expected toy or paper)");
  }
  RunConfig c;
  for (const KeySpec& k : kKeys) {
    c.values_[k.key] = {profile == "toy" ? k.toy : k.paper, Source::kDefault};
  }
  return c;
}

bool RunConfig::IsKey(const std::string& key) {
  for (const KeySpec& k : kKeys) {
    if (key == k.key) return true;
  }
  return false;
}

std::vector<std::string> RunConfig::Keys() {
  std::vector<std::string> out;
  for (const KeySpec& k : kKeys) out.push_back(k.key);
  return out;
}

std::map<std::string, std::string> RunConfig::ParseText(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = Trim(std::string_view(line).substr(0, eq));
    const std::string value = Trim(std::string_view(line).substr(eq + 1));
    if (!IsKey(key)) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!out.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key +
                        "'");
    }
  }
  return out;
}

std::map<std::string, std::string> RunConfig::ParseFile(const std::string& path) {
  if (!FileExists(path)) throw ConfigError("config file not found: " + path);
  return ParseText(ReadFile(path));
}

RunConfig RunConfig::Resolve(const std::map<std::string, std::string>& file,
                             const std::map<std::string, std::string>& flags) {
  std::string profile = "toy";
  if (auto it = file.find("profile"); it != file.end()) profile = it->second;
  if (auto it = flags.find("profile"); it != flags.end()) profile = it->second;
  RunConfig c = Defaults(profile);
  for (const auto& [k, v] : file) c.Set(k, v, Source::kFile);
  for (const auto& [k, v] : flags) c.Set(k, v, Source::kFlag);
  c.Validate();
  return c;
}

void RunConfig::Set(const std::string& key, const std::string& value, Source source) {
  if (!IsKey(key)) throw ConfigError("unknown config key '" + key + "'");
  values_[key] = {value, source};
}

const std::string& RunConfig::Str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second.value;
}

int RunConfig::Int(const std::string& key) const { return ParseNumber<int>(key, Str(key)); }

double RunConfig::Double(const std::string& key) const {
  return ParseNumber<double>(key, Str(key));
}

uint64_t RunConfig::Seed() const { return ParseNumber<uint64_t>("seed", Str("seed")); }

std::vector<int> RunConfig::IntList(const std::string& key) const {
  std::vector<int> out;
  std::string item;
  std::istringstream in(Str(key));
  while (std::getline(in, item, ',')) out.push_back(ParseNumber<int>(key, Trim(item)));
  return out;
}

RunConfig::Source RunConfig::SourceOf(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second.source;
}

std::string RunConfig::Echo() const {
  std::string out;
  for (const auto& [k, e] : values_) {
    out += k + "=" + e.value + "  # " + SourceName(e.source) + "\n";
  }
  return out;
}

void RunConfig::Validate() const {
  auto positive = [&](const std::string& key) {
    if (Int(key) < 1) throw ConfigError("config key '" + key + "' must be >= 1");
  };
  for (const char* key :
       {"n_games", "batch_size", "max_epochs", "patience", "min_word_freq", "max_question_len",
        "oracle_word_emb", "oracle_hidden", "oracle_category_emb", "oracle_mlp_hidden",
        "guesser_word_emb", "guesser_hidden", "guesser_category_emb", "guesser_mlp_hidden",
        "qgen_word_emb", "qgen_projection", "qgen_hidden", "dm_hidden", "maxq",
        "baseline_questions", "jobs"}) {
    positive(key);
  }
  Seed();
  if (!(Double("lr") > 0)) throw ConfigError("lr must be > 0");
  if (!(Double("clip_norm") > 0)) throw ConfigError("clip_norm must be > 0");
  if (!(Double("temperature") > 0)) throw ConfigError("temperature must be > 0");
  const std::string& decode = Str("decode");
  if (decode != "greedy" && decode != "sample") {
    throw ConfigError("decode must be greedy or sample");
  }
  const std::string& variant = Str("variant");
  if (variant != "baseline" && variant != "dm1" && variant != "dm2" && variant != "hybrid") {
    throw ConfigError("variant must be one of baseline, dm1, dm2");
  }
  if (Str("hybrid_dm") != "0" && Str("hybrid_dm") != "1") {
    throw ConfigError("hybrid_dm must be 0 or 1");
  }
  ParseLabelScheme(Str("dm2_label"));
  ParseClassWeighting(Str("dm_class_weighting"));
  const std::vector<int> sweep = IntList("sweep_maxq");
  if (sweep.empty()) throw ConfigError("sweep_maxq must list at least one cap");
  for (int q : sweep) {
    if (q < 1) throw ConfigError("sweep_maxq entries must be >= 1");
  }
}

LoopConfig RunConfig::Loop(uint64_t seed) const {
  LoopConfig l;
  l.batch_size = Int("batch_size");
  l.max_epochs = Int("max_epochs");
  l.patience = Int("patience");
  l.clip_norm = Double("clip_norm");
  l.adam.lr = Double("lr");
  l.seed = seed;
  return l;
}

}  // namespace gwdm
