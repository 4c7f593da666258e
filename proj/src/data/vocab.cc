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

#include "gwdm/data/vocab.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <utility>

#include "gwdm/core/errors.h"
#include "gwdm/data/line_reader.h"

namespace gwdm {
namespace {

const char* const kReserved[kNumReserved] = {"<pad>", "<unk>", "<sos>", "<eos>",
                                             "<yes>", "<no>",  "<na>"};

bool IsSplitPunct(char c) { return c == '?' || c == '!' || c == '.' || c == ','; }

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (char raw : text) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      flush();
    } else if (IsSplitPunct(raw)) {
      flush();
      tokens.emplace_back(1, raw);
    } else {
      cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : raw);
    }
  }
  flush();
  return tokens;
}

std::string NormalizeQuestion(std::string_view text) {
  std::string out;
  for (const std::string& t : Tokenize(text)) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

void Vocab::Add(const std::string& word, int64_t freq) {
  index_.emplace(word, static_cast<int>(words_.size()));
  words_.push_back(word);
  freqs_.push_back(freq);
}

Vocab Vocab::BuildFromQuestions(const std::vector<std::string>& questions,
                                int min_freq) {
  if (questions.empty()) throw ArgumentError("vocabulary from an empty corpus");
  std::map<std::string, int64_t> counts;
  for (const std::string& q : questions) {
    for (std::string& t : Tokenize(q)) ++counts[std::move(t)];
  }
  std::vector<std::pair<std::string, int64_t>> kept;
  for (auto& [word, n] : counts) {
    if (n >= min_freq) kept.emplace_back(word, n);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocab v;
  v.min_freq_ = min_freq;
  for (const char* r : kReserved) v.Add(r, 0);
  for (auto& [word, n] : kept) {
    if (v.index_.count(word) == 0) v.Add(word, n);
  }
  return v;
}

Vocab Vocab::Build(const std::vector<GameRecord>& games, int min_freq) {
  std::vector<std::string> questions;
  for (const GameRecord& g : games) {
    for (const QaPair& qa : g.qas) questions.push_back(qa.question);
  }
  return BuildFromQuestions(questions, min_freq);
}

int Vocab::Id(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocab::Contains(std::string_view word) const {
  return index_.count(std::string(word)) > 0;
}

const std::string& Vocab::Word(int id) const {
  if (id < 0 || id >= size()) throw IndexError("vocab id " + std::to_string(id));
  return words_[id];
}

std::vector<int> Vocab::Encode(std::string_view question) const {
  std::vector<int> ids;
  for (const std::string& t : Tokenize(question)) ids.push_back(Id(t));
  return ids;
}

std::string Vocab::Decode(const std::vector<int>& ids) const {
  std::string out;
  for (int id : ids) {
    if (!out.empty()) out += ' ';
    out += Word(id);
  }
  return out;
}

uint64_t Vocab::Hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const std::string& w : words_) {
    for (unsigned char c : w) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= '\n';
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Vocab::HashHex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(Hash()));
  return buf;
}

std::string Vocab::Serialize() const {
  std::string out = "min_freq=" + std::to_string(min_freq_) + "\n";
  for (size_t i = 0; i < words_.size(); ++i) {
    out += words_[i] + "\t" + std::to_string(freqs_[i]) + "\n";
  }
  return out;
}

Vocab Vocab::Parse(std::string_view text) {
  Vocab v;
  size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line_no == 1) {
      if (line.rfind("min_freq=", 0) != 0) throw FormatError("vocab: missing min_freq header");
      v.min_freq_ = std::stoi(line.substr(9));
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("vocab line " + std::to_string(line_no) + ": missing tab");
    }
    v.Add(line.substr(0, tab), std::stoll(line.substr(tab + 1)));
  }
  if (v.size() < kNumReserved) throw FormatError("vocab: reserved tokens missing");
  for (int i = 0; i < kNumReserved; ++i) {
    if (v.words_[i] != kReserved[i]) throw FormatError("vocab: reserved tokens out of order");
  }
  return v;
}

void Vocab::Save(const std::string& path) const { WriteFile(path, Serialize()); }

Vocab Vocab::Load(const std::string& path) { return Parse(ReadFile(path)); }

}  // namespace gwdm
