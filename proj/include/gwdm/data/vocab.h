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

#ifndef GWDM_DATA_VOCAB_H_
#define GWDM_DATA_VOCAB_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gwdm/data/game.h"

namespace gwdm {

// Lowercases ASCII, splits on whitespace and emits each of ? ! . , as its
// own token.
std::vector<std::string> Tokenize(std::string_view text);

// Tokenizes and re-joins with single spaces.
std::string NormalizeQuestion(std::string_view text);

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr int kSosId = 2;
inline constexpr int kEosId = 3;
inline constexpr int kYesId = 4;
inline constexpr int kNoId = 5;
inline constexpr int kNaId = 6;
inline constexpr int kNumReserved = 7;

inline int AnswerTokenId(Answer a) { return kYesId + static_cast<int>(a); }

class Vocab {
 public:
  // Reserved tokens first, then words with frequency >= min_freq ordered by
  // (frequency desc, word asc).
  static Vocab Build(const std::vector<GameRecord>& games, int min_freq = 3);
  static Vocab BuildFromQuestions(const std::vector<std::string>& questions,
                                  int min_freq = 3);

  int size() const { return static_cast<int>(words_.size()); }
  int Id(std::string_view word) const;  // unk for unseen words
  const std::string& Word(int id) const;
  int64_t Frequency(int id) const { return freqs_.at(id); }
  int min_freq() const { return min_freq_; }
  bool Contains(std::string_view word) const;

  std::vector<int> Encode(std::string_view question) const;
  std::string Decode(const std::vector<int>& ids) const;

  // FNV-1a over the ordered word list; identifies compatible checkpoints.
  uint64_t Hash() const;
  std::string HashHex() const;

  // "word<TAB>frequency" per line in id order.
  std::string Serialize() const;
  static Vocab Parse(std::string_view text);
  void Save(const std::string& path) const;
  static Vocab Load(const std::string& path);

  const std::vector<std::string>& words() const { return words_; }

 private:
  void Add(const std::string& word, int64_t freq);

  std::vector<std::string> words_;
  std::vector<int64_t> freqs_;
  std::unordered_map<std::string, int> index_;
  int min_freq_ = 1;
};

}  // namespace gwdm

#endif  // GWDM_DATA_VOCAB_H_
