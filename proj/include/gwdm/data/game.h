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

#ifndef GWDM_DATA_GAME_H_
#define GWDM_DATA_GAME_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gwdm {

enum class Answer { kYes = 0, kNo = 1, kNa = 2 };
inline constexpr int kNumAnswers = 3;

// Accepts "Yes", "No", "N/A" and "NA" in any letter case.
std::optional<Answer> ParseAnswer(std::string_view text);
std::string AnswerString(Answer a);  // "Yes" / "No" / "N/A"

enum class GameStatus { kSuccess = 0, kFailure = 1, kIncomplete = 2 };

std::optional<GameStatus> ParseStatus(std::string_view text);
std::string StatusString(GameStatus s);

struct BBox {
  double x = 0, y = 0, w = 0, h = 0;
  bool operator==(const BBox&) const = default;
};

struct ObjectInfo {
  int64_t id = 0;
  std::string category;
  int category_id = 0;
  BBox bbox;
  double area = 0;  // as provided by the dataset (segmentation area)
  bool operator==(const ObjectInfo&) const = default;
};

struct ImageInfo {
  int64_t id = 0;
  int width = 0;
  int height = 0;
  bool operator==(const ImageInfo&) const = default;
};

struct QaPair {
  std::string question;
  Answer answer = Answer::kYes;
  bool operator==(const QaPair&) const = default;
};

struct GameRecord {
  int64_t game_id = 0;
  ImageInfo image;
  std::vector<ObjectInfo> objects;
  int64_t target_id = 0;
  std::vector<QaPair> qas;
  GameStatus status = GameStatus::kSuccess;

  const ObjectInfo& target() const;
  int target_index() const;
  bool operator==(const GameRecord&) const = default;
};

// One game per line in the dataset's JSON schema.
GameRecord ParseGameLine(std::string_view line);
std::string SerializeGame(const GameRecord& game);

struct ParseResult {
  std::vector<GameRecord> games;
  int64_t skipped_malformed = 0;
  int64_t skipped_integrity = 0;
};

// Reads newline-delimited records; `.gz` paths are decompressed. Strict mode
// throws on the first bad line; lenient mode skips and counts.
ParseResult ParseGames(const std::string& path, bool lenient);
ParseResult ParseGamesFromString(std::string_view text, bool lenient);
void WriteGames(const std::string& path, const std::vector<GameRecord>& games);

inline constexpr int kMinObjects = 3;
inline constexpr int kMaxObjects = 20;
inline constexpr double kMinTargetArea = 500.0;

struct FilterReport {
  int64_t kept = 0;
  int64_t dropped = 0;
};

// Keeps games with 3..20 objects whose target area exceeds 500 px^2.
std::vector<GameRecord> FilterGames(const std::vector<GameRecord>& games,
                                    FilterReport* report = nullptr);
bool PassesFilters(const GameRecord& game);

struct ComplexityMeasures {
  int n_objects = 0;
  int n_same_category = 0;  // objects sharing the target's category, target included
  double target_area_ratio = 0;
};

ComplexityMeasures ComputeComplexity(const GameRecord& game);

struct DatasetStats {
  int64_t n_games = 0;
  std::array<int64_t, 3> by_status{};   // success, failure, incomplete
  std::array<int64_t, 3> answers{};     // yes, no, na
  int64_t n_questions = 0;
  int64_t n_images = 0;
  double mean_questions = 0;
  double dialogues_per_image = 0;

  double AnswerFraction(Answer a) const;
  double StatusFraction(GameStatus s) const;
};

DatasetStats ComputeDatasetStats(const std::vector<GameRecord>& games);

}  // namespace gwdm

#endif  // GWDM_DATA_GAME_H_
