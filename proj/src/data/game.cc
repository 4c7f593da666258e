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

#include "gwdm/data/game.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>

#include "gwdm/core/errors.h"
#include "gwdm/data/line_reader.h"
#include "json.hpp"

namespace gwdm {
namespace {

using nlohmann::json;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

GameRecord FromJson(const json& j) {
  GameRecord g;
  g.game_id = j.at("id").get<int64_t>();
  const json& img = j.at("image");
  g.image.id = img.at("id").get<int64_t>();
  g.image.width = img.at("width").get<int>();
  g.image.height = img.at("height").get<int>();
  for (const json& o : j.at("objects")) {
    ObjectInfo obj;
    obj.id = o.at("id").get<int64_t>();
    obj.category = o.at("category").get<std::string>();
    obj.category_id = o.at("category_id").get<int>();
    const json& bb = o.at("bbox");
    if (!bb.is_array() || bb.size() != 4) {
      throw ParseError("bbox must have four entries");
    }
    obj.bbox = {bb[0].get<double>(), bb[1].get<double>(), bb[2].get<double>(),
                bb[3].get<double>()};
    obj.area = o.at("area").get<double>();
    g.objects.push_back(std::move(obj));
  }
  for (const json& qa : j.at("qas")) {
    const std::string text = qa.at("answer").get<std::string>();
    const auto answer = ParseAnswer(text);
    if (!answer) throw ParseError("unknown answer '" + text + "'");
    g.qas.push_back({qa.at("question").get<std::string>(), *answer});
  }
  g.target_id = j.at("object_id").get<int64_t>();
  const std::string status = j.at("status").get<std::string>();
  const auto parsed = ParseStatus(status);
  if (!parsed) throw ParseError("unknown status '" + status + "'");
  g.status = *parsed;
  return g;
}

void CheckIntegrity(const GameRecord& g) {
  if (g.image.width <= 0 || g.image.height <= 0) {
    throw IntegrityError("game " + std::to_string(g.game_id) +
                         ": non-positive image size");
  }
  const bool has_target =
      std::any_of(g.objects.begin(), g.objects.end(),
                  [&](const ObjectInfo& o) { return o.id == g.target_id; });
  if (!has_target) {
    throw IntegrityError("game " + std::to_string(g.game_id) + ": target object " +
                         std::to_string(g.target_id) + " not among its objects");
  }
}

}  // namespace

std::optional<Answer> ParseAnswer(std::string_view text) {
  const std::string t = Lower(text);
  if (t == "yes") return Answer::kYes;
  if (t == "no") return Answer::kNo;
  if (t == "n/a" || t == "na") return Answer::kNa;
  return std::nullopt;
}

std::string AnswerString(Answer a) {
  switch (a) {
    case Answer::kYes:
      return "Yes";
    case Answer::kNo:
      return "No";
    case Answer::kNa:
      break;
  }
  return "N/A";
}

std::optional<GameStatus> ParseStatus(std::string_view text) {
  const std::string t = Lower(text);
  if (t == "success") return GameStatus::kSuccess;
  if (t == "failure") return GameStatus::kFailure;
  if (t == "incomplete") return GameStatus::kIncomplete;
  return std::nullopt;
}

std::string StatusString(GameStatus s) {
  switch (s) {
    case GameStatus::kSuccess:
      return "success";
    case GameStatus::kFailure:
      return "failure";
    case GameStatus::kIncomplete:
      break;
  }
  return "incomplete";
}

int GameRecord::target_index() const {
  for (size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].id == target_id) return static_cast<int>(i);
  }
  throw IntegrityError("game " + std::to_string(game_id) + ": target missing");
}

const ObjectInfo& GameRecord::target() const { return objects[target_index()]; }

GameRecord ParseGameLine(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  GameRecord g;
  try {
    g = FromJson(j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("schema mismatch: ") + e.what());
  }
  CheckIntegrity(g);
  return g;
}

std::string SerializeGame(const GameRecord& g) {
  json j;
  j["id"] = g.game_id;
  j["image"] = {{"id", g.image.id}, {"width", g.image.width}, {"height", g.image.height}};
  json objects = json::array();
  for (const ObjectInfo& o : g.objects) {
    objects.push_back({{"id", o.id},
                       {"category", o.category},
                       {"category_id", o.category_id},
                       {"bbox", {o.bbox.x, o.bbox.y, o.bbox.w, o.bbox.h}},
                       {"area", o.area}});
  }
  j["objects"] = std::move(objects);
  json qas = json::array();
  for (const QaPair& qa : g.qas) {
    qas.push_back({{"question", qa.question}, {"answer", AnswerString(qa.answer)}});
  }
  j["qas"] = std::move(qas);
  j["object_id"] = g.target_id;
  j["status"] = StatusString(g.status);
  return j.dump();
}

ParseResult ParseGamesFromString(std::string_view text, bool lenient) {
  ParseResult result;
  int64_t number = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++number;
    pos = end + 1;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      result.games.push_back(ParseGameLine(line));
    } catch (const ParseError& e) {
      if (!lenient) {
        throw ParseError("line " + std::to_string(number) + ": " + e.what());
      }
      ++result.skipped_malformed;
    } catch (const IntegrityError&) {
      if (!lenient) throw;
      ++result.skipped_integrity;
    }
  }
  return result;
}

ParseResult ParseGames(const std::string& path, bool lenient) {
  ParseResult result;
  ForEachLine(path, [&](std::string_view line, int64_t number) {
    if (line.find_first_not_of(" \t") == std::string_view::npos) return;
    try {
      result.games.push_back(ParseGameLine(line));
    } catch (const ParseError& e) {
      if (!lenient) {
        throw ParseError(path + ":" + std::to_string(number) + ": " + e.what());
      }
      ++result.skipped_malformed;
    } catch (const IntegrityError&) {
      if (!lenient) throw;
      ++result.skipped_integrity;
    }
  });
  return result;
}

void WriteGames(const std::string& path, const std::vector<GameRecord>& games) {
  std::string out;
  for (const GameRecord& g : games) {
    out += SerializeGame(g);
    out += '\n';
  }
  WriteFile(path, out);
}

bool PassesFilters(const GameRecord& game) {
  const int n = static_cast<int>(game.objects.size());
  if (n < kMinObjects || n > kMaxObjects) return false;
  return game.target().area > kMinTargetArea;
}

std::vector<GameRecord> FilterGames(const std::vector<GameRecord>& games,
                                    FilterReport* report) {
  std::vector<GameRecord> kept;
  for (const GameRecord& g : games) {
    if (PassesFilters(g)) kept.push_back(g);
  }
  if (report != nullptr) {
    report->kept = static_cast<int64_t>(kept.size());
    report->dropped = static_cast<int64_t>(games.size() - kept.size());
  }
  return kept;
}

ComplexityMeasures ComputeComplexity(const GameRecord& game) {
  const ObjectInfo& target = game.target();
  ComplexityMeasures m;
  m.n_objects = static_cast<int>(game.objects.size());
  m.n_same_category = static_cast<int>(
      std::count_if(game.objects.begin(), game.objects.end(),
                    [&](const ObjectInfo& o) { return o.category_id == target.category_id; }));
  m.target_area_ratio =
      target.area / (static_cast<double>(game.image.width) * game.image.height);
  return m;
}

double DatasetStats::AnswerFraction(Answer a) const {
  int64_t total = answers[0] + answers[1] + answers[2];
  return total == 0 ? 0.0 : static_cast<double>(answers[static_cast<int>(a)]) / total;
}

double DatasetStats::StatusFraction(GameStatus s) const {
  return n_games == 0 ? 0.0
                      : static_cast<double>(by_status[static_cast<int>(s)]) / n_games;
}

DatasetStats ComputeDatasetStats(const std::vector<GameRecord>& games) {
  DatasetStats s;
  std::set<int64_t> images;
  for (const GameRecord& g : games) {
    ++s.n_games;
    ++s.by_status[static_cast<int>(g.status)];
    for (const QaPair& qa : g.qas) ++s.answers[static_cast<int>(qa.answer)];
    s.n_questions += static_cast<int64_t>(g.qas.size());
    images.insert(g.image.id);
  }
  s.n_images = static_cast<int64_t>(images.size());
  if (s.n_games > 0) {
    s.mean_questions = static_cast<double>(s.n_questions) / s.n_games;
    s.dialogues_per_image = static_cast<double>(s.n_games) / s.n_images;
  }
  return s;
}

}  // namespace gwdm
