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

#ifndef GWDM_DATA_TOYWORLD_H_
#define GWDM_DATA_TOYWORLD_H_

// Deterministic synthetic stand-in for the image dataset. Each toy image is a
// set of labelled boxes on a square canvas; its "visual features" are a fixed
// random projection of simple layout statistics, and every game comes with a
// scripted dialogue that pins down the target exactly.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gwdm/data/features.h"
#include "gwdm/data/game.h"

namespace gwdm {

struct ToyConfig {
  int n_categories = 10;
  int min_objects = 3;
  int max_objects = 8;
  int image_size = 100;
  int feature_dim = 32;
  uint64_t projection_seed = 20180820;
  int min_box = 20;
  int max_box = 45;
  // Object centres keep this many pixels away from the image midlines so
  // left/right and top/bottom are never ambiguous.
  int midline_margin = 2;
};

struct ToyWorld {
  std::vector<GameRecord> games;
  FeatureTable features;
  std::vector<std::string> category_names;
};

// Pure function of (seed, n_games, config). Throws ArgumentError for
// configurations that cannot produce valid games.
ToyWorld GenerateToyWorld(uint64_t seed, int n_games, const ToyConfig& config);

std::vector<std::string> ToyCategoryNames(int n_categories);

// Every question the scripted questioner can ask: one per category, then the
// two spatial questions.
std::vector<std::string> ToyTemplateQuestions(const ToyConfig& config);

inline constexpr std::string_view kLeftQuestion = "is it on the left ?";
inline constexpr std::string_view kTopQuestion = "is it at the top ?";
std::string CategoryQuestion(std::string_view category);

// Geometry-exact answer to a template question about `object`. Questions
// outside the template set are answered N/A.
Answer ToyAnswer(std::string_view question, const ObjectInfo& object,
                 const ImageInfo& image);

// The rule questioner: asks about the most frequent category among the
// still-consistent candidates until one category remains, then about the
// horizontal and vertical halves where candidates still differ. Stops as soon
// as exactly one candidate is consistent. Returns false if the target cannot
// be isolated.
bool ScriptDialogue(const GameRecord& game, std::vector<QaPair>* qas);

// Layout statistics fed to the projection: per-category counts, mean centre
// and mean size in normalised coordinates.
std::vector<double> ToyLayoutStatistics(const GameRecord& game, int n_categories);

}  // namespace gwdm

#endif  // GWDM_DATA_TOYWORLD_H_
