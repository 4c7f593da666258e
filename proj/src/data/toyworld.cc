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

#include "gwdm/data/toyworld.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "gwdm/core/errors.h"
#include "gwdm/core/random.h"
#include "gwdm/data/spatial.h"
#include "gwdm/data/vocab.h"

namespace gwdm {
namespace {

constexpr const char* kNames[] = {"ball",  "dog",   "cat",   "car",   "cup",
                                  "chair", "book",  "bird",  "lamp",  "tree",
                                  "kite",  "boat",  "shoe",  "vase",  "clock",
                                  "bench", "sheep", "horse", "pizza", "bowl"};
constexpr int kMaxCategories = sizeof(kNames) / sizeof(kNames[0]);
constexpr int kMaxAttempts = 1000;

double CenterX(const ObjectInfo& o) { return o.bbox.x + o.bbox.w / 2.0; }
double CenterY(const ObjectInfo& o) { return o.bbox.y + o.bbox.h / 2.0; }

bool IsLeft(const ObjectInfo& o, const ImageInfo& img) {
  return CenterX(o) < img.width / 2.0;
}
bool IsTop(const ObjectInfo& o, const ImageInfo& img) {
  return CenterY(o) < img.height / 2.0;
}

void Validate(const ToyConfig& c, int n_games) {
  if (n_games <= 0) throw ArgumentError("toy world needs at least one game");
  if (c.n_categories < 1 || c.n_categories > kMaxCategories) {
    throw ArgumentError("n_categories must be in [1, " + std::to_string(kMaxCategories) + "]");
  }
  if (c.min_objects < kMinObjects || c.max_objects > kMaxObjects ||
      c.min_objects > c.max_objects) {
    throw ArgumentError("objects per image must lie within [3, 20] and min <= max");
  }
  if (c.feature_dim < 1) throw ArgumentError("feature_dim must be positive");
  if (c.min_box < 1 || c.min_box > c.max_box || c.max_box > c.image_size) {
    throw ArgumentError("box sizes must satisfy 1 <= min_box <= max_box <= image_size");
  }
  if (static_cast<double>(c.max_box) * c.max_box <= kMinTargetArea) {
    throw ArgumentError("max_box too small for any target to exceed the area filter");
  }
}

ObjectInfo RandomObject(Rng& rng, const ToyConfig& c, int64_t id) {
  const double half = c.image_size / 2.0;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    ObjectInfo o;
    o.id = id;
    o.category_id = rng.IntIn(1, c.n_categories);
    o.category = kNames[o.category_id - 1];
    const int w = rng.IntIn(c.min_box, c.max_box);
    const int h = rng.IntIn(c.min_box, c.max_box);
    const int x = rng.IntIn(0, c.image_size - w);
    const int y = rng.IntIn(0, c.image_size - h);
    o.bbox = {static_cast<double>(x), static_cast<double>(y), static_cast<double>(w),
              static_cast<double>(h)};
    o.area = static_cast<double>(w) * h;
    if (std::abs(CenterX(o) - half) < c.midline_margin ||
        std::abs(CenterY(o) - half) < c.midline_margin) {
      continue;
    }
    return o;
  }
  throw ArgumentError("midline margin leaves no room for object centres");
}

}  // namespace

std::vector<std::string> ToyCategoryNames(int n_categories) {
  if (n_categories < 1 || n_categories > kMaxCategories) {
    throw ArgumentError("n_categories out of range");
  }
  return std::vector<std::string>(kNames, kNames + n_categories);
}

std::string CategoryQuestion(std::string_view category) {
  return "is it a " + std::string(category) + " ?";
}

std::vector<std::string> ToyTemplateQuestions(const ToyConfig& config) {
  std::vector<std::string> out;
  for (const std::string& name : ToyCategoryNames(config.n_categories)) {
    out.push_back(CategoryQuestion(name));
  }
  out.emplace_back(kLeftQuestion);
  out.emplace_back(kTopQuestion);
  return out;
}

Answer ToyAnswer(std::string_view question, const ObjectInfo& object,
                 const ImageInfo& image) {
  const std::string q = NormalizeQuestion(question);
  if (q == kLeftQuestion) return IsLeft(object, image) ? Answer::kYes : Answer::kNo;
  if (q == kTopQuestion) return IsTop(object, image) ? Answer::kYes : Answer::kNo;
  const std::vector<std::string> tokens = Tokenize(q);
  if (tokens.size() == 5 && tokens[0] == "is" && tokens[1] == "it" && tokens[2] == "a" &&
      tokens[4] == "?") {
    return tokens[3] == object.category ? Answer::kYes : Answer::kNo;
  }
  return Answer::kNa;
}

bool ScriptDialogue(const GameRecord& game, std::vector<QaPair>* qas) {
  const ObjectInfo& target = game.target();
  std::vector<const ObjectInfo*> alive;
  for (const ObjectInfo& o : game.objects) alive.push_back(&o);
  bool asked_left = false, asked_top = false;
  qas->clear();
  auto ask = [&](const std::string& q) {
    const Answer a = ToyAnswer(q, target, game.image);
    qas->push_back({q, a});
    std::erase_if(alive, [&](const ObjectInfo* o) { return ToyAnswer(q, *o, game.image) != a; });
  };
  while (alive.size() > 1) {
    std::map<int, int> counts;
    for (const ObjectInfo* o : alive) ++counts[o->category_id];
    if (counts.size() > 1) {
      int best = counts.begin()->first;
      for (const auto& [cat, n] : counts) {
        if (n > counts[best]) best = cat;
      }
      const auto it = std::find_if(alive.begin(), alive.end(),
                                   [&](const ObjectInfo* o) { return o->category_id == best; });
      ask(CategoryQuestion((*it)->category));
      continue;
    }
    auto differs = [&](auto pred) {
      return std::any_of(alive.begin(), alive.end(), [&](const ObjectInfo* o) {
        return pred(*o, game.image) != pred(*alive.front(), game.image);
      });
    };
    if (!asked_left && differs(IsLeft)) {
      asked_left = true;
      ask(std::string(kLeftQuestion));
    } else if (!asked_top && differs(IsTop)) {
      asked_top = true;
      ask(std::string(kTopQuestion));
    } else {
      return false;
    }
  }
  return true;
}

std::vector<double> ToyLayoutStatistics(const GameRecord& game, int n_categories) {
  std::vector<double> stats(n_categories + 4, 0.0);
  for (const ObjectInfo& o : game.objects) {
    if (o.category_id >= 1 && o.category_id <= n_categories) stats[o.category_id - 1] += 1;
    const SpatialVec s = EncodeSpatial(o.bbox, game.image.width, game.image.height);
    stats[n_categories + 0] += s[4];
    stats[n_categories + 1] += s[5];
    stats[n_categories + 2] += s[6];
    stats[n_categories + 3] += s[7];
  }
  const double n = static_cast<double>(game.objects.size());
  for (int k = 0; k < 4; ++k) stats[n_categories + k] /= n;
  return stats;
}

ToyWorld GenerateToyWorld(uint64_t seed, int n_games, const ToyConfig& config) {
  Validate(config, n_games);
  ToyWorld world;
  world.category_names = ToyCategoryNames(config.n_categories);
  world.features = FeatureTable(config.feature_dim);

  const int raw_dim = config.n_categories + 4;
  std::vector<double> projection(static_cast<size_t>(config.feature_dim) * raw_dim);
  Rng proj_rng(config.projection_seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(raw_dim));
  for (double& p : projection) p = proj_rng.Uniform(-1.0, 1.0) * scale;

  Rng rng(seed);
  for (int i = 0; i < n_games; ++i) {
    const int64_t game_id = i + 1;
    GameRecord game;
    bool ok = false;
    for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
      game = GameRecord{};
      game.game_id = game_id;
      game.image = {game_id, config.image_size, config.image_size};
      const int n_obj = rng.IntIn(config.min_objects, config.max_objects);
      for (int k = 0; k < n_obj; ++k) {
        game.objects.push_back(RandomObject(rng, config, game_id * 100 + k + 1));
      }
      std::vector<int> eligible;
      for (int k = 0; k < n_obj; ++k) {
        if (game.objects[k].area > kMinTargetArea) eligible.push_back(k);
      }
      if (eligible.empty()) continue;
      game.target_id = game.objects[eligible[rng.Below(eligible.size())]].id;
      game.status = GameStatus::kSuccess;
      ok = ScriptDialogue(game, &game.qas) && !game.qas.empty();
    }
    if (!ok) throw ArgumentError("toy config cannot produce a resolvable game");

    const std::vector<double> raw = ToyLayoutStatistics(game, config.n_categories);
    std::vector<float> feat(config.feature_dim);
    for (int r = 0; r < config.feature_dim; ++r) {
      double acc = 0;
      for (int c = 0; c < raw_dim; ++c) acc += projection[r * raw_dim + c] * raw[c];
      feat[r] = static_cast<float>(acc);
    }
    world.features.Set(game.image.id, std::move(feat));
    world.games.push_back(std::move(game));
  }
  return world;
}

}  // namespace gwdm
