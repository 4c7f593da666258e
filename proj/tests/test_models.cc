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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "gwdm/core/grad_check.h"
#include "gwdm/data/toyworld.h"
#include "gwdm/models/decider.h"
#include "gwdm/models/oracle.h"
#include "gwdm/models/questioner.h"
#include "gwdm/train/loop.h"

namespace gwdm {
namespace {

struct Fixture {
  ToyWorld world = GenerateToyWorld(5, 40, ToyConfig{});
  Vocab vocab = Vocab::Build(world.games, 1);
  OracleDims odims{vocab.size(), 8, 6, 11, 4, 10};
  GuesserDims gdims{vocab.size(), 8, 6, 11, 4, 7};
  QGenDims qdims{vocab.size(), 8, 32, 5, 6};
};

TEST_CASE("oracle: zero weights give the uniform distribution and answer Yes") {
  Fixture f;
  const OracleModel m = OracleModel::Zeros(f.odims);
  const Vec<float> p = OracleForward(m, {7, 8, 9}, 3, SpatialVec{});
  for (int i = 0; i < 3; ++i) CHECK(p(i) == doctest::Approx(1.0 / 3));
  CHECK(OracleAnswer(m, {7}, 3, SpatialVec{}) == Answer::kYes);
}

TEST_CASE("oracle: argmax answers and tie order") {
  Vec<float> p(3);
  p << 0.2f, 0.7f, 0.1f;
  CHECK(ArgmaxAnswer(p) == Answer::kNo);
  p << 0.4f, 0.4f, 0.2f;
  CHECK(ArgmaxAnswer(p) == Answer::kYes);
  p << 0.2f, 0.4f, 0.4f;
  CHECK(ArgmaxAnswer(p) == Answer::kNo);
  p << 0.1f, 0.1f, 0.8f;
  CHECK(ArgmaxAnswer(p) == Answer::kNa);
}

TEST_CASE("oracle: deterministic valid distribution, bad category rejected") {
  Fixture f;
  const OracleModel m = OracleModel::Random(f.odims, 3);
  const SpatialVec s = EncodeSpatial({10, 20, 30, 40}, 100, 100);
  const Vec<float> a = OracleForward(m, {7, 8, 9}, 3, s);
  const Vec<float> b = OracleForward(m, {7, 8, 9}, 3, s);
  CHECK(a == b);
  CHECK(std::abs(a.sum() - 1.0f) < 1e-6f);
  CHECK(a.minCoeff() > 0.0f);
  CHECK_THROWS_AS(OracleForward(m, {7}, 11, s), IndexError);
  CHECK_THROWS_AS(OracleForward(m, {}, 1, s), ArgumentError);
}

TEST_CASE("oracle: only target category, spatial and question matter") {
  Fixture f;
  const OracleModel m = OracleModel::Random(f.odims, 4);
  GameRecord g = f.world.games[0];
  std::vector<OracleExample> a = OracleExamples({g}, f.vocab);
  std::reverse(g.objects.begin(), g.objects.end());
  std::vector<OracleExample> b = OracleExamples({g}, f.vocab);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(OracleForward(m, a[i].tokens, a[i].category_id, a[i].spatial) ==
          OracleForward(m, b[i].tokens, b[i].category_id, b[i].spatial));
  }
}

TEST_CASE("oracle: forward and loss pass the gradient check") {
  Fixture f;
  OracleModelT<double> m = OracleModelT<double>::Random(f.odims, 5);
  std::vector<OracleExample> ex = OracleExamples(
      {f.world.games.begin(), f.world.games.begin() + 3}, f.vocab);
  std::vector<const OracleExample*> batch;
  for (const auto& e : ex) batch.push_back(&e);
  std::function<double(OracleModelT<double>&, OracleModelT<double>*)> fn =
      [&](OracleModelT<double>& p, OracleModelT<double>* g) {
        const BatchLoss b = OracleBatchLoss(p, g, batch);
        return b.sum / b.count;
      };
  CHECK(GradCheck(m, fn).max_rel_error < 1e-4);
}

TEST_CASE("qgen example targets") {
  const QGenExample ex = MakeQGenExample({{10, 11}, {12}}, {Answer::kYes, Answer::kNa}, nullptr);
  CHECK(ex.inputs == std::vector<int>{kSosId, 10, 11, kYesId, 12, kNaId});
  CHECK(ex.targets == std::vector<int>{10, 11, kEosId, 12, kEosId, -1});
}

TEST_CASE("qgen: empty history is the sos state, zero weights give zero state") {
  Fixture f;
  const std::vector<float>& feats = f.world.features.Lookup(1);
  const QGenModel z = QGenModel::Zeros(f.qdims);
  const LstmState s = QGenEncode(z, HistoryTokens(f.world.games[0].qas, f.vocab), feats);
  CHECK(s.h.isZero(0));
  CHECK(s.c.isZero(0));

  const QGenModel m = QGenModel::Random(f.qdims, 6);
  const Vec<float> proj = QGenProjection(m, feats);
  const LstmState sos = QGenAdvance(m, proj, ZeroState(m.lstm.hidden()), {kSosId});
  const LstmState empty = QGenEncode(m, {}, feats);
  CHECK(sos.h == empty.h);
  CHECK(sos.c == empty.c);
  CHECK_THROWS_AS(QGenEncode(m, {}, std::vector<float>(3, 0.f)), DimensionError);
}

TEST_CASE("encoders: incremental equals full, bitwise") {
  Fixture f;
  const QGenModel q = QGenModel::Random(f.qdims, 7);
  const GuesserModel g = GuesserModel::Random(f.gdims, 8);
  for (int gi = 0; gi < 5; ++gi) {
    const GameRecord& game = f.world.games[gi];
    const std::vector<float>& feats = f.world.features.Lookup(game.image.id);
    DialogueState state(q, g, feats);
    for (size_t t = 0; t < game.qas.size(); ++t) {
      state.AppendQa(f.vocab.Encode(game.qas[t].question), game.qas[t].answer);
      const std::vector<QaPair> prefix(game.qas.begin(), game.qas.begin() + t + 1);
      const std::vector<int> hist = HistoryTokens(prefix, f.vocab);
      CHECK(state.tokens() == hist);
      CHECK(state.num_pairs() == static_cast<int>(t + 1));
      const LstmState qf = QGenEncode(q, hist, feats);
      const LstmState gf = GuesserEncode(g, hist);
      CHECK(state.qgen_state().h == qf.h);
      CHECK(state.qgen_state().c == qf.c);
      CHECK(state.guesser_state().h == gf.h);
      CHECK(state.guesser_state().c == gf.c);
      const int answers = static_cast<int>(std::count_if(
          hist.begin(), hist.end(), [](int id) { return id >= kYesId && id <= kNaId; }));
      CHECK(answers == state.num_pairs());
    }
  }
}

TEST_CASE("guesser: history order matters") {
  Fixture f;
  const GuesserModel g = GuesserModel::Random(f.gdims, 9);
  const std::vector<QaPair> ab = {{"is it a dog ?", Answer::kYes}, {"is it on the left ?", Answer::kNo}};
  const std::vector<QaPair> ba = {ab[1], ab[0]};
  CHECK(GuesserEncode(g, HistoryTokens(ab, f.vocab)).h !=
        GuesserEncode(g, HistoryTokens(ba, f.vocab)).h);
  CHECK(GuesserEncode(g, {}).h == GuesserAdvance(g, ZeroState(6), {kSosId}).h);
}

TEST_CASE("guesser score examples") {
  Vec<float> gh(2);
  gh << 1, 0;
  Mat<float> e(2, 2);
  e << 1, 0, 0, 1;
  const Vec<float> p = GuesserScoreFromEmbeddings(gh, e);
  const double ref = 1.0 / (1.0 + std::exp(-1.0));
  CHECK(p(0) == doctest::Approx(ref).epsilon(1e-6));
  CHECK(p(1) == doctest::Approx(1 - ref).epsilon(1e-6));
  CHECK(p(0) == doctest::Approx(0.7311).epsilon(1e-4));
  std::vector<ObjectInfo> objs(2);
  objs[0].id = 1;
  objs[1].id = 2;
  CHECK(PickObject(p, objs) == 1);

  Vec<float> tie(3);
  tie << 0.25f, 0.5f, 0.25f;
  std::vector<ObjectInfo> three(3);
  three[0].id = 30;
  three[1].id = 10;
  three[2].id = 20;
  CHECK(PickObject(tie, three) == 10);
  Vec<float> uniform = Vec<float>::Constant(3, 1.0f / 3);
  CHECK(PickObject(uniform, three) == 10);
  Vec<float> one = Vec<float>::Constant(1, 1.0f);
  CHECK(PickObject(one, {three[0]}) == 30);
  CHECK_THROWS_AS(GuesserScoreFromEmbeddings(gh, Mat<float>(2, 0)), ArgumentError);
}

TEST_CASE("guesser score: valid, permutation equivariant, scale invariant argmax") {
  Fixture f;
  const GuesserModel g = GuesserModel::Random(f.gdims, 10);
  const GameRecord& game = f.world.games[2];
  const Vec<float> gh = GuesserEncode(g, HistoryTokens(game.qas, f.vocab)).h.col(0);
  const Vec<float> p = GuesserScore(g, gh, game.objects, game.image);
  CHECK(std::abs(p.sum() - 1.0f) < 1e-6f);
  std::vector<int> perm(game.objects.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::vector<ObjectInfo> shuffled;
  for (int k : perm) shuffled.push_back(game.objects[k]);
  const Vec<float> q = GuesserScore(g, gh, shuffled, game.image);
  for (size_t k = 0; k < perm.size(); ++k) CHECK(q(k) == doctest::Approx(p(perm[k])).epsilon(1e-6));
  CHECK(GuesserPick(g, gh, shuffled, game.image) == GuesserPick(g, gh, game.objects, game.image));
  for (float c : {0.5f, 3.0f, 17.0f}) {
    CHECK(GuesserPick(g, Vec<float>(gh * c), game.objects, game.image) ==
          GuesserPick(g, gh, game.objects, game.image));
  }
  CHECK_THROWS_AS(GuesserScore(g, gh, {}, game.image), ArgumentError);
}

TEST_CASE("qgen generate: eos fallback, greedy determinism, seeded sampling") {
  Fixture f;
  QGenModel m = QGenModel::Random(f.qdims, 11);
  const std::vector<float>& feats = f.world.features.Lookup(1);
  const Vec<float> proj = QGenProjection(m, feats);
  const LstmState s = QGenEncode(m, {}, feats);
  DecodeConfig cfg;
  cfg.fallback_id = f.vocab.Id("?");

  const Generated a = QGenGenerate(m, proj, s, cfg, nullptr);
  const Generated b = QGenGenerate(m, proj, s, cfg, nullptr);
  CHECK(a.tokens == b.tokens);
  CHECK(static_cast<int>(a.tokens.size()) <= cfg.max_len);
  CHECK(a.state.h == QGenAdvance(m, proj, s, a.tokens).h);
  for (int id : a.tokens) {
    CHECK(id != kPadId);
    CHECK(id != kSosId);
    CHECK(id != kEosId);
    CHECK((id < kYesId || id > kNaId));
  }

  cfg.mode = DecodeMode::kSample;
  cfg.temperature = 2.0;
  Rng r1(5), r2(5);
  CHECK(QGenGenerate(m, proj, s, cfg, &r1).tokens == QGenGenerate(m, proj, s, cfg, &r2).tokens);
  bool differs = false;
  for (uint64_t seed = 1; seed < 20 && !differs; ++seed) {
    Rng ra(seed), rb(seed + 100);
    differs = QGenGenerate(m, proj, s, cfg, &ra).tokens != QGenGenerate(m, proj, s, cfg, &rb).tokens;
  }
  CHECK(differs);
  CHECK_THROWS_AS(QGenGenerate(m, proj, s, cfg, nullptr), ArgumentError);

  // Output layer rigged to always prefer eos.
  m.out.w.setZero();
  m.out.b.setZero();
  m.out.b(kEosId, 0) = 10.0f;
  cfg.mode = DecodeMode::kGreedy;
  const Generated e = QGenGenerate(m, proj, s, cfg, nullptr);
  CHECK(e.tokens == std::vector<int>{f.vocab.Id("?")});
  CHECK(f.vocab.Decode(e.tokens) == "?");

  // Rigged to never stop: the length cap ends decoding.
  m.out.b.setZero();
  m.out.b(kNumReserved, 0) = 10.0f;
  CHECK(static_cast<int>(QGenGenerate(m, proj, s, cfg, nullptr).tokens.size()) == cfg.max_len);
}

TEST_CASE("qgen and guesser pass the gradient check") {
  Fixture f;
  QGenModelT<double> q = QGenModelT<double>::Random(f.qdims, 12);
  GuesserModelT<double> g = GuesserModelT<double>::Random(f.gdims, 13);
  std::vector<QGenExample> qex;
  std::vector<GuesserExample> gex;
  for (int i = 0; i < 3; ++i) {
    const GameRecord& game = f.world.games[i];
    std::vector<std::vector<int>> qs;
    std::vector<Answer> as;
    for (const QaPair& qa : game.qas) {
      qs.push_back(f.vocab.Encode(qa.question));
      as.push_back(qa.answer);
    }
    qex.push_back(MakeQGenExample(qs, as, &f.world.features.Lookup(game.image.id)));
    gex.push_back(MakeGuesserExample(game, f.vocab));
  }
  std::vector<const QGenExample*> qb;
  for (const auto& e : qex) qb.push_back(&e);
  std::vector<const GuesserExample*> gb;
  for (const auto& e : gex) gb.push_back(&e);
  std::function<double(QGenModelT<double>&, QGenModelT<double>*)> qf =
      [&](QGenModelT<double>& p, QGenModelT<double>* gr) {
        const BatchLoss b = QGenBatchLoss(p, gr, qb);
        return b.sum / b.count;
      };
  std::function<double(GuesserModelT<double>&, GuesserModelT<double>*)> gf =
      [&](GuesserModelT<double>& p, GuesserModelT<double>* gr) {
        const BatchLoss b = GuesserBatchLoss(p, gr, gb);
        return b.sum / b.count;
      };
  CHECK(GradCheck(q, qf).max_rel_error < 1e-4);
  CHECK(GradCheck(g, gf).max_rel_error < 1e-4);
}

TEST_CASE("batched and single-example losses agree") {
  Fixture f;
  const GuesserModel g = GuesserModel::Random(f.gdims, 14);
  std::vector<GuesserExample> ex;
  for (int i = 0; i < 4; ++i) ex.push_back(MakeGuesserExample(f.world.games[i], f.vocab));
  std::vector<const GuesserExample*> all;
  double single = 0;
  for (const auto& e : ex) {
    all.push_back(&e);
    single += GuesserBatchLoss<float>(g, nullptr, {&e}).sum;
  }
  CHECK(GuesserBatchLoss<float>(g, nullptr, all).sum == doctest::Approx(single).epsilon(1e-5));
  // Single-example loss equals -log of the inference-path probability.
  const GameRecord& game = f.world.games[0];
  const Vec<float> gh = GuesserEncode(g, HistoryTokens(game.qas, f.vocab)).h.col(0);
  const Vec<float> p = GuesserScore(g, gh, game.objects, game.image);
  CHECK(GuesserBatchLoss<float>(g, nullptr, {&ex[0]}).sum ==
        doctest::Approx(-std::log(p(game.target_index()))).epsilon(1e-5));
}

TEST_CASE("decision module forward and decide") {
  DmDims d{3, 2, 4};
  DmModel z = DmModel::Zeros(d);
  Vec<float> h = Vec<float>::Constant(2, 0.3f);
  const Vec<float> p = DmForward(z, {1, 2, 3}, h);
  CHECK(p(0) == 0.5f);
  CHECK(p(1) == 0.5f);
  CHECK(DmDecide(p(0), p(1)) == Decision::kAsk);
  CHECK(DmDecide(0.4f, 0.6f) == Decision::kGuess);
  CHECK(DmDecide(1.0f, 0.0f) == Decision::kAsk);

  // Output bias rigged to logits (2, 0).
  z.mlp.layers.back().b(0, 0) = 2.0f;
  const Vec<float> q = DmForward(z, {1, 2, 3}, h);
  const double ref = 1.0 / (1.0 + std::exp(-2.0));
  CHECK(q(0) == doctest::Approx(ref).epsilon(1e-6));
  CHECK(q(0) == doctest::Approx(0.8808).epsilon(1e-4));
  CHECK(q(1) == doctest::Approx(0.1192).epsilon(1e-3));
  CHECK(DmForward(z, {1, 2, 3}, h) == q);
  CHECK_THROWS_AS(DmForward(z, {1, 2, 3}, Vec<float>::Zero(5)), DimensionError);

  // Adding a constant to both logits leaves the decision unchanged.
  Rng rng(3);
  DmModel m = DmModel::Random(d, 4);
  for (int i = 0; i < 100; ++i) {
    std::vector<float> x = {float(rng.Uniform(-2, 2)), float(rng.Uniform(-2, 2)),
                            float(rng.Uniform(-2, 2))};
    Vec<float> hh(2);
    hh << float(rng.Uniform(-1, 1)), float(rng.Uniform(-1, 1));
    const Vec<float> a = DmForward(m, x, hh);
    DmModel shifted = m;
    shifted.mlp.layers.back().b.array() += float(rng.Uniform(-50, 50));
    const Vec<float> b = DmForward(shifted, x, hh);
    if (std::abs(a(0) - a(1)) > 1e-4f) CHECK(DmDecide(a(0), a(1)) == DmDecide(b(0), b(1)));
  }
}

TEST_CASE("decision module passes the gradient check") {
  DmModelT<double> m = DmModelT<double>::Random(DmDims{4, 3, 5}, 9);
  Rng rng(2);
  std::vector<DmExample> ex;
  for (int i = 0; i < 6; ++i) {
    DmExample e;
    for (int k = 0; k < 7; ++k) e.input.push_back(float(rng.Uniform(-1, 1)));
    e.label = i % 2;
    e.weight = i % 3 == 0 ? 2.0f : 1.0f;
    ex.push_back(e);
  }
  std::vector<const DmExample*> b;
  for (const auto& e : ex) b.push_back(&e);
  std::function<double(DmModelT<double>&, DmModelT<double>*)> fn =
      [&](DmModelT<double>& p, DmModelT<double>* g) {
        const BatchLoss l = DmBatchLoss(p, g, b);
        return l.sum / l.count;
      };
  CHECK(GradCheck(m, fn).max_rel_error < 1e-4);
}

TEST_CASE("gt labels") {
  GameRecord g;
  g.qas = {{"a", Answer::kYes}, {"b", Answer::kNo}, {"c", Answer::kYes}};
  CHECK(MakeGtLabels(g) == LabelSeq{Decision::kAsk, Decision::kAsk, Decision::kGuess});
  g.qas.resize(1);
  CHECK(MakeGtLabels(g) == LabelSeq{Decision::kGuess});
  g.status = GameStatus::kIncomplete;
  CHECK_FALSE(LabelEligible(g));
  g.status = GameStatus::kFailure;
  CHECK(LabelEligible(g));
  g.qas.clear();
  CHECK_FALSE(LabelEligible(g));
}

TEST_CASE("guess labels with rigged guessers") {
  Fixture f;
  const GameRecord& g = f.world.games[0];
  const LabelSeq perfect = MakeGuessLabelsWith(g, [&](int) { return g.target_id; });
  CHECK(std::all_of(perfect.begin(), perfect.end(), [](Decision d) { return d == Decision::kGuess; }));
  const LabelSeq never = MakeGuessLabelsWith(g, [&](int) { return int64_t{-1}; });
  CHECK(std::all_of(never.begin(), never.end(), [](Decision d) { return d == Decision::kAsk; }));
  GameRecord four = g;
  four.qas.resize(4, {"x", Answer::kNo});
  const LabelSeq late =
      MakeGuessLabelsWith(four, [&](int t) { return t >= 2 ? four.target_id : int64_t{-1}; });
  CHECK(late == LabelSeq{Decision::kAsk, Decision::kGuess, Decision::kGuess, Decision::kGuess});
}

TEST_CASE("label sets: one gt guess per game, guess labels reproducible") {
  Fixture f;
  const GuesserModel guesser = GuesserModel::Random(f.gdims, 15);
  const QGenModel qgen = QGenModel::Random(f.qdims, 16);
  std::vector<GameRecord> games = f.world.games;
  games[0].status = GameStatus::kIncomplete;
  games[1].qas.clear();
  DmSources src{&qgen, &guesser, &f.world.features, &f.vocab};
  std::vector<LabelRow> rows;
  int64_t skipped = 0;
  const auto ex = BuildDmExamples(games, DmVariant::kDm1, LabelScheme::kGt, src, &rows, &skipped);
  CHECK(skipped == 2);
  const auto guesses = std::count_if(rows.begin(), rows.end(),
                                     [](const LabelRow& r) { return r.label == Decision::kGuess; });
  CHECK(guesses == static_cast<long>(games.size()) - 2);
  CHECK(ex.size() == rows.size());
  CHECK(static_cast<int>(ex[0].input.size()) == 32 + qgen.lstm.hidden());

  std::vector<LabelRow> r1, r2;
  const auto e1 = BuildDmExamples(games, DmVariant::kDm2, LabelScheme::kGuess, src, &r1);
  const auto e2 = BuildDmExamples(games, DmVariant::kDm2, LabelScheme::kGuess, src, &r2);
  CHECK(LabelsCsv(r1) == LabelsCsv(r2));
  for (size_t i = 0; i < e1.size(); ++i) CHECK(e1[i].input == e2[i].input);
  // Same labels as the standalone per-game computation.
  size_t k = 0;
  for (const GameRecord& g : games) {
    if (!LabelEligible(g)) continue;
    for (Decision d : MakeGuessLabels(g, guesser, f.vocab)) CHECK(r1[k++].label == d);
  }
  CHECK(k == r1.size());
  CHECK_THROWS_AS(BuildDmExamples(games, DmVariant::kDm1, LabelScheme::kGuess, src), ConfigError);
  CHECK(LabelsCsv({{3, 1, Decision::kGuess}}) == "game_id,t,label\n3,1,guess\n");
}

TEST_CASE("decision training: separable data, chance on noise, single class refused") {
  Rng rng(21);
  auto make = [&](int n, bool noise) {
    std::vector<DmExample> out;
    for (int i = 0; i < n; ++i) {
      DmExample e;
      const float a = float(rng.Uniform(-1, 1)), b = float(rng.Uniform(-1, 1));
      e.input = {a, b};
      e.label = noise ? static_cast<int>(rng.Below(2)) : (a + 0.5f * b > 0.1f ? 1 : 0);
      out.push_back(e);
    }
    return out;
  };
  LoopConfig cfg;
  cfg.max_epochs = 200;
  cfg.patience = 200;
  cfg.adam.lr = 0.01;
  cfg.seed = 3;
  const DmModel init = DmModel::Random(DmDims{1, 1, 16}, 5);
  std::vector<DmExample> train = make(400, false);
  const auto fit = DmTrain(init, train, make(100, false), ClassWeighting::kUniform, cfg);
  int correct = 0;
  for (const DmExample& e : train) {
    Vec<float> h(1);
    h << e.input[1];
    const Vec<float> p = DmForward(fit.best, {e.input[0]}, h);
    correct += static_cast<int>(DmDecide(p(0), p(1))) == e.label;
  }
  CHECK(correct >= 396);

  cfg.max_epochs = 30;
  cfg.patience = 5;
  const std::vector<DmExample> noisy_val = make(2000, true);
  const auto noisy = DmTrain(init, make(400, true), noisy_val, ClassWeighting::kInverseFrequency, cfg);
  int hits = 0;
  for (const DmExample& e : noisy_val) {
    Vec<float> h(1);
    h << e.input[1];
    const Vec<float> p = DmForward(noisy.best, {e.input[0]}, h);
    hits += static_cast<int>(DmDecide(p(0), p(1))) == e.label;
  }
  CHECK(std::abs(hits / 2000.0 - 0.5) <= 0.05);

  std::vector<DmExample> one = make(10, false);
  for (auto& e : one) e.label = 0;
  CHECK_THROWS_AS(DmTrain(init, one, one, ClassWeighting::kUniform, cfg), ArgumentError);
}

TEST_CASE("inverse frequency class weights") {
  std::vector<DmExample> ex(5);
  ex[0].label = 1;
  ApplyClassWeights(&ex, ClassWeighting::kInverseFrequency);
  CHECK(ex[0].weight == doctest::Approx(5.0 / 2));
  CHECK(ex[1].weight == doctest::Approx(5.0 / 8));
  ApplyClassWeights(&ex, ClassWeighting::kUniform);
  CHECK(ex[0].weight == 1.0f);
}

}  // namespace
}  // namespace gwdm
