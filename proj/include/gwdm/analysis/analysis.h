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

#ifndef GWDM_ANALYSIS_ANALYSIS_H_
#define GWDM_ANALYSIS_ANALYSIS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "gwdm/data/game.h"
#include "gwdm/play/game_loop.h"

namespace gwdm {

using Rational = boost::multiprecision::cpp_rational;

// Exact percentage 100 * num / den; zero when den is zero.
Rational Percent(int64_t num, int64_t den);
double ToDouble(const Rational& r);
// Rounded to four decimals, e.g. "33.3333".
std::string Format4(const Rational& r);
std::string Format4(double v);

// ---------------------------------------------------------------------------
// Repeated questions.

enum class RepetitionScope { kOverall, kObjectsOnly };
std::string ScopeName(RepetitionScope s);  // "overall" / "objects"

// Whole-token object keywords: object categories, their super-categories and
// a manual list of frequent object words. Multi-word categories are kept as
// space-joined phrases.
const std::vector<std::string>& ObjectKeywords();

// True if the normalised question contains a keyword as a whole token or as
// a contiguous token phrase.
bool MentionsObject(const std::string& question,
                    const std::vector<std::string>& keywords = ObjectKeywords());

// Positions (0-based) of questions that repeat an earlier question of the same
// game after normalisation.
std::vector<int> RepeatedPositions(const std::vector<std::string>& questions);

struct RepetitionStats {
  RepetitionScope scope = RepetitionScope::kOverall;
  int64_t n_games = 0;
  int64_t games_with_repeat = 0;
  Rational across_games_pct;  // % of games with at least one counted repeat
  Rational within_game_pct;   // mean over games of counted repeats / questions
};

RepetitionStats ComputeRepetition(const std::vector<GameResult>& results, RepetitionScope scope,
                                  const std::vector<std::string>& keywords = ObjectKeywords());

// ---------------------------------------------------------------------------
// Fewer / more questions against a fixed baseline.

struct ChangeCounts {
  int64_t plus = 0;   // baseline failed, DM succeeded
  int64_t minus = 0;  // baseline succeeded, DM failed
  int64_t none = 0;
  int64_t total() const { return plus + minus + none; }
};

struct ChangeBlock {
  int64_t denominator = 0;
  ChangeCounts fewer, equal, more;
};

struct ChangeTable {
  ChangeBlock all;
  ChangeBlock decided;  // games the DM decided
};

// Throws ArgumentError listing the symmetric difference when the two result
// sets cover different games.
ChangeTable ComputeChangeTable(const std::vector<GameResult>& dm,
                               const std::vector<GameResult>& baseline);

// ---------------------------------------------------------------------------
// Logistic regression.

struct RegressionFit {
  std::vector<std::string> names;  // intercept first
  Eigen::VectorXd coef, std_error, z, p_value;
  bool converged = false;
  bool separation = false;
  int iterations = 0;
  double log_likelihood = 0;
  std::vector<double> ll_trace;  // after each accepted step, starting at beta = 0
  std::string warning;
};

struct LogisticOptions {
  int max_iter = 50;
  double tol = 1e-8;
  double separation_bound = 15;
};

// Newton (IRLS) iterations with step halving. X must contain the intercept
// column. Separation or a constant outcome yields converged = false with a
// warning; a singular information matrix raises RankError.
RegressionFit LogisticFit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const std::vector<std::string>& names,
                          const LogisticOptions& options = {});

// ---------------------------------------------------------------------------
// Complexity regressions and decided games.

const std::vector<std::string>& ComplexityPredictors();  // intercept + 3

struct RegressionRow {
  std::string analysis;  // "success_all", "success_decided", "decided_all"
  std::string system;
  int64_t n = 0;
  RegressionFit fit;
  bool fitted = false;
};

struct SystemResults {
  std::string name;
  std::vector<GameResult> results;
};

// (a) success on all games for every system, (b) success on decided games and
// (c) decided on all games for every gated system. Results must refer to
// games in `games`.
std::vector<RegressionRow> ComplexityRegressions(const std::vector<GameRecord>& games,
                                                 const std::vector<SystemResults>& systems);

struct DecidedStats {
  int64_t n_games = 0;
  int64_t n_decided = 0;
  Rational pct;
};

// Throws ArgumentError for baseline results.
DecidedStats ComputeDecided(const std::vector<GameResult>& results);

// ---------------------------------------------------------------------------
// Report.

struct AnalysisInputs {
  std::vector<GameRecord> games;
  SystemResults baseline_fixed;             // baseline at the comparison length
  SystemResults baseline_max;               // baseline at MaxQ
  std::vector<SystemResults> dm_systems;    // gated play at MaxQ
  std::string sweep_csv;                    // optional
};

struct AnalysisReport {
  std::vector<std::pair<std::string, RepetitionStats>> repetition;
  std::vector<std::pair<std::string, ChangeTable>> change;
  std::vector<RegressionRow> regressions;
  std::vector<std::pair<std::string, DecidedStats>> decided;
  std::string sweep_csv;
  std::vector<std::string> warnings;
};

AnalysisReport RunAnalysis(const AnalysisInputs& inputs);

std::string RepetitionCsv(const AnalysisReport& r);
std::string ChangeTableCsv(const AnalysisReport& r);
std::string RegressionsCsv(const AnalysisReport& r);
std::string DecidedCsv(const AnalysisReport& r);
std::string SummaryText(const AnalysisReport& r);

// Writes repetition.csv, change_table.csv, regressions.csv, decided.csv,
// sweep.csv and summary.txt. Throws IoError.
void EmitReport(const AnalysisReport& r, const std::string& out_dir);

}  // namespace gwdm

#endif  // GWDM_ANALYSIS_ANALYSIS_H_
