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

#include "gwdm/analysis/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "gwdm/core/errors.h"
#include "gwdm/data/line_reader.h"
#include "gwdm/data/vocab.h"

namespace gwdm {
namespace {

using boost::multiprecision::cpp_int;

constexpr const char* kCategories[] = {
    "person",       "bicycle",      "car",           "motorcycle",    "airplane",
    "bus",          "train",        "truck",         "boat",          "traffic light",
    "fire hydrant", "stop sign",    "parking meter", "bench",         "bird",
    "cat",          "dog",          "horse",         "sheep",         "cow",
    "elephant",     "bear",         "zebra",         "giraffe",       "backpack",
    "umbrella",     "handbag",      "tie",           "suitcase",      "frisbee",
    "skis",         "snowboard",    "sports ball",   "kite",          "baseball bat",
    "baseball glove", "skateboard", "surfboard",     "tennis racket", "bottle",
    "wine glass",   "cup",          "fork",          "knife",         "spoon",
    "bowl",         "banana",       "apple",         "sandwich",      "orange",
    "broccoli",     "carrot",       "hot dog",       "pizza",         "donut",
    "cake",         "chair",        "couch",         "potted plant",  "bed",
    "dining table", "toilet",       "tv",            "laptop",        "mouse",
    "remote",       "keyboard",     "cell phone",    "microwave",     "oven",
    "toaster",      "sink",         "refrigerator",  "book",          "clock",
    "vase",         "scissors",     "teddy bear",    "hair drier",    "toothbrush"};

constexpr const char* kSuperCategories[] = {"person",    "vehicle",   "outdoor",    "animal",
                                            "accessory", "sports",    "kitchen",    "food",
                                            "furniture", "electronic", "appliance", "indoor"};

constexpr const char* kManual[] = {"man",   "woman",    "girl",     "boy",   "table",   "meter",
                                   "bear",  "cell",     "phone",    "wine",  "glass",   "racket",
                                   "baseball", "glove", "hydrant",  "drier", "kite"};

std::vector<std::string> Split(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

double Sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double LogLikelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = X * beta;
  double ll = 0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double e = eta(i);
    ll += y(i) * e - (std::max(e, 0.0) + std::log1p(std::exp(-std::abs(e))));
  }
  return ll;
}

std::string FormatOrNa(double v) { return std::isfinite(v) ? Format4(v) : "NA"; }

std::string Csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Rational Percent(int64_t num, int64_t den) {
  if (den == 0) return Rational(0);
  return Rational(cpp_int(100) * num, cpp_int(den));
}

double ToDouble(const Rational& r) { return r.convert_to<double>(); }

std::string Format4(const Rational& r) {
  const Rational scaled = r * 10000;
  cpp_int num = boost::multiprecision::numerator(scaled);
  const cpp_int den = boost::multiprecision::denominator(scaled);
  const bool negative = num < 0;
  if (negative) num = -num;
  cpp_int q = num / den;
  if ((num % den) * 2 >= den) q += 1;
  std::string digits = q.str();
  while (digits.size() < 5) digits.insert(digits.begin(), '0');
  std::string out = digits.substr(0, digits.size() - 4) + "." + digits.substr(digits.size() - 4);
  if (negative && q != 0) out.insert(out.begin(), '-');
  return out;
}

std::string Format4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

std::string ScopeName(RepetitionScope s) {
  return s == RepetitionScope::kOverall ? "overall" : "objects";
}

const std::vector<std::string>& ObjectKeywords() {
  static const std::vector<std::string> words = [] {
    std::set<std::string> seen;
    std::vector<std::string> out;
    auto add = [&](const char* w) {
      if (seen.insert(w).second) out.push_back(w);
    };
    for (const char* w : kCategories) add(w);
    for (const char* w : kSuperCategories) add(w);
    for (const char* w : kManual) add(w);
    return out;
  }();
  return words;
}

bool MentionsObject(const std::string& question, const std::vector<std::string>& keywords) {
  const std::vector<std::string> tokens = Tokenize(question);
  for (const std::string& k : keywords) {
    const std::vector<std::string> phrase = Split(k);
    if (phrase.empty() || phrase.size() > tokens.size()) continue;
    for (size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
      if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + i)) return true;
    }
  }
  return false;
}

std::vector<int> RepeatedPositions(const std::vector<std::string>& questions) {
  std::set<std::string> seen;
  std::vector<int> out;
  for (size_t i = 0; i < questions.size(); ++i) {
    if (!seen.insert(NormalizeQuestion(questions[i])).second) out.push_back(static_cast<int>(i));
  }
  return out;
}

RepetitionStats ComputeRepetition(const std::vector<GameResult>& results, RepetitionScope scope,
                                  const std::vector<std::string>& keywords) {
  RepetitionStats s;
  s.scope = scope;
  s.n_games = static_cast<int64_t>(results.size());
  Rational within_sum = 0;
  for (const GameResult& r : results) {
    std::vector<std::string> questions;
    for (const Turn& t : r.transcript) questions.push_back(t.question);
    int64_t counted = 0;
    for (int pos : RepeatedPositions(questions)) {
      if (scope == RepetitionScope::kOverall || MentionsObject(questions[pos], keywords)) {
        ++counted;
      }
    }
    if (counted > 0) ++s.games_with_repeat;
    if (!questions.empty()) {
      within_sum += Rational(cpp_int(counted), cpp_int(static_cast<int64_t>(questions.size())));
    }
  }
  s.across_games_pct = Percent(s.games_with_repeat, s.n_games);
  s.within_game_pct =
      s.n_games == 0 ? Rational(0) : within_sum * 100 / Rational(cpp_int(s.n_games));
  return s;
}

ChangeTable ComputeChangeTable(const std::vector<GameResult>& dm,
                               const std::vector<GameResult>& baseline) {
  std::map<int64_t, const GameResult*> base;
  for (const GameResult& r : baseline) base[r.game_id] = &r;
  std::set<int64_t> dm_ids;
  for (const GameResult& r : dm) dm_ids.insert(r.game_id);
  std::vector<int64_t> only_dm, only_base;
  for (int64_t id : dm_ids) {
    if (!base.count(id)) only_dm.push_back(id);
  }
  for (const auto& [id, r] : base) {
    if (!dm_ids.count(id)) only_base.push_back(id);
  }
  if (!only_dm.empty() || !only_base.empty() || dm_ids.size() != dm.size() ||
      base.size() != baseline.size()) {
    std::string msg = "result sets cover different games;";
    auto list = [&](const char* label, const std::vector<int64_t>& ids) {
      msg += std::string(" ") + label + ":";
      for (size_t i = 0; i < ids.size() && i < 20; ++i) msg += " " + std::to_string(ids[i]);
      if (ids.size() > 20) msg += " ... (" + std::to_string(ids.size()) + " total)";
    };
    list("only in dm", only_dm);
    list("only in baseline", only_base);
    if (dm_ids.size() != dm.size() || base.size() != baseline.size()) {
      msg += "; duplicate game ids present";
    }
    throw ArgumentError(msg);
  }

  ChangeTable t;
  for (const GameResult& d : dm) {
    const GameResult& b = *base.at(d.game_id);
    for (ChangeBlock* block : {&t.all, &t.decided}) {
      if (block == &t.decided && !d.decided) continue;
      ++block->denominator;
      ChangeCounts& c = d.n_questions < b.n_questions   ? block->fewer
                        : d.n_questions > b.n_questions ? block->more
                                                        : block->equal;
      if (d.success && !b.success) {
        ++c.plus;
      } else if (!d.success && b.success) {
        ++c.minus;
      } else {
        ++c.none;
      }
    }
  }
  return t;
}

RegressionFit LogisticFit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const std::vector<std::string>& names, const LogisticOptions& options) {
  const Eigen::Index n = X.rows(), k = X.cols();
  if (y.size() != n) throw DimensionError("outcome length does not match predictor rows");
  if (static_cast<Eigen::Index>(names.size()) != k) {
    throw DimensionError("one name per predictor column required");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) throw ArgumentError("outcomes must be 0 or 1");
  }
  RegressionFit fit;
  fit.names = names;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  fit.coef = Eigen::VectorXd::Constant(k, nan);
  fit.std_error = fit.z = fit.p_value = fit.coef;
  if (n < k) throw RankError("fewer observations than predictors");
  const double ones = y.sum();
  if (ones == 0 || ones == static_cast<double>(n)) {
    fit.separation = true;
    fit.warning = "constant outcome; no fit";
    return fit;
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
  double ll = LogLikelihood(X, y, beta);
  fit.ll_trace.push_back(ll);
  Eigen::MatrixXd info;
  auto information = [&](const Eigen::VectorXd& b, Eigen::VectorXd* mu_out) {
    Eigen::VectorXd eta = X * b;
    Eigen::VectorXd mu(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      mu(i) = Sigmoid(eta(i));
      w(i) = mu(i) * (1 - mu(i));
    }
    if (mu_out) *mu_out = mu;
    return Eigen::MatrixXd(X.transpose() * w.asDiagonal() * X);
  };

  for (int it = 1; it <= options.max_iter; ++it) {
    Eigen::VectorXd mu;
    info = information(beta, &mu);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
    if (lu.rank() < k) throw RankError("singular weighted normal equations");
    const Eigen::VectorXd step = lu.solve(X.transpose() * (y - mu));
    double scale = 1.0;
    Eigen::VectorXd next = beta + step;
    double ll_next = LogLikelihood(X, y, next);
    int halvings = 0;
    while (!(ll_next >= ll) && halvings < 40) {
      scale *= 0.5;
      next = beta + scale * step;
      ll_next = LogLikelihood(X, y, next);
      ++halvings;
    }
    if (!(ll_next >= ll)) {
      fit.iterations = it;
      fit.warning = "step halving failed to increase the log-likelihood";
      break;
    }
    const double change = (next - beta).cwiseAbs().maxCoeff();
    beta = next;
    ll = ll_next;
    fit.ll_trace.push_back(ll);
    fit.iterations = it;
    const double max_eta = (X * beta).cwiseAbs().maxCoeff();
    if (beta.cwiseAbs().maxCoeff() > options.separation_bound || max_eta > 36) {
      fit.separation = true;
      fit.warning = "separation detected: coefficients diverge";
      break;
    }
    if (change < options.tol) {
      fit.converged = true;
      break;
    }
  }
  if (!fit.converged && fit.warning.empty()) {
    fit.warning = "no convergence within " + std::to_string(options.max_iter) + " iterations";
  }
  fit.log_likelihood = ll;
  fit.coef = beta;
  info = information(beta, nullptr);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
  if (lu.rank() < k) {
    if (!fit.separation) throw RankError("singular information matrix at the optimum");
    return fit;
  }
  const Eigen::MatrixXd cov = lu.inverse();
  for (Eigen::Index j = 0; j < k; ++j) {
    fit.std_error(j) = std::sqrt(cov(j, j));
    fit.z(j) = beta(j) / fit.std_error(j);
    fit.p_value(j) = std::erfc(std::abs(fit.z(j)) / std::sqrt(2.0));
  }
  return fit;
}

const std::vector<std::string>& ComplexityPredictors() {
  static const std::vector<std::string> names = {"intercept", "n_objects", "n_same_category",
                                                 "target_area"};
  return names;
}

std::vector<RegressionRow> ComplexityRegressions(const std::vector<GameRecord>& games,
                                                 const std::vector<SystemResults>& systems) {
  std::map<int64_t, ComplexityMeasures> measures;
  for (const GameRecord& g : games) measures[g.game_id] = ComputeComplexity(g);
  auto fit_rows = [&](const std::string& analysis, const std::string& system,
                      const std::vector<const GameResult*>& rows, bool outcome_decided) {
    RegressionRow row;
    row.analysis = analysis;
    row.system = system;
    row.n = static_cast<int64_t>(rows.size());
    Eigen::MatrixXd X(rows.size(), 4);
    Eigen::VectorXd y(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      auto it = measures.find(rows[i]->game_id);
      if (it == measures.end()) {
        throw ArgumentError("no game record for result " + std::to_string(rows[i]->game_id));
      }
      X(i, 0) = 1;
      X(i, 1) = it->second.n_objects;
      X(i, 2) = it->second.n_same_category;
      X(i, 3) = it->second.target_area_ratio;
      y(i) = outcome_decided ? rows[i]->decided : rows[i]->success;
    }
    try {
      row.fit = LogisticFit(X, y, ComplexityPredictors());
      row.fitted = row.fit.coef.allFinite();
    } catch (const RankError& e) {
      row.fit.names = ComplexityPredictors();
      row.fit.warning = std::string("rank deficient: ") + e.what();
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.fit.coef = row.fit.std_error = row.fit.z = row.fit.p_value =
          Eigen::VectorXd::Constant(4, nan);
    }
    return row;
  };

  std::vector<RegressionRow> out;
  for (const SystemResults& s : systems) {
    std::vector<const GameResult*> all;
    for (const GameResult& r : s.results) all.push_back(&r);
    out.push_back(fit_rows("success_all", s.name, all, false));
  }
  for (const SystemResults& s : systems) {
    if (s.results.empty() || s.results.front().mode == "baseline") continue;
    std::vector<const GameResult*> decided;
    for (const GameResult& r : s.results) {
      if (r.decided) decided.push_back(&r);
    }
    out.push_back(fit_rows("success_decided", s.name, decided, false));
  }
  for (const SystemResults& s : systems) {
    if (s.results.empty() || s.results.front().mode == "baseline") continue;
    std::vector<const GameResult*> all;
    for (const GameResult& r : s.results) all.push_back(&r);
    out.push_back(fit_rows("decided_all", s.name, all, true));
  }
  return out;
}

DecidedStats ComputeDecided(const std::vector<GameResult>& results) {
  DecidedStats s;
  for (const GameResult& r : results) {
    if (r.mode == "baseline") {
      throw ArgumentError("decided statistics need gated results; baseline games are always "
                          "decided");
    }
    ++s.n_games;
    s.n_decided += r.decided;
  }
  s.pct = Percent(s.n_decided, s.n_games);
  return s;
}

AnalysisReport RunAnalysis(const AnalysisInputs& in) {
  AnalysisReport r;
  r.sweep_csv = in.sweep_csv;
  auto note_empty = [&](const SystemResults& s) {
    if (s.results.empty()) r.warnings.push_back("no games in " + s.name);
  };

  std::vector<const SystemResults*> repetition_systems = {&in.baseline_max};
  for (const SystemResults& s : in.dm_systems) repetition_systems.push_back(&s);
  for (const SystemResults* s : repetition_systems) {
    note_empty(*s);
    r.repetition.emplace_back(s->name, ComputeRepetition(s->results, RepetitionScope::kOverall));
    r.repetition.emplace_back(s->name,
                              ComputeRepetition(s->results, RepetitionScope::kObjectsOnly));
  }
  note_empty(in.baseline_fixed);
  for (const SystemResults& s : in.dm_systems) {
    r.change.emplace_back(s.name, ComputeChangeTable(s.results, in.baseline_fixed.results));
    r.decided.emplace_back(s.name, ComputeDecided(s.results));
  }
  std::vector<SystemResults> reg_systems = {in.baseline_fixed};
  for (const SystemResults& s : in.dm_systems) reg_systems.push_back(s);
  r.regressions = ComplexityRegressions(in.games, reg_systems);
  for (const RegressionRow& row : r.regressions) {
    if (!row.fit.warning.empty()) {
      r.warnings.push_back(row.analysis + " " + row.system + ": " + row.fit.warning);
    }
  }
  return r;
}

std::string RepetitionCsv(const AnalysisReport& r) {
  std::string out = "system,scope,n_games,games_with_repeat,across_games_pct,within_game_pct\n";
  for (const auto& [name, s] : r.repetition) {
    out += Csv(name) + "," + ScopeName(s.scope) + "," + std::to_string(s.n_games) + "," +
           std::to_string(s.games_with_repeat) + "," + Format4(s.across_games_pct) + "," +
           Format4(s.within_game_pct) + "\n";
  }
  return out;
}

std::string ChangeTableCsv(const AnalysisReport& r) {
  std::string out =
      "system,subset,direction,plus_pct,minus_pct,no_change_pct,total_pct,plus,minus,no_change,"
      "denominator\n";
  for (const auto& [name, t] : r.change) {
    for (const auto& [subset, block] :
         {std::pair<const char*, const ChangeBlock*>{"all", &t.all}, {"decided", &t.decided}}) {
      for (const auto& [dir, c] : {std::pair<const char*, const ChangeCounts*>{"fewer", &block->fewer},
                                   {"equal", &block->equal},
                                   {"more", &block->more}}) {
        const int64_t d = block->denominator;
        out += Csv(name) + "," + subset + "," + dir + "," + Format4(Percent(c->plus, d)) + "," +
               Format4(Percent(c->minus, d)) + "," + Format4(Percent(c->none, d)) + "," +
               Format4(Percent(c->total(), d)) + "," + std::to_string(c->plus) + "," +
               std::to_string(c->minus) + "," + std::to_string(c->none) + "," +
               std::to_string(d) + "\n";
      }
    }
  }
  return out;
}

std::string RegressionsCsv(const AnalysisReport& r) {
  std::string out =
      "analysis,system,n,predictor,coefficient,std_error,z,p_value,sign,significant,converged,"
      "iterations,warning\n";
  for (const RegressionRow& row : r.regressions) {
    const RegressionFit& f = row.fit;
    for (size_t j = 0; j < f.names.size(); ++j) {
      const double c = f.coef.size() > 0 ? f.coef(j) : std::nan("");
      const double p = f.p_value.size() > 0 ? f.p_value(j) : std::nan("");
      const std::string sign = !std::isfinite(c) ? "NA" : (c > 0 ? "+" : (c < 0 ? "-" : "0"));
      const std::string sig = !std::isfinite(p) ? "NA" : (p < 0.05 ? "1" : "0");
      out += row.analysis + "," + Csv(row.system) + "," + std::to_string(row.n) + "," +
             f.names[j] + "," + FormatOrNa(c) + "," +
             FormatOrNa(f.std_error.size() > 0 ? f.std_error(j) : std::nan("")) + "," +
             FormatOrNa(f.z.size() > 0 ? f.z(j) : std::nan("")) + "," + FormatOrNa(p) + "," +
             sign + "," + sig + "," + (f.converged ? "1" : "0") + "," +
             std::to_string(f.iterations) + "," + Csv(f.warning) + "\n";
    }
  }
  return out;
}

std::string DecidedCsv(const AnalysisReport& r) {
  std::string out = "system,n_games,n_decided,pct_decided\n";
  for (const auto& [name, s] : r.decided) {
    out += Csv(name) + "," + std::to_string(s.n_games) + "," + std::to_string(s.n_decided) + "," +
           Format4(s.pct) + "\n";
  }
  return out;
}

std::string SummaryText(const AnalysisReport& r) {
  std::ostringstream out;
  out << "Self-play sweep (accuracy %, mean questions, % decided)\n";
  if (r.sweep_csv.empty()) {
    out << "  (no sweep supplied)\n";
  } else {
    std::istringstream in(r.sweep_csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) out << "  " << line << "\n";
  }
  out << "\nRepeated questions (% games with a repeat / mean % repeated per game)\n";
  for (const auto& [name, s] : r.repetition) {
    out << "  " << name << " [" << ScopeName(s.scope) << "]: " << Format4(s.across_games_pct)
        << " / " << Format4(s.within_game_pct) << "  (n=" << s.n_games << ")\n";
  }
  out << "\nFewer / more questions than the fixed baseline (+ change / - change / no change "
         "/ total, % of games)\n";
  for (const auto& [name, t] : r.change) {
    for (const auto& [subset, block] :
         {std::pair<const char*, const ChangeBlock*>{"all", &t.all}, {"decided", &t.decided}}) {
      for (const auto& [dir, c] : {std::pair<const char*, const ChangeCounts*>{"fewer", &block->fewer},
                                   {"more", &block->more}}) {
        const int64_t d = block->denominator;
        out << "  " << name << " " << subset << " " << dir << ": " << Format4(Percent(c->plus, d))
            << " / " << Format4(Percent(c->minus, d)) << " / " << Format4(Percent(c->none, d))
            << " / " << Format4(Percent(c->total(), d)) << "\n";
      }
    }
  }
  out << "\nDecided games\n";
  for (const auto& [name, s] : r.decided) {
    out << "  " << name << ": " << Format4(s.pct) << "% (" << s.n_decided << " of " << s.n_games
        << ")\n";
  }
  out << "\nComplexity regressions (coefficient, p-value)\n";
  for (const RegressionRow& row : r.regressions) {
    out << "  " << row.analysis << " " << row.system << " (n=" << row.n << "):";
    for (size_t j = 0; j < row.fit.names.size(); ++j) {
      out << " " << row.fit.names[j] << "=" << FormatOrNa(row.fit.coef(j)) << " (p "
          << FormatOrNa(row.fit.p_value(j)) << ")";
    }
    out << "\n";
  }
  for (const std::string& w : r.warnings) out << "warning: " << w << "\n";
  return out.str();
}

void EmitReport(const AnalysisReport& r, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  WriteFile(out_dir + "/repetition.csv", RepetitionCsv(r));
  WriteFile(out_dir + "/change_table.csv", ChangeTableCsv(r));
  WriteFile(out_dir + "/regressions.csv", RegressionsCsv(r));
  WriteFile(out_dir + "/decided.csv", DecidedCsv(r));
  WriteFile(out_dir + "/sweep.csv",
            r.sweep_csv.empty() ? "mode,maxq,accuracy,mean_questions,pct_decided\n" : r.sweep_csv);
  WriteFile(out_dir + "/summary.txt", SummaryText(r));
}

}  // namespace gwdm
