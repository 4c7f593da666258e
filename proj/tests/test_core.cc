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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "gwdm/core/adam.h"
#include "gwdm/core/errors.h"
#include "gwdm/core/grad_check.h"
#include "gwdm/core/graph.h"
#include "gwdm/core/layers.h"
#include "gwdm/core/ops.h"
#include "gwdm/core/random.h"
#include "gwdm/core/tensor.h"
#include "test_util.h"

namespace gwdm {
namespace {

Vec<double> V(std::initializer_list<double> xs) {
  Vec<double> v(xs.size());
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

TEST_CASE("mlp apply examples") {
  Mlp<double> id = Mlp<double>::Zeros({2, 2}, Activation::kIdentity);
  id.layers[0].w << 1, 0, 0, 1;
  const Vec<double> a = MlpApply(V({1, 2}), id);
  CHECK(a(0) == 1.0);
  CHECK(a(1) == 2.0);

  Dense<double> relu = Dense<double>::Zeros(2, 1, Activation::kRelu);
  relu.w << 1, 1;
  Mlp<double> r{{relu}};
  CHECK(MlpApply(V({1, -1}), r)(0) == 0.0);

  Dense<double> th = Dense<double>::Zeros(2, 2, Activation::kTanh);
  th.w << 2, 0, 0, 2;
  th.b << 0.1, 0.1;
  Mlp<double> t{{th}};
  const Vec<double> out = MlpApply(V({0.5, 0.5}), t);
  const double expect = std::tanh(1.1L);
  CHECK(out(0) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(out(0) == doctest::Approx(0.8005).epsilon(1e-4));
  CHECK(out(1) == out(0));
}

TEST_CASE("mlp dimension error names the layer") {
  Mlp<double> m = Mlp<double>::Zeros({3, 4, 2}, Activation::kRelu);
  try {
    MlpApply(V({1, 2}), m);
    FAIL("expected a dimension error");
  } catch (const DimensionError& e) {
    CHECK(std::string(e.what()).find("layer 0") != std::string::npos);
  }
}

TEST_CASE("lstm step examples") {
  Lstm<double> lstm = Lstm<double>::Zeros(3, 1);
  LstmStateT<double> s{Mat<double>::Zero(1, 1), Mat<double>::Zero(1, 1)};
  LstmStateT<double> next = LstmStep(V({0.3, -2, 7}), s, lstm);
  CHECK(next.h(0, 0) == 0.0);
  CHECK(next.c(0, 0) == 0.0);

  s.c(0, 0) = 1.0;
  next = LstmStep(V({0.3, -2, 7}), s, lstm);
  CHECK(next.c(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  const double h_ref = 0.5 * std::tanh(0.5L);
  CHECK(next.h(0, 0) == doctest::Approx(h_ref).epsilon(1e-12));
  CHECK(next.h(0, 0) == doctest::Approx(0.2311).epsilon(1e-4));
}

TEST_CASE("lstm init sets forget bias to one") {
  Lstm<float> lstm = Lstm<float>::Zeros(4, 3);
  Rng rng(3);
  lstm.Init(rng);
  for (int i = 0; i < 12; ++i) CHECK(lstm.b(i, 0) == ((i >= 3 && i < 6) ? 1.0f : 0.0f));
  const double a = std::sqrt(6.0 / (12 + 7));
  CHECK(lstm.w.cwiseAbs().maxCoeff() <= a);
}

TEST_CASE("embedding lookup and gradient") {
  Embedding<double> e{Mat<double>(3, 2)};
  e.table << 1, 2, 3, 4, 5, 6;
  const Vec<double> row = EmbeddingLookup(e, 1);
  CHECK(row(0) == 3.0);
  CHECK(row(1) == 4.0);
  CHECK(EmbeddingLookup(e, 0)(0) == 1.0);
  CHECK_THROWS_AS(EmbeddingLookup(e, 3), IndexError);
  CHECK_THROWS_AS(EmbeddingLookup(e, -1), IndexError);

  Graph<double> g;
  Embedding<double> grad = ZerosLike(e);
  const Var v = g.Lookup(e.Bind(g, &grad), {1});
  g.Backward(g.Sum(v));
  Mat<double> expect = Mat<double>::Zero(3, 2);
  expect.row(1) << 1, 1;
  CHECK(grad.table == expect);
}

TEST_CASE("softmax examples and invariants") {
  Vec<double> p = Softmax(V({0, 0}));
  CHECK(p(0) == doctest::Approx(0.5));
  p = Softmax(V({1, 2, 3}));
  long double z = std::exp(1.0L) + std::exp(2.0L) + std::exp(3.0L);
  for (int i = 0; i < 3; ++i) {
    CHECK(p(i) == doctest::Approx(static_cast<double>(std::exp(1.0L + i) / z)).epsilon(1e-12));
  }
  CHECK(p(0) == doctest::Approx(0.09003).epsilon(1e-4));
  CHECK(p(1) == doctest::Approx(0.24473).epsilon(1e-4));
  CHECK(p(2) == doctest::Approx(0.66524).epsilon(1e-4));
  p = Softmax(V({1000, 1000}));
  CHECK(p(0) == 0.5);
  CHECK(p(1) == 0.5);
  CHECK_THROWS_AS(Softmax(Vec<double>()), ArgumentError);

  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Vec<double> x(1 + rng.Below(10));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.Uniform(-30, 30);
    const double c = rng.Uniform(-100, 100);
    const Vec<double> a = Softmax(x);
    const Vec<double> b = Softmax(Vec<double>(x.array() + c));
    CHECK(std::abs(a.sum() - 1.0) < 1e-6);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(a.minCoeff() >= 0.0);
  }
}

TEST_CASE("cross entropy examples") {
  CHECK(CrossEntropy(V({0.5, 0.5}), 0) == doctest::Approx(std::log(2.0)));
  CHECK(CrossEntropy(V({1 - 1e-12, 1e-12}), 0) == doctest::Approx(0.0).epsilon(1e-9));
  const Vec<double> w = V({2, 1});
  CHECK(CrossEntropy(V({0.5, 0.5}), 0, &w) == doctest::Approx(2 * std::log(2.0)));
  CHECK_THROWS_AS(CrossEntropy(V({0.5, 0.5}), 2), IndexError);

  // Logit gradient is softmax minus one-hot; confirmed by differences.
  Graph<double> g;
  const Mat<double> zero = Mat<double>::Zero(2, 1);
  Mat<double> grad = Mat<double>::Zero(2, 1);
  const Var logits = g.Param(zero, &grad);
  g.Backward(g.SoftmaxCrossEntropy(logits, {0}, {1.0}));
  CHECK(grad(0, 0) == doctest::Approx(-0.5));
  CHECK(grad(1, 0) == doctest::Approx(0.5));
  auto f = [](double a, double b) {
    const double lse = std::log(std::exp(a) + std::exp(b));
    return lse - a;
  };
  const double h = 1e-6;
  CHECK((f(h, 0) - f(-h, 0)) / (2 * h) == doctest::Approx(-0.5).epsilon(1e-8));
  CHECK((f(0, h) - f(0, -h)) / (2 * h) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("adam step examples") {
  Mat<float> p = Mat<float>::Zero(1, 1);
  Mat<float> gr = Mat<float>::Constant(1, 1, 0.5f);
  AdamState<float> st = AdamState<float>::For(p, AdamConfig{});
  AdamStep(p, gr, st);
  CHECK(p(0, 0) == doctest::Approx(-0.001).epsilon(1e-5));
  CHECK(st.t == 1);

  Mat<float> q = Mat<float>::Constant(2, 2, 1.5f);
  const Mat<float> before = q;
  AdamState<float> s2 = AdamState<float>::For(q, AdamConfig{});
  for (int i = 0; i < 5; ++i) AdamStep(q, Mat<float>(Mat<float>::Zero(2, 2)), s2);
  CHECK(q == before);
  CHECK(s2.v.minCoeff() >= 0.0f);

  Mat<double> x = Mat<double>::Zero(1, 1);
  AdamState<double> s3 = AdamState<double>::For(x, AdamConfig{0.05, 0.9, 0.999, 1e-8});
  for (int i = 0; i < 200; ++i) {
    Mat<double> grad(1, 1);
    grad(0, 0) = 2 * (x(0, 0) - 3);
    AdamStep(x, grad, s3);
  }
  CHECK(std::abs(x(0, 0) - 3) < 0.1);
  CHECK_THROWS_AS(AdamStep(x, Mat<double>(Mat<double>::Zero(2, 1)), s3), DimensionError);
}

TEST_CASE("global norm clipping") {
  Dense<float> g = Dense<float>::Zeros(2, 2, Activation::kIdentity);
  g.w << 3, 0, 0, 0;
  g.b << 4, 0;
  CHECK(ClipGlobalNorm<float>(g, 1.0) == doctest::Approx(5.0));
  CHECK(g.w(0, 0) == doctest::Approx(0.6f));
  CHECK(g.b(0, 0) == doctest::Approx(0.8f));
}

// Parameter bundle holding a layer together with its inputs, so the check
// covers gradients with respect to inputs as well as weights.
struct DenseBundle {
  Dense<double> layer;
  Mat<double> x;
  template <typename F>
  void VisitParams(const std::string& p, F&& fn) {
    layer.VisitParams(p + ".layer", fn);
    fn(p + ".x", x);
  }
};

struct MlpBundle {
  Mlp<double> mlp;
  Mat<double> x;
  template <typename F>
  void VisitParams(const std::string& p, F&& fn) {
    mlp.VisitParams(p + ".mlp", fn);
    fn(p + ".x", x);
  }
};

struct LstmBundle {
  Lstm<double> lstm;
  Mat<double> x, h, c;
  template <typename F>
  void VisitParams(const std::string& p, F&& fn) {
    lstm.VisitParams(p + ".lstm", fn);
    fn(p + ".x", x);
    fn(p + ".h", h);
    fn(p + ".c", c);
  }
};

struct EmbedBundle {
  Embedding<double> table;
  template <typename F>
  void VisitParams(const std::string& p, F&& fn) {
    table.VisitParams(p + ".table", fn);
  }
};

struct LogitBundle {
  Mat<double> logits;
  template <typename F>
  void VisitParams(const std::string& p, F&& fn) {
    fn(p + ".logits", logits);
  }
};

Mat<double> RandomMat(int r, int c, Rng& rng) {
  Mat<double> m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Uniform(-1, 1);
  return m;
}

TEST_CASE("grad check: linear layer") {
  Rng rng(7);
  DenseBundle b{Dense<double>::Zeros(4, 3, Activation::kIdentity), RandomMat(4, 2, rng)};
  b.layer.Init(rng);
  b.layer.b = RandomMat(3, 1, rng);
  std::function<double(DenseBundle&, DenseBundle*)> f = [](DenseBundle& p, DenseBundle* gr) {
    Graph<double> g;
    const Var y = ApplyDense(g, p.layer.Bind(g, gr ? &gr->layer : nullptr),
                             g.Param(p.x, gr ? &gr->x : nullptr));
    const Var loss = g.Sum(g.Tanh(y));
    if (gr) g.Backward(loss);
    return g.Value(loss)(0, 0);
  };
  CHECK(GradCheck(b, f).max_rel_error < 1e-6);
}

TEST_CASE("grad check: mlp with relu and tanh") {
  Rng rng(8);
  MlpBundle b{Mlp<double>::Zeros({5, 6, 4, 3}, Activation::kTanh), RandomMat(5, 3, rng)};
  b.mlp.Init(rng);
  b.mlp.layers[1].act = Activation::kRelu;
  for (auto& l : b.mlp.layers) l.b = RandomMat(l.out(), 1, rng);
  std::function<double(MlpBundle&, MlpBundle*)> f = [](MlpBundle& p, MlpBundle* gr) {
    Graph<double> g;
    const Var y = ApplyMlp(g, p.mlp.Bind(g, gr ? &gr->mlp : nullptr),
                           g.Param(p.x, gr ? &gr->x : nullptr));
    const Var loss = g.SoftmaxCrossEntropy(y, {0, 2, 1}, {1.0, 0.5, 2.0});
    if (gr) g.Backward(loss);
    return g.Value(loss)(0, 0);
  };
  CHECK(GradCheck(b, f).max_rel_error < 1e-4);
}

TEST_CASE("grad check: lstm step") {
  Rng rng(9);
  LstmBundle b{Lstm<double>::Zeros(3, 4), RandomMat(3, 2, rng), RandomMat(4, 2, rng),
               RandomMat(4, 2, rng)};
  b.lstm.Init(rng);
  b.lstm.b = RandomMat(16, 1, rng);
  std::function<double(LstmBundle&, LstmBundle*)> f = [](LstmBundle& p, LstmBundle* gr) {
    Graph<double> g;
    const LstmVarsState s =
        ApplyLstm(g, p.lstm.Bind(g, gr ? &gr->lstm : nullptr), g.Param(p.x, gr ? &gr->x : nullptr),
                  {g.Param(p.h, gr ? &gr->h : nullptr), g.Param(p.c, gr ? &gr->c : nullptr)});
    const Var loss = g.Add(g.Sum(s.h), g.Scale(g.Sum(s.c), 0.3));
    if (gr) g.Backward(loss);
    return g.Value(loss)(0, 0);
  };
  GradCheckOptions opts;
  opts.samples_per_param = 1000;
  CHECK(GradCheck(b, f, opts).max_rel_error < 1e-4);
}

TEST_CASE("grad check: embedding and softmax cross entropy") {
  Rng rng(10);
  EmbedBundle e{Embedding<double>{RandomMat(5, 3, rng)}};
  std::function<double(EmbedBundle&, EmbedBundle*)> f = [](EmbedBundle& p, EmbedBundle* gr) {
    Graph<double> g;
    const Var x = g.Lookup(p.table.Bind(g, gr ? &gr->table : nullptr), {1, 4, 1});
    const Var loss = g.SoftmaxCrossEntropy(x, {2, 0, -1}, {1.0, 1.0, 1.0});
    if (gr) g.Backward(loss);
    return g.Value(loss)(0, 0);
  };
  GradCheckOptions opts;
  opts.samples_per_param = 1000;
  CHECK(GradCheck(e, f, opts).max_rel_error < 1e-4);

  LogitBundle l{RandomMat(6, 1, rng)};
  std::function<double(LogitBundle&, LogitBundle*)> h = [](LogitBundle& p, LogitBundle* gr) {
    Graph<double> g;
    const Var x = g.Param(p.logits, gr ? &gr->logits : nullptr);
    const Var loss = g.SegmentCrossEntropy(x, {0, 4, 6}, {3, 1}, {1.0, 2.0});
    if (gr) g.Backward(loss);
    return g.Value(loss)(0, 0);
  };
  LogitBundle lt{l.logits.transpose()};
  CHECK(GradCheck(lt, h).max_rel_error < 1e-4);
}

TEST_CASE("grad check reports non-finite loss") {
  LogitBundle l{Mat<double>::Constant(1, 1, 1.0)};
  std::function<double(LogitBundle&, LogitBundle*)> f = [](LogitBundle& p, LogitBundle*) {
    return p.logits(0, 0) > 1.0 ? std::nan("") : p.logits(0, 0);
  };
  CHECK_THROWS_AS(GradCheck(l, f), NumericError);
}

TEST_CASE("forward evaluation is bit-identical across runs") {
  Mlp<float> m = Mlp<float>::Zeros({8, 16, 3}, Activation::kRelu);
  Rng rng(4);
  m.Init(rng);
  Vec<float> x(8);
  for (int i = 0; i < 8; ++i) x(i) = static_cast<float>(rng.Uniform(-1, 1));
  CHECK(MlpApply(x, m) == MlpApply(x, m));
}

TEST_CASE("rng is deterministic and seeds differ") {
  Rng a(5), b(5), c(6);
  bool differs = false;
  for (int i = 0; i < 10; ++i) {
    const uint64_t x = a.Next();
    CHECK(x == b.Next());
    differs = differs || x != c.Next();
  }
  CHECK(differs);
  CHECK(DeriveSeed(1, 2) != DeriveSeed(1, 3));
  Rng r(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.Uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.Below(7) < 7u);
  }
}

TEST_CASE("tensor round trip") {
  Mat<float> m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  const Tensor t = Tensor::FromMatrix(m);
  CHECK(t.shape == std::vector<int>{2, 3});
  CHECK(t.data == std::vector<float>{1, 2, 3, 4, 5, 6});
  CHECK(t.ToMatrix() == m);
  Tensor bad{{2, 2}, {1, 2, 3}};
  CHECK_THROWS_AS(bad.ToMatrix(), DimensionError);
}

TEST_CASE("exit codes by error family") {
  CHECK(ExitCodeFor(ArgumentError("x")) == kExitUsage);
  CHECK(ExitCodeFor(ConfigError("x")) == kExitUsage);
  CHECK(ExitCodeFor(FormatError("x")) == kExitData);
  CHECK(ExitCodeFor(NumericError("x")) == kExitNumeric);
  CHECK(ExitCodeFor(RankError("x")) == kExitNumeric);
}

}  // namespace
}  // namespace gwdm
