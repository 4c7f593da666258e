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

#ifndef GWDM_CORE_LAYERS_H_
#define GWDM_CORE_LAYERS_H_

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "gwdm/core/graph.h"
#include "gwdm/core/random.h"
#include "gwdm/core/tensor.h"

namespace gwdm {

// Parameter layers. Each layer exposes VisitParams(prefix, fn) so that
// checkpointing, optimization, casting and gradient checking can walk every
// matrix in a fixed order, and Bind(graph, grad) to enter a forward pass.

// Glorot-uniform fill: U[-a, a] with a = sqrt(6 / (rows + cols)).
template <typename T>
void GlorotFill(Mat<T>& m, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      m(r, c) = static_cast<T>(rng.Uniform(-a, a));
    }
  }
}

template <typename T>
struct Dense {
  Mat<T> w;  // [out x in]
  Mat<T> b;  // [out x 1]
  Activation act = Activation::kIdentity;

  struct Vars {
    Var w, b;
    Activation act;
  };

  static Dense Zeros(int in, int out, Activation act) {
    return Dense{Mat<T>::Zero(out, in), Mat<T>::Zero(out, 1), act};
  }

  int in() const { return static_cast<int>(w.cols()); }
  int out() const { return static_cast<int>(w.rows()); }

  void Init(Rng& rng) {
    GlorotFill(w, rng);
    b.setZero();
  }

  template <typename F>
  void VisitParams(const std::string& prefix, F&& fn) {
    fn(prefix + ".w", w);
    fn(prefix + ".b", b);
  }

  Vars Bind(Graph<T>& g, Dense* grad) const {
    return {g.Param(w, grad ? &grad->w : nullptr),
            g.Param(b, grad ? &grad->b : nullptr), act};
  }
};

template <typename T>
Var ApplyDense(Graph<T>& g, const typename Dense<T>::Vars& layer, Var x) {
  return g.Activate(g.AddBias(g.MatMul(layer.w, x), layer.b), layer.act);
}

template <typename T>
struct Mlp {
  std::vector<Dense<T>> layers;

  // widths = {in, hidden..., out}; hidden layers use `hidden_act`, the output
  // layer is linear.
  static Mlp Zeros(const std::vector<int>& widths, Activation hidden_act) {
    Mlp m;
    for (size_t i = 0; i + 1 < widths.size(); ++i) {
      const bool last = i + 2 == widths.size();
      m.layers.push_back(Dense<T>::Zeros(widths[i], widths[i + 1],
                                         last ? Activation::kIdentity
                                              : hidden_act));
    }
    return m;
  }

  int in() const { return layers.front().in(); }
  int out() const { return layers.back().out(); }

  void Init(Rng& rng) {
    for (auto& l : layers) l.Init(rng);
  }

  template <typename F>
  void VisitParams(const std::string& prefix, F&& fn) {
    for (size_t i = 0; i < layers.size(); ++i) {
      layers[i].VisitParams(prefix + "." + std::to_string(i), fn);
    }
  }

  std::vector<typename Dense<T>::Vars> Bind(Graph<T>& g, Mlp* grad) const {
    std::vector<typename Dense<T>::Vars> vars;
    for (size_t i = 0; i < layers.size(); ++i) {
      vars.push_back(layers[i].Bind(g, grad ? &grad->layers[i] : nullptr));
    }
    return vars;
  }
};

template <typename T>
Var ApplyMlp(Graph<T>& g, const std::vector<typename Dense<T>::Vars>& mlp,
             Var x) {
  for (size_t i = 0; i < mlp.size(); ++i) {
    const Eigen::Index want = g.Value(mlp[i].w).cols();
    if (g.Value(x).rows() != want) {
      throw DimensionError("mlp layer " + std::to_string(i) + " expects " +
                           std::to_string(want) + " inputs, got " +
                           std::to_string(g.Value(x).rows()));
    }
    x = ApplyDense(g, mlp[i], x);
  }
  return x;
}

template <typename T>
struct Embedding {
  Mat<T> table;  // [V x E]

  static Embedding Zeros(int rows, int width) {
    return Embedding{Mat<T>::Zero(rows, width)};
  }

  int rows() const { return static_cast<int>(table.rows()); }
  int width() const { return static_cast<int>(table.cols()); }

  void Init(Rng& rng) { GlorotFill(table, rng); }

  template <typename F>
  void VisitParams(const std::string& prefix, F&& fn) {
    fn(prefix + ".table", table);
  }

  Var Bind(Graph<T>& g, Embedding* grad) const {
    return g.Param(table, grad ? &grad->table : nullptr);
  }
};

template <typename T>
struct LstmStateT {
  Mat<T> h;  // [H x n]
  Mat<T> c;  // [H x n]
};

using LstmState = LstmStateT<float>;

// Four-gate LSTM with gate order (input, forget, cell candidate, output).
template <typename T>
struct Lstm {
  Mat<T> w;  // [4H x (I + H)]
  Mat<T> b;  // [4H x 1]

  struct Vars {
    Var w, b;
    int hidden;
  };

  static Lstm Zeros(int input, int hidden) {
    return Lstm{Mat<T>::Zero(4 * hidden, input + hidden),
                Mat<T>::Zero(4 * hidden, 1)};
  }

  int hidden() const { return static_cast<int>(w.rows() / 4); }
  int input() const { return static_cast<int>(w.cols()) - hidden(); }

  // Glorot weights, zero biases except the forget gate, which starts at 1.
  void Init(Rng& rng) {
    GlorotFill(w, rng);
    b.setZero();
    b.middleRows(hidden(), hidden()).setConstant(T(1));
  }

  template <typename F>
  void VisitParams(const std::string& prefix, F&& fn) {
    fn(prefix + ".w", w);
    fn(prefix + ".b", b);
  }

  Vars Bind(Graph<T>& g, Lstm* grad) const {
    return {g.Param(w, grad ? &grad->w : nullptr),
            g.Param(b, grad ? &grad->b : nullptr), hidden()};
  }
};

struct LstmVarsState {
  Var h, c;
};

template <typename T>
LstmVarsState ApplyLstm(Graph<T>& g, const typename Lstm<T>::Vars& lstm, Var x,
                        LstmVarsState state) {
  const Eigen::Index want = g.Value(lstm.w).cols() - lstm.hidden;
  if (g.Value(x).rows() != want) {
    throw DimensionError("lstm input has " + std::to_string(g.Value(x).rows()) +
                         " rows, expected " + std::to_string(want));
  }
  if (g.Value(state.h).rows() != lstm.hidden ||
      g.Value(state.c).rows() != lstm.hidden) {
    throw DimensionError("lstm state width does not match hidden size " +
                         std::to_string(lstm.hidden));
  }
  const Var xh = g.ConcatRows({x, state.h});
  const Var gates = g.AddBias(g.MatMul(lstm.w, xh), lstm.b);
  const Var hc = g.LstmCell(gates, state.c);
  return {g.SliceRows(hc, 0, lstm.hidden), g.SliceRows(hc, lstm.hidden, lstm.hidden)};
}

// Helpers over parameter bundles (any type with VisitParams).

template <typename P>
P ZerosLike(const P& params) {
  P out = params;
  out.VisitParams("", [](const std::string&, auto& m) { m.setZero(); });
  return out;
}

template <typename T, typename P>
std::vector<std::pair<std::string, Mat<T>*>> CollectParams(P& params) {
  std::vector<std::pair<std::string, Mat<T>*>> out;
  params.VisitParams("", [&](const std::string& name, Mat<T>& m) {
    out.emplace_back(name.substr(1), &m);
  });
  return out;
}

// Copies values between two bundles of identical structure, casting scalars.
template <typename To, typename From, typename PTo, typename PFrom>
void CastParamsInto(PFrom& from, PTo& to) {
  auto src = CollectParams<From>(from);
  auto dst = CollectParams<To>(to);
  if (src.size() != dst.size()) throw DimensionError("parameter bundles differ");
  for (size_t i = 0; i < src.size(); ++i) {
    if (src[i].second->rows() != dst[i].second->rows() ||
        src[i].second->cols() != dst[i].second->cols()) {
      throw DimensionError("parameter " + src[i].first + " shape differs");
    }
    *dst[i].second = src[i].second->template cast<To>();
  }
}

template <typename T, typename P>
size_t ParamCount(P& params) {
  size_t n = 0;
  params.VisitParams("", [&](const std::string&, Mat<T>& m) { n += m.size(); });
  return n;
}

}  // namespace gwdm

#endif  // GWDM_CORE_LAYERS_H_
