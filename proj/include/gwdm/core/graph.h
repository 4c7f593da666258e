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

#ifndef GWDM_CORE_GRAPH_H_
#define GWDM_CORE_GRAPH_H_

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "gwdm/core/errors.h"
#include "gwdm/core/tensor.h"

namespace gwdm {

enum class Activation { kIdentity, kRelu, kTanh };

// Handle to a node of a Graph.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode differentiation tape over the fixed set of operations used by
// the dialogue models. Nodes are appended in evaluation order, so a single
// reverse sweep visits every node after all of its consumers.
//
// Values are column-batched: a node of shape [d x n] holds n examples.
// Parameters are referenced, not copied; their gradients accumulate directly
// into the caller's gradient matrices during Backward().
template <typename T>
class Graph {
 public:
  using Matrix = Mat<T>;

  Graph() { nodes_.reserve(256); }

  Var Param(const Matrix& value, Matrix* grad) {
    Node& n = NewNode(Op::kParam);
    n.ext = &value;
    n.sink = grad;
    n.needs_grad = grad != nullptr;
    return Last();
  }

  Var Constant(Matrix value) {
    Node& n = NewNode(Op::kConstant);
    n.value = std::move(value);
    return Last();
  }

  Var Zeros(Eigen::Index rows, Eigen::Index cols) {
    return Constant(Matrix::Zero(rows, cols));
  }

  Var MatMul(Var a, Var b) {
    const Matrix& av = Value(a);
    const Matrix& bv = Value(b);
    if (av.cols() != bv.rows()) {
      throw DimensionError("matmul: " + ShapeString(av.rows(), av.cols()) +
                           " * " + ShapeString(bv.rows(), bv.cols()));
    }
    Matrix out = av * bv;
    return Emit(Op::kMatMul, {a, b}, std::move(out));
  }

  Var AddBias(Var x, Var bias) {
    const Matrix& xv = Value(x);
    const Matrix& bv = Value(bias);
    if (bv.cols() != 1 || bv.rows() != xv.rows()) {
      throw DimensionError("bias " + ShapeString(bv.rows(), bv.cols()) +
                           " does not fit " + ShapeString(xv.rows(), xv.cols()));
    }
    Matrix out = xv.colwise() + bv.col(0);
    return Emit(Op::kAddBias, {x, bias}, std::move(out));
  }

  Var Add(Var a, Var b) {
    const Matrix& av = Value(a);
    const Matrix& bv = Value(b);
    if (av.rows() != bv.rows() || av.cols() != bv.cols()) {
      throw DimensionError("add: " + ShapeString(av.rows(), av.cols()) + " + " +
                           ShapeString(bv.rows(), bv.cols()));
    }
    Matrix out = av + bv;
    return Emit(Op::kAdd, {a, b}, std::move(out));
  }

  Var Sigmoid(Var x) {
    Matrix out = Value(x).unaryExpr([](T v) { return SigmoidOf(v); });
    return Emit(Op::kSigmoid, {x}, std::move(out));
  }

  Var Tanh(Var x) {
    Matrix out = Value(x).array().tanh().matrix();
    return Emit(Op::kTanh, {x}, std::move(out));
  }

  Var Relu(Var x) {
    Matrix out = Value(x).cwiseMax(T(0));
    return Emit(Op::kRelu, {x}, std::move(out));
  }

  Var Activate(Var x, Activation act) {
    switch (act) {
      case Activation::kRelu:
        return Relu(x);
      case Activation::kTanh:
        return Tanh(x);
      case Activation::kIdentity:
        break;
    }
    return x;
  }

  // Stacks inputs vertically; all parts must have the same column count.
  Var ConcatRows(std::initializer_list<Var> parts) {
    return ConcatRows(std::vector<Var>(parts));
  }

  Var ConcatRows(const std::vector<Var>& parts) {
    Eigen::Index rows = 0;
    const Eigen::Index cols = Value(parts.front()).cols();
    for (Var p : parts) {
      if (Value(p).cols() != cols) {
        throw DimensionError("concat: column counts differ");
      }
      rows += Value(p).rows();
    }
    Matrix out(rows, cols);
    Eigen::Index at = 0;
    for (Var p : parts) {
      const Matrix& pv = Value(p);
      out.middleRows(at, pv.rows()) = pv;
      at += pv.rows();
    }
    return Emit(Op::kConcat, parts, std::move(out));
  }

  Var SliceRows(Var x, int start, int count) {
    const Matrix& xv = Value(x);
    if (start < 0 || count < 0 || start + count > xv.rows()) {
      throw DimensionError("slice rows out of range");
    }
    Matrix out = xv.middleRows(start, count);
    Var v = Emit(Op::kSlice, {x}, std::move(out));
    nodes_[v.id].start = start;
    return v;
  }

  // Gathers rows of a [V x E] table into an [E x n] matrix, one column per id.
  Var Lookup(Var table, std::vector<int> ids) {
    const Matrix& tv = Value(table);
    Matrix out(tv.cols(), static_cast<Eigen::Index>(ids.size()));
    for (size_t j = 0; j < ids.size(); ++j) {
      if (ids[j] < 0 || ids[j] >= tv.rows()) {
        throw IndexError("embedding id " + std::to_string(ids[j]) +
                         " outside table of " + std::to_string(tv.rows()) +
                         " rows");
      }
      out.col(j) = tv.row(ids[j]).transpose();
    }
    Var v = Emit(Op::kLookup, {table}, std::move(out));
    nodes_[v.id].ints = std::move(ids);
    return v;
  }

  // Fused LSTM cell. `gates` holds pre-activations [i; f; g; o] of size 4H;
  // the result stacks the new hidden and cell states as [h; c] (2H rows).
  Var LstmCell(Var gates, Var cell) {
    const Matrix& gv = Value(gates);
    const Matrix& cv = Value(cell);
    const Eigen::Index h = cv.rows();
    if (gv.rows() != 4 * h || gv.cols() != cv.cols()) {
      throw DimensionError("lstm cell: gates " + ShapeString(gv.rows(), gv.cols()) +
                           " vs cell " + ShapeString(cv.rows(), cv.cols()));
    }
    const Eigen::Index n = gv.cols();
    Matrix act(5 * h, n);  // i, f, g, o, tanh(c')
    act.topRows(h) = gv.topRows(h).unaryExpr([](T v) { return SigmoidOf(v); });
    act.middleRows(h, h) =
        gv.middleRows(h, h).unaryExpr([](T v) { return SigmoidOf(v); });
    act.middleRows(2 * h, h) = gv.middleRows(2 * h, h).array().tanh().matrix();
    act.middleRows(3 * h, h) =
        gv.middleRows(3 * h, h).unaryExpr([](T v) { return SigmoidOf(v); });
    Matrix out(2 * h, n);
    out.bottomRows(h) = act.middleRows(h, h).cwiseProduct(cv) +
                        act.topRows(h).cwiseProduct(act.middleRows(2 * h, h));
    act.bottomRows(h) = out.bottomRows(h).array().tanh().matrix();
    out.topRows(h) = act.middleRows(3 * h, h).cwiseProduct(act.bottomRows(h));
    Var v = Emit(Op::kLstmCell, {gates, cell}, std::move(out));
    nodes_[v.id].aux = std::move(act);
    return v;
  }

  // Column-wise select: column j comes from `next` when keep[j] is 1 and from
  // `prev` when it is 0. Used to freeze finished sequences in a padded batch.
  Var Blend(Var next, Var prev, std::vector<T> keep) {
    const Matrix& nv = Value(next);
    const Matrix& pv = Value(prev);
    if (nv.rows() != pv.rows() || nv.cols() != pv.cols() ||
        static_cast<Eigen::Index>(keep.size()) != nv.cols()) {
      throw DimensionError("blend: operand shapes differ");
    }
    Matrix out(nv.rows(), nv.cols());
    for (Eigen::Index j = 0; j < nv.cols(); ++j) {
      out.col(j) = keep[j] != T(0) ? nv.col(j) : pv.col(j);
    }
    Var v = Emit(Op::kBlend, {next, prev}, std::move(out));
    nodes_[v.id].reals = std::move(keep);
    return v;
  }

  // Column-wise softmax.
  Var Softmax(Var logits) {
    const Matrix& lv = Value(logits);
    if (lv.rows() == 0) throw ArgumentError("softmax of an empty vector");
    Matrix out(lv.rows(), lv.cols());
    for (Eigen::Index j = 0; j < lv.cols(); ++j) {
      out.col(j) = SoftmaxColumn(lv.col(j));
    }
    return Emit(Op::kSoftmax, {logits}, std::move(out));
  }

  // Weighted sum over columns of -log softmax(logits)[target]. A negative
  // target skips the column. Returns a [1 x 1] node.
  Var SoftmaxCrossEntropy(Var logits, std::vector<int> targets,
                          std::vector<T> weights) {
    const Matrix& lv = Value(logits);
    if (static_cast<Eigen::Index>(targets.size()) != lv.cols() ||
        weights.size() != targets.size()) {
      throw DimensionError("cross entropy: one target and weight per column");
    }
    Matrix probs(lv.rows(), lv.cols());
    T loss = 0;
    for (Eigen::Index j = 0; j < lv.cols(); ++j) {
      if (targets[j] < 0) continue;
      if (targets[j] >= lv.rows()) {
        throw IndexError("cross entropy target " + std::to_string(targets[j]) +
                         " outside " + std::to_string(lv.rows()) + " classes");
      }
      const T mx = lv.col(j).maxCoeff();
      const T lse = mx + std::log((lv.col(j).array() - mx).exp().sum());
      probs.col(j) = (lv.col(j).array() - lse).exp().matrix();
      loss += weights[j] * (lse - lv(targets[j], j));
    }
    Matrix out(1, 1);
    out(0, 0) = loss;
    Var v = Emit(Op::kSoftmaxXent, {logits}, std::move(out));
    Node& n = nodes_[v.id];
    n.aux = std::move(probs);
    n.ints = std::move(targets);
    n.reals = std::move(weights);
    return v;
  }

  // out(k) = rows.col(k) . cols.col(owner[k]); result is [1 x rows.cols()].
  Var ColumnDot(Var rows, Var cols, std::vector<int> owner) {
    const Matrix& rv = Value(rows);
    const Matrix& cv = Value(cols);
    if (rv.rows() != cv.rows() ||
        static_cast<Eigen::Index>(owner.size()) != rv.cols()) {
      throw DimensionError("column dot: " + ShapeString(rv.rows(), rv.cols()) +
                           " vs " + ShapeString(cv.rows(), cv.cols()));
    }
    Matrix out(1, rv.cols());
    for (Eigen::Index k = 0; k < rv.cols(); ++k) {
      if (owner[k] < 0 || owner[k] >= cv.cols()) {
        throw IndexError("column dot owner out of range");
      }
      out(0, k) = rv.col(k).dot(cv.col(owner[k]));
    }
    Var v = Emit(Op::kColumnDot, {rows, cols}, std::move(out));
    nodes_[v.id].ints = std::move(owner);
    return v;
  }

  // Softmax cross entropy over variable-sized segments of a [1 x N] score row.
  // Segment b spans [offsets[b], offsets[b+1]); targets are segment-relative.
  Var SegmentCrossEntropy(Var scores, const std::vector<int>& offsets,
                          const std::vector<int>& targets,
                          std::vector<T> weights) {
    const Matrix& sv = Value(scores);
    const size_t segments = targets.size();
    if (sv.rows() != 1 || offsets.size() != segments + 1 ||
        weights.size() != segments || offsets.back() != sv.cols()) {
      throw DimensionError("segment cross entropy: inconsistent segments");
    }
    Matrix probs(1, sv.cols());
    T loss = 0;
    for (size_t b = 0; b < segments; ++b) {
      const int lo = offsets[b];
      const int len = offsets[b + 1] - lo;
      if (len <= 0) throw ArgumentError("empty candidate segment");
      if (targets[b] < 0 || targets[b] >= len) {
        throw IndexError("segment target out of range");
      }
      auto seg = sv.row(0).segment(lo, len);
      const T mx = seg.maxCoeff();
      const T lse = mx + std::log((seg.array() - mx).exp().sum());
      probs.row(0).segment(lo, len) = (seg.array() - lse).exp().matrix();
      loss += weights[b] * (lse - seg(targets[b]));
    }
    Matrix out(1, 1);
    out(0, 0) = loss;
    Var v = Emit(Op::kSegmentXent, {scores}, std::move(out));
    Node& n = nodes_[v.id];
    n.aux = std::move(probs);
    n.ints = offsets;
    n.ints.insert(n.ints.end(), targets.begin(), targets.end());
    n.reals = std::move(weights);
    return v;
  }

  Var Sum(Var x) {
    Matrix out(1, 1);
    out(0, 0) = Value(x).sum();
    return Emit(Op::kSum, {x}, std::move(out));
  }

  Var Scale(Var x, T factor) {
    Matrix out = Value(x) * factor;
    Var v = Emit(Op::kScale, {x}, std::move(out));
    nodes_[v.id].scalar = factor;
    return v;
  }

  const Matrix& Value(Var v) const {
    const Node& n = nodes_.at(v.id);
    return n.ext != nullptr ? *n.ext : n.value;
  }

  // Gradient of the last Backward() loss w.r.t. `v`; empty if unreached.
  const Matrix& Grad(Var v) const { return nodes_.at(v.id).grad; }

  void Backward(Var loss) {
    Node& root = nodes_.at(loss.id);
    const Matrix& lv = Value(loss);
    if (lv.rows() != 1 || lv.cols() != 1) {
      throw DimensionError("backward requires a scalar loss");
    }
    root.grad = Matrix::Ones(1, 1);
    for (int id = loss.id; id >= 0; --id) {
      Node& n = nodes_[id];
      if (!n.needs_grad || n.grad.size() == 0) continue;
      BackwardNode(n);
    }
  }

  size_t size() const { return nodes_.size(); }

  static T SigmoidOf(T v) {
    if (v >= 0) return T(1) / (T(1) + std::exp(-v));
    const T e = std::exp(v);
    return e / (T(1) + e);
  }

  template <typename Derived>
  static Vec<T> SoftmaxColumn(const Eigen::MatrixBase<Derived>& z) {
    const T mx = z.maxCoeff();
    Vec<T> e = (z.array() - mx).exp().matrix();
    return e / e.sum();
  }

 private:
  enum class Op {
    kParam,
    kConstant,
    kMatMul,
    kAddBias,
    kAdd,
    kSigmoid,
    kTanh,
    kRelu,
    kConcat,
    kSlice,
    kLookup,
    kLstmCell,
    kBlend,
    kSoftmax,
    kSoftmaxXent,
    kColumnDot,
    kSegmentXent,
    kSum,
    kScale,
  };

  struct Node {
    Op op;
    std::vector<int> in;
    std::vector<int> ints;
    std::vector<T> reals;
    int start = 0;
    T scalar = 0;
    Matrix value;
    Matrix aux;
    Matrix grad;
    const Matrix* ext = nullptr;
    Matrix* sink = nullptr;
    bool needs_grad = false;
  };

  Node& NewNode(Op op) {
    nodes_.emplace_back();
    nodes_.back().op = op;
    return nodes_.back();
  }

  Var Last() const { return Var{static_cast<int>(nodes_.size()) - 1}; }

  Var Emit(Op op, const std::vector<Var>& inputs, Matrix value) {
    bool needs = false;
    std::vector<int> in;
    in.reserve(inputs.size());
    for (Var v : inputs) {
      in.push_back(v.id);
      needs = needs || nodes_[v.id].needs_grad;
    }
    Node& n = NewNode(op);
    n.in = std::move(in);
    n.value = std::move(value);
    n.needs_grad = needs;
    return Last();
  }

  Matrix& GradOf(int id) {
    Node& n = nodes_[id];
    if (n.grad.size() == 0) {
      const Matrix& v = n.ext != nullptr ? *n.ext : n.value;
      n.grad = Matrix::Zero(v.rows(), v.cols());
    }
    return n.grad;
  }

  bool Wants(int id) const { return nodes_[id].needs_grad; }

  void BackwardNode(Node& n) {
    // `n.grad` is read while input gradients are written; inputs always have
    // smaller ids, so no aliasing occurs, but the vector must not reallocate.
    const Matrix& g = n.grad;
    switch (n.op) {
      case Op::kParam:
        if (n.sink != nullptr) *n.sink += g;
        break;
      case Op::kConstant:
        break;
      case Op::kMatMul: {
        const int a = n.in[0], b = n.in[1];
        if (Wants(a)) GradOf(a).noalias() += g * ValueOf(b).transpose();
        if (Wants(b)) GradOf(b).noalias() += ValueOf(a).transpose() * g;
        break;
      }
      case Op::kAddBias:
        if (Wants(n.in[0])) GradOf(n.in[0]) += g;
        if (Wants(n.in[1])) GradOf(n.in[1]) += g.rowwise().sum();
        break;
      case Op::kAdd:
        if (Wants(n.in[0])) GradOf(n.in[0]) += g;
        if (Wants(n.in[1])) GradOf(n.in[1]) += g;
        break;
      case Op::kSigmoid:
        GradOf(n.in[0]).array() +=
            g.array() * n.value.array() * (T(1) - n.value.array());
        break;
      case Op::kTanh:
        GradOf(n.in[0]).array() +=
            g.array() * (T(1) - n.value.array().square());
        break;
      case Op::kRelu:
        GradOf(n.in[0]).array() +=
            g.array() * (ValueOf(n.in[0]).array() > T(0)).template cast<T>();
        break;
      case Op::kConcat: {
        Eigen::Index at = 0;
        for (int id : n.in) {
          const Eigen::Index rows = ValueOf(id).rows();
          if (Wants(id)) GradOf(id) += g.middleRows(at, rows);
          at += rows;
        }
        break;
      }
      case Op::kSlice:
        GradOf(n.in[0]).middleRows(n.start, g.rows()) += g;
        break;
      case Op::kLookup: {
        Matrix& tg = GradOf(n.in[0]);
        for (size_t j = 0; j < n.ints.size(); ++j) {
          tg.row(n.ints[j]) += g.col(j).transpose();
        }
        break;
      }
      case Op::kLstmCell:
        BackwardLstmCell(n);
        break;
      case Op::kBlend: {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
          const int target = n.reals[j] != T(0) ? n.in[0] : n.in[1];
          if (Wants(target)) GradOf(target).col(j) += g.col(j);
        }
        break;
      }
      case Op::kSoftmax: {
        Matrix& xg = GradOf(n.in[0]);
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
          const T inner = g.col(j).dot(n.value.col(j));
          xg.col(j).array() +=
              n.value.col(j).array() * (g.col(j).array() - inner);
        }
        break;
      }
      case Op::kSoftmaxXent: {
        Matrix& lg = GradOf(n.in[0]);
        const T scale = g(0, 0);
        for (Eigen::Index j = 0; j < lg.cols(); ++j) {
          const int t = n.ints[j];
          if (t < 0) continue;
          const T w = n.reals[j] * scale;
          lg.col(j) += w * n.aux.col(j);
          lg(t, j) -= w;
        }
        break;
      }
      case Op::kColumnDot: {
        const Matrix& rv = ValueOf(n.in[0]);
        const Matrix& cv = ValueOf(n.in[1]);
        const bool want_r = Wants(n.in[0]);
        const bool want_c = Wants(n.in[1]);
        for (Eigen::Index k = 0; k < g.cols(); ++k) {
          const int o = n.ints[k];
          if (want_r) GradOf(n.in[0]).col(k) += g(0, k) * cv.col(o);
          if (want_c) GradOf(n.in[1]).col(o) += g(0, k) * rv.col(k);
        }
        break;
      }
      case Op::kSegmentXent: {
        Matrix& sg = GradOf(n.in[0]);
        const T scale = g(0, 0);
        const size_t segments = n.reals.size();
        for (size_t b = 0; b < segments; ++b) {
          const int lo = n.ints[b];
          const int len = n.ints[b + 1] - lo;
          const int target = n.ints[segments + 1 + b];
          const T w = n.reals[b] * scale;
          sg.row(0).segment(lo, len) += w * n.aux.row(0).segment(lo, len);
          sg(0, lo + target) -= w;
        }
        break;
      }
      case Op::kSum:
        GradOf(n.in[0]).array() += g(0, 0);
        break;
      case Op::kScale:
        GradOf(n.in[0]) += n.scalar * g;
        break;
    }
  }

  void BackwardLstmCell(Node& n) {
    const Matrix& g = n.grad;
    const Matrix& act = n.aux;
    const Matrix& c_prev = ValueOf(n.in[1]);
    const Eigen::Index h = c_prev.rows();
    const auto i = act.topRows(h).array();
    const auto f = act.middleRows(h, h).array();
    const auto cand = act.middleRows(2 * h, h).array();
    const auto o = act.middleRows(3 * h, h).array();
    const auto tc = act.bottomRows(h).array();
    const auto dh = g.topRows(h).array();
    Matrix dc = g.bottomRows(h);
    dc.array() += dh * o * (T(1) - tc.square());
    if (Wants(n.in[0])) {
      Matrix& gg = GradOf(n.in[0]);
      gg.topRows(h).array() += dc.array() * cand * i * (T(1) - i);
      gg.middleRows(h, h).array() += dc.array() * c_prev.array() * f * (T(1) - f);
      gg.middleRows(2 * h, h).array() += dc.array() * i * (T(1) - cand.square());
      gg.middleRows(3 * h, h).array() += dh * tc * o * (T(1) - o);
    }
    if (Wants(n.in[1])) GradOf(n.in[1]).array() += dc.array() * f;
  }

  const Matrix& ValueOf(int id) const {
    const Node& n = nodes_[id];
    return n.ext != nullptr ? *n.ext : n.value;
  }

  std::vector<Node> nodes_;
};

}  // namespace gwdm

#endif  // GWDM_CORE_GRAPH_H_
