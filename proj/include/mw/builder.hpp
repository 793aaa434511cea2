// Copyright 2026 The mwcalc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Imperative construction of terms from named wires, plus the structural
// operations built on it: swap networks, mirror and dagger.

#include <string>
#include <utility>
#include <vector>

#include "mw/diagram.hpp"

namespace mw {

/// Odd-even transposition network realising out[k] = in[perm[k]] with Swap
/// and Id generators.
template <Semiring S>
TermPtr<S> swap_network(const DiagObject& in, const std::vector<Label>& labels,
                        const std::vector<std::size_t>& perm, std::size_t nworlds) {
  const std::size_t n = perm.size();
  std::vector<std::size_t> target(n);
  for (std::size_t k = 0; k < n; ++k) target[perm[k]] = k;
  std::vector<std::size_t> cur(n);  // cur[j] = input index currently at j
  for (std::size_t j = 0; j < n; ++j) cur[j] = j;
  std::vector<TermPtr<S>> layers;
  bool sorted = false;
  for (std::size_t phase = 0; !sorted; ++phase) {
    sorted = true;
    bool any = false;
    std::vector<TermPtr<S>> layer;
    std::size_t j = 0;
    if (phase % 2 == 1 && n > 0) {
      layer.push_back(leaf<S>(gen::id<S>(in[cur[0]], labels[cur[0]]), nworlds));
      j = 1;
    }
    for (; j < n; j += 2) {
      if (j + 1 < n && target[cur[j]] > target[cur[j + 1]]) {
        layer.push_back(leaf<S>(gen::swap<S>(in[cur[j]], in[cur[j + 1]], labels[cur[j]],
                                             labels[cur[j + 1]]),
                                nworlds));
        std::swap(cur[j], cur[j + 1]);
        any = true;
      } else {
        layer.push_back(leaf<S>(gen::id<S>(in[cur[j]], labels[cur[j]]), nworlds));
        if (j + 1 < n)
          layer.push_back(leaf<S>(gen::id<S>(in[cur[j + 1]], labels[cur[j + 1]]), nworlds));
      }
    }
    if (any) layers.push_back(par<S>(layer, nworlds));
    for (std::size_t k = 0; k + 1 < n; ++k)
      if (target[cur[k]] > target[cur[k + 1]]) sorted = false;
    if (phase > 2 * n + 2) throw Error("swap network did not converge");
  }
  if (layers.empty()) return identity_term<S>(in, labels, nworlds);
  return seq<S>(layers);
}

/// Replace every Perm node by its swap network.
template <Semiring S>
TermPtr<S> expand_perms(const TermPtr<S>& t) {
  switch (t->kind()) {
    case NodeKind::Gen:
      return t;
    case NodeKind::Perm:
      return swap_network<S>(t->in_type(), t->in_labels(), t->perm(), t->worlds());
    case NodeKind::Seq: {
      std::vector<TermPtr<S>> ks;
      for (const auto& k : t->kids()) ks.push_back(expand_perms<S>(k));
      return seq<S>(ks);
    }
    case NodeKind::Par: {
      std::vector<TermPtr<S>> ks;
      for (const auto& k : t->kids()) ks.push_back(expand_perms<S>(k));
      return par<S>(ks, t->worlds());
    }
  }
  return t;
}

template <Semiring S>
bool has_perms(const TermPtr<S>& t) {
  if (t->kind() == NodeKind::Perm) return true;
  for (const auto& k : t->kids())
    if (has_perms<S>(k)) return true;
  return false;
}

template <Semiring S>
class DiagramBuilder {
 public:
  using T = typename S::T;
  using Wire = std::size_t;

  explicit DiagramBuilder(std::size_t nworlds) : n_(nworlds) {}

  std::size_t worlds() const { return n_; }
  Label empty_label() const { return Label(n_); }

  /// Pad idle wires of a stage with an identity Perm instead of Id
  /// generators, so that building adds no generator of its own.
  void pad_with_wiring(bool on) { pad_wiring_ = on; }

  Wire input(const WireType& t, const Label& l) {
    Wire w = fresh(t, l);
    inputs_.push_back(w);
    return w;
  }

  const WireType& type(Wire w) const { return wires_.at(w).type; }
  const Label& label(Wire w) const { return wires_.at(w).label; }

  /// Apply a generator to wires; the generator's own port labels are used
  /// for its outputs.
  std::vector<Wire> apply(const Generator<S>& g, const std::vector<Wire>& ins) {
    return block(leaf<S>(g, n_), ins);
  }

  /// Apply an arbitrary term (over the same world count).
  std::vector<Wire> block(const TermPtr<S>& t, const std::vector<Wire>& ins) {
    if (t->worlds() != n_) throw ShapeError("builder block over a different world count");
    if (ins.size() != t->in_type().size()) throw ShapeError("builder arity mismatch");
    for (std::size_t i = 0; i < ins.size(); ++i) {
      auto& w = wires_.at(ins[i]);
      if (!(w.type == t->in_type()[i]))
        throw ShapeError("builder wire type mismatch: " + w.type.str() + " vs " +
                         t->in_type()[i].str());
      if (w.consumed) throw Error("wire " + std::to_string(ins[i]) + " used twice");
      w.consumed = true;
    }
    Op op{t, ins, {}};
    for (std::size_t k = 0; k < t->out_type().size(); ++k)
      op.outs.push_back(fresh(t->out_type()[k], t->out_labels()[k]));
    ops_.push_back(op);
    return op.outs;
  }

  Wire id(Wire x) { return apply(gen::id<S>(type(x), label(x)), {x})[0]; }

  std::vector<Wire> swap(Wire x, Wire y) {
    return apply(gen::swap<S>(type(x), type(y), label(x), label(y)), {x, y});
  }

  Wire plus(Wire x, Wire y) {
    return apply(gen::plus<S>(type(x), type(y), label(x), label(y)), {x, y})[0];
  }

  std::pair<Wire, Wire> plus_dag(Wire x, const Label& w, const Label& v) {
    const auto& t = type(x);
    if (t.kind() != WireType::Kind::Sum) throw ShapeError("plus_dag on a non-sum wire");
    auto o = apply(gen::plus_dag<S>(t.left(), t.right(), w, v), {x});
    return {o[0], o[1]};
  }

  Wire tensor(Wire x, Wire y) {
    return apply(gen::tensor<S>(type(x), type(y), label(x)), {x, y})[0];
  }

  std::pair<Wire, Wire> tensor_dag(Wire x) {
    const auto& t = type(x);
    if (t.kind() != WireType::Kind::Prod) throw ShapeError("tensor_dag on a non-product wire");
    auto o = apply(gen::tensor_dag<S>(t.left(), t.right(), label(x)), {x});
    return {o[0], o[1]};
  }

  Wire unit(const Label& w) { return apply(gen::unit<S>(w), {})[0]; }
  void unit_dag(Wire x) { apply(gen::unit_dag<S>(label(x)), {x}); }

  Wire contraction(const std::vector<Wire>& xs) {
    if (xs.empty()) throw ShapeError("use contraction0 for arity zero");
    std::vector<Label> ws;
    for (auto x : xs) ws.push_back(label(x));
    return apply(gen::contraction<S>(type(xs[0]), ws, n_), xs)[0];
  }

  Wire contraction0(const WireType& t) {
    return apply(gen::contraction<S>(t, {}, n_), {})[0];
  }

  std::vector<Wire> contraction_dag(Wire x, const std::vector<Label>& ws) {
    return apply(gen::contraction_dag<S>(type(x), ws, n_), {x});
  }

  Wire scalar(Wire x, const T& s) { return apply(gen::scalar<S>(type(x), s, label(x)), {x})[0]; }

  std::pair<Wire, Wire> cap(const WireType& t, const Label& w) {
    auto o = apply(gen::cap<S>(t, w), {});
    return {o[0], o[1]};
  }

  void cup(Wire x, Wire y) { apply(gen::cup<S>(type(x), label(x)), {x, y}); }

  /// Inline a labeled diagram over the same world count.
  std::vector<Wire> embed(const LabeledDiagram<S>& d, const std::vector<Wire>& ins) {
    return block(d.term, ins);
  }

  /// Stage the recorded operations into Perm and Par layers. With
  /// expand = true the Perm layers become Swap networks.
  TermPtr<S> build(const std::vector<Wire>& outputs, bool expand = true) const {
    std::vector<Wire> live = inputs_;
    std::vector<bool> done(ops_.size());
    std::vector<TermPtr<S>> layers;
    std::vector<bool> is_live(wires_.size());
    for (auto w : live) is_live[w] = true;
    std::size_t remaining = ops_.size();
    while (remaining > 0) {
      std::vector<std::size_t> stage;
      std::vector<bool> taken(wires_.size());
      for (std::size_t i = 0; i < ops_.size(); ++i) {
        if (done[i]) continue;
        bool ready = true;
        for (auto w : ops_[i].ins)
          if (!is_live[w] || taken[w]) ready = false;
        if (!ready) continue;
        for (auto w : ops_[i].ins) taken[w] = true;
        stage.push_back(i);
      }
      if (stage.empty()) throw Error("builder: operations depend on unavailable wires");
      std::vector<Wire> order;
      for (auto i : stage) order.insert(order.end(), ops_[i].ins.begin(), ops_[i].ins.end());
      std::vector<Wire> rest;
      for (auto w : live)
        if (!taken[w]) rest.push_back(w);
      order.insert(order.end(), rest.begin(), rest.end());
      if (auto p = permutation(live, order, expand)) layers.push_back(p);
      std::vector<TermPtr<S>> row;
      std::vector<Wire> next;
      for (auto i : stage) {
        row.push_back(ops_[i].term);
        next.insert(next.end(), ops_[i].outs.begin(), ops_[i].outs.end());
        done[i] = true;
        --remaining;
      }
      if (pad_wiring_ && !rest.empty())
        row.push_back(identity_wiring(rest));
      else if (!pad_wiring_)
        for (auto w : rest) row.push_back(leaf<S>(gen::id<S>(type(w), label(w)), n_));
      next.insert(next.end(), rest.begin(), rest.end());
      for (auto w : live) is_live[w] = false;
      for (auto w : next) is_live[w] = true;
      layers.push_back(par<S>(row, n_));
      live = std::move(next);
    }
    if (outputs.size() != live.size())
      throw Error("builder: " + std::to_string(live.size()) + " live wires but " +
                  std::to_string(outputs.size()) + " outputs requested");
    for (auto w : outputs)
      if (w >= wires_.size() || !is_live[w]) throw Error("builder: output wire not live");
    if (auto p = permutation(live, outputs, expand)) layers.push_back(p);
    if (layers.empty() && pad_wiring_)
      return live.empty() ? Term<S>::empty(n_) : identity_wiring(live);
    if (layers.empty()) {
      std::vector<WireType> ts;
      std::vector<Label> ls;
      for (auto w : live) {
        ts.push_back(type(w));
        ls.push_back(label(w));
      }
      return identity_term<S>(DiagObject(ts), ls, n_);
    }
    return seq<S>(layers);
  }

  LabeledDiagram<S> diagram(const WorldSet& W, const std::vector<Wire>& outputs,
                            bool expand = true) const {
    if (W.size() != n_) throw ShapeError("world set size differs from builder");
    return {W, build(outputs, expand)};
  }

 private:
  struct WireInfo {
    WireType type;
    Label label;
    bool consumed = false;
  };
  struct Op {
    TermPtr<S> term;
    std::vector<Wire> ins;
    std::vector<Wire> outs;
  };

  Wire fresh(const WireType& t, const Label& l) {
    if (l.size() != n_) throw ShapeError("label size does not match builder world count");
    wires_.push_back({t, l, false});
    return wires_.size() - 1;
  }

  TermPtr<S> identity_wiring(const std::vector<Wire>& ws) const {
    std::vector<WireType> ts;
    std::vector<Label> ls;
    std::vector<std::size_t> perm;
    for (auto w : ws) {
      perm.push_back(ts.size());
      ts.push_back(type(w));
      ls.push_back(label(w));
    }
    return Term<S>::make_perm(DiagObject(ts), ls, perm, n_);
  }

  /// Null when `to` is `from` already.
  TermPtr<S> permutation(const std::vector<Wire>& from, const std::vector<Wire>& to,
                         bool expand) const {
    if (from == to) return nullptr;
    std::vector<std::size_t> pos(wires_.size());
    for (std::size_t i = 0; i < from.size(); ++i) pos[from[i]] = i;
    std::vector<std::size_t> perm;
    for (auto w : to) perm.push_back(pos[w]);
    std::vector<WireType> ts;
    std::vector<Label> ls;
    for (auto w : from) {
      ts.push_back(type(w));
      ls.push_back(label(w));
    }
    DiagObject obj(ts);
    if (expand) return swap_network<S>(obj, ls, perm, n_);
    return Term<S>::make_perm(obj, ls, perm, n_);
  }

  std::size_t n_;
  bool pad_wiring_ = false;
  std::vector<WireInfo> wires_;
  std::vector<Wire> inputs_;
  std::vector<Op> ops_;
};

// ---------------------------------------------------------------------------

/// g expressed with cups and caps around g itself:
///   (Cup_B [] Id_A) o (Id_B [] g [] Id_A) o (Id_B [] Cap_A)
/// where the multi-wire cap and cup pair the wires in the same order.
template <Semiring S>
LabeledDiagram<S> mirror(const Generator<S>& g, const WorldSet& W) {
  DiagramBuilder<S> b(W.size());
  const auto it = g.in_type();
  const auto ot = g.out_type();
  std::vector<typename DiagramBuilder<S>::Wire> xs, keep, feed;
  for (std::size_t j = 0; j < ot.size(); ++j) xs.push_back(b.input(ot[j], g.out[j]));
  for (std::size_t i = 0; i < it.size(); ++i) {
    auto [c1, c2] = b.cap(it[i], g.in[i]);
    keep.push_back(c1);
    feed.push_back(c2);
  }
  auto ys = b.apply(g, feed);
  for (std::size_t j = 0; j < ys.size(); ++j) b.cup(xs[j], ys[j]);
  return b.diagram(W, keep);
}

/// Upside-down diagram: Seq reversed, generators mirrored, labels kept.
template <Semiring S>
TermPtr<S> dagger_term(const TermPtr<S>& t) {
  switch (t->kind()) {
    case NodeKind::Gen:
      return leaf<S>(gen::mirrored<S>(t->gen()), t->worlds());
    case NodeKind::Perm: {
      std::vector<std::size_t> inv(t->perm().size());
      for (std::size_t k = 0; k < inv.size(); ++k) inv[t->perm()[k]] = k;
      return Term<S>::make_perm(t->out_type(), t->out_labels(), inv, t->worlds());
    }
    case NodeKind::Seq: {
      std::vector<TermPtr<S>> ks;
      for (auto it = t->kids().rbegin(); it != t->kids().rend(); ++it)
        ks.push_back(dagger_term<S>(*it));
      return seq<S>(ks);
    }
    case NodeKind::Par: {
      std::vector<TermPtr<S>> ks;
      for (const auto& k : t->kids()) ks.push_back(dagger_term<S>(k));
      return par<S>(ks, t->worlds());
    }
  }
  return t;
}

template <Semiring S>
LabeledDiagram<S> dagger(const LabeledDiagram<S>& d) {
  return {d.worlds, dagger_term<S>(d.term)};
}

}  // namespace mw
