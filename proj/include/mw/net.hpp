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

// Port-graph view of a term: generator instances (ops) joined by wires.
// Rewriting happens here, where sequential/parallel interchange and wire
// crossings are invisible; terms are rebuilt in a canonical staging order.

#include <algorithm>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mw/builder.hpp"
#include "mw/diagram.hpp"

namespace mw {

class RewriteError : public Error {
 public:
  using Error::Error;
};

template <Semiring S>
class Net {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  struct Op {
    Generator<S> g;
    std::vector<std::size_t> ins, outs;
    int tag = 0;  // free for callers, kept by in-place edits
  };

  /// A wire end: op == npos stands for the net boundary.
  struct End {
    std::size_t op = npos;
    std::size_t port = 0;
  };

  explicit Net(std::size_t nworlds = 0) : n_(nworlds) {}

  std::size_t worlds() const { return n_; }
  std::vector<Op> ops;
  std::vector<std::size_t> inputs, outputs;

  const WireType& type(std::size_t w) const { return types_.at(w); }
  const Label& label(std::size_t w) const { return labels_.at(w); }

  std::size_t new_wire(const WireType& t, const Label& l) {
    if (l.size() != n_) throw ShapeError("net label of the wrong size");
    types_.push_back(t);
    labels_.push_back(l);
    return types_.size() - 1;
  }

  std::size_t add_input(const WireType& t, const Label& l) {
    inputs.push_back(new_wire(t, l));
    return inputs.back();
  }

  /// Append an op on existing input wires; fresh output wires unless `outs`
  /// is given.
  std::size_t add_op(Generator<S> g, std::vector<std::size_t> ins,
                     std::vector<std::size_t> outs = {}) {
    const auto it = g.in_type();
    const auto ot = g.out_type();
    if (ins.size() != it.size() || g.in.size() != it.size() || g.out.size() != ot.size())
      throw ShapeError("net op arity mismatch for " + std::string(gen_name(g.kind)));
    for (std::size_t i = 0; i < ins.size(); ++i)
      if (!(type(ins[i]) == it[i])) throw ShapeError("net op input type mismatch");
    if (outs.empty()) {
      for (std::size_t k = 0; k < ot.size(); ++k) outs.push_back(new_wire(ot[k], g.out[k]));
    } else if (outs.size() != ot.size()) {
      throw ShapeError("net op output arity mismatch");
    } else {
      for (std::size_t k = 0; k < ot.size(); ++k) labels_[outs[k]] = g.out[k];
    }
    ops.push_back({std::move(g), std::move(ins), std::move(outs), 0});
    return ops.size() - 1;
  }

  End consumer(std::size_t w) const {
    for (std::size_t i = 0; i < ops.size(); ++i)
      for (std::size_t p = 0; p < ops[i].ins.size(); ++p)
        if (ops[i].ins[p] == w) return {i, p};
    for (std::size_t p = 0; p < outputs.size(); ++p)
      if (outputs[p] == w) return {npos, p};
    throw RewriteError("dangling wire");
  }

  End producer(std::size_t w) const {
    for (std::size_t i = 0; i < ops.size(); ++i)
      for (std::size_t p = 0; p < ops[i].outs.size(); ++p)
        if (ops[i].outs[p] == w) return {i, p};
    for (std::size_t p = 0; p < inputs.size(); ++p)
      if (inputs[p] == w) return {npos, p};
    throw RewriteError("wire without a source");
  }

  /// Whoever read `from` now reads `to`.
  void redirect(std::size_t from, std::size_t to) {
    for (auto& op : ops)
      for (auto& w : op.ins)
        if (w == from) w = to;
    for (auto& w : outputs)
      if (w == from) w = to;
  }

  void erase(std::vector<std::size_t> idx) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    for (auto it = idx.rbegin(); it != idx.rend(); ++it)
      ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(*it));
  }

  /// Rebuild every label through f into a world set of size n.
  void relabel(const std::function<Label(const Label&)>& f, std::size_t n) {
    for (auto& l : labels_) l = f(l);
    for (auto& op : ops) {
      for (auto& l : op.g.in) l = f(l);
      for (auto& l : op.g.out) l = f(l);
    }
    n_ = n;
  }

  /// Staging order: repeatedly take every op whose inputs are available, in
  /// index order. This is the order in which DiagramBuilder emits them, so
  /// after canonicalize() op i is generator i of to_term() in pre-order.
  /// Returns the new index of every old op; throws on a cycle.
  std::vector<std::size_t> canonicalize() {
    std::vector<bool> avail(types_.size()), done(ops.size());
    for (auto w : inputs) avail[w] = true;
    std::vector<std::size_t> order;
    while (order.size() < ops.size()) {
      std::vector<std::size_t> stage;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (done[i]) continue;
        if (std::all_of(ops[i].ins.begin(), ops[i].ins.end(), [&](auto w) { return avail[w]; }))
          stage.push_back(i);
      }
      if (stage.empty()) throw RewriteError("rewrite would create a cycle");
      for (auto i : stage) {
        done[i] = true;
        order.push_back(i);
        for (auto w : ops[i].outs) avail[w] = true;
      }
    }
    std::vector<std::size_t> where(ops.size());
    std::vector<Op> sorted;
    sorted.reserve(ops.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      where[order[k]] = k;
      sorted.push_back(std::move(ops[order[k]]));
    }
    ops = std::move(sorted);
    return where;
  }

  /// Term in staging order, wiring as Perm nodes, no padding generators.
  TermPtr<S> to_term() const {
    Net copy = *this;
    copy.canonicalize();
    DiagramBuilder<S> b(n_);
    b.pad_with_wiring(true);
    std::vector<std::size_t> map(types_.size(), npos);
    for (auto w : copy.inputs) map[w] = b.input(type(w), label(w));
    for (const auto& op : copy.ops) {
      std::vector<std::size_t> ins;
      for (auto w : op.ins) ins.push_back(map[w]);
      auto outs = b.apply(op.g, ins);
      for (std::size_t k = 0; k < outs.size(); ++k) map[op.outs[k]] = outs[k];
    }
    std::vector<std::size_t> outs;
    for (auto w : copy.outputs) outs.push_back(map[w]);
    return b.build(outs, false);
  }

  /// Ops in pre-order of the term.
  static Net from_term(const TermPtr<S>& t) {
    Net net(t->worlds());
    std::vector<std::size_t> ins;
    for (std::size_t i = 0; i < t->in_type().size(); ++i)
      ins.push_back(net.add_input(t->in_type()[i], t->in_labels()[i]));
    net.outputs = net.absorb(t, ins);
    return net;
  }

  static Net from_diagram(const LabeledDiagram<S>& d) { return from_term(d.term); }

 private:
  std::vector<std::size_t> absorb(const TermPtr<S>& t, const std::vector<std::size_t>& ins) {
    switch (t->kind()) {
      case NodeKind::Gen:
        return ops[add_op(t->gen(), ins)].outs;
      case NodeKind::Perm: {
        std::vector<std::size_t> out;
        for (auto p : t->perm()) out.push_back(ins[p]);
        return out;
      }
      case NodeKind::Seq: {
        auto cur = ins;
        for (const auto& k : t->kids()) cur = absorb(k, cur);
        return cur;
      }
      case NodeKind::Par: {
        std::vector<std::size_t> out;
        std::size_t off = 0;
        for (const auto& k : t->kids()) {
          const std::size_t m = k->in_type().size();
          std::vector<std::size_t> part(ins.begin() + static_cast<std::ptrdiff_t>(off),
                                        ins.begin() + static_cast<std::ptrdiff_t>(off + m));
          auto o = absorb(k, part);
          out.insert(out.end(), o.begin(), o.end());
          off += m;
        }
        return out;
      }
    }
    return ins;
  }

  std::size_t n_;
  std::vector<WireType> types_;
  std::vector<Label> labels_;
};

}  // namespace mw
