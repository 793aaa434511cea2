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

// Labeled diagrams: generator instances with per-port world labels, composed
// into Seq/Par terms over a fixed world set.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "mw/kernel.hpp"
#include "mw/semiring.hpp"
#include "mw/worlds.hpp"

namespace mw {

enum class GenKind {
  Id,
  Swap,
  Cup,
  Cap,
  Plus,
  PlusDag,
  Tensor,
  TensorDag,
  Unit,
  UnitDag,
  Contraction,
  ContractionDag,
  Scalar
};

std::string_view gen_name(GenKind k);
/// Inverse of gen_name; throws ParseError on unknown names.
GenKind gen_kind_of(std::string_view name);
GenKind mirror_kind(GenKind k);

template <Semiring S>
struct Generator {
  using T = typename S::T;

  GenKind kind = GenKind::Id;
  WireType a;  // first type parameter
  WireType b;  // second one (Swap, Plus, Tensor)
  std::size_t arity = 0;  // Contraction
  T scalar = S::one();
  std::vector<Label> in;
  std::vector<Label> out;

  DiagObject in_type() const {
    switch (kind) {
      case GenKind::Id:
      case GenKind::Scalar:
        return {a};
      case GenKind::Swap:
      case GenKind::Plus:
      case GenKind::Tensor:
        return {a, b};
      case GenKind::Cup:
        return {a, a};
      case GenKind::Cap:
      case GenKind::Unit:
        return {};
      case GenKind::PlusDag:
        return {WireType::sum(a, b)};
      case GenKind::TensorDag:
        return {WireType::prod(a, b)};
      case GenKind::UnitDag:
        return {WireType()};
      case GenKind::Contraction:
        return DiagObject(std::vector<WireType>(arity, a));
      case GenKind::ContractionDag:
        return {a};
    }
    return {};
  }

  DiagObject out_type() const {
    switch (kind) {
      case GenKind::Id:
      case GenKind::Scalar:
        return {a};
      case GenKind::Swap:
        return {b, a};
      case GenKind::Cap:
        return {a, a};
      case GenKind::Cup:
      case GenKind::UnitDag:
        return {};
      case GenKind::Plus:
        return {WireType::sum(a, b)};
      case GenKind::Tensor:
        return {WireType::prod(a, b)};
      case GenKind::PlusDag:
      case GenKind::TensorDag:
        return {a, b};
      case GenKind::Unit:
        return {WireType()};
      case GenKind::Contraction:
        return {a};
      case GenKind::ContractionDag:
        return DiagObject(std::vector<WireType>(arity, a));
    }
    return {};
  }

  bool same_shape(const Generator& o) const {
    return kind == o.kind && a == o.a && b == o.b && arity == o.arity;
  }
};

// Generator factories. Labels are given in their natural form; the factories
// never check constraints, validate() does.
namespace gen {

template <Semiring S>
Generator<S> id(const WireType& a, const Label& w) {
  return {GenKind::Id, a, {}, 0, S::one(), {w}, {w}};
}
/// (A:w) [] (B:v) -> (B:v) [] (A:w)
template <Semiring S>
Generator<S> swap(const WireType& a, const WireType& b, const Label& w, const Label& v) {
  return {GenKind::Swap, a, b, 0, S::one(), {w, v}, {v, w}};
}
template <Semiring S>
Generator<S> cup(const WireType& a, const Label& w) {
  return {GenKind::Cup, a, {}, 0, S::one(), {w, w}, {}};
}
template <Semiring S>
Generator<S> cap(const WireType& a, const Label& w) {
  return {GenKind::Cap, a, {}, 0, S::one(), {}, {w, w}};
}
template <Semiring S>
Generator<S> plus(const WireType& a, const WireType& b, const Label& w, const Label& v) {
  return {GenKind::Plus, a, b, 0, S::one(), {w, v}, {w | v}};
}
template <Semiring S>
Generator<S> plus_dag(const WireType& a, const WireType& b, const Label& w, const Label& v) {
  return {GenKind::PlusDag, a, b, 0, S::one(), {w | v}, {w, v}};
}
template <Semiring S>
Generator<S> tensor(const WireType& a, const WireType& b, const Label& w) {
  return {GenKind::Tensor, a, b, 0, S::one(), {w, w}, {w}};
}
template <Semiring S>
Generator<S> tensor_dag(const WireType& a, const WireType& b, const Label& w) {
  return {GenKind::TensorDag, a, b, 0, S::one(), {w}, {w, w}};
}
template <Semiring S>
Generator<S> unit(const Label& w) {
  return {GenKind::Unit, {}, {}, 0, S::one(), {}, {w}};
}
template <Semiring S>
Generator<S> unit_dag(const Label& w) {
  return {GenKind::UnitDag, {}, {}, 0, S::one(), {w}, {}};
}
/// Union of the labels, or the empty label of size n for arity 0.
inline Label union_of(const std::vector<Label>& ws, std::size_t n) {
  Label u(n);
  for (const auto& w : ws) u |= w;
  return u;
}
/// n = |W|, needed for the output label of the 0-ary contraction.
template <Semiring S>
Generator<S> contraction(const WireType& a, const std::vector<Label>& ws, std::size_t n) {
  return {GenKind::Contraction, a, {}, ws.size(), S::one(), ws, {union_of(ws, n)}};
}
template <Semiring S>
Generator<S> contraction_dag(const WireType& a, const std::vector<Label>& ws, std::size_t n) {
  return {GenKind::ContractionDag, a, {}, ws.size(), S::one(), {union_of(ws, n)}, ws};
}
template <Semiring S>
Generator<S> scalar(const WireType& a, const typename S::T& s, const Label& w) {
  return {GenKind::Scalar, a, {}, 0, s, {w}, {w}};
}

/// The upside-down generator: the dedicated mirrored variant, with its
/// ports' labels carried over.
template <Semiring S>
Generator<S> mirrored(const Generator<S>& g) {
  Generator<S> m = g;
  m.kind = mirror_kind(g.kind);
  m.in = g.out;
  m.out = g.in;
  if (g.kind == GenKind::Swap) {
    std::swap(m.a, m.b);
  }
  return m;
}

}  // namespace gen

// ---------------------------------------------------------------------------

enum class NodeKind { Gen, Seq, Par, Perm };

template <Semiring S>
class Term;
template <Semiring S>
using TermPtr = std::shared_ptr<const Term<S>>;

/// Immutable composition term. Seq children are listed in application order
/// (first child applied first). Perm is wiring sugar: output k is input
/// perm[k]; it stands for a network of Swap generators (see expand_perms).
template <Semiring S>
class Term {
 public:
  NodeKind kind() const { return kind_; }
  const Generator<S>& gen() const { return gen_; }
  const std::vector<TermPtr<S>>& kids() const { return kids_; }
  const std::vector<std::size_t>& perm() const { return perm_; }
  const DiagObject& in_type() const { return in_type_; }
  const DiagObject& out_type() const { return out_type_; }
  const std::vector<Label>& in_labels() const { return in_labels_; }
  const std::vector<Label>& out_labels() const { return out_labels_; }
  /// Union of every label appearing in the term.
  const Label& active() const { return active_; }
  std::size_t worlds() const { return nworlds_; }
  /// Number of generator leaves.
  std::size_t size() const { return size_; }
  bool is_empty() const { return kind_ == NodeKind::Par && kids_.empty(); }

  static TermPtr<S> make_gen(Generator<S> g, std::size_t nworlds) {
    auto t = std::shared_ptr<Term>(new Term());
    t->kind_ = NodeKind::Gen;
    t->in_type_ = g.in_type();
    t->out_type_ = g.out_type();
    if (g.in.size() != t->in_type_.size() || g.out.size() != t->out_type_.size())
      throw ShapeError(std::string("port label count mismatch for ") +
                       std::string(gen_name(g.kind)));
    t->in_labels_ = g.in;
    t->out_labels_ = g.out;
    t->nworlds_ = nworlds;
    t->active_ = Label(nworlds);
    for (const auto& l : g.in) t->absorb(l);
    for (const auto& l : g.out) t->absorb(l);
    t->size_ = 1;
    t->gen_ = std::move(g);
    return t;
  }

  /// Sequential composition; nested Seq children are flattened and a single
  /// child is returned as is. Throws ShapeError on type mismatch.
  static TermPtr<S> make_seq(const std::vector<TermPtr<S>>& kids) {
    if (kids.empty()) throw ShapeError("empty sequential composition");
    std::vector<TermPtr<S>> flat;
    for (const auto& k : kids) {
      if (k->kind() == NodeKind::Seq)
        flat.insert(flat.end(), k->kids().begin(), k->kids().end());
      else
        flat.push_back(k);
    }
    if (flat.size() == 1) return flat[0];
    for (std::size_t i = 0; i + 1 < flat.size(); ++i)
      if (!(flat[i]->out_type() == flat[i + 1]->in_type()))
        throw ShapeError("sequential composition type mismatch: " +
                         flat[i]->out_type().str() + " vs " + flat[i + 1]->in_type().str());
    auto t = std::shared_ptr<Term>(new Term());
    t->kind_ = NodeKind::Seq;
    t->nworlds_ = flat[0]->worlds();
    t->in_type_ = flat.front()->in_type();
    t->out_type_ = flat.back()->out_type();
    t->in_labels_ = flat.front()->in_labels();
    t->out_labels_ = flat.back()->out_labels();
    t->active_ = Label(t->nworlds_);
    for (const auto& k : flat) t->absorb_kid(*k);
    t->kids_ = std::move(flat);
    return t;
  }

  /// Parallel composition; flattened; the empty list is the empty diagram.
  static TermPtr<S> make_par(const std::vector<TermPtr<S>>& kids, std::size_t nworlds) {
    std::vector<TermPtr<S>> flat;
    for (const auto& k : kids) {
      if (k->kind() == NodeKind::Par)
        flat.insert(flat.end(), k->kids().begin(), k->kids().end());
      else
        flat.push_back(k);
    }
    if (flat.size() == 1) return flat[0];
    auto t = std::shared_ptr<Term>(new Term());
    t->kind_ = NodeKind::Par;
    t->nworlds_ = nworlds;
    t->active_ = Label(nworlds);
    std::vector<WireType> in, out;
    for (const auto& k : flat) {
      in.insert(in.end(), k->in_type().begin(), k->in_type().end());
      out.insert(out.end(), k->out_type().begin(), k->out_type().end());
      t->in_labels_.insert(t->in_labels_.end(), k->in_labels().begin(), k->in_labels().end());
      t->out_labels_.insert(t->out_labels_.end(), k->out_labels().begin(),
                            k->out_labels().end());
      t->absorb_kid(*k);
    }
    t->in_type_ = DiagObject(std::move(in));
    t->out_type_ = DiagObject(std::move(out));
    t->kids_ = std::move(flat);
    return t;
  }

  static TermPtr<S> empty(std::size_t nworlds) { return make_par({}, nworlds); }

  /// Wiring: output k carries input perm[k].
  static TermPtr<S> make_perm(const DiagObject& in, const std::vector<Label>& labels,
                              std::vector<std::size_t> perm, std::size_t nworlds) {
    if (perm.size() != in.size() || labels.size() != in.size())
      throw ShapeError("permutation size mismatch");
    std::vector<bool> seen(perm.size());
    for (auto p : perm) {
      if (p >= perm.size() || seen[p]) throw ShapeError("not a permutation");
      seen[p] = true;
    }
    auto t = std::shared_ptr<Term>(new Term());
    t->kind_ = NodeKind::Perm;
    t->nworlds_ = nworlds;
    t->in_type_ = in;
    t->in_labels_ = labels;
    std::vector<WireType> out;
    for (auto p : perm) {
      out.push_back(in[p]);
      t->out_labels_.push_back(labels[p]);
    }
    t->out_type_ = DiagObject(std::move(out));
    t->active_ = Label(nworlds);
    for (const auto& l : labels) t->absorb(l);
    t->size_ = 0;
    t->perm_ = std::move(perm);
    return t;
  }

 private:
  Term() = default;
  void absorb(const Label& l) {
    if (l.size() != nworlds_) throw ShapeError("label size does not match world count");
    active_ |= l;
  }
  void absorb_kid(const Term& k) {
    if (k.worlds() != nworlds_) throw ShapeError("composing terms over different world sets");
    active_ |= k.active();
    size_ += k.size();
  }

  NodeKind kind_ = NodeKind::Par;
  Generator<S> gen_;
  std::vector<TermPtr<S>> kids_;
  std::vector<std::size_t> perm_;
  DiagObject in_type_, out_type_;
  std::vector<Label> in_labels_, out_labels_;
  Label active_;
  std::size_t nworlds_ = 0;
  std::size_t size_ = 0;
};

template <Semiring S>
TermPtr<S> leaf(Generator<S> g, std::size_t nworlds) {
  return Term<S>::make_gen(std::move(g), nworlds);
}
template <Semiring S>
TermPtr<S> seq(const std::vector<TermPtr<S>>& kids) {
  return Term<S>::make_seq(kids);
}
template <Semiring S>
TermPtr<S> par(const std::vector<TermPtr<S>>& kids, std::size_t nworlds) {
  return Term<S>::make_par(kids, nworlds);
}

/// Identity term on a labeled object (Par of Id generators).
template <Semiring S>
TermPtr<S> identity_term(const DiagObject& obj, const std::vector<Label>& labels,
                         std::size_t nworlds) {
  std::vector<TermPtr<S>> ids;
  for (std::size_t i = 0; i < obj.size(); ++i)
    ids.push_back(leaf<S>(gen::id<S>(obj[i], labels[i]), nworlds));
  return par<S>(ids, nworlds);
}

/// Structural equality; scalars compared with the semiring tolerance.
template <Semiring S>
bool term_equal(const Term<S>& x, const Term<S>& y, double tol = 1e-9) {
  if (&x == &y) return true;
  if (x.kind() != y.kind() || x.worlds() != y.worlds()) return false;
  switch (x.kind()) {
    case NodeKind::Gen: {
      const auto& g = x.gen();
      const auto& h = y.gen();
      return g.same_shape(h) && g.in == h.in && g.out == h.out &&
             S::approx_equal(g.scalar, h.scalar, tol);
    }
    case NodeKind::Perm:
      return x.perm() == y.perm() && x.in_type() == y.in_type() &&
             x.in_labels() == y.in_labels();
    default:
      if (x.kids().size() != y.kids().size()) return false;
      if (x.kids().empty()) return x.worlds() == y.worlds();
      for (std::size_t i = 0; i < x.kids().size(); ++i)
        if (!term_equal(*x.kids()[i], *y.kids()[i], tol)) return false;
      return true;
  }
}

/// Rebuild a term with every label mapped through f into a world set of
/// size n.
template <Semiring S>
TermPtr<S> map_labels(const TermPtr<S>& t, const std::function<Label(const Label&)>& f,
                      std::size_t n) {
  auto ml = [&f](const std::vector<Label>& ls) {
    std::vector<Label> out;
    out.reserve(ls.size());
    for (const auto& l : ls) out.push_back(f(l));
    return out;
  };
  switch (t->kind()) {
    case NodeKind::Gen: {
      Generator<S> g = t->gen();
      g.in = ml(g.in);
      g.out = ml(g.out);
      return leaf<S>(std::move(g), n);
    }
    case NodeKind::Perm:
      return Term<S>::make_perm(t->in_type(), ml(t->in_labels()), t->perm(), n);
    case NodeKind::Seq: {
      std::vector<TermPtr<S>> ks;
      for (const auto& k : t->kids()) ks.push_back(map_labels<S>(k, f, n));
      return seq<S>(ks);
    }
    case NodeKind::Par: {
      std::vector<TermPtr<S>> ks;
      for (const auto& k : t->kids()) ks.push_back(map_labels<S>(k, f, n));
      return par<S>(ks, n);
    }
  }
  return t;
}

/// Visit generator leaves in pre-order (left to right, first-applied first).
template <Semiring S, class F>
void for_each_gen(const TermPtr<S>& t, F&& f) {
  if (t->kind() == NodeKind::Gen) {
    f(t->gen());
    return;
  }
  for (const auto& k : t->kids()) for_each_gen<S>(k, f);
}

/// Every port label in pre-order: for each leaf its inputs then its outputs
/// (a Perm contributes its inputs).
template <Semiring S>
void collect_labels(const TermPtr<S>& t, std::vector<Label>& out) {
  switch (t->kind()) {
    case NodeKind::Gen:
      out.insert(out.end(), t->gen().in.begin(), t->gen().in.end());
      out.insert(out.end(), t->gen().out.begin(), t->gen().out.end());
      return;
    case NodeKind::Perm:
      out.insert(out.end(), t->in_labels().begin(), t->in_labels().end());
      return;
    default:
      for (const auto& k : t->kids()) collect_labels<S>(k, out);
  }
}

// ---------------------------------------------------------------------------

template <Semiring S>
struct LabeledDiagram {
  WorldSet worlds;
  TermPtr<S> term;

  const DiagObject& in_type() const { return term->in_type(); }
  const DiagObject& out_type() const { return term->out_type(); }
  const std::vector<Label>& in_labels() const { return term->in_labels(); }
  const std::vector<Label>& out_labels() const { return term->out_labels(); }
};

template <Semiring S>
LabeledDiagram<S> make_diagram(WorldSet w, TermPtr<S> t) {
  if (t->worlds() != w.size()) throw ShapeError("term and world set sizes differ");
  return {std::move(w), std::move(t)};
}

template <Semiring S>
bool diagram_equal(const LabeledDiagram<S>& a, const LabeledDiagram<S>& b, double tol = 1e-9) {
  return a.worlds.size() == b.worlds.size() && term_equal(*a.term, *b.term, tol);
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::vector<std::size_t> path;  // child indices from the root
  std::string constraint;         // "disjointness", "union", "gluing", ...
  std::string message;

  std::string str() const;
};

namespace detail {

inline std::string path_str(const std::vector<std::size_t>& p) {
  std::string s = "/";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "/" : "") + std::to_string(p[i]);
  return s;
}

template <Semiring S>
void validate_gen(const Generator<S>& g, const WorldSet& W, const std::vector<std::size_t>& path,
                  std::vector<Violation>& out) {
  auto bad = [&](const std::string& c, const std::string& m) {
    out.push_back({path, c, std::string(gen_name(g.kind)) + ": " + m});
  };
  auto eq = [&](const Label& x, const Label& y, const std::string& what) {
    if (x != y) bad("label-equality", what + " (" + W.show(x) + " vs " + W.show(y) + ")");
  };
  auto disjoint_union = [&](const std::vector<Label>& parts, const Label& whole,
                            const std::string& side) {
    Label acc(W.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if ((acc & parts[i]).any())
        bad("disjointness", side + " branch " + std::to_string(i) + " " + W.show(parts[i]) +
                                " overlaps earlier branches " + W.show(acc));
      acc |= parts[i];
    }
    if (acc != whole)
      bad("union", "label " + W.show(whole) + " is not the union " + W.show(acc) +
                       " of its branches");
  };
  switch (g.kind) {
    case GenKind::Id:
    case GenKind::Scalar:
      eq(g.in[0], g.out[0], "input and output labels differ");
      break;
    case GenKind::Swap:
      eq(g.in[0], g.out[1], "first input must reappear as second output");
      eq(g.in[1], g.out[0], "second input must reappear as first output");
      break;
    case GenKind::Cup:
      eq(g.in[0], g.in[1], "both cup legs must share one label");
      break;
    case GenKind::Cap:
      eq(g.out[0], g.out[1], "both cap legs must share one label");
      break;
    case GenKind::Plus:
      disjoint_union(g.in, g.out[0], "input");
      break;
    case GenKind::PlusDag:
      disjoint_union(g.out, g.in[0], "output");
      break;
    case GenKind::Tensor:
      eq(g.in[0], g.in[1], "tensor inputs must share one label");
      eq(g.in[0], g.out[0], "tensor output must share the input label");
      break;
    case GenKind::TensorDag:
      eq(g.out[0], g.out[1], "tensor outputs must share one label");
      eq(g.in[0], g.out[0], "tensor input must share the output label");
      break;
    case GenKind::Unit:
    case GenKind::UnitDag:
      break;
    case GenKind::Contraction:
      disjoint_union(g.in, g.out[0], "input");
      break;
    case GenKind::ContractionDag:
      disjoint_union(g.out, g.in[0], "output");
      break;
  }
}

template <Semiring S>
void validate_rec(const TermPtr<S>& t, const WorldSet& W, std::vector<std::size_t>& path,
                  std::vector<Violation>& out) {
  switch (t->kind()) {
    case NodeKind::Gen:
      validate_gen<S>(t->gen(), W, path, out);
      return;
    case NodeKind::Perm:
      return;
    case NodeKind::Par:
      for (std::size_t i = 0; i < t->kids().size(); ++i) {
        path.push_back(i);
        validate_rec<S>(t->kids()[i], W, path, out);
        path.pop_back();
      }
      return;
    case NodeKind::Seq:
      for (std::size_t i = 0; i < t->kids().size(); ++i) {
        path.push_back(i);
        validate_rec<S>(t->kids()[i], W, path, out);
        if (i + 1 < t->kids().size()) {
          const auto& o = t->kids()[i]->out_labels();
          const auto& n = t->kids()[i + 1]->in_labels();
          for (std::size_t w = 0; w < o.size(); ++w)
            if (o[w] != n[w])
              out.push_back({path, "gluing",
                             "wire " + std::to_string(w) + " leaves with " + W.show(o[w]) +
                                 " but enters the next stage with " + W.show(n[w])});
        }
        path.pop_back();
      }
      return;
  }
}

}  // namespace detail

/// Empty result means the diagram is a morphism of ManyWorlds_W.
template <Semiring S>
std::vector<Violation> validate(const LabeledDiagram<S>& d) {
  std::vector<Violation> out;
  if (d.term->worlds() != d.worlds.size()) {
    out.push_back({{}, "label-size", "term labels do not match the world set size"});
    return out;
  }
  std::vector<std::size_t> path;
  detail::validate_rec<S>(d.term, d.worlds, path, out);
  return out;
}

template <Semiring S>
bool is_valid(const LabeledDiagram<S>& d) {
  return validate(d).empty();
}

/// Throws Error listing the violations.
template <Semiring S>
void require_valid(const LabeledDiagram<S>& d) {
  auto v = validate(d);
  if (v.empty()) return;
  std::string msg = "invalid diagram:";
  for (const auto& x : v) msg += "\n  " + x.str();
  throw Error(msg);
}

// ---------------------------------------------------------------------------
// Fixed-W composition

template <Semiring S>
LabeledDiagram<S> compose_seq_fixed(const LabeledDiagram<S>& f, const LabeledDiagram<S>& g) {
  if (f.worlds.size() != g.worlds.size()) throw ShapeError("world sets differ");
  if (!(f.out_type() == g.in_type()))
    throw ShapeError("boundary type mismatch: " + f.out_type().str() + " vs " +
                     g.in_type().str());
  for (std::size_t i = 0; i < f.out_labels().size(); ++i)
    if (f.out_labels()[i] != g.in_labels()[i])
      throw ShapeError("boundary label mismatch on wire " + std::to_string(i) + ": " +
                       f.worlds.show(f.out_labels()[i]) + " vs " +
                       g.worlds.show(g.in_labels()[i]));
  return {f.worlds, seq<S>({f.term, g.term})};
}

template <Semiring S>
LabeledDiagram<S> compose_par_fixed(const LabeledDiagram<S>& f, const LabeledDiagram<S>& g) {
  if (f.worlds.size() != g.worlds.size()) throw ShapeError("world sets differ");
  return {f.worlds, par<S>({f.term, g.term}, f.worlds.size())};
}

// ---------------------------------------------------------------------------
// World-agnostic diagrams

template <Semiring S>
LabeledDiagram<S> canonicalize(const LabeledDiagram<S>& d) {
  std::vector<Label> all;
  collect_labels<S>(d.term, all);
  std::vector<Label> distinct;
  std::set<Label> seen;
  for (auto& l : all)
    if (seen.insert(l).second) distinct.push_back(l);
  auto order = canonical_order(d.worlds.size(), distinct);
  std::vector<std::size_t> old_to_new(order.size());
  std::vector<std::string> names(order.size());
  bool trivial = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    old_to_new[order[k]] = k;
    names[k] = d.worlds.name(order[k]);
    trivial = trivial && order[k] == k;
  }
  if (trivial) return d;
  const std::size_t n = order.size();
  auto t = map_labels<S>(
      d.term, [&](const Label& l) { return remap_label(l, old_to_new, n); }, n);
  return {WorldSet(std::move(names)), t};
}

/// A labeled diagram kept in canonical world naming.
template <Semiring S>
class AgnosticDiagram {
 public:
  AgnosticDiagram() = default;
  explicit AgnosticDiagram(const LabeledDiagram<S>& d) : d_(canonicalize(d)) {}

  const LabeledDiagram<S>& diagram() const { return d_; }
  const WorldSet& worlds() const { return d_.worlds; }
  const TermPtr<S>& term() const { return d_.term; }
  const DiagObject& in_type() const { return d_.in_type(); }
  const DiagObject& out_type() const { return d_.out_type(); }

  operator const LabeledDiagram<S>&() const { return d_; }

 private:
  LabeledDiagram<S> d_;
};

template <Semiring S>
AgnosticDiagram<S> compose_par_agnostic(const LabeledDiagram<S>& f, const LabeledDiagram<S>& g) {
  auto prod = product(f.worlds, g.worlds);
  const std::size_t n = prod.set.size();
  auto tf = map_labels<S>(f.term, [&](const Label& l) { return prod.lift_left(l); }, n);
  auto tg = map_labels<S>(g.term, [&](const Label& l) { return prod.lift_right(l); }, n);
  return AgnosticDiagram<S>(LabeledDiagram<S>{prod.set, par<S>({tf, tg}, n)});
}

/// Fold of compose_par_agnostic; the empty list gives the empty diagram over
/// one world.
template <Semiring S>
AgnosticDiagram<S> par_agnostic(const std::vector<LabeledDiagram<S>>& ds) {
  if (ds.empty()) return AgnosticDiagram<S>(LabeledDiagram<S>{WorldSet(1), Term<S>::empty(1)});
  AgnosticDiagram<S> acc(ds[0]);
  for (std::size_t i = 1; i < ds.size(); ++i) acc = compose_par_agnostic<S>(acc, ds[i]);
  return acc;
}

/// Restrict-and-glue: keeps the pairs of W x V on which every glued wire is
/// enabled on both sides or on neither.
template <Semiring S>
AgnosticDiagram<S> compose_seq_agnostic(const LabeledDiagram<S>& f, const LabeledDiagram<S>& g) {
  if (!(f.out_type() == g.in_type()))
    throw ShapeError("boundary type mismatch: " + f.out_type().str() + " vs " +
                     g.in_type().str());
  auto z = matching_pairs(f.worlds.size(), g.worlds.size(), f.out_labels(), g.in_labels());
  const std::size_t n = z.size();
  std::vector<std::vector<std::size_t>> from_f(f.worlds.size()), from_g(g.worlds.size());
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    from_f[z[k].first].push_back(k);
    from_g[z[k].second].push_back(k);
    names.push_back("(" + f.worlds.name(z[k].first) + "," + g.worlds.name(z[k].second) + ")");
  }
  auto lift = [n](const std::vector<std::vector<std::size_t>>& from) {
    return [&from, n](const Label& l) {
      Label out(n);
      for (auto i = l.find_first(); i != Label::npos; i = l.find_next(i))
        for (auto k : from[i]) out.set(k);
      return out;
    };
  };
  auto tf = map_labels<S>(f.term, lift(from_f), n);
  auto tg = map_labels<S>(g.term, lift(from_g), n);
  return AgnosticDiagram<S>(LabeledDiagram<S>{WorldSet(std::move(names)), seq<S>({tf, tg})});
}

/// Fold of compose_seq_agnostic in application order.
template <Semiring S>
AgnosticDiagram<S> seq_agnostic(const std::vector<LabeledDiagram<S>>& ds) {
  if (ds.empty()) throw ShapeError("empty composition");
  AgnosticDiagram<S> acc(ds[0]);
  for (std::size_t i = 1; i < ds.size(); ++i) acc = compose_seq_agnostic<S>(acc, ds[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Canonical labelings of single generators

/// id, cup, cap, scalar, tensor(s), unit(s): W = {a, star}, every port {a}.
/// swap: W = {a, b, c, star} with w = {a, c}, v = {b, c}.
/// plus(s): W = {a, b, star} with w = {a}, v = {b}.
/// contraction(s) of arity n: W = {a1..an, star} with w_i = {a_i}.
template <Semiring S>
LabeledDiagram<S> canonical_generator(GenKind k, const WireType& a, const WireType& b = {},
                                      std::size_t arity = 0,
                                      const typename S::T& s = S::one()) {
  switch (k) {
    case GenKind::Swap: {
      WorldSet W({"a", "b", "c", "star"});
      return {W, leaf<S>(gen::swap<S>(a, b, W.label({0, 2}), W.label({1, 2})), 4)};
    }
    case GenKind::Plus:
    case GenKind::PlusDag: {
      WorldSet W({"a", "b", "star"});
      auto g = gen::plus<S>(a, b, W.label({0}), W.label({1}));
      if (k == GenKind::PlusDag) g = gen::mirrored<S>(g);
      return {W, leaf<S>(g, 3)};
    }
    case GenKind::Contraction:
    case GenKind::ContractionDag: {
      std::vector<std::string> names;
      for (std::size_t i = 0; i < arity; ++i) names.push_back("a" + std::to_string(i + 1));
      names.push_back("star");
      WorldSet W(names);
      std::vector<Label> ws;
      for (std::size_t i = 0; i < arity; ++i) ws.push_back(W.label({i}));
      auto g = gen::contraction<S>(a, ws, W.size());
      if (k == GenKind::ContractionDag) g = gen::mirrored<S>(g);
      return {W, leaf<S>(g, W.size())};
    }
    default:
      break;
  }
  WorldSet W({"a", "star"});
  Label w = W.label({0});
  Generator<S> g;
  switch (k) {
    case GenKind::Id:
      g = gen::id<S>(a, w);
      break;
    case GenKind::Cup:
      g = gen::cup<S>(a, w);
      break;
    case GenKind::Cap:
      g = gen::cap<S>(a, w);
      break;
    case GenKind::Scalar:
      g = gen::scalar<S>(a, s, w);
      break;
    case GenKind::Tensor:
      g = gen::tensor<S>(a, b, w);
      break;
    case GenKind::TensorDag:
      g = gen::tensor_dag<S>(a, b, w);
      break;
    case GenKind::Unit:
      g = gen::unit<S>(w);
      break;
    case GenKind::UnitDag:
      g = gen::unit_dag<S>(w);
      break;
    default:
      throw ShapeError("no canonical labeling");
  }
  return {W, leaf<S>(g, 2)};
}

/// Identity on an object with the canonical labeling extended wire-wise:
/// the agnostic parallel composition of canonical identities.
template <Semiring S>
AgnosticDiagram<S> canonical_identity(const DiagObject& obj) {
  std::vector<LabeledDiagram<S>> ids;
  for (const auto& t : obj) ids.push_back(canonical_generator<S>(GenKind::Id, t));
  return par_agnostic<S>(ids);
}

}  // namespace mw
