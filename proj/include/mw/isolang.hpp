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

// A first-order reversible language: values, linear combinations, let over
// iso application, and isos given as clause lists. Parsing and typing are
// semiring independent (scalars stay as text); translation to diagrams is
// templated.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mw/builder.hpp"
#include "mw/diagram.hpp"
#include "mw/semantics.hpp"

namespace mw::iso {

struct Pos {
  std::size_t line = 1, col = 1;
};

/// Typing or well-formedness failure, positioned like ParseError.
class IsoError : public ParseError {
 public:
  IsoError(const std::string& msg, Pos p) : ParseError(msg, p.line, p.col) {}
};

enum class TermKind { Unit, Var, Inl, Inr, Pair, Scalar, Sum, App, Let, Annot };

struct Term;
using TermP = std::shared_ptr<const Term>;

struct Term {
  TermKind kind = TermKind::Unit;
  Pos pos;
  std::string name;            // Var; App: the iso
  std::string scalar;          // Scalar: source text between brackets
  std::vector<TermP> kids;     // Let: pattern, bound term, body
  std::optional<WireType> type;  // Annot
};

struct Clause {
  TermP pattern;
  TermP body;
  Pos pos;
};

struct IsoDef {
  std::string name;
  WireType dom, cod;
  std::vector<Clause> clauses;
  Pos pos;
};

struct Program {
  std::vector<IsoDef> isos;
  std::string main;  // empty: the last iso

  const IsoDef* find(std::string_view name) const;
  const IsoDef& entry() const;
};

// -- syntax -------------------------------------------------------------------

Program parse_program(std::string_view src);
TermP parse_term(std::string_view src);
WireType parse_iso_type(std::string_view src);

std::string print(const Term& t);
std::string print(const IsoDef& d);
std::string print(const Program& p);
std::string print_type(const WireType& t);

// -- basis values -------------------------------------------------------------

/// Closed values in basis order of the type: inl before inr, pairs row-major.
std::vector<TermP> basis_values(const WireType& t);

/// Index of a closed value in basis_values(t); throws IsoError if it is not
/// a basis value of t.
std::size_t basis_index(const Term& v, const WireType& t);

bool pattern_matches(const Term& pattern, const Term& value);
bool unifiable(const Term& p, const Term& q);

// -- typing -------------------------------------------------------------------

enum class Rule { Var, Unit, Scalar, Inl, Inr, Pair, Sum, Let, Iso, App };

std::string_view rule_name(Rule r);

using Context = std::vector<std::pair<std::string, WireType>>;

struct Derivation {
  Rule rule = Rule::Unit;
  Context ctx;  // exactly the variables the subject uses, in input order
  TermP subject;
  WireType type;             // for Iso: the domain
  std::optional<WireType> cod;  // Iso only
  const IsoDef* iso = nullptr;  // Iso and App
  std::vector<Derivation> kids;
  // Iso: pattern and body derivation per clause, alternating.
  // Let: pattern, bound term, body. App: the iso, then the argument.

  std::string str(std::size_t indent = 0) const;
};

/// Typecheck one iso (patterns, linearity, exhaustivity and non-overlap).
Derivation check_iso(const Program& p, const IsoDef& d);

/// Typecheck every iso of the program in order; returns the entry's.
Derivation check_program(const Program& p);

// -- translation --------------------------------------------------------------

namespace detail {

template <Semiring S>
LabeledDiagram<S> one_world(const Generator<S>& g) {
  WorldSet W({"a"});
  Generator<S> h = g;
  for (auto& l : h.in) l = W.full_label();
  for (auto& l : h.out) l = W.full_label();
  return {W, leaf<S>(h, 1)};
}

/// Identity on a list of wires over one world.
template <Semiring S>
LabeledDiagram<S> one_world_identity(const std::vector<WireType>& ts) {
  WorldSet W({"a"});
  std::vector<Label> ls(ts.size(), W.full_label());
  return {W, identity_term<S>(DiagObject(ts), ls, 1)};
}

/// Same diagram, inputs listed in `want` order instead of `have`.
template <Semiring S>
LabeledDiagram<S> reorder_inputs(const LabeledDiagram<S>& d, const std::vector<std::string>& have,
                                 const std::vector<std::string>& want) {
  if (have == want) return d;
  DiagramBuilder<S> b(d.worlds.size());
  std::map<std::string, std::size_t> wire;
  for (const auto& v : want) {
    auto k = static_cast<std::size_t>(std::find(have.begin(), have.end(), v) - have.begin());
    if (k >= have.size()) throw Error("translation: lost variable " + v);
    wire[v] = b.input(d.in_type()[k], d.in_labels()[k]);
  }
  std::vector<std::size_t> ins;
  for (const auto& v : have) ins.push_back(wire.at(v));
  return b.diagram(d.worlds, b.embed(d, ins));
}

/// Append generators after the single output of d, in d's world set.
template <Semiring S>
LabeledDiagram<S> then(const LabeledDiagram<S>& d,
                       const std::function<std::size_t(DiagramBuilder<S>&, std::size_t)>& f) {
  DiagramBuilder<S> b(d.worlds.size());
  std::vector<std::size_t> ins;
  for (std::size_t i = 0; i < d.in_type().size(); ++i)
    ins.push_back(b.input(d.in_type()[i], d.in_labels()[i]));
  auto outs = b.embed(d, ins);
  return b.diagram(d.worlds, {f(b, outs.at(0))});
}

/// Sum over disjoint world sets: each input is spread over the parts by a
/// daggered contraction, the outputs are merged by a contraction.
template <Semiring S>
LabeledDiagram<S> disjoint_sum(const std::vector<LabeledDiagram<S>>& ds) {
  if (ds.size() == 1) return ds[0];
  std::vector<std::string> names;
  std::vector<std::size_t> offset;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    offset.push_back(names.size());
    for (const auto& nm : ds[i].worlds.names()) names.push_back(std::to_string(i) + "." + nm);
  }
  WorldSet W(names);
  const std::size_t n = names.size();
  auto lift = [n](std::size_t off) {
    return [n, off](const Label& l) {
      Label o(n);
      for (auto i = l.find_first(); i != Label::npos; i = l.find_next(i)) o.set(off + i);
      return o;
    };
  };
  std::vector<LabeledDiagram<S>> lifted;
  for (std::size_t i = 0; i < ds.size(); ++i)
    lifted.push_back({W, map_labels<S>(ds[i].term, lift(offset[i]), n)});
  DiagramBuilder<S> b(n);
  const auto& it = ds.at(0).in_type();
  std::vector<std::vector<std::size_t>> branch(ds.size());
  for (std::size_t k = 0; k < it.size(); ++k) {
    std::vector<Label> ws;
    Label whole(n);
    for (const auto& l : lifted) {
      ws.push_back(l.in_labels()[k]);
      whole |= ws.back();
    }
    auto x = b.input(it[k], whole);
    auto parts = b.contraction_dag(x, ws);
    for (std::size_t i = 0; i < ds.size(); ++i) branch[i].push_back(parts[i]);
  }
  std::vector<std::size_t> outs;
  for (std::size_t i = 0; i < ds.size(); ++i) outs.push_back(b.embed(lifted[i], branch[i]).at(0));
  return b.diagram(W, {b.contraction(outs)});
}

/// Destructure a value pattern: its type in, one wire per variable out.
template <Semiring S>
LabeledDiagram<S> match(const Derivation& pat) {
  const auto& t = pat.type;
  switch (pat.rule) {
    case Rule::Var:
      return one_world_identity<S>({t});
    case Rule::Unit:
      return one_world<S>(gen::unit_dag<S>(Label(1)));
    case Rule::Pair: {
      auto split = one_world<S>(gen::tensor_dag<S>(t.left(), t.right(), Label(1)));
      auto parts = compose_par_agnostic<S>(match<S>(pat.kids[0]), match<S>(pat.kids[1]));
      return compose_seq_agnostic<S>(split, parts).diagram();
    }
    case Rule::Inl:
    case Rule::Inr: {
      const bool left = pat.rule == Rule::Inl;
      WorldSet W({"a"});
      DiagramBuilder<S> b(1);
      auto x = b.input(t, W.full_label());
      auto [l, r] = b.plus_dag(x, left ? W.full_label() : W.empty_label(),
                               left ? W.empty_label() : W.full_label());
      b.contraction_dag(left ? r : l, {});
      auto proj = b.diagram(W, {left ? l : r});
      return compose_seq_agnostic<S>(proj, match<S>(pat.kids[0])).diagram();
    }
    default:
      throw Error("translation: not a value pattern");
  }
}

}  // namespace detail

/// A translated term: inputs follow `vars`.
template <Semiring S>
struct Translated {
  LabeledDiagram<S> diagram;
  std::vector<std::string> vars;
};

template <Semiring S>
class Translator {
 public:
  explicit Translator(const Program& p) : prog_(p) {}

  /// One input of the domain type, one output of the codomain type.
  const LabeledDiagram<S>& iso(const IsoDef& d) {
    auto it = cache_.find(d.name);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(d.name, iso(check_iso(prog_, d))).first->second;
  }

  LabeledDiagram<S> iso(const Derivation& der) {
    std::vector<LabeledDiagram<S>> clauses;
    for (std::size_t i = 0; i + 1 < der.kids.size(); i += 2) {
      const auto& pat = der.kids[i];
      auto body = term(der.kids[i + 1]);
      std::vector<std::string> order;
      for (const auto& [x, _] : pat.ctx) order.push_back(x);
      auto b = detail::reorder_inputs<S>(body.diagram, body.vars, order);
      clauses.push_back(compose_seq_agnostic<S>(detail::match<S>(pat), b).diagram());
    }
    return detail::disjoint_sum<S>(clauses);
  }

  Translated<S> term(const Derivation& der) {
    using detail::then;
    const auto& t = der.type;
    switch (der.rule) {
      case Rule::Var:
        return {detail::one_world_identity<S>({t}), {der.ctx.at(0).first}};
      case Rule::Unit:
        return {detail::one_world<S>(gen::unit<S>(Label(1))), {}};
      case Rule::Scalar: {
        auto k = term(der.kids[0]);
        const auto s = parse_scalar_at(*der.subject);
        k.diagram = then<S>(k.diagram, [&](DiagramBuilder<S>& b, std::size_t x) { return b.scalar(x, s); });
        return k;
      }
      case Rule::Inl:
      case Rule::Inr: {
        auto k = term(der.kids[0]);
        const bool left = der.rule == Rule::Inl;
        k.diagram = then<S>(k.diagram, [&](DiagramBuilder<S>& b, std::size_t x) {
          auto z = b.contraction0(left ? t.right() : t.left());
          return left ? b.plus(x, z) : b.plus(z, x);
        });
        return k;
      }
      case Rule::Pair: {
        auto l = term(der.kids[0]), r = term(der.kids[1]);
        auto both = compose_par_agnostic<S>(l.diagram, r.diagram).diagram();
        DiagramBuilder<S> b(both.worlds.size());
        std::vector<std::size_t> ins;
        for (std::size_t i = 0; i < both.in_type().size(); ++i)
          ins.push_back(b.input(both.in_type()[i], both.in_labels()[i]));
        auto o = b.embed(both, ins);
        auto vars = l.vars;
        vars.insert(vars.end(), r.vars.begin(), r.vars.end());
        return {b.diagram(both.worlds, {b.tensor(o.at(0), o.at(1))}), vars};
      }
      case Rule::Sum: {
        auto l = term(der.kids[0]), r = term(der.kids[1]);
        auto rd = detail::reorder_inputs<S>(r.diagram, r.vars, l.vars);
        return {detail::disjoint_sum<S>({l.diagram, rd}), l.vars};
      }
      case Rule::App: {
        auto arg = term(der.kids[1]);
        return {compose_seq_agnostic<S>(arg.diagram, iso(*der.iso)).diagram(), arg.vars};
      }
      case Rule::Let: {
        const auto& pat = der.kids[0];
        auto bound = term(der.kids[1]);
        auto body = term(der.kids[2]);
        std::vector<std::string> xs;
        for (const auto& [x, _] : pat.ctx) xs.push_back(x);
        // body variables not bound by the pattern, in body order
        std::vector<std::string> rest;
        std::vector<WireType> rest_t;
        for (const auto& [x, ty] : der.kids[2].ctx)
          if (std::find(xs.begin(), xs.end(), x) == xs.end()) {
            rest.push_back(x);
            rest_t.push_back(ty);
          }
        auto left = compose_seq_agnostic<S>(bound.diagram, detail::match<S>(pat)).diagram();
        if (!rest.empty())
          left = compose_par_agnostic<S>(left, detail::one_world_identity<S>(rest_t)).diagram();
        auto order = xs;
        order.insert(order.end(), rest.begin(), rest.end());
        auto b = detail::reorder_inputs<S>(body.diagram, body.vars, order);
        auto vars = bound.vars;
        vars.insert(vars.end(), rest.begin(), rest.end());
        return {compose_seq_agnostic<S>(left, b).diagram(), vars};
      }
      case Rule::Iso:
        break;
    }
    throw Error("translation: unexpected derivation node");
  }

 private:
  typename S::T parse_scalar_at(const Term& t) {
    try {
      return parse_scalar<S>(t.scalar);
    } catch (const ParseError& e) {
      throw IsoError(std::string("scalar [") + t.scalar + "] over " + std::string(S::name()) +
                         ": " + e.what(),
                     t.pos);
    }
  }

  const Program& prog_;
  std::map<std::string, LabeledDiagram<S>> cache_;
};

/// Diagram of the program's entry iso.
template <Semiring S>
LabeledDiagram<S> compile(const Program& p) {
  check_program(p);
  Translator<S> tr(p);
  return tr.iso(p.entry());
}

template <Semiring S>
LabeledDiagram<S> compile(const Program& p, const IsoDef& d) {
  Translator<S> tr(p);
  return tr.iso(d);
}

}  // namespace mw::iso
