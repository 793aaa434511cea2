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

// Rewrite rules on labeled diagrams. A rule acts on the generator at a
// pre-order position plus string bindings; fixed-W rules keep the world set,
// the others rename, remove, split or merge worlds. Every rule ships a
// random instance generator used for its self-test.

#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mw/net.hpp"
#include "mw/semantics.hpp"

namespace mw {

using Bindings = std::map<std::string, std::string>;

enum class WorldEffect { None, Rename, Annihilate, Split, Merge };

inline std::string_view effect_name(WorldEffect e) {
  switch (e) {
    case WorldEffect::None:
      return "none";
    case WorldEffect::Rename:
      return "rename";
    case WorldEffect::Annihilate:
      return "annihilate";
    case WorldEffect::Split:
      return "split";
    case WorldEffect::Merge:
      return "merge";
  }
  return "?";
}

template <Semiring S>
struct RwState {
  WorldSet worlds;
  Net<S> net;
};

template <Semiring S>
struct RuleInstance {
  LabeledDiagram<S> diagram;
  std::size_t position = 0;
  Bindings bindings;
};

template <Semiring S>
struct RewriteRule {
  std::string name;
  std::string provenance;
  std::string description;
  WorldEffect effect = WorldEffect::None;
  std::function<void(RwState<S>&, std::size_t, const Bindings&)> rewrite;
  std::function<RuleInstance<S>(std::mt19937_64&)> sample;

  /// All or nothing; the net is left in staging order.
  void apply_state(RwState<S>& st, std::size_t pos, const Bindings& b) const {
    RwState<S> tmp = st;
    rewrite(tmp, pos, b);
    tmp.net.canonicalize();
    st = std::move(tmp);
  }

  LabeledDiagram<S> apply(const LabeledDiagram<S>& d, std::size_t pos, const Bindings& b) const {
    RwState<S> st{d.worlds, Net<S>::from_term(d.term)};
    apply_state(st, pos, b);
    LabeledDiagram<S> out{st.worlds, st.net.to_term()};
    auto v = validate(out);
    if (!v.empty()) throw RewriteError(name + ": result is not a valid diagram: " + v[0].str());
    return out;
  }
};

// ---------------------------------------------------------------------------

namespace rw {

template <Semiring S>
typename Net<S>::Op& op_at(RwState<S>& st, std::size_t pos, const std::string& rule) {
  if (pos >= st.net.ops.size())
    throw RewriteError(rule + ": no generator at position " + std::to_string(pos));
  return st.net.ops[pos];
}

template <Semiring S>
typename Net<S>::Op& op_at(RwState<S>& st, std::size_t pos, GenKind k, const std::string& rule) {
  auto& op = op_at(st, pos, rule);
  if (op.g.kind != k)
    throw RewriteError(rule + ": expected " + std::string(gen_name(k)) + " at position " +
                       std::to_string(pos) + ", found " + std::string(gen_name(op.g.kind)));
  return op;
}

inline std::optional<std::string> get(const Bindings& b, const std::string& key) {
  auto it = b.find(key);
  if (it == b.end()) return std::nullopt;
  return it->second;
}

inline std::size_t get_index(const Bindings& b, const std::string& key, std::size_t dflt) {
  auto v = get(b, key);
  if (!v) return dflt;
  try {
    std::size_t used = 0;
    auto x = std::stoul(*v, &used);
    if (used != v->size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw RewriteError("binding " + key + " is not an index: '" + *v + "'");
  }
}

/// Whitespace separated world names; "#k" names world k.
inline std::vector<std::size_t> parse_worlds(const WorldSet& W, const std::string& text) {
  std::istringstream in(text);
  std::vector<std::size_t> out;
  std::string tok;
  while (in >> tok) {
    std::size_t i = W.size();
    if (tok.size() > 1 && tok[0] == '#') {
      try {
        i = std::stoul(tok.substr(1));
      } catch (const std::exception&) {
      }
    } else {
      i = W.find(tok);
    }
    if (i >= W.size()) throw RewriteError("unknown world '" + tok + "'");
    out.push_back(i);
  }
  return out;
}

inline Label worlds_label(const WorldSet& W, const std::string& text) {
  Label l = W.empty_label();
  for (auto i : parse_worlds(W, text)) l.set(i);
  return l;
}

/// "a b | c | d e": parts separated by '|'; the empty string is zero parts.
inline std::vector<Label> parse_parts(const WorldSet& W, const std::string& text) {
  std::vector<Label> out;
  if (text.find_first_not_of(" \t") == std::string::npos) return out;
  std::size_t start = 0;
  for (;;) {
    auto bar = text.find('|', start);
    out.push_back(worlds_label(W, text.substr(start, bar - start)));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

inline std::string world_list(const WorldSet& W, const Label& l) {
  std::string s;
  for (auto i = l.find_first(); i != Label::npos; i = l.find_next(i)) {
    if (!s.empty()) s += ' ';
    s += W.name(i);
  }
  return s;
}

inline std::string parts_string(const WorldSet& W, const std::vector<Label>& parts) {
  std::string s;
  for (std::size_t j = 0; j < parts.size(); ++j) s += (j ? " | " : "") + world_list(W, parts[j]);
  return s;
}

template <Semiring S>
std::size_t world_binding(const RwState<S>& st, const Bindings& b, const std::string& rule,
                          const std::string& key = "world") {
  auto v = get(b, key);
  if (!v) throw RewriteError(rule + ": missing binding '" + key + "'");
  auto ws = parse_worlds(st.worlds, *v);
  if (ws.size() != 1) throw RewriteError(rule + ": binding '" + key + "' must name one world");
  return ws[0];
}

template <Semiring S>
typename S::T scalar_binding(const Bindings& b, const std::string& key, const std::string& rule) {
  auto v = get(b, key);
  if (!v) throw RewriteError(rule + ": missing binding '" + key + "'");
  return parse_scalar<S>(*v);
}

template <Semiring S>
void remove_world(RwState<S>& st, std::size_t a) {
  std::vector<std::size_t> keep;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < st.worlds.size(); ++i)
    if (i != a) {
      keep.push_back(i);
      names.push_back(st.worlds.name(i));
    }
  st.net.relabel([&](const Label& l) { return restrict_label(l, keep); }, keep.size());
  st.worlds = WorldSet(std::move(names));
}

/// A fresh last world a' belonging to exactly the labels that contain a.
template <Semiring S>
std::size_t add_twin(RwState<S>& st, std::size_t a, std::string name = {}) {
  if (name.empty()) name = st.worlds.name(a) + "'";
  while (st.worlds.find(name) < st.worlds.size()) name += "'";
  auto names = st.worlds.names();
  names.push_back(name);
  const std::size_t n = names.size();
  st.net.relabel(
      [&](const Label& l) {
        Label o = l;
        o.resize(n);
        if (l[a]) o.set(n - 1);
        return o;
      },
      n);
  st.worlds = WorldSet(std::move(names));
  return n - 1;
}

template <Semiring S>
Generator<S> restricted(Generator<S> g, const Label& u) {
  for (auto& l : g.in) l &= u;
  for (auto& l : g.out) l &= u;
  return g;
}

template <Semiring S>
Label label_union(const Generator<S>& g, std::size_t n) {
  Label u(n);
  for (const auto& l : g.in) u |= l;
  for (const auto& l : g.out) u |= l;
  return u;
}

template <Semiring S>
std::size_t consumer_op(const Net<S>& net, std::size_t w, GenKind k, std::size_t port,
                        const std::string& rule) {
  auto e = net.consumer(w);
  if (e.op == Net<S>::npos || net.ops[e.op].g.kind != k || e.port != port)
    throw RewriteError(rule + ": the wire does not feed port " + std::to_string(port) + " of a " +
                       std::string(gen_name(k)));
  return e.op;
}

// -- random instances ------------------------------------------------------

inline WireType small_type(std::mt19937_64& rng) {
  const WireType one, two = qubit_type();
  switch (rng() % 4) {
    case 0:
      return one;
    case 1:
    case 2:
      return two;
    default:
      return WireType::sum(two, one);
  }
}

inline Label random_label(std::mt19937_64& rng, std::size_t n) {
  Label l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = rng() & 1;
  return l;
}

inline Label random_nonempty(std::mt19937_64& rng, std::size_t n) {
  Label l = random_label(rng, n);
  l.set(rng() % n);
  return l;
}

/// m pairwise disjoint labels; each world joins one of them or none.
inline std::vector<Label> random_disjoint(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::vector<Label> ls(m, Label(n));
  for (std::size_t i = 0; i < n; ++i) {
    auto r = rng() % (m + 1);
    if (r < m) ls[r].set(i);
  }
  return ls;
}

inline std::size_t pick_set(std::mt19937_64& rng, const Label& l) {
  std::vector<std::size_t> xs;
  for (auto i = l.find_first(); i != Label::npos; i = l.find_next(i)) xs.push_back(i);
  return xs.at(rng() % xs.size());
}

template <Semiring S>
Generator<S> random_generator(std::mt19937_64& rng, std::size_t n) {
  auto t = small_type(rng), t2 = small_type(rng);
  switch (rng() % 13) {
    case 0:
      return gen::id<S>(t, random_label(rng, n));
    case 1:
      return gen::scalar<S>(t, S::random(rng), random_label(rng, n));
    case 2:
      return gen::swap<S>(t, t2, random_label(rng, n), random_label(rng, n));
    case 3:
      return gen::cup<S>(t, random_label(rng, n));
    case 4:
      return gen::cap<S>(t, random_label(rng, n));
    case 5: {
      auto ws = random_disjoint(rng, n, 2);
      return gen::plus<S>(t, t2, ws[0], ws[1]);
    }
    case 6: {
      auto ws = random_disjoint(rng, n, 2);
      return gen::plus_dag<S>(t, t2, ws[0], ws[1]);
    }
    case 7:
      return gen::tensor<S>(t, t2, random_label(rng, n));
    case 8:
      return gen::tensor_dag<S>(t, t2, random_label(rng, n));
    case 9:
      return gen::unit<S>(random_label(rng, n));
    case 10:
      return gen::unit_dag<S>(random_label(rng, n));
    case 11:
      return gen::contraction<S>(t, random_disjoint(rng, n, rng() % 4), n);
    default:
      return gen::contraction_dag<S>(t, random_disjoint(rng, n, rng() % 4), n);
  }
}

template <Semiring S>
struct Sketch {
  WorldSet worlds;
  Net<S> net;
  std::size_t target = 0;
  Bindings bindings;

  explicit Sketch(std::size_t n) : worlds(default_names(n)), net(n) {}

  static std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back("w" + std::to_string(i));
    return v;
  }

  std::size_t n() const { return worlds.size(); }

  /// Inputs for every port of g, the op, its outputs as net outputs.
  std::size_t lone(const Generator<S>& g) {
    std::vector<std::size_t> ins;
    const auto it = g.in_type();
    for (std::size_t i = 0; i < it.size(); ++i) ins.push_back(net.add_input(it[i], g.in[i]));
    auto op = net.add_op(g, ins);
    for (auto w : net.ops[op].outs) net.outputs.push_back(w);
    return op;
  }

  /// Pass w through a random scalar half of the time.
  std::size_t maybe_scale(std::mt19937_64& rng, std::size_t w) {
    if (rng() % 2) return w;
    return net.ops[net.add_op(gen::scalar<S>(net.type(w), S::random(rng), net.label(w)), {w})]
        .outs[0];
  }

  RuleInstance<S> finish(std::mt19937_64& rng, bool spectator = true) {
    if (spectator && rng() % 2) {
      // an unrelated wire next to the pattern
      auto x = net.add_input(small_type(rng), random_label(rng, n()));
      auto y = net.ops[net.add_op(gen::scalar<S>(net.type(x), S::random(rng), net.label(x)), {x})]
                   .outs[0];
      net.outputs.push_back(y);
    }
    auto where = net.canonicalize();
    return {{worlds, net.to_term()}, where.at(target), bindings};
  }
};

inline std::size_t world_count(std::mt19937_64& rng, std::size_t lo = 1) {
  return lo + rng() % (5 - lo);
}

}  // namespace rw

// ---------------------------------------------------------------------------

template <Semiring S>
std::vector<RewriteRule<S>> make_rewrite_rules() {
  using namespace rw;
  using NetS = Net<S>;
  using Sk = Sketch<S>;
  std::vector<RewriteRule<S>> R;

  // -- structure ----------------------------------------------------------
  R.push_back({"id-elim", "structure", "remove an identity generator", WorldEffect::None,
               [](RwState<S>& st, std::size_t pos, const Bindings&) {
                 auto& op = op_at(st, pos, GenKind::Id, "id-elim");
                 const auto x = op.ins[0], y = op.outs[0];
                 st.net.erase({pos});
                 st.net.redirect(y, x);
               },
               [](std::mt19937_64& rng) {
                 Sk k(world_count(rng));
                 auto t = small_type(rng);
                 auto x = k.maybe_scale(rng, k.net.add_input(t, random_label(rng, k.n())));
                 k.target = k.net.add_op(gen::id<S>(t, k.net.label(x)), {x});
                 k.net.outputs.push_back(k.maybe_scale(rng, k.net.ops[k.target].outs[0]));
                 return k.finish(rng);
               }});

  R.push_back({"id-intro", "structure",
               "insert an identity on a port of the generator (side in|out, port k) or on "
               "diagram input k (binding input)",
               WorldEffect::None,
               [](RwState<S>& st, std::size_t pos, const Bindings& b) {
                 std::size_t w;
                 if (auto in = get(b, "input")) {
                   const auto k = get_index(b, "input", 0);
                   if (k >= st.net.inputs.size()) throw RewriteError("id-intro: no such input");
                   w = st.net.inputs[k];
                 } else {
                   auto& op = op_at(st, pos, "id-intro");
                   const bool out = get(b, "side").value_or("out") == "out";
                   const auto k = get_index(b, "port", 0);
                   const auto& ports = out ? op.outs : op.ins;
                   if (k >= ports.size()) throw RewriteError("id-intro: no such port");
                   w = ports[k];
                 }
                 auto w2 = st.net.new_wire(st.net.type(w), st.net.label(w));
                 st.net.redirect(w, w2);
                 st.net.add_op(gen::id<S>(st.net.type(w), st.net.label(w)), {w}, {w2});
               },
               [](std::mt19937_64& rng) {
                 Sk k(world_count(rng));
                 Generator<S> g;
                 do g = random_generator<S>(rng, k.n());
                 while (g.in.empty() && g.out.empty());
                 k.target = k.lone(g);
                 if (rng() % 3 == 0 && !k.net.inputs.empty()) {
                   k.bindings["input"] = std::to_string(rng() % k.net.inputs.size());
                 } else {
                   bool out = !g.out.empty() && (g.in.empty() || rng() % 2);
                   k.bindings["side"] = out ? "out" : "in";
                   k.bindings["port"] = std::to_string(rng() % (out ? g.out.size() : g.in.size()));
                 }
                 return k.finish(rng);
               }});

  R.push_back({"swap-wiring", "symmetry", "a swap generator is a wire crossing", WorldEffect::None,
               [](RwState<S>& st, std::size_t pos, const Bindings&) {
                 auto& op = op_at(st, pos, GenKind::Swap, "swap-wiring");
                 const auto x0 = op.ins[0], x1 = op.ins[1], y0 = op.outs[0], y1 = op.outs[1];
                 st.net.erase({pos});
                 st.net.redirect(y0, x1);
                 st.net.redirect(y1, x0);
               },
               [](std::mt19937_64& rng) {
                 Sk k(world_count(rng));
                 auto g = gen::swap<S>(small_type(rng), small_type(rng), random_label(rng, k.n()),
                                       random_label(rng, k.n()));
                 k.target = k.lone(g);
                 return k.finish(rng);
               }});

  R.push_back(
      {"snake", "compact closure",
       "a cap leg entering a cup is yanked straight (binding leg selects the cap output)",
       WorldEffect::None,
       [](RwState<S>& st, std::size_t pos, const Bindings& b) {
         auto& cap = op_at(st, pos, GenKind::Cap, "snake");
         const auto o = cap.outs;
         std::vector<std::size_t> legs{0, 1};
         if (get(b, "leg")) legs = {get_index(b, "leg", 0)};
         for (auto k : legs) {
           if (k > 1) throw RewriteError("snake: leg must be 0 or 1");
           auto e = st.net.consumer(o[k]);
           if (e.op == NetS::npos || st.net.ops[e.op].g.kind != GenKind::Cup) continue;
           const auto y = st.net.ops[e.op].ins[1 - e.port];
           if (y == o[1 - k]) continue;  // a closed loop, not a snake
           st.net.erase({pos, e.op});
           st.net.redirect(o[1 - k], y);
           return;
         }
         throw RewriteError("snake: no cap leg enters a cup");
       },
       [](std::mt19937_64& rng) {
         Sk k(world_count(rng));
         auto t = small_type(rng);
         auto l = random_label(rng, k.n());
         auto y = k.maybe_scale(rng, k.net.add_input(t, l));
         k.target = k.net.add_op(gen::cap<S>(t, l), {});
         const auto o = k.net.ops[k.target].outs;
         const auto leg = rng() % 2;
         if (rng() % 2)
           k.net.add_op(gen::cup<S>(t, l), {o[leg], y});
         else
           k.net.add_op(gen::cup<S>(t, l), {y, o[leg]});
         k.net.outputs.push_back(k.maybe_scale(rng, o[1 - leg]));
         return k.finish(rng);
       }});

  // -- biproduct, tensor and unit ----------------------------------------------
  R.push_back({"plus-cancel", "biproduct", "plus followed by its dagger with the same labels",
               WorldEffect::None,
               [](RwState<S>& st, std::size_t pos, const Bindings&) {
                 auto& p = op_at(st, pos, GenKind::Plus, "plus-cancel");
                 const auto pin = p.ins;
                 const auto pg = p.g;
                 auto qi = consumer_op(st.net, p.outs[0], GenKind::PlusDag, 0, "plus-cancel");
                 const auto& q = st.net.ops[qi];
                 if (!(q.g.a == pg.a) || !(q.g.b == pg.b) || q.g.out != pg.in)
                   throw RewriteError("plus-cancel: the dagger has other labels or types");
                 const auto qout = q.outs;
                 st.net.erase({pos, qi});
                 st.net.redirect(qout[0], pin[0]);
                 st.net.redirect(qout[1], pin[1]);
               },
               [](std::mt19937_64& rng) {
                 Sk k(world_count(rng));
                 auto ws = random_disjoint(rng, k.n(), 2);
                 auto a = small_type(rng), b2 = small_type(rng);
                 auto x = k.maybe_scale(rng, k.net.add_input(a, ws[0]));
                 auto y = k.net.add_input(b2, ws[1]);
                 k.target = k.net.add_op(gen::plus<S>(a, b2, ws[0], ws[1]), {x, y});
                 auto q = k.net.add_op(gen::plus_dag<S>(a, b2, ws[0], ws[1]),
                                       {k.net.ops[k.target].outs[0]});
                 for (auto w : k.net.ops[q].outs) k.net.outputs.push_back(w);
                 return k.finish(rng);
               }});

  R.push_back({"tensor-cancel", "tensor", "tensor and its dagger cancel in either order",
               WorldEffect::None,
               [](RwState<S>& st, std::size_t pos, const Bindings&) {
                 auto& op = op_at(st, pos, "tensor-cancel");
                 const auto g = op.g;
                 const auto ins = op.ins, outs = op.outs;
                 if (g.kind == GenKind::Tensor) {
                   auto di = consumer_op(st.net, outs[0], GenKind::TensorDag, 0, "tensor-cancel");
                   const auto& d = st.net.ops[di];
                   if (!(d.g.a == g.a) || !(d.g.b == g.b))
                     throw RewriteError("tensor-cancel: type mismatch");
                   const auto dout = d.outs;
                   st.net.erase({pos, di});
                   st.net.redirect(dout[0], ins[0]);
                   st.net.redirect(dout[1], ins[1]);
                 } else if (g.kind == GenKind::TensorDag) {
                   auto ti = consumer_op(st.net, outs[0], GenKind::Tensor, 0, "tensor-cancel");
                   auto e = st.net.consumer(outs[1]);
                   if (e.op != ti || e.port != 1)
                     throw RewriteError("tensor-cancel: outputs do not meet in one tensor");
                   const auto tout = st.net.ops[ti].outs;
                   st.net.erase({pos, ti});
                   st.net.redirect(tout[0], ins[0]);
                 } else {
                   throw RewriteError("tensor-cancel: expected Tensor or TensorDag");
                 }
               },
               [](std::mt19937_64& rng) {
                 Sk k(world_count(rng));
                 auto a = small_type(rng), b2 = small_type(rng);
                 auto l = random_label(rng, k.n());
                 if (rng() % 2) {
                   auto x = k.net.add_input(a, l), y = k.net.add_input(b2, l);
                   k.target = k.net.add_op(gen::tensor<S>(a, b2, l), {x, y});
                   auto d = k.net.add_op(gen::tensor_dag<S>(a, b2, l), {k.net.ops[k.target].outs[0]});
                   for (auto w : k.net.ops[d].outs) k.net.outputs.push_back(w);
                 } else {
                   auto x = k.maybe_scale(rng, k.net.add_input(WireType::prod(a, b2), l));
                   k.target = k.net.add_op(gen::tensor_dag<S>(a, b2, l), {x});
                   auto t = k.net.add_op(gen::tensor<S>(a, b2, l), k.net.ops[k.target].outs);
                   k.net.outputs.push_back(k.net.ops[t].outs[0]);
                 }
                 return k.finish(rng);
               }});

  R.push_back({"unit-cancel", "tensor unit", "a unit feeding its dagger disappears",
               WorldEffect::None,
               [](RwState<S>& st, std::size_t pos, const Bindings&) {
                 auto& u = op_at(st, pos, GenKind::Unit, "unit-cancel");
                 auto di = consumer_op(st.net, u.outs[0], GenKind::UnitDag, 0, "unit-cancel");
                 st.net.erase({pos, di});
               },
               [](std::mt19937_64& rng) {
                 Sk k(world_count(rng));
                 auto l = random_label(rng, k.n());
                 k.target = k.net.add_op(gen::unit<S>(l), {});
                 k.net.add_op(gen::unit_dag<S>(l), k.net.ops[k.target].outs);
                 return k.finish(rng);
               }});

  // -- scalars --------------------------------------------------------------
  R.push_back({"scalar-one", "scalars", "a scalar equal to one is an identity wire",
               WorldEffect::None,
               [](RwState<S>& st, std::size_t pos, const Bindings&) {
                 auto& op = op_at(st, pos, GenKind::Scalar, "scalar-one");
                 if (!S::approx_equal(op.g.scalar, S::one(), 0))
                   throw RewriteError("scalar-one: the scalar is " + S::str(op.g.scalar));
                 const auto x = op.ins[0], y = op.outs[0];
                 st.net.erase({pos});
                 st.net.redirect(y, x);
               },
               [](std::mt19937_64& rng) {
                 Sk k(world_count(rng));
                 k.target = k.lone(gen::scalar<S>(small_type(rng), S::one(), random_label(rng, k.n())));
                 return k.finish(rng);
               }});

  R.push_back({"scalar-fuse", "scalars", "two consecutive scalars multiply", WorldEffect::None,
               [](RwState<S>& st, std::size_t pos, const Bindings&) {
                 auto& p = op_at(st, pos, GenKind::Scalar, "scalar-fuse");
                 auto qi = consumer_op(st.net, p.outs[0], GenKind::Scalar, 0, "scalar-fuse");
                 p.g.scalar = S::mul(p.g.scalar, st.net.ops[qi].g.scalar);
                 const auto keep = p.outs[0], gone = st.net.ops[qi].outs[0];
                 st.net.erase({qi});
                 st.net.redirect(gone, keep);
               },
               [](std::mt19937_64& rng) {
                 Sk k(world_count(rng));
                 auto t = small_type(rng);
                 auto l = random_label(rng, k.n());
                 auto x = k.net.add_input(t, l);
                 k.target = k.net.add_op(gen::scalar<S>(t, S::random(rng), l), {x});
                 auto q = k.net.add_op(gen::scalar<S>(t, S::random(rng), l), k.net.ops[k.target].outs);
                 k.net.outputs.push_back(k.net.ops[q].outs[0]);
                 return k.finish(rng);
               }});

  // -- contraction ------------------------------------------------------------
  R.push_back({"contraction-unary", "contraction",
               "a contraction or its dagger of arity one is a wire", WorldEffect::None,
               [](RwState<S>& st, std::size_t pos, const Bindings&) {
                 auto& op = op_at(st, pos, "contraction-unary");
                 if ((op.g.kind != GenKind::Contraction && op.g.kind != GenKind::ContractionDag) ||
                     op.g.arity != 1)
                   throw RewriteError("contraction-unary: expected a contraction of arity 1");
                 const auto x = op.ins[0], y = op.outs[0];
                 st.net.erase({pos});
                 st.net.redirect(y, x);
               },
               [](std::mt19937_64& rng) {
                 Sk k(world_count(rng));
                 auto l = random_disjoint(rng, k.n(), 1);
                 auto t = small_type(rng);
                 k.target = k.lone(rng() % 2 ? gen::contraction<S>(t, l, k.n())
                                             : gen::contraction_dag<S>(t, l, k.n()));
                 return k.finish(rng);
               }});

  R.push_back(
      {"contraction-fuse", "contraction",
       "absorb a contraction feeding input `port` (or its dagger fed by output `port`)",
       WorldEffect::None,
       [](RwState<S>& st, std::size_t pos, const Bindings& b) {
         auto& c = op_at(st, pos, "contraction-fuse");
         const std::size_t n = st.net.worlds();
         const bool dag = c.g.kind == GenKind::ContractionDag;
         if (!dag && c.g.kind != GenKind::Contraction)
           throw RewriteError("contraction-fuse: expected a contraction");
         const auto& side = dag ? c.outs : c.ins;
         std::optional<std::size_t> port, other;
         for (std::size_t k = 0; k < side.size(); ++k) {
           if (get(b, "port") && k != get_index(b, "port", 0)) continue;
           if (!dag) {
             auto e = st.net.producer(side[k]);
             if (e.op != NetS::npos && st.net.ops[e.op].g.kind == GenKind::Contraction &&
                 st.net.ops[e.op].g.a == c.g.a) {
               port = k;
               other = e.op;
               break;
             }
           } else {
             auto e = st.net.consumer(side[k]);
             if (e.op != NetS::npos && st.net.ops[e.op].g.kind == GenKind::ContractionDag &&
                 st.net.ops[e.op].g.a == c.g.a) {
               port = k;
               other = e.op;
               break;
             }
           }
         }
         if (!port) throw RewriteError("contraction-fuse: nothing to fuse");
         const auto d = st.net.ops[*other];
         auto ls = dag ? c.g.out : c.g.in;
         auto ws = side;
         const auto& dls = dag ? d.g.out : d.g.in;
         const auto& dws = dag ? d.outs : d.ins;
         ls.erase(ls.begin() + static_cast<std::ptrdiff_t>(*port));
         ls.insert(ls.begin() + static_cast<std::ptrdiff_t>(*port), dls.begin(), dls.end());
         ws.erase(ws.begin() + static_cast<std::ptrdiff_t>(*port));
         ws.insert(ws.begin() + static_cast<std::ptrdiff_t>(*port), dws.begin(), dws.end());
         if (dag) {
           c.g = gen::contraction_dag<S>(c.g.a, ls, n);
           c.outs = ws;
         } else {
           c.g = gen::contraction<S>(c.g.a, ls, n);
           c.ins = ws;
         }
         st.net.erase({*other});
       },
       [](std::mt19937_64& rng) {
         Sk k(world_count(rng));
         const std::size_t m1 = 1 + rng() % 3, m2 = rng() % 3;
         auto ls = random_disjoint(rng, k.n(), m1 + m2);
         auto t = small_type(rng);
         const std::size_t port = rng() % m1;
         std::vector<Label> inner(ls.begin() + static_cast<std::ptrdiff_t>(m1), ls.end());
         std::vector<Label> outer(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(m1));
         outer[port] = gen::union_of(inner, k.n());
         if (rng() % 2) {
           std::vector<std::size_t> ins, inner_ins;
           for (const auto& l : inner) inner_ins.push_back(k.net.add_input(t, l));
           auto d = k.net.add_op(gen::contraction<S>(t, inner, k.n()), inner_ins);
           for (std::size_t j = 0; j < m1; ++j)
             ins.push_back(j == port ? k.net.ops[d].outs[0] : k.net.add_input(t, outer[j]));
           k.target = k.net.add_op(gen::contraction<S>(t, outer, k.n()), ins);
           k.net.outputs.push_back(k.net.ops[k.target].outs[0]);
         } else {
           auto x = k.net.add_input(t, gen::union_of(outer, k.n()));
           k.target = k.net.add_op(gen::contraction_dag<S>(t, outer, k.n()), {x});
           auto outs = k.net.ops[k.target].outs;
           auto d = k.net.add_op(gen::contraction_dag<S>(t, inner, k.n()), {outs[port]});
           for (std::size_t j = 0; j < m1; ++j) {
             if (j == port)
               for (auto w : k.net.ops[d].outs) k.net.outputs.push_back(w);
             else
               k.net.outputs.push_back(outs[j]);
           }
         }
         k.bindings["port"] = std::to_string(port);
         return k.finish(rng);
       }});

  R.push_back(
      {"contraction-unfuse", "contraction",
       "group `count` branches starting at `from` into an inner contraction", WorldEffect::None,
       [](RwState<S>& st, std::size_t pos, const Bindings& b) {
         auto& c = op_at(st, pos, "contraction-unfuse");
         const std::size_t n = st.net.worlds();
         const bool dag = c.g.kind == GenKind::ContractionDag;
         if (!dag && c.g.kind != GenKind::Contraction)
           throw RewriteError("contraction-unfuse: expected a contraction");
         const auto from = get_index(b, "from", 0), count = get_index(b, "count", 2);
         auto ls = dag ? c.g.out : c.g.in;
         auto ws = dag ? c.outs : c.ins;
         if (from + count > ls.size()) throw RewriteError("contraction-unfuse: range too large");
         const auto f = static_cast<std::ptrdiff_t>(from), e = f + static_cast<std::ptrdiff_t>(count);
         std::vector<Label> sub(ls.begin() + f, ls.begin() + e);
         std::vector<std::size_t> subw(ws.begin() + f, ws.begin() + e);
         const auto a = c.g.a;
         const Label u = gen::union_of(sub, n);
         ls.erase(ls.begin() + f, ls.begin() + e);
         ls.insert(ls.begin() + f, u);
         ws.erase(ws.begin() + f, ws.begin() + e);
         const auto mid = st.net.new_wire(a, u);
         ws.insert(ws.begin() + f, mid);
         if (dag) {
           c.g = gen::contraction_dag<S>(a, ls, n);
           c.outs = ws;
           st.net.add_op(gen::contraction_dag<S>(a, sub, n), {mid}, subw);
         } else {
           c.g = gen::contraction<S>(a, ls, n);
           c.ins = ws;
           st.net.add_op(gen::contraction<S>(a, sub, n), subw, {mid});
         }
       },
       [](std::mt19937_64& rng) {
         Sk k(world_count(rng));
         const std::size_t m = rng() % 4;
         auto t = small_type(rng);
         auto ls = random_disjoint(rng, k.n(), m);
         k.target = k.lone(rng() % 2 ? gen::contraction<S>(t, ls, k.n())
                                     : gen::contraction_dag<S>(t, ls, k.n()));
         const std::size_t from = rng() % (m + 1);
         k.bindings["from"] = std::to_string(from);
         k.bindings["count"] = std::to_string(rng() % (m - from + 1));
         return k.finish(rng);
       }});

  R.push_back(
      {"contraction-cancel", "contraction",
       "a contraction followed by its dagger with the same branches is the identity, and so "
       "is the reverse",
       WorldEffect::None,
       [](RwState<S>& st, std::size_t pos, const Bindings&) {
         auto& op = op_at(st, pos, "contraction-cancel");
         const auto g = op.g;
         const auto ins = op.ins, outs = op.outs;
         if (g.kind == GenKind::Contraction) {
           auto di = consumer_op(st.net, outs[0], GenKind::ContractionDag, 0, "contraction-cancel");
           const auto& d = st.net.ops[di];
           if (!(d.g.a == g.a) || d.g.out != g.in)
             throw RewriteError("contraction-cancel: branches differ");
           const auto dout = d.outs;
           st.net.erase({pos, di});
           for (std::size_t k = 0; k < dout.size(); ++k) st.net.redirect(dout[k], ins[k]);
         } else if (g.kind == GenKind::ContractionDag) {
           if (outs.empty())
             throw RewriteError("contraction-cancel: select the arity-0 contraction instead");
           auto ci = consumer_op(st.net, outs[0], GenKind::Contraction, 0, "contraction-cancel");
           for (std::size_t k = 1; k < outs.size(); ++k) {
             auto e = st.net.consumer(outs[k]);
             if (e.op != ci || e.port != k)
               throw RewriteError("contraction-cancel: branches do not meet in order");
           }
           const auto& c = st.net.ops[ci];
           if (!(c.g.a == g.a) || c.g.in != g.out)
             throw RewriteError("contraction-cancel: branches differ");
           const auto cout = c.outs[0];
           st.net.erase({pos, ci});
           st.net.redirect(cout, ins[0]);
         } else {
           throw RewriteError("contraction-cancel: expected a contraction");
         }
       },
       [](std::mt19937_64& rng) {
         Sk k(world_count(rng));
         const std::size_t m = rng() % 4;
         auto t = small_type(rng);
         auto ls = random_disjoint(rng, k.n(), m);
         if (m == 0 || rng() % 2) {
           std::vector<std::size_t> ins;
           for (const auto& l : ls) ins.push_back(k.maybe_scale(rng, k.net.add_input(t, l)));
           k.target = k.net.add_op(gen::contraction<S>(t, ls, k.n()), ins);
           auto d = k.net.add_op(gen::contraction_dag<S>(t, ls, k.n()), k.net.ops[k.target].outs);
           for (auto w : k.net.ops[d].outs) k.net.outputs.push_back(w);
         } else {
           auto x = k.net.add_input(t, gen::union_of(ls, k.n()));
           k.target = k.net.add_op(gen::contraction_dag<S>(t, ls, k.n()), {x});
           auto c = k.net.add_op(gen::contraction<S>(t, ls, k.n()), k.net.ops[k.target].outs);
           k.net.outputs.push_back(k.net.ops[c].outs[0]);
         }
         return k.finish(rng);
       }});

  R.push_back(
      {"empty-wire-cut", "contraction",
       "a wire enabled in no world is a zero-branch daggered contraction followed by a "
       "zero-branch contraction (port chosen as for id-intro)",
       WorldEffect::None,
       [](RwState<S>& st, std::size_t pos, const Bindings& b) {
         std::size_t w;
         if (get(b, "input")) {
           const auto k = get_index(b, "input", 0);
           if (k >= st.net.inputs.size()) throw RewriteError("empty-wire-cut: no such input");
           w = st.net.inputs[k];
         } else {
           auto& op = op_at(st, pos, "empty-wire-cut");
           const bool out = get(b, "side").value_or("out") == "out";
           const auto k = get_index(b, "port", 0);
           const auto& ports = out ? op.outs : op.ins;
           if (k >= ports.size()) throw RewriteError("empty-wire-cut: no such port");
           w = ports[k];
         }
         if (st.net.label(w).any()) throw RewriteError("empty-wire-cut: the wire is enabled");
         const std::size_t n = st.net.worlds();
         const auto t = st.net.type(w);
         auto w2 = st.net.new_wire(t, st.net.label(w));
         st.net.redirect(w, w2);
         st.net.add_op(gen::contraction_dag<S>(t, {}, n), {w});
         st.net.add_op(gen::contraction<S>(t, {}, n), {}, {w2});
       },
       [](std::mt19937_64& rng) {
         Sk k(world_count(rng));
         auto t = small_type(rng);
         const Label none(k.n());
         auto x = k.net.add_input(t, none);
         k.target = k.net.add_op(gen::scalar<S>(t, S::random(rng), none), {x});
         k.net.outputs.push_back(k.maybe_scale(rng, k.net.ops[k.target].outs[0]));
         if (rng() % 3 == 0)
           k.bindings["input"] = "0";
         else
           k.bindings["side"] = rng() % 2 ? "in" : "out";
         return k.finish(rng);
       }});

  R.push_back(
      {"contraction-natural", "contraction",
       "split a generator along a partition `parts` of worlds covering its labels: daggered "
       "contractions on the inputs, one restricted copy per part, contractions on the outputs",
       WorldEffect::None,
       [](RwState<S>& st, std::size_t pos, const Bindings& b) {
         auto& op = op_at(st, pos, "contraction-natural");
         const std::size_t n = st.net.worlds();
         const auto g = op.g;
         const auto ins = op.ins, outs = op.outs;
         auto parts = parse_parts(st.worlds, get(b, "parts").value_or(""));
         Label cover(n);
         for (const auto& p : parts) {
           if ((cover & p).any()) throw RewriteError("contraction-natural: parts overlap");
           cover |= p;
         }
         if (!label_union(g, n).is_subset_of(cover))
           throw RewriteError("contraction-natural: parts do not cover the labels");
         const auto it = g.in_type(), ot = g.out_type();
         st.net.erase({pos});
         std::vector<std::vector<std::size_t>> branch(parts.size());
         for (std::size_t i = 0; i < ins.size(); ++i) {
           std::vector<Label> ws;
           for (const auto& p : parts) ws.push_back(g.in[i] & p);
           auto d = st.net.add_op(gen::contraction_dag<S>(it[i], ws, n), {ins[i]});
           for (std::size_t j = 0; j < parts.size(); ++j)
             branch[j].push_back(st.net.ops[d].outs[j]);
         }
         std::vector<std::vector<std::size_t>> made(parts.size());
         for (std::size_t j = 0; j < parts.size(); ++j)
           made[j] = st.net.ops[st.net.add_op(restricted<S>(g, parts[j]), branch[j])].outs;
         for (std::size_t k = 0; k < outs.size(); ++k) {
           std::vector<Label> ws;
           std::vector<std::size_t> cin;
           for (std::size_t j = 0; j < parts.size(); ++j) {
             ws.push_back(g.out[k] & parts[j]);
             cin.push_back(made[j][k]);
           }
           st.net.add_op(gen::contraction<S>(ot[k], ws, n), cin, {outs[k]});
         }
       },
       [](std::mt19937_64& rng) {
         Sk k(world_count(rng));
         auto g = random_generator<S>(rng, k.n());
         const Label u = label_union(g, k.n());
         std::size_t m = 1 + rng() % 3;
         if (u.none() && rng() % 2) m = 0;
         std::vector<Label> parts(m, Label(k.n()));
         if (m > 0)
           for (std::size_t i = 0; i < k.n(); ++i) parts[rng() % m].set(i);
         if (m == 1) parts[0] = k.worlds.full_label();
         k.target = k.lone(g);
         k.bindings["parts"] = parts_string(k.worlds, parts);
         return k.finish(rng);
       }});

  // -- world rules --------------------------------------------------------------
  R.push_back({"rename", "worlds",
               "reorder worlds (`order` lists every world) and optionally rename them (`as`)",
               WorldEffect::Rename,
               [](RwState<S>& st, std::size_t, const Bindings& b) {
                 auto order = parse_worlds(st.worlds, get(b, "order").value_or(""));
                 const std::size_t n = st.worlds.size();
                 std::vector<std::size_t> old_to_new(n, n);
                 if (order.size() != n) throw RewriteError("rename: order must list every world");
                 for (std::size_t k = 0; k < n; ++k) {
                   if (old_to_new[order[k]] != n) throw RewriteError("rename: repeated world");
                   old_to_new[order[k]] = k;
                 }
                 std::vector<std::string> names;
                 for (auto i : order) names.push_back(st.worlds.name(i));
                 if (auto as = get(b, "as")) {
                   std::istringstream in(*as);
                   std::vector<std::string> fresh;
                   std::string tok;
                   while (in >> tok) fresh.push_back(tok);
                   if (fresh.size() != n) throw RewriteError("rename: `as` must give every name");
                   names = fresh;
                 }
                 st.net.relabel([&](const Label& l) { return remap_label(l, old_to_new, n); }, n);
                 st.worlds = WorldSet(std::move(names));
               },
               [](std::mt19937_64& rng) {
                 Sk k(world_count(rng));
                 k.target = k.lone(random_generator<S>(rng, k.n()));
                 std::vector<std::size_t> p(k.n());
                 std::iota(p.begin(), p.end(), 0);
                 std::shuffle(p.begin(), p.end(), rng);
                 std::string order, as;
                 for (auto i : p) {
                   order += (order.empty() ? "" : " ") + k.worlds.name(i);
                   as += (as.empty() ? "v" : " v") + std::to_string(i);
                 }
                 k.bindings["order"] = order;
                 if (rng() % 2) k.bindings["as"] = as;
                 return k.finish(rng);
               }});

  R.push_back({"annihilate-scalar", "worlds",
               "drop a world in the label of a zero scalar", WorldEffect::Annihilate,
               [](RwState<S>& st, std::size_t pos, const Bindings& b) {
                 auto& op = op_at(st, pos, GenKind::Scalar, "annihilate-scalar");
                 if (!S::is_zero(op.g.scalar))
                   throw RewriteError("annihilate-scalar: the scalar is not zero");
                 const auto a = world_binding(st, b, "annihilate-scalar");
                 if (!op.g.in[0][a]) throw RewriteError("annihilate-scalar: world not in the label");
                 remove_world(st, a);
               },
               [](std::mt19937_64& rng) {
                 Sk k(world_count(rng));
                 auto t = small_type(rng);
                 auto l = random_nonempty(rng, k.n());
                 auto x = k.maybe_scale(rng, k.net.add_input(t, l));
                 k.target = k.net.add_op(gen::scalar<S>(t, S::zero(), l), {x});
                 k.net.outputs.push_back(k.maybe_scale(rng, k.net.ops[k.target].outs[0]));
                 k.bindings["world"] = k.worlds.name(pick_set(rng, l));
                 return k.finish(rng);
               }});

  R.push_back(
      {"annihilate-plus", "worlds",
       "drop a world sent into one branch of a plus and out of the other by its dagger",
       WorldEffect::Annihilate,
       [](RwState<S>& st, std::size_t pos, const Bindings& b) {
         auto& p = op_at(st, pos, GenKind::Plus, "annihilate-plus");
         auto qi = consumer_op(st.net, p.outs[0], GenKind::PlusDag, 0, "annihilate-plus");
         const auto& q = st.net.ops[qi];
         const Label bad = (p.g.in[0] & q.g.out[1]) | (p.g.in[1] & q.g.out[0]);
         const auto a = world_binding(st, b, "annihilate-plus");
         if (!bad[a]) throw RewriteError("annihilate-plus: the branches agree in that world");
         remove_world(st, a);
       },
       [](std::mt19937_64& rng) {
         for (;;) {
           Sk k(world_count(rng, 2));
           auto l = random_nonempty(rng, k.n());
           auto split = [&](std::vector<Label>& ws) {
             ws.assign(2, Label(k.n()));
             for (auto i = l.find_first(); i != Label::npos; i = l.find_next(i)) ws[rng() % 2].set(i);
           };
           std::vector<Label> w, v;
           split(w);
           split(v);
           const Label bad = (w[0] & v[1]) | (w[1] & v[0]);
           if (bad.none()) continue;
           auto a = small_type(rng), b2 = small_type(rng);
           auto x = k.net.add_input(a, w[0]), y = k.maybe_scale(rng, k.net.add_input(b2, w[1]));
           k.target = k.net.add_op(gen::plus<S>(a, b2, w[0], w[1]), {x, y});
           auto q = k.net.add_op(gen::plus_dag<S>(a, b2, v[0], v[1]), k.net.ops[k.target].outs);
           for (auto o : k.net.ops[q].outs) k.net.outputs.push_back(o);
           k.bindings["world"] = k.worlds.name(pick_set(rng, bad));
           return k.finish(rng);
         }
       }});

  R.push_back(
      {"split-scalar", "worlds",
       "give world `world` a twin and write the scalar as `s` there plus `t` in the twin",
       WorldEffect::Split,
       [](RwState<S>& st, std::size_t pos, const Bindings& b) {
         const auto x = op_at(st, pos, GenKind::Scalar, "split-scalar").g.scalar;
         const auto a = world_binding(st, b, "split-scalar");
         const auto s = scalar_binding<S>(b, "s", "split-scalar");
         const auto t = scalar_binding<S>(b, "t", "split-scalar");
         if (!S::approx_equal(S::add(s, t), x, 1e-9))
           throw RewriteError("split-scalar: s + t differs from the scalar");
         if (!st.net.ops[pos].g.in[0][a]) throw RewriteError("split-scalar: world not in the label");
         const auto a2 = add_twin(st, a, get(b, "twin").value_or(""));
         const std::size_t n = st.worlds.size();
         const auto op = st.net.ops[pos];
         Label rest = op.g.in[0], sa(n), sb(n);
         rest.reset(a).reset(a2);
         sa.set(a);
         sb.set(a2);
         st.net.erase({pos});
         auto& net = st.net;
         const auto ty = op.g.a;
         auto d = net.ops[net.add_op(gen::contraction_dag<S>(ty, {rest, sa, sb}, n), op.ins)].outs;
         auto y0 = net.ops[net.add_op(gen::scalar<S>(ty, x, rest), {d[0]})].outs[0];
         auto y1 = net.ops[net.add_op(gen::scalar<S>(ty, s, sa), {d[1]})].outs[0];
         auto y2 = net.ops[net.add_op(gen::scalar<S>(ty, t, sb), {d[2]})].outs[0];
         net.add_op(gen::contraction<S>(ty, {rest, sa, sb}, n), {y0, y1, y2}, op.outs);
       },
       [](std::mt19937_64& rng) {
         Sk k(world_count(rng));
         auto t = small_type(rng);
         auto l = random_nonempty(rng, k.n());
         const auto s = parse_scalar<S>(S::str(S::random(rng)));
         const auto u = parse_scalar<S>(S::str(S::random(rng)));
         auto x = k.maybe_scale(rng, k.net.add_input(t, l));
         k.target = k.net.add_op(gen::scalar<S>(t, S::add(s, u), l), {x});
         k.net.outputs.push_back(k.maybe_scale(rng, k.net.ops[k.target].outs[0]));
         k.bindings["world"] = k.worlds.name(pick_set(rng, l));
         k.bindings["s"] = S::str(s);
         k.bindings["t"] = S::str(u);
         return k.finish(rng);
       }});

  R.push_back(
      {"split-plus", "worlds",
       "give world `world` a twin; on an identity of A + B the world keeps A and the twin B",
       WorldEffect::Split,
       [](RwState<S>& st, std::size_t pos, const Bindings& b) {
         auto& id = op_at(st, pos, GenKind::Id, "split-plus");
         if (id.g.a.kind() != WireType::Kind::Sum)
           throw RewriteError("split-plus: the identity is not on a sum type");
         const auto a = world_binding(st, b, "split-plus");
         if (!id.g.in[0][a]) throw RewriteError("split-plus: world not in the label");
         const auto a2 = add_twin(st, a, get(b, "twin").value_or(""));
         const std::size_t n = st.worlds.size();
         const auto op = st.net.ops[pos];
         Label rest = op.g.in[0], sa(n), sb(n);
         rest.reset(a).reset(a2);
         sa.set(a);
         sb.set(a2);
         const Label both = sa | sb;
         st.net.erase({pos});
         auto& net = st.net;
         const auto ty = op.g.a;
         auto d = net.ops[net.add_op(gen::contraction_dag<S>(ty, {rest, both}, n), op.ins)].outs;
         auto y0 = net.ops[net.add_op(gen::id<S>(ty, rest), {d[0]})].outs[0];
         auto pd = net.ops[net.add_op(gen::plus_dag<S>(ty.left(), ty.right(), sa, sb), {d[1]})].outs;
         auto y1 = net.ops[net.add_op(gen::plus<S>(ty.left(), ty.right(), sa, sb), pd)].outs[0];
         net.add_op(gen::contraction<S>(ty, {rest, both}, n), {y0, y1}, op.outs);
       },
       [](std::mt19937_64& rng) {
         Sk k(world_count(rng));
         auto t = WireType::sum(small_type(rng), small_type(rng));
         auto l = random_nonempty(rng, k.n());
         auto x = k.maybe_scale(rng, k.net.add_input(t, l));
         k.target = k.net.add_op(gen::id<S>(t, l), {x});
         k.net.outputs.push_back(k.maybe_scale(rng, k.net.ops[k.target].outs[0]));
         k.bindings["world"] = k.worlds.name(pick_set(rng, l));
         return k.finish(rng);
       }});

  R.push_back(
      {"merge-scalar", "worlds",
       "inverse of split-scalar: a daggered contraction into branches (rest, {a}, {a'}) "
       "carrying scalars x, s, t with x = s + t (or rest empty), where a and a' agree on every "
       "other label, becomes one scalar s + t and a' is dropped",
       WorldEffect::Merge,
       [](RwState<S>& st, std::size_t pos, const Bindings&) {
         const std::string R0 = "merge-scalar";
         auto& d = op_at(st, pos, GenKind::ContractionDag, R0);
         if (d.g.arity != 3) throw RewriteError(R0 + ": expected three branches");
         if (d.g.out[1].count() != 1 || d.g.out[2].count() != 1)
           throw RewriteError(R0 + ": the last two branches must be single worlds");
         const auto a = d.g.out[1].find_first(), a2 = d.g.out[2].find_first();
         const auto din = d.ins[0];
         const auto ty = d.g.a;
         const Label whole = d.g.in[0];
         std::vector<std::size_t> sc(3);
         std::size_t ci = Net<S>::npos;
         for (std::size_t k = 0; k < 3; ++k) {
           sc[k] = consumer_op(st.net, d.outs[k], GenKind::Scalar, 0, R0);
           auto c = consumer_op(st.net, st.net.ops[sc[k]].outs[0], GenKind::Contraction, k, R0);
           if (k > 0 && c != ci) throw RewriteError(R0 + ": branches do not meet in order");
           ci = c;
         }
         const auto& c = st.net.ops[ci];
         if (c.g.arity != 3 || c.g.in != d.g.out) throw RewriteError(R0 + ": branches differ");
         const auto x = st.net.ops[sc[0]].g.scalar, s = st.net.ops[sc[1]].g.scalar,
                    t = st.net.ops[sc[2]].g.scalar;
         if (d.g.out[0].any() && !S::approx_equal(x, S::add(s, t), 1e-9))
           throw RewriteError(R0 + ": the rest scalar is not s + t");
         // a and a' must be indistinguishable outside the pattern
         auto twins = [&](const Label& l) { return l[a] == l[a2]; };
         for (std::size_t i = 0; i < st.net.ops.size(); ++i) {
           if (i == sc[0] || i == sc[1] || i == sc[2]) continue;
           const auto& o = st.net.ops[i];
           if (i != pos)
             for (const auto& l : o.g.out)
               if (!twins(l)) throw RewriteError(R0 + ": the worlds are not twins");
           if (i != ci)
             for (const auto& l : o.g.in)
               if (!twins(l)) throw RewriteError(R0 + ": the worlds are not twins");
         }
         for (auto w : st.net.inputs)
           if (!twins(st.net.label(w))) throw RewriteError(R0 + ": the worlds are not twins");
         for (auto w : st.net.outputs)
           if (!twins(st.net.label(w))) throw RewriteError(R0 + ": the worlds are not twins");
         const auto cout = c.outs[0];
         st.net.erase({pos, sc[0], sc[1], sc[2], ci});
         st.net.add_op(gen::scalar<S>(ty, S::add(s, t), whole), {din}, {cout});
         remove_world(st, a2);
       },
       [](std::mt19937_64& rng) {
         Sk k(world_count(rng));
         // append the twin of world a by hand
         const std::size_t a = rng() % k.n();
         auto names = k.worlds.names();
         names.push_back(names[a] + "'");
         k.worlds = WorldSet(names);
         const std::size_t n = names.size(), a2 = n - 1;
         k.net = Net<S>(n);
         auto twin_label = [&] {
           Label l = random_label(rng, n);
           l[a2] = l[a];
           return l;
         };
         Label rest = twin_label(), sa(n), sb(n);
         rest.reset(a).reset(a2);
         sa.set(a);
         sb.set(a2);
         auto t = small_type(rng);
         const auto s = S::random(rng), u = S::random(rng);
         const auto x = rest.none() && rng() % 2 ? S::random(rng) : S::add(s, u);
         auto in = k.maybe_scale(rng, k.net.add_input(t, rest | sa | sb));
         k.target = k.net.add_op(gen::contraction_dag<S>(t, {rest, sa, sb}, n), {in});
         auto dd = k.net.ops[k.target].outs;
         auto y0 = k.net.ops[k.net.add_op(gen::scalar<S>(t, x, rest), {dd[0]})].outs[0];
         auto y1 = k.net.ops[k.net.add_op(gen::scalar<S>(t, s, sa), {dd[1]})].outs[0];
         auto y2 = k.net.ops[k.net.add_op(gen::scalar<S>(t, u, sb), {dd[2]})].outs[0];
         auto o = k.net.ops[k.net.add_op(gen::contraction<S>(t, {rest, sa, sb}, n), {y0, y1, y2})];
         k.net.outputs.push_back(k.maybe_scale(rng, o.outs[0]));
         if (rng() % 2) {
           auto z = k.net.add_input(small_type(rng), twin_label());
           k.net.outputs.push_back(k.maybe_scale(rng, z));
         }
         return k.finish(rng, false);
       }});

  return R;
}

// ---------------------------------------------------------------------------
// Checking

/// Empty when the rewrite kept the semantics: the world-agnostic one always,
/// and world by world for fixed-W rules.
template <Semiring S>
std::string semantic_mismatch(WorldEffect effect, const LabeledDiagram<S>& before,
                              const LabeledDiagram<S>& after, double tol = 1e-9) {
  if (!equal<S>(sem_agnostic<S>(before), sem_agnostic<S>(after), tol))
    return "world-agnostic semantics changed";
  if (effect == WorldEffect::None) {
    if (before.worlds.size() != after.worlds.size()) return "world count changed";
    for (std::size_t a = 0; a < before.worlds.size(); ++a)
      if (!equal<S>(sem_world<S>(before, a), sem_world<S>(after, a), tol))
        return "semantics changed in world " + before.worlds.name(a);
  }
  return {};
}

/// Apply a rule to one instance; empty string on success.
template <Semiring S>
std::string check_instance(const RewriteRule<S>& r, const RuleInstance<S>& inst) {
  auto bad = validate(inst.diagram);
  if (!bad.empty()) return "the instance itself is invalid: " + bad[0].str();
  try {
    auto after = r.apply(inst.diagram, inst.position, inst.bindings);
    return semantic_mismatch<S>(r.effect, inst.diagram, after);
  } catch (const Error& e) {
    return e.what();
  }
}

/// The rule table; every rule passes a few random instances before the
/// table is handed out.
template <Semiring S>
const std::vector<RewriteRule<S>>& rewrite_rules() {
  static const std::vector<RewriteRule<S>> rules = [] {
    auto R = make_rewrite_rules<S>();
    std::mt19937_64 rng(0x5eed);
    for (const auto& r : R)
      for (int k = 0; k < 3; ++k) {
        auto why = check_instance<S>(r, r.sample(rng));
        if (!why.empty())
          throw Error("rewrite rule " + r.name + " failed its self-test over " +
                      std::string(S::name()) + ": " + why);
      }
    return R;
  }();
  return rules;
}

template <Semiring S>
const RewriteRule<S>& find_rule(std::string_view name) {
  for (const auto& r : rewrite_rules<S>())
    if (r.name == name) return r;
  throw RewriteError("unknown rewrite rule '" + std::string(name) + "'");
}

template <Semiring S>
LabeledDiagram<S> apply_rule(const LabeledDiagram<S>& d, std::string_view name,
                             std::size_t position, const Bindings& b = {}) {
  return find_rule<S>(name).apply(d, position, b);
}

// ---------------------------------------------------------------------------
// Derivations

struct DerivationStep {
  std::string rule;
  std::size_t position = 0;
  Bindings bindings;
  std::string lemma;  // which lemma or phase emitted the step
};

template <Semiring S>
struct Derivation {
  LabeledDiagram<S> initial;
  std::vector<DerivationStep> steps;
};

template <Semiring S>
struct ReplayResult {
  bool ok = true;
  std::size_t failed_step = 0;
  std::string message;
  LabeledDiagram<S> final;
};

/// Re-apply every step from the initial diagram; with check, every step
/// must keep the semantics.
template <Semiring S>
ReplayResult<S> replay(const Derivation<S>& der, bool check = true, double tol = 1e-9) {
  ReplayResult<S> res;
  res.final = der.initial;
  for (std::size_t i = 0; i < der.steps.size(); ++i) {
    const auto& st = der.steps[i];
    try {
      const auto& rule = find_rule<S>(st.rule);
      auto next = rule.apply(res.final, st.position, st.bindings);
      if (check) {
        auto why = semantic_mismatch<S>(rule.effect, res.final, next, tol);
        if (!why.empty()) throw RewriteError(why);
      }
      res.final = std::move(next);
    } catch (const Error& e) {
      res.ok = false;
      res.failed_step = i;
      res.message = "step " + std::to_string(i) + " (" + st.rule + "): " + e.what();
      return res;
    }
  }
  return res;
}

/// Records steps while rewriting a net in place.
template <Semiring S>
class Deriver {
 public:
  explicit Deriver(const LabeledDiagram<S>& d) : st_{d.worlds, Net<S>::from_term(d.term)} {
    der_.initial = d;
  }

  RwState<S>& state() { return st_; }
  const Net<S>& net() const { return st_.net; }
  const WorldSet& worlds() const { return st_.worlds; }
  void set_lemma(std::string l) { lemma_ = std::move(l); }

  void step(const std::string& rule, std::size_t pos, Bindings b = {}) {
    find_rule<S>(rule).apply_state(st_, pos, b);
    der_.steps.push_back({rule, pos, std::move(b), lemma_});
  }

  /// First op (in position order) satisfying pred.
  std::optional<std::size_t> find(
      const std::function<bool(const Net<S>&, std::size_t)>& pred) const {
    for (std::size_t i = 0; i < st_.net.ops.size(); ++i)
      if (pred(st_.net, i)) return i;
    return std::nullopt;
  }

  /// Consumer op of output k of op i, or npos.
  std::size_t next_op(std::size_t i, std::size_t k = 0) const {
    return st_.net.consumer(st_.net.ops[i].outs[k]).op;
  }

  LabeledDiagram<S> current() const { return {st_.worlds, st_.net.to_term()}; }
  Derivation<S> take() { return der_; }

 private:
  RwState<S> st_;
  Derivation<S> der_;
  std::string lemma_;
};

namespace lemma {

/// Cancel every contraction feeding its own dagger.
template <Semiring S>
void cancel_contractions(Deriver<S>& D) {
  for (;;) {
    auto i = D.find([&](const Net<S>& net, std::size_t i) {
      const auto& op = net.ops[i];
      if (op.g.kind != GenKind::Contraction) return false;
      auto e = net.consumer(op.outs[0]);
      if (e.op == Net<S>::npos) return false;
      const auto& d = net.ops[e.op].g;
      return d.kind == GenKind::ContractionDag && d.a == op.g.a && d.out == op.g.in;
    });
    if (!i) return;
    D.step("contraction-cancel", *i);
  }
}

/// Split every op tagged 1 along `parts`.
template <Semiring S>
void split_tagged(Deriver<S>& D, const std::string& parts) {
  for (;;) {
    auto i = D.find([](const Net<S>& net, std::size_t i) { return net.ops[i].tag == 1; });
    if (!i) return;
    D.step("contraction-natural", *i, {{"parts", parts}});
  }
}

/// Drop identities and turn swaps into crossings.
template <Semiring S>
void unwire(Deriver<S>& D) {
  while (auto i = D.find([](const Net<S>& net, std::size_t j) {
    return net.ops[j].g.kind == GenKind::Id || net.ops[j].g.kind == GenKind::Swap;
  }))
    D.step(D.net().ops[*i].g.kind == GenKind::Id ? "id-elim" : "swap-wiring", *i);
}

/// Remove everything enabled in no world: cut empty wires, split empty
/// generators into zero-branch contractions and absorb those.
template <Semiring S>
void prune_empty(Deriver<S>& D) {
  auto nullary = [](const Generator<S>& g, GenKind k) { return g.kind == k && g.arity == 0; };
  auto all_empty = [](const Generator<S>& g) {
    for (const auto* ls : {&g.in, &g.out})
      for (const auto& l : *ls)
        if (l.any()) return false;
    return true;
  };
  for (bool again = true; again;) {
    again = false;
    const auto& net = D.net();
    for (std::size_t i = 0; i < net.ops.size() && !again; ++i) {
      const auto& g = net.ops[i].g;
      // a cut wire between two real ops
      for (std::size_t k = 0; k < net.ops[i].outs.size(); ++k) {
        const auto w = net.ops[i].outs[k];
        if (net.label(w).any() || nullary(g, GenKind::Contraction)) continue;
        auto e = net.consumer(w);
        if (e.op == Net<S>::npos || nullary(net.ops[e.op].g, GenKind::ContractionDag)) continue;
        D.step("empty-wire-cut", i, {{"side", "out"}, {"port", std::to_string(k)}});
        again = true;
        break;
      }
      if (again) break;
      const bool contraction = g.kind == GenKind::Contraction || g.kind == GenKind::ContractionDag;
      if (!contraction && all_empty(g)) {
        D.step("contraction-natural", i, {{"parts", ""}});
        again = true;
        break;
      }
      if (g.kind == GenKind::Contraction)
        for (std::size_t k = 0; k < net.ops[i].ins.size(); ++k) {
          auto e = net.producer(net.ops[i].ins[k]);
          if (e.op != Net<S>::npos && nullary(net.ops[e.op].g, GenKind::Contraction)) {
            D.step("contraction-fuse", i, {{"port", std::to_string(k)}});
            again = true;
            break;
          }
        }
      if (!again && g.kind == GenKind::ContractionDag)
        for (std::size_t k = 0; k < net.ops[i].outs.size(); ++k) {
          auto e = net.consumer(net.ops[i].outs[k]);
          if (e.op != Net<S>::npos && nullary(net.ops[e.op].g, GenKind::ContractionDag)) {
            D.step("contraction-fuse", i, {{"port", std::to_string(k)}});
            again = true;
            break;
          }
        }
      if (!again && contraction && g.arity == 1) {
        D.step("contraction-unary", i);
        again = true;
      }
    }
    if (!again) {
      const auto before = D.net().ops.size();
      cancel_contractions(D);
      again = D.net().ops.size() != before;
    }
  }
}

}  // namespace lemma

/// f equals C o (f restricted to W \ u (+) f restricted to u) o C-dagger:
/// split every generator, then cancel the inner contraction pairs.
template <Semiring S>
Derivation<S> lemma_contraction_natural(const LabeledDiagram<S>& f, const Label& u) {
  Deriver<S> D(f);
  D.set_lemma("contraction-natural");
  for (auto& op : D.state().net.ops) op.tag = 1;
  Label rest = f.worlds.full_label() & ~u;
  lemma::split_tagged(D, rw::parts_string(f.worlds, {rest, u}));
  lemma::cancel_contractions(D);
  return D.take();
}

/// A diagram whose labels are all empty reduces to arity-0 contractions on
/// its boundary.
template <Semiring S>
Derivation<S> lemma_empty_world(const LabeledDiagram<S>& f) {
  Deriver<S> D(f);
  D.set_lemma("empty-world");
  for (auto& op : D.state().net.ops) op.tag = 1;
  lemma::split_tagged(D, "");
  lemma::cancel_contractions(D);
  return D.take();
}

namespace detail {

inline bool mirrored_halves(const Label& l) {
  const std::size_t h = l.size() / 2;
  for (std::size_t k = 0; k < h; ++k)
    if (l[k] != l[k + h]) return false;
  return true;
}

}  // namespace detail

/// From the one-copy quantum switch to the two-copy one: straighten the
/// wiring, split everything along the control, prune what each branch
/// cannot see, then yank the trace.
template <Semiring S>
Derivation<S> quantum_switch_derivation(const LabeledDiagram<S>& one_copy) {
  Deriver<S> D(one_copy);
  const std::size_t n = one_copy.worlds.size();
  D.set_lemma("wiring");
  lemma::unwire(D);
  Label w(n), v(n);
  for (std::size_t k = 0; k < n / 2; ++k) w.set(k);
  for (std::size_t k = n / 2; k < n; ++k) v.set(k);
  D.set_lemma("contraction-natural");
  for (auto& op : D.state().net.ops) op.tag = 1;
  lemma::split_tagged(D, rw::parts_string(one_copy.worlds, {w, v}));
  lemma::cancel_contractions(D);
  D.set_lemma("empty-world");
  lemma::prune_empty(D);
  D.set_lemma("compact-closure");
  auto cap = D.find([](const Net<S>& net, std::size_t i) { return net.ops[i].g.kind == GenKind::Cap; });
  if (!cap) throw RewriteError("quantum switch: no trace to yank");
  D.step("snake", *cap);
  return D.take();
}

/// qubit(alpha, beta) followed by the Hadamard gate, down to four branches
/// with one fused scalar each.
template <Semiring S>
Derivation<S> hadamard_on_qubit_derivation(const LabeledDiagram<S>& composite) {
  Deriver<S> D(composite);
  auto plus_into_dag = [](const Net<S>& net, std::size_t i) {
    if (net.ops[i].g.kind != GenKind::Plus) return false;
    auto e = net.consumer(net.ops[i].outs[0]);
    return e.op != Net<S>::npos && net.ops[e.op].g.kind == GenKind::PlusDag;
  };
  D.set_lemma("annihilation");
  for (;;) {
    auto p = D.find(plus_into_dag);
    if (!p) throw RewriteError("hadamard derivation: no plus meets its dagger");
    const auto& pg = D.net().ops[*p].g;
    const auto& qg = D.net().ops[D.next_op(*p)].g;
    const Label bad = (pg.in[0] & qg.out[1]) | (pg.in[1] & qg.out[0]);
    if (bad.none()) break;
    D.step("annihilate-plus", *p, {{"world", D.worlds().name(bad.find_first())}});
  }
  D.step("plus-cancel", *D.find(plus_into_dag));

  D.set_lemma("contraction-natural");
  // scalars right after a unit, in front of a daggered contraction
  auto scalar_before_split = [](const Net<S>& net, std::size_t i) {
    const auto& op = net.ops[i];
    if (op.g.kind != GenKind::Scalar) return false;
    auto src = net.producer(op.ins[0]).op;
    auto dst = net.consumer(op.outs[0]).op;
    return src != Net<S>::npos && net.ops[src].g.kind == GenKind::Unit &&
           dst != Net<S>::npos && net.ops[dst].g.kind == GenKind::ContractionDag;
  };
  while (auto i = D.find(scalar_before_split)) {
    const auto parts = rw::parts_string(D.worlds(), D.net().ops[D.next_op(*i)].g.out);
    const auto unit = D.net().producer(D.net().ops[*i].ins[0]).op;
    D.step("contraction-natural", *i, {{"parts", parts}});
    // the unit now feeds the fresh daggered contraction; positions moved
    auto u = D.find([&](const Net<S>& net, std::size_t j) {
      if (net.ops[j].g.kind != GenKind::Unit) return false;
      auto dst = net.consumer(net.ops[j].outs[0]).op;
      return dst != Net<S>::npos && net.ops[dst].g.kind == GenKind::ContractionDag &&
             net.ops[dst].g.out.size() > 1;
    });
    (void)unit;
    if (!u) throw RewriteError("hadamard derivation: lost the unit");
    D.step("contraction-natural", *u, {{"parts", parts}});
  }
  lemma::cancel_contractions(D);

  D.set_lemma("scalar-fusion");
  while (auto i = D.find([](const Net<S>& net, std::size_t j) {
    if (net.ops[j].g.kind != GenKind::Scalar) return false;
    auto dst = net.consumer(net.ops[j].outs[0]).op;
    return dst != Net<S>::npos && net.ops[dst].g.kind == GenKind::Scalar;
  }))
    D.step("scalar-fuse", *i);
  return D.take();
}

}  // namespace mw
