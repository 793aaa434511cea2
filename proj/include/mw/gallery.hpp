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

// Built-in encodings: states and gates on 1 + 1, the controlled not, the
// quantum switch, ZX spiders, linear-optics (LOv, Path) generators and the
// single-use PBS fragment.

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mw/builder.hpp"
#include "mw/diagram.hpp"
#include "mw/semantics.hpp"

namespace mw::gallery {

/// Keep only the worlds enabling every boundary wire. The fully enabled
/// block of the semantics is unchanged.
template <Semiring S>
LabeledDiagram<S> restrict_to_enabled(const LabeledDiagram<S>& d) {
  Label keep = d.worlds.full_label();
  for (const auto& l : d.in_labels()) keep &= l;
  for (const auto& l : d.out_labels()) keep &= l;
  std::vector<std::size_t> idx;
  std::vector<std::string> names;
  for (auto i = keep.find_first(); i != Label::npos; i = keep.find_next(i)) {
    idx.push_back(i);
    names.push_back(d.worlds.name(i));
  }
  auto t = map_labels<S>(d.term, [&](const Label& l) { return restrict_label(l, idx); },
                         idx.size());
  return {WorldSet(std::move(names)), t};
}

/// A fresh world absent from every label (the "star" world).
template <Semiring S>
LabeledDiagram<S> add_star(const LabeledDiagram<S>& d) {
  auto names = d.worlds.names();
  names.push_back("star");
  const std::size_t n = names.size();
  auto t = map_labels<S>(
      d.term,
      [n](const Label& l) {
        Label o = l;
        o.resize(n);
        return o;
      },
      n);
  return {WorldSet(std::move(names)), t};
}

/// alpha|0> + beta|1> as Plus of two scaled units, worlds {w0, w1}.
template <Semiring S>
LabeledDiagram<S> qubit(const typename S::T& alpha, const typename S::T& beta) {
  WorldSet W({"w0", "w1"});
  DiagramBuilder<S> b(2);
  auto u0 = b.scalar(b.unit(W.label({0})), alpha);
  auto u1 = b.scalar(b.unit(W.label({1})), beta);
  return b.diagram(W, {b.plus(u0, u1)});
}

/// Any 2x2 matrix m on 1 + 1: open the qubit, one world per entry (world
/// "i<i>o<j>" carries m(j, i)), scale and contract per output branch.
template <Semiring S>
LabeledDiagram<S> gate2(const Matrix<S>& m, bool with_star = false) {
  if (m.rows() != 2 || m.cols() != 2) throw ShapeError("gate2 needs a 2x2 matrix");
  std::vector<std::string> names{"i0o0", "i0o1", "i1o0", "i1o1"};
  if (with_star) names.push_back("star");
  WorldSet W(names);
  DiagramBuilder<S> b(W.size());
  auto world = [](std::size_t i, std::size_t j) { return 2 * i + j; };
  auto x = b.input(qubit_type(), W.label({0, 1, 2, 3}));
  auto [x0, x1] = b.plus_dag(x, W.label({0, 1}), W.label({2, 3}));
  std::size_t p[2][2];
  const std::size_t xs[2] = {x0, x1};
  for (std::size_t i = 0; i < 2; ++i) {
    auto ps = b.contraction_dag(xs[i], {W.label({world(i, 0)}), W.label({world(i, 1)})});
    for (std::size_t j = 0; j < 2; ++j) p[i][j] = b.scalar(ps[j], m(j, i));
  }
  auto o0 = b.contraction({p[0][0], p[1][0]});
  auto o1 = b.contraction({p[0][1], p[1][1]});
  return b.diagram(W, {b.plus(o0, o1)});
}

template <Semiring S>
  requires HasNeg<S> && HasInvSqrt2<S>
Matrix<S> hadamard_matrix() {
  const auto h = S::inv_sqrt2();
  return Matrix<S>::from_rows({{h, h}, {h, S::neg(h)}});
}

/// The Hadamard gate, worlds {i0o0, i0o1, i1o0, i1o1}: no world disables the
/// wire, so the block between disabled boundaries is zero.
template <Semiring S>
  requires HasNeg<S> && HasInvSqrt2<S>
LabeledDiagram<S> hadamard() {
  return gate2<S>(hadamard_matrix<S>());
}

// ---------------------------------------------------------------------------
// Controlled not over {a, b, c, star}: the control binds a to |0> and b, c
// to |1>; the target is negated |0> -> |1> in b and |1> -> |0> in c.

namespace detail {
inline WorldSet cnot_worlds() { return WorldSet({"a", "b", "c", "star"}); }
}  // namespace detail

/// Control part: opens the control qubit and splits the target by world.
/// Outputs: c0:{a}, c1:{b,c}, t:{a}, t:{b,c}.
template <Semiring S>
LabeledDiagram<S> cnot_control_part() {
  WorldSet W = detail::cnot_worlds();
  DiagramBuilder<S> b(4);
  auto c = b.input(qubit_type(), W.label({0, 1, 2}));
  auto t = b.input(qubit_type(), W.label({0, 1, 2}));
  auto [c0, c1] = b.plus_dag(c, W.label({0}), W.label({1, 2}));
  auto ts = b.contraction_dag(t, {W.label({0}), W.label({1, 2})});
  return b.diagram(W, {c0, c1, ts[0], ts[1]});
}

/// Computational part: identity in a, negation in b and c, then merge.
template <Semiring S>
LabeledDiagram<S> cnot_computational_part() {
  WorldSet W = detail::cnot_worlds();
  DiagramBuilder<S> b(4);
  auto c0 = b.input(WireType(), W.label({0}));
  auto c1 = b.input(WireType(), W.label({1, 2}));
  auto ta = b.input(qubit_type(), W.label({0}));
  auto tbc = b.input(qubit_type(), W.label({1, 2}));
  auto [zero, one] = b.plus_dag(tbc, W.label({1}), W.label({2}));
  auto neg = b.plus(one, zero);  // |0> in b lands on the right branch
  auto t = b.contraction({ta, neg});
  auto c = b.plus(c0, c1);
  return b.diagram(W, {c, t});
}

template <Semiring S>
LabeledDiagram<S> cnot() {
  return compose_seq_fixed<S>(cnot_control_part<S>(), cnot_computational_part<S>());
}

// ---------------------------------------------------------------------------
// Quantum switch. U and V are endomorphisms of a single wire A; worlds where
// their boundary is disabled are dropped first. The result lives over
// {w, v} x W_U x W_V, with w binding the control to |0> (U o V applied) and
// v binding it to |1> (V o U applied).

template <Semiring S>
struct QuantumSwitch {
  LabeledDiagram<S> one_copy;
  LabeledDiagram<S> two_copy;
};

namespace detail {

template <Semiring S>
struct SwitchFrame {
  LabeledDiagram<S> u, v;
  WorldSet worlds;
  std::size_t nu = 0, nv = 0;
  Label w, vv, full;

  std::size_t index(std::size_t c, std::size_t i, std::size_t j) const {
    return (c * nu + i) * nv + j;
  }

  /// Lift a label of U (is_u) or V to the controls in `cs`.
  Label lift(const Label& l, bool is_u, std::initializer_list<std::size_t> cs) const {
    Label out(worlds.size());
    for (auto c : cs)
      for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nv; ++j)
          if (is_u ? l[i] : l[j]) out.set(index(c, i, j));
    return out;
  }

  TermPtr<S> lifted(bool is_u, std::initializer_list<std::size_t> cs) const {
    const auto& d = is_u ? u : v;
    return map_labels<S>(d.term, [&](const Label& l) { return lift(l, is_u, cs); },
                         worlds.size());
  }
};

template <Semiring S>
SwitchFrame<S> switch_frame(const LabeledDiagram<S>& u, const LabeledDiagram<S>& v) {
  if (u.in_type().size() != 1 || !(u.in_type() == u.out_type()) || !(u.in_type() == v.in_type()) ||
      !(v.in_type() == v.out_type()))
    throw ShapeError("quantum switch needs two endomorphisms of the same single wire");
  SwitchFrame<S> f;
  f.u = restrict_to_enabled<S>(u);
  f.v = restrict_to_enabled<S>(v);
  f.nu = f.u.worlds.size();
  f.nv = f.v.worlds.size();
  std::vector<std::string> names;
  for (std::string c : {"w", "v"})
    for (std::size_t i = 0; i < f.nu; ++i)
      for (std::size_t j = 0; j < f.nv; ++j)
        names.push_back("(" + c + "," + f.u.worlds.name(i) + "," + f.v.worlds.name(j) + ")");
  f.worlds = WorldSet(std::move(names));
  const std::size_t n = f.worlds.size();
  f.w = Label(n);
  f.vv = Label(n);
  for (std::size_t k = 0; k < n / 2; ++k) f.w.set(k);
  for (std::size_t k = n / 2; k < n; ++k) f.vv.set(k);
  f.full = f.w | f.vv;
  return f;
}

}  // namespace detail

template <Semiring S>
QuantumSwitch<S> quantum_switch(const LabeledDiagram<S>& u, const LabeledDiagram<S>& v) {
  auto f = detail::switch_frame<S>(u, v);
  const std::size_t n = f.worlds.size();
  const WireType a = u.in_type()[0];
  QuantumSwitch<S> qs;
  {
    // One copy of each box; the v-branch output of U is fed back to V
    // through a cap/cup trace.
    DiagramBuilder<S> b(n);
    auto c = b.input(qubit_type(), f.full);
    auto y = b.input(a, f.full);
    auto [c0, c1] = b.plus_dag(c, f.w, f.vv);
    auto ys = b.contraction_dag(y, {f.w, f.vv});
    auto [t1, t2] = b.cap(a, f.vv);
    auto box = [&](bool is_u) {
      return seq<S>({leaf<S>(gen::contraction<S>(a, {f.w, f.vv}, n), n), f.lifted(is_u, {0, 1}),
                     leaf<S>(gen::contraction_dag<S>(a, {f.w, f.vv}, n), n)});
    };
    auto p = b.block(box(false), {ys[0], t1});
    auto q = b.block(box(true), {p[0], ys[1]});
    b.cup(q[1], t2);
    auto out = b.contraction({q[0], p[1]});
    qs.one_copy = b.diagram(f.worlds, {b.plus(c0, c1), out});
  }
  {
    DiagramBuilder<S> b(n);
    auto c = b.input(qubit_type(), f.full);
    auto y = b.input(a, f.full);
    auto [c0, c1] = b.plus_dag(c, f.w, f.vv);
    auto ys = b.contraction_dag(y, {f.w, f.vv});
    auto vw = b.block(f.lifted(false, {0}), {ys[0]});
    auto uw = b.block(f.lifted(true, {0}), vw);
    auto uv = b.block(f.lifted(true, {1}), {ys[1]});
    auto vv = b.block(f.lifted(false, {1}), uv);
    auto out = b.contraction({uw[0], vv[0]});
    qs.two_copy = b.diagram(f.worlds, {b.plus(c0, c1), out});
  }
  return qs;
}

// ---------------------------------------------------------------------------
// ZX fragment. Wires are 1 + 1 and enabled in both worlds z0, z1; world z0
// carries |0..0><0..0| and z1 carries s |1..1><1..1|.

template <Semiring S>
LabeledDiagram<S> zx_green_spider(std::size_t n_in, std::size_t n_out, const typename S::T& s) {
  WorldSet W({"z0", "z1"});
  const Label full = W.full_label(), z0 = W.label({0}), z1 = W.label({1});
  DiagramBuilder<S> b(2);
  std::vector<std::size_t> ins;
  for (std::size_t k = 0; k < n_in; ++k) ins.push_back(b.input(qubit_type(), full));
  for (auto x : ins) {
    auto [l, r] = b.plus_dag(x, z0, z1);
    b.unit_dag(l);
    b.unit_dag(r);
  }
  // The phase sits on its own unit loop so that arity zero still works.
  b.unit_dag(b.scalar(b.unit(z1), s));
  std::vector<std::size_t> outs;
  for (std::size_t k = 0; k < n_out; ++k) outs.push_back(b.plus(b.unit(z0), b.unit(z1)));
  return b.diagram(W, outs);
}

template <Semiring S>
  requires HasPhase<S>
LabeledDiagram<S> zx_green_spider(std::size_t n_in, std::size_t n_out, double phase) {
  return zx_green_spider<S>(n_in, n_out, S::phase(phase));
}

namespace detail {
template <Semiring S>
  requires HasNeg<S> && HasInvSqrt2<S>
LabeledDiagram<S> hadamards(std::size_t n) {
  std::vector<LabeledDiagram<S>> hs(n, hadamard<S>());
  return par_agnostic<S>(hs);
}
}  // namespace detail

/// Red spider: the green one conjugated by Hadamards on every leg.
template <Semiring S>
  requires HasNeg<S> && HasInvSqrt2<S>
LabeledDiagram<S> zx_red_spider(std::size_t n_in, std::size_t n_out, const typename S::T& s) {
  std::vector<LabeledDiagram<S>> chain;
  if (n_in) chain.push_back(detail::hadamards<S>(n_in));
  chain.push_back(zx_green_spider<S>(n_in, n_out, s));
  if (n_out) chain.push_back(detail::hadamards<S>(n_out));
  return seq_agnostic<S>(chain);
}

template <Semiring S>
  requires HasPhase<S> && HasNeg<S> && HasInvSqrt2<S>
LabeledDiagram<S> zx_red_spider(std::size_t n_in, std::size_t n_out, double phase) {
  return zx_red_spider<S>(n_in, n_out, S::phase(phase));
}

/// Reference matrix |0..0><0..0| + s |1..1><1..1|.
template <Semiring S>
Matrix<S> spider_matrix(std::size_t n_in, std::size_t n_out, const typename S::T& s) {
  const std::size_t r = std::size_t{1} << n_out, c = std::size_t{1} << n_in;
  Matrix<S> m(r, c);
  m(0, 0) = S::one();
  m(r - 1, c - 1) = S::add(m(r - 1, c - 1), s);
  return m;
}

// ---------------------------------------------------------------------------
// Linear optics. A single photon travels; parallel wires are enabled on
// disjoint worlds and the "star" world has no photon at all.

/// Block of the semantics restricted to "exactly one wire enabled" on both
/// sides, wire-major.
template <Semiring S>
Matrix<S> one_particle_block(const Matrix<S>& sem, const DiagObject& in, const DiagObject& out) {
  auto indices = [](const DiagObject& obj) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < obj.size(); ++k) {
      Enabling e{obj, std::vector<bool>(obj.size(), false)};
      e.mask[k] = true;
      auto ks = kron_indices(obj, e);
      idx.insert(idx.end(), ks.begin(), ks.end());
    }
    return idx;
  };
  return sem.select(indices(out), indices(in));
}

namespace lov {

/// Beam splitter with angle theta: y0 = cos x0 + i sin x1, y1 = i sin x0 +
/// cos x1, polarisation untouched.
template <Semiring S>
  requires HasPhase<S> && HasImag<S>
LabeledDiagram<S> beam_splitter(double theta) {
  WorldSet W({"a", "b", "c", "d", "star"});
  DiagramBuilder<S> b(5);
  const typename S::T cs = typename S::T(std::cos(theta));
  const typename S::T is = S::mul(S::imag(), typename S::T(std::sin(theta)));
  auto x0 = b.input(qubit_type(), W.label({0, 1}));
  auto x1 = b.input(qubit_type(), W.label({2, 3}));
  auto p = b.contraction_dag(x0, {W.label({0}), W.label({1})});
  auto q = b.contraction_dag(x1, {W.label({2}), W.label({3})});
  auto y0 = b.contraction({b.scalar(p[0], cs), b.scalar(q[0], is)});
  auto y1 = b.contraction({b.scalar(p[1], is), b.scalar(q[1], cs)});
  return b.diagram(W, {y0, y1});
}

template <Semiring S>
  requires HasPhase<S>
LabeledDiagram<S> phase_shifter(double phi) {
  WorldSet W({"a", "star"});
  DiagramBuilder<S> b(2);
  auto x = b.input(qubit_type(), W.label({0}));
  return b.diagram(W, {b.scalar(x, S::phase(phi))});
}

/// Wave plate: polarisation rotation [[cos, i sin], [i sin, cos]].
template <Semiring S>
  requires HasPhase<S> && HasImag<S>
LabeledDiagram<S> wave_plate(double theta) {
  const typename S::T cs = typename S::T(std::cos(theta));
  const typename S::T is = S::mul(S::imag(), typename S::T(std::sin(theta)));
  return gate2<S>(Matrix<S>::from_rows({{cs, is}, {is, cs}}), true);
}

/// Polarisation flip H <-> V.
template <Semiring S>
LabeledDiagram<S> negation() {
  WorldSet W({"a", "b", "star"});
  DiagramBuilder<S> b(3);
  auto x = b.input(qubit_type(), W.label({0, 1}));
  auto [h, v] = b.plus_dag(x, W.label({0}), W.label({1}));
  return b.diagram(W, {b.plus(v, h)});
}

/// Polarising beam splitter: horizontal goes through, vertical is reflected.
template <Semiring S>
LabeledDiagram<S> polarizing_beam_splitter() {
  WorldSet W({"0H", "0V", "1H", "1V", "star"});
  DiagramBuilder<S> b(5);
  auto x0 = b.input(qubit_type(), W.label({0, 1}));
  auto x1 = b.input(qubit_type(), W.label({2, 3}));
  auto [h0, v0] = b.plus_dag(x0, W.label({0}), W.label({1}));
  auto [h1, v1] = b.plus_dag(x1, W.label({2}), W.label({3}));
  return b.diagram(W, {b.plus(h0, v1), b.plus(h1, v0)});
}

/// Vacuum source: a wire that no world enables.
template <Semiring S>
LabeledDiagram<S> vacuum_source() {
  WorldSet W({"star"});
  DiagramBuilder<S> b(1);
  return b.diagram(W, {b.contraction0(qubit_type())});
}

}  // namespace lov

namespace path {

/// Binary merge of two exclusive paths.
template <Semiring S>
LabeledDiagram<S> merge() {
  return canonical_generator<S>(GenKind::Contraction, WireType(), {}, 2);
}

template <Semiring S>
LabeledDiagram<S> split() {
  return canonical_generator<S>(GenKind::ContractionDag, WireType(), {}, 2);
}

/// The path with no photon (contraction of arity zero).
template <Semiring S>
LabeledDiagram<S> empty() {
  return canonical_generator<S>(GenKind::Contraction, WireType(), {}, 0);
}

template <Semiring S>
LabeledDiagram<S> scalar(const typename S::T& s) {
  return canonical_generator<S>(GenKind::Scalar, WireType(), {}, 0, s);
}

/// QPath restricted to n = 1: the one-photon source is the unit.
template <Semiring S>
LabeledDiagram<S> ket1() {
  return canonical_generator<S>(GenKind::Unit, WireType());
}

template <Semiring S>
LabeledDiagram<S> bra1() {
  return canonical_generator<S>(GenKind::UnitDag, WireType());
}

}  // namespace path

// ---------------------------------------------------------------------------
// PBS fragment. Each port is a pair (control 1 + 1, target A) sharing one
// label. Only loop-free circuits whose wires are each used once are
// translated, and the caller has to assert it.

template <Semiring S>
struct PbsElement {
  enum class Kind { Pbs, Flip, Box } kind = Kind::Flip;
  std::size_t port = 0;           // Pbs acts on port and port + 1
  LabeledDiagram<S> box{};        // Box: an endomorphism of the target
};

template <Semiring S>
struct PbsCircuit {
  std::size_t ports = 1;
  WireType target;
  std::vector<PbsElement<S>> elements;
};

namespace detail {

template <Semiring S>
LabeledDiagram<S> port_identity(const WireType& a) {
  WorldSet W({"p", "star"});
  DiagramBuilder<S> b(2);
  auto c = b.input(qubit_type(), W.label({0}));
  auto t = b.input(a, W.label({0}));
  return b.diagram(W, {b.id(c), b.id(t)});
}

template <Semiring S>
LabeledDiagram<S> pbs_node(const WireType& a) {
  WorldSet W({"0H", "0V", "1H", "1V", "star"});
  DiagramBuilder<S> b(5);
  Label p0 = W.label({0, 1}), p1 = W.label({2, 3});
  auto c0 = b.input(qubit_type(), p0);
  auto t0 = b.input(a, p0);
  auto c1 = b.input(qubit_type(), p1);
  auto t1 = b.input(a, p1);
  auto [h0, v0] = b.plus_dag(c0, W.label({0}), W.label({1}));
  auto [h1, v1] = b.plus_dag(c1, W.label({2}), W.label({3}));
  auto s0 = b.contraction_dag(t0, {W.label({0}), W.label({1})});
  auto s1 = b.contraction_dag(t1, {W.label({2}), W.label({3})});
  auto oc0 = b.plus(h0, v1);
  auto ot0 = b.contraction({s0[0], s1[1]});
  auto oc1 = b.plus(h1, v0);
  auto ot1 = b.contraction({s1[0], s0[1]});
  return b.diagram(W, {oc0, ot0, oc1, ot1});
}

template <Semiring S>
LabeledDiagram<S> pbs_flip(const WireType& a) {
  WorldSet W({"a", "b", "star"});
  DiagramBuilder<S> b(3);
  auto c = b.input(qubit_type(), W.label({0, 1}));
  auto t = b.input(a, W.label({0, 1}));
  auto [h, v] = b.plus_dag(c, W.label({0}), W.label({1}));
  return b.diagram(W, {b.plus(v, h), b.id(t)});
}

template <Semiring S>
LabeledDiagram<S> pbs_box(const LabeledDiagram<S>& u) {
  auto r = restrict_to_enabled<S>(u);
  const std::size_t n = r.worlds.size() + 1;
  auto s = add_star<S>(r);
  Label full(n);
  for (std::size_t i = 0; i + 1 < n; ++i) full.set(i);
  DiagramBuilder<S> b(n);
  auto c = b.input(qubit_type(), full);
  auto t = b.input(u.in_type()[0], full);
  auto o = b.embed(s, {t});
  return b.diagram(s.worlds, {b.id(c), o[0]});
}

}  // namespace detail

template <Semiring S>
LabeledDiagram<S> pbs_translate(const PbsCircuit<S>& circ, bool single_use) {
  if (!single_use)
    throw Error("PBS translation needs the assertion that every wire is used at most once");
  if (circ.ports == 0) throw ShapeError("PBS circuit without ports");
  std::vector<LabeledDiagram<S>> stages;
  auto ident = detail::port_identity<S>(circ.target);
  stages.push_back(par_agnostic<S>(std::vector<LabeledDiagram<S>>(circ.ports, ident)));
  for (const auto& e : circ.elements) {
    std::vector<LabeledDiagram<S>> row;
    std::size_t k = 0;
    while (k < circ.ports) {
      if (k == e.port) {
        switch (e.kind) {
          case PbsElement<S>::Kind::Pbs:
            if (k + 1 >= circ.ports) throw ShapeError("PBS on the last port");
            row.push_back(detail::pbs_node<S>(circ.target));
            k += 2;
            continue;
          case PbsElement<S>::Kind::Flip:
            row.push_back(detail::pbs_flip<S>(circ.target));
            break;
          case PbsElement<S>::Kind::Box:
            row.push_back(detail::pbs_box<S>(e.box));
            break;
        }
      } else {
        row.push_back(ident);
      }
      ++k;
    }
    stages.push_back(par_agnostic<S>(row));
  }
  return seq_agnostic<S>(stages);
}

// ---------------------------------------------------------------------------
// Recipes, used by the command line demos.

enum class BlockKind { Enabled, OneParticle, Full };

template <Semiring S>
struct Recipe {
  std::string name;
  std::string params;
  std::function<LabeledDiagram<S>()> build;
  std::function<Matrix<S>()> reference;
  BlockKind block = BlockKind::Enabled;
};

template <Semiring S>
std::vector<Recipe<S>> recipes() {
  std::vector<Recipe<S>> out;
  using T = typename S::T;
  const T one = S::one(), zero = S::zero();
  out.push_back({"qubit", "alpha = 1, beta = 1", [] { return qubit<S>(S::one(), S::one()); },
                 [one] { return Matrix<S>::from_rows({{one}, {one}}); }});
  out.push_back({"cnot", "", [] { return cnot<S>(); },
                 [one, zero] {
                   return Matrix<S>::from_rows({{one, zero, zero, zero},
                                                {zero, one, zero, zero},
                                                {zero, zero, zero, one},
                                                {zero, zero, one, zero}});
                 }});
  out.push_back({"green", "2 inputs, 1 output, phase 1",
                 [] { return zx_green_spider<S>(2, 1, S::one()); },
                 [one] { return spider_matrix<S>(2, 1, one); }});
  out.push_back({"pbs", "polarising beam splitter", [] {
                   return lov::polarizing_beam_splitter<S>();
                 },
                 [one, zero] {
                   // |0H>->|0H>, |0V>->|1V>, |1H>->|1H>, |1V>->|0V>
                   Matrix<S> m(4, 4);
                   m(0, 0) = one;
                   m(3, 1) = one;
                   m(2, 2) = one;
                   m(1, 3) = one;
                   (void)zero;
                   return m;
                 },
                 BlockKind::OneParticle});
  if constexpr (HasNeg<S> && HasInvSqrt2<S>) {
    out.push_back({"hadamard", "", [] { return hadamard<S>(); },
                   [] { return hadamard_matrix<S>(); }});
    out.push_back({"red", "1 input, 1 output, phase -1",
                   [] { return zx_red_spider<S>(1, 1, S::neg(S::one())); },
                   [one, zero] { return Matrix<S>::from_rows({{zero, one}, {one, zero}}); }});
    out.push_back({"switch", "U = hadamard, V = negation", [] {
                     return quantum_switch<S>(hadamard<S>(), lov::negation<S>()).one_copy;
                   },
                   [] {
                     auto h = hadamard_matrix<S>();
                     Matrix<S> x = Matrix<S>::from_rows(
                         {{S::zero(), S::one()}, {S::one(), S::zero()}});
                     auto uv = matmul<S>(h, x), vu = matmul<S>(x, h);
                     Matrix<S> m(4, 4);
                     for (std::size_t r = 0; r < 2; ++r)
                       for (std::size_t c = 0; c < 2; ++c) {
                         m(r, c) = uv(r, c);
                         m(2 + r, 2 + c) = vu(r, c);
                       }
                     return m;
                   }});
  }
  if constexpr (HasPhase<S> && HasImag<S>) {
    out.push_back({"beam-splitter", "theta = pi/4",
                   [] { return lov::beam_splitter<S>(std::atan(1.0)); },
                   [] {
                     const T c = T(std::cos(std::atan(1.0)));
                     const T s = S::mul(S::imag(), T(std::sin(std::atan(1.0))));
                     Matrix<S> m(4, 4);
                     for (std::size_t p = 0; p < 2; ++p) {
                       m(p, p) = c;
                       m(2 + p, 2 + p) = c;
                       m(p, 2 + p) = s;
                       m(2 + p, p) = s;
                     }
                     return m;
                   },
                   BlockKind::OneParticle});
  }
  return out;
}

}  // namespace mw::gallery
