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

#include <gtest/gtest.h>

#include "mw/builder.hpp"
#include "mw/semantics.hpp"
#include "random_diagram.hpp"

using namespace mw;

namespace {

using R = Rational;
WireType one() { return WireType(); }
WireType q() { return qubit_type(); }

bool has_violation(const LabeledDiagram<R>& d, const std::string& c) {
  for (const auto& v : validate(d))
    if (v.constraint == c) return true;
  return false;
}

TEST(Diagram, ValidateDetectsDisjointness) {
  WorldSet W({"a", "b"});
  LabeledDiagram<R> d{W, leaf<R>(gen::plus<R>(one(), one(), W.label({0}), W.label({0})), 2)};
  EXPECT_TRUE(has_violation(d, "disjointness"));
  LabeledDiagram<R> ok{W, leaf<R>(gen::plus<R>(one(), one(), W.label({0}), W.label({1})), 2)};
  EXPECT_TRUE(validate(ok).empty());
}

TEST(Diagram, ValidateDetectsGluing) {
  WorldSet W({"a", "b"});
  auto f = leaf<R>(gen::id<R>(q(), W.label({0})), 2);
  auto g = leaf<R>(gen::id<R>(q(), W.label({1})), 2);
  LabeledDiagram<R> d{W, seq<R>({f, g})};
  EXPECT_TRUE(has_violation(d, "gluing"));
  EXPECT_THROW(compose_seq_fixed<R>({W, f}, {W, g}), ShapeError);
  auto h = compose_seq_fixed<R>({W, f}, {W, f});
  EXPECT_TRUE(validate(h).empty());
  EXPECT_TRUE(equal<R>(sem_agnostic<R>(h), sem_agnostic<R>(LabeledDiagram<R>{W, f})));
}

TEST(Diagram, ValidateOtherConstraints) {
  WorldSet W(3);
  auto bad_union = gen::contraction<R>(q(), {W.label({0}), W.label({1})}, 3);
  bad_union.out[0] = W.label({0});
  EXPECT_TRUE(has_violation({W, leaf<R>(bad_union, 3)}, "union"));
  auto bad_tensor = gen::tensor<R>(q(), one(), W.label({0}));
  bad_tensor.in[1] = W.label({1});
  EXPECT_TRUE(has_violation({W, leaf<R>(bad_tensor, 3)}, "label-equality"));
  auto bad_cd = gen::contraction_dag<R>(q(), {W.label({0, 1}), W.label({1})}, 3);
  EXPECT_TRUE(has_violation({W, leaf<R>(bad_cd, 3)}, "disjointness"));
}

template <class S>
void expect_identity(const LabeledDiagram<S>& d) {
  auto m = sem_agnostic<S>(d);
  EXPECT_TRUE(equal<S>(m, Matrix<S>::identity(m.rows()))) << m;
}

TEST(Diagram, SnakeAndSwapInvolution) {
  std::mt19937_64 rng(1);
  for (int it = 0; it < 30; ++it) {
    auto t = mwtest::random_type(rng, 2, 4);
    WorldSet W({"a", "star"});
    Label w = W.label({0});
    DiagramBuilder<R> b(2);
    auto x = b.input(t, w);
    auto [c1, c2] = b.cap(t, w);
    b.cup(x, c1);
    auto d = b.diagram(W, {c2});
    EXPECT_TRUE(validate(d).empty());
    expect_identity(d);
    // and the other orientation
    DiagramBuilder<R> b2(2);
    auto y = b2.input(t, w);
    auto [e1, e2] = b2.cap(t, w);
    b2.cup(e2, y);
    expect_identity(b2.diagram(W, {e1}));

    auto u = mwtest::random_type(rng, 2, 4);
    WorldSet V({"a", "b", "c", "star"});
    auto s1 = leaf<R>(gen::swap<R>(t, u, V.label({0, 2}), V.label({1, 2})), 4);
    auto s2 = leaf<R>(gen::swap<R>(u, t, V.label({1, 2}), V.label({0, 2})), 4);
    LabeledDiagram<R> ss{V, seq<R>({s1, s2})};
    EXPECT_TRUE(validate(ss).empty());
    expect_identity(ss);
  }
}

std::vector<LabeledDiagram<R>> canonical_generators(const WireType& a, const WireType& b) {
  std::vector<LabeledDiagram<R>> gs;
  for (auto k : {GenKind::Id, GenKind::Swap, GenKind::Cup, GenKind::Cap, GenKind::Plus,
                 GenKind::PlusDag, GenKind::Tensor, GenKind::TensorDag, GenKind::Unit,
                 GenKind::UnitDag, GenKind::Scalar})
    gs.push_back(canonical_generator<R>(k, a, b, 0, mpq_class(3, 2)));
  for (std::size_t n : {0u, 1u, 2u, 3u}) {
    gs.push_back(canonical_generator<R>(GenKind::Contraction, a, {}, n));
    gs.push_back(canonical_generator<R>(GenKind::ContractionDag, a, {}, n));
  }
  return gs;
}

TEST(Diagram, MirrorMatchesDedicatedGenerators) {
  std::mt19937_64 rng(2);
  for (int it = 0; it < 10; ++it) {
    auto a = mwtest::random_type(rng, 1, 3), b = mwtest::random_type(rng, 1, 3);
    for (const auto& d : canonical_generators(a, b)) {
      const auto& g = d.term->gen();
      auto m = mirror<R>(g, d.worlds);
      EXPECT_TRUE(validate(m).empty()) << gen_name(g.kind);
      LabeledDiagram<R> ded{d.worlds, leaf<R>(gen::mirrored<R>(g), d.worlds.size())};
      auto sm = sem_agnostic<R>(m);
      EXPECT_TRUE(equal<R>(sm, sem_agnostic<R>(ded))) << gen_name(g.kind);
      EXPECT_TRUE(equal<R>(sm, sem_agnostic<R>(d).transpose())) << gen_name(g.kind);
      // mirror of the mirrored generator is the generator again
      auto back = mirror<R>(gen::mirrored<R>(g), d.worlds);
      EXPECT_TRUE(equal<R>(sem_agnostic<R>(back), sem_agnostic<R>(d))) << gen_name(g.kind);
      for (std::size_t w = 0; w < d.worlds.size(); ++w)
        EXPECT_TRUE(equal<R>(sem_world<R>(m, w), sem_world<R>(ded, w)));
    }
  }
}

TEST(Diagram, Dagger) {
  WorldSet W({"a", "star"});
  LabeledDiagram<R> u{W, leaf<R>(gen::unit<R>(W.label({0})), 2)};
  EXPECT_EQ(dagger(u).term->gen().kind, GenKind::UnitDag);
  LabeledDiagram<R> p = canonical_generator<R>(GenKind::Plus, q(), one());
  EXPECT_EQ(dagger(p).term->gen().kind, GenKind::PlusDag);

  std::mt19937_64 rng(3);
  for (int it = 0; it < 40; ++it) {
    auto in = mwtest::random_object(rng, 2, 1, 2);
    auto d = mwtest::random_diagram<R>(rng, in, 1 + rng() % 4, 8);
    ASSERT_TRUE(validate(d).empty());
    auto dd = dagger(d);
    EXPECT_TRUE(validate(dd).empty());
    EXPECT_TRUE(diagram_equal(dagger(dd), d));
    EXPECT_TRUE(equal<R>(sem_agnostic<R>(dd), sem_agnostic<R>(d).transpose()));
  }
}

TEST(Diagram, PermNodesMatchSwapNetworks) {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 40; ++it) {
    const std::size_t n = 1 + rng() % 3;
    auto obj = mwtest::random_object(rng, 5, 1, 3);
    std::vector<Label> ls;
    for (std::size_t i = 0; i < obj.size(); ++i) ls.push_back(mwtest::random_label(rng, n));
    std::vector<std::size_t> perm(obj.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    LabeledDiagram<R> p{WorldSet(n), Term<R>::make_perm(obj, ls, perm, n)};
    LabeledDiagram<R> s{WorldSet(n), swap_network<R>(obj, ls, perm, n)};
    EXPECT_TRUE(validate(s).empty());
    EXPECT_FALSE(has_perms<R>(s.term));
    EXPECT_TRUE(equal<R>(sem_agnostic<R>(p), sem_agnostic<R>(s)));
    for (std::size_t w = 0; w < n; ++w) EXPECT_TRUE(equal<R>(sem_world<R>(p, w), sem_world<R>(s, w)));
  }
}

TEST(Agnostic, ParallelExample) {
  WorldSet Wa({"a", "star"}), Wb({"b", "star"});
  LabeledDiagram<R> f{Wa, leaf<R>(gen::id<R>(q(), Wa.label({0})), 2)};
  LabeledDiagram<R> g{Wb, leaf<R>(gen::id<R>(q(), Wb.label({0})), 2)};
  auto fg = compose_par_agnostic<R>(f, g);
  ASSERT_EQ(fg.worlds().size(), 4u);
  // every combination of the two wires being on or off appears once
  std::set<std::pair<bool, bool>> combos;
  for (std::size_t w = 0; w < 4; ++w)
    combos.insert({fg.diagram().in_labels()[0][w], fg.diagram().in_labels()[1][w]});
  EXPECT_EQ(combos.size(), 4u);
  EXPECT_TRUE(equal<R>(sem_agnostic<R>(fg.diagram()),
                       kron<R>(sem_agnostic<R>(f), sem_agnostic<R>(g))));
  // unit of the parallel composition
  LabeledDiagram<R> e{WorldSet(1), Term<R>::empty(1)};
  auto fe = compose_par_agnostic<R>(f, e);
  EXPECT_EQ(fe.worlds().size(), 2u);
  EXPECT_TRUE(equal<R>(sem_agnostic<R>(fe.diagram()), sem_agnostic<R>(f)));
}

TEST(Agnostic, SequentialExample) {
  WorldSet Wa({"a", "star"}), Wb({"b", "star"}), Wc({"c", "star"});
  LabeledDiagram<R> f{Wa, leaf<R>(gen::id<R>(q(), Wa.label({0})), 2)};
  LabeledDiagram<R> g{Wb, leaf<R>(gen::id<R>(q(), Wb.label({0})), 2)};
  LabeledDiagram<R> cup{Wc, leaf<R>(gen::cup<R>(q(), Wc.label({0})), 2)};
  auto d = compose_seq_agnostic<R>(compose_par_agnostic<R>(f, g), cup);
  ASSERT_EQ(d.worlds().size(), 2u);
  EXPECT_EQ(d.worlds().name(0), "((a,b),c)");
  EXPECT_EQ(d.worlds().name(1), "((star,star),star)");
  EXPECT_TRUE(validate(d.diagram()).empty());
}

TEST(Agnostic, IdentityAndDisjointBoundaries) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 30; ++it) {
    auto in = mwtest::random_object(rng, 2, 1, 2);
    auto f = mwtest::random_diagram<R>(rng, in, 1 + rng() % 4, 6);
    auto fi = compose_seq_agnostic<R>(f, canonical_identity<R>(f.out_type()));
    EXPECT_EQ(fi.worlds().size(), f.worlds.size());
    EXPECT_TRUE(equal<R>(sem_agnostic<R>(fi.diagram()), sem_agnostic<R>(f)));
    auto if_ = compose_seq_agnostic<R>(canonical_identity<R>(f.in_type()), f);
    EXPECT_EQ(if_.worlds().size(), f.worlds.size());
  }
  // f enabled only in a, g enabled only in b' where the two never agree
  WorldSet W({"a", "s"}), V({"b", "t"});
  LabeledDiagram<R> f{W, leaf<R>(gen::id<R>(q(), W.label({0})), 2)};
  LabeledDiagram<R> g{V, leaf<R>(gen::id<R>(q(), V.label({0})), 2)};
  auto fg = compose_seq_agnostic<R>(f, g);
  EXPECT_EQ(fg.worlds().size(), 2u);  // (a,b) and (s,t)
  LabeledDiagram<R> h{V, leaf<R>(gen::id<R>(q(), V.label({0, 1})), 2)};
  auto fh = compose_seq_agnostic<R>(f, h);
  EXPECT_EQ(fh.worlds().size(), 2u);  // (a,b), (a,t): s has no partner
  LabeledDiagram<R> k{V, leaf<R>(gen::id<R>(q(), V.empty_label()), 2)};
  LabeledDiagram<R> all{W, leaf<R>(gen::id<R>(q(), W.full_label()), 2)};
  EXPECT_EQ(compose_seq_agnostic<R>(all, k).worlds().size(), 0u);
  EXPECT_TRUE(sem_agnostic<R>(compose_seq_agnostic<R>(all, k).diagram()).is_zero());
}

TEST(Agnostic, AssociativityAndValidity) {
  std::mt19937_64 rng(6);
  for (int it = 0; it < 40; ++it) {
    auto in = mwtest::random_object(rng, 2, 1, 2);
    auto f = mwtest::random_diagram<R>(rng, in, 1 + rng() % 3, 5);
    auto g = mwtest::random_diagram<R>(rng, f.out_type(), 1 + rng() % 3, 5);
    auto h = mwtest::random_diagram<R>(rng, g.out_type(), 1 + rng() % 3, 5);
    auto l = compose_seq_agnostic<R>(compose_seq_agnostic<R>(f, g), h);
    auto r = compose_seq_agnostic<R>(f, compose_seq_agnostic<R>(g, h));
    EXPECT_TRUE(validate(l.diagram()).empty());
    EXPECT_TRUE(diagram_equal(l.diagram(), r.diagram()));
    EXPECT_TRUE(check_functoriality<R>(f, g));
    auto p = compose_par_agnostic<R>(f, h);
    EXPECT_TRUE(validate(p.diagram()).empty());
  }
}

TEST(Semantics, GeneratorExamples) {
  WorldSet W({"a", "star"});
  LabeledDiagram<R> s{W, leaf<R>(gen::scalar<R>(q(), mpq_class(5), W.label({0})), 2)};
  EXPECT_TRUE(equal<R>(sem_world<R>(s, 0), scalar_mul<R>(mpq_class(5), Matrix<R>::identity(2))));
  EXPECT_TRUE(equal<R>(sem_world<R>(s, 1), Matrix<R>::unit()));
  auto p = canonical_generator<R>(GenKind::Plus, q(), one());
  EXPECT_TRUE(equal<R>(sem_world<R>(p, 2), Matrix<R>::unit()));
  EXPECT_EQ(sem_world<R>(p, 0).rows(), 3u);
  EXPECT_EQ(sem_world<R>(p, 0).cols(), 2u);
  auto c = canonical_generator<R>(GenKind::Contraction, q(), {}, 3);
  for (std::size_t w = 0; w < 3; ++w)
    EXPECT_TRUE(equal<R>(sem_world<R>(c, w), Matrix<R>::identity(2)));
  auto pd = canonical_generator<R>(GenKind::PlusDag, q(), one());
  EXPECT_TRUE(equal<R>(sem_agnostic<R>(pd), sem_agnostic<R>(p).transpose()));
  auto id = canonical_identity<R>(DiagObject{q(), one()});
  expect_identity(id.diagram());
  // renaming invariance
  std::mt19937_64 rng(8);
  for (int it = 0; it < 20; ++it) {
    auto d = mwtest::random_diagram<R>(rng, mwtest::random_object(rng, 2, 1, 2), 4, 6);
    auto cd = canonicalize(d);
    EXPECT_TRUE(equal<R>(sem_agnostic<R>(cd), sem_agnostic<R>(d)));
  }
}

}  // namespace
