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

#include <random>
#include <set>

#include "mw/gallery.hpp"
#include "mw/normform.hpp"
#include "mw/textfmt.hpp"
#include "random_diagram.hpp"

using namespace mw;
namespace g = mw::gallery;

namespace {

template <Semiring S>
void expect_round_trip(const LabeledDiagram<S>& d) {
  const auto text = print_diagram(d);
  auto back = parse_diagram<S>(text);
  EXPECT_TRUE(diagram_equal<S>(d, back)) << text;
  EXPECT_EQ(print_diagram(back), text);
  EXPECT_TRUE(equal<S>(sem_agnostic<S>(d), sem_agnostic<S>(back)));
}

}  // namespace

TEST(TextFormat, ParsesTheDocumentedExample) {
  auto d = parse_diagram<Rational>(R"(
; two branches merged into one sum wire
(worlds a b c star)
(seq
  (par (plus 1 1 {a} {b}) (id (1 + 1) {c}))
  (contraction (1 + 1) {a,b} {c}))
)");
  EXPECT_EQ(d.worlds.size(), 4u);
  EXPECT_EQ(d.in_type().size(), 3u);
  EXPECT_EQ(d.out_type().size(), 1u);
  EXPECT_TRUE(is_valid(d)) << validate(d).size();
}

TEST(TextFormat, RoundTripsGallery) {
  expect_round_trip(g::hadamard<QSqrt2i>());
  expect_round_trip(g::cnot<Rational>());
  expect_round_trip(g::qubit<Complex>({0.25, -1.5}, {0, 1}));
  auto qs = g::quantum_switch<QSqrt2i>(g::hadamard<QSqrt2i>(), g::lov::negation<QSqrt2i>());
  expect_round_trip(qs.one_copy);
  expect_round_trip(qs.two_copy);
  expect_round_trip(normalize<Rational>(g::cnot<Rational>()).composite);
}

TEST(TextFormat, RoundTripsRandomDiagrams) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 30; ++i) {
    auto in = mwtest::random_object(rng, 2, 1, 3);
    expect_round_trip(mwtest::random_diagram<Rational>(rng, in, 1 + rng() % 4, 6));
  }
}

TEST(TextFormat, ExplicitPortsKeepInvalidLabels) {
  // a tensor whose inputs disagree cannot be written in natural form
  auto d = parse_diagram<Boolean>("(worlds a b) (tensor 1 1 (in {a} {b}) (out {a}))");
  EXPECT_FALSE(is_valid(d));
  EXPECT_NE(print_diagram(d).find("(in {a} {b})"), std::string::npos);
  expect_round_trip(d);
}

TEST(TextFormat, PermAndEmpty) {
  expect_round_trip(parse_diagram<Rational>("(worlds a b) (perm (1 0) (1 + 1) {a} 1 {b})"));
  auto e = parse_diagram<Rational>("(worlds) (par)");
  EXPECT_TRUE(e.term->is_empty());
  expect_round_trip(e);
}

TEST(TextFormat, Errors) {
  using Pos = std::pair<std::size_t, std::size_t>;
  auto where = [](const char* src) -> Pos {
    try {
      parse_diagram<Rational>(src);
    } catch (const ParseError& e) {
      return {e.line(), e.col()};
    }
    return {0, 0};
  };
  EXPECT_EQ(where("(worlds a)\n(id 1 {b})"), Pos(2, 8));
  EXPECT_EQ(where("(worlds a)\n(frob 1 {a})"), Pos(2, 2));
  EXPECT_EQ(where("(worlds a)\n(id (1 + ) {a})"), Pos(2, 5));
  EXPECT_EQ(where("(worlds a)\n(scalar 1 x {a})"), Pos(2, 11));
  EXPECT_EQ(where("(worlds a)\n(seq (id 1 {a}) (id (1 + 1) {a}))").first, 2u);
  EXPECT_EQ(where("(worlds a a) (par)").first, 1u);
  EXPECT_EQ(where("(id 1 {a})").first, 1u);
}

TEST(TextFormat, ScalarsOverEachSemiring) {
  auto q = parse_diagram<QSqrt2i>("(worlds a) (scalar 1 \"(1 + i) * isqrt2\" {a})");
  expect_round_trip(q);
  auto c = parse_diagram<Complex>("(worlds a) (scalar 1 0.5-2i {a})");
  EXPECT_NEAR(std::abs(sem_agnostic<Complex>(c)(0, 0) - Complex::T(0.5, -2)), 0, 1e-12);
  EXPECT_THROW(parse_diagram<NonNeg>("(worlds a) (scalar 1 -1 {a})"), ParseError);
}

TEST(TextFormat, Dot) {
  auto dot = to_dot(g::cnot<Rational>());
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("in0 -> "), std::string::npos);
  EXPECT_NE(dot.find("-> out1"), std::string::npos);
  EXPECT_NE(dot.find("(1 + 1) : {"), std::string::npos);
  // every wire is one edge
  auto net = Net<Rational>::from_diagram(g::cnot<Rational>());
  std::size_t wires = net.inputs.size();
  for (const auto& op : net.ops) wires += op.outs.size();
  std::size_t edges = 0;
  for (std::size_t p = dot.find(" -> "); p != std::string::npos; p = dot.find(" -> ", p + 1)) ++edges;
  EXPECT_EQ(edges, wires);
}

TEST(TextFormat, BasisHeaders) {
  DiagObject q({qubit_type(), WireType()});
  std::vector<std::string> hs;
  for (std::size_t k = 0; k < interp_dim(q); ++k) hs.push_back(basis_header(q, k));
  // every header distinct, the all-disabled one last
  std::set<std::string> uniq(hs.begin(), hs.end());
  EXPECT_EQ(uniq.size(), hs.size());
  EXPECT_EQ(hs.back(), "(•,•)");
  auto t = matrix_table<Rational>(sem_agnostic<Rational>(g::cnot<Rational>()), g::cnot<Rational>().in_type(),
                                  g::cnot<Rational>().out_type());
  EXPECT_NE(t.find("(1,0)"), std::string::npos);
}
