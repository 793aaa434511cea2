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

#include <cmath>
#include <random>

#include "mw/gallery.hpp"
#include "mw/normform.hpp"
#include "oracle.hpp"

using namespace mw;
namespace g = mw::gallery;

namespace {

template <Semiring S>
Matrix<S> random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  Matrix<S> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = S::random(rng);
  return m;
}

/// Identity on one qubit over a single world (no all-disabled world).
template <Semiring S>
LabeledDiagram<S> bare_identity() {
  WorldSet W({"a"});
  return {W, leaf<S>(gen::id<S>(qubit_type(), W.full_label()), 1)};
}

template <Semiring S>
void expect_oracle_agrees(const LabeledDiagram<S>& d) {
  ASSERT_TRUE(is_valid(d));
  EXPECT_TRUE(equal<S>(sem_agnostic<S>(d), mwtest::oracle_semantics<S>(d)));
}

}  // namespace

TEST(Gallery, HadamardExact) {
  auto h = g::hadamard<QSqrt2i>();
  ASSERT_TRUE(is_valid(h));
  auto blk = enabled_block<QSqrt2i>(h);
  const auto r = QSqrt2i::inv_sqrt2();
  EXPECT_TRUE(equal<QSqrt2i>(blk, Matrix<QSqrt2i>::from_rows({{r, r}, {r, QSqrt2i::neg(r)}})));
  // disabled-to-disabled entry is zero: no world switches the wire off
  EXPECT_TRUE(QSqrt2i::is_zero(sem_agnostic<QSqrt2i>(h)(2, 2)));
  expect_oracle_agrees(h);
}

TEST(Gallery, HadamardComplex) {
  auto blk = enabled_block<Complex>(g::hadamard<Complex>());
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(blk(0, 0) - r), 0, 1e-12);
  EXPECT_NEAR(std::abs(blk(0, 1) - r), 0, 1e-12);
  EXPECT_NEAR(std::abs(blk(1, 0) - r), 0, 1e-12);
  EXPECT_NEAR(std::abs(blk(1, 1) + r), 0, 1e-12);
}

TEST(Gallery, HadamardInvolution) {
  using Q = QSqrt2i;
  auto h = g::hadamard<Q>();
  auto hh = compose_seq_agnostic<Q>(h, h);
  EXPECT_TRUE(equivalent<Q>(hh.diagram(), bare_identity<Q>()));
  EXPECT_FALSE(equivalent<Q>(h, bare_identity<Q>()));
  // with the all-disabled world added back, against the canonical identity
  auto hs = g::add_star<Q>(h);
  auto hhs = compose_seq_agnostic<Q>(hs, hs);
  EXPECT_TRUE(equivalent<Q>(hhs.diagram(), canonical_identity<Q>({qubit_type()}).diagram()));
}

TEST(Gallery, QubitThroughHadamard) {
  using Q = QSqrt2i;
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    auto a = Q::random(rng), b = Q::random(rng);
    auto d = compose_seq_agnostic<Q>(g::qubit<Q>(a, b), g::hadamard<Q>());
    auto blk = enabled_block<Q>(d.diagram());
    const auto r = Q::inv_sqrt2();
    EXPECT_TRUE(Q::approx_equal(blk(0, 0), Q::mul(r, Q::add(a, b)), 0));
    EXPECT_TRUE(Q::approx_equal(blk(1, 0), Q::mul(r, Q::add(a, Q::neg(b))), 0));
  }
}

TEST(Gallery, CnotMatchesOracle) {
  using R = Rational;
  auto c = g::cnot<R>();
  ASSERT_TRUE(is_valid(c));
  auto sem = sem_agnostic<R>(c);
  EXPECT_TRUE(equal<R>(sem, mwtest::oracle_semantics<R>(c)));
  Matrix<R> perm(4, 4);
  perm(0, 0) = 1;
  perm(1, 1) = 1;
  perm(3, 2) = 1;
  perm(2, 3) = 1;
  EXPECT_TRUE(equal<R>(enabled_block<R>(sem, c.in_type(), c.out_type()), perm));
}

TEST(Gallery, QuantumSwitch) {
  using R = Rational;
  std::mt19937_64 rng(9);
  for (int k = 0; k < 5; ++k) {
    auto um = random_matrix<R>(rng, 2, 2), vm = random_matrix<R>(rng, 2, 2);
    auto qs = g::quantum_switch<R>(g::gate2<R>(um), g::gate2<R>(vm));
    ASSERT_TRUE(is_valid(qs.one_copy));
    ASSERT_TRUE(is_valid(qs.two_copy));
    auto uv = matmul<R>(um, vm), vu = matmul<R>(vm, um);
    Matrix<R> expect(4, 4);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) {
        expect(r, c) = uv(r, c);
        expect(2 + r, 2 + c) = vu(r, c);
      }
    EXPECT_TRUE(equal<R>(enabled_block<R>(qs.one_copy), expect));
    EXPECT_TRUE(equivalent<R>(qs.one_copy, qs.two_copy));
    EXPECT_TRUE(equal<R>(sem_agnostic<R>(qs.one_copy), mwtest::oracle_semantics<R>(qs.one_copy)));
  }
}

TEST(Gallery, GreenSpiders) {
  using R = Rational;
  for (std::size_t i = 0; i <= 2; ++i)
    for (std::size_t o = 0; o <= 2; ++o) {
      auto s = g::zx_green_spider<R>(i, o, R::T(3));
      ASSERT_TRUE(is_valid(s));
      EXPECT_TRUE(equal<R>(enabled_block<R>(s), g::spider_matrix<R>(i, o, R::T(3))))
          << i << " " << o;
      expect_oracle_agrees(s);
    }
  // fusion of two one-legged spiders along a wire
  auto f = compose_seq_agnostic<R>(g::zx_green_spider<R>(1, 1, R::T(2)),
                                   g::zx_green_spider<R>(1, 1, R::T(5)));
  EXPECT_TRUE(equal<R>(enabled_block<R>(f.diagram()), g::spider_matrix<R>(1, 1, R::T(10))));
}

TEST(Gallery, RedSpiderIsNot) {
  using Q = QSqrt2i;
  auto x = g::zx_red_spider<Q>(1, 1, Q::neg(Q::one()));
  EXPECT_TRUE(equal<Q>(enabled_block<Q>(x),
                       Matrix<Q>::from_rows({{Q::zero(), Q::one()}, {Q::one(), Q::zero()}})));
  auto z = g::zx_green_spider<Complex>(1, 1, std::atan(1.0) * 4);
  EXPECT_TRUE(equal<Complex>(enabled_block<Complex>(z),
                             Matrix<Complex>::from_rows({{1.0, 0.0}, {0.0, -1.0}})));
}

TEST(Gallery, LinearOptics) {
  using C = Complex;
  auto bs = g::lov::beam_splitter<C>(0.3);
  ASSERT_TRUE(is_valid(bs));
  auto m = g::one_particle_block<C>(sem_agnostic<C>(bs), bs.in_type(), bs.out_type());
  ASSERT_EQ(m.rows(), 4u);
  Matrix<C> mh(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) mh(i, j) = std::conj(m(j, i));
  EXPECT_TRUE(equal<C>(matmul<C>(mh, m), Matrix<C>::identity(4)));
  expect_oracle_agrees(bs);
  // the star world maps vacuum to vacuum
  auto full = sem_agnostic<C>(bs);
  EXPECT_NEAR(std::abs(full(8, 8) - 1.0), 0, 1e-12);

  auto ps = g::lov::phase_shifter<C>(0.7);
  auto pb = enabled_block<C>(ps);
  EXPECT_NEAR(std::abs(pb(0, 0) - std::polar(1.0, 0.7)), 0, 1e-12);
  EXPECT_NEAR(std::abs(pb(1, 1) - std::polar(1.0, 0.7)), 0, 1e-12);

  auto wp = g::lov::wave_plate<C>(0.4);
  auto wb = enabled_block<C>(wp);
  EXPECT_NEAR(std::abs(wb(0, 1) - C::T(0, std::sin(0.4))), 0, 1e-12);

  auto vac = g::lov::vacuum_source<C>();
  auto vs = sem_agnostic<C>(vac);
  ASSERT_EQ(vs.rows(), 3u);
  EXPECT_NEAR(std::abs(vs(2, 0) - 1.0), 0, 1e-12);
}

TEST(Gallery, PathFragment) {
  using R = Rational;
  auto loop = seq_agnostic<R>({g::path::split<R>(), g::path::merge<R>()});
  // both branch worlds survive the gluing, so the photon is counted twice
  EXPECT_TRUE(equal<R>(sem_agnostic<R>(loop.diagram()), Matrix<R>::from_rows({{2, 0}, {0, 1}})));
  expect_oracle_agrees(loop.diagram());
  // (a, a) and (star, star) both contribute
  auto ket = compose_seq_agnostic<R>(g::path::ket1<R>(), g::path::bra1<R>());
  EXPECT_TRUE(equal<R>(sem_agnostic<R>(ket.diagram()), Matrix<R>::from_rows({{2}})));
  expect_oracle_agrees(g::path::empty<R>());
}

TEST(Gallery, PbsCircuit) {
  using R = Rational;
  g::PbsCircuit<R> c;
  c.ports = 2;
  c.target = qubit_type();
  c.elements.push_back({g::PbsElement<R>::Kind::Flip, 1, {}});
  c.elements.push_back({g::PbsElement<R>::Kind::Pbs, 0, {}});
  EXPECT_THROW(g::pbs_translate<R>(c, false), Error);
  auto d = g::pbs_translate<R>(c, true);
  ASSERT_TRUE(is_valid(d));
  expect_oracle_agrees(d);
  // a photon on port 0 with polarisation H stays on port 0
  auto sem = sem_agnostic<R>(d);
  auto one_port = [&](std::size_t port, std::size_t pol, std::size_t t) {
    mwtest::Tuple tu(4, -1);
    tu[2 * port] = static_cast<long>(pol);
    tu[2 * port + 1] = static_cast<long>(t);
    return mwtest::tuple_index(d.in_type(), tu);
  };
  EXPECT_EQ(sem(one_port(0, 0, 1), one_port(0, 0, 1)), 1);
  // port 1 gets flipped to V and is reflected onto port 0
  EXPECT_EQ(sem(one_port(0, 1, 0), one_port(1, 0, 0)), 1);
}

template <Semiring S>
void check_recipes() {
  for (const auto& r : g::recipes<S>()) {
    auto d = r.build();
    ASSERT_TRUE(is_valid(d)) << r.name;
    auto sem = sem_agnostic<S>(d);
    Matrix<S> blk = r.block == g::BlockKind::OneParticle
                        ? g::one_particle_block<S>(sem, d.in_type(), d.out_type())
                        : enabled_block<S>(sem, d.in_type(), d.out_type());
    EXPECT_TRUE(equal<S>(blk, r.reference())) << S::name() << " " << r.name << "\n" << blk;
    EXPECT_TRUE(equal<S>(sem, mwtest::oracle_semantics<S>(d))) << r.name;
  }
}

TEST(Gallery, RecipesAllSemirings) {
  check_recipes<Complex>();
  check_recipes<QSqrt2i>();
  check_recipes<Rational>();
  check_recipes<Boolean>();
  check_recipes<NonNeg>();
}
