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

#include "mw/normform.hpp"
#include "random_diagram.hpp"

using namespace mw;

namespace {

using R = Rational;
WireType one() { return WireType(); }
WireType q() { return qubit_type(); }

/// Kronecker index, over N exclusive 1-wires, of "only wire k enabled"
/// (k = N means every wire disabled).
std::size_t exclusive_index(std::size_t k, std::size_t n) {
  std::size_t idx = 0;
  for (std::size_t w = 0; w < n; ++w) idx = idx * 2 + (w == k ? 0 : 1);
  return idx;
}

TEST(NormalForm, IsoIsBasisBijection) {
  std::mt19937_64 rng(1);
  std::vector<DiagObject> objs{DiagObject{}, DiagObject{one()}, DiagObject{q()},
                               DiagObject{WireType::prod(q(), q())}, DiagObject{q(), one()},
                               DiagObject{q(), q(), one()}};
  for (int i = 0; i < 15; ++i) objs.push_back(mwtest::random_object(rng, 3, 2, 4));
  for (const auto& obj : objs) {
    if (interp_dim(obj) > 10) continue;
    auto iso = build_iso<R>(obj);
    ASSERT_TRUE(validate(iso).empty()) << obj.str();
    const std::size_t n = interp_dim(obj) - 1;
    ASSERT_EQ(iso.out_type().size(), n);
    auto m = sem_agnostic<R>(iso);
    Matrix<R> expect(std::size_t{1} << n, n + 1);
    for (std::size_t k = 0; k <= n; ++k) expect(exclusive_index(k, n), k) = 1;
    EXPECT_TRUE(equal<R>(m, expect)) << obj.str() << "\n" << m;

    auto inv = build_iso_inv<R>(obj);
    auto round = compose_seq_agnostic<R>(iso, inv);
    EXPECT_TRUE(equal<R>(sem_agnostic<R>(round.diagram()), Matrix<R>::identity(n + 1)));
    auto other = compose_seq_agnostic<R>(inv, iso);
    EXPECT_TRUE(equal<R>(sem_agnostic<R>(other.diagram()), matmul<R>(expect, expect.transpose())));
    // Perm-node and swap-network versions agree
    auto compact = build_iso<R>(obj, false);
    EXPECT_TRUE(equal<R>(sem_agnostic<R>(compact), m));
  }
  EXPECT_TRUE(build_iso_inv<R>(DiagObject{}).term->is_empty());
}

TEST(NormalForm, MatrixBlock) {
  Matrix<R> l = Matrix<R>::from_rows({{5}});
  Matrix<R> m = Matrix<R>::from_rows({{7}});
  auto bl = build_matrix_block<R>(l), bm = build_matrix_block<R>(m);
  EXPECT_TRUE(validate(bl).empty());
  auto c = compose_seq_agnostic<R>(bl, bm);
  EXPECT_TRUE(equal<R>(sem_agnostic<R>(c.diagram()), Matrix<R>::from_rows({{35}})));

  std::mt19937_64 rng(2);
  for (int it = 0; it < 20; ++it) {
    std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 4;
    Matrix<R> u(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) u(i, j) = R::random(rng);
    auto b = build_matrix_block<R>(u);
    ASSERT_TRUE(validate(b).empty());
    EXPECT_EQ(b.worlds.size(), rows * cols);
    auto s = sem_agnostic<R>(b);
    for (std::size_t j = 0; j < rows; ++j)
      for (std::size_t i = 0; i < cols; ++i)
        EXPECT_EQ(s(exclusive_index(j, rows - 1), exclusive_index(i, cols - 1)), u(j, i));
  }
}

TEST(NormalForm, SynthesizeAndNormalize) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 25; ++it) {
    auto a = mwtest::random_object(rng, 2, 2, 3);
    auto b = mwtest::random_object(rng, 2, 2, 3);
    if (interp_dim(a) > 12 || interp_dim(b) > 12) continue;
    Matrix<R> u(interp_dim(b), interp_dim(a));
    for (std::size_t i = 0; i < u.rows(); ++i)
      for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) = R::random(rng);
    auto d = synthesize<R>(a, b, u);
    EXPECT_TRUE(validate(d.diagram()).empty());
    EXPECT_TRUE(equal<R>(sem_agnostic<R>(d.diagram()), u));
    auto nf = normalize<R>(d.diagram());
    EXPECT_TRUE(equal<R>(nf.lambda, u));
    // idempotent on its own composite
    EXPECT_TRUE(nf_equal<R>(normalize<R>(nf.composite), nf));
  }
  auto id = canonical_identity<R>(DiagObject{q(), one()});
  auto nf = normalize<R>(id.diagram());
  EXPECT_TRUE(equal<R>(nf.lambda, Matrix<R>::identity(6)));
  EXPECT_TRUE(equal<R>(sem_agnostic<R>(nf.composite), Matrix<R>::identity(6)));
  EXPECT_THROW(synthesize<R>(DiagObject{q()}, DiagObject{q()}, Matrix<R>(2, 3)), ShapeError);
}

TEST(NormalForm, RandomDiagramsNormalize) {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 30; ++it) {
    auto d = mwtest::random_diagram<R>(rng, mwtest::random_object(rng, 2, 1, 2), 3, 8);
    auto nf = normalize<R>(d);
    EXPECT_TRUE(validate(nf.composite).empty());
    EXPECT_TRUE(equal<R>(sem_agnostic<R>(nf.composite), sem_agnostic<R>(d)));
    auto d2 = compose_seq_agnostic<R>(d, canonical_identity<R>(d.out_type()));
    EXPECT_TRUE(equivalent<R>(d, d2.diagram()));
  }
}

}  // namespace
