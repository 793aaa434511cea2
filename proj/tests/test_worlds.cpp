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

#include <algorithm>
#include <numeric>

#include "mw/worlds.hpp"
#include "testutil.hpp"

using namespace mw;

namespace {

TEST(Worlds, Product) {
  WorldSet w({"a", "star"}), v({"b", "star"});
  auto p = product(w, v);
  ASSERT_EQ(p.set.size(), 4u);
  EXPECT_EQ(p.set.name(0), "(a,b)");
  EXPECT_EQ(p.set.name(1), "(a,star)");
  EXPECT_EQ(p.set.name(2), "(star,b)");
  EXPECT_EQ(p.set.name(3), "(star,star)");
  EXPECT_EQ(p.lift_left(w.label({0})), p.set.label({0, 1}));
  EXPECT_EQ(p.lift_right(v.label({0})), p.set.label({0, 2}));
  EXPECT_EQ(product(WorldSet(0), v).set.size(), 0u);
}

TEST(Worlds, EliminateExamples) {
  // W x V x U with W={a,*}, V={b,*}, U={c,*}; index = 4i + 2j + k
  const std::size_t n = 8;
  auto lab = [&](auto pred) {
    Label l(n);
    for (std::size_t z = 0; z < n; ++z) l[z] = pred(z >> 2 & 1, z >> 1 & 1, z & 1);
    return l;
  };
  // left wire {a}xVxU, right wire Wx{b}xU, cup legs WxVx{c}
  Label left = lab([](int i, int, int) { return i == 0; });
  Label right = lab([](int, int j, int) { return j == 0; });
  Label cup = lab([](int, int, int k) { return k == 0; });
  Label z = eliminate(n, {{left, cup}, {right, cup}});
  EXPECT_EQ(z.count(), 2u);
  EXPECT_TRUE(z[0]);  // (a,b,c)
  EXPECT_TRUE(z[7]);  // (*,*,*)

  Label all(n);
  all.set();
  EXPECT_EQ(eliminate(n, {{left, left}, {cup, cup}}), all);
  EXPECT_TRUE(eliminate(n, {{Label(n), all}}).none());
}

TEST(Worlds, EliminateProperties) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<std::pair<Label, Label>> cs;
    for (int k = 0; k < 4; ++k)
      cs.push_back({mwtest::random_label(rng, n), mwtest::random_label(rng, n)});
    Label z = eliminate(n, cs);
    // brute force oracle
    for (std::size_t x = 0; x < n; ++x) {
      bool ok = true;
      for (auto& [l, r] : cs) ok = ok && (l[x] == r[x]);
      EXPECT_EQ(static_cast<bool>(z[x]), ok);
    }
    // monotone
    auto more = cs;
    more.push_back({mwtest::random_label(rng, n), mwtest::random_label(rng, n)});
    EXPECT_TRUE(eliminate(n, more).is_subset_of(z));
    // fixed point after restriction
    std::vector<std::size_t> keep;
    for (std::size_t x = 0; x < n; ++x)
      if (z[x]) keep.push_back(x);
    std::vector<std::pair<Label, Label>> rs;
    for (auto& [l, r] : cs) rs.push_back({restrict_label(l, keep), restrict_label(r, keep)});
    EXPECT_EQ(eliminate(keep.size(), rs).count(), keep.size());
  }
}

TEST(Worlds, MatchingPairsAgreesWithEliminate) {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 100; ++it) {
    const std::size_t w = rng() % 6, v = rng() % 6, k = rng() % 4;
    std::vector<Label> l, r;
    for (std::size_t c = 0; c < k; ++c) {
      l.push_back(mwtest::random_label(rng, w));
      r.push_back(mwtest::random_label(rng, v));
    }
    auto p = product(WorldSet(w), WorldSet(v));
    std::vector<std::pair<Label, Label>> cs;
    for (std::size_t c = 0; c < k; ++c) cs.push_back({p.lift_left(l[c]), p.lift_right(r[c])});
    Label z = eliminate(w * v, cs);
    auto pairs = matching_pairs(w, v, l, r);
    ASSERT_EQ(pairs.size(), z.count());
    for (auto [i, j] : pairs) EXPECT_TRUE(z[i * v + j]);
  }
}

TEST(Worlds, CanonicalRenameExamples) {
  WorldSet w({"x", "y"});
  auto r = canonical_rename(w, {w.label({1})});
  EXPECT_EQ(r.labels[0], r.set.label({0}));
  EXPECT_EQ(r.set.name(0), "y");
  EXPECT_EQ(r.old_to_new[1], 0u);

  auto again = canonical_rename(r.set, r.labels);
  EXPECT_EQ(again.labels, r.labels);
}

TEST(Worlds, CanonicalRenameInvariance) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 1 + rng() % 9;
    std::vector<Label> ls;
    for (std::size_t k = 0; k < 1 + rng() % 5; ++k) ls.push_back(mwtest::random_label(rng, n));
    auto base = canonical_rename(WorldSet(n), ls);
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::vector<Label> moved;
    for (auto& l : ls) moved.push_back(remap_label(l, sigma, n));
    auto other = canonical_rename(WorldSet(n), moved);
    EXPECT_EQ(base.labels, other.labels);
    EXPECT_EQ(canonical_rename(base.set, base.labels).labels, base.labels);
  }
}

}  // namespace
