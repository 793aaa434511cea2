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

// Random valid labeled diagrams for property tests.

#include <algorithm>
#include <optional>
#include <random>

#include "mw/builder.hpp"
#include "testutil.hpp"

namespace mwtest {

/// Random subset split of `l` into k disjoint parts covering it.
inline std::vector<mw::Label> random_split(std::mt19937_64& rng, const mw::Label& l,
                                           std::size_t k) {
  std::vector<mw::Label> parts(k, mw::Label(l.size()));
  for (auto i = l.find_first(); i != mw::Label::npos; i = l.find_next(i))
    parts[rng() % k].set(i);
  return parts;
}

/// A random valid diagram over n worlds with the given input object. Wire
/// dimensions stay <= max_dim; the output object has at most max_out wires.
template <mw::Semiring S>
mw::LabeledDiagram<S> random_diagram(std::mt19937_64& rng, const mw::DiagObject& in,
                                     std::size_t n, int steps, std::size_t max_out = 3,
                                     std::size_t max_dim = 3,
                                     std::vector<mw::Label> in_labels = {}) {
  using namespace mw;
  using B = DiagramBuilder<S>;
  for (;;) {
    B b(n);
    std::vector<typename B::Wire> live;
    for (std::size_t i = 0; i < in.size(); ++i)
      live.push_back(
          b.input(in[i], in_labels.empty() ? random_label(rng, n) : in_labels[i]));
    auto take = [&](std::size_t idx) {
      auto w = live[idx];
      live.erase(live.begin() + static_cast<long>(idx));
      return w;
    };
    auto pick = [&]() { return rng() % live.size(); };
    for (int s = 0; s < steps; ++s) {
      switch (rng() % 11) {
        case 0:
          if (!live.empty()) {
            auto w = take(pick());
            live.push_back(b.scalar(w, S::random(rng)));
          }
          break;
        case 1:
        case 2: {  // plus of two wires, forcing disjoint labels by a split
          if (live.size() < 2) break;
          auto x = take(pick());
          auto y = take(pick());
          if (b.type(x).dim() + b.type(y).dim() > max_dim || (b.label(x) & b.label(y)).any()) {
            live.push_back(x);
            live.push_back(y);
            break;
          }
          live.push_back(b.plus(x, y));
          break;
        }
        case 3: {  // open a sum
          for (std::size_t i = 0; i < live.size(); ++i)
            if (b.type(live[i]).kind() == WireType::Kind::Sum) {
              auto x = take(i);
              auto parts = random_split(rng, b.label(x), 2);
              auto [l, r] = b.plus_dag(x, parts[0], parts[1]);
              live.push_back(l);
              live.push_back(r);
              break;
            }
          break;
        }
        case 4: {  // split by contraction_dag
          if (live.empty()) break;
          auto x = take(pick());
          auto parts = random_split(rng, b.label(x), 1 + rng() % 3);
          for (auto w : b.contraction_dag(x, parts)) live.push_back(w);
          break;
        }
        case 5: {  // merge same-type disjoint wires
          if (live.size() < 2) break;
          std::size_t i = pick();
          std::vector<std::size_t> idx{i};
          Label acc = b.label(live[i]);
          for (std::size_t j = 0; j < live.size(); ++j)
            if (j != i && b.type(live[j]) == b.type(live[i]) && !(acc & b.label(live[j])).any() &&
                rng() % 2) {
              idx.push_back(j);
              acc |= b.label(live[j]);
            }
          std::sort(idx.rbegin(), idx.rend());
          std::vector<typename B::Wire> xs;
          for (auto j : idx) xs.push_back(take(j));
          std::shuffle(xs.begin(), xs.end(), rng);
          live.push_back(b.contraction(xs));
          break;
        }
        case 6: {  // tensor with a fresh unit, or split a product
          if (live.empty()) break;
          std::size_t i = pick();
          if (b.type(live[i]).kind() == WireType::Kind::Prod) {
            auto [l, r] = b.tensor_dag(take(i));
            live.push_back(l);
            live.push_back(r);
          } else {
            auto x = take(i);
            auto u = b.unit(b.label(x));
            live.push_back(rng() % 2 ? b.tensor(x, u) : b.tensor(u, x));
          }
          break;
        }
        case 7: {  // fresh unit or a 0-ary contraction
          if (rng() % 2)
            live.push_back(b.unit(random_label(rng, n)));
          else
            live.push_back(b.contraction0(rng() % 2 ? qubit_type() : WireType()));
          break;
        }
        case 8: {  // cap then maybe cup away
          auto t = rng() % 2 ? qubit_type() : WireType();
          auto [c1, c2] = b.cap(t, random_label(rng, n));
          live.push_back(c1);
          live.push_back(c2);
          break;
        }
        case 9: {  // cup two equal wires
          for (std::size_t i = 0; i < live.size(); ++i)
            for (std::size_t j = i + 1; j < live.size(); ++j)
              if (b.type(live[i]) == b.type(live[j]) && b.label(live[i]) == b.label(live[j])) {
                auto y = take(j);
                auto x = take(i);
                b.cup(x, y);
                i = j = live.size();
              }
          break;
        }
        case 10: {  // discard a unit wire
          for (std::size_t i = 0; i < live.size(); ++i)
            if (b.type(live[i]) == WireType()) {
              b.unit_dag(take(i));
              break;
            }
          break;
        }
      }
    }
    if (live.size() > max_out) continue;
    std::shuffle(live.begin(), live.end(), rng);
    return b.diagram(WorldSet(n), live);
  }
}

}  // namespace mwtest
