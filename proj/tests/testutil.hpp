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

// Random generators shared by the property tests.

#include <random>

#include "mw/kernel.hpp"
#include "mw/worlds.hpp"

namespace mwtest {

inline mw::WireType random_type(std::mt19937_64& rng, int depth, std::size_t max_dim = 6) {
  for (;;) {
    int pick = depth <= 0 ? 0 : static_cast<int>(rng() % 3);
    mw::WireType t;
    if (pick == 1)
      t = mw::WireType::sum(random_type(rng, depth - 1, max_dim),
                            random_type(rng, depth - 1, max_dim));
    else if (pick == 2)
      t = mw::WireType::prod(random_type(rng, depth - 1, max_dim),
                             random_type(rng, depth - 1, max_dim));
    if (t.dim() <= max_dim) return t;
  }
}

inline mw::DiagObject random_object(std::mt19937_64& rng, std::size_t max_wires, int depth,
                                    std::size_t max_dim = 6) {
  std::vector<mw::WireType> ws(rng() % (max_wires + 1));
  for (auto& w : ws) w = random_type(rng, depth, max_dim);
  return mw::DiagObject(ws);
}

inline mw::Label random_label(std::mt19937_64& rng, std::size_t n) {
  mw::Label l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = rng() & 1;
  return l;
}

}  // namespace mwtest
