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

#include "mw/worlds.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "mw/error.hpp"

namespace mw {

WorldSet::WorldSet(std::size_t n) : names_(n) {
  for (std::size_t i = 0; i < n; ++i) names_[i] = std::to_string(i);
}

WorldSet::WorldSet(std::vector<std::string> names) : names_(std::move(names)) {}

std::size_t WorldSet::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return static_cast<std::size_t>(it - names_.begin());
}

Label WorldSet::label(std::initializer_list<std::size_t> worlds) const {
  Label l(size());
  for (auto w : worlds) {
    if (w >= size()) throw ShapeError("world index out of range");
    l.set(w);
  }
  return l;
}

Label WorldSet::label_of_names(const std::vector<std::string>& names) const {
  Label l(size());
  for (const auto& n : names) {
    auto i = find(n);
    if (i == size()) throw ShapeError("unknown world '" + n + "'");
    l.set(i);
  }
  return l;
}

std::string WorldSet::show(const Label& l) const {
  std::string s = "{";
  bool first = true;
  for (auto i = l.find_first(); i != Label::npos; i = l.find_next(i)) {
    if (!first) s += ",";
    first = false;
    s += i < size() ? names_[i] : std::to_string(i);
  }
  return s + "}";
}

Label WorldProduct::lift_left(const Label& w) const {
  Label out(left_size * right_size);
  for (auto i = w.find_first(); i != Label::npos; i = w.find_next(i))
    for (std::size_t j = 0; j < right_size; ++j) out.set(i * right_size + j);
  return out;
}

Label WorldProduct::lift_right(const Label& v) const {
  Label out(left_size * right_size);
  for (auto j = v.find_first(); j != Label::npos; j = v.find_next(j))
    for (std::size_t i = 0; i < left_size; ++i) out.set(i * right_size + j);
  return out;
}

WorldProduct product(const WorldSet& w, const WorldSet& v) {
  std::vector<std::string> names;
  names.reserve(w.size() * v.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      names.push_back("(" + w.name(i) + "," + v.name(j) + ")");
  return {WorldSet(std::move(names)), w.size(), v.size()};
}

Label eliminate(std::size_t n, const std::vector<std::pair<Label, Label>>& constraints) {
  Label z(n);
  z.set();
  for (const auto& [l, r] : constraints) {
    if (l.size() != n || r.size() != n) throw ShapeError("label size mismatch in eliminate");
    z &= ~(l ^ r);
  }
  return z;
}

std::vector<std::pair<std::size_t, std::size_t>> matching_pairs(
    std::size_t w, std::size_t v, const std::vector<Label>& left,
    const std::vector<Label>& right) {
  if (left.size() != right.size()) throw ShapeError("constraint count mismatch");
  const std::size_t k = left.size();
  auto sig = [k](const std::vector<Label>& ls, std::size_t x) {
    Label s(k);
    for (std::size_t c = 0; c < k; ++c) s[c] = ls[c][x];
    return s;
  };
  std::map<Label, std::vector<std::size_t>> by_sig;
  for (std::size_t j = 0; j < v; ++j) by_sig[sig(right, j)].push_back(j);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < w; ++i) {
    auto it = by_sig.find(sig(left, i));
    if (it == by_sig.end()) continue;
    for (auto j : it->second) out.emplace_back(i, j);
  }
  return out;
}

Label restrict_label(const Label& l, const std::vector<std::size_t>& keep) {
  Label out(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) out[i] = l[keep[i]];
  return out;
}

Label remap_label(const Label& l, const std::vector<std::size_t>& old_to_new,
                  std::size_t n) {
  Label out(n);
  for (auto i = l.find_first(); i != Label::npos; i = l.find_next(i)) out.set(old_to_new[i]);
  return out;
}

std::vector<std::size_t> canonical_order(std::size_t n, const std::vector<Label>& labels) {
  // membership vector of each world; bit c = label c
  std::vector<Label> member(n, Label(labels.size()));
  for (std::size_t c = 0; c < labels.size(); ++c) {
    const Label& l = labels[c];
    for (auto i = l.find_first(); i != Label::npos; i = l.find_next(i)) member[i].set(c);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Label& x = member[a];
    const Label& y = member[b];
    // descending lexicographic, label 0 first: the first differing label
    // decides, membership wins
    Label d = x ^ y;
    auto c = d.find_first();
    return c != Label::npos && x[c];
  });
  return order;
}

Renaming canonical_rename(const WorldSet& w, const std::vector<Label>& labels) {
  auto order = canonical_order(w.size(), labels);
  Renaming r;
  r.old_to_new.resize(w.size());
  std::vector<std::string> names(w.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    r.old_to_new[order[k]] = k;
    names[k] = w.name(order[k]);
  }
  r.set = WorldSet(std::move(names));
  r.labels.reserve(labels.size());
  for (const auto& l : labels) r.labels.push_back(remap_label(l, r.old_to_new, w.size()));
  return r;
}

}  // namespace mw
