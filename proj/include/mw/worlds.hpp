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

// Finite world sets and world-set labels.
//
// Worlds are the integers 0..n-1 of their WorldSet. A label is a bitset of
// length n; bit i set means the wire is enabled in world i.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace mw {

using Label = boost::dynamic_bitset<>;

class WorldSet {
 public:
  WorldSet() = default;
  explicit WorldSet(std::size_t n);
  explicit WorldSet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  /// Debug name of world i (defaults to its index).
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  /// Index of a debug name, or size() when absent.
  std::size_t find(const std::string& name) const;

  Label empty_label() const { return Label(size()); }
  Label full_label() const { return Label(size()).set(); }
  Label label(std::initializer_list<std::size_t> worlds) const;
  Label label_of_names(const std::vector<std::string>& names) const;

  /// "{a,b}" using debug names.
  std::string show(const Label& l) const;

  /// World sets compare by cardinality only; names are debug data.
  friend bool operator==(const WorldSet& a, const WorldSet& b) {
    return a.size() == b.size();
  }

 private:
  std::vector<std::string> names_;
};

/// W x V with pair (i,j) at index i*|V|+j, plus the two label lifts.
struct WorldProduct {
  WorldSet set;
  std::size_t left_size = 0;
  std::size_t right_size = 0;

  /// w |-> w x V
  Label lift_left(const Label& w) const;
  /// v |-> W x v
  Label lift_right(const Label& v) const;
};

WorldProduct product(const WorldSet& w, const WorldSet& v);

/// Z = { z : z in l <=> z in l' for every constraint (l, l') }, as a label
/// over the ambient set of size n.
Label eliminate(std::size_t n, const std::vector<std::pair<Label, Label>>& constraints);

/// Membership-signature matching used by sequential agnostic composition:
/// returns the pairs (i,j) in W x V with sig_left(i) == sig_right(j), where
/// sig_left(i)_k = [i in left[k]] and sig_right(j)_k = [j in right[k]].
/// Equivalent to eliminate() on the lifted constraints, in lexicographic
/// (i,j) order, without materialising W x V.
std::vector<std::pair<std::size_t, std::size_t>> matching_pairs(
    std::size_t w, std::size_t v, const std::vector<Label>& left,
    const std::vector<Label>& right);

/// Keep only the worlds of `keep`, in order.
Label restrict_label(const Label& l, const std::vector<std::size_t>& keep);

/// Apply old-world -> new-world map (size = old size) into a set of size n.
Label remap_label(const Label& l, const std::vector<std::size_t>& old_to_new,
                  std::size_t n);

struct Renaming {
  WorldSet set;
  std::vector<Label> labels;
  /// old world -> canonical index
  std::vector<std::size_t> old_to_new;
};

/// Deterministic renaming to {0..n-1}: worlds sorted, descending, by their
/// membership vector over `labels` (first label most significant); ties keep
/// their original order. Debug names follow their worlds.
Renaming canonical_rename(const WorldSet& w, const std::vector<Label>& labels);

/// The permutation part of canonical_rename only.
std::vector<std::size_t> canonical_order(std::size_t n, const std::vector<Label>& labels);

}  // namespace mw
