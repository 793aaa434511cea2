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

// Wire types, diagram objects and enablings.
//
// Basis convention used throughout the library: the interpretation of an
// object A_1 [] ... [] A_n is the Kronecker product over wires of
// (M_{A_i} (+) R), where each factor lists the basis of M_{A_i} first and the
// disabled component last, and the leftmost wire is the most significant
// digit. The all-disabled basis vector is therefore always the last index.

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mw/error.hpp"

namespace mw {

class WireType {
 public:
  enum class Kind { Unit, Sum, Prod };

  /// The unit type 1.
  WireType();

  static WireType unit() { return WireType(); }
  static WireType sum(const WireType& left, const WireType& right);
  static WireType prod(const WireType& left, const WireType& right);

  Kind kind() const;
  /// Operands of a Sum or Prod. Throws on Unit.
  const WireType& left() const;
  const WireType& right() const;

  /// dim(1) = 1, dim(A+B) = dim A + dim B, dim(A*B) = dim A * dim B.
  std::size_t dim() const;
  std::size_t depth() const;

  /// Fully parenthesised textual form, e.g. "((1 + 1) * 1)".
  std::string str() const;

  friend bool operator==(const WireType& a, const WireType& b);
  friend bool operator!=(const WireType& a, const WireType& b) {
    return !(a == b);
  }
  /// Total order (structural), used for deterministic containers.
  friend bool operator<(const WireType& a, const WireType& b);

 private:
  struct Node;
  explicit WireType(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// 1 + 1, the qubit type.
WireType qubit_type();

/// A list of wire types; the empty list is the empty object.
class DiagObject {
 public:
  DiagObject() = default;
  DiagObject(std::initializer_list<WireType> wires) : wires_(wires) {}
  explicit DiagObject(std::vector<WireType> wires) : wires_(std::move(wires)) {}

  std::size_t size() const { return wires_.size(); }
  bool empty() const { return wires_.empty(); }
  const WireType& operator[](std::size_t i) const { return wires_[i]; }
  const std::vector<WireType>& wires() const { return wires_; }
  auto begin() const { return wires_.begin(); }
  auto end() const { return wires_.end(); }

  /// Strictly associative concatenation with the empty object as unit.
  DiagObject concat(const DiagObject& other) const;
  /// Wires [begin, begin + count).
  DiagObject slice(std::size_t begin, std::size_t count) const;

  /// "1 [] (1 + 1)"; the empty object prints as "()".
  std::string str() const;

  friend bool operator==(const DiagObject&, const DiagObject&) = default;

 private:
  std::vector<WireType> wires_;
};

/// A choice, per wire of an object, of kept (true) or disabled (false).
struct Enabling {
  DiagObject base;
  std::vector<bool> mask;

  bool all_disabled() const;
  /// Product of the dimensions of the kept wires (dimension of M_E).
  std::size_t dim() const;
  /// "A [] *" style rendering, disabled wires print as "*".
  std::string str() const;

  friend bool operator==(const Enabling&, const Enabling&) = default;
};

/// Half-open range [offset, offset + width).
struct BlockRange {
  std::size_t offset = 0;
  std::size_t width = 0;
  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

std::size_t dim_type(const WireType& t);

/// All 2^n enablings; kept-before-disabled per wire, leftmost wire most
/// significant, so the all-disabled enabling comes last.
std::vector<Enabling> enumerate_enablings(const DiagObject& obj);

/// prod_i (dim A_i + 1).
std::size_t interp_dim(const DiagObject& obj);

/// Range of M_e in the block layout, where the blocks of the enablings are
/// laid out contiguously in enumerate_enablings order. Throws ShapeError when
/// e does not belong to obj.
BlockRange block_offset(const DiagObject& obj, const Enabling& e);

/// Indices in the canonical (Kronecker) basis of the basis vectors of M_e,
/// in the order of M_e's own basis.
std::vector<std::size_t> kron_indices(const DiagObject& obj, const Enabling& e);

/// The enabling a canonical basis index belongs to.
Enabling enabling_of_index(const DiagObject& obj, std::size_t index);

/// perm[p] = canonical index of position p of the block layout.
std::vector<std::size_t> block_layout_permutation(const DiagObject& obj);

/// Parse "1", "(T + T)", "(T * T)". Infix without parentheses is also
/// accepted with * binding tighter than +, both right associative.
WireType parse_type(std::string_view text);
/// Parse "T [] T [] ..." or "()" for the empty object.
DiagObject parse_object(std::string_view text);

}  // namespace mw
