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

#include "mw/kernel.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mw {

struct WireType::Node {
  Kind kind;
  std::shared_ptr<const WireType> l, r;
  std::size_t dim;
  std::size_t depth;
};

WireType::WireType() : node_(nullptr) {}
WireType::WireType(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

WireType WireType::sum(const WireType& left, const WireType& right) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->l = std::make_shared<const WireType>(left);
  n->r = std::make_shared<const WireType>(right);
  n->dim = left.dim() + right.dim();
  n->depth = 1 + std::max(left.depth(), right.depth());
  return WireType(std::move(n));
}

WireType WireType::prod(const WireType& left, const WireType& right) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Prod;
  n->l = std::make_shared<const WireType>(left);
  n->r = std::make_shared<const WireType>(right);
  n->dim = left.dim() * right.dim();
  n->depth = 1 + std::max(left.depth(), right.depth());
  return WireType(std::move(n));
}

// A null node stands for the unit type.
WireType::Kind WireType::kind() const {
  return node_ ? node_->kind : Kind::Unit;
}

const WireType& WireType::left() const {
  if (!node_) throw ShapeError("unit type has no operands");
  return *node_->l;
}

const WireType& WireType::right() const {
  if (!node_) throw ShapeError("unit type has no operands");
  return *node_->r;
}

std::size_t WireType::dim() const { return node_ ? node_->dim : 1; }
std::size_t WireType::depth() const { return node_ ? node_->depth : 0; }

std::string WireType::str() const {
  switch (kind()) {
    case Kind::Unit:
      return "1";
    case Kind::Sum:
      return "(" + left().str() + " + " + right().str() + ")";
    case Kind::Prod:
      return "(" + left().str() + " * " + right().str() + ")";
  }
  return "?";
}

bool operator==(const WireType& a, const WireType& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.dim() != b.dim()) return false;
  if (a.kind() == WireType::Kind::Unit) return true;
  return a.left() == b.left() && a.right() == b.right();
}

bool operator<(const WireType& a, const WireType& b) {
  if (a.node_ == b.node_) return false;
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.kind() == WireType::Kind::Unit) return false;
  if (a.left() != b.left()) return a.left() < b.left();
  return a.right() < b.right();
}

WireType qubit_type() { return WireType::sum(WireType(), WireType()); }

DiagObject DiagObject::concat(const DiagObject& other) const {
  std::vector<WireType> w = wires_;
  w.insert(w.end(), other.wires_.begin(), other.wires_.end());
  return DiagObject(std::move(w));
}

DiagObject DiagObject::slice(std::size_t begin, std::size_t count) const {
  if (begin + count > wires_.size()) throw ShapeError("object slice out of range");
  return DiagObject(std::vector<WireType>(wires_.begin() + begin,
                                          wires_.begin() + begin + count));
}

std::string DiagObject::str() const {
  if (wires_.empty()) return "()";
  std::string s;
  for (std::size_t i = 0; i < wires_.size(); ++i) {
    if (i) s += " [] ";
    s += wires_[i].str();
  }
  return s;
}

bool Enabling::all_disabled() const {
  for (bool b : mask)
    if (b) return false;
  return true;
}

std::size_t Enabling::dim() const {
  std::size_t d = 1;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) d *= base[i].dim();
  return d;
}

std::string Enabling::str() const {
  if (mask.empty()) return "()";
  std::string s;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (i) s += " [] ";
    s += mask[i] ? base[i].str() : "*";
  }
  return s;
}

std::size_t dim_type(const WireType& t) { return t.dim(); }

std::vector<Enabling> enumerate_enablings(const DiagObject& obj) {
  const std::size_t n = obj.size();
  std::vector<Enabling> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
    // bit set = disabled, leftmost wire is the high bit
    Enabling e{obj, std::vector<bool>(n)};
    for (std::size_t i = 0; i < n; ++i)
      e.mask[i] = !((code >> (n - 1 - i)) & 1);
    out.push_back(std::move(e));
  }
  return out;
}

std::size_t interp_dim(const DiagObject& obj) {
  std::size_t d = 1;
  for (const auto& w : obj) d *= w.dim() + 1;
  return d;
}

static void check_belongs(const DiagObject& obj, const Enabling& e) {
  if (!(e.base == obj) || e.mask.size() != obj.size())
    throw ShapeError("enabling " + e.str() + " does not belong to " + obj.str());
}

BlockRange block_offset(const DiagObject& obj, const Enabling& e) {
  check_belongs(obj, e);
  std::size_t off = 0;
  for (const auto& f : enumerate_enablings(obj)) {
    if (f.mask == e.mask) return {off, f.dim()};
    off += f.dim();
  }
  throw ShapeError("unreachable enabling");
}

std::vector<std::size_t> kron_indices(const DiagObject& obj, const Enabling& e) {
  check_belongs(obj, e);
  std::vector<std::size_t> idx{0};
  for (std::size_t i = 0; i < obj.size(); ++i) {
    const std::size_t radix = obj[i].dim() + 1;
    std::vector<std::size_t> next;
    if (e.mask[i]) {
      next.reserve(idx.size() * obj[i].dim());
      for (auto k : idx)
        for (std::size_t b = 0; b < obj[i].dim(); ++b) next.push_back(k * radix + b);
    } else {
      for (auto k : idx) next.push_back(k * radix + obj[i].dim());
    }
    idx = std::move(next);
  }
  return idx;
}

Enabling enabling_of_index(const DiagObject& obj, std::size_t index) {
  if (index >= interp_dim(obj)) throw ShapeError("basis index out of range");
  Enabling e{obj, std::vector<bool>(obj.size())};
  for (std::size_t i = obj.size(); i-- > 0;) {
    const std::size_t radix = obj[i].dim() + 1;
    e.mask[i] = (index % radix) != obj[i].dim();
    index /= radix;
  }
  return e;
}

std::vector<std::size_t> block_layout_permutation(const DiagObject& obj) {
  std::vector<std::size_t> perm;
  perm.reserve(interp_dim(obj));
  for (const auto& e : enumerate_enablings(obj)) {
    auto k = kron_indices(obj, e);
    perm.insert(perm.end(), k.begin(), k.end());
  }
  return perm;
}

namespace {

class TypeParser {
 public:
  explicit TypeParser(std::string_view s) : s_(s) {}

  WireType parse_full() {
    WireType t = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return t;
  }

  DiagObject object() {
    skip();
    if (peek() == '(') {
      // "()" is the empty object; anything else is a parenthesised type
      std::size_t save = pos_;
      ++pos_;
      skip();
      if (peek() == ')') {
        ++pos_;
        skip();
        if (pos_ != s_.size()) fail("unexpected input after ()");
        return DiagObject();
      }
      pos_ = save;
    }
    std::vector<WireType> wires{sum()};
    skip();
    while (pos_ < s_.size()) {
      if (s_.substr(pos_, 2) != "[]") fail("expected []");
      pos_ += 2;
      wires.push_back(sum());
      skip();
    }
    return DiagObject(std::move(wires));
  }

 private:
  WireType sum() {
    WireType l = prod();
    skip();
    if (peek() == '+') {
      ++pos_;
      return WireType::sum(l, sum());
    }
    return l;
  }

  WireType prod() {
    WireType l = atom();
    skip();
    if (peek() == '*') {
      ++pos_;
      return WireType::prod(l, prod());
    }
    return l;
  }

  WireType atom() {
    skip();
    char c = peek();
    if (c == '1') {
      ++pos_;
      return WireType();
    }
    if (c == '(') {
      ++pos_;
      WireType t = sum();
      skip();
      if (peek() != ')') fail("expected )");
      ++pos_;
      return t;
    }
    fail(c ? std::string("unexpected '") + c + "'" : "unexpected end of input");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, 1, pos_ + 1);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

WireType parse_type(std::string_view text) { return TypeParser(text).parse_full(); }
DiagObject parse_object(std::string_view text) { return TypeParser(text).object(); }

}  // namespace mw
