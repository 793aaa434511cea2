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

// Commutative semirings. A semiring is a traits struct S with a value type
// S::T and static operations; optional capabilities (negation, imaginary
// unit, 1/sqrt2, phases) are detected with concepts.

#include <cctype>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "mw/error.hpp"

namespace mw {

template <class S>
concept Semiring = requires(typename S::T a, typename S::T b, std::mt19937_64& rng,
                            std::string_view text) {
  { S::zero() } -> std::same_as<typename S::T>;
  { S::one() } -> std::same_as<typename S::T>;
  { S::add(a, b) } -> std::same_as<typename S::T>;
  { S::mul(a, b) } -> std::same_as<typename S::T>;
  { S::approx_equal(a, b, 1e-9) } -> std::same_as<bool>;
  { S::is_zero(a) } -> std::same_as<bool>;
  { S::from_decimal(text) } -> std::same_as<typename S::T>;
  { S::str(a) } -> std::same_as<std::string>;
  { S::random(rng) } -> std::same_as<typename S::T>;
  { S::to_complex(a) } -> std::same_as<std::complex<double>>;
  { S::name() } -> std::convertible_to<std::string_view>;
  { S::exact } -> std::convertible_to<bool>;
};

template <class S>
concept HasNeg = Semiring<S> && requires(typename S::T a) {
  { S::neg(a) } -> std::same_as<typename S::T>;
};

template <class S>
concept HasImag = Semiring<S> && requires {
  { S::imag() } -> std::same_as<typename S::T>;
};

template <class S>
concept HasInvSqrt2 = Semiring<S> && requires {
  { S::inv_sqrt2() } -> std::same_as<typename S::T>;
};

/// Arbitrary phases e^{i phi}.
template <class S>
concept HasPhase = Semiring<S> && requires(double phi) {
  { S::phase(phi) } -> std::same_as<typename S::T>;
};

// -------------------------------------------------------------------------

struct Complex {
  using T = std::complex<double>;
  static constexpr bool exact = false;
  static constexpr std::string_view name() { return "complex"; }
  static T zero() { return 0.0; }
  static T one() { return 1.0; }
  static T add(T a, T b) { return a + b; }
  static T mul(T a, T b) { return a * b; }
  static T neg(T a) { return -a; }
  static T imag() { return T(0.0, 1.0); }
  static T inv_sqrt2() { return 1.0 / std::sqrt(2.0); }
  static T phase(double phi) { return std::polar(1.0, phi); }
  /// Complex conjugation, exposed for user-level daggers only; the kernel
  /// semantics never conjugates.
  static T conj(T a) { return std::conj(a); }
  static bool approx_equal(T a, T b, double tol) { return std::abs(a - b) <= tol; }
  static bool is_zero(T a) { return a == 0.0; }
  static T from_decimal(std::string_view s);
  static std::string str(T a);
  static T random(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double re = u(rng);
    double im = u(rng);
    return {re, im};
  }
  static std::complex<double> to_complex(T a) { return a; }
};

/// Non-determinism: OR / AND.
struct Boolean {
  using T = std::uint8_t;
  static constexpr bool exact = true;
  static constexpr std::string_view name() { return "bool"; }
  static T zero() { return 0; }
  static T one() { return 1; }
  static T add(T a, T b) { return a | b; }
  static T mul(T a, T b) { return a & b; }
  static bool approx_equal(T a, T b, double) { return a == b; }
  static bool is_zero(T a) { return a == 0; }
  static T from_decimal(std::string_view s);
  static std::string str(T a) { return a ? "1" : "0"; }
  static T random(std::mt19937_64& rng) { return static_cast<T>(rng() & 1); }
  static std::complex<double> to_complex(T a) { return a ? 1.0 : 0.0; }
};

/// Probabilistic weights, non-negative reals.
struct NonNeg {
  using T = double;
  static constexpr bool exact = false;
  static constexpr std::string_view name() { return "nonneg"; }
  static T zero() { return 0.0; }
  static T one() { return 1.0; }
  static T add(T a, T b) { return a + b; }
  static T mul(T a, T b) { return a * b; }
  static T inv_sqrt2() { return 1.0 / std::sqrt(2.0); }
  static bool approx_equal(T a, T b, double tol) { return std::abs(a - b) <= tol; }
  static bool is_zero(T a) { return a == 0.0; }
  static T from_decimal(std::string_view s);
  static std::string str(T a);
  static T random(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0);
    return u(rng);
  }
  static std::complex<double> to_complex(T a) { return a; }
};

struct Rational {
  using T = mpq_class;
  static constexpr bool exact = true;
  static constexpr std::string_view name() { return "rational"; }
  static T zero() { return 0; }
  static T one() { return 1; }
  static T add(const T& a, const T& b) { return a + b; }
  static T mul(const T& a, const T& b) { return a * b; }
  static T neg(const T& a) { return -a; }
  static bool approx_equal(const T& a, const T& b, double) { return a == b; }
  static bool is_zero(const T& a) { return sgn(a) == 0; }
  static T from_decimal(std::string_view s);
  static std::string str(const T& a) { return a.get_str(); }
  static T random(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    T q(num(rng), den(rng));
    q.canonicalize();
    return q;
  }
  static std::complex<double> to_complex(const T& a) { return a.get_d(); }
};

/// Exact elements (a + b sqrt2) + i (c + d sqrt2) with rational a, b, c, d.
struct QSqrt2iValue {
  mpq_class a, b, c, d;
  friend bool operator==(const QSqrt2iValue&, const QSqrt2iValue&) = default;
};

struct QSqrt2i {
  using T = QSqrt2iValue;
  static constexpr bool exact = true;
  static constexpr std::string_view name() { return "qsqrt2i"; }
  static T zero() { return {0, 0, 0, 0}; }
  static T one() { return {1, 0, 0, 0}; }
  static T add(const T& x, const T& y) { return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d}; }
  static T mul(const T& x, const T& y);
  static T neg(const T& x) { return {-x.a, -x.b, -x.c, -x.d}; }
  static T imag() { return {0, 0, 1, 0}; }
  static T inv_sqrt2() { return {0, mpq_class(1, 2), 0, 0}; }
  static T sqrt2() { return {0, 1, 0, 0}; }
  static T conj(const T& x) { return {x.a, x.b, -x.c, -x.d}; }
  static bool approx_equal(const T& x, const T& y, double) { return x == y; }
  static bool is_zero(const T& x) { return x == zero(); }
  static T from_decimal(std::string_view s) { return {Rational::from_decimal(s), 0, 0, 0}; }
  static std::string str(const T& x);
  static T random(std::mt19937_64& rng) {
    return {Rational::random(rng), Rational::random(rng), Rational::random(rng),
            Rational::random(rng)};
  }
  static std::complex<double> to_complex(const T& x) {
    const double r2 = std::sqrt(2.0);
    return {x.a.get_d() + x.b.get_d() * r2, x.c.get_d() + x.d.get_d() * r2};
  }
};

// -------------------------------------------------------------------------
// Scalar literal parsing shared by all semirings.
//
//   expr   := ['-'] term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := number ['i'] | 'i' | 'isqrt2' | 'sqrt2' | '(' expr ')'
//
// Subtraction needs negation, 'i' an imaginary unit, 'isqrt2' a 1/sqrt2.

namespace detail {

template <Semiring S>
class ScalarParser {
 public:
  explicit ScalarParser(std::string_view s) : s_(s) {}

  typename S::T parse() {
    auto v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input in scalar");
    return v;
  }

 private:
  using T = typename S::T;

  T expr() {
    skip();
    bool negate = false;
    if (peek() == '-') {
      ++pos_;
      negate = true;
    } else if (peek() == '+') {
      ++pos_;
    }
    T acc = term();
    if (negate) acc = negated(acc);
    for (;;) {
      skip();
      char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      T t = term();
      acc = S::add(acc, c == '-' ? negated(t) : t);
    }
  }

  T term() {
    T acc = factor();
    for (;;) {
      skip();
      if (peek() != '*') return acc;
      ++pos_;
      acc = S::mul(acc, factor());
    }
  }

  T factor() {
    skip();
    char c = peek();
    if (c == '(') {
      ++pos_;
      T v = expr();
      skip();
      if (peek() != ')') fail("expected ) in scalar");
      ++pos_;
      return v;
    }
    if (s_.substr(pos_, 6) == "isqrt2") {
      pos_ += 6;
      if constexpr (HasInvSqrt2<S>) {
        return S::inv_sqrt2();
      } else {
        fail("isqrt2 is not representable in semiring " + std::string(S::name()));
      }
    }
    if (s_.substr(pos_, 5) == "sqrt2") {
      pos_ += 5;
      if constexpr (requires { S::sqrt2(); }) {
        return S::sqrt2();
      } else if constexpr (std::same_as<T, double> || std::same_as<T, std::complex<double>>) {
        return T(std::sqrt(2.0));
      } else {
        fail("sqrt2 is not representable in semiring " + std::string(S::name()));
      }
    }
    if (c == 'i') {
      ++pos_;
      return imag_unit();
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
              s_[pos_] == '/' || s_[pos_] == 'e' ||
              ((s_[pos_] == '-' || s_[pos_] == '+') && pos_ > start && s_[pos_ - 1] == 'e')))
        ++pos_;
      T v = S::from_decimal(s_.substr(start, pos_ - start));
      if (peek() == 'i' && s_.substr(pos_, 6) != "isqrt2") {
        ++pos_;
        v = S::mul(v, imag_unit());
      }
      return v;
    }
    fail(c ? std::string("unexpected '") + c + "' in scalar" : "empty scalar");
  }

  T imag_unit() {
    if constexpr (HasImag<S>) {
      return S::imag();
    } else {
      fail("i is not representable in semiring " + std::string(S::name()));
    }
  }

  T negated(const T& v) {
    if constexpr (HasNeg<S>) {
      return S::neg(v);
    } else {
      if (S::is_zero(v)) return v;
      fail("negation is not available in semiring " + std::string(S::name()));
    }
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, 1, pos_ + 1); }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

template <Semiring S>
typename S::T parse_scalar(std::string_view text) {
  return detail::ScalarParser<S>(text).parse();
}

template <Semiring S>
bool equal_scalar(const typename S::T& a, const typename S::T& b, double tol = 1e-9) {
  return S::approx_equal(a, b, tol);
}

}  // namespace mw
