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

#include "mw/semiring.hpp"

#include <cstdio>

namespace mw {

namespace {

double parse_double(std::string_view s) {
  std::string buf(s);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(buf, &used);
  } catch (const std::exception&) {
    throw ParseError("bad number '" + buf + "'", 1, 1);
  }
  if (used != buf.size()) throw ParseError("bad number '" + buf + "'", 1, used + 1);
  return v;
}

std::string fmt(double x) {
  if (x == 0.0) return "0";
  char b[40];
  std::snprintf(b, sizeof b, "%.12g", x);
  return b;
}

}  // namespace

Complex::T Complex::from_decimal(std::string_view s) {
  if (s.find('/') != std::string_view::npos) return Rational::from_decimal(s).get_d();
  return parse_double(s);
}

std::string Complex::str(T a) {
  double re = std::abs(a.real()) < 1e-15 ? 0.0 : a.real();
  double im = std::abs(a.imag()) < 1e-15 ? 0.0 : a.imag();
  if (im == 0.0) return fmt(re);
  std::string is = fmt(std::abs(im)) + "i";
  if (re == 0.0) return (im < 0 ? "-" : "") + is;
  return fmt(re) + (im < 0 ? "-" : "+") + is;
}

Boolean::T Boolean::from_decimal(std::string_view s) {
  return Rational::from_decimal(s) != 0 ? 1 : 0;
}

NonNeg::T NonNeg::from_decimal(std::string_view s) {
  double v = s.find('/') != std::string_view::npos ? Rational::from_decimal(s).get_d()
                                                   : parse_double(s);
  if (v < 0) throw ParseError("negative value in nonneg semiring", 1, 1);
  return v;
}

std::string NonNeg::str(T a) { return fmt(a); }

Rational::T Rational::from_decimal(std::string_view s) {
  std::string buf(s);
  if (buf.empty()) throw ParseError("empty number", 1, 1);
  auto slash = buf.find('/');
  try {
    if (slash != std::string::npos) {
      mpq_class q(buf, 10);
      q.canonicalize();
      if (q.get_den() == 0) throw ParseError("zero denominator", 1, 1);
      return q;
    }
    auto e = buf.find_first_of("eE");
    long exp10 = 0;
    if (e != std::string::npos) {
      exp10 = std::stol(buf.substr(e + 1));
      buf = buf.substr(0, e);
    }
    auto dot = buf.find('.');
    std::string digits = buf;
    if (dot != std::string::npos) {
      digits = buf.substr(0, dot) + buf.substr(dot + 1);
      exp10 -= static_cast<long>(buf.size() - dot - 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad number '" + std::string(s) + "'", 1, 1);
    mpz_class n(digits, 10);
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    mpq_class q = exp10 < 0 ? mpq_class(n, p) : mpq_class(n * p);
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad number '" + std::string(s) + "'", 1, 1);
  }
}

QSqrt2i::T QSqrt2i::mul(const T& x, const T& y) {
  // Q(sqrt2) products
  auto m = [](const mpq_class& a, const mpq_class& b, const mpq_class& c,
              const mpq_class& d) -> std::pair<mpq_class, mpq_class> {
    return {a * c + 2 * b * d, a * d + b * c};
  };
  auto [pr0, pr1] = m(x.a, x.b, y.a, y.b);
  auto [qs0, qs1] = m(x.c, x.d, y.c, y.d);
  auto [ps0, ps1] = m(x.a, x.b, y.c, y.d);
  auto [qr0, qr1] = m(x.c, x.d, y.a, y.b);
  return {pr0 - qs0, pr1 - qs1, ps0 + qr0, ps1 + qr1};
}

std::string QSqrt2i::str(const T& x) {
  std::string s;
  auto put = [&s](const mpq_class& q, const char* suffix) {
    if (sgn(q) == 0) return;
    mpq_class mag = abs(q);
    if (s.empty()) {
      if (sgn(q) < 0) s += "-";
    } else {
      s += sgn(q) < 0 ? "-" : "+";
    }
    if (*suffix && mag == 1) {
      s += suffix + 1;  // drop the leading '*'
    } else {
      s += mag.get_str();
      s += suffix;
    }
  };
  put(x.a, "");
  put(x.b, "*sqrt2");
  put(x.c, "*i");
  put(x.d, "*sqrt2*i");
  return s.empty() ? "0" : s;
}

}  // namespace mw
