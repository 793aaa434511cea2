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


#include "mw/isolang.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace mw::iso {

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  End, Ident, Num, Scalar,
  Iso, Main, Let, In, Inl, Inr, Ff, Tt,
  Arrow,   // <->
  UnitV,   // <>
  LAngle, RAngle, LParen, RParen, LBrace, RBrace,
  Bar, Plus, Minus, Star, Eq, Colon, Comma, Semi,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Pos pos;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End:
      return "end of input";
    case Tok::Scalar:
      return "scalar [" + t.text + "]";
    default:
      return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip();
      Token t;
      t.pos = here();
      if (i_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      lex(t);
      out.push_back(std::move(t));
    }
  }

 private:
  static constexpr std::pair<std::string_view, Tok> kSymbols[] = {
      {"<->", Tok::Arrow}, {"↔", Tok::Arrow}, {"<>", Tok::UnitV}, {"⟨⟩", Tok::UnitV},
      {"<", Tok::LAngle},  {"⟨", Tok::LAngle}, {">", Tok::RAngle}, {"⟩", Tok::RAngle},
      {"(", Tok::LParen},  {")", Tok::RParen},      {"{", Tok::LBrace},  {"}", Tok::RBrace},
      {"|", Tok::Bar},     {"+", Tok::Plus},        {"⊕", Tok::Plus}, {"-", Tok::Minus},
      {"*", Tok::Star},    {"⊗", Tok::Star},   {"=", Tok::Eq},      {":", Tok::Colon},
      {",", Tok::Comma},   {";", Tok::Semi},
  };

  void lex(Token& t) {
    const char c = s_[i_];
    if (c == '[') {
      auto close = s_.find(']', i_);
      if (close == std::string_view::npos) throw ParseError("unterminated scalar", t.pos.line, t.pos.col);
      t.kind = Tok::Scalar;
      t.text = std::string(s_.substr(i_ + 1, close - i_ - 1));
      advance(close + 1 - i_);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' ||
                               s_[j] == '\''))
        ++j;
      t.text = std::string(s_.substr(i_, j - i_));
      t.kind = keyword(t.text);
      advance(j - i_);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
      t.kind = Tok::Num;
      t.text = std::string(s_.substr(i_, j - i_));
      advance(j - i_);
      return;
    }
    if (s_.substr(i_, 4) == "\U0001D7D9") {  // double-struck one
      t.kind = Tok::Num;
      t.text = "1";
      advance(4);
      return;
    }
    for (const auto& [sym, kind] : kSymbols)
      if (s_.substr(i_, sym.size()) == sym) {
        t.kind = kind;
        t.text = std::string(sym);
        advance(sym.size());
        return;
      }
    throw ParseError(std::string("unexpected character '") + c + "'", t.pos.line, t.pos.col);
  }

  static Tok keyword(const std::string& w) {
    static const std::map<std::string, Tok> kw = {
        {"iso", Tok::Iso}, {"main", Tok::Main}, {"let", Tok::Let}, {"in", Tok::In},
        {"inl", Tok::Inl}, {"inr", Tok::Inr},   {"ff", Tok::Ff},   {"tt", Tok::Tt}};
    auto it = kw.find(w);
    return it == kw.end() ? Tok::Ident : it->second;
  }

  void skip() {
    for (;;) {
      while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) advance(1);
      if (s_.substr(i_, 2) == "//" || s_.substr(i_, 1) == "#") {
        while (i_ < s_.size() && s_[i_] != '\n') advance(1);
        continue;
      }
      return;
    }
  }

  void advance(std::size_t k) {
    for (; k > 0 && i_ < s_.size(); --k, ++i_) {
      if (s_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(s_[i_]) & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  Pos here() const { return {line_, col_}; }

  std::string_view s_;
  std::size_t i_ = 0, line_ = 1, col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

TermP mk(TermKind k, Pos p, std::vector<TermP> kids = {}, std::string name = {}) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->pos = p;
  t->kids = std::move(kids);
  t->name = std::move(name);
  return t;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Program program() {
    Program p;
    while (at(Tok::Iso)) p.isos.push_back(iso_def());
    if (accept(Tok::Main)) {
      p.main = expect(Tok::Ident, "an iso name").text;
      accept(Tok::Semi);
    }
    expect(Tok::End, "'iso', 'main' or end of input");
    if (p.isos.empty()) fail("a program needs at least one iso");
    return p;
  }

  TermP whole_term() {
    auto t = term();
    expect(Tok::End, "end of term");
    return t;
  }

  WireType whole_type() {
    auto t = type();
    expect(Tok::End, "end of type");
    return t;
  }

 private:
  IsoDef iso_def() {
    IsoDef d;
    d.pos = expect(Tok::Iso, "'iso'").pos;
    d.name = expect(Tok::Ident, "an iso name").text;
    expect(Tok::Colon, "':'");
    d.dom = type();
    expect(Tok::Arrow, "'<->'");
    d.cod = type();
    expect(Tok::Eq, "'='");
    expect(Tok::LBrace, "'{'");
    accept(Tok::Bar);
    do {
      Clause c;
      c.pos = peek().pos;
      c.pattern = term();
      expect(Tok::Arrow, "'<->'");
      c.body = term();
      d.clauses.push_back(std::move(c));
    } while (accept(Tok::Bar));
    expect(Tok::RBrace, "'|' or '}'");
    accept(Tok::Semi);
    return d;
  }

  // Types: + and * associate to the right, * binds tighter.
  WireType type() {
    WireType l = type_prod();
    if (accept(Tok::Plus)) return WireType::sum(l, type());
    return l;
  }
  WireType type_prod() {
    WireType l = type_atom();
    if (accept(Tok::Star)) return WireType::prod(l, type_prod());
    return l;
  }
  WireType type_atom() {
    if (at(Tok::Num)) {
      if (peek().text != "1") fail("the only base type is 1");
      next();
      return WireType();
    }
    if (accept(Tok::LParen)) {
      auto t = type();
      expect(Tok::RParen, "')'");
      return t;
    }
    fail("expected a type, found " + describe(peek()));
  }

  TermP term() {
    if (at(Tok::Let)) {
      const Pos p = next().pos;
      auto pat = unary();
      expect(Tok::Eq, "'='");
      auto bound = term();
      expect(Tok::In, "'in'");
      auto body = term();
      return mk(TermKind::Let, p, {pat, bound, body});
    }
    auto acc = unary();
    for (;;) {
      if (at(Tok::Plus)) {
        const Pos p = next().pos;
        acc = mk(TermKind::Sum, p, {acc, unary_or_let()});
      } else if (at(Tok::Minus)) {
        const Pos p = next().pos;
        auto neg = mk(TermKind::Scalar, p, {unary_or_let()});
        std::const_pointer_cast<Term>(neg)->scalar = "-1";
        acc = mk(TermKind::Sum, p, {acc, neg});
      } else {
        return acc;
      }
    }
  }

  // A let can close a sum: "a + let x = t in b".
  TermP unary_or_let() { return at(Tok::Let) ? term() : unary(); }

  bool starts_argument() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::UnitV:
      case Tok::LAngle:
      case Tok::LParen:
      case Tok::Ff:
      case Tok::Tt:
      case Tok::Inl:
      case Tok::Inr:
      case Tok::Scalar:
        return true;
      default:
        return false;
    }
  }

  TermP unary() {
    const Token& t = peek();
    const Pos p = t.pos;
    if (t.kind == Tok::Scalar) {
      auto text = next().text;
      auto s = mk(TermKind::Scalar, p, {unary()});
      std::const_pointer_cast<Term>(s)->scalar = text;
      return s;
    }
    if (t.kind == Tok::Minus) {
      next();
      auto s = mk(TermKind::Scalar, p, {unary()});
      std::const_pointer_cast<Term>(s)->scalar = "-1";
      return s;
    }
    if (t.kind == Tok::Inl || t.kind == Tok::Inr) {
      const auto k = next().kind == Tok::Inl ? TermKind::Inl : TermKind::Inr;
      return mk(k, p, {unary()});
    }
    if (t.kind == Tok::Ident) {
      auto name = next().text;
      if (starts_argument()) return mk(TermKind::App, p, {unary()}, name);
      return mk(TermKind::Var, p, {}, name);
    }
    return atom();
  }

  TermP atom() {
    const Pos p = peek().pos;
    switch (peek().kind) {
      case Tok::UnitV:
        next();
        return mk(TermKind::Unit, p);
      case Tok::Ff:
        next();
        return mk(TermKind::Inl, p, {mk(TermKind::Unit, p)});
      case Tok::Tt:
        next();
        return mk(TermKind::Inr, p, {mk(TermKind::Unit, p)});
      case Tok::LAngle: {
        next();
        std::vector<TermP> items{term()};
        while (accept(Tok::Comma)) items.push_back(term());
        expect(Tok::RAngle, "',' or '>'");
        // <a, b, c> is <a, <b, c>>
        TermP acc = items.back();
        for (std::size_t k = items.size() - 1; k-- > 0;)
          acc = mk(TermKind::Pair, items[k]->pos, {items[k], acc});
        if (items.size() > 1) std::const_pointer_cast<Term>(acc)->pos = p;
        return acc;
      }
      case Tok::LParen: {
        next();
        auto t = term();
        if (accept(Tok::Colon)) {
          auto ty = type();
          t = mk(TermKind::Annot, p, {t});
          std::const_pointer_cast<Term>(t)->type = ty;
        }
        expect(Tok::RParen, "')'");
        return t;
      }
      case Tok::Let:
        return term();
      default:
        fail("expected a term, found " + describe(peek()));
    }
  }

  const Token& peek() const { return toks_[k_]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& next() {
    const Token& t = toks_[k_];
    if (k_ + 1 < toks_.size()) ++k_;
    return t;
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) fail("expected " + what + ", found " + describe(peek()));
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().pos.line, peek().pos.col);
  }

  std::vector<Token> toks_;
  std::size_t k_ = 0;
};

}  // namespace

Program parse_program(std::string_view src) { return Parser(src).program(); }
TermP parse_term(std::string_view src) { return Parser(src).whole_term(); }
WireType parse_iso_type(std::string_view src) { return Parser(src).whole_type(); }

const IsoDef* Program::find(std::string_view name) const {
  for (const auto& d : isos)
    if (d.name == name) return &d;
  return nullptr;
}

const IsoDef& Program::entry() const {
  if (isos.empty()) throw Error("empty program");
  if (main.empty()) return isos.back();
  if (auto* d = find(main)) return *d;
  throw Error("main iso '" + main + "' is not defined");
}

// ---------------------------------------------------------------------------
// Printer

std::string print_type(const WireType& t) {
  using K = WireType::Kind;
  switch (t.kind()) {
    case K::Unit:
      return "1";
    case K::Sum: {
      auto l = print_type(t.left());
      if (t.left().kind() == K::Sum) l = "(" + l + ")";
      return l + " + " + print_type(t.right());
    }
    case K::Prod: {
      auto side = [](const WireType& x, bool left) {
        auto s = print_type(x);
        const bool wrap = x.kind() == K::Sum || (left && x.kind() == K::Prod);
        return wrap ? "(" + s + ")" : s;
      };
      return side(t.left(), true) + " * " + side(t.right(), false);
    }
  }
  return "?";
}

namespace {

bool is_unit(const TermP& t) { return t->kind == TermKind::Unit; }

std::string operand(const Term& t) {
  auto s = print(t);
  return t.kind == TermKind::Sum || t.kind == TermKind::Let ? "(" + s + ")" : s;
}

}  // namespace

std::string print(const Term& t) {
  switch (t.kind) {
    case TermKind::Unit:
      return "<>";
    case TermKind::Var:
      return t.name;
    case TermKind::Inl:
      return is_unit(t.kids[0]) ? "ff" : "inl " + operand(*t.kids[0]);
    case TermKind::Inr:
      return is_unit(t.kids[0]) ? "tt" : "inr " + operand(*t.kids[0]);
    case TermKind::Pair: {
      std::string s = "<" + print(*t.kids[0]);
      const Term* r = t.kids[1].get();
      while (r->kind == TermKind::Pair) {
        s += ", " + print(*r->kids[0]);
        r = r->kids[1].get();
      }
      return s + ", " + print(*r) + ">";
    }
    case TermKind::Scalar:
      return "[" + t.scalar + "] " + operand(*t.kids[0]);
    case TermKind::Sum: {
      auto l = t.kids[0]->kind == TermKind::Let ? "(" + print(*t.kids[0]) + ")" : print(*t.kids[0]);
      return l + " + " + operand(*t.kids[1]);
    }
    case TermKind::App:
      return t.name + " " + operand(*t.kids[0]);
    case TermKind::Let:
      return "let " + operand(*t.kids[0]) + " = " + print(*t.kids[1]) + " in " + print(*t.kids[2]);
    case TermKind::Annot:
      return "(" + print(*t.kids[0]) + " : " + print_type(*t.type) + ")";
  }
  return "?";
}

std::string print(const IsoDef& d) {
  std::string s = "iso " + d.name + " : " + print_type(d.dom) + " <-> " + print_type(d.cod) + " = {\n";
  for (std::size_t i = 0; i < d.clauses.size(); ++i)
    s += std::string(i ? "| " : "  ") + print(*d.clauses[i].pattern) + " <-> " +
         print(*d.clauses[i].body) + "\n";
  return s + "}\n";
}

std::string print(const Program& p) {
  std::string s;
  for (std::size_t i = 0; i < p.isos.size(); ++i) s += (i ? "\n" : "") + print(p.isos[i]);
  if (!p.main.empty()) s += "\nmain " + p.main + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Basis values and patterns

std::vector<TermP> basis_values(const WireType& t) {
  using K = WireType::Kind;
  std::vector<TermP> out;
  switch (t.kind()) {
    case K::Unit:
      out.push_back(mk(TermKind::Unit, {}));
      break;
    case K::Sum:
      for (auto& v : basis_values(t.left())) out.push_back(mk(TermKind::Inl, {}, {v}));
      for (auto& v : basis_values(t.right())) out.push_back(mk(TermKind::Inr, {}, {v}));
      break;
    case K::Prod: {
      auto ls = basis_values(t.left()), rs = basis_values(t.right());
      for (auto& a : ls)
        for (auto& b : rs) out.push_back(mk(TermKind::Pair, {}, {a, b}));
      break;
    }
  }
  return out;
}

std::size_t basis_index(const Term& v, const WireType& t) {
  using K = WireType::Kind;
  const Term* x = &v;
  while (x->kind == TermKind::Annot) x = x->kids[0].get();
  auto bad = [&]() -> std::size_t {
    throw IsoError(print(v) + " is not a basis value of " + print_type(t), v.pos);
  };
  switch (t.kind()) {
    case K::Unit:
      return x->kind == TermKind::Unit ? 0 : bad();
    case K::Sum:
      if (x->kind == TermKind::Inl) return basis_index(*x->kids[0], t.left());
      if (x->kind == TermKind::Inr) return t.left().dim() + basis_index(*x->kids[0], t.right());
      return bad();
    case K::Prod:
      if (x->kind != TermKind::Pair) return bad();
      return basis_index(*x->kids[0], t.left()) * t.right().dim() +
             basis_index(*x->kids[1], t.right());
  }
  return bad();
}

namespace {
const Term& strip(const Term& t) {
  const Term* x = &t;
  while (x->kind == TermKind::Annot) x = x->kids[0].get();
  return *x;
}
}  // namespace

bool pattern_matches(const Term& pattern, const Term& value) {
  const Term& p = strip(pattern);
  const Term& v = strip(value);
  if (p.kind == TermKind::Var) return true;
  if (p.kind != v.kind) return false;
  switch (p.kind) {
    case TermKind::Unit:
      return true;
    case TermKind::Inl:
    case TermKind::Inr:
      return pattern_matches(*p.kids[0], *v.kids[0]);
    case TermKind::Pair:
      return pattern_matches(*p.kids[0], *v.kids[0]) && pattern_matches(*p.kids[1], *v.kids[1]);
    default:
      return false;
  }
}

bool unifiable(const Term& a, const Term& b) {
  const Term& p = strip(a);
  const Term& q = strip(b);
  if (p.kind == TermKind::Var || q.kind == TermKind::Var) return true;
  if (p.kind != q.kind) return false;
  switch (p.kind) {
    case TermKind::Unit:
      return true;
    case TermKind::Inl:
    case TermKind::Inr:
      return unifiable(*p.kids[0], *q.kids[0]);
    case TermKind::Pair:
      return unifiable(*p.kids[0], *q.kids[0]) && unifiable(*p.kids[1], *q.kids[1]);
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Typing

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Var:
      return "var";
    case Rule::Unit:
      return "unit";
    case Rule::Scalar:
      return "scalar";
    case Rule::Inl:
      return "inl";
    case Rule::Inr:
      return "inr";
    case Rule::Pair:
      return "pair";
    case Rule::Sum:
      return "sum";
    case Rule::Let:
      return "let";
    case Rule::Iso:
      return "iso";
    case Rule::App:
      return "app";
  }
  return "?";
}

std::string Derivation::str(std::size_t indent) const {
  std::string ctx_s;
  for (const auto& [x, t] : ctx) ctx_s += (ctx_s.empty() ? "" : ", ") + x + " : " + print_type(t);
  std::string line(indent, ' ');
  if (rule == Rule::Iso)
    line += "|-w " + iso->name + " : " + print_type(type) + " <-> " + print_type(*cod);
  else
    line += ctx_s + (ctx_s.empty() ? "" : " ") + "|- " + print(*subject) + " : " + print_type(type);
  line += "   (" + std::string(rule_name(rule)) + ")\n";
  // an applied iso is shown by name only
  if (rule == Rule::App) return line + kids[1].str(indent + 2);
  for (const auto& k : kids) line += k.str(indent + 2);
  return line;
}

namespace {

using Env = std::map<std::string, WireType>;

std::set<std::string> names_of(const Context& c) {
  std::set<std::string> s;
  for (const auto& [x, _] : c) s.insert(x);
  return s;
}

std::string list(const std::set<std::string>& s) {
  std::string out = "{";
  for (const auto& x : s) out += (out.size() > 1 ? ", " : "") + x;
  return out + "}";
}

class Checker {
 public:
  Checker(const Program& p, std::size_t visible) : prog_(p), visible_(visible) {}

  Derivation iso(const IsoDef& d) {
    Derivation out;
    out.rule = Rule::Iso;
    out.type = d.dom;
    out.cod = d.cod;
    out.iso = &d;
    if (d.clauses.empty()) throw IsoError("iso " + d.name + " has no clauses", d.pos);
    for (const auto& c : d.clauses) {
      auto pat = pattern(c.pattern, d.dom, false);
      Env env;
      for (const auto& [x, t] : pat.ctx) env[x] = t;
      auto body = check(c.body, d.cod, env);
      for (const auto& x : names_of(pat.ctx))
        if (!names_of(body.ctx).count(x))
          throw IsoError("variable '" + x + "' bound by the pattern is never used", c.pos);
      out.kids.push_back(std::move(pat));
      out.kids.push_back(std::move(body));
    }
    const auto values = basis_values(d.dom);
    for (std::size_t i = 0; i < d.clauses.size(); ++i)
      for (std::size_t j = i + 1; j < d.clauses.size(); ++j) {
        if (!unifiable(*d.clauses[i].pattern, *d.clauses[j].pattern)) continue;
        std::string witness;
        for (const auto& v : values)
          if (pattern_matches(*d.clauses[i].pattern, *v) &&
              pattern_matches(*d.clauses[j].pattern, *v)) {
            witness = print(*v);
            break;
          }
        throw IsoError("clauses " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                           " of " + d.name + " overlap (both match " + witness + ")",
                       d.clauses[j].pos);
      }
    for (const auto& v : values) {
      bool hit = false;
      for (const auto& c : d.clauses) hit = hit || pattern_matches(*c.pattern, *v);
      if (!hit) throw IsoError("clauses of " + d.name + " are not exhaustive: nothing matches " + print(*v), d.pos);
    }
    return out;
  }

 private:
  static Derivation node(Rule r, const TermP& t, WireType ty) {
    Derivation d;
    d.rule = r;
    d.subject = t;
    d.type = std::move(ty);
    return d;
  }

  static Context join(const Context& a, const Context& b, Pos p) {
    Context out = a;
    for (const auto& e : b) {
      for (const auto& f : a)
        if (f.first == e.first) throw IsoError("variable '" + e.first + "' is used more than once", p);
      out.push_back(e);
    }
    return out;
  }

  [[noreturn]] static void mismatch(const Term& t, const WireType& want, const std::string& what) {
    throw IsoError(what + " cannot have type " + print_type(want), t.pos);
  }

  /// Value patterns; `let` patterns may not branch.
  Derivation pattern(const TermP& v, const WireType& a, bool irrefutable) {
    using K = WireType::Kind;
    switch (v->kind) {
      case TermKind::Unit:
        if (a.kind() != K::Unit) mismatch(*v, a, "<>");
        return node(Rule::Unit, v, a);
      case TermKind::Var: {
        auto d = node(Rule::Var, v, a);
        d.ctx = {{v->name, a}};
        return d;
      }
      case TermKind::Inl:
      case TermKind::Inr: {
        if (irrefutable) throw IsoError("a let pattern cannot branch; match with an iso instead", v->pos);
        if (a.kind() != K::Sum) mismatch(*v, a, print(*v));
        const bool left = v->kind == TermKind::Inl;
        auto d = node(left ? Rule::Inl : Rule::Inr, v, a);
        d.kids.push_back(pattern(v->kids[0], left ? a.left() : a.right(), irrefutable));
        d.ctx = d.kids[0].ctx;
        return d;
      }
      case TermKind::Pair: {
        if (a.kind() != K::Prod) mismatch(*v, a, print(*v));
        auto d = node(Rule::Pair, v, a);
        d.kids.push_back(pattern(v->kids[0], a.left(), irrefutable));
        d.kids.push_back(pattern(v->kids[1], a.right(), irrefutable));
        for (const auto& [x, _] : d.kids[1].ctx)
          if (names_of(d.kids[0].ctx).count(x))
            throw IsoError("variable '" + x + "' appears twice in a pattern", v->pos);
        d.ctx = join(d.kids[0].ctx, d.kids[1].ctx, v->pos);
        return d;
      }
      case TermKind::Annot:
        if (!(*v->type == a)) mismatch(*v, a, print(*v));
        return pattern(v->kids[0], a, irrefutable);
      default:
        throw IsoError(print(*v) + " is not a value pattern", v->pos);
    }
  }

  Derivation let(const TermP& t, const WireType* want, const Env& env) {
    auto bound = synth(t->kids[1], env);
    auto pat = pattern(t->kids[0], bound.type, true);
    Env inner = env;
    for (const auto& [x, ty] : pat.ctx) inner[x] = ty;
    auto body = want ? check(t->kids[2], *want, inner) : synth(t->kids[2], inner);
    const auto used = names_of(body.ctx);
    Context rest;
    for (const auto& [x, ty] : pat.ctx)
      if (!used.count(x)) throw IsoError("'" + x + "' is bound but never used", t->pos);
    const auto bound_names = names_of(pat.ctx);
    for (const auto& e : body.ctx)
      if (!bound_names.count(e.first)) rest.push_back(e);
    auto d = node(Rule::Let, t, body.type);
    d.ctx = join(bound.ctx, rest, t->pos);
    d.kids.push_back(std::move(pat));
    d.kids.push_back(std::move(bound));
    d.kids.push_back(std::move(body));
    return d;
  }

  Derivation check(const TermP& t, const WireType& a, const Env& env) {
    using K = WireType::Kind;
    switch (t->kind) {
      case TermKind::Inl:
      case TermKind::Inr: {
        if (a.kind() != K::Sum) mismatch(*t, a, print(*t));
        const bool left = t->kind == TermKind::Inl;
        auto d = node(left ? Rule::Inl : Rule::Inr, t, a);
        d.kids.push_back(check(t->kids[0], left ? a.left() : a.right(), env));
        d.ctx = d.kids[0].ctx;
        return d;
      }
      case TermKind::Pair: {
        if (a.kind() != K::Prod) mismatch(*t, a, print(*t));
        auto d = node(Rule::Pair, t, a);
        d.kids.push_back(check(t->kids[0], a.left(), env));
        d.kids.push_back(check(t->kids[1], a.right(), env));
        d.ctx = join(d.kids[0].ctx, d.kids[1].ctx, t->pos);
        return d;
      }
      case TermKind::Scalar: {
        auto d = node(Rule::Scalar, t, a);
        d.kids.push_back(check(t->kids[0], a, env));
        d.ctx = d.kids[0].ctx;
        return d;
      }
      case TermKind::Sum: {
        auto d = node(Rule::Sum, t, a);
        d.kids.push_back(check(t->kids[0], a, env));
        d.kids.push_back(check(t->kids[1], a, env));
        same_vars(d.kids[0], d.kids[1], *t);
        d.ctx = d.kids[0].ctx;
        return d;
      }
      case TermKind::Let:
        return let(t, &a, env);
      default: {
        auto d = synth(t, env);
        if (!(d.type == a))
          throw IsoError("type mismatch: expected " + print_type(a) + ", found " + print_type(d.type),
                         t->pos);
        return d;
      }
    }
  }

  static void same_vars(const Derivation& l, const Derivation& r, const Term& t) {
    auto a = names_of(l.ctx), b = names_of(r.ctx);
    if (a != b)
      throw IsoError("both sides of a sum must use the same variables (left uses " + list(a) +
                         ", right uses " + list(b) + ")",
                     t.pos);
  }

  Derivation synth(const TermP& t, const Env& env) {
    switch (t->kind) {
      case TermKind::Unit:
        return node(Rule::Unit, t, WireType());
      case TermKind::Var: {
        auto it = env.find(t->name);
        if (it == env.end()) throw IsoError("unbound variable '" + t->name + "'", t->pos);
        auto d = node(Rule::Var, t, it->second);
        d.ctx = {{t->name, it->second}};
        return d;
      }
      case TermKind::App: {
        const IsoDef* def = nullptr;
        for (std::size_t i = 0; i < visible_; ++i)
          if (prog_.isos[i].name == t->name) def = &prog_.isos[i];
        if (!def) {
          if (prog_.find(t->name))
            throw IsoError("iso '" + t->name + "' is used before its definition", t->pos);
          throw IsoError("unknown iso '" + t->name + "'", t->pos);
        }
        auto d = node(Rule::App, t, def->cod);
        d.iso = def;
        d.kids.push_back(Checker(prog_, static_cast<std::size_t>(def - prog_.isos.data())).iso(*def));
        d.kids.push_back(check(t->kids[0], def->dom, env));
        d.ctx = d.kids[1].ctx;
        return d;
      }
      case TermKind::Pair: {
        auto l = synth(t->kids[0], env), r = synth(t->kids[1], env);
        auto d = node(Rule::Pair, t, WireType::prod(l.type, r.type));
        d.ctx = join(l.ctx, r.ctx, t->pos);
        d.kids = {std::move(l), std::move(r)};
        return d;
      }
      case TermKind::Scalar: {
        auto k = synth(t->kids[0], env);
        auto d = node(Rule::Scalar, t, k.type);
        d.ctx = k.ctx;
        d.kids.push_back(std::move(k));
        return d;
      }
      case TermKind::Sum: {
        auto l = synth(t->kids[0], env);
        auto r = check(t->kids[1], l.type, env);
        same_vars(l, r, *t);
        auto d = node(Rule::Sum, t, l.type);
        d.ctx = l.ctx;
        d.kids = {std::move(l), std::move(r)};
        return d;
      }
      case TermKind::Let:
        return let(t, nullptr, env);
      case TermKind::Annot:
        return check(t->kids[0], *t->type, env);
      case TermKind::Inl:
      case TermKind::Inr:
        throw IsoError("cannot infer the type of " + print(*t) + "; annotate it as (t : A + B)",
                       t->pos);
    }
    throw IsoError("unexpected term", t->pos);
  }

  const Program& prog_;
  std::size_t visible_;
};

}  // namespace

Derivation check_iso(const Program& p, const IsoDef& d) {
  const auto idx = static_cast<std::size_t>(&d - p.isos.data());
  if (idx >= p.isos.size()) throw Error("iso is not part of the program");
  return Checker(p, idx).iso(d);
}

Derivation check_program(const Program& p) {
  std::set<std::string> seen;
  for (const auto& d : p.isos)
    if (!seen.insert(d.name).second) throw IsoError("iso '" + d.name + "' is defined twice", d.pos);
  const IsoDef& main = p.entry();
  std::optional<Derivation> out;
  for (const auto& d : p.isos) {
    auto der = check_iso(p, d);
    if (&d == &main) out = std::move(der);
  }
  return *out;
}

}  // namespace mw::iso
