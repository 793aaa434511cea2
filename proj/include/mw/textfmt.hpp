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

// Textual diagram format (s-expressions), DOT export and matrix headers.
//
//   (worlds a b c star)
//   (seq (par (plus 1 1 {a} {b}) (id 1 {c})) (contraction (1 + 1) {a,b} {c}))
//
// Generators take their labels in the factories' natural form; a generator
// whose ports do not fit that form is written with explicit (in ...) and
// (out ...) lists instead. See docs/formats.md.

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mw/diagram.hpp"
#include "mw/kernel.hpp"
#include "mw/net.hpp"

namespace mw {

namespace fmt_detail {

struct Tok {
  enum Kind { LParen, RParen, LBrace, RBrace, Comma, Atom, String, End } kind = End;
  std::string text;
  std::size_t line = 1, col = 1;
  std::size_t begin = 0, end = 0;  // byte offsets into the source
};

inline std::vector<Tok> lex(std::string_view s) {
  std::vector<Tok> out;
  std::size_t i = 0, line = 1, col = 1;
  auto step = [&](std::size_t k) {
    for (; k > 0 && i < s.size(); --k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
        ++col;
      }
    }
  };
  auto special = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '{' ||
           c == '}' || c == ',' || c == ';' || c == '"';
  };
  for (;;) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) step(1);
    if (i < s.size() && s[i] == ';') {
      while (i < s.size() && s[i] != '\n') step(1);
      continue;
    }
    Tok t;
    t.line = line;
    t.col = col;
    t.begin = i;
    if (i >= s.size()) {
      t.end = i;
      out.push_back(t);
      return out;
    }
    const char c = s[i];
    switch (c) {
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '{': t.kind = Tok::LBrace; break;
      case '}': t.kind = Tok::RBrace; break;
      case ',': t.kind = Tok::Comma; break;
      case '"': {
        auto close = s.find('"', i + 1);
        if (close == std::string_view::npos) throw ParseError("unterminated string", line, col);
        t.kind = Tok::String;
        t.text = std::string(s.substr(i + 1, close - i - 1));
        step(close + 1 - i);
        t.end = i;
        out.push_back(t);
        continue;
      }
      default: {
        std::size_t j = i;
        while (j < s.size() && !special(s[j])) ++j;
        t.kind = Tok::Atom;
        t.text = std::string(s.substr(i, j - i));
        step(j - i);
        t.end = i;
        out.push_back(t);
        continue;
      }
    }
    t.text = std::string(1, c);
    step(1);
    t.end = i;
    out.push_back(t);
  }
}

template <Semiring S>
class DiagramParser {
 public:
  explicit DiagramParser(std::string_view src) : src_(src), toks_(lex(src)) {}

  LabeledDiagram<S> run() {
    expect(Tok::LParen, "'(worlds ...)'");
    if (atom() != "worlds") fail(prev(), "a diagram starts with (worlds ...)");
    std::vector<std::string> names;
    while (peek().kind == Tok::Atom || peek().kind == Tok::String) {
      names.push_back(next().text);
      for (std::size_t k = 0; k + 1 < names.size(); ++k)
        if (names[k] == names.back()) fail(prev(), "world '" + names.back() + "' declared twice");
    }
    expect(Tok::RParen, "')' after the world names");
    W_ = WorldSet(names);
    auto t = term();
    expect(Tok::End, "end of input");
    return {W_, t};
  }

 private:
  TermPtr<S> term() {
    const Tok& open = expect(Tok::LParen, "'('");
    const std::string head = atom();
    const Tok at = prev();
    TermPtr<S> out;
    try {
      out = node(head, open);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(std::string(e.what()), at.line, at.col);
    }
    expect(Tok::RParen, "')' closing (" + head);
    return out;
  }

  TermPtr<S> node(const std::string& head, const Tok& open) {
    const std::size_t n = W_.size();
    if (head == "seq" || head == "par") {
      std::vector<TermPtr<S>> kids;
      while (peek().kind == Tok::LParen) kids.push_back(term());
      if (head == "par") return par<S>(kids, n);
      if (kids.empty()) return Term<S>::empty(n);
      return seq<S>(kids);
    }
    if (head == "perm") {
      expect(Tok::LParen, "'(' before the permutation");
      std::vector<std::size_t> perm;
      while (peek().kind == Tok::Atom) perm.push_back(index(next()));
      expect(Tok::RParen, "')' after the permutation");
      std::vector<WireType> ts;
      std::vector<Label> ls;
      while (peek().kind != Tok::RParen) {
        ts.push_back(type());
        ls.push_back(label());
      }
      return Term<S>::make_perm(DiagObject(ts), ls, perm, n);
    }
    GenKind k;
    try {
      k = gen_kind_of(head);
    } catch (const ParseError&) {
      fail(prev(), "unknown node '" + head + "'");
    }
    (void)open;
    Generator<S> g;
    g.kind = k;
    switch (k) {
      case GenKind::Swap:
      case GenKind::Plus:
      case GenKind::PlusDag:
      case GenKind::Tensor:
      case GenKind::TensorDag:
        g.a = type();
        g.b = type();
        break;
      case GenKind::Unit:
      case GenKind::UnitDag:
        break;
      default:
        g.a = type();
    }
    if (k == GenKind::Scalar) g.scalar = scalar();
    if (peek().kind == Tok::LParen) {
      explicit_ports(g);
    } else {
      natural_ports(g);
    }
    return leaf<S>(std::move(g), n);
  }

  void natural_ports(Generator<S>& g) {
    const std::size_t n = W_.size();
    auto one = [&] { return label(); };
    switch (g.kind) {
      case GenKind::Id: g = gen::id<S>(g.a, one()); break;
      case GenKind::Cup: g = gen::cup<S>(g.a, one()); break;
      case GenKind::Cap: g = gen::cap<S>(g.a, one()); break;
      case GenKind::Unit: g = gen::unit<S>(one()); break;
      case GenKind::UnitDag: g = gen::unit_dag<S>(one()); break;
      case GenKind::Tensor: g = gen::tensor<S>(g.a, g.b, one()); break;
      case GenKind::TensorDag: g = gen::tensor_dag<S>(g.a, g.b, one()); break;
      case GenKind::Scalar: g = gen::scalar<S>(g.a, g.scalar, one()); break;
      case GenKind::Swap:
      case GenKind::Plus:
      case GenKind::PlusDag: {
        auto w = one();
        auto v = one();
        if (g.kind == GenKind::Swap) g = gen::swap<S>(g.a, g.b, w, v);
        else if (g.kind == GenKind::Plus) g = gen::plus<S>(g.a, g.b, w, v);
        else g = gen::plus_dag<S>(g.a, g.b, w, v);
        break;
      }
      case GenKind::Contraction:
      case GenKind::ContractionDag: {
        std::vector<Label> ws;
        while (peek().kind == Tok::LBrace) ws.push_back(label());
        g = g.kind == GenKind::Contraction ? gen::contraction<S>(g.a, ws, n)
                                           : gen::contraction_dag<S>(g.a, ws, n);
        break;
      }
    }
  }

  void explicit_ports(Generator<S>& g) {
    auto ports = [&](const char* which) {
      expect(Tok::LParen, std::string("'(") + which + "'");
      if (atom() != which) fail(prev(), std::string("expected (") + which + " ...)");
      std::vector<Label> ls;
      while (peek().kind == Tok::LBrace) ls.push_back(label());
      expect(Tok::RParen, "')'");
      return ls;
    };
    g.in = ports("in");
    g.out = ports("out");
    if (g.kind == GenKind::Contraction) g.arity = g.in.size();
    if (g.kind == GenKind::ContractionDag) g.arity = g.out.size();
  }

  WireType type() {
    const Tok& t = peek();
    if (t.kind == Tok::Atom) {
      next();
      return parse_at(t, t.text);
    }
    if (t.kind != Tok::LParen) fail(t, "expected a type");
    // raw text up to the matching parenthesis
    int depth = 0;
    const Tok first = t;
    Tok last = t;
    do {
      const Tok& x = next();
      if (x.kind == Tok::End) fail(first, "unbalanced parentheses in type");
      if (x.kind == Tok::LParen) ++depth;
      if (x.kind == Tok::RParen) --depth;
      last = x;
    } while (depth > 0);
    return parse_at(first, src_.substr(first.begin, last.end - first.begin));
  }

  WireType parse_at(const Tok& at, std::string_view text) {
    try {
      return parse_type(text);
    } catch (const ParseError& e) {
      fail(at, std::string("bad type '") + std::string(text) + "': " + e.what());
    }
  }

  typename S::T scalar() {
    const Tok& t = peek();
    if (t.kind != Tok::Atom && t.kind != Tok::String) fail(t, "expected a scalar");
    next();
    try {
      return parse_scalar<S>(t.text);
    } catch (const ParseError& e) {
      fail(t, "bad scalar '" + t.text + "' over " + std::string(S::name()) + ": " + e.what());
    }
  }

  Label label() {
    expect(Tok::LBrace, "a label '{...}'");
    Label l = W_.empty_label();
    while (peek().kind == Tok::Atom || peek().kind == Tok::String) {
      const Tok& w = next();
      const auto i = W_.find(w.text);
      if (i >= W_.size()) fail(w, "unknown world '" + w.text + "'");
      l.set(i);
      if (peek().kind == Tok::Comma) next();
    }
    expect(Tok::RBrace, "'}'");
    return l;
  }

  std::size_t index(const Tok& t) {
    std::size_t v = 0;
    for (char c : t.text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) fail(t, "expected an index");
      v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    return v;
  }

  const std::string& atom() {
    if (peek().kind != Tok::Atom) fail(peek(), "expected a name");
    return next().text;
  }

  const Tok& peek() const { return toks_[k_]; }
  const Tok& prev() const { return toks_[k_ == 0 ? 0 : k_ - 1]; }
  const Tok& next() {
    const Tok& t = toks_[k_];
    if (k_ + 1 < toks_.size()) ++k_;
    return t;
  }
  const Tok& expect(Tok::Kind k, const std::string& what) {
    if (peek().kind != k)
      fail(peek(), "expected " + what + ", found " +
                       (peek().kind == Tok::End ? std::string("end of input") : "'" + peek().text + "'"));
    return next();
  }
  [[noreturn]] void fail(const Tok& t, const std::string& msg) const {
    throw ParseError(msg, t.line, t.col);
  }

  std::string_view src_;
  std::vector<Tok> toks_;
  std::size_t k_ = 0;
  WorldSet W_;
};

/// Atoms that would not lex back as one token are written as strings.
inline std::string quote(const std::string& s) {
  bool plain = !s.empty();
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '{' ||
        c == '}' || c == ',' || c == ';' || c == '"')
      plain = false;
  return plain ? s : "\"" + s + "\"";
}

inline std::string show(const WorldSet& W, const Label& l) {
  std::string s = "{";
  bool first = true;
  for (auto i = l.find_first(); i != Label::npos; i = l.find_next(i)) {
    s += (first ? "" : ",") + quote(W.name(i));
    first = false;
  }
  return s + "}";
}

template <Semiring S>
bool natural(const Generator<S>& g, std::size_t n) {
  Generator<S> h;
  switch (g.kind) {
    case GenKind::Id: h = gen::id<S>(g.a, g.in.at(0)); break;
    case GenKind::Cup: h = gen::cup<S>(g.a, g.in.at(0)); break;
    case GenKind::Cap: h = gen::cap<S>(g.a, g.out.at(0)); break;
    case GenKind::Unit: h = gen::unit<S>(g.out.at(0)); break;
    case GenKind::UnitDag: h = gen::unit_dag<S>(g.in.at(0)); break;
    case GenKind::Tensor: h = gen::tensor<S>(g.a, g.b, g.in.at(0)); break;
    case GenKind::TensorDag: h = gen::tensor_dag<S>(g.a, g.b, g.out.at(0)); break;
    case GenKind::Scalar: h = gen::scalar<S>(g.a, g.scalar, g.in.at(0)); break;
    case GenKind::Swap: h = gen::swap<S>(g.a, g.b, g.in.at(0), g.in.at(1)); break;
    case GenKind::Plus: h = gen::plus<S>(g.a, g.b, g.in.at(0), g.in.at(1)); break;
    case GenKind::PlusDag: h = gen::plus_dag<S>(g.a, g.b, g.out.at(0), g.out.at(1)); break;
    case GenKind::Contraction: h = gen::contraction<S>(g.a, g.in, n); break;
    case GenKind::ContractionDag: h = gen::contraction_dag<S>(g.a, g.out, n); break;
  }
  return h.in == g.in && h.out == g.out;
}

template <Semiring S>
std::string gen_text(const Generator<S>& g, const WorldSet& W) {
  std::string s = "(" + std::string(gen_name(g.kind));
  switch (g.kind) {
    case GenKind::Swap:
    case GenKind::Plus:
    case GenKind::PlusDag:
    case GenKind::Tensor:
    case GenKind::TensorDag:
      s += " " + g.a.str() + " " + g.b.str();
      break;
    case GenKind::Unit:
    case GenKind::UnitDag:
      break;
    default:
      s += " " + g.a.str();
  }
  if (g.kind == GenKind::Scalar) s += " " + quote(S::str(g.scalar));
  auto labels = [&](const std::vector<Label>& ls) {
    std::string o;
    for (const auto& l : ls) o += " " + show(W, l);
    return o;
  };
  if (!natural(g, W.size())) return s + " (in" + labels(g.in) + ") (out" + labels(g.out) + "))";
  switch (g.kind) {
    case GenKind::Cap:
    case GenKind::Unit:
    case GenKind::TensorDag:
      return s + " " + show(W, g.out[0]) + ")";
    case GenKind::PlusDag:
    case GenKind::ContractionDag:
      return s + labels(g.out) + ")";
    case GenKind::Swap:
    case GenKind::Plus:
    case GenKind::Contraction:
      return s + labels(g.in) + ")";
    default:
      return s + " " + show(W, g.in[0]) + ")";
  }
}

template <Semiring S>
void term_text(const Term<S>& t, const WorldSet& W, std::size_t indent, std::string& out) {
  out += std::string(indent, ' ');
  switch (t.kind()) {
    case NodeKind::Gen:
      out += gen_text(t.gen(), W);
      return;
    case NodeKind::Perm: {
      out += "(perm (";
      for (std::size_t k = 0; k < t.perm().size(); ++k) out += (k ? " " : "") + std::to_string(t.perm()[k]);
      out += ")";
      for (std::size_t k = 0; k < t.in_type().size(); ++k)
        out += " " + t.in_type()[k].str() + " " + show(W, t.in_labels()[k]);
      out += ")";
      return;
    }
    case NodeKind::Seq:
    case NodeKind::Par: {
      out += t.kind() == NodeKind::Seq ? "(seq" : "(par";
      for (const auto& k : t.kids()) {
        out += "\n";
        term_text(*k, W, indent + 2, out);
      }
      out += ")";
      return;
    }
  }
}

}  // namespace fmt_detail

/// Parse the textual format; throws ParseError with a position.
template <Semiring S>
LabeledDiagram<S> parse_diagram(std::string_view src) {
  return fmt_detail::DiagramParser<S>(src).run();
}

template <Semiring S>
std::string print_diagram(const LabeledDiagram<S>& d) {
  std::string out = "(worlds";
  for (const auto& nm : d.worlds.names()) out += " " + fmt_detail::quote(nm);
  out += ")\n";
  fmt_detail::term_text(*d.term, d.worlds, 0, out);
  return out + "\n";
}

/// Graphviz: one node per generator, edges labeled "type : {worlds}".
template <Semiring S>
std::string to_dot(const LabeledDiagram<S>& d, const std::string& name = "mw") {
  auto net = Net<S>::from_diagram(d);
  net.canonicalize();
  auto esc = [](const std::string& x) {
    std::string r;
    for (char c : x) {
      if (c == '"' || c == '\\') r += '\\';
      r += c;
    }
    return r;
  };
  std::ostringstream o;
  o << "digraph " << name << " {\n  rankdir=LR;\n  node [fontname=\"Helvetica\"];\n";
  for (std::size_t p = 0; p < net.inputs.size(); ++p)
    o << "  in" << p << " [shape=point, xlabel=\"in" << p << "\"];\n";
  for (std::size_t p = 0; p < net.outputs.size(); ++p)
    o << "  out" << p << " [shape=point, xlabel=\"out" << p << "\"];\n";
  for (std::size_t i = 0; i < net.ops.size(); ++i) {
    const auto& g = net.ops[i].g;
    std::string label(gen_name(g.kind));
    if (g.kind == GenKind::Scalar) label += " " + S::str(g.scalar);
    o << "  g" << i << " [shape=box, label=\"" << esc(label) << "\"];\n";
  }
  auto end = [](const typename Net<S>::End& e, bool source) {
    if (e.op == Net<S>::npos) return (source ? "in" : "out") + std::to_string(e.port);
    return "g" + std::to_string(e.op);
  };
  std::vector<std::size_t> wires;
  for (auto w : net.inputs) wires.push_back(w);
  for (const auto& op : net.ops)
    for (auto w : op.outs) wires.push_back(w);
  for (auto w : wires) {
    const auto from = net.producer(w), to = net.consumer(w);
    o << "  " << end(from, true) << " -> " << end(to, false) << " [label=\""
      << esc(net.type(w).str() + " : " + d.worlds.show(net.label(w))) << "\"];\n";
  }
  o << "}\n";
  return o.str();
}

/// Header of basis index k of interp(obj): one entry per wire, the basis
/// position inside the wire or "•" when it is disabled.
inline std::string basis_header(const DiagObject& obj, std::size_t k) {
  const Enabling e = enabling_of_index(obj, k);
  const auto idx = kron_indices(obj, e);
  const auto pos = static_cast<std::size_t>(std::find(idx.begin(), idx.end(), k) - idx.begin());
  std::vector<std::size_t> digit(obj.size());
  std::size_t rest = pos;
  for (std::size_t w = obj.size(); w-- > 0;)
    if (e.mask[w]) {
      digit[w] = rest % obj[w].dim();
      rest /= obj[w].dim();
    }
  std::string s = obj.size() == 1 ? "" : "(";
  for (std::size_t w = 0; w < obj.size(); ++w)
    s += (w ? "," : "") + (e.mask[w] ? std::to_string(digit[w]) : std::string("•"));
  return obj.size() == 1 ? s : s + ")";
}

/// Matrix with basis headers, one row per line.
template <Semiring S>
std::string matrix_table(const Matrix<S>& m, const DiagObject& in, const DiagObject& out) {
  std::vector<std::vector<std::string>> cells(m.rows() + 1, std::vector<std::string>(m.cols() + 1));
  for (std::size_t c = 0; c < m.cols(); ++c) cells[0][c + 1] = basis_header(in, c);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    cells[r + 1][0] = basis_header(out, r);
    for (std::size_t c = 0; c < m.cols(); ++c) cells[r + 1][c + 1] = S::str(m(r, c));
  }
  // display width counts code points
  auto width = [](const std::string& s) {
    std::size_t n = 0;
    for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
    return n;
  };
  std::vector<std::size_t> w(m.cols() + 1);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) w[c] = std::max(w[c], width(row[c]));
  std::string o;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      o += std::string(w[c] - width(row[c]) + (c ? 2 : 0), ' ') + row[c];
    }
    o += "\n";
  }
  return o;
}

template <Semiring S>
std::string matrix_csv(const Matrix<S>& m) {
  std::string o;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) o += (c ? "," : "") + S::str(m(r, c));
    o += "\n";
  }
  return o;
}

}  // namespace mw
