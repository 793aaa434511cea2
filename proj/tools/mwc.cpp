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


// mwc: command line front end for diagrams (.mw) and iso programs (.iso).

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mw/gallery.hpp"
#include "mw/isolang.hpp"
#include "mw/normform.hpp"
#include "mw/rewrite.hpp"
#include "mw/textfmt.hpp"

using json = nlohmann::json;
using namespace mw;

namespace {

struct Options {
  std::string semiring = "complex";
  bool json = false;
  std::string file, file2, script, input, iso_name, matrix, in_obj, out_obj, demo, block = "full";
  bool csv = false, dot = false, show_diagram = false, derivation = false, list = false;
  bool no_check = false;
};

/// Failure that maps to exit status 2 with a located message.
struct Diagnostic {
  std::string text;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream f(path);
  if (!f) throw Diagnostic{path + ": error: cannot open file"};
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

[[noreturn]] void located(const std::string& path, const ParseError& e) {
  // ParseError's message already starts with "line:col: "
  throw Diagnostic{path + ":" + e.what()};
}

template <Semiring S>
json scalar_json(const typename S::T& x) {
  if constexpr (std::is_same_v<S, Complex>) {
    return json::array({x.real(), x.imag()});
  } else if constexpr (std::is_same_v<S, Boolean>) {
    return x ? 1 : 0;
  } else if constexpr (std::is_same_v<S, NonNeg>) {
    return x;
  } else {
    return S::str(x);
  }
}

template <Semiring S>
json matrix_json(const Matrix<S>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_json<S>(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json headers_json(const DiagObject& obj, std::size_t n) {
  json h = json::array();
  for (std::size_t k = 0; k < n; ++k) h.push_back(basis_header(obj, k));
  return h;
}

template <Semiring S>
class Runner {
 public:
  explicit Runner(const Options& o) : o_(o) {}

  int run(const std::string& cmd) {
    if (cmd == "parse") return parse();
    if (cmd == "validate") return validate_cmd();
    if (cmd == "sem") return sem();
    if (cmd == "eq") return eq();
    if (cmd == "normalize") return normalize_cmd();
    if (cmd == "synthesize") return synthesize_cmd();
    if (cmd == "rewrite") return rewrite();
    if (cmd == "run-iso") return run_iso();
    if (cmd == "compile-iso") return compile_iso();
    if (cmd == "demo") return demo();
    if (cmd == "export-dot") return export_dot();
    throw Diagnostic{"unknown command " + cmd};
  }

 private:
  static bool is_iso(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".iso") == 0;
  }

  LabeledDiagram<S> load(const std::string& path) {
    const auto src = slurp(path);
    try {
      if (is_iso(path)) {
        auto p = iso::parse_program(src);
        iso::check_program(p);
        return iso::compile<S>(p);
      }
      return parse_diagram<S>(src);
    } catch (const ParseError& e) {
      located(path, e);
    }
  }

  /// Load and insist on a valid diagram.
  LabeledDiagram<S> load_valid(const std::string& path) {
    auto d = load(path);
    auto v = mw::validate(d);
    if (!v.empty()) {
      std::string msg;
      for (const auto& x : v) msg += path + ": invalid: " + x.str() + "\n";
      msg.pop_back();
      throw Diagnostic{msg};
    }
    return d;
  }

  int parse() {
    if (is_iso(o_.file)) {
      iso::Program p;
      try {
        p = iso::parse_program(slurp(o_.file));
      } catch (const ParseError& e) {
        located(o_.file, e);
      }
      std::cout << iso::print(p);
      return 0;
    }
    auto d = load(o_.file);
    if (o_.json) {
      std::cout << json{{"worlds", d.worlds.names()},
                        {"in", d.in_type().str()},
                        {"out", d.out_type().str()},
                        {"generators", d.term->size()},
                        {"text", print_diagram(d)}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << print_diagram(d);
    }
    return 0;
  }

  int validate_cmd() {
    if (is_iso(o_.file)) {
      try {
        auto p = iso::parse_program(slurp(o_.file));
        auto der = iso::check_program(p);
        if (o_.derivation) std::cout << der.str();
      } catch (const ParseError& e) {
        located(o_.file, e);
      }
      std::cout << o_.file << ": ok\n";
      return 0;
    }
    auto d = load(o_.file);
    auto v = mw::validate(d);
    if (o_.json) {
      json errs = json::array();
      for (const auto& x : v)
        errs.push_back({{"path", x.path}, {"constraint", x.constraint}, {"message", x.message}});
      std::cout << json{{"valid", v.empty()}, {"violations", errs}}.dump(2) << "\n";
    } else {
      for (const auto& x : v) std::cerr << o_.file << ": " << x.str() << "\n";
      if (v.empty()) std::cout << o_.file << ": ok\n";
    }
    return v.empty() ? 0 : 2;
  }

  int sem() {
    auto d = load_valid(o_.file);
    Matrix<S> m = sem_agnostic<S>(d);
    DiagObject in = d.in_type(), out = d.out_type();
    std::vector<std::string> rh, ch;
    if (o_.block == "enabled") {
      m = enabled_block<S>(m, in, out);
      for (std::size_t k = 0; k < m.rows(); ++k) rh.push_back(basis_header(out, k));
      for (std::size_t k = 0; k < m.cols(); ++k) ch.push_back(basis_header(in, k));
    } else if (o_.block != "full") {
      throw Diagnostic{"--block must be full or enabled"};
    } else {
      for (std::size_t k = 0; k < m.rows(); ++k) rh.push_back(basis_header(out, k));
      for (std::size_t k = 0; k < m.cols(); ++k) ch.push_back(basis_header(in, k));
    }
    if (o_.json) {
      std::cout << json{{"semiring", S::name()},
                        {"in", in.str()},
                        {"out", out.str()},
                        {"rows", m.rows()},
                        {"cols", m.cols()},
                        {"row_basis", rh},
                        {"col_basis", ch},
                        {"matrix", matrix_json<S>(m)}}
                       .dump(2)
                << "\n";
    } else if (o_.csv) {
      std::cout << matrix_csv<S>(m);
    } else if (o_.block == "enabled") {
      // enabled rows are the leading Kronecker indices
      std::cout << matrix_table<S>(m, in, out);
    } else {
      std::cout << matrix_table<S>(m, in, out);
    }
    return 0;
  }

  int eq() {
    auto f = load_valid(o_.file), g = load_valid(o_.file2);
    Equivalence e;
    try {
      e = check_equivalence<S>(f, g);
    } catch (const ShapeError& x) {
      if (o_.json)
        std::cout << json{{"equivalent", false}, {"reason", x.what()}}.dump(2) << "\n";
      else
        std::cout << "not equivalent: " << x.what() << "\n";
      return 1;
    }
    if (o_.json)
      std::cout << json{{"equivalent", e.equivalent},
                        {"semantic", e.semantic},
                        {"normal_forms_equal", e.structural}}
                       .dump(2)
                << "\n";
    else
      std::cout << (e.equivalent ? "equivalent" : "not equivalent") << "\n";
    return e.equivalent ? 0 : 1;
  }

  int normalize_cmd() {
    auto d = load_valid(o_.file);
    auto nf = mw::normalize<S>(d);
    const auto& W = nf.block.worlds;
    const std::size_t rows = nf.lambda.rows(), cols = nf.lambda.cols();
    if (o_.json) {
      json names = json::array();
      for (std::size_t j = 0; j < rows; ++j) {
        json row = json::array();
        for (std::size_t i = 0; i < cols; ++i) row.push_back(W.name(block_world(j, i, cols)));
        names.push_back(row);
      }
      json out{{"semiring", S::name()},
               {"in", nf.in.str()},
               {"out", nf.out.str()},
               {"row_basis", headers_json(nf.out, rows)},
               {"col_basis", headers_json(nf.in, cols)},
               {"worlds", names},
               {"lambda", matrix_json<S>(nf.lambda)}};
      if (o_.show_diagram) out["diagram"] = print_diagram(nf.composite);
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    std::cout << "normal form " << nf.in.str() << " -> " << nf.out.str() << " over "
              << W.size() << " worlds\n";
    Matrix<S> dummy(rows, cols);
    std::vector<std::vector<std::string>> cells(rows + 1, std::vector<std::string>(cols + 1));
    for (std::size_t i = 0; i < cols; ++i) cells[0][i + 1] = basis_header(nf.in, i);
    for (std::size_t j = 0; j < rows; ++j) {
      cells[j + 1][0] = basis_header(nf.out, j);
      for (std::size_t i = 0; i < cols; ++i)
        cells[j + 1][i + 1] = W.name(block_world(j, i, cols)) + "=" + S::str(nf.lambda(j, i));
    }
    print_grid(cells);
    if (o_.show_diagram) std::cout << "\n" << print_diagram(nf.composite);
    return 0;
  }

  static void print_grid(const std::vector<std::vector<std::string>>& cells) {
    auto width = [](const std::string& s) {
      std::size_t n = 0;
      for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
      return n;
    };
    std::vector<std::size_t> w(cells.at(0).size());
    for (const auto& row : cells)
      for (std::size_t c = 0; c < row.size(); ++c) w[c] = std::max(w[c], width(row[c]));
    for (const auto& row : cells) {
      for (std::size_t c = 0; c < row.size(); ++c)
        std::cout << std::string(w[c] - width(row[c]) + (c ? 2 : 0), ' ') << row[c];
      std::cout << "\n";
    }
  }

  Matrix<S> read_matrix(const std::string& path) {
    const auto text = slurp(path);
    std::vector<std::vector<typename S::T>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
      std::vector<typename S::T> row;
      std::size_t start = 0;
      for (;;) {
        auto comma = line.find(',', start);
        auto cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
          row.push_back(parse_scalar<S>(cell));
        } catch (const ParseError& e) {
          throw Diagnostic{path + ":" + std::to_string(lineno) + ":" + std::to_string(start + 1) +
                           ": bad entry '" + cell + "': " + e.what()};
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (!rows.empty() && row.size() != rows[0].size())
        throw Diagnostic{path + ":" + std::to_string(lineno) + ":1: ragged matrix row"};
      rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Diagnostic{path + ": empty matrix"};
    Matrix<S> m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
  }

  DiagObject object(const std::string& text, const char* what) {
    try {
      return parse_object(text);
    } catch (const ParseError& e) {
      throw Diagnostic{std::string(what) + ":" + e.what()};
    }
  }

  int synthesize_cmd() {
    const auto a = object(o_.in_obj, "--in"), b = object(o_.out_obj, "--out");
    auto u = read_matrix(o_.matrix);
    if (u.rows() == dim_of(b, false) && u.cols() == dim_of(a, false) &&
        (u.rows() != interp_dim(b) || u.cols() != interp_dim(a))) {
      // only the enabled block was given: pad with zeros
      Matrix<S> full(interp_dim(b), interp_dim(a));
      const auto ri = kron_indices(b, Enabling{b, std::vector<bool>(b.size(), true)});
      const auto ci = kron_indices(a, Enabling{a, std::vector<bool>(a.size(), true)});
      for (std::size_t r = 0; r < u.rows(); ++r)
        for (std::size_t c = 0; c < u.cols(); ++c) full(ri[r], ci[c]) = u(r, c);
      u = full;
    }
    LabeledDiagram<S> d;
    try {
      d = mw::synthesize<S>(a, b, u).diagram();
    } catch (const ShapeError& e) {
      throw Diagnostic{std::string("synthesize: ") + e.what()};
    }
    if (!o_.no_check && !equal<S>(sem_agnostic<S>(d), u))
      throw Diagnostic{"synthesize: semantics of the result differs from the input matrix"};
    std::cout << (o_.dot ? to_dot(d) : print_diagram(d));
    return 0;
  }

  static std::size_t dim_of(const DiagObject& o, bool) {
    std::size_t d = 1;
    for (std::size_t i = 0; i < o.size(); ++i) d *= o[i].dim();
    return d;
  }

  int rewrite() {
    if (o_.list) {
      for (const auto& r : rewrite_rules<S>())
        std::cout << r.name << "  [" << r.provenance << "]  " << r.description << "\n";
      return 0;
    }
    Derivation<S> der;
    der.initial = load_valid(o_.file);
    const auto text = slurp(o_.script);
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      try {
        auto j = json::parse(line);
        DerivationStep st;
        st.rule = j.at("rule").template get<std::string>();
        st.position = j.value("position", std::size_t{0});
        if (j.contains("bindings"))
          for (const auto& [k, v] : j["bindings"].items()) st.bindings[k] = v.template get<std::string>();
        st.lemma = j.value("lemma", std::string());
        find_rule<S>(st.rule);
        der.steps.push_back(std::move(st));
      } catch (const json::exception& e) {
        throw Diagnostic{o_.script + ":" + std::to_string(lineno) + ":1: " + e.what()};
      } catch (const RewriteError& e) {
        throw Diagnostic{o_.script + ":" + std::to_string(lineno) + ":1: " + e.what()};
      }
    }
    auto res = replay<S>(der, !o_.no_check);
    std::optional<bool> reached;
    if (res.ok && !o_.file2.empty()) reached = equivalent<S>(res.final, load_valid(o_.file2));
    if (o_.json) {
      json out{{"ok", res.ok}, {"steps", der.steps.size()}};
      if (!res.ok) {
        out["failed_step"] = res.failed_step + 1;
        out["message"] = res.message;
      }
      if (reached) out["target_equivalent"] = *reached;
      if (o_.show_diagram) out["final"] = print_diagram(res.final);
      std::cout << out.dump(2) << "\n";
    } else {
      if (res.ok)
        std::cout << "replayed " << der.steps.size() << " steps"
                  << (o_.no_check ? "" : ", semantics preserved at every step") << "\n";
      else
        std::cout << "step " << res.failed_step + 1 << " (" << der.steps[res.failed_step].rule
                  << "): " << res.message << "\n";
      if (reached) std::cout << "final diagram " << (*reached ? "is" : "is not") << " equivalent to " << o_.file2 << "\n";
      if (o_.show_diagram) std::cout << print_diagram(res.final);
    }
    return res.ok && reached.value_or(true) ? 0 : 1;
  }

  iso::Program load_program(const std::string& path) {
    try {
      auto p = iso::parse_program(slurp(path));
      iso::check_program(p);
      return p;
    } catch (const ParseError& e) {
      located(path, e);
    }
  }

  const iso::IsoDef& pick(const iso::Program& p) {
    if (o_.iso_name.empty()) return p.entry();
    if (auto* d = p.find(o_.iso_name)) return *d;
    throw Diagnostic{o_.file + ": no iso named " + o_.iso_name};
  }

  int compile_iso() {
    auto p = load_program(o_.file);
    const auto& def = pick(p);
    if (o_.derivation) std::cout << iso::check_iso(p, def).str() << "\n";
    LabeledDiagram<S> d;
    try {
      d = iso::compile<S>(p, def);
    } catch (const ParseError& e) {
      located(o_.file, e);
    }
    std::cout << (o_.dot ? to_dot(d, def.name) : print_diagram(d));
    return 0;
  }

  int run_iso() {
    auto p = load_program(o_.file);
    const auto& def = pick(p);
    LabeledDiagram<S> d;
    try {
      d = iso::compile<S>(p, def);
    } catch (const ParseError& e) {
      located(o_.file, e);
    }
    const std::size_t n = def.dom.dim();
    std::vector<typename S::T> x(interp_dim(d.in_type()), S::zero());
    const auto& s = o_.input;
    const auto first = s.find_first_not_of(" \t");
    if (first != std::string::npos && s[first] == '[') {
      // a vector of scalars over the basis of the domain
      auto close = s.rfind(']');
      std::string body = s.substr(first + 1, close == std::string::npos ? std::string::npos : close - first - 1);
      std::vector<std::string> parts;
      std::size_t start = 0;
      for (;;) {
        auto comma = body.find(',', start);
        parts.push_back(body.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (parts.size() != n)
        throw Diagnostic{"--input: expected " + std::to_string(n) + " entries, found " +
                         std::to_string(parts.size())};
      for (std::size_t k = 0; k < n; ++k) {
        try {
          x[k] = parse_scalar<S>(parts[k]);
        } catch (const ParseError& e) {
          throw Diagnostic{"--input: entry " + std::to_string(k + 1) + ": " + e.what()};
        }
      }
    } else {
      try {
        auto v = iso::parse_term(s);
        x[iso::basis_index(*v, def.dom)] = S::one();
      } catch (const ParseError& e) {
        throw Diagnostic{std::string("--input:") + e.what()};
      }
    }
    // enabled basis indices come first in the single-wire layout
    const auto m = sem_agnostic<S>(d);
    const auto vals = iso::basis_values(def.cod);
    std::vector<typename S::T> y(vals.size(), S::zero());
    for (std::size_t r = 0; r < y.size(); ++r)
      for (std::size_t c = 0; c < x.size(); ++c) y[r] = S::add(y[r], S::mul(m(r, c), x[c]));
    if (o_.json) {
      json terms = json::array(), vec = json::array();
      for (std::size_t r = 0; r < y.size(); ++r) {
        vec.push_back(scalar_json<S>(y[r]));
        if (!S::is_zero(y[r]))
          terms.push_back({{"value", iso::print(*vals[r])}, {"coefficient", scalar_json<S>(y[r])}});
      }
      std::cout << json{{"iso", def.name}, {"type", iso::print_type(def.cod)}, {"vector", vec}, {"terms", terms}}
                       .dump(2)
                << "\n";
      return 0;
    }
    bool any = false;
    for (std::size_t r = 0; r < y.size(); ++r) {
      if (S::is_zero(y[r])) continue;
      std::cout << (any ? " + " : "") << "[" << S::str(y[r]) << "] " << iso::print(*vals[r]);
      any = true;
    }
    std::cout << (any ? "" : "0") << "\n";
    return 0;
  }

  int demo() {
    auto rs = gallery::recipes<S>();
    if (o_.list || o_.demo.empty()) {
      for (const auto& r : rs)
        std::cout << r.name << (r.params.empty() ? "" : "  (" + r.params + ")") << "\n";
      return 0;
    }
    for (const auto& r : rs) {
      if (r.name != o_.demo) continue;
      auto d = r.build();
      const auto m = sem_agnostic<S>(d);
      Matrix<S> shown = m;
      const char* what = "full semantics";
      if (r.block == gallery::BlockKind::Enabled) {
        shown = enabled_block<S>(m, d.in_type(), d.out_type());
        what = "enabled block";
      } else if (r.block == gallery::BlockKind::OneParticle) {
        shown = gallery::one_particle_block<S>(m, d.in_type(), d.out_type());
        what = "one-particle block";
      }
      const bool match = equal<S>(shown, r.reference());
      if (o_.json) {
        std::cout << json{{"name", r.name},
                          {"diagram", print_diagram(d)},
                          {"dot", to_dot(d, r.name)},
                          {"block", what},
                          {"semantics", matrix_json<S>(shown)},
                          {"matches_reference", match}}
                         .dump(2)
                  << "\n";
      } else {
        std::cout << "; " << r.name << (r.params.empty() ? "" : ": " + r.params) << "\n"
                  << print_diagram(d) << "\n"
                  << to_dot(d, r.name) << "\n"
                  << what << ":\n";
        if (r.block == gallery::BlockKind::Full) {
          std::cout << matrix_table<S>(shown, d.in_type(), d.out_type());
        } else {
          for (std::size_t i = 0; i < shown.rows(); ++i) {
            for (std::size_t j = 0; j < shown.cols(); ++j) std::cout << (j ? "  " : "") << S::str(shown(i, j));
            std::cout << "\n";
          }
        }
        std::cout << "reference: " << (match ? "match" : "MISMATCH") << "\n";
      }
      return match ? 0 : 1;
    }
    throw Diagnostic{"unknown demo '" + o_.demo + "' over " + std::string(S::name()) +
                     " (try: mwc demo --list)"};
  }

  int export_dot() {
    auto d = load(o_.file);
    std::cout << to_dot(d);
    return 0;
  }

  const Options& o_;
};

int dispatch(const Options& o, const std::string& cmd) {
  if (o.semiring == "complex") return Runner<Complex>(o).run(cmd);
  if (o.semiring == "bool") return Runner<Boolean>(o).run(cmd);
  if (o.semiring == "nonneg") return Runner<NonNeg>(o).run(cmd);
  if (o.semiring == "rational") return Runner<Rational>(o).run(cmd);
  if (o.semiring == "qsqrt2i") return Runner<QSqrt2i>(o).run(cmd);
  throw Diagnostic{"unknown semiring " + o.semiring};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Many-worlds diagrams: parse, check, evaluate, normalize, rewrite"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--semiring", o.semiring, "complex, bool, nonneg, rational or qsqrt2i")
      ->check(CLI::IsMember({"complex", "bool", "nonneg", "rational", "qsqrt2i"}));
  app.add_flag("--json", o.json, "machine readable output");

  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto* parse = sub("parse", "parse a .mw or .iso file and print it back");
  parse->add_option("file", o.file)->required();
  auto* val = sub("validate", "check labeling constraints (exit 2 on violations)");
  val->add_option("file", o.file)->required();
  val->add_flag("--derivation", o.derivation, "print the typing derivation (.iso)");
  auto* sem = sub("sem", "world-agnostic semantics");
  sem->add_option("file", o.file)->required();
  sem->add_flag("--csv", o.csv, "comma separated output");
  sem->add_option("--block", o.block, "full (default) or enabled");
  auto* eq = sub("eq", "decide equivalence (exit 0 iff equivalent)");
  eq->add_option("f", o.file)->required();
  eq->add_option("g", o.file2)->required();
  auto* nf = sub("normalize", "normal form: the lambda grid");
  nf->add_option("file", o.file)->required();
  nf->add_flag("--diagram", o.show_diagram, "also print the normal form diagram");
  auto* syn = sub("synthesize", "diagram with a given semantics");
  syn->add_option("--in", o.in_obj, "input object, e.g. \"(1 + 1) [] 1\"")->required();
  syn->add_option("--out", o.out_obj, "output object")->required();
  syn->add_option("--matrix", o.matrix, "CSV file, - for stdin")->required();
  syn->add_flag("--dot", o.dot, "emit DOT instead of the diagram format");
  syn->add_flag("--no-check", o.no_check, "skip the semantic check of the result");
  auto* rw = sub("rewrite", "replay a rewrite script (JSON lines)");
  rw->add_option("file", o.file);
  rw->add_option("--script", o.script, "JSON lines of {rule, position, bindings}");
  rw->add_option("--target", o.file2, "check the result is equivalent to this diagram");
  rw->add_flag("--print", o.show_diagram, "print the final diagram");
  rw->add_flag("--no-check", o.no_check, "do not compare semantics after each step");
  rw->add_flag("--list", o.list, "list the rules");
  auto* run = sub("run-iso", "evaluate an iso program");
  run->add_option("file", o.file)->required();
  run->add_option("--input", o.input, "basis value like \"<tt, ff>\" or a vector \"[a, b, ...]\"")
      ->required();
  run->add_option("--iso", o.iso_name, "iso to run (default: main)");
  auto* comp = sub("compile-iso", "translate an iso program to a diagram");
  comp->add_option("file", o.file)->required();
  comp->add_option("--iso", o.iso_name, "iso to compile (default: main)");
  comp->add_flag("--dot", o.dot, "emit DOT");
  comp->add_flag("--derivation", o.derivation, "print the typing derivation first");
  auto* demo = sub("demo", "built-in examples");
  demo->add_option("name", o.demo);
  demo->add_flag("--list", o.list, "list the demos");
  auto* dot = sub("export-dot", "Graphviz rendering");
  dot->add_option("file", o.file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().at(0)->get_name();
  if (cmd == "rewrite" && !o.list && (o.file.empty() || o.script.empty())) {
    std::cerr << "rewrite: a diagram file and --script are required\n";
    return 2;
  }
  try {
    return dispatch(o, cmd);
  } catch (const Diagnostic& d) {
    std::cerr << d.text << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error:" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
