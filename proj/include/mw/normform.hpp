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

// Normal forms: iso_A, matrix blocks, synthesis and the decision procedure.
//
// Basis index k of an object is the Kronecker index of kernel.hpp, so the
// last index is the all-disabled one. iso_A has one exclusive 1-typed
// output per index except the last.

#include <string>
#include <vector>

#include "mw/builder.hpp"
#include "mw/semantics.hpp"

namespace mw {

namespace detail {

template <Semiring S>
class IsoBuilder {
 public:
  using B = DiagramBuilder<S>;
  using Wire = typename B::Wire;

  explicit IsoBuilder(B& b) : b_(b) {}

  /// Open a wire into dim(A) exclusive 1-wires; bw[i] = worlds of basis i.
  std::vector<Wire> open(Wire x, const std::vector<Label>& bw) {
    const WireType t = b_.type(x);
    switch (t.kind()) {
      case WireType::Kind::Unit:
        return {x};
      case WireType::Kind::Sum: {
        const std::size_t dl = t.left().dim();
        std::vector<Label> l(bw.begin(), bw.begin() + static_cast<long>(dl));
        std::vector<Label> r(bw.begin() + static_cast<long>(dl), bw.end());
        auto [xl, xr] = b_.plus_dag(x, unite(l), unite(r));
        auto out = open(xl, l);
        auto rest = open(xr, r);
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
      }
      case WireType::Kind::Prod: {
        const std::size_t dl = t.left().dim(), dr = t.right().dim();
        std::vector<std::vector<Label>> grid(dl, std::vector<Label>(dr));
        std::vector<Label> la(dl, b_.empty_label()), lb(dr, b_.empty_label());
        for (std::size_t p = 0; p < dl; ++p)
          for (std::size_t q = 0; q < dr; ++q) {
            grid[p][q] = bw[p * dr + q];
            la[p] |= grid[p][q];
            lb[q] |= grid[p][q];
          }
        auto [xa, xb] = b_.tensor_dag(x);
        auto xs = open(xa, la);
        auto ys = open(xb, lb);
        return combine(xs, ys, grid, false);
      }
    }
    return {};
  }

  /// Pair the exclusive wires xs and ys into grid cells, row-major. With
  /// disabled = true, xs and ys carry an implicit last (disabled) index and
  /// the grid has one extra row and column; the all-disabled cell has no
  /// output.
  std::vector<Wire> combine(const std::vector<Wire>& xs, const std::vector<Wire>& ys,
                            const std::vector<std::vector<Label>>& grid, bool disabled) {
    const std::size_t e = disabled ? 1 : 0;
    const std::size_t nx = xs.size(), ny = ys.size();
    std::vector<std::vector<Wire>> px(nx), py(ny);
    for (std::size_t p = 0; p < nx; ++p) {
      std::vector<Label> ls;
      for (std::size_t q = 0; q < ny + e; ++q) ls.push_back(grid[p][q]);
      px[p] = b_.contraction_dag(xs[p], ls);
    }
    for (std::size_t q = 0; q < ny; ++q) {
      std::vector<Label> ls;
      for (std::size_t p = 0; p < nx + e; ++p) ls.push_back(grid[p][q]);
      py[q] = b_.contraction_dag(ys[q], ls);
    }
    std::vector<Wire> out;
    for (std::size_t p = 0; p < nx + e; ++p)
      for (std::size_t q = 0; q < ny + e; ++q) {
        if (p < nx && q < ny) {
          out.push_back(unitor(px[p][q], py[q][p]));
        } else if (p < nx) {
          out.push_back(px[p][q]);
        } else if (q < ny) {
          out.push_back(py[q][p]);
        }
      }
    return out;
  }

  /// Two exclusive 1-wires of the same label fused into one: a cup followed
  /// by a unit.
  Wire unitor(Wire x, Wire y) {
    b_.cup(x, y);
    return b_.unit(b_.label(x));
  }

  /// The whole iso on fresh inputs of obj. basis[k] = worlds of index k.
  std::vector<Wire> iso(const DiagObject& obj, const std::vector<Label>& basis,
                        std::vector<Wire>& inputs) {
    const std::size_t n = obj.size();
    std::vector<std::size_t> radix(n);
    for (std::size_t i = 0; i < n; ++i) radix[i] = obj[i].dim() + 1;
    auto digit = [&](std::size_t k, std::size_t i) {
      for (std::size_t j = n; j-- > i + 1;) k /= radix[j];
      return k % radix[i];
    };
    std::vector<std::vector<Wire>> opened(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Label> bw(obj[i].dim(), b_.empty_label());
      for (std::size_t k = 0; k < basis.size(); ++k) {
        auto dk = digit(k, i);
        if (dk < obj[i].dim()) bw[dk] |= basis[k];
      }
      inputs.push_back(b_.input(obj[i], unite(bw)));
      opened[i] = open(inputs.back(), bw);
    }
    if (n == 0) return {};
    std::vector<Wire> acc = opened[0];
    std::size_t prefix = radix[0];  // index count of wires 0..i-1
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<std::vector<Label>> grid(prefix, std::vector<Label>(radix[i], b_.empty_label()));
      for (std::size_t k = 0; k < basis.size(); ++k) {
        std::size_t rest = 1;
        for (std::size_t j = i + 1; j < n; ++j) rest *= radix[j];
        std::size_t head = k / rest;  // index over wires 0..i
        grid[head / radix[i]][head % radix[i]] |= basis[k];
      }
      acc = combine(acc, opened[i], grid, true);
      prefix *= radix[i];
    }
    return acc;
  }

 private:
  Label unite(const std::vector<Label>& ls) const {
    Label u = b_.empty_label();
    for (const auto& l : ls) u |= l;
    return u;
  }

  B& b_;
};

/// Term of iso_obj with basis index k living in worlds basis[k].
template <Semiring S>
TermPtr<S> iso_term(const DiagObject& obj, const std::vector<Label>& basis, std::size_t nworlds,
                    bool expand) {
  DiagramBuilder<S> b(nworlds);
  IsoBuilder<S> ib(b);
  std::vector<typename DiagramBuilder<S>::Wire> ins;
  auto outs = ib.iso(obj, basis, ins);
  return b.build(outs, expand);
}

}  // namespace detail

template <Semiring S>
WorldSet iso_worlds(const DiagObject& obj) {
  return WorldSet(interp_dim(obj));
}

/// iso_A over the world set of basis indices; output k is labeled {k}.
template <Semiring S>
LabeledDiagram<S> build_iso(const DiagObject& obj, bool expand = true) {
  WorldSet W = iso_worlds<S>(obj);
  std::vector<Label> basis;
  for (std::size_t k = 0; k < W.size(); ++k) basis.push_back(W.label({k}));
  return {W, detail::iso_term<S>(obj, basis, W.size(), expand)};
}

/// iso_A^{-1}, the dagger of build_iso.
template <Semiring S>
LabeledDiagram<S> build_iso_inv(const DiagObject& obj, bool expand = true) {
  return dagger(build_iso<S>(obj, expand));
}

/// World a_{j,i} of the block carrying lambda(j, i), at index j*cols + i.
inline std::size_t block_world(std::size_t j, std::size_t i, std::size_t cols) {
  return j * cols + i;
}

inline WorldSet block_worlds(std::size_t rows, std::size_t cols) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < rows; ++j)
    for (std::size_t i = 0; i < cols; ++i)
      names.push_back("a" + std::to_string(j) + "_" + std::to_string(i));
  return WorldSet(std::move(names));
}

/// Matrix block for lambda of shape (M+1) x (N+1): N exclusive 1-inputs
/// (input i in worlds {a_{j,i}}_j), M exclusive 1-outputs, one scalar per
/// entry on its own world, zero entries kept.
template <Semiring S>
LabeledDiagram<S> build_matrix_block(const Matrix<S>& lambda, bool expand = true) {
  const std::size_t rows = lambda.rows(), cols = lambda.cols();
  if (rows == 0 || cols == 0) throw ShapeError("matrix block needs at least the disabled index");
  WorldSet W = block_worlds(rows, cols);
  const std::size_t n = W.size();
  DiagramBuilder<S> b(n);
  using Wire = typename DiagramBuilder<S>::Wire;
  auto single = [&](std::size_t j, std::size_t i) { return W.label({block_world(j, i, cols)}); };
  std::vector<std::vector<Wire>> piece(rows, std::vector<Wire>(cols));
  for (std::size_t i = 0; i + 1 < cols; ++i) {
    Label col(n);
    std::vector<Label> ls;
    for (std::size_t j = 0; j < rows; ++j) {
      ls.push_back(single(j, i));
      col |= ls.back();
    }
    auto x = b.input(WireType(), col);
    auto ps = b.contraction_dag(x, ls);
    for (std::size_t j = 0; j < rows; ++j) piece[j][i] = ps[j];
  }
  for (std::size_t j = 0; j < rows; ++j) piece[j][cols - 1] = b.unit(single(j, cols - 1));
  for (std::size_t j = 0; j < rows; ++j)
    for (std::size_t i = 0; i < cols; ++i) piece[j][i] = b.scalar(piece[j][i], lambda(j, i));
  std::vector<Wire> outs;
  for (std::size_t j = 0; j + 1 < rows; ++j) outs.push_back(b.contraction(piece[j]));
  for (std::size_t i = 0; i < cols; ++i) b.unit_dag(piece[rows - 1][i]);
  return b.diagram(W, outs, expand);
}

template <Semiring S>
struct NormalForm {
  DiagObject in, out;
  /// interp_dim(out) x interp_dim(in), the lambda grid in Kronecker order.
  Matrix<S> lambda;
  LabeledDiagram<S> iso_in;       // iso_A over its basis worlds
  LabeledDiagram<S> block;        // over the a_{j,i} worlds
  LabeledDiagram<S> iso_out_inv;  // iso_B^{-1} over its basis worlds
  /// iso_B^{-1} o block o iso_A in the a_{j,i} naming.
  LabeledDiagram<S> composite;
};

/// iso_B^{-1} o block(u) o iso_A over the a_{j,i} worlds.
template <Semiring S>
NormalForm<S> normal_form_of(const DiagObject& a, const DiagObject& b, const Matrix<S>& u,
                             bool expand = false) {
  const std::size_t rows = interp_dim(b), cols = interp_dim(a);
  if (u.rows() != rows || u.cols() != cols)
    throw ShapeError("matrix shape " + std::to_string(u.rows()) + "x" +
                     std::to_string(u.cols()) + " does not match " + std::to_string(rows) +
                     "x" + std::to_string(cols));
  NormalForm<S> nf;
  nf.in = a;
  nf.out = b;
  nf.lambda = u;
  nf.block = build_matrix_block<S>(u, expand);
  const WorldSet& W = nf.block.worlds;
  const std::size_t n = W.size();
  std::vector<Label> col(cols, Label(n)), row(rows, Label(n));
  for (std::size_t j = 0; j < rows; ++j)
    for (std::size_t i = 0; i < cols; ++i) {
      col[i].set(block_world(j, i, cols));
      row[j].set(block_world(j, i, cols));
    }
  auto in_iso = detail::iso_term<S>(a, col, n, expand);
  auto out_iso = dagger_term<S>(detail::iso_term<S>(b, row, n, expand));
  nf.composite = {W, seq<S>({in_iso, nf.block.term, out_iso})};
  nf.iso_in = build_iso<S>(a, expand);
  nf.iso_out_inv = build_iso_inv<S>(b, expand);
  return nf;
}

/// A diagram A -> B whose semantics is exactly u.
template <Semiring S>
AgnosticDiagram<S> synthesize(const DiagObject& a, const DiagObject& b, const Matrix<S>& u,
                              bool expand = false) {
  return AgnosticDiagram<S>(normal_form_of<S>(a, b, u, expand).composite);
}

/// Semantic route: lambda = [[d]].
template <Semiring S>
NormalForm<S> normalize(const LabeledDiagram<S>& d, bool expand = false) {
  return normal_form_of<S>(d.in_type(), d.out_type(), sem_agnostic<S>(d), expand);
}

/// Field-wise structural equality.
template <Semiring S>
bool nf_equal(const NormalForm<S>& x, const NormalForm<S>& y, double tol = 1e-9) {
  return x.in == y.in && x.out == y.out && equal<S>(x.lambda, y.lambda, tol) &&
         diagram_equal(x.composite, y.composite, tol) && diagram_equal(x.block, y.block, tol);
}

struct Equivalence {
  bool equivalent = false;
  bool semantic = false;    // [[f]] == [[g]]
  bool structural = false;  // normal forms identical
};

template <Semiring S>
Equivalence check_equivalence(const LabeledDiagram<S>& f, const LabeledDiagram<S>& g,
                              double tol = 1e-9) {
  if (!(f.in_type() == g.in_type()) || !(f.out_type() == g.out_type()))
    throw ShapeError("boundary mismatch: " + f.in_type().str() + " -> " + f.out_type().str() +
                     " vs " + g.in_type().str() + " -> " + g.out_type().str());
  Equivalence e;
  auto nf = normalize<S>(f), ng = normalize<S>(g);
  e.semantic = equal<S>(nf.lambda, ng.lambda, tol);
  e.structural = nf_equal<S>(nf, ng, tol);
  e.equivalent = e.semantic && e.structural;
  return e;
}

template <Semiring S>
bool equivalent(const LabeledDiagram<S>& f, const LabeledDiagram<S>& g, double tol = 1e-9) {
  auto e = check_equivalence<S>(f, g, tol);
  if (e.semantic != e.structural) throw Error("normal form and semantics disagree");
  return e.equivalent;
}

}  // namespace mw
