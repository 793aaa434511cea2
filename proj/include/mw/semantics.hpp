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

// World-dependent semantics [[-]]_a and the world-agnostic block semantics.

#include <map>
#include <vector>

#include "mw/diagram.hpp"
#include "mw/matrix.hpp"

namespace mw {

namespace detail {

inline std::size_t enabled_dim(const DiagObject& obj, const std::vector<Label>& ls,
                               std::size_t a) {
  std::size_t d = 1;
  for (std::size_t i = 0; i < obj.size(); ++i)
    if (ls[i][a]) d *= obj[i].dim();
  return d;
}

template <Semiring S>
Matrix<S> gen_matrix(const Generator<S>& g, std::size_t a) {
  const auto it = g.in_type();
  const auto ot = g.out_type();
  const std::size_t rows = enabled_dim(ot, g.out, a);
  const std::size_t cols = enabled_dim(it, g.in, a);
  Matrix<S> m(rows, cols);
  auto in_on = [&](std::size_t i) { return static_cast<bool>(g.in[i][a]); };
  auto out_on = [&](std::size_t i) { return static_cast<bool>(g.out[i][a]); };
  auto identity_if = [&](bool ok) {
    if (ok && rows == cols) m = Matrix<S>::identity(rows);
    return m;
  };
  const std::size_t da = g.a.dim();
  switch (g.kind) {
    case GenKind::Id:
      return identity_if(in_on(0) == out_on(0));
    case GenKind::Scalar:
      if (in_on(0) && out_on(0)) return scalar_mul<S>(g.scalar, Matrix<S>::identity(da));
      return identity_if(!in_on(0) && !out_on(0));
    case GenKind::Swap: {
      bool w = in_on(0), v = in_on(1);
      if (w != out_on(1) || v != out_on(0)) return m;
      if (w && v) {
        const std::size_t db = g.b.dim();
        for (std::size_t i = 0; i < da; ++i)
          for (std::size_t j = 0; j < db; ++j) m(j * da + i, i * db + j) = S::one();
        return m;
      }
      return identity_if(true);
    }
    case GenKind::Cup:
    case GenKind::Cap: {
      const auto& ls = g.kind == GenKind::Cup ? g.in : g.out;
      bool w0 = ls[0][a], w1 = ls[1][a];
      if (w0 != w1) return m;
      if (!w0) return identity_if(true);
      for (std::size_t i = 0; i < da; ++i) {
        if (g.kind == GenKind::Cup)
          m(0, i * da + i) = S::one();
        else
          m(i * da + i, 0) = S::one();
      }
      return m;
    }
    case GenKind::Plus:
    case GenKind::PlusDag: {
      const bool dag = g.kind == GenKind::PlusDag;
      const auto& br = dag ? g.out : g.in;
      const auto& sum = dag ? g.in : g.out;
      bool w = br[0][a], v = br[1][a], s = sum[0][a];
      Matrix<S> inj(g.a.dim() + g.b.dim(), 1);
      if (w && !v && s) {
        inj = Matrix<S>(g.a.dim() + g.b.dim(), g.a.dim());
        for (std::size_t i = 0; i < g.a.dim(); ++i) inj(i, i) = S::one();
      } else if (v && !w && s) {
        inj = Matrix<S>(g.a.dim() + g.b.dim(), g.b.dim());
        for (std::size_t i = 0; i < g.b.dim(); ++i) inj(g.a.dim() + i, i) = S::one();
      } else if (!w && !v && !s) {
        return identity_if(true);
      } else {
        return m;
      }
      return dag ? inj.transpose() : inj;
    }
    case GenKind::Tensor:
    case GenKind::TensorDag: {
      bool all = true, none = true;
      for (std::size_t i = 0; i < g.in.size(); ++i) (in_on(i) ? none : all) = false;
      for (std::size_t i = 0; i < g.out.size(); ++i) (out_on(i) ? none : all) = false;
      return identity_if(all || none);
    }
    case GenKind::Unit:
    case GenKind::UnitDag:
      return identity_if(true);
    case GenKind::Contraction:
    case GenKind::ContractionDag: {
      const bool dag = g.kind == GenKind::ContractionDag;
      const auto& br = dag ? g.out : g.in;
      const auto& whole = dag ? g.in : g.out;
      std::size_t on = 0;
      for (const auto& l : br) on += l[a] ? 1 : 0;
      return identity_if(on <= 1 && (on == 1) == static_cast<bool>(whole[0][a]));
    }
  }
  return m;
}

template <Semiring S>
Matrix<S> perm_matrix(const Term<S>& t, std::size_t a) {
  const auto& ls = t.in_labels();
  const auto& ty = t.in_type();
  std::vector<std::size_t> ein;  // enabled input wires, in order
  for (std::size_t i = 0; i < ls.size(); ++i)
    if (ls[i][a]) ein.push_back(i);
  std::vector<std::size_t> eout;  // enabled inputs in output order
  for (auto p : t.perm())
    if (ls[p][a]) eout.push_back(p);
  std::size_t d = 1;
  for (auto i : ein) d *= ty[i].dim();
  Matrix<S> m(d, d);
  std::vector<std::size_t> digit(ty.size(), 0);
  for (std::size_t flat = 0; flat < d; ++flat) {
    std::size_t r = flat;
    for (auto it = ein.rbegin(); it != ein.rend(); ++it) {
      digit[*it] = r % ty[*it].dim();
      r /= ty[*it].dim();
    }
    std::size_t o = 0;
    for (auto p : eout) o = o * ty[p].dim() + digit[p];
    m(o, flat) = S::one();
  }
  return m;
}

}  // namespace detail

/// [[t]]_a as a matrix from M_{enab_a(in)} to M_{enab_a(out)}.
template <Semiring S>
Matrix<S> sem_world_term(const Term<S>& t, std::size_t a) {
  if (!t.active()[a]) return Matrix<S>::unit();
  switch (t.kind()) {
    case NodeKind::Gen:
      return detail::gen_matrix<S>(t.gen(), a);
    case NodeKind::Perm:
      return detail::perm_matrix<S>(t, a);
    case NodeKind::Seq: {
      Matrix<S> m = sem_world_term<S>(*t.kids()[0], a);
      for (std::size_t i = 1; i < t.kids().size(); ++i) {
        const auto& k = *t.kids()[i];
        if (!k.active()[a]) continue;
        m = matmul<S>(sem_world_term<S>(k, a), m);
      }
      return m;
    }
    case NodeKind::Par: {
      Matrix<S> m = Matrix<S>::unit();
      bool first = true;
      for (const auto& k : t.kids()) {
        if (!k->active()[a]) continue;
        auto km = sem_world_term<S>(*k, a);
        m = first ? km : kron<S>(m, km);
        first = false;
      }
      return m;
    }
  }
  return Matrix<S>::unit();
}

template <Semiring S>
Matrix<S> sem_world(const LabeledDiagram<S>& d, std::size_t a) {
  if (a >= d.worlds.size()) throw ShapeError("world out of range");
  return sem_world_term<S>(*d.term, a);
}

inline Enabling enabling_in_world(const DiagObject& obj, const std::vector<Label>& ls,
                                  std::size_t a) {
  Enabling e{obj, std::vector<bool>(obj.size())};
  for (std::size_t i = 0; i < obj.size(); ++i) e.mask[i] = ls[i][a];
  return e;
}

/// Block matrix of shape interp_dim(out) x interp_dim(in) in the canonical
/// Kronecker basis: the sum over worlds of [[d]]_a placed at the enablings
/// induced by a on both boundaries.
template <Semiring S>
Matrix<S> sem_agnostic(const LabeledDiagram<S>& d) {
  const auto& it = d.in_type();
  const auto& ot = d.out_type();
  Matrix<S> out(interp_dim(ot), interp_dim(it));
  std::map<std::vector<bool>, std::vector<std::size_t>> rows_cache, cols_cache;
  auto idx = [](auto& cache, const DiagObject& obj, const Enabling& e)
      -> const std::vector<std::size_t>& {
    auto f = cache.find(e.mask);
    if (f != cache.end()) return f->second;
    return cache.emplace(e.mask, kron_indices(obj, e)).first->second;
  };
  for (std::size_t a = 0; a < d.worlds.size(); ++a) {
    Matrix<S> m = sem_world_term<S>(*d.term, a);
    const auto& r = idx(rows_cache, ot, enabling_in_world(ot, d.out_labels(), a));
    const auto& c = idx(cols_cache, it, enabling_in_world(it, d.in_labels(), a));
    write_block<S>(out, r, c, m);
  }
  return out;
}

/// The block between the fully enabled output and input enablings.
template <Semiring S>
Matrix<S> enabled_block(const Matrix<S>& sem, const DiagObject& in, const DiagObject& out) {
  Enabling ei{in, std::vector<bool>(in.size(), true)};
  Enabling eo{out, std::vector<bool>(out.size(), true)};
  return sem.select(kron_indices(out, eo), kron_indices(in, ei));
}

template <Semiring S>
Matrix<S> enabled_block(const LabeledDiagram<S>& d) {
  return enabled_block<S>(sem_agnostic<S>(d), d.in_type(), d.out_type());
}

/// Block (out enabling, in enabling) of an agnostic semantics matrix.
template <Semiring S>
Matrix<S> sem_block(const Matrix<S>& sem, const Enabling& in, const Enabling& out) {
  return sem.select(kron_indices(out.base, out), kron_indices(in.base, in));
}

/// [[g o f]] = [[g]] [[f]] and [[f [] g]] = [[f]] (x) [[g]] for agnostic
/// compositions; f must be composable with g for the sequential check.
template <Semiring S>
bool check_functoriality(const LabeledDiagram<S>& f, const LabeledDiagram<S>& g,
                         double tol = 1e-9) {
  auto sf = sem_agnostic<S>(f);
  auto sg = sem_agnostic<S>(g);
  bool ok = equal<S>(sem_agnostic<S>(compose_par_agnostic<S>(f, g)), kron<S>(sf, sg), tol);
  if (f.out_type() == g.in_type())
    ok = ok && equal<S>(sem_agnostic<S>(compose_seq_agnostic<S>(f, g)), matmul<S>(sg, sf), tol);
  return ok;
}

}  // namespace mw
