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

#include "mw/diagram.hpp"

#include <array>

namespace mw {

namespace {
constexpr std::array<std::pair<GenKind, std::string_view>, 13> kNames{{
    {GenKind::Id, "id"},
    {GenKind::Swap, "swap"},
    {GenKind::Cup, "cup"},
    {GenKind::Cap, "cap"},
    {GenKind::Plus, "plus"},
    {GenKind::PlusDag, "plusdag"},
    {GenKind::Tensor, "tensor"},
    {GenKind::TensorDag, "tensordag"},
    {GenKind::Unit, "unit"},
    {GenKind::UnitDag, "unitdag"},
    {GenKind::Contraction, "contraction"},
    {GenKind::ContractionDag, "contractiondag"},
    {GenKind::Scalar, "scalar"},
}};
}  // namespace

std::string_view gen_name(GenKind k) {
  for (const auto& [kind, name] : kNames)
    if (kind == k) return name;
  return "?";
}

GenKind gen_kind_of(std::string_view name) {
  for (const auto& [kind, n] : kNames)
    if (n == name) return kind;
  throw ParseError("unknown generator '" + std::string(name) + "'", 1, 1);
}

GenKind mirror_kind(GenKind k) {
  switch (k) {
    case GenKind::Cup:
      return GenKind::Cap;
    case GenKind::Cap:
      return GenKind::Cup;
    case GenKind::Plus:
      return GenKind::PlusDag;
    case GenKind::PlusDag:
      return GenKind::Plus;
    case GenKind::Tensor:
      return GenKind::TensorDag;
    case GenKind::TensorDag:
      return GenKind::Tensor;
    case GenKind::Unit:
      return GenKind::UnitDag;
    case GenKind::UnitDag:
      return GenKind::Unit;
    case GenKind::Contraction:
      return GenKind::ContractionDag;
    case GenKind::ContractionDag:
      return GenKind::Contraction;
    default:
      return k;  // Id, Swap, Scalar
  }
}

std::string Violation::str() const {
  return detail::path_str(path) + ": " + constraint + ": " + message;
}

}  // namespace mw
