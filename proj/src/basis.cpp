// Copyright 2026 The chandiv Authors.
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

#include "chandiv/basis.hpp"

#include <cmath>

namespace chandiv {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

const char* basis_name(Basis b) {
  switch (b) {
    case Basis::MatrixUnits: return "matrix_units";
    case Basis::GellMann: return "gellmann";
    case Basis::Unitary: return "unitary";
  }
  return "unknown";
}

std::vector<CMat> matrix_unit_basis(Index d) {
  std::vector<CMat> basis;
  basis.reserve(d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      CMat e = CMat::Zero(d, d);
      e(i, j) = 1.0;
      basis.push_back(e);
    }
  return basis;
}

std::vector<CMat> gellmann_basis(Index d) {
  std::vector<CMat> basis;
  basis.reserve(d * d);
  basis.push_back(CMat::Identity(d, d) / std::sqrt(double(d)));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < d; ++j)
    for (Index k = j + 1; k < d; ++k) {
      CMat x = CMat::Zero(d, d);
      x(j, k) = inv_sqrt2;
      x(k, j) = inv_sqrt2;
      basis.push_back(x);
      CMat y = CMat::Zero(d, d);
      y(j, k) = Complex(0, -inv_sqrt2);
      y(k, j) = Complex(0, inv_sqrt2);
      basis.push_back(y);
    }
  for (Index l = 1; l < d; ++l) {
    CMat z = CMat::Zero(d, d);
    const double norm = 1.0 / std::sqrt(double(l) * double(l + 1));
    for (Index k = 0; k < l; ++k) z(k, k) = norm;
    z(l, l) = -double(l) * norm;
    basis.push_back(z);
  }
  return basis;
}

std::vector<CMat> unitary_operator_basis(Index d) {
  std::vector<CMat> basis;
  basis.reserve(d * d);
  const double inv_sqrt_d = 1.0 / std::sqrt(double(d));
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      CMat u = CMat::Zero(d, d);
      for (Index r = 0; r < d; ++r) {
        const double phase = 2.0 * kPi * double(r) * double(b) / double(d);
        u((a + r) % d, r) = Complex(std::cos(phase), std::sin(phase));
      }
      basis.push_back(u * inv_sqrt_d);
    }
  return basis;
}

std::vector<CMat> make_basis(Basis b, Index d) {
  switch (b) {
    case Basis::MatrixUnits: return matrix_unit_basis(d);
    case Basis::GellMann: return gellmann_basis(d);
    case Basis::Unitary: return unitary_operator_basis(d);
  }
  throw Error(ErrorKind::SchemaError, "unknown basis");
}

std::vector<CMat> traceless_unitary_basis(Index d) {
  std::vector<CMat> basis = unitary_operator_basis(d);
  basis.erase(basis.begin());
  return basis;
}

CMat basis_matrix(const std::vector<CMat>& basis) {
  const Index d = basis.front().rows();
  CMat b(d * d, static_cast<Index>(basis.size()));
  for (Index col = 0; col < b.cols(); ++col)
    b.col(col) = stack_rows(basis[static_cast<size_t>(col)]);
  return b;
}

}  // namespace chandiv
