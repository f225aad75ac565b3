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

#ifndef CHANDIV_BASIS_HPP_
#define CHANDIV_BASIS_HPP_

#include <vector>

#include "chandiv/types.hpp"

namespace chandiv {

/// Orthonormal operator bases of the Hilbert-Schmidt space of d x d matrices.
enum class Basis { MatrixUnits, GellMann, Unitary };

const char* basis_name(Basis b);

/// Matrix units |i><j|, ordered row-major (index i*d + j).
std::vector<CMat> matrix_unit_basis(Index d);

/// Generalized Gell-Mann basis: identity/sqrt(d) first, then the symmetric
/// and antisymmetric off-diagonal pairs for (j,k), j<k in lexicographic
/// order, then the d-1 diagonal elements.  For d=2 this is
/// {1, sigma_x, sigma_y, sigma_z}/sqrt(2).
std::vector<CMat> gellmann_basis(Index d);

/// Normalized shift-and-multiply unitary basis U_{a,b}/sqrt(d) with
/// U_{a,b} = sum_r exp(2 pi i r b / d) |a+r><r|, ordered by index a*d + b.
/// Element 0 is the identity; all others are traceless.
std::vector<CMat> unitary_operator_basis(Index d);

std::vector<CMat> make_basis(Basis b, Index d);

/// The d^2-1 traceless elements of the unitary operator basis, used as the
/// canonical directions of the GKS matrix.
std::vector<CMat> traceless_unitary_basis(Index d);

/// d^2 x d^2 change-of-basis matrix whose columns are stack_rows(F_beta).
/// Unitary for any orthonormal operator basis; transfer matrices transform
/// as T_basis = B^dagger T_matrix_units B.
CMat basis_matrix(const std::vector<CMat>& basis);

}  // namespace chandiv

#endif  // CHANDIV_BASIS_HPP_
