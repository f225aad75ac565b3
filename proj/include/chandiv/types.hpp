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

#ifndef CHANDIV_TYPES_HPP_
#define CHANDIV_TYPES_HPP_

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace chandiv {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

/// Absolute and relative tolerances used throughout the library.
/// herm/trace/tp tolerances are absolute (per entry / per eigenvalue),
/// psd_tol is relative to the largest Choi eigenvalue, rank_rel_tol is
/// relative to the largest eigenvalue when counting the Kraus rank.
struct Tolerances {
  double herm_tol = 1e-9;
  double trace_tol = 1e-9;
  double psd_tol = 1e-9;
  double tp_tol = 1e-9;
  double norm_tol = 1e-9;
  double rank_rel_tol = 1e-7;
  double conv_tol = 1e-12;
};

enum class ErrorKind {
  DimensionMismatch,
  NotTracePreserving,
  NotHermitian,
  NotPSD,
  NegativeChoi,
  NumericalFailure,
  SingularNormalization,
  InvalidGenerator,
  NonConvergence,
  WrongDimension,
  WrongRank,
  OutOfRange,
  DegenerateClass,
  NotInfinitesimalDivisible,
  NonPositiveLambda,
  UnknownSuite,
  ParseError,
  SchemaError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind);

// ---------------------------------------------------------------------------
// Small dense-matrix helpers shared by all modules.
// ---------------------------------------------------------------------------

bool all_finite(const CMat& m);

/// Largest absolute entry of m - m^dagger.
double hermiticity_residual(const CMat& m);

/// (m + m^dagger) / 2, evaluated into a fresh matrix (safe to assign back).
CMat hermitian_part(const CMat& m);

/// Stacks the rows of a d x d matrix into a d^2 vector, v[i*d+j] = m(i,j).
CVec stack_rows(const CMat& m);

/// Inverse of stack_rows.
CMat unstack_rows(const CVec& v, Index d);

CMat kron(const CMat& a, const CMat& b);

/// Index involution M'_{(i,j),(k,l)} = M_{(i,k),(j,l)} on a d^2 x d^2 matrix.
/// Maps a Choi matrix to (1/d times) the matrix-units transfer matrix and
/// back; applying it twice is the identity.
CMat reshuffle(const CMat& m, Index d);

/// Trace over the first tensor factor: out(k,l) = sum_i M_{(i,k),(i,l)}.
CMat partial_trace_first(const CMat& m, Index d);

/// Trace over the second tensor factor: out(i,j) = sum_k M_{(i,k),(j,k)}.
CMat partial_trace_second(const CMat& m, Index d);

/// Eigenvalues of a Hermitian matrix, ascending.  Throws NumericalFailure
/// if the solver does not converge.
RVec hermitian_eigenvalues(const CMat& m);

/// Hermitian eigendecomposition; eigenvalues ascending.
void hermitian_eigensystem(const CMat& m, RVec& values, CMat& vectors);

/// Largest singular value.
double operator_norm(const CMat& m);

/// Principal square root of a positive semidefinite Hermitian matrix.
CMat psd_sqrt(const CMat& m);

/// Inverse square root of a positive definite Hermitian matrix.
CMat psd_inv_sqrt(const CMat& m);

CMat identity_matrix(Index d);

}  // namespace chandiv

#endif  // CHANDIV_TYPES_HPP_
