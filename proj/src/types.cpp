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

#include "chandiv/types.hpp"

#include <cmath>

namespace chandiv {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NegativeChoi: return "NegativeChoi";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::SingularNormalization: return "SingularNormalization";
    case ErrorKind::InvalidGenerator: return "InvalidGenerator";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::WrongDimension: return "WrongDimension";
    case ErrorKind::WrongRank: return "WrongRank";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DegenerateClass: return "DegenerateClass";
    case ErrorKind::NotInfinitesimalDivisible: return "NotInfinitesimalDivisible";
    case ErrorKind::NonPositiveLambda: return "NonPositiveLambda";
    case ErrorKind::UnknownSuite: return "UnknownSuite";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "UnknownError";
}

bool all_finite(const CMat& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

double hermiticity_residual(const CMat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

CMat hermitian_part(const CMat& m) {
  CMat out = m.adjoint();
  out += m;
  out /= 2.0;
  return out;
}

CVec stack_rows(const CMat& m) {
  const Index d = m.rows();
  CVec v(d * m.cols());
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

CMat unstack_rows(const CVec& v, Index d) {
  CMat m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = v(i * d + j);
  return m;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat reshuffle(const CMat& m, Index d) {
  CMat out(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      for (Index k = 0; k < d; ++k)
        for (Index l = 0; l < d; ++l)
          out(i * d + j, k * d + l) = m(i * d + k, j * d + l);
  return out;
}

CMat partial_trace_first(const CMat& m, Index d) {
  CMat out = CMat::Zero(d, d);
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l)
      for (Index i = 0; i < d; ++i) out(k, l) += m(i * d + k, i * d + l);
  return out;
}

CMat partial_trace_second(const CMat& m, Index d) {
  CMat out = CMat::Zero(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      for (Index k = 0; k < d; ++k) out(i, j) += m(i * d + k, j * d + k);
  return out;
}

RVec hermitian_eigenvalues(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::NumericalFailure, "hermitian eigensolver failed");
  return solver.eigenvalues();
}

void hermitian_eigensystem(const CMat& m, RVec& values, CMat& vectors) {
  Eigen::SelfAdjointEigenSolver<CMat> solver(m);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::NumericalFailure, "hermitian eigensolver failed");
  values = solver.eigenvalues();
  vectors = solver.eigenvectors();
}

double operator_norm(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

CMat psd_sqrt(const CMat& m) {
  RVec values;
  CMat vectors;
  hermitian_eigensystem((m + m.adjoint()) / 2.0, values, vectors);
  RVec roots(values.size());
  for (Index i = 0; i < values.size(); ++i)
    roots(i) = values(i) > 0 ? std::sqrt(values(i)) : 0.0;
  return vectors * roots.asDiagonal() * vectors.adjoint();
}

CMat psd_inv_sqrt(const CMat& m) {
  RVec values;
  CMat vectors;
  hermitian_eigensystem((m + m.adjoint()) / 2.0, values, vectors);
  if (values.minCoeff() <= 0)
    throw Error(ErrorKind::SingularNormalization,
                "matrix is not positive definite");
  RVec roots(values.size());
  for (Index i = 0; i < values.size(); ++i)
    roots(i) = 1.0 / std::sqrt(values(i));
  return vectors * roots.asDiagonal() * vectors.adjoint();
}

CMat identity_matrix(Index d) { return CMat::Identity(d, d); }

}  // namespace chandiv
