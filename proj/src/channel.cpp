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

#include "chandiv/channel.hpp"

#include <algorithm>
#include <cmath>

namespace chandiv {

namespace {

void check_square(const CMat& m, const char* what) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be square");
  if (!all_finite(m))
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has non-finite entries");
}

std::vector<CMat> extract_kraus(const CMat& choi, Index d, double rank_rel_tol) {
  RVec values;
  CMat vectors;
  hermitian_eigensystem(double(d) * choi, values, vectors);
  const double cutoff = rank_rel_tol * std::max(values.maxCoeff(), 0.0);
  std::vector<CMat> ops;
  for (Index i = values.size() - 1; i >= 0; --i) {
    if (values(i) <= cutoff) break;
    CMat k = std::sqrt(values(i)) * unstack_rows(vectors.col(i), d);
    // Deterministic phase: largest-magnitude entry real positive.
    Index bi = 0, bj = 0;
    double best = -1.0;
    for (Index r = 0; r < d; ++r)
      for (Index c = 0; c < d; ++c)
        if (std::abs(k(r, c)) > best) {
          best = std::abs(k(r, c));
          bi = r;
          bj = c;
        }
    if (best > 0) k *= std::conj(k(bi, bj)) / std::abs(k(bi, bj));
    ops.push_back(k);
  }
  if (ops.empty()) ops.push_back(CMat::Zero(d, d));
  return ops;
}

}  // namespace

void Channel::finalize(Tolerances tol, bool require_tp, bool known_tp) {
  tol_ = tol;
  if (dim_ < 2)
    throw Error(ErrorKind::WrongDimension, "channel dimension must be at least 2");
  if (!all_finite(choi_))
    throw Error(ErrorKind::DimensionMismatch, "Choi matrix has non-finite entries");

  const double herm_res = hermiticity_residual(choi_);
  if (herm_res > tol.herm_tol)
    throw Error(ErrorKind::NotHermitian,
                "Choi matrix is not Hermitian, residual " + std::to_string(herm_res));
  hermiticity_preserving_ = true;
  choi_ = hermitian_part(choi_);

  transfer_ = double(dim_) * reshuffle(choi_, dim_);

  const CMat tp_defect =
      partial_trace_first(double(dim_) * choi_, dim_) - identity_matrix(dim_);
  trace_preserving_ = tp_defect.cwiseAbs().maxCoeff() <= tol.tp_tol;
  if (known_tp) trace_preserving_ = true;
  if (require_tp && !trace_preserving_)
    throw Error(ErrorKind::NotTracePreserving,
                "map is not trace preserving, defect " +
                    std::to_string(tp_defect.cwiseAbs().maxCoeff()));

  const RVec eigs = hermitian_eigenvalues(choi_);
  choi_min_eig_ = eigs.minCoeff();
  choi_max_eig_ = eigs.maxCoeff();
  if (is_completely_positive())
    kraus_ = extract_kraus(choi_, dim_, tol.rank_rel_tol);
}

Channel Channel::from_kraus(const KrausRep& rep, Tolerances tol, bool require_tp) {
  if (rep.ops.empty())
    throw Error(ErrorKind::DimensionMismatch, "Kraus list is empty");
  const Index d = rep.dim > 0 ? rep.dim : rep.ops.front().rows();
  Channel ch;
  ch.dim_ = d;
  ch.choi_ = CMat::Zero(d * d, d * d);
  for (const CMat& k : rep.ops) {
    check_square(k, "Kraus operator");
    if (k.rows() != d)
      throw Error(ErrorKind::DimensionMismatch, "Kraus operator dimension mismatch");
    const CVec r = stack_rows(k);
    ch.choi_ += r * r.adjoint();
  }
  ch.choi_ /= double(d);
  ch.finalize(tol, require_tp, false);
  return ch;
}

Channel Channel::from_choi(const ChoiState& rep, Tolerances tol, bool require_tp) {
  check_square(rep.tau, "Choi matrix");
  const Index d = rep.dim > 0 ? rep.dim
                              : Index(std::lround(std::sqrt(double(rep.tau.rows()))));
  if (rep.tau.rows() != d * d)
    throw Error(ErrorKind::DimensionMismatch, "Choi matrix must be d^2 x d^2");
  if (require_tp) {
    const double tr_defect = std::abs(rep.tau.trace() - Complex(1.0, 0.0));
    if (tr_defect > tol.trace_tol * double(d * d))
      throw Error(ErrorKind::NotTracePreserving,
                  "Choi trace deviates from one by " + std::to_string(tr_defect));
  }
  Channel ch;
  ch.dim_ = d;
  ch.choi_ = rep.tau;
  ch.finalize(tol, require_tp, false);
  return ch;
}

Channel Channel::from_transfer(const TransferMatrix& rep, Tolerances tol,
                               bool require_tp) {
  check_square(rep.mat, "transfer matrix");
  const Index d = rep.dim > 0 ? rep.dim
                              : Index(std::lround(std::sqrt(double(rep.mat.rows()))));
  if (rep.mat.rows() != d * d)
    throw Error(ErrorKind::DimensionMismatch, "transfer matrix must be d^2 x d^2");
  CMat mu = rep.mat;
  if (rep.basis != Basis::MatrixUnits) {
    const CMat b = basis_matrix(make_basis(rep.basis, d));
    mu = b * rep.mat * b.adjoint();
  }
  Channel ch;
  ch.dim_ = d;
  ch.choi_ = reshuffle(mu, d) / double(d);
  ch.finalize(tol, require_tp, false);
  return ch;
}

CMat Channel::transfer_in(Basis basis) const {
  if (basis == Basis::MatrixUnits) return transfer_;
  const CMat b = basis_matrix(make_basis(basis, dim_));
  return b.adjoint() * transfer_ * b;
}

bool Channel::is_unital() const {
  const CMat defect = apply(identity_matrix(dim_)) - identity_matrix(dim_);
  return defect.norm() <= tol_.tp_tol * double(dim_);
}

bool Channel::is_completely_positive() const {
  return choi_min_eig_ >= -tol_.psd_tol * std::max(choi_max_eig_, 1e-300);
}

const std::vector<CMat>& Channel::kraus() const {
  if (!kraus_)
    throw Error(ErrorKind::NegativeChoi,
                "Kraus extraction requires a completely positive map");
  return *kraus_;
}

CMat Channel::apply(const CMat& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_)
    throw Error(ErrorKind::DimensionMismatch, "state dimension mismatch");
  return unstack_rows(transfer_ * stack_rows(rho), dim_);
}

ChoiState to_choi(const Channel& ch) { return {ch.dim(), ch.choi()}; }

KrausRep to_kraus(const Channel& ch) { return {ch.dim(), ch.kraus()}; }

TransferMatrix to_transfer(const Channel& ch, Basis basis) {
  return {ch.dim(), basis, ch.transfer_in(basis)};
}

Channel compose(const Channel& t1, const Channel& t2) {
  if (t1.dim() != t2.dim())
    throw Error(ErrorKind::DimensionMismatch, "composed channels must have equal dimension");
  return Channel::from_transfer({t1.dim(), Basis::MatrixUnits, t1.transfer() * t2.transfer()},
                                t1.tol(), false);
}

Channel dual(const Channel& ch) {
  return Channel::from_transfer({ch.dim(), Basis::MatrixUnits, CMat(ch.transfer().adjoint())},
                                ch.tol(), false);
}

double determinant(const Channel& ch) {
  const Complex det = ch.transfer().determinant();
  if (!std::isfinite(det.real()) || !std::isfinite(det.imag()))
    throw Error(ErrorKind::NumericalFailure, "determinant is not finite");
  if (std::abs(det.imag()) > 1e-8)
    throw Error(ErrorKind::NumericalFailure,
                "determinant has imaginary residue " + std::to_string(det.imag()));
  return det.real();
}

StructureReport validate(const Channel& ch) {
  StructureReport report;
  report.is_hermiticity_preserving = ch.is_hermiticity_preserving();
  report.is_trace_preserving = ch.is_trace_preserving();
  report.is_unital = ch.is_unital();
  report.is_completely_positive = ch.is_completely_positive();
  const RVec eigs = hermitian_eigenvalues(ch.choi());
  report.choi_eigenvalues.assign(eigs.data(), eigs.data() + eigs.size());
  const double cutoff = ch.tol().rank_rel_tol * std::max(eigs.maxCoeff(), 0.0);
  report.kraus_rank = 0;
  for (Index i = 0; i < eigs.size(); ++i)
    if (eigs(i) > cutoff) ++report.kraus_rank;
  report.det = determinant(ch);
  report.purity = (ch.choi() * ch.choi()).trace().real();
  return report;
}

double distance(const Channel& t1, const Channel& t2) {
  if (t1.dim() != t2.dim())
    throw Error(ErrorKind::DimensionMismatch, "channels must have equal dimension");
  return operator_norm(t1.transfer() - t2.transfer());
}

Channel identity_channel(Index d, Tolerances tol) {
  KrausRep rep{d, {identity_matrix(d)}};
  return Channel::from_kraus(rep, tol);
}

Channel unitary_channel(const CMat& v, Tolerances tol) {
  KrausRep rep{v.rows(), {v}};
  return Channel::from_kraus(rep, tol);
}

Channel completely_depolarizing_channel(Index d, Tolerances tol) {
  ChoiState rep{d, CMat::Identity(d * d, d * d) / double(d * d)};
  return Channel::from_choi(rep, tol);
}

Channel minimal_determinant_channel(Index d, Tolerances tol) {
  if (d < 2) throw Error(ErrorKind::WrongDimension, "requires d >= 2");
  CMat transfer(d * d, d * d);
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) {
      CMat e = CMat::Zero(d, d);
      e(k, l) = 1.0;
      // Corner transposition swaps the (0,d-1) and (d-1,0) entries.
      CMat img = e;
      img(0, d - 1) = e(d - 1, 0);
      img(d - 1, 0) = e(0, d - 1);
      if (k == l) img += identity_matrix(d);
      img /= double(1 + d);
      transfer.col(k * d + l) = stack_rows(img);
    }
  return Channel::from_transfer({d, Basis::MatrixUnits, transfer}, tol);
}

Channel transposition_channel(Index d, Tolerances tol) {
  if (d < 2) throw Error(ErrorKind::WrongDimension, "requires d >= 2");
  CMat transfer = CMat::Zero(d * d, d * d);
  for (Index k = 0; k < d; ++k)
    for (Index l = 0; l < d; ++l) transfer(l * d + k, k * d + l) = 1.0;
  return Channel::from_transfer({d, Basis::MatrixUnits, transfer}, tol);
}

std::pair<Channel, Channel> rebalance_to_tp(const Channel& t1, const Channel& t2) {
  if (t1.dim() != t2.dim())
    throw Error(ErrorKind::DimensionMismatch, "maps must have equal dimension");
  const Index d = t1.dim();
  // t1*(1) from the adjoint transfer matrix.
  const CMat m = unstack_rows(CVec(t1.transfer().adjoint() * stack_rows(identity_matrix(d))), d);
  RVec values;
  CMat vectors;
  hermitian_eigensystem((m + m.adjoint()) / 2.0, values, vectors);
  if (values.minCoeff() <= t1.tol().psd_tol * std::max(values.maxCoeff(), 1.0))
    throw Error(ErrorKind::SingularNormalization, "t1*(1) is singular");
  RVec roots = values.cwiseSqrt();
  const CMat p = vectors * roots.asDiagonal() * vectors.adjoint();
  const CMat p_inv = vectors * roots.cwiseInverse().asDiagonal() * vectors.adjoint();
  const CMat tr1 = t1.transfer() * kron(p_inv, p_inv.conjugate());
  const CMat tr2 = kron(p, p.conjugate()) * t2.transfer();
  Channel out1 = Channel::from_transfer({d, Basis::MatrixUnits, tr1}, t1.tol(), true);
  Channel out2 = Channel::from_transfer({d, Basis::MatrixUnits, tr2}, t2.tol(), true);
  return {out1, out2};
}

}  // namespace chandiv
