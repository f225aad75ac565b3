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

#include "chandiv/lindblad.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace chandiv {

namespace {

CMat hamiltonian_transfer(const CMat& h) {
  const Index d = h.rows();
  const Complex i_unit(0.0, 1.0);
  return i_unit * (kron(identity_matrix(d), h.transpose()) -
                   kron(h, identity_matrix(d)));
}

/// Transfer of phi(rho) - 1/2 {phi*(1), rho} for phi given by its
/// transfer matrix and phi*(1).
CMat dissipator_transfer(const CMat& phi_transfer, const CMat& phi_star_one) {
  const Index d = phi_star_one.rows();
  return phi_transfer - 0.5 * (kron(phi_star_one, identity_matrix(d)) +
                               kron(identity_matrix(d), phi_star_one.transpose()));
}

CMat projector_off_max_entangled(Index d) {
  CVec omega = stack_rows(identity_matrix(d)) / std::sqrt(double(d));
  return identity_matrix(d * d) - omega * omega.adjoint();
}

/// Coefficient matrix c with L = sum c_{ab} F_a (.) F_b^dagger over the full
/// unitary operator basis; c = B^dagger reshuffle(L) B.
CMat coefficient_matrix(Index d, const CMat& transfer) {
  const CMat b = basis_matrix(unitary_operator_basis(d));
  return b.adjoint() * reshuffle(transfer, d) * b;
}

}  // namespace

Index gks_dim(const GKSForm& g) {
  const Index n = g.g.rows();
  const Index d = Index(std::lround(std::sqrt(double(n + 1))));
  if (d * d - 1 != n)
    throw Error(ErrorKind::DimensionMismatch, "GKS matrix must be (d^2-1) x (d^2-1)");
  return d;
}

LindbladGenerator LindbladGenerator::make(const CMat& hamiltonian,
                                          const GKSForm& gks, Tolerances tol) {
  const Index d = hamiltonian.rows();
  if (hamiltonian.cols() != d)
    throw Error(ErrorKind::DimensionMismatch, "Hamiltonian must be square");
  if (gks_dim(gks) != d)
    throw Error(ErrorKind::DimensionMismatch, "GKS matrix dimension mismatch");
  if (hermiticity_residual(hamiltonian) > tol.herm_tol)
    throw Error(ErrorKind::NotHermitian, "Hamiltonian is not Hermitian");
  if (hermiticity_residual(gks.g) > tol.herm_tol)
    throw Error(ErrorKind::NotHermitian, "GKS matrix is not Hermitian");
  const RVec eigs = hermitian_eigenvalues(gks.g);
  if (eigs.minCoeff() < -tol.psd_tol * std::max(eigs.maxCoeff(), 1.0))
    throw Error(ErrorKind::NotPSD, "GKS matrix is not positive semidefinite");

  const std::vector<CMat> basis = traceless_unitary_basis(d);
  CMat phi = CMat::Zero(d * d, d * d);
  CMat phi_star_one = CMat::Zero(d, d);
  for (Index a = 0; a < gks.g.rows(); ++a)
    for (Index b = 0; b < gks.g.cols(); ++b) {
      const Complex w = gks.g(a, b);
      if (w == Complex(0, 0)) continue;
      phi += w * kron(basis[size_t(a)], basis[size_t(b)].conjugate());
      phi_star_one += w * basis[size_t(b)].adjoint() * basis[size_t(a)];
    }

  LindbladGenerator gen;
  gen.dim_ = d;
  gen.tol_ = tol;
  gen.hamiltonian_ = hamiltonian - (hamiltonian.trace() / double(d)) * identity_matrix(d);
  gen.dissipator_ = gks;
  gen.transfer_ = hamiltonian_transfer(gen.hamiltonian_) +
                  dissipator_transfer(phi, phi_star_one);
  return gen;
}

LindbladGenerator LindbladGenerator::make(const CMat& hamiltonian,
                                          const LindbladOps& ops, Tolerances tol) {
  const Index d = hamiltonian.rows();
  if (hamiltonian.cols() != d)
    throw Error(ErrorKind::DimensionMismatch, "Hamiltonian must be square");
  if (hermiticity_residual(hamiltonian) > tol.herm_tol)
    throw Error(ErrorKind::NotHermitian, "Hamiltonian is not Hermitian");
  CMat phi = CMat::Zero(d * d, d * d);
  CMat phi_star_one = CMat::Zero(d, d);
  for (const CMat& a : ops.ops) {
    if (a.rows() != d || a.cols() != d)
      throw Error(ErrorKind::DimensionMismatch, "Lindblad operator dimension mismatch");
    phi += kron(a, a.conjugate());
    phi_star_one += a.adjoint() * a;
  }
  LindbladGenerator gen;
  gen.dim_ = d;
  gen.tol_ = tol;
  gen.hamiltonian_ = hamiltonian - (hamiltonian.trace() / double(d)) * identity_matrix(d);
  gen.dissipator_ = ops;
  gen.transfer_ = hamiltonian_transfer(gen.hamiltonian_) +
                  dissipator_transfer(phi, phi_star_one);
  return gen;
}

LindbladGenerator LindbladGenerator::from_map_transfer(Index dim, const CMat& transfer,
                                                       Tolerances tol) {
  if (transfer.rows() != dim * dim || transfer.cols() != dim * dim)
    throw Error(ErrorKind::DimensionMismatch, "transfer matrix must be d^2 x d^2");
  const CMat c = coefficient_matrix(dim, transfer);
  const std::vector<CMat> basis = unitary_operator_basis(dim);

  // kappa collects the terms pairing a basis element with the identity
  // direction F_0 = 1/sqrt(d); its anti-Hermitian part is -iH.
  CMat kappa = c(0, 0) / (2.0 * double(dim)) * identity_matrix(dim);
  const double inv_sqrt_d = 1.0 / std::sqrt(double(dim));
  for (Index a = 1; a < c.rows(); ++a)
    kappa += c(a, 0) * inv_sqrt_d * basis[size_t(a)];
  CMat h = Complex(0, 0.5) * (kappa - kappa.adjoint());
  h = hermitian_part(h);
  h -= (h.trace() / double(dim)) * identity_matrix(dim);

  GKSForm gks;
  gks.g = c.bottomRightCorner(dim * dim - 1, dim * dim - 1);
  gks.g = hermitian_part(gks.g);

  LindbladGenerator gen;
  gen.dim_ = dim;
  gen.tol_ = tol;
  gen.hamiltonian_ = h;
  gen.dissipator_ = gks;
  gen.transfer_ = transfer;
  return gen;
}

CMat LindbladGenerator::apply(const CMat& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_)
    throw Error(ErrorKind::DimensionMismatch, "state dimension mismatch");
  return unstack_rows(transfer_ * stack_rows(rho), dim_);
}

GeneratorReport validate_generator(const LindbladGenerator& gen) {
  GeneratorReport report;
  const Index d = gen.dim();
  const CMat dual_one =
      unstack_rows(CVec(gen.transfer().adjoint() * stack_rows(identity_matrix(d))), d);
  report.trace_annihilating = dual_one.cwiseAbs().maxCoeff() <= gen.tol().tp_tol;

  const CMat choi = reshuffle(gen.transfer(), d) / double(d);
  report.hermiticity_preserving = hermiticity_residual(choi) <= gen.tol().herm_tol;

  const CMat q = projector_off_max_entangled(d);
  const CMat projected = q * ((choi + choi.adjoint()) / 2.0) * q;
  const RVec eigs = hermitian_eigenvalues((projected + projected.adjoint()) / 2.0);
  report.worst_eigenvalue = eigs.minCoeff();
  report.conditionally_cp =
      eigs.minCoeff() >= -gen.tol().psd_tol * std::max(eigs.maxCoeff(), 1.0);
  return report;
}

Channel exp_generator(const LindbladGenerator& gen, double t) {
  if (t < 0) throw Error(ErrorKind::OutOfRange, "time must be nonnegative");
  const GeneratorReport report = validate_generator(gen);
  if (!report.valid())
    throw Error(ErrorKind::InvalidGenerator,
                "generator fails validation, worst projected eigenvalue " +
                    std::to_string(report.worst_eigenvalue));
  const CMat scaled = t * gen.transfer();
  const CMat e = scaled.exp();
  return Channel::from_transfer({gen.dim(), Basis::MatrixUnits, e}, gen.tol(), true);
}

std::pair<CMat, GKSForm> gks_projection(const LindbladGenerator& gen) {
  const GeneratorReport report = validate_generator(gen);
  if (!report.valid())
    throw Error(ErrorKind::InvalidGenerator, "generator fails validation");
  const LindbladGenerator projected =
      LindbladGenerator::from_map_transfer(gen.dim(), gen.transfer(), gen.tol());
  return {projected.hamiltonian(), projected.gks()};
}

double det_from_gks(const GKSForm& g, double t) {
  const Index d = gks_dim(g);
  return std::exp(-double(d) * t * g.g.trace().real());
}

OptimalUnitaryResult optimal_unitary(const Channel& ch) {
  const Index d = ch.dim();
  const std::vector<CMat>& kraus = ch.kraus();
  CMat v = identity_matrix(d);
  auto objective_at = [&](const CMat& u) {
    double obj = 0.0;
    for (const CMat& k : kraus) obj += std::norm((k * u).trace());
    return obj;
  };
  double objective = objective_at(v);
  const int max_iterations = 20000;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    CMat m = CMat::Zero(d, d);
    for (const CMat& k : kraus) m += std::conj((k * v).trace()) * k;
    Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMat next_v = svd.matrixV() * svd.matrixU().adjoint();
    const double step = (next_v - v).cwiseAbs().maxCoeff();
    v = next_v;
    const double next = objective_at(v);
    if (next < objective - 1e-12 * std::max(1.0, objective))
      throw Error(ErrorKind::NumericalFailure,
                  "polar iteration objective decreased");
    // The objective flattens quadratically at the optimum, so the unitary
    // step on its own gates the purely-dissipative extraction accuracy.
    if (std::abs(next - objective) < ch.tol().conv_tol && step < 1e-9) {
      return {v, next, iter};
    }
    objective = next;
  }
  throw Error(ErrorKind::NonConvergence,
              "polar iteration did not converge, last objective " +
                  std::to_string(objective));
}

MarkovApproxResult markov_approx(const Channel& ch) {
  const Index d = ch.dim();
  const CMat id = identity_matrix(d * d);
  const OptimalUnitaryResult opt = optimal_unitary(ch);
  const CMat u0_transfer = kron(opt.u0, opt.u0.conjugate());
  return MarkovApproxResult{
      opt.u0,
      LindbladGenerator::from_map_transfer(d, ch.transfer() - id, ch.tol()),
      LindbladGenerator::from_map_transfer(d, ch.transfer() * u0_transfer - id,
                                           ch.tol()),
      opt.iterations, opt.objective};
}

PurityBounds purity_and_bounds(const Channel& ch) {
  const Index d = ch.dim();
  PurityBounds result;
  result.purity = (ch.choi() * ch.choi()).trace().real();
  result.mu = ch.choi_max_eigenvalue();
  result.det = determinant(ch);
  const OptimalUnitaryResult opt = optimal_unitary(ch);
  const Channel concatenated = compose(ch, unitary_channel(opt.u0, ch.tol()));
  const CVec omega = stack_rows(identity_matrix(d)) / std::sqrt(double(d));
  result.overlap = (omega.adjoint() * concatenated.choi() * omega)(0).real();
  result.det_bound_ok =
      result.det <= std::pow(result.purity, double(d * d) / 2.0) + 1e-10;
  result.mu3_bound_ok = result.overlap >= std::pow(result.mu, 3) - 1e-10;
  return result;
}

Channel time_ordered_exp(const GeneratorSchedule& schedule, int steps) {
  if (steps < 1) throw Error(ErrorKind::OutOfRange, "steps must be at least 1");
  const double dt = schedule.duration / double(steps);
  CMat product;
  Index d = 0;
  Tolerances tol;
  for (int k = 1; k <= steps; ++k) {
    // Left-endpoint sampling keeps the ordered product first order; midpoint
    // sampling would make it second order and overshoot the documented
    // convergence rate.
    const double tau = double(k - 1) * dt;
    const LindbladGenerator gen = schedule.sample(tau);
    const GeneratorReport report = validate_generator(gen);
    if (!report.valid())
      throw Error(ErrorKind::InvalidGenerator,
                  "schedule sample at tau=" + std::to_string(tau) + " is invalid");
    if (k == 1) {
      d = gen.dim();
      tol = gen.tol();
      product = identity_matrix(d * d);
    }
    const CMat scaled = dt * gen.transfer();
    product = CMat(scaled.exp()) * product;
  }
  return Channel::from_transfer({d, Basis::MatrixUnits, product}, tol, true);
}

}  // namespace chandiv
