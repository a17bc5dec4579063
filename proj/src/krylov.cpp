// Copyright 2026 The hamlearn Authors
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

#include "hamlearn/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hamlearn/errors.hpp"

namespace hamlearn {

namespace {

Eigen::VectorXcd random_vector(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = {normal(rng), normal(rng)};
  return v / v.norm();
}

// Two passes of classical Gram-Schmidt against the first `cols` columns.
double orthogonalize(Eigen::VectorXcd& w, const Eigen::MatrixXcd& q,
                     Eigen::Index cols) {
  for (int pass = 0; pass < 2; ++pass) {
    if (cols == 0) break;
    Eigen::VectorXcd overlaps = q.leftCols(cols).adjoint() * w;
    w.noalias() -= q.leftCols(cols) * overlaps;
  }
  return w.norm();
}

}  // namespace

Eigenpairs lowest_eigenpairs(const LinearMap& apply, Eigen::Index dim,
                             int count, const KrylovOptions& options) {
  if (dim <= 0 || count <= 0) throw UsageError("empty eigenproblem");
  count = static_cast<int>(std::min<Eigen::Index>(count, dim));
  const Eigen::Index max_basis =
      std::min<Eigen::Index>(std::max(options.max_basis, count + 10), dim);
  const Eigen::Index keep =
      std::min<Eigen::Index>(count + 8, std::max<Eigen::Index>(count, max_basis - 10));

  std::mt19937_64 rng(options.start_seed);
  Eigen::MatrixXcd q(dim, max_basis);
  Eigen::MatrixXcd hq(dim, max_basis);
  Eigen::Index cols = 0;
  Eigen::VectorXcd tmp(dim);

  auto append = [&](const Eigen::VectorXcd& v) {
    q.col(cols) = v;
    apply(v, tmp);
    hq.col(cols) = tmp;
    ++cols;
  };
  // Appends a normalized direction orthogonal to the current basis, falling
  // back to random directions when `w` lies in the span.
  auto extend = [&](Eigen::VectorXcd w, double scale) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      double norm = orthogonalize(w, q, cols);
      if (norm > 1e-10 * std::max(scale, 1e-300)) {
        append(w / norm);
        return true;
      }
      w = random_vector(dim, rng);
      scale = 1.0;
    }
    return false;
  };

  append(random_vector(dim, rng));

  Eigenpairs result;
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    while (cols < max_basis) {
      Eigen::VectorXcd w = hq.col(cols - 1);
      double scale = w.norm();
      if (!extend(std::move(w), scale)) break;
    }

    Eigen::MatrixXcd t = q.leftCols(cols).adjoint() * hq.leftCols(cols);
    t = (0.5 * (t + t.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> small(t);
    const Eigen::VectorXd& theta = small.eigenvalues();
    const Eigen::Index kept = std::min(keep, cols);
    Eigen::MatrixXcd y = small.eigenvectors().leftCols(kept);
    Eigen::MatrixXcd x = q.leftCols(cols) * y;
    Eigen::MatrixXcd hx = hq.leftCols(cols) * y;

    const double norm_scale =
        std::max({1.0, std::abs(theta(0)), std::abs(theta(cols - 1))});
    Eigen::VectorXd res(count);
    for (int i = 0; i < count; ++i) {
      res(i) = (hx.col(i) - theta(i) * x.col(i)).norm();
    }
    const double worst = res.maxCoeff();
    const bool exhausted = cols == dim;
    if (worst < best * 0.5) {
      best = worst;
      stalled = 0;
    } else {
      ++stalled;
    }
    const bool tight = worst <= options.relative_tolerance * norm_scale;
    const bool plateau = stalled >= 4 && res(0) <= 1e-11 * norm_scale &&
                         worst <= options.stalled_tolerance * norm_scale;
    if (tight || plateau || exhausted || restart == options.max_restarts) {
      result.values = theta.head(count);
      result.vectors = x.leftCols(count);
      // Fresh residuals, independent of accumulated Krylov round-off.
      result.residuals.resize(count);
      for (int i = 0; i < count; ++i) {
        apply(result.vectors.col(i), tmp);
        result.residuals(i) =
            (tmp - result.values(i) * result.vectors.col(i)).norm();
      }
      result.converged = tight || plateau || exhausted;
      return result;
    }

    // Thick restart: keep the lowest Ritz vectors, refresh their images, and
    // continue from the residual of the least converged wanted pair.
    int target = 0;
    for (int i = 1; i < count; ++i) {
      if (res(i) > res(target)) target = i;
    }
    Eigen::VectorXcd residual = hx.col(target) - theta(target) * x.col(target);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(x);
    q.leftCols(kept) = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, kept);
    cols = kept;
    for (Eigen::Index j = 0; j < kept; ++j) {
      apply(q.col(j), tmp);
      hq.col(j) = tmp;
    }
    extend(std::move(residual), norm_scale);
  }
  return result;
}

Eigen::VectorXcd expm_multiply(const LinearMap& apply, const Eigen::VectorXcd& v,
                               double tau, double tolerance) {
  const double beta0 = v.norm();
  if (beta0 == 0.0 || tau == 0.0) return v;
  const Eigen::Index dim = v.size();
  const int max_m = static_cast<int>(std::min<Eigen::Index>(dim, 48));

  Eigen::MatrixXcd basis(dim, max_m);
  std::vector<double> alpha, beta;
  basis.col(0) = v / beta0;
  Eigen::VectorXcd w(dim);
  for (int m = 1; m <= max_m; ++m) {
    apply(basis.col(m - 1), w);
    const double a = basis.col(m - 1).dot(w).real();
    alpha.push_back(a);
    w -= a * basis.col(m - 1);
    if (m > 1) w -= beta.back() * basis.col(m - 2);
    orthogonalize(w, basis, m);
    const double b = w.norm();

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::VectorXcd phases(m);
    for (int i = 0; i < m; ++i) {
      phases(i) = std::polar(1.0, -tau * es.eigenvalues()(i)) *
                  es.eigenvectors()(0, i);
    }
    Eigen::VectorXcd y = es.eigenvectors().cast<std::complex<double>>() * phases;
    const double error = b * std::abs(y(m - 1));
    if (error <= tolerance || b <= 1e-14 * std::max(1.0, std::abs(a)) || m == dim) {
      return beta0 * (basis.leftCols(m) * y);
    }
    if (m == max_m) break;
    beta.push_back(b);
    basis.col(m) = w / b;
  }
  // Krylov space too small for this step: split it.
  Eigen::VectorXcd half = expm_multiply(apply, v, 0.5 * tau, tolerance);
  return expm_multiply(apply, half, 0.5 * tau, tolerance);
}

}  // namespace hamlearn
