// Copyright 2026 The readout-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef READOUT_LEAST_SQUARES_HPP
#define READOUT_LEAST_SQUARES_HPP

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace readout {

struct LmOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-14;  // relative change of the scaled parameters
  double cost_tolerance = 1e-20;  // relative change of the cost
  double initial_lambda = 1e-3;
};

template <typename Real = double>
struct LeastSquaresResult {
  Eigen::Matrix<Real, Eigen::Dynamic, 1> params;
  // (J^T J)^-1 at the solution; residuals are assumed already weighted by 1/sigma.
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> covariance;
  Real cost{};  // sum of squared residuals
  int iterations{};
  bool converged{};
};

template <typename Real, typename Residual>
Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> numeric_jacobian(
    Residual& residual, const Eigen::Matrix<Real, Eigen::Dynamic, 1>& x,
    const Eigen::Matrix<Real, Eigen::Dynamic, 1>& scale, Eigen::Index n_residuals) {
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> jac(n_residuals, x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const Real h = Real(1e-6) * std::max(std::abs(x[j]), scale[j]);
    auto xp = x;
    auto xm = x;
    xp[j] += h;
    xm[j] -= h;
    jac.col(j) = (residual(xp) - residual(xm)) / (2 * h);
  }
  return jac;
}

/// Dense Levenberg-Marquardt with a central-difference Jacobian. `scale`
/// gives the typical magnitude of each parameter and sets both the
/// difference step and the damping metric.
template <typename Real = double, typename Residual>
LeastSquaresResult<Real> levenberg_marquardt(Residual residual,
                                             Eigen::Matrix<Real, Eigen::Dynamic, 1> x,
                                             const Eigen::Matrix<Real, Eigen::Dynamic, 1>& scale,
                                             const LmOptions& options = {}) {
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

  LeastSquaresResult<Real> out;
  Vec r = residual(x);
  Real cost = r.squaredNorm();
  Real lambda = Real(options.initial_lambda);
  const Eigen::Index n = x.size();

  for (int it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    const Mat jac = numeric_jacobian<Real>(residual, x, scale, r.size());
    const Mat jtj = jac.transpose() * jac;
    const Vec grad = jac.transpose() * r;
    const Vec diag = jtj.diagonal().cwiseMax(Real(1e-30) * Vec::Ones(n));

    bool accepted = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Mat a = jtj;
      a.diagonal() += lambda * diag;
      const Vec step = a.ldlt().solve(-grad);
      const Vec trial = x + step;
      const Vec r_trial = residual(trial);
      const Real cost_trial = r_trial.squaredNorm();
      if (std::isfinite(cost_trial) && cost_trial <= cost) {
        const Real rel_step = (step.cwiseQuotient(scale)).norm() /
                              (x.cwiseQuotient(scale).norm() + Real(1e-30));
        const Real rel_cost = (cost - cost_trial) / (cost + std::numeric_limits<Real>::min());
        x = trial;
        r = r_trial;
        cost = cost_trial;
        lambda = std::max(lambda / 10, Real(1e-15));
        accepted = true;
        if (rel_step < Real(options.step_tolerance) || rel_cost < Real(options.cost_tolerance) ||
            cost == 0) {
          out.converged = true;
        }
        break;
      }
      lambda *= 10;
    }
    if (!accepted) {
      // No descent direction left: at a (numerical) minimum.
      out.converged = grad.norm() <= std::sqrt(std::numeric_limits<Real>::epsilon()) *
                                         (1 + std::sqrt(cost)) * jac.norm() + Real(1e-300);
      out.converged = out.converged || lambda > Real(1e10);
      break;
    }
    if (out.converged) break;
  }

  const Mat jac = numeric_jacobian<Real>(residual, x, scale, r.size());
  const Mat jtj = jac.transpose() * jac;
  out.covariance = jtj.completeOrthogonalDecomposition().pseudoInverse();
  out.params = x;
  out.cost = cost;
  return out;
}

}  // namespace readout

#endif  // READOUT_LEAST_SQUARES_HPP
