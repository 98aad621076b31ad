// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/optimizer.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "ssmreg/error.hpp"

namespace ssmreg {

namespace {

Eigen::VectorXd project_box(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                            const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

// Search direction over the free variables. A variable is held when it sits
// on a bound and either the gradient or the proposed step points outward.
Eigen::VectorXd direction(const Eigen::MatrixXd& h, const Eigen::VectorXd& g,
                          const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi) {
  const Eigen::Index n = x.size();
  std::vector<bool> held(n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool at_lo = x[i] <= lo[i];
    const bool at_hi = x[i] >= hi[i];
    held[i] = (at_lo && at_hi) || (at_lo && g[i] > 0.0) || (at_hi && g[i] < 0.0);
  }
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  for (Eigen::Index round = 0; round <= n; ++round) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!held[i]) free.push_back(i);
    }
    d.setZero();
    for (Eigen::Index a : free) {
      double acc = 0.0;
      for (Eigen::Index b : free) acc -= h(a, b) * g[b];
      d[a] = acc;
    }
    bool changed = false;
    for (Eigen::Index i : free) {
      if ((x[i] <= lo[i] && d[i] < 0.0) || (x[i] >= hi[i] && d[i] > 0.0)) {
        held[i] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return d;
}

}  // namespace

BoxBfgsResult minimize_box_bfgs(const Objective& f, Eigen::VectorXd x0,
                                const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                const Eigen::VectorXd& inverse_diagonal,
                                const BoxBfgsOptions& options) {
  const Eigen::Index n = x0.size();
  if (lower.size() != n || upper.size() != n || inverse_diagonal.size() != n) {
    throw InvalidArgument("optimizer bound/preconditioner size mismatch");
  }
  if ((lower.array() > upper.array()).any()) throw InvalidArgument("lower bound above upper");

  BoxBfgsResult res;
  res.x = project_box(x0, lower, upper);
  Eigen::VectorXd g(n);
  res.value = f(res.x, &g);
  ++res.evaluations;
  if (!std::isfinite(res.value) || !g.allFinite()) {
    throw NumericalError("objective is not finite at the starting point");
  }

  const Eigen::MatrixXd h0 = inverse_diagonal.asDiagonal();
  Eigen::MatrixXd h = h0;
  bool fresh = true;

  for (int it = 0; it < options.max_iterations; ++it) {
    res.iterations = it;
    Eigen::VectorXd d = direction(h, g, res.x, lower, upper);
    double slope = g.dot(d);
    if (slope >= 0.0 && !fresh) {
      h = h0;
      fresh = true;
      d = direction(h, g, res.x, lower, upper);
      slope = g.dot(d);
    }
    const double scale = std::max(1.0, std::abs(res.value));
    if (-slope <= options.stationarity * scale) {
      res.converged = true;
      res.status = "stationary";
      return res;
    }

    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    Eigen::VectorXd g_new(n);
    double f_new = 0.0;
    for (int k = 0; k < options.max_backtracks; ++k, alpha *= 0.5) {
      x_new = project_box(res.x + alpha * d, lower, upper);
      const double predicted = g.dot(x_new - res.x);
      if (!(predicted < 0.0)) continue;
      f_new = f(x_new, &g_new);
      ++res.evaluations;
      if (std::isfinite(f_new) && f_new <= res.value + options.armijo * predicted) {
        accepted = true;
        break;
      }
    }

    if (!accepted) {
      if (!fresh) {
        h = h0;
        fresh = true;
        continue;
      }
      if (it == 0) {
        std::ostringstream msg;
        msg << "optimizer could not decrease the objective on its first step (f = "
            << res.value << ", predicted decrease " << -slope << ", |g| = " << g.norm()
            << ")";
        throw NumericalError(msg.str());
      }
      res.status = "line search stalled";
      res.converged = true;
      return res;
    }

    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = h * y;
      // (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded.
      h += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
           rho * (hy * s.transpose() + s * hy.transpose());
      fresh = false;
    }
    const double drop = res.value - f_new;
    res.x = std::move(x_new);
    res.value = f_new;
    g = g_new;
    if (drop <= options.relative_decrease * scale) {
      res.iterations = it + 1;
      res.converged = true;
      res.status = "small decrease";
      return res;
    }
  }
  res.iterations = options.max_iterations;
  res.status = "iteration limit";
  return res;
}

}  // namespace ssmreg
