// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#include "ssmreg/chi2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssmreg/error.hpp"

namespace ssmreg {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxTerms = 1000000;

// log(x^a e^-x / Gamma(a))
double log_prefactor(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a);
}

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// Lentz evaluation of the continued fraction for Q(a, x).
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

double chi2_pdf(double x, double k) {
  const double a = 0.5 * k;
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw InvalidArgument("incomplete gamma needs a > 0");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double chi2_cdf(double x, double k) { return regularized_gamma_p(0.5 * k, 0.5 * x); }

double normal_quantile(double p) {
  // Acklam's rational approximation, relative error ~1e-9.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double lo = 0.02425;
  if (p < lo) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - lo) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double chi2_inv(double p, double k) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("chi2_inv needs p in (0, 1)");
  if (!(k >= 1.0)) throw InvalidArgument("chi2_inv needs k >= 1");

  // Wilson-Hilferty seed.
  const double z = normal_quantile(p);
  const double h = 2.0 / (9.0 * k);
  double x = k * std::pow(std::max(1.0 - h + z * std::sqrt(h), 1e-3), 3.0);

  // Bracket the root.
  double lo = 0.0;
  double hi = std::max(x, 1e-300);
  while (chi2_cdf(hi, k) < p) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericalError("chi2_inv failed to bracket");
  }
  if (x <= lo || x >= hi) x = 0.5 * (lo + hi);

  const double tol_abs = 1e-10;
  const double tol_rel = 1e-12;
  for (int it = 0; it < 500; ++it) {
    const double f = chi2_cdf(x, k) - p;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double pdf = chi2_pdf(x, k);
    double next = (pdf > 0.0 && std::isfinite(pdf)) ? x - f / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    const double tol = k <= 100.0 ? tol_abs * std::min(1.0, std::max(x, 1e-300) * 1e6)
                                  : tol_rel * x;
    if (step <= tol || hi - lo <= tol) return x;
  }
  return x;
}

}  // namespace ssmreg
