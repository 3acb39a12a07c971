#include "skewmix/special.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <cmath>
#include <numbers>
#include <limits>

namespace skewmix::special {
namespace {

using Policy = boost::math::policies::policy<
    boost::math::policies::promote_double<false>,
    boost::math::policies::underflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::denorm_error<boost::math::policies::ignore_error>>;

constexpr double kSqrtHalf = 0.70710678118654752440;

// log I_z(a, b) for small z from the hypergeometric form
//   I_z(a,b) = z^a (1-z)^b / (a B(a,b)) * sum_n (a+b)_n / (a+1)_n z^n.
double log_ibeta_small_z(double a, double b, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < 10000; ++n) {
    term *= (a + b + n) / (a + 1.0 + n) * z;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  const double log_beta =
      std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return a * std::log(z) + b * std::log1p(-z) - std::log(a) - log_beta +
         std::log(sum);
}

}  // namespace

double log_norm_pdf(double x) noexcept { return -kLogSqrt2Pi - 0.5 * x * x; }

double mills_ratio(double t) noexcept {
  if (t < 3.0) {
    // erfc is accurate in this range; no cancellation.
    return 0.5 * std::erfc(t * kSqrtHalf) / std::exp(log_norm_pdf(t));
  }
  // Modified Lentz on R(t) = 1/(t + 1/(t + 2/(t + 3/(t + ...)))).
  constexpr double tiny = 1e-300;
  double f = t;
  double c = t;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    d = t + k * d;
    if (std::abs(d) < tiny) d = tiny;
    c = t + k / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

double log_norm_cdf(double x) noexcept {
  if (x >= 0.0) return std::log1p(-0.5 * std::erfc(x * kSqrtHalf));
  if (x > kNormalTailSwitch) return std::log(0.5 * std::erfc(-x * kSqrtHalf));
  return log_norm_pdf(x) + std::log(mills_ratio(-x));
}

double norm_pdf_over_cdf(double x) noexcept {
  if (x > kNormalTailSwitch) return std::exp(log_norm_pdf(x) - log_norm_cdf(x));
  return 1.0 / mills_ratio(-x);
}

double log_student_t_cdf(double x, double dof) {
  if (!std::isfinite(dof)) return log_norm_cdf(x);
  if (x == 0.0) return -std::numbers::ln2;
  const boost::math::students_t_distribution<double, Policy> dist(dof);
  if (x >= 0.0) {
    return std::log1p(-boost::math::cdf(dist, -x));
  }
  const double p = boost::math::cdf(dist, x);
  if (p > 1e-280) return std::log(p);
  // Deep lower tail: T(x) = I_z(dof/2, 1/2) / 2 with z = dof / (dof + x^2).
  const double z = dof / (dof + x * x);
  return log_ibeta_small_z(0.5 * dof, 0.5, z) - std::log(2.0);
}

double lgamma(double x) { return boost::math::lgamma(x, Policy()); }
double digamma(double x) { return boost::math::digamma(x, Policy()); }
double trigamma(double x) { return boost::math::trigamma(x, Policy()); }

}  // namespace skewmix::special
