#ifndef SKEWMIX_SPECIAL_HPP
#define SKEWMIX_SPECIAL_HPP

// Scalar special functions used by the densities and the E-step. All CDF
// values are returned in log space so that deep tails stay finite.

namespace skewmix::special {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;
inline constexpr double kSqrt2OverPi = 0.79788456080286535588;

// Below this standardized argument erfc() underflows relative accuracy and the
// continued-fraction Mills ratio takes over.
inline constexpr double kNormalTailSwitch = -37.0;

double log_norm_pdf(double x) noexcept;

/// log Phi(x), accurate to ~1e-14 relative for all finite x.
double log_norm_cdf(double x) noexcept;

/// phi(x) / Phi(x); behaves like -x for x -> -inf instead of 0/0.
double norm_pdf_over_cdf(double x) noexcept;

/// Mills ratio (1 - Phi(t)) / phi(t) for t >= 0.
double mills_ratio(double t) noexcept;

/// log T_dof(x), the Student-t CDF with real-valued dof. Falls back to a
/// log-space incomplete beta series when the CDF underflows double range.
double log_student_t_cdf(double x, double dof);

double lgamma(double x);
double digamma(double x);
double trigamma(double x);

}  // namespace skewmix::special

#endif  // SKEWMIX_SPECIAL_HPP
