#ifndef SKEWMIX_DISTRIBUTIONS_HPP
#define SKEWMIX_DISTRIBUTIONS_HPP

// Restricted multivariate skew-normal and skew-t distributions:
//
//   Y = xi + skew * |U| + X,   X | w ~ N(0, Omega / w),   U | w ~ N(0, 1 / w),
//   W ~ Gamma(dof / 2, rate = dof / 2)   (W == 1 for the skew-normal).
//
// Marginalizing U gives, with Sigma = Omega + skew skew' and
//   d = (y - xi)' Sigma^-1 (y - xi),
//   m = skew' Sigma^-1 (y - xi),  s^2 = 1 - skew' Sigma^-1 skew,
//   skew-normal: f(y) = 2 phi_p(y; xi, Sigma) Phi(m / s)
//   skew-t:      f(y) = 2 t_p(y; xi, Sigma, dof)
//                      * T_{dof+p}((m / s) sqrt((dof + p) / (dof + d))).

#include "skewmix/types.hpp"

#include <cstdint>
#include <optional>

namespace skewmix {

inline constexpr double kDofMin = 2.01;
inline constexpr double kDofMax = 200.0;

struct ComponentParams {
  Vector xi;
  Matrix omega;
  Vector skew;
  std::optional<double> dof;  // absent => skew-normal

  Index dim() const noexcept { return xi.size(); }
  bool is_skew_t() const noexcept { return dof.has_value(); }

  static ComponentParams skew_normal(Vector xi, Matrix omega, Vector skew);
  static ComponentParams skew_t(Vector xi, Matrix omega, Vector skew,
                                double dof);
};

/// Throws InputError on shape mismatch and DomainError when omega is not
/// symmetric (1e-10) positive definite.
void validate(const ComponentParams& params);

/// Conditional expectations of the latent gamma weight W and half-normal
/// T = |U| given Y = y.
struct LatentMoments {
  double e_w = 1.0;     // E[W | y]
  double e_wu = 0.0;    // E[W T | y]
  double e_wu2 = 0.0;   // E[W T^2 | y]
  double e_logw = 0.0;  // E[log W | y]
};

/// Squared Mahalanobis distance d under Omega + skew skew' and the projection
/// m = skew' (Omega + skew skew')^-1 (y - xi) for each row of a data matrix.
struct RowStats {
  Vector mahalanobis;
  Vector projection;
};

/// Precomputed factorizations for repeated evaluation of one component.
class ComponentKernel {
 public:
  explicit ComponentKernel(const ComponentParams& params);

  double log_density(const Eigen::Ref<const Vector>& y) const;
  LatentMoments latent_moments(const Eigen::Ref<const Vector>& y) const;

  RowStats row_stats(const Matrix& data) const;
  double log_density_at(double mahalanobis, double projection) const;
  LatentMoments latent_moments_at(double mahalanobis, double projection) const;

  /// Row-wise log densities of an n x p matrix.
  Vector log_density_rows(const Matrix& data) const;

  const ComponentParams& params() const noexcept { return params_; }

 private:
  ComponentParams params_;
  Eigen::LLT<Matrix> sigma_llt_;  // Sigma = Omega + skew skew'
  Vector sigma_inv_skew_;
  double cond_sd_ = 1.0;          // s
  double log_norm_const_ = 0.0;
  double log_gamma_ratio_ = 0.0;  // lgamma((k + 1) / 2) - lgamma(k / 2)
  double digamma_half_k_ = 0.0;
};

double log_density_mvnorm(const Eigen::Ref<const Vector>& y,
                          const Eigen::Ref<const Vector>& mu,
                          const Eigen::Ref<const Matrix>& sigma);

double log_density_mvt(const Eigen::Ref<const Vector>& y,
                       const Eigen::Ref<const Vector>& mu,
                       const Eigen::Ref<const Matrix>& sigma, double dof);

double log_density_skewnormal(const Eigen::Ref<const Vector>& y,
                              const ComponentParams& params);

double log_density_skewt(const Eigen::Ref<const Vector>& y,
                         const ComponentParams& params);

/// Dispatches on params.dof.
double log_density(const Eigen::Ref<const Vector>& y,
                   const ComponentParams& params);

LatentMoments latent_moments(const Eigen::Ref<const Vector>& y,
                             const ComponentParams& params);

/// n draws from the stochastic representation; rows are observations.
Matrix sample_skewt(const ComponentParams& params, Index n,
                    std::uint64_t rng_seed);

/// Mean of the representation: xi + skew * E[|U|]; requires dof > 1.
Vector analytic_mean(const ComponentParams& params);

}  // namespace skewmix

#endif  // SKEWMIX_DISTRIBUTIONS_HPP
