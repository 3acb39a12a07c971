#include "skewmix/distributions.hpp"

#include "skewmix/random.hpp"
#include "skewmix/special.hpp"

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace skewmix {
namespace {

constexpr double kLog2 = std::numbers::ln2;
constexpr double kLogPi = 1.14472988584940017414;
constexpr double kLog2Pi = 1.83787706640934548356;

Eigen::LLT<Matrix> checked_llt(const Eigen::Ref<const Matrix>& m,
                               const std::string& name) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw DomainError(name + " is not positive definite", name);
  }
  return llt;
}

double log_det(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

void require_dof(const ComponentParams& params) {
  if (!params.dof) {
    throw DomainError("skew-t density requires degrees of freedom", "dof");
  }
  if (!(*params.dof >= kDofMin) || !std::isfinite(*params.dof)) {
    throw DomainError("degrees of freedom " + std::to_string(*params.dof) +
                          " below minimum " + std::to_string(kDofMin),
                      "dof");
  }
}

}  // namespace

ComponentParams ComponentParams::skew_normal(Vector xi, Matrix omega,
                                             Vector skew) {
  return ComponentParams{std::move(xi), std::move(omega), std::move(skew),
                         std::nullopt};
}

ComponentParams ComponentParams::skew_t(Vector xi, Matrix omega, Vector skew,
                                        double dof) {
  return ComponentParams{std::move(xi), std::move(omega), std::move(skew),
                         dof};
}

void validate(const ComponentParams& params) {
  const Index p = params.xi.size();
  if (p < 1 || params.omega.rows() != p || params.omega.cols() != p ||
      params.skew.size() != p) {
    throw InputError("component parameter dimensions disagree");
  }
  if (!params.xi.allFinite() || !params.skew.allFinite() ||
      !params.omega.allFinite()) {
    throw InputError("component parameters must be finite");
  }
  const double scale = std::max(1.0, params.omega.cwiseAbs().maxCoeff());
  if ((params.omega - params.omega.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * scale) {
    throw DomainError("omega is not symmetric", "omega");
  }
  checked_llt(params.omega, "omega");
  if (params.dof) require_dof(params);
}

ComponentKernel::ComponentKernel(const ComponentParams& params)
    : params_(params) {
  validate(params_);
  const Index p = params_.dim();
  const Matrix sigma = params_.omega + params_.skew * params_.skew.transpose();
  sigma_llt_ = checked_llt(sigma, "omega + skew skew'");
  sigma_inv_skew_ = sigma_llt_.solve(params_.skew);
  // s^2 = 1 - skew' Sigma^-1 skew = 1 / (1 + skew' Omega^-1 skew); the second
  // form avoids cancellation for large skew.
  const Eigen::LLT<Matrix> omega_llt = checked_llt(params_.omega, "omega");
  const double q = params_.skew.dot(omega_llt.solve(params_.skew));
  cond_sd_ = 1.0 / std::sqrt(1.0 + q);
  const double log_det_sigma = log_det(sigma_llt_);

  if (params_.dof) {
    const double nu = *params_.dof;
    log_norm_const_ = kLog2 + special::lgamma(0.5 * (nu + p)) -
                      special::lgamma(0.5 * nu) -
                      0.5 * p * (std::log(nu) + kLogPi) - 0.5 * log_det_sigma;
    const double k = nu + static_cast<double>(p);
    log_gamma_ratio_ = special::lgamma(0.5 * (k + 1.0)) - special::lgamma(0.5 * k);
    digamma_half_k_ = special::digamma(0.5 * k);
  } else {
    log_norm_const_ = kLog2 - 0.5 * p * kLog2Pi - 0.5 * log_det_sigma;
  }
}

RowStats ComponentKernel::row_stats(const Matrix& data) const {
  // Batched triangular solve: Z = L^-1 (Y - xi)'.
  Matrix centered = (data.rowwise() - params_.xi.transpose()).transpose();
  RowStats stats;
  stats.projection = centered.transpose() * sigma_inv_skew_;
  sigma_llt_.matrixL().solveInPlace(centered);
  stats.mahalanobis = centered.colwise().squaredNorm().transpose();
  return stats;
}

double ComponentKernel::log_density(const Eigen::Ref<const Vector>& y) const {
  const Vector r = y - params_.xi;
  const double d = sigma_llt_.matrixL().solve(r).squaredNorm();
  return log_density_at(d, sigma_inv_skew_.dot(r));
}

LatentMoments ComponentKernel::latent_moments(
    const Eigen::Ref<const Vector>& y) const {
  const Vector r = y - params_.xi;
  const double d = sigma_llt_.matrixL().solve(r).squaredNorm();
  return latent_moments_at(d, sigma_inv_skew_.dot(r));
}

Vector ComponentKernel::log_density_rows(const Matrix& data) const {
  const RowStats stats = row_stats(data);
  Vector out(data.rows());
  for (Index j = 0; j < data.rows(); ++j) {
    out(j) = log_density_at(stats.mahalanobis(j), stats.projection(j));
  }
  return out;
}

double ComponentKernel::log_density_at(double d, double m) const {
  const double arg = m / cond_sd_;
  if (!params_.dof) {
    return log_norm_const_ - 0.5 * d + special::log_norm_cdf(arg);
  }
  const double nu = *params_.dof;
  const double k = nu + static_cast<double>(params_.dim());
  return log_norm_const_ - 0.5 * k * std::log1p(d / nu) +
         special::log_student_t_cdf(arg * std::sqrt(k / (nu + d)), k);
}

LatentMoments ComponentKernel::latent_moments_at(double d, double m) const {
  // T | y before truncation is N(m, s^2) (skew-normal) or, given w,
  // N(m, s^2 / w) (skew-t).
  const double s = cond_sd_;
  const double arg = m / s;
  LatentMoments out;

  if (!params_.dof) {
    out.e_w = 1.0;
    out.e_logw = 0.0;
    out.e_wu = m + s * special::norm_pdf_over_cdf(arg);
    out.e_wu2 = m * out.e_wu + s * s;
    return out;
  }

  // f(w | y) ∝ w^{k/2 - 1} exp(-w c / 2) Phi(arg sqrt(w)),  c = dof + d.
  // Integrals of the form  ∫ w^{a-1} e^{-wc/2} Phi(arg sqrt w) dw  reduce to
  // Gamma(a) (2/c)^a T_{2a}(arg sqrt(2a / c)).
  const double nu = *params_.dof;
  const double k = nu + static_cast<double>(params_.dim());
  const double c = nu + d;
  auto log_tcdf = [&](double dof) {
    return special::log_student_t_cdf(arg * std::sqrt(dof / c), dof);
  };
  const double log_norm = log_tcdf(k);

  out.e_w = (k / c) * std::exp(log_tcdf(k + 2.0) - log_norm);

  // E[sqrt(w) phi(arg sqrt w) / Phi(arg sqrt w) | y]
  const double log_q = log_gamma_ratio_ +
                       0.5 * (k + 1.0) * std::log(2.0 / (c + arg * arg)) -
                       0.5 * k * std::log(2.0 / c) - special::kLogSqrt2Pi -
                       log_norm;
  out.e_wu = m * out.e_w + s * std::exp(log_q);
  out.e_wu2 = m * out.e_wu + s * s;

  // E[log W] = d/d(k/2) log[Gamma(k/2) (2/c)^{k/2} T_k(arg sqrt(k/c))].
  // The T factor is constant in k when arg is zero.
  double dlog_t = 0.0;
  if (arg != 0.0) {
    const double h = 1e-4 * k;
    dlog_t = (log_tcdf(k + h) - log_tcdf(k - h)) / (2.0 * h);
  }
  out.e_logw = digamma_half_k_ - std::log(0.5 * c) + 2.0 * dlog_t;
  return out;
}

double log_density_mvnorm(const Eigen::Ref<const Vector>& y,
                          const Eigen::Ref<const Vector>& mu,
                          const Eigen::Ref<const Matrix>& sigma) {
  const auto llt = checked_llt(sigma, "sigma");
  const Vector z = llt.matrixL().solve(y - mu);
  return -0.5 * static_cast<double>(y.size()) * kLog2Pi - 0.5 * log_det(llt) -
         0.5 * z.squaredNorm();
}

double log_density_mvt(const Eigen::Ref<const Vector>& y,
                       const Eigen::Ref<const Vector>& mu,
                       const Eigen::Ref<const Matrix>& sigma, double dof) {
  const auto llt = checked_llt(sigma, "sigma");
  const double p = static_cast<double>(y.size());
  const double d = llt.matrixL().solve(y - mu).squaredNorm();
  return special::lgamma(0.5 * (dof + p)) - special::lgamma(0.5 * dof) -
         0.5 * p * (std::log(dof) + kLogPi) - 0.5 * log_det(llt) -
         0.5 * (dof + p) * std::log1p(d / dof);
}

double log_density_skewnormal(const Eigen::Ref<const Vector>& y,
                              const ComponentParams& params) {
  if (params.dof) {
    throw MisuseError("skew-normal density called with degrees of freedom");
  }
  return ComponentKernel(params).log_density(y);
}

double log_density_skewt(const Eigen::Ref<const Vector>& y,
                         const ComponentParams& params) {
  require_dof(params);
  return ComponentKernel(params).log_density(y);
}

double log_density(const Eigen::Ref<const Vector>& y,
                   const ComponentParams& params) {
  return ComponentKernel(params).log_density(y);
}

LatentMoments latent_moments(const Eigen::Ref<const Vector>& y,
                             const ComponentParams& params) {
  return ComponentKernel(params).latent_moments(y);
}

Matrix sample_skewt(const ComponentParams& params, Index n,
                    std::uint64_t rng_seed) {
  if (n < 1) throw InputError("sample size must be at least 1");
  validate(params);
  const Index p = params.dim();
  const Matrix chol = Eigen::LLT<Matrix>(params.omega).matrixL();

  Rng rng(rng_seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  std::optional<boost::random::gamma_distribution<double>> gamma;
  if (params.dof) {
    gamma.emplace(0.5 * *params.dof, 2.0 / *params.dof);
  }

  Matrix out(n, p);
  Vector z(p);
  for (Index j = 0; j < n; ++j) {
    const double w = gamma ? (*gamma)(rng) : 1.0;
    const double inv_sqrt_w = 1.0 / std::sqrt(w);
    const double u = std::abs(normal(rng)) * inv_sqrt_w;
    for (Index c = 0; c < p; ++c) z(c) = normal(rng);
    out.row(j) =
        (params.xi + params.skew * u + chol * z * inv_sqrt_w).transpose();
  }
  return out;
}

Vector analytic_mean(const ComponentParams& params) {
  double abs_u = special::kSqrt2OverPi;
  if (params.dof) {
    const double nu = *params.dof;
    if (nu <= 1.0) throw DomainError("mean undefined for dof <= 1", "dof");
    // E[W^{-1/2}] for W ~ Gamma(nu/2, rate nu/2)
    abs_u *= std::sqrt(0.5 * nu) *
             std::exp(special::lgamma(0.5 * (nu - 1.0)) -
                      special::lgamma(0.5 * nu));
  }
  return params.xi + params.skew * abs_u;
}

}  // namespace skewmix
