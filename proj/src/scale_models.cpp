#include "skewmix/scale_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace skewmix {
namespace {

using Parts = std::vector<ScaleDecomposition>;

// Geometric mean of a positive vector, |diag|^{1/p}.
double geo_mean(const Vector& v) { return std::exp(v.array().log().mean()); }

double log_det_sym(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

ScaleDecomposition diagonal_part(double volume, Vector shape, Index p) {
  return {volume, std::move(shape), Matrix::Identity(p, p)};
}

ScaleDecomposition from_matrix(const Matrix& omega) {
  Vector values;
  Matrix vectors;
  sorted_eigen(omega, values, vectors);
  const double vol = geo_mean(values.cwiseMax(0.0));
  return {vol, values / vol, vectors};
}

class Solver {
 public:
  Solver(const ScatterSet& s, const ScaleSolveOptions& o)
      : scat_(s), opt_(o), g_(s.components()), p_(s.dim()), n_(s.total_size()) {}

  Parts solve(ScaleModel model) {
    switch (model) {
      case ScaleModel::EII: return eii();
      case ScaleModel::VII: return vii();
      case ScaleModel::EEI: return eei();
      case ScaleModel::VEI: return vei();
      case ScaleModel::EVI: return evi();
      case ScaleModel::VVI: return vvi();
      case ScaleModel::EEE: return eee();
      case ScaleModel::VEE: return vee();
      case ScaleModel::EVE: return common_orientation(false);
      case ScaleModel::VVE: return common_orientation(true);
      case ScaleModel::EEV: return eev();
      case ScaleModel::VEV: return vev();
      case ScaleModel::EVV: return evv();
      case ScaleModel::VVV: return vvv();
    }
    return {};
  }

  int iterations = 0;
  bool converged = true;

 private:
  const Matrix& w(Index i) const { return scat_.scatters[i]; }
  double size(Index i) const { return scat_.sizes(i); }

  Parts eii() {
    const double vol = scat_.pooled().trace() / (n_ * p_);
    return Parts(g_, diagonal_part(vol, Vector::Ones(p_), p_));
  }

  Parts vii() {
    Parts parts;
    for (Index i = 0; i < g_; ++i) {
      parts.push_back(
          diagonal_part(w(i).trace() / (p_ * size(i)), Vector::Ones(p_), p_));
    }
    return parts;
  }

  Parts eei() {
    const Vector b = scat_.pooled().diagonal() / n_;
    const double vol = geo_mean(b);
    return Parts(g_, diagonal_part(vol, b / vol, p_));
  }

  Parts evi() {
    Parts parts;
    double vol = 0.0;
    for (Index i = 0; i < g_; ++i) {
      const Vector d = w(i).diagonal();
      const double gm = geo_mean(d);
      vol += gm;
      parts.push_back(diagonal_part(0.0, d / gm, p_));
    }
    vol /= n_;
    for (auto& part : parts) part.volume = vol;
    return parts;
  }

  Parts vvi() {
    Parts parts;
    for (Index i = 0; i < g_; ++i) {
      const Vector d = w(i).diagonal() / size(i);
      const double vol = geo_mean(d);
      parts.push_back(diagonal_part(vol, d / vol, p_));
    }
    return parts;
  }

  // Flip-flop between shared diagonal shape and per-component volumes,
  // started from the VVI volumes.
  Parts vei() {
    Vector vols(g_);
    for (Index i = 0; i < g_; ++i) vols(i) = geo_mean(w(i).diagonal() / size(i));
    Vector shape = Vector::Ones(p_);
    double prev = std::numeric_limits<double>::infinity();
    Parts parts;
    for (int it = 1; it <= opt_.max_flipflop; ++it) {
      Vector b = Vector::Zero(p_);
      for (Index i = 0; i < g_; ++i) b += w(i).diagonal() / vols(i);
      shape = b / geo_mean(b);
      for (Index i = 0; i < g_; ++i) {
        vols(i) = (w(i).diagonal().array() / shape.array()).sum() /
                  (p_ * size(i));
      }
      parts.clear();
      for (Index i = 0; i < g_; ++i) {
        parts.push_back(diagonal_part(vols(i), shape, p_));
      }
      const double obj = objective(parts);
      iterations = it;
      if (std::abs(prev - obj) < opt_.tol * std::abs(obj)) return parts;
      prev = obj;
    }
    not_converged("VEI flip-flop", prev);
    return parts;
  }

  Parts eee() {
    return Parts(g_, from_matrix(scat_.pooled() / n_));
  }

  // Shared unit-determinant C = D A D' with varying volumes.
  Parts vee() {
    Matrix c = scat_.pooled();
    c /= std::exp(log_det_sym(c) / p_);
    Vector vols(g_);
    double prev = std::numeric_limits<double>::infinity();
    Parts parts;
    for (int it = 1; it <= opt_.max_flipflop; ++it) {
      const Eigen::LLT<Matrix> c_llt(c);
      for (Index i = 0; i < g_; ++i) {
        vols(i) = c_llt.solve(w(i)).trace() / (p_ * size(i));
      }
      Matrix b = Matrix::Zero(p_, p_);
      for (Index i = 0; i < g_; ++i) b += w(i) / vols(i);
      const double ld = log_det_sym(b);
      if (!std::isfinite(ld)) throw SingularScatterError("pooled scatter is singular", 0);
      c = b / std::exp(ld / p_);
      const ScaleDecomposition shared = from_matrix(c);
      parts.clear();
      for (Index i = 0; i < g_; ++i) {
        // Volumes re-fit against the updated C keep the iterate consistent.
        ScaleDecomposition part = shared;
        part.volume = Eigen::LLT<Matrix>(c).solve(w(i)).trace() / (p_ * size(i));
        vols(i) = part.volume;
        parts.push_back(std::move(part));
      }
      const double obj = objective(parts);
      iterations = it;
      if (std::abs(prev - obj) < opt_.tol * std::abs(obj)) return parts;
      prev = obj;
    }
    not_converged("VEE flip-flop", prev);
    return parts;
  }

  // EVE (shared volume) and VVE (varying volume): shared orientation D with
  // component-specific diagonal shapes. D is updated by majorization-
  // minimization: with M_i = (lambda_i A_i)^-1 and alpha_i >= eig_max(W_i),
  //   tr(W_i D M_i D') <= const - 2 tr(G' D),  G = sum_i (alpha_i I - W_i) D_k M_i,
  // which is minimized over orthogonal D by D = U V' for G = U S V'.
  Parts common_orientation(bool varying_volume) {
    // Candidate starting orientations: the previous iterate, the pooled
    // eigenvectors and each component's own eigenvectors.
    std::vector<Matrix> starts;
    if (opt_.previous && !opt_.previous->parts.empty() &&
        opt_.previous->parts.front().orientation.rows() == p_) {
      starts.push_back(opt_.previous->parts.front().orientation);
    }
    Vector values;
    Matrix vectors;
    sorted_eigen(scat_.pooled(), values, vectors);
    starts.push_back(vectors);
    for (Index i = 0; i < g_; ++i) {
      sorted_eigen(w(i), values, vectors);
      starts.push_back(vectors);
    }
    Vector alpha(g_);
    for (Index i = 0; i < g_; ++i) {
      alpha(i) = Eigen::SelfAdjointEigenSolver<Matrix>(w(i), Eigen::EigenvaluesOnly)
                     .eigenvalues()
                     .maxCoeff();
    }

    auto fit_diagonals = [&](const Matrix& orient) {
      Parts parts;
      double shared_vol = 0.0;
      for (Index i = 0; i < g_; ++i) {
        Vector e = (orient.transpose() * w(i) * orient).diagonal();
        if (varying_volume) e /= size(i);
        const double gm = geo_mean(e);
        shared_vol += gm;
        parts.push_back({gm, e / gm, orient});
      }
      if (!varying_volume) {
        for (auto& part : parts) part.volume = shared_vol / n_;
      }
      return parts;
    };

    // The majorizer contracts slowly, so the stopping rule is much tighter
    // than the flip-flop one.
    const double gap_tol = std::min(opt_.tol, 1e-8) * 1e-4;
    const int max_iter = opt_.max_mm * 20;
    Parts best;
    double best_obj = std::numeric_limits<double>::infinity();
    bool any_converged = false;
    double last_failed = 0.0;
    for (Matrix d : starts) {
      Parts parts = fit_diagonals(d);
      double prev = objective(parts);
      bool converged = false;
      for (int it = 1; it <= max_iter; ++it) {
        Matrix gmat = Matrix::Zero(p_, p_);
        for (Index i = 0; i < g_; ++i) {
          const Vector m =
              (parts[i].volume * parts[i].shape.array()).inverse().matrix();
          gmat += (alpha(i) * d - w(i) * d) * m.asDiagonal();
        }
        Eigen::JacobiSVD<Matrix> svd(gmat, Eigen::ComputeFullU | Eigen::ComputeFullV);
        d = svd.matrixU() * svd.matrixV().transpose();
        parts = fit_diagonals(d);
        const double obj = objective(parts);
        iterations += 1;
        if (std::abs(prev - obj) < gap_tol * std::abs(obj)) {
          prev = obj;
          converged = true;
          break;
        }
        prev = obj;
      }
      if (!converged) last_failed = prev;
      any_converged = any_converged || converged;
      if (prev < best_obj) {
        best_obj = prev;
        best = std::move(parts);
      }
    }
    if (!any_converged) {
      not_converged(varying_volume ? "VVE MM" : "EVE MM", last_failed);
    }
    return canonicalize_common(best);
  }

  // Orders the shared axes by the first component's shape and fixes signs;
  // the fitted matrices are unchanged.
  Parts canonicalize_common(Parts parts) const {
    const Matrix& d = parts.front().orientation;
    std::vector<Index> order(p_);
    std::iota(order.begin(), order.end(), 0);
    const Vector& ref = parts.front().shape;
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return ref(a) > ref(b); });
    Matrix nd(p_, p_);
    for (Index c = 0; c < p_; ++c) {
      Vector col = d.col(order[c]);
      Index arg = 0;
      col.cwiseAbs().maxCoeff(&arg);
      if (col(arg) < 0) col = -col;
      nd.col(c) = col;
    }
    for (auto& part : parts) {
      Vector s(p_);
      for (Index c = 0; c < p_; ++c) s(c) = part.shape(order[c]);
      part.shape = s;
      part.orientation = nd;
    }
    return parts;
  }

  Parts eev() {
    Parts parts;
    Vector sum = Vector::Zero(p_);
    for (Index i = 0; i < g_; ++i) {
      Vector values;
      Matrix vectors;
      sorted_eigen(w(i), values, vectors);
      sum += values;
      parts.push_back({0.0, Vector(), vectors});
    }
    const Vector b = sum / n_;
    const double vol = geo_mean(b);
    for (auto& part : parts) {
      part.volume = vol;
      part.shape = b / vol;
    }
    return parts;
  }

  Parts vev() {
    std::vector<Vector> evals(g_);
    std::vector<Matrix> evecs(g_);
    Vector vols(g_);
    for (Index i = 0; i < g_; ++i) {
      sorted_eigen(w(i), evals[i], evecs[i]);
      vols(i) = geo_mean((evals[i] / size(i)).cwiseMax(1e-300));
    }
    Vector shape = Vector::Ones(p_);
    double prev = std::numeric_limits<double>::infinity();
    Parts parts;
    for (int it = 1; it <= opt_.max_flipflop; ++it) {
      Vector b = Vector::Zero(p_);
      for (Index i = 0; i < g_; ++i) b += evals[i] / vols(i);
      shape = b / geo_mean(b);
      for (Index i = 0; i < g_; ++i) {
        vols(i) = (evals[i].array() / shape.array()).sum() / (p_ * size(i));
      }
      parts.clear();
      for (Index i = 0; i < g_; ++i) parts.push_back({vols(i), shape, evecs[i]});
      const double obj = objective(parts);
      iterations = it;
      if (std::abs(prev - obj) < opt_.tol * std::abs(obj)) return parts;
      prev = obj;
    }
    not_converged("VEV flip-flop", prev);
    return parts;
  }

  Parts evv() {
    Parts parts;
    double vol = 0.0;
    for (Index i = 0; i < g_; ++i) {
      const double ld = log_det_sym(w(i));
      if (!std::isfinite(ld)) {
        throw SingularScatterError("scatter matrix of component " +
                                       std::to_string(i) + " is singular",
                                   i);
      }
      const double scale = std::exp(ld / p_);
      vol += scale;
      ScaleDecomposition part = from_matrix(w(i) / scale);
      part.volume = 0.0;
      parts.push_back(std::move(part));
    }
    vol /= n_;
    for (auto& part : parts) part.volume = vol;
    return parts;
  }

  Parts vvv() {
    Parts parts;
    for (Index i = 0; i < g_; ++i) parts.push_back(from_matrix(w(i) / size(i)));
    return parts;
  }

  double objective(const Parts& parts) const {
    double total = 0.0;
    for (Index i = 0; i < g_; ++i) {
      const auto& part = parts[i];
      const Vector inv = (part.volume * part.shape.array()).inverse().matrix();
      const Matrix rotated = part.orientation.transpose() * w(i) * part.orientation;
      total += size(i) * (p_ * std::log(part.volume) +
                          part.shape.array().log().sum()) +
               rotated.diagonal().dot(inv);
    }
    return total;
  }

  void not_converged(const char* what, double last_gap) {
    converged = false;
    if (opt_.throw_on_nonconvergence) {
      throw ConvergenceError(std::string(what) + " did not converge", last_gap);
    }
  }

  const ScatterSet& scat_;
  const ScaleSolveOptions& opt_;
  Index g_;
  Index p_;
  double n_;
};

}  // namespace

std::string_view to_string(ScaleModel model) noexcept {
  constexpr std::array<std::string_view, 14> names = {
      "EII", "VII", "EEI", "VEI", "EVI", "VVI", "EEE",
      "VEE", "EVE", "VVE", "EEV", "VEV", "EVV", "VVV"};
  return names[static_cast<std::size_t>(model)];
}

ScaleModel parse_scale_model(std::string_view name) {
  for (ScaleModel m : kAllScaleModels) {
    if (to_string(m) == name) return m;
  }
  throw InputError("unknown scale model '" + std::string(name) + "'");
}

Index count_scale_params(ScaleModel model, Index g, Index p) {
  const Index full = p * (p + 1) / 2;
  switch (model) {
    case ScaleModel::EII: return 1;
    case ScaleModel::VII: return g;
    case ScaleModel::EEI: return p;
    case ScaleModel::VEI: return g + (p - 1);
    case ScaleModel::EVI: return g * p - (g - 1);
    case ScaleModel::VVI: return g * p;
    case ScaleModel::EEE: return full;
    case ScaleModel::VEE: return full + (g - 1);
    case ScaleModel::EVE: return full + (g - 1) * (p - 1);
    case ScaleModel::VVE: return full + (g - 1) * p;
    case ScaleModel::EEV: return g * full - (g - 1) * p;
    case ScaleModel::VEV: return g * full - (g - 1) * (p - 1);
    case ScaleModel::EVV: return g * full - (g - 1);
    case ScaleModel::VVV: return g * full;
  }
  return 0;
}

Matrix ScatterSet::pooled() const {
  Matrix total = Matrix::Zero(dim(), dim());
  for (const auto& w : scatters) total += w;
  return total;
}

void validate(const ScatterSet& s) {
  const Index g = s.components();
  if (g < 1 || static_cast<Index>(s.scatters.size()) != g) {
    throw InputError("scatter set needs one matrix per component size");
  }
  const Index p = s.dim();
  for (Index i = 0; i < g; ++i) {
    const Matrix& w = s.scatters[i];
    if (w.rows() != p || w.cols() != p || p < 1) {
      throw InputError("scatter matrices must all be p x p");
    }
    if (!w.allFinite()) {
      throw SingularScatterError("non-finite scatter matrix", i);
    }
    const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    if ((w - w.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
      throw InputError("scatter matrix " + std::to_string(i) +
                       " is not symmetric");
    }
    if (!(s.sizes(i) > 0.0)) {
      throw InputError("component sizes must be positive");
    }
  }
}

Matrix ScaleDecomposition::reconstruct() const {
  return volume * orientation * shape.asDiagonal() * orientation.transpose();
}

void sorted_eigen(const Matrix& m, Vector& values, Matrix& vectors) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Index p = m.rows();
  std::vector<Index> order(p);
  std::iota(order.begin(), order.end(), 0);
  const Vector& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return ev(a) > ev(b); });
  values.resize(p);
  vectors.resize(p, p);
  for (Index c = 0; c < p; ++c) {
    values(c) = ev(order[c]);
    Vector col = es.eigenvectors().col(order[c]);
    Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    if (col(arg) < 0) col = -col;
    vectors.col(c) = col;
  }
}

double scale_objective(const ScatterSet& scatters,
                       std::span<const Matrix> omegas) {
  double total = 0.0;
  for (Index i = 0; i < scatters.components(); ++i) {
    const Eigen::LLT<Matrix> llt(omegas[i]);
    if (llt.info() != Eigen::Success) {
      return std::numeric_limits<double>::infinity();
    }
    total += scatters.sizes(i) * 2.0 *
                 llt.matrixLLT().diagonal().array().log().sum() +
             llt.solve(scatters.scatters[i]).trace();
  }
  return total;
}

ScaleSolution solve_scale(ScaleModel model, const ScatterSet& scatters,
                          const ScaleSolveOptions& options) {
  validate(scatters);
  Solver solver(scatters, options);
  ScaleSolution out;
  out.parts = solver.solve(model);
  out.iterations = solver.iterations;
  out.converged = solver.converged;
  for (Index i = 0; i < scatters.components(); ++i) {
    const auto& part = out.parts[i];
    if (!(part.volume > 0.0) || !std::isfinite(part.volume) ||
        !(part.shape.minCoeff() > 0.0) || !part.shape.allFinite()) {
      throw SingularScatterError(
          "scale estimate of component " + std::to_string(i) +
              " is not positive definite",
          i);
    }
    out.omegas.push_back(part.reconstruct());
  }
  out.objective = scale_objective(scatters, out.omegas);

  if (options.previous &&
      static_cast<Index>(options.previous->omegas.size()) ==
          scatters.components()) {
    const double prev_obj = scale_objective(scatters, options.previous->omegas);
    if (prev_obj < out.objective) {
      ScaleSolution kept = *options.previous;
      kept.objective = prev_obj;
      kept.iterations = out.iterations;
      kept.converged = out.converged;
      return kept;
    }
  }
  return out;
}

}  // namespace skewmix
