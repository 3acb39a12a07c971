#ifndef SKEWMIX_GRID_HPP
#define SKEWMIX_GRID_HPP

#include "skewmix/em.hpp"
#include "skewmix/scale_models.hpp"
#include "skewmix/selection.hpp"
#include "skewmix/types.hpp"

#include <cstdint>
#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace skewmix {

inline constexpr int kReportSchemaVersion = 1;

/// "all" (14 models), "mclust" (10 models) or a comma-separated list.
std::vector<ScaleModel> parse_model_list(std::string_view text);
/// "all" or a comma-separated list of family names.
std::vector<Family> parse_family_list(std::string_view text);

/// Keeps round(fraction * n_c) labels per class, at least one, chosen by
/// seed; the rest become kUnknownLabel. Labels must be 1..k.
std::vector<int> stratified_known_labels(const std::vector<int>& labels,
                                         double fraction, std::uint64_t seed);

/// Thread count from SKEWMIX_THREADS, else the hardware concurrency.
int default_threads();

struct GridSpec {
  std::vector<Family> families{Family::skew_t};
  std::vector<ScaleModel> models{kMclustScaleModels.begin(),
                                 kMclustScaleModels.end()};
  int g_min = 1;
  int g_max = 9;
  /// When a family's best g is 9 and g_max is 9, g = 10..12 are also run.
  bool extend_at_nine = true;
  FitConfig config;
  /// Non-empty switches to semi-supervised classification with g fixed to
  /// the number of classes; entries are 1..k or kUnknownLabel.
  std::vector<int> known_labels;
  int threads = 1;

  void validate() const;
};

struct CellRecord {
  std::string family;
  std::string model;
  int g = 0;
  int start = 0;
  std::optional<double> loglik;  // absent when the start failed
  std::optional<double> bic;
  Index n_params = 0;
  Index n_obs = 0;
  bool converged = false;
  int iterations = 0;
  double wall_seconds = 0.0;
  std::string error;

  bool operator==(const CellRecord&) const = default;
};

struct ComponentRecord {
  std::vector<double> xi;
  std::vector<std::vector<double>> omega;
  std::vector<double> skew;
  std::optional<double> dof;

  bool operator==(const ComponentRecord&) const = default;
};

struct SelectedRecord {
  std::string family;
  std::string model;
  int g = 0;
  double loglik = 0.0;
  double bic = 0.0;
  Index n_params = 0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> weights;
  std::vector<ComponentRecord> components;
  std::vector<std::string> warnings;

  bool operator==(const SelectedRecord&) const = default;
};

struct MergeRecord {
  int step = 0;
  std::vector<int> merged;  // empty for the unmerged solution
  double entropy = 0.0;
  std::optional<double> ari;

  bool operator==(const MergeRecord&) const = default;
};

struct EvaluationRecord {
  double ari = 0.0;
  std::vector<MergeRecord> entropy_merges;
  std::optional<double> mcc_ari;  // best ARI along the entropy tree
  std::optional<int> mcc_step;
  std::optional<double> hand_ari;
  std::vector<std::vector<int>> hand_blocks;

  bool operator==(const EvaluationRecord&) const = default;
};

struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::string mode = "cluster";  // or "classify"
  Index n_obs = 0;
  Index dim = 0;
  std::uint64_t seed = 0;
  int n_starts = 0;
  std::vector<CellRecord> records;
  SelectedRecord selected;
  std::vector<int> labels;  // MAP labels of the selected fit
  std::optional<EvaluationRecord> evaluation;

  bool operator==(const RunReport&) const = default;
};

struct GridResult {
  RunReport report;
  MixtureFit selected;
  /// Best fit per (family, model, g) cell that did not fail.
  std::vector<MixtureFit> cells;
};

/// Fits every (family, model, g) cell, possibly in parallel, and selects by
/// BIC among converged fits (all fits when none converged). Throws
/// NumericalError listing per-cell causes when every cell fails.
GridResult run_grid(const Matrix& data, const GridSpec& spec);

SelectedRecord make_selected_record(const MixtureFit& fit);

/// ARI against truth plus entropy and hand merging of the selected fit.
/// Hand merging is skipped when the fit has more than 12 components.
EvaluationRecord evaluate_fit(const MixtureFit& fit, const Partition& truth,
                              bool with_merging = true);

nlohmann::json report_to_json(const RunReport& report);
/// Throws InputError on a schema mismatch or malformed content.
RunReport report_from_json(const nlohmann::json& j);

void write_report(const std::filesystem::path& path, const RunReport& report);
RunReport read_report(const std::filesystem::path& path);

}  // namespace skewmix

#endif  // SKEWMIX_GRID_HPP
