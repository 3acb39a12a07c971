#include "skewmix/grid.hpp"

#include "skewmix/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace skewmix {
namespace {

using nlohmann::json;

std::vector<std::string> split(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct Cell {
  Family family;
  ScaleModel model;
  int g;
};

struct CellOutcome {
  std::optional<MixtureFit> fit;
  std::string error;
  double wall_seconds = 0.0;
};

// Runs every cell on up to `threads` workers; results land in cell order.
std::vector<CellOutcome> run_cells(const Matrix& data, const GridSpec& spec,
                                   const std::vector<Cell>& cells) {
  std::vector<CellOutcome> out(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        if (spec.known_labels.empty()) {
          out[i].fit = fit(data, c.g, c.model, c.family, spec.config);
        } else {
          out[i].fit = classify(data, spec.known_labels, c.g, c.model,
                                c.family, spec.config);
        }
      } catch (const Error& e) {
        out[i].error = e.what();
      }
      out[i].wall_seconds = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
    }
  };
  const int n_threads = std::max(
      1, std::min<int>(spec.threads, static_cast<int>(cells.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  return out;
}

std::vector<double> to_std(const Vector& v) {
  return {v.data(), v.data() + v.size()};
}

std::optional<double> opt_number(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::vector<ScaleModel> parse_model_list(std::string_view text) {
  if (text == "all") return {kAllScaleModels.begin(), kAllScaleModels.end()};
  if (text == "mclust") {
    return {kMclustScaleModels.begin(), kMclustScaleModels.end()};
  }
  std::vector<ScaleModel> out;
  for (const auto& name : split(text)) out.push_back(parse_scale_model(name));
  return out;
}

std::vector<Family> parse_family_list(std::string_view text) {
  if (text == "all") {
    return {Family::gaussian, Family::t, Family::skew_normal, Family::skew_t};
  }
  std::vector<Family> out;
  for (const auto& name : split(text)) out.push_back(parse_family(name));
  return out;
}

std::vector<int> stratified_known_labels(const std::vector<int>& labels,
                                         double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InputError("known-label fraction must be in (0, 1]");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] < 1) throw InputError("labels must be 1..k");
    by_class[labels[j]].push_back(j);
  }
  std::vector<int> known(labels.size(), kUnknownLabel);
  auto rng = make_rng(seed);
  for (auto& [label, rows] : by_class) {
    shuffle(rows, rng);
    const auto keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(fraction * rows.size())));
    for (std::size_t r = 0; r < keep && r < rows.size(); ++r) {
      known[rows[r]] = label;
    }
  }
  return known;
}

int default_threads() {
  if (const char* env = std::getenv("SKEWMIX_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void GridSpec::validate() const {
  if (families.empty()) throw InputError("grid needs at least one family");
  if (models.empty()) throw InputError("grid needs at least one model");
  if (g_min < 1 || g_max < g_min) {
    throw InputError("invalid component range " + std::to_string(g_min) +
                     ".." + std::to_string(g_max));
  }
  if (threads < 1) throw InputError("thread count must be at least 1");
  config.validate();
}

SelectedRecord make_selected_record(const MixtureFit& f) {
  SelectedRecord s;
  s.family = std::string(to_string(f.family));
  s.model = std::string(to_string(f.model));
  s.g = static_cast<int>(f.components_count());
  s.loglik = f.loglik;
  s.bic = f.bic;
  s.n_params = f.n_params;
  s.converged = f.converged;
  s.iterations = f.iterations;
  s.weights = to_std(f.weights);
  s.warnings = f.warnings;
  for (const auto& c : f.components) {
    ComponentRecord r;
    r.xi = to_std(c.xi);
    r.skew = to_std(c.skew);
    r.dof = c.dof;
    for (Index i = 0; i < c.omega.rows(); ++i) {
      r.omega.push_back(to_std(c.omega.row(i).transpose()));
    }
    s.components.push_back(std::move(r));
  }
  return s;
}

EvaluationRecord evaluate_fit(const MixtureFit& f, const Partition& truth,
                              bool with_merging) {
  EvaluationRecord ev;
  Partition pred = Partition::from_labels(map_labels(f));
  pred.k = static_cast<int>(f.components_count());
  ev.ari = ari(pred, truth);
  if (!with_merging) return ev;

  const MergeTree tree = merge_entropy(f);
  for (const auto& s : tree.steps) {
    MergeRecord m;
    m.step = s.step;
    if (s.step > 0) m.merged = {s.merged.first, s.merged.second};
    m.entropy = s.entropy;
    m.ari = ari(s.labels, truth);
    ev.entropy_merges.push_back(std::move(m));
  }
  if (!tree.steps.empty()) {
    const auto [best, step] = best_ari_along(tree, truth);
    ev.mcc_ari = best;
    ev.mcc_step = step;
  }
  if (pred.k <= 12) {
    const HandMerge hm = merge_by_hand(pred, truth);
    ev.hand_ari = hm.best_ari;
    ev.hand_blocks = hm.blocks;
  }
  return ev;
}

GridResult run_grid(const Matrix& data, const GridSpec& spec) {
  spec.validate();
  const bool classifying = !spec.known_labels.empty();
  int g_lo = spec.g_min;
  int g_hi = spec.g_max;
  if (classifying) {
    const int k = *std::max_element(spec.known_labels.begin(),
                                    spec.known_labels.end());
    g_lo = g_hi = k;
  }

  std::vector<Cell> cells;
  for (Family fam : spec.families) {
    for (ScaleModel m : spec.models) {
      for (int g = g_lo; g <= g_hi; ++g) cells.push_back({fam, m, g});
    }
  }
  std::vector<CellOutcome> outcomes = run_cells(data, spec, cells);

  // A family whose best model sits at g = 9 is rerun with g = 10..12.
  if (!classifying && spec.extend_at_nine && g_hi == 9) {
    std::vector<Cell> extra;
    for (Family fam : spec.families) {
      const MixtureFit* best = nullptr;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].family != fam || !outcomes[i].fit) continue;
        if (!best || outcomes[i].fit->bic > best->bic) {
          best = &*outcomes[i].fit;
        }
      }
      if (best && best->components_count() == 9) {
        for (ScaleModel m : spec.models) {
          for (int g = 10; g <= 12; ++g) extra.push_back({fam, m, g});
        }
      }
    }
    if (!extra.empty()) {
      auto more = run_cells(data, spec, extra);
      cells.insert(cells.end(), extra.begin(), extra.end());
      std::move(more.begin(), more.end(), std::back_inserter(outcomes));
    }
  }

  GridResult result;
  RunReport& rep = result.report;
  rep.mode = classifying ? "classify" : "cluster";
  rep.n_obs = data.rows();
  rep.dim = data.cols();
  rep.seed = spec.config.rng_seed;
  rep.n_starts = spec.config.n_starts;

  std::ostringstream causes;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    const CellOutcome& o = outcomes[i];
    const Index n_params = count_free_params(
        c.model, c.family, c.g, data.cols(), spec.config.constrain_dof_equal);
    auto base = [&] {
      CellRecord r;
      r.family = std::string(to_string(c.family));
      r.model = std::string(to_string(c.model));
      r.g = c.g;
      r.n_params = n_params;
      r.n_obs = data.rows();
      return r;
    };
    if (!o.fit) {
      CellRecord r = base();
      r.start = -1;
      r.error = o.error;
      r.wall_seconds = o.wall_seconds;
      causes << r.family << '/' << r.model << "/g=" << c.g << ": " << o.error
             << "; ";
      rep.records.push_back(std::move(r));
      continue;
    }
    for (const auto& s : o.fit->starts) {
      CellRecord r = base();
      r.start = s.start;
      r.converged = s.converged;
      r.iterations = s.iterations;
      r.wall_seconds = s.wall_seconds;
      r.error = s.error;
      if (s.error.empty()) {
        r.loglik = s.loglik;
        r.bic = bic(s.loglik, n_params, data.rows());
      }
      rep.records.push_back(std::move(r));
    }
    result.cells.push_back(*o.fit);
  }
  if (result.cells.empty()) {
    throw NumericalError("every grid cell failed: " + causes.str());
  }

  std::vector<MixtureFit> converged;
  for (const auto& f : result.cells) {
    if (f.converged) converged.push_back(f);
  }
  result.selected =
      converged.empty() ? select_best(result.cells) : select_best(converged);
  rep.selected = make_selected_record(result.selected);
  rep.labels = map_labels(result.selected);
  return result;
}

json report_to_json(const RunReport& r) {
  json records = json::array();
  for (const auto& c : r.records) {
    records.push_back({{"family", c.family},
                       {"model", c.model},
                       {"g", c.g},
                       {"start", c.start},
                       {"loglik", opt_json(c.loglik)},
                       {"bic", opt_json(c.bic)},
                       {"n_params", c.n_params},
                       {"n_obs", c.n_obs},
                       {"converged", c.converged},
                       {"iterations", c.iterations},
                       {"wall_seconds", c.wall_seconds},
                       {"error", c.error}});
  }
  json comps = json::array();
  for (const auto& c : r.selected.components) {
    comps.push_back({{"xi", c.xi},
                     {"omega", c.omega},
                     {"skew", c.skew},
                     {"dof", opt_json(c.dof)}});
  }
  json j{{"schema_version", r.schema_version},
         {"mode", r.mode},
         {"n_obs", r.n_obs},
         {"dim", r.dim},
         {"seed", r.seed},
         {"n_starts", r.n_starts},
         {"records", std::move(records)},
         {"selected",
          {{"family", r.selected.family},
           {"model", r.selected.model},
           {"g", r.selected.g},
           {"loglik", r.selected.loglik},
           {"bic", r.selected.bic},
           {"n_params", r.selected.n_params},
           {"converged", r.selected.converged},
           {"iterations", r.selected.iterations},
           {"weights", r.selected.weights},
           {"components", std::move(comps)},
           {"warnings", r.selected.warnings}}},
         {"labels", r.labels}};
  if (r.evaluation) {
    const auto& e = *r.evaluation;
    json merges = json::array();
    for (const auto& m : e.entropy_merges) {
      merges.push_back({{"step", m.step},
                        {"merged", m.merged},
                        {"entropy", m.entropy},
                        {"ari", opt_json(m.ari)}});
    }
    j["evaluation"] = {{"ari", e.ari},
                       {"entropy_merges", std::move(merges)},
                       {"mcc_ari", opt_json(e.mcc_ari)},
                       {"mcc_step", opt_json(e.mcc_step)},
                       {"hand_ari", opt_json(e.hand_ari)},
                       {"hand_blocks", e.hand_blocks}};
  } else {
    j["evaluation"] = nullptr;
  }
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  try {
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion) {
      throw InputError("unsupported report schema version " +
                       std::to_string(r.schema_version));
    }
    r.mode = j.at("mode").get<std::string>();
    r.n_obs = j.at("n_obs").get<Index>();
    r.dim = j.at("dim").get<Index>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n_starts = j.at("n_starts").get<int>();
    for (const auto& c : j.at("records")) {
      CellRecord rec;
      rec.family = c.at("family").get<std::string>();
      rec.model = c.at("model").get<std::string>();
      rec.g = c.at("g").get<int>();
      rec.start = c.at("start").get<int>();
      rec.loglik = opt_number(c, "loglik");
      rec.bic = opt_number(c, "bic");
      rec.n_params = c.at("n_params").get<Index>();
      rec.n_obs = c.at("n_obs").get<Index>();
      rec.converged = c.at("converged").get<bool>();
      rec.iterations = c.at("iterations").get<int>();
      rec.wall_seconds = c.at("wall_seconds").get<double>();
      rec.error = c.at("error").get<std::string>();
      r.records.push_back(std::move(rec));
    }
    const json& s = j.at("selected");
    r.selected.family = s.at("family").get<std::string>();
    r.selected.model = s.at("model").get<std::string>();
    r.selected.g = s.at("g").get<int>();
    r.selected.loglik = s.at("loglik").get<double>();
    r.selected.bic = s.at("bic").get<double>();
    r.selected.n_params = s.at("n_params").get<Index>();
    r.selected.converged = s.at("converged").get<bool>();
    r.selected.iterations = s.at("iterations").get<int>();
    r.selected.weights = s.at("weights").get<std::vector<double>>();
    r.selected.warnings = s.at("warnings").get<std::vector<std::string>>();
    for (const auto& c : s.at("components")) {
      ComponentRecord cr;
      cr.xi = c.at("xi").get<std::vector<double>>();
      cr.omega = c.at("omega").get<std::vector<std::vector<double>>>();
      cr.skew = c.at("skew").get<std::vector<double>>();
      cr.dof = opt_number(c, "dof");
      r.selected.components.push_back(std::move(cr));
    }
    r.labels = j.at("labels").get<std::vector<int>>();
    if (j.contains("evaluation") && !j.at("evaluation").is_null()) {
      const json& e = j.at("evaluation");
      EvaluationRecord ev;
      ev.ari = e.at("ari").get<double>();
      for (const auto& m : e.at("entropy_merges")) {
        MergeRecord mr;
        mr.step = m.at("step").get<int>();
        mr.merged = m.at("merged").get<std::vector<int>>();
        mr.entropy = m.at("entropy").get<double>();
        mr.ari = opt_number(m, "ari");
        ev.entropy_merges.push_back(std::move(mr));
      }
      ev.mcc_ari = opt_number(e, "mcc_ari");
      if (!e.at("mcc_step").is_null()) ev.mcc_step = e.at("mcc_step").get<int>();
      ev.hand_ari = opt_number(e, "hand_ari");
      ev.hand_blocks = e.at("hand_blocks").get<std::vector<std::vector<int>>>();
      r.evaluation = std::move(ev);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
  return r;
}

void write_report(const std::filesystem::path& path, const RunReport& report) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << report_to_json(report).dump(2) << '\n';
}

RunReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("report '" + path.string() + "' is not valid: " +
                     e.what());
  }
  return report_from_json(j);
}

}  // namespace skewmix
