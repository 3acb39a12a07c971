// skewmix: command-line front end.
//
//   skewmix fit       --data iris.csv --label-column species --families skew-t
//   skewmix classify  --data iris.csv --label-column species --known-fraction 0.5
//   skewmix simulate  --design sim2 --seed 7 --out sim2.csv
//   skewmix evaluate  --pred labels.csv --truth iris.csv --truth-column species
//   skewmix report    --report run.json
//
// Exit codes: 0 success, 1 input error, 2 numerical failure.

#include "skewmix/grid.hpp"
#include "skewmix/io.hpp"
#include "skewmix/simgen.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

using namespace skewmix;

struct DataArgs {
  std::string path;
  std::string label_column;
  std::string delimiter = ",";
  bool no_header = false;
  std::string missing = "?";
  bool no_scale = false;
};

struct FitArgs {
  std::string families = "skew-t";
  std::string models = "mclust";
  std::string g_range = "1:9";
  int starts = 10;
  int max_iter = 1000;
  double tol = 1e-5;
  std::uint64_t seed = 1;
  std::string init = "kmeans";
  bool equal_dof = false;
  int threads = 0;
  std::string out;
  std::string labels_out;
};

void add_data_options(CLI::App& cmd, DataArgs& a) {
  cmd.add_option("--data", a.path, "CSV file")->required();
  cmd.add_option("--label-column", a.label_column,
                 "label column name or 1-based number");
  cmd.add_option("--delimiter", a.delimiter, "field delimiter");
  cmd.add_flag("--no-header", a.no_header, "first row holds data");
  cmd.add_option("--missing", a.missing, "token marking an unknown label");
  cmd.add_flag("--no-scale", a.no_scale, "fit on unscaled columns");
}

void add_fit_options(CLI::App& cmd, FitArgs& a, bool with_g) {
  cmd.add_option("--families", a.families,
                 "gaussian, t, skew-normal, skew-t, comma list or all");
  cmd.add_option("--models", a.models, "all, mclust or comma list");
  if (with_g) cmd.add_option("--g", a.g_range, "component range lo:hi");
  cmd.add_option("--starts", a.starts, "EM starts per cell");
  cmd.add_option("--max-iter", a.max_iter, "EM iteration cap");
  cmd.add_option("--tol", a.tol, "Aitken tolerance");
  cmd.add_option("--seed", a.seed, "random seed");
  cmd.add_option("--init", a.init, "kmeans, random-posterior or uniform");
  cmd.add_flag("--equal-dof", a.equal_dof, "one dof shared by all components");
  cmd.add_option("--threads", a.threads,
                 "worker threads (default SKEWMIX_THREADS or all cores)");
  cmd.add_option("--out", a.out, "report file (JSON)");
  cmd.add_option("--labels-out", a.labels_out, "MAP labels CSV");
}

Dataset load(const DataArgs& a) {
  if (a.delimiter.size() != 1) throw InputError("delimiter must be one char");
  CsvOptions opt;
  opt.delimiter = a.delimiter[0];
  opt.header = !a.no_header;
  opt.label_column = a.label_column;
  opt.missing_label = a.missing;
  Dataset ds = ingest_csv(a.path, opt);
  return a.no_scale ? ds : scale_columns(ds);
}

GridSpec make_spec(const FitArgs& a) {
  GridSpec spec;
  spec.families = parse_family_list(a.families);
  spec.models = parse_model_list(a.models);
  const auto colon = a.g_range.find(':');
  try {
    if (colon == std::string::npos) {
      spec.g_min = spec.g_max = std::stoi(a.g_range);
    } else {
      spec.g_min = std::stoi(a.g_range.substr(0, colon));
      spec.g_max = std::stoi(a.g_range.substr(colon + 1));
    }
  } catch (const std::exception&) {
    throw InputError("bad component range '" + a.g_range + "'");
  }
  spec.config.n_starts = a.starts;
  spec.config.max_iter = a.max_iter;
  spec.config.tol = a.tol;
  spec.config.rng_seed = a.seed;
  spec.config.init = parse_init_strategy(a.init);
  spec.config.constrain_dof_equal = a.equal_dof;
  spec.threads = a.threads > 0 ? a.threads : default_threads();
  return spec;
}

void print_summary(const RunReport& r, std::ostream& os) {
  const auto& s = r.selected;
  os << "mode      " << r.mode << "\n"
     << "data      n=" << r.n_obs << " p=" << r.dim << "\n"
     << "selected  " << s.family << " " << s.model << " g=" << s.g
     << (s.converged ? "" : " (not converged)") << "\n"
     << std::setprecision(10) << "loglik    " << s.loglik << "\n"
     << "BIC       " << s.bic << "\n"
     << "params    " << s.n_params << "\n";
  if (r.evaluation) {
    const auto& e = *r.evaluation;
    os << "ARI       " << e.ari << "\n";
    if (e.mcc_ari) os << "MCC ARI   " << *e.mcc_ari << "\n";
    if (e.hand_ari) os << "MBH ARI   " << *e.hand_ari << "\n";
  }
  for (const auto& w : s.warnings) os << "warning   " << w << "\n";
}

void finish(const GridResult& res, RunReport report, const FitArgs& a) {
  if (!a.out.empty()) write_report(a.out, report);
  if (!a.labels_out.empty()) write_labels_csv(a.labels_out, report.labels);
  print_summary(report, std::cout);
  (void)res;
}

int run_fit(const DataArgs& d, const FitArgs& a) {
  const Dataset ds = load(d);
  GridSpec spec = make_spec(a);
  GridResult res = run_grid(ds.matrix, spec);
  RunReport report = res.report;
  if (ds.labels) {
    const auto& l = *ds.labels;
    if (std::find(l.begin(), l.end(), kUnknownLabel) == l.end()) {
      report.evaluation =
          evaluate_fit(res.selected, Partition::from_labels(l));
    }
  }
  finish(res, std::move(report), a);
  return 0;
}

int run_classify(const DataArgs& d, const FitArgs& a, double fraction,
                 std::uint64_t subset_seed) {
  const Dataset ds = load(d);
  if (!ds.labels) throw InputError("classify needs --label-column");
  GridSpec spec = make_spec(a);
  if (a.init == "kmeans") spec.config.init = InitStrategy::uniform;
  const auto& all = *ds.labels;
  const bool complete =
      std::find(all.begin(), all.end(), kUnknownLabel) == all.end();
  spec.known_labels = fraction < 1.0 && complete
                          ? stratified_known_labels(all, fraction, subset_seed)
                          : all;
  GridResult res = run_grid(ds.matrix, spec);
  RunReport report = res.report;
  if (complete) {
    // Agreement on the rows whose labels were hidden.
    std::vector<int> pred;
    std::vector<int> truth;
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (spec.known_labels[j] != kUnknownLabel) continue;
      pred.push_back(report.labels[j]);
      truth.push_back(all[j]);
    }
    if (!pred.empty()) {
      EvaluationRecord ev;
      ev.ari = ari(Partition::from_labels(pred), Partition::from_labels(truth));
      report.evaluation = ev;
    }
  }
  finish(res, std::move(report), a);
  return 0;
}

int run_simulate(const std::string& design_name, std::uint64_t seed,
                 const std::string& out) {
  SimDesign design;
  if (design_name == "sim1" || design_name == "sim2" || design_name == "sim3") {
    design = builtin_design(design_name, seed);
  } else {
    std::ifstream in(design_name);
    if (!in) throw InputError("cannot open design '" + design_name + "'");
    design = design_from_json(nlohmann::json::parse(in, nullptr, false), seed);
  }
  const SimData sim = generate(design);
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw InputError("cannot write '" + out + "'");
  }
  std::ostream& os = out.empty() ? std::cout : file;
  for (Index c = 0; c < sim.data.cols(); ++c) os << "x" << c + 1 << ",";
  os << "group\n" << std::setprecision(17);
  for (Index j = 0; j < sim.data.rows(); ++j) {
    for (Index c = 0; c < sim.data.cols(); ++c) os << sim.data(j, c) << ",";
    os << sim.truth.labels[j] << "\n";
  }
  return 0;
}

int run_evaluate(const std::string& pred_path, const std::string& truth_path,
                 const std::string& truth_column) {
  CsvOptions popt;
  popt.label_column = "label";
  const Dataset pred = ingest_csv(pred_path, popt);
  CsvOptions topt;
  topt.label_column = truth_column;
  const Dataset truth = ingest_csv(truth_path, topt);
  if (!pred.labels || !truth.labels) throw InputError("labels missing");
  // Label files store integer codes; map them back to those codes.
  std::vector<int> p(pred.labels->size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    p[j] = std::stoi(pred.label_names[(*pred.labels)[j] - 1]);
  }
  const Partition pp = Partition::from_labels(p);
  const Partition tp = Partition::from_labels(*truth.labels);
  std::cout << std::setprecision(10) << "ARI       " << ari(pp, tp) << "\n";
  if (pp.k <= 12) {
    const HandMerge hm = merge_by_hand(pp, tp);
    std::cout << "MBH ARI   " << hm.best_ari << "\nblocks   ";
    for (const auto& b : hm.blocks) {
      std::cout << " {";
      for (std::size_t i = 0; i < b.size(); ++i) {
        std::cout << (i ? "," : "") << b[i];
      }
      std::cout << "}";
    }
    std::cout << "\n";
  }
  return 0;
}

int run_report(const std::string& path) {
  const RunReport r = read_report(path);
  print_summary(r, std::cout);
  std::vector<const CellRecord*> ok;
  for (const auto& c : r.records) {
    if (c.bic) ok.push_back(&c);
  }
  std::sort(ok.begin(), ok.end(),
            [](auto* a, auto* b) { return *a->bic > *b->bic; });
  std::cout << "\ntop records by BIC\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(10, ok.size()); ++i) {
    const auto& c = *ok[i];
    std::cout << "  " << std::left << std::setw(12) << c.family << std::setw(5)
              << c.model << " g=" << std::setw(3) << c.g << " start="
              << std::setw(3) << c.start << " BIC=" << *c.bic
              << (c.converged ? "" : " (not converged)") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parsimonious skew-normal and skew-t mixture clustering"};
  app.require_subcommand(1);

  DataArgs data;
  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "cluster over a model grid");
  add_data_options(*fit_cmd, data);
  add_fit_options(*fit_cmd, fit_args, true);

  double fraction = 1.0;
  std::uint64_t subset_seed = 1;
  auto* cls_cmd = app.add_subcommand(
      "classify", "semi-supervised classification from partial labels");
  add_data_options(*cls_cmd, data);
  add_fit_options(*cls_cmd, fit_args, false);
  cls_cmd->add_option("--known-fraction", fraction,
                      "hide labels except a stratified fraction");
  cls_cmd->add_option("--subset-seed", subset_seed, "seed for the subset");

  std::string design = "sim1";
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  auto* sim_cmd = app.add_subcommand("simulate", "write a simulated dataset");
  sim_cmd->add_option("--design", design, "sim1, sim2, sim3 or a JSON file");
  sim_cmd->add_option("--seed", sim_seed, "random seed");
  sim_cmd->add_option("--out", sim_out, "output CSV (default stdout)");

  std::string pred_path;
  std::string truth_path;
  std::string truth_column;
  auto* eval_cmd =
      app.add_subcommand("evaluate", "ARI and hand merging against labels");
  eval_cmd->add_option("--pred", pred_path, "labels CSV from --labels-out")
      ->required();
  eval_cmd->add_option("--truth", truth_path, "CSV holding true labels")
      ->required();
  eval_cmd->add_option("--truth-column", truth_column, "label column")
      ->required();

  std::string report_path;
  auto* rep_cmd = app.add_subcommand("report", "summarize a report file");
  rep_cmd->add_option("--report", report_path, "report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fit_cmd) return run_fit(data, fit_args);
    if (*cls_cmd) return run_classify(data, fit_args, fraction, subset_seed);
    if (*sim_cmd) return run_simulate(design, sim_seed, sim_out);
    if (*eval_cmd) return run_evaluate(pred_path, truth_path, truth_column);
    if (*rep_cmd) return run_report(report_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
