#include "skewmix/simgen.hpp"

#include "skewmix/random.hpp"
#include "skewmix/sim3_config.hpp"

#include <nlohmann/json.hpp>

#include <numeric>

namespace skewmix {
namespace {

using nlohmann::json;

constexpr std::uint64_t kShuffleStream = 0xFFFF;

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Vector vec2(double a, double b) { return Vector{{a, b}}; }

SimComponent component(Index size, Family family, Vector xi, Matrix omega,
                       Vector skew, std::optional<double> dof = std::nullopt) {
  return {size, family, ComponentParams{std::move(xi), std::move(omega),
                                        std::move(skew), dof}};
}

SimDesign sim1() {
  SimDesign d;
  d.name = "sim1";
  d.components.push_back(component(300, Family::gaussian, vec2(3, 0),
                                    mat2(1, 0, 0, 1), Vector::Zero(2)));
  d.components.push_back(component(200, Family::t, vec2(-2, 4),
                                   mat2(1, 0.5, 0.5, 1), Vector::Zero(2), 4.0));
  return d;
}

SimDesign sim2() {
  SimDesign d;
  d.name = "sim2";
  d.components.push_back(component(150, Family::skew_t, vec2(0, 0),
                                   mat2(0.4, 0.2, 0.2, 0.5), vec2(2, 4), 10.0));
  d.components.push_back(component(200, Family::skew_t, vec2(6, 25),
                                   mat2(1, 0.5, 0.5, 1), vec2(-2, 4), 8.0));
  d.components.push_back(component(150, Family::skew_t, vec2(4, 0),
                                   mat2(0.2, 0, 0, 0.3), vec2(2, 4), 70.0));
  return d;
}

Vector vector_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

Matrix matrix_from(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const Index r = static_cast<Index>(rows.size());
  const Index c = r ? static_cast<Index>(rows.front().size()) : 0;
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    if (static_cast<Index>(rows[i].size()) != c) {
      throw InputError("ragged matrix in design file");
    }
    for (Index k = 0; k < c; ++k) m(i, k) = rows[i][k];
  }
  return m;
}

json to_json_vec(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

json to_json_mat(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Vector r = m.row(i).transpose();
    rows.push_back(to_json_vec(r));
  }
  return rows;
}

}  // namespace

Index SimDesign::total_size() const noexcept {
  Index n = 0;
  for (const auto& c : components) n += c.size;
  return n;
}

Index SimDesign::dim() const {
  if (components.empty()) throw InputError("design has no components");
  return components.front().params.dim();
}

void SimDesign::validate() const {
  const Index p = dim();
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    const std::string at = "design component " + std::to_string(i + 1);
    if (c.size < 1) throw InputError(at + ": size must be at least 1");
    if (c.params.dim() != p) throw InputError(at + ": dimension mismatch");
    skewmix::validate(c.params);
    if (!has_skew(c.family) && !c.params.skew.isZero(0.0)) {
      throw InputError(at + ": symmetric family with nonzero skewness");
    }
    if (has_dof(c.family) != c.params.dof.has_value()) {
      throw InputError(at + ": dof must be given exactly for t and skew-t");
    }
  }
}

SimDesign builtin_design(std::string_view name, std::uint64_t seed) {
  SimDesign d;
  if (name == "sim1") {
    d = sim1();
  } else if (name == "sim2") {
    d = sim2();
  } else if (name == "sim3") {
    d = design_from_json(json::parse(detail::kSim3DesignJson), seed);
  } else {
    throw InputError("unknown design '" + std::string(name) +
                     "' (expected sim1, sim2 or sim3)");
  }
  d.seed = seed;
  return d;
}

SimData generate(const SimDesign& design) {
  design.validate();
  const Index n = design.total_size();
  const Index p = design.dim();

  Matrix blocks(n, p);
  std::vector<int> source(static_cast<std::size_t>(n));
  Index row = 0;
  for (std::size_t i = 0; i < design.components.size(); ++i) {
    const auto& c = design.components[i];
    blocks.middleRows(row, c.size) =
        sample_skewt(c.params, c.size, derive_seed(design.seed, i));
    std::fill_n(source.begin() + row, c.size, static_cast<int>(i) + 1);
    row += c.size;
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  auto rng = make_rng(design.seed, kShuffleStream);
  shuffle(order, rng);

  SimData out;
  out.data.resize(n, p);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    out.data.row(j) = blocks.row(order[j]);
    labels[j] = source[order[j]];
  }
  out.truth = Partition::from_labels(std::move(labels));
  out.truth.k = static_cast<int>(design.components.size());
  return out;
}

json design_to_json(const SimDesign& design) {
  json comps = json::array();
  for (const auto& c : design.components) {
    json jc{{"size", c.size},
            {"family", std::string(to_string(c.family))},
            {"xi", to_json_vec(c.params.xi)},
            {"omega", to_json_mat(c.params.omega)},
            {"skew", to_json_vec(c.params.skew)}};
    if (c.params.dof) jc["dof"] = *c.params.dof;
    comps.push_back(std::move(jc));
  }
  return json{{"name", design.name}, {"components", std::move(comps)}};
}

SimDesign design_from_json(const json& j, std::uint64_t seed) {
  SimDesign d;
  d.seed = seed;
  try {
    d.name = j.value("name", std::string("custom"));
    for (const auto& jc : j.at("components")) {
      SimComponent c;
      c.size = jc.at("size").get<Index>();
      std::string fam = jc.at("family").get<std::string>();
      std::replace(fam.begin(), fam.end(), '_', '-');
      if (fam == "normal") fam = "gaussian";
      c.family = parse_family(fam);
      c.params.xi = vector_from(jc.at("xi"));
      c.params.omega = matrix_from(jc.at("omega"));
      c.params.skew = jc.contains("skew") ? vector_from(jc.at("skew"))
                                          : Vector::Zero(c.params.xi.size());
      if (jc.contains("dof")) c.params.dof = jc.at("dof").get<double>();
      d.components.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed design: ") + e.what());
  }
  d.validate();
  return d;
}

}  // namespace skewmix
