#ifndef SKEWMIX_SIMGEN_HPP
#define SKEWMIX_SIMGEN_HPP

#include "skewmix/distributions.hpp"
#include "skewmix/em.hpp"
#include "skewmix/selection.hpp"
#include "skewmix/types.hpp"

#include <cstdint>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <string_view>
#include <vector>

namespace skewmix {

struct SimComponent {
  Index size = 0;
  Family family = Family::skew_t;
  ComponentParams params;
};

struct SimDesign {
  std::string name;
  std::vector<SimComponent> components;
  std::uint64_t seed = 1;

  Index total_size() const noexcept;
  Index dim() const;
  /// Sizes >= 1, common dimension, zero skew for the symmetric families and
  /// dof present exactly for t and skew-t.
  void validate() const;
};

/// "sim1", "sim2" or "sim3". sim3 comes from the repository's
/// config/sim3.json, embedded at build time.
SimDesign builtin_design(std::string_view name, std::uint64_t seed);

struct SimData {
  Matrix data;
  Partition truth;
};

/// Each component is sampled on its own stream derived from the seed; rows are
/// then shuffled with a further derived stream.
SimData generate(const SimDesign& design);

nlohmann::json design_to_json(const SimDesign& design);
/// Reads {"name", "components": [{size, family, xi, omega, skew?, dof?}]}.
/// A missing skew is read as zero. The seed is not part of the file.
SimDesign design_from_json(const nlohmann::json& j, std::uint64_t seed);

}  // namespace skewmix

#endif  // SKEWMIX_SIMGEN_HPP
