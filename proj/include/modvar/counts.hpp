#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "modvar/grid.hpp"

namespace modvar {

/// Thrown for file-system and format-level failures (missing file, bad CSV).
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two-dimensional array of coincidence counts over detector positions, with
/// the optics needed to convert positions to physical coordinates.
struct CountsMap {
  Eigen::ArrayXd rho1_mm;  // strictly increasing, uniformly spaced
  Eigen::ArrayXd rho2_mm;
  Eigen::Array<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;  // rho1 x rho2
  DetectorPlane kind{DetectorPlane::near};
  OpticsConfig optics{};
  bool flip{false};  // negate the far-field momentum sign convention

  std::int64_t total() const { return counts.sum(); }
  void validate() const;
};

/// counts/total with axes converted through the optics. Throws on empty maps.
JointDistribution normalize_counts(const CountsMap& m);

/// Read a coincidence CSV: `# key=value` metadata lines, a
/// `rho1_mm,rho2_mm,counts` header, then one row per cell of a complete
/// rectangular grid.
CountsMap load_coincidence_csv(const std::string& path);

/// Write the bit-exact CSV form of a counts map (round-trips through load).
void save_coincidence_csv(const CountsMap& m, const std::string& path);

/// Quantize a joint distribution to a counts map with the given total, mapping
/// physical coordinates back to detector positions through the optics.
CountsMap to_counts(const JointDistribution& j, const OpticsConfig& optics, std::int64_t total);

}  // namespace modvar
