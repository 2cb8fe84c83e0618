#pragma once

#include <map>
#include <string>

namespace minkops {

inline constexpr const char* kToolName = "minkops";
inline constexpr const char* kToolVersion = "0.1.0";

/// Every comparison tolerance used by the library, in one place.
///
/// Geometry kernels read `kDefaultTolerances`; the verifier and the CLI take a
/// `Tolerances` value so that individual entries can be overridden per run.
struct Tolerances {
  // geometry_core
  double vertex_merge = 1e-12;      // absolute, polygon vertex dedup
  double collinear = 1e-12;         // relative cross product, collinear merge
  double rank = 1e-10;              // relative singular value cutoff
  double parallel = 1e-12;          // direction merge for zonotope generators
  double condition_warn = 1e8;      // linear_image warning threshold
  double singular = 1e-14;          // linear_image hard failure (relative sigma_min)
  double unit_norm = 1e-12;

  // measures / identities
  double width_identity = 1e-9;
  double gardner = 1e-10;
  double valuation = 1e-9;

  // operators
  double p_identity = 1e-12;        // rho_1 = 2 |p|
  double segment_image = 1e-10;     // image of a segment must be a segment
  double roundtrip = 1e-8;

  // verifier
  double rs_bracket = 1e-9;
  double additivity = 1e-9;         // Hausdorff, relative to body scale
  double translation = 1e-10;
  double evenness = 1e-10;
  double monotone_margin = 1e-10;
  double equivariance = 1e-9;
  double recover_residual = 1e-6;
  double recover_sign = 1e-6;
  double fit_residual = 1e-8;
  double fit_negative = 1e-9;
  double composition = 1e-6;

  /// Name/value view used for report headers and `--tol name=value`.
  std::map<std::string, double> as_map() const;
  /// Overrides a check tolerance. Returns false for unknown names and for the
  /// kernel tolerances, which are fixed at compile time.
  bool set(const std::string& name, double value);
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace minkops
