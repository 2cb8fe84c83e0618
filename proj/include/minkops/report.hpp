#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minkops/json_io.hpp"

namespace minkops {

/// Where a check was worst (or first failed).
struct Witness {
  std::string description;
  std::optional<Json> body;       // serialized operand, when one is at fault
  std::optional<Vec> direction;   // direction attaining the worst residual
};

/// Structured result of a property check.
///
/// `pass` is decided by the producing check: either residual <= tolerance,
/// or measured constants inside a declared bracket.
struct VerificationReport {
  std::string check;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::map<std::string, double> constants;
  std::vector<std::string> notes;
  std::optional<Witness> witness;
  std::vector<VerificationReport> subchecks;

  Json to_json() const;
  /// Fixed CSV projection, one row per check (subchecks flattened as
  /// "parent/child"). See docs/formats.md.
  static std::string csv_header();
  std::vector<std::string> csv_rows() const;
};

/// True iff every report (and subcheck) passed.
bool all_passed(const std::vector<VerificationReport>& reports);

}  // namespace minkops
