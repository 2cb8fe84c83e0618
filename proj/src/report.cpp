#include "minkops/report.hpp"

#include <cstdio>

#include "minkops/config.hpp"

namespace minkops {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void flatten(const VerificationReport& r, const std::string& prefix, std::vector<std::string>& rows) {
  const std::string name = prefix.empty() ? r.check : prefix + "/" + r.check;
  std::string constants;
  for (const auto& [k, v] : r.constants) {
    if (!constants.empty()) constants += ';';
    constants += k + "=" + fmt17(v);
  }
  std::string notes;
  for (const auto& n : r.notes) {
    if (!notes.empty()) notes += " | ";
    notes += n;
  }
  rows.push_back(csv_escape(name) + "," + (r.pass ? "1" : "0") + "," + fmt17(r.residual) + "," +
                 fmt17(r.tolerance) + "," + csv_escape(constants) + "," +
                 csv_escape(r.witness ? r.witness->description : "") + "," + csv_escape(notes));
  for (const auto& sub : r.subchecks) flatten(sub, name, rows);
}

}  // namespace

Json VerificationReport::to_json() const {
  Json j;
  j["check"] = check;
  j["pass"] = pass;
  j["residual"] = residual;
  j["tolerance"] = tolerance;
  Json c = Json::object();
  for (const auto& [k, v] : constants) c[k] = v;
  j["constants"] = c;
  j["notes"] = notes;
  if (witness) {
    Json w;
    w["description"] = witness->description;
    if (witness->body) w["body"] = *witness->body;
    if (witness->direction) w["direction"] = vec_to_json(*witness->direction);
    j["witness"] = w;
  }
  if (!subchecks.empty()) {
    Json subs = Json::array();
    for (const auto& s : subchecks) subs.push_back(s.to_json());
    j["subchecks"] = subs;
  }
  return j;
}

std::string VerificationReport::csv_header() { return "check,pass,residual,tolerance,constants,witness,notes"; }

std::vector<std::string> VerificationReport::csv_rows() const {
  std::vector<std::string> rows;
  flatten(*this, "", rows);
  return rows;
}

bool all_passed(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) {
    if (!r.pass) return false;
    if (!all_passed(r.subchecks)) return false;
  }
  return true;
}

// Tolerances live here to keep config.hpp header-only for the constants.
// Kernel tolerances are compiled into the geometry code (kDefaultTolerances);
// check tolerances can be overridden per run.
#define MINKOPS_KERNEL_TOLERANCES(X) \
  X(vertex_merge) X(collinear) X(rank) X(parallel) X(condition_warn) X(singular) X(unit_norm)
#define MINKOPS_CHECK_TOLERANCES(X)                                                         \
  X(width_identity) X(gardner) X(valuation) X(p_identity) X(segment_image) X(roundtrip)      \
  X(rs_bracket) X(additivity) X(translation) X(evenness) X(monotone_margin) X(equivariance)  \
  X(recover_residual) X(recover_sign) X(fit_residual) X(fit_negative) X(composition)

std::map<std::string, double> Tolerances::as_map() const {
  std::map<std::string, double> out;
#define X(name) out[#name] = name;
  MINKOPS_KERNEL_TOLERANCES(X)
  MINKOPS_CHECK_TOLERANCES(X)
#undef X
  return out;
}

bool Tolerances::set(const std::string& key, double value) {
#define X(name)         \
  if (key == #name) {   \
    name = value;       \
    return true;        \
  }
  MINKOPS_CHECK_TOLERANCES(X)
#undef X
  return false;
}

}  // namespace minkops
