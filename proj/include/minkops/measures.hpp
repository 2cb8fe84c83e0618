#pragma once

#include <functional>
#include <string>
#include <vector>

#include "minkops/geometry.hpp"
#include "minkops/grassmannian.hpp"
#include "minkops/report.hpp"

namespace minkops {

struct Atom {
  Vec dir;       // unit
  double weight; // > 0
};

/// Finite nonnegative combination of Dirac masses on the unit sphere.
///
/// Directions are normalized, atoms at the same direction merged and
/// zero-weight atoms dropped. `is_even()` reports closure under v -> -v with
/// equal weights.
class AtomicSphereMeasure {
 public:
  AtomicSphereMeasure() = default;
  /// Throws GeometryError on negative weights or zero directions.
  explicit AtomicSphereMeasure(const std::vector<Atom>& atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  bool is_even() const { return even_; }
  double total_mass() const;
  /// Atom-wise sum, merging equal directions.
  AtomicSphereMeasure operator+(const AtomicSphereMeasure& other) const;

 private:
  std::vector<Atom> atoms_;
  bool even_ = true;
};

Json measure_to_json(const AtomicSphereMeasure& m);
AtomicSphereMeasure measure_from_json(const Json& j);

/// S_1(K, .): one atom per edge, at the outer unit normal, weighted by the
/// edge length. Planar bodies only; a point gives the empty measure.
AtomicSphereMeasure surface_area_measure_1(const Body& k);

/// Even generating measure rho_Z with h(Z - c, u) = int |<u, v>| d rho_Z(v):
/// each generator g contributes |g|/2 at +g/|g| and at -g/|g|.
AtomicSphereMeasure generating_measure(const Zonotope& z);

/// Planar mixed volume by polarization: (V(K+L) - V(K) - V(L)) / 2.
double mixed_volume_2d(const Body& k, const Body& l);

/// V(S_{g_1}, ..., S_{g_n}) = 2^n / n! |det(g_1 ... g_n)|.
double mixed_volume_segments(const std::vector<Vec>& gs);

/// Mixed volume of n generator sets in R^n (n >= 1): the multilinear
/// expansion 2^n / n! sum |det| over one generator per slot.
double mixed_volume_generator_sets(const std::vector<std::vector<Vec>>& sets);

/// V(K_1, ..., K_n). Zonotopal bodies in any dimension; polygons in the plane.
double mixed_volume(const std::vector<Body>& bodies);

/// Deterministic orthonormal basis v_2..v_n of span{v}^perp: Gram-Schmidt over
/// e_1..e_n in order, skipping near-dependent candidates.
std::vector<Vec> orthonormal_completion(const Vec& v);

/// Calibration constant kappa_n with h(DK, v) = kappa_n V(K, S_{v_2}, ..., S_{v_n}),
/// fixed on the cube [-1, 1]^n with v = e_1.
double width_constant(int n);

/// Width of K in direction v against the mixed volume V(K, S_{v_2}, ...).
/// Constants: lhs, mixed_volume, kappa, reference_constant (2^{1-n}),
/// deviates_from_reference (0/1).
VerificationReport width_mixed_volume_check(const Body& k, const Vec& v,
                                            const Tolerances& tol = kDefaultTolerances);

/// binom(n,k) V(K_1..K_k, L_1..L_{n-k}) against V_E(K_i|E) V_{E^perp}(L_j).
/// Throws GeometryError when an L body is not contained in E^perp.
VerificationReport gardner_split_check(const Subspace& e, const std::vector<Body>& k_group,
                                       const std::vector<Body>& l_group,
                                       const Tolerances& tol = kDefaultTolerances);

/// A real-valued 1-homogeneous translation-invariant valuation.
struct LinearValuation {
  std::string name;
  std::function<double(const Body&)> evaluate;
  double operator()(const Body& k) const { return evaluate(k); }
};

/// K -> h(DK, u), the width of K in direction u (times |u|).
LinearValuation width_valuation(const Vec& u);
/// K -> V(K, S_2, ..., S_n) with the remaining slots fixed.
LinearValuation mixed_volume_slot(std::vector<Body> slots);

using KlainFunction = std::function<double(const LineDir&)>;

/// Kl_mu(E) = mu(E cap B^n) / 2. Throws if mu fails a 1-homogeneity spot check.
double klain_line(const LinearValuation& mu, const LineDir& e);
KlainFunction klain_function(const LinearValuation& mu);

/// mu(Z) = 2 sum_atoms kl(span u) w. Requires an even measure.
double valuation_on_zonotope(const KlainFunction& kl, const AtomicSphereMeasure& rho_z);

/// V(K_1, ..., K_n) > 0 decided combinatorially: every subfamily of k bodies
/// must have a Minkowski sum of dimension >= k.
bool positivity_check(const std::vector<Body>& bodies);

/// Direction vectors of a body: generators, the segment vector, or edges.
std::vector<Vec> segment_directions(const Body& k);

}  // namespace minkops
