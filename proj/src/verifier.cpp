#include "minkops/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace minkops {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent stream per corpus index, so results do not depend on scheduling.
Rng stream(std::uint64_t seed, std::size_t i) { return Rng(mix(seed, i)); }

// 360 equally spaced directions in the plane; 512 seeded directions plus the
// coordinate axes otherwise.
const std::vector<Vec>& check_directions(int n) {
  static const std::vector<Vec> planar = [] {
    std::vector<Vec> d;
    for (int k = 0; k < 360; ++k) d.push_back(Vec(unit_at(2.0 * kPi * k / 360.0)));
    return d;
  }();
  if (n == 2) return planar;
  static std::mutex mu;
  static std::map<int, std::vector<Vec>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Vec> d;
  Rng rng(0x5eedULL + static_cast<std::uint64_t>(n));
  for (int k = 0; k < 512; ++k) d.push_back(rng.unit_vector(n));
  for (int i = 0; i < n; ++i) {
    d.push_back(Vec::Unit(n, i));
    d.push_back(-Vec::Unit(n, i));
  }
  return cache.emplace(n, std::move(d)).first->second;
}

double body_scale(const Body& a, const Body& b) {
  const double s = std::max(radius_about_steiner(a), radius_about_steiner(b));
  return s > 0.0 ? s : 1.0;
}

double rel_hausdorff(const Body& a, const Body& b) { return hausdorff_distance(a, b) / body_scale(a, b); }

VerificationReport leaf(std::string name, double residual, double tolerance) {
  VerificationReport r;
  r.check = std::move(name);
  r.residual = residual;
  r.tolerance = tolerance;
  r.pass = residual <= tolerance;
  return r;
}

Witness body_witness(const std::string& what, std::size_t index, const Body& k,
                     std::optional<Vec> dir = std::nullopt) {
  Witness w;
  w.description = what + " (corpus body " + std::to_string(index) + ")";
  w.body = body_to_json(k);
  w.direction = std::move(dir);
  return w;
}

// Index of the largest value; ties keep the first.
template <class T, class F>
std::size_t argmax(const std::vector<T>& xs, F key) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (key(xs[i]) > key(xs[best])) best = i;
  return best;
}

std::vector<std::size_t> full_dimensional(const Corpus& corpus, int threads) {
  const auto vols = parallel_map(corpus.bodies.size(), threads, [&](std::size_t i) { return volume(corpus.bodies[i]); });
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < vols.size(); ++i)
    if (vols[i] > 0.0) idx.push_back(i);
  return idx;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

int resolve_threads(int requested, std::size_t work) {
  int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(t), std::max<std::size_t>(work, 1)));
}

// ---------------------------------------------------------------------------
// Rogers-Shephard
// ---------------------------------------------------------------------------

VerificationReport rs_check(const Body& k, const Tolerances& tol) {
  const int n = k.ambient_dim();
  const double v = volume(k);
  if (!(v > 0.0)) throw GeometryError("rs_check: body is lower dimensional");
  const double r = volume(difference_body(k)) / v;
  const double lo = std::pow(2.0, n);
  const double hi = binomial(2 * n, n);
  VerificationReport rep = leaf("rs", std::max({0.0, lo - r, r - hi}), tol.rs_bracket);
  rep.constants["ratio"] = r;
  rep.constants["lower"] = lo;
  rep.constants["upper"] = hi;
  if (std::abs(r - lo) <= tol.rs_bracket) rep.notes.push_back("lower equality: centrally symmetric candidate");
  if (std::abs(r - hi) <= tol.rs_bracket) rep.notes.push_back("upper equality: simplex candidate");
  return rep;
}

VerificationReport rs_corpus_check(const Corpus& corpus, const VerifyOptions& opt) {
  const auto idx = full_dimensional(corpus, opt.threads);
  if (idx.empty()) throw GeometryError("rs: corpus has no full-dimensional bodies");
  const auto reps =
      parallel_map(idx.size(), opt.threads, [&](std::size_t i) { return rs_check(corpus.bodies[idx[i]], opt.tol); });
  VerificationReport out = leaf("rs", 0.0, opt.tol.rs_bracket);
  double lo = kInf, hi = -kInf;
  int sym = 0, simplex = 0;
  for (const auto& r : reps) {
    lo = std::min(lo, r.constants.at("ratio"));
    hi = std::max(hi, r.constants.at("ratio"));
    out.residual = std::max(out.residual, r.residual);
    for (const auto& note : r.notes) {
      if (note.rfind("lower", 0) == 0) ++sym;
      if (note.rfind("upper", 0) == 0) ++simplex;
    }
  }
  out.pass = out.residual <= out.tolerance;
  out.constants["min_ratio"] = lo;
  out.constants["max_ratio"] = hi;
  out.constants["lower"] = reps.front().constants.at("lower");
  out.constants["upper"] = reps.front().constants.at("upper");
  out.constants["bodies"] = static_cast<double>(idx.size());
  out.constants["symmetric_candidates"] = sym;
  out.constants["simplex_candidates"] = simplex;
  const std::size_t w = argmax(reps, [](const VerificationReport& r) { return r.residual; });
  out.witness = body_witness(out.pass ? "largest bracket excess" : "ratio outside bracket", idx[w],
                             corpus.bodies[idx[w]]);
  return out;
}

// ---------------------------------------------------------------------------
// Volume constraint
// ---------------------------------------------------------------------------

namespace {

struct Bracket {
  double lo = kInf;
  double hi = -kInf;
  std::size_t arg_lo = 0;
  std::size_t arg_hi = 0;
};

Bracket ratio_bracket(const OperatorDescriptor& op, const std::vector<Body>& bodies, int threads) {
  const auto ratios = parallel_map(bodies.size(), threads, [&](std::size_t i) {
    const double v = volume(bodies[i]);
    return v > 0.0 ? volume(apply(op, bodies[i])) / v : std::numeric_limits<double>::quiet_NaN();
  });
  Bracket b;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (std::isnan(ratios[i])) continue;
    if (ratios[i] < b.lo) b.lo = ratios[i], b.arg_lo = i;
    if (ratios[i] > b.hi) b.hi = ratios[i], b.arg_hi = i;
  }
  return b;
}

int corpus_dim(const Corpus& c) { return c.bodies.empty() ? c.spec.dim : c.bodies.front().ambient_dim(); }

}  // namespace

VerificationReport vc_estimate(const OperatorDescriptor& op, const Corpus& corpus, const VerifyOptions& opt) {
  const auto idx = full_dimensional(corpus, opt.threads);
  if (idx.empty()) throw GeometryError("vc: corpus has no full-dimensional bodies");
  std::vector<Body> bodies;
  for (auto i : idx) bodies.push_back(corpus.bodies[i]);
  const Bracket b = ratio_bracket(op, bodies, opt.threads);
  const bool ok = b.lo > 0.0 && std::isfinite(b.hi);
  VerificationReport out = leaf("vc", ok ? 0.0 : 1.0, 0.0);
  out.constants["c_hat"] = b.lo;
  out.constants["C_hat"] = b.hi;
  out.constants["bodies"] = static_cast<double>(bodies.size());
  if (!ok) {
    out.notes.push_back(
        "volume constraint violated: a full-dimensional body has a lower-dimensional image, but an operator "
        "with a volume constraint preserves dimension");
    out.witness = body_witness("annihilated body", idx[b.arg_lo], bodies[b.arg_lo]);
  } else {
    out.witness = body_witness("minimum volume ratio", idx[b.arg_lo], bodies[b.arg_lo]);
  }
  const int n = corpus_dim(corpus);
  if (auto dec = op.declared_vc(n)) {
    out.constants["declared_c"] = dec->c;
    out.constants["declared_C"] = dec->big_c;
    VerificationReport sub = leaf("declared_bracket",
                                  std::max({0.0, (dec->c - b.lo) / dec->c, (b.hi - dec->big_c) / dec->big_c}),
                                  opt.tol.composition);
    sub.constants["c"] = dec->c;
    sub.constants["C"] = dec->big_c;
    out.subchecks.push_back(std::move(sub));
    out.pass = out.pass && out.subchecks.back().pass;
  }
  return out;
}

VerificationReport vc_composition_check(const OperatorDescriptor& outer, const OperatorDescriptor& inner,
                                        const Corpus& corpus, const VerifyOptions& opt) {
  const auto idx = full_dimensional(corpus, opt.threads);
  if (idx.empty()) throw GeometryError("vc composition: corpus has no full-dimensional bodies");
  std::vector<Body> bodies;
  for (auto i : idx) bodies.push_back(corpus.bodies[i]);
  const Bracket b2 = ratio_bracket(inner, bodies, opt.threads);
  std::vector<Body> extended = bodies;
  const auto images = parallel_map(bodies.size(), opt.threads, [&](std::size_t i) { return apply(inner, bodies[i]); });
  extended.insert(extended.end(), images.begin(), images.end());
  const Bracket b1 = ratio_bracket(outer, extended, opt.threads);
  const Bracket b12 = ratio_bracket(compose(outer, inner), bodies, opt.threads);

  const double plo = b1.lo * b2.lo;
  const double phi = b1.hi * b2.hi;
  double residual = 0.0;
  if (!(plo > 0.0) || !std::isfinite(phi) || !(b12.lo > 0.0)) {
    residual = kInf;
  } else {
    residual = std::max({0.0, (plo - b12.lo) / plo, (b12.hi - phi) / phi});
  }
  VerificationReport out = leaf("vc_composition", residual, opt.tol.composition);
  out.constants["c_outer"] = b1.lo;
  out.constants["C_outer"] = b1.hi;
  out.constants["c_inner"] = b2.lo;
  out.constants["C_inner"] = b2.hi;
  out.constants["c_composite"] = b12.lo;
  out.constants["C_composite"] = b12.hi;
  out.constants["c_product"] = plo;
  out.constants["C_product"] = phi;
  out.notes.push_back("outer factor measured on the corpus and on its image under the inner factor");
  out.witness = body_witness("composite extreme", idx[b12.arg_hi], bodies[b12.arg_hi]);
  return out;
}

// ---------------------------------------------------------------------------
// Axioms
// ---------------------------------------------------------------------------

namespace {

struct AxiomSample {
  double additivity = 0.0;
  double translation = 0.0;
  double point = 0.0;
  double dimension = 0.0;  // 0 or 1
  std::string error;
};

double point_residual(const Body& img) {
  double r = 0.0;
  const int n = img.ambient_dim();
  for (int i = 0; i < n; ++i) {
    r = std::max(r, std::abs(support(img, Vec::Unit(n, i))));
    r = std::max(r, std::abs(support(img, -Vec::Unit(n, i))));
  }
  return r;
}

VerificationReport aggregate(const std::string& name, const std::vector<AxiomSample>& xs,
                             double AxiomSample::*field, double tol, const Corpus& corpus) {
  VerificationReport r = leaf(name, 0.0, tol);
  std::size_t worst = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].*field > r.residual || (std::isnan(xs[i].*field) && !std::isnan(r.residual))) {
      r.residual = xs[i].*field;
      worst = i;
    }
  }
  r.pass = r.residual <= tol;
  if (!xs.empty()) r.witness = body_witness(r.pass ? "largest residual" : "violation", worst, corpus.bodies[worst]);
  if (!xs.empty() && !xs[worst].error.empty()) r.notes.push_back("operator raised: " + xs[worst].error);
  return r;
}

}  // namespace

VerificationReport check_operator_axioms(const OperatorDescriptor& op, const Corpus& corpus,
                                         const VerifyOptions& opt) {
  const std::size_t n_bodies = corpus.bodies.size();
  const auto samples = parallel_map(n_bodies, opt.threads, [&](std::size_t i) {
    AxiomSample s;
    const Body& k = corpus.bodies[i];
    const int n = k.ambient_dim();
    Rng rng = stream(opt.seed, i);
    try {
      const Body img = apply(op, k);
      const Body& l = corpus.bodies[(i + 1) % n_bodies];
      const Body lhs = apply(op, minkowski_sum(k, l));
      const Body rhs = minkowski_sum(img, apply(op, l));
      s.additivity = rel_hausdorff(lhs, rhs);
      const Vec t = 2.0 * rng.gaussian_vector(n);
      s.translation = rel_hausdorff(apply(op, translate(k, t)), img);
      const Vec p = 2.0 * rng.gaussian_vector(n);
      s.point = point_residual(apply(op, make_point(p)));
      s.dimension = dimension(img) == dimension(k) ? 0.0 : 1.0;
    } catch (const std::exception& e) {
      s = AxiomSample{kInf, kInf, kInf, 1.0, e.what()};
    }
    return s;
  });
  VerificationReport out = leaf("axioms", 0.0, 0.0);
  out.subchecks.push_back(aggregate("additivity", samples, &AxiomSample::additivity, opt.tol.additivity, corpus));
  out.subchecks.push_back(aggregate("translation", samples, &AxiomSample::translation, opt.tol.translation, corpus));
  out.subchecks.push_back(aggregate("point_annihilation", samples, &AxiomSample::point, opt.tol.translation, corpus));
  out.subchecks.push_back(aggregate("dimension", samples, &AxiomSample::dimension, 0.0, corpus));
  int failed = 0;
  for (const auto& s : out.subchecks) failed += s.pass ? 0 : 1;
  out.residual = failed;
  out.pass = failed == 0;
  out.constants["failed_subchecks"] = failed;
  out.constants["bodies"] = static_cast<double>(n_bodies);
  return out;
}

VerificationReport evenness_test(const OperatorDescriptor& op, const Corpus& corpus, const VerifyOptions& opt) {
  const auto res = parallel_map(corpus.bodies.size(), opt.threads, [&](std::size_t i) {
    const Body& k = corpus.bodies[i];
    try {
      const Body img = apply(op, k);
      return std::max(rel_hausdorff(img, apply(op, reflect(k))), rel_hausdorff(img, reflect(img)));
    } catch (const std::exception&) {
      return kInf;
    }
  });
  VerificationReport out = leaf("evenness", 0.0, opt.tol.evenness);
  if (res.empty()) return out;
  const std::size_t w = argmax(res, [](double x) { return x; });
  out.residual = res[w];
  out.pass = out.residual <= out.tolerance;
  out.witness = body_witness(out.pass ? "largest residual" : "Phi(-K) or -Phi(K) differs from Phi(K)", w,
                             corpus.bodies[w]);
  return out;
}

// ---------------------------------------------------------------------------
// Monotonicity
// ---------------------------------------------------------------------------

namespace {

// A body inside k: convex combinations of vertices, shrunk generators, or a
// sub-segment.
Body inner_body(const Body& k, Rng& rng) {
  if (k.is_polygon()) {
    const auto& vs = std::get<Polygon2>(k.shape()).vertices();
    // Half of the pairs use a chord between two vertices; for a thin body the
    // chord is almost as long as the body itself.
    if (vs.size() >= 2 && rng.uniform() < 0.5) {
      const int n = static_cast<int>(vs.size());
      const int i = rng.uniform_int(0, n - 1);
      const int j = (i + rng.uniform_int(1, n - 1)) % n;
      return make_segment(Vec(vs[i]), Vec(vs[j]));
    }
    const int m = rng.uniform_int(3, 8);
    std::vector<Vec2> pts;
    for (int j = 0; j < m; ++j) {
      std::vector<double> w(vs.size());
      double total = 0.0;
      for (auto& x : w) total += (x = -std::log(1.0 - rng.uniform()));
      Vec2 p = Vec2::Zero();
      for (std::size_t i = 0; i < vs.size(); ++i) p += (w[i] / total) * vs[i];
      pts.push_back(p);
    }
    return Body(Polygon2::hull(std::move(pts)));
  }
  if (k.is_segment()) {
    const auto& s = std::get<Segment>(k.shape());
    double a = rng.uniform(), b = rng.uniform();
    if (a > b) std::swap(a, b);
    return make_segment(s.a + a * (s.b - s.a), s.a + b * (s.b - s.a));
  }
  if (k.is_point()) return k;
  const Zonotope z = to_zonotope(k);
  Vec c = z.center();
  std::vector<Vec> gens;
  for (const auto& g : z.generators()) {
    const double t = rng.uniform(0.3, 1.0);
    c += rng.uniform(-1.0, 1.0) * (1.0 - t) * g;
    gens.push_back(t * g);
  }
  return Body(Zonotope(c, gens));
}

// A small origin-symmetric body; K + P contains K and shares its Steiner point.
Body symmetric_perturbation(int n, Rng& rng) {
  const int m = rng.uniform_int(1, 2);
  std::vector<Vec> gens;
  for (int j = 0; j < m; ++j) gens.push_back(0.3 * rng.gaussian_vector(n));
  return Body(Zonotope(Vec::Zero(n), gens));
}

struct MonoSample {
  double excess = -kInf;
  std::size_t dir = 0;
  std::optional<Body> inner;
  std::string error;
};

}  // namespace

VerificationReport monotonicity_test(const OperatorDescriptor& op, const Corpus& corpus, const VerifyOptions& opt,
                                     bool weak) {
  const double margin = opt.tol.monotone_margin;
  const auto samples = parallel_map(corpus.bodies.size(), opt.threads, [&](std::size_t i) {
    MonoSample s;
    const Body& k = corpus.bodies[i];
    Rng rng = stream(opt.seed ^ (weak ? 0x77ULL : 0x55ULL), i);
    try {
      const Body small = weak ? k : inner_body(k, rng);
      const Body big = weak ? minkowski_sum(k, symmetric_perturbation(k.ambient_dim(), rng)) : k;
      const Body a = apply(op, small);
      const Body b = apply(op, big);
      const auto& dirs = check_directions(k.ambient_dim());
      const double sc = std::max(1.0, radius_about_steiner(b));
      for (std::size_t d = 0; d < dirs.size(); ++d) {
        const double e = (support(a, dirs[d]) - support(b, dirs[d])) / sc;
        if (e > s.excess) s.excess = e, s.dir = d;
      }
      s.inner = weak ? big : small;
    } catch (const std::exception& e) {
      s.excess = kInf;
      s.error = e.what();
    }
    return s;
  });
  VerificationReport out = leaf(weak ? "weak_monotonicity" : "monotonicity", 0.0, margin);
  int violations = 0;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].excess > margin) ++violations;
    if (samples[i].excess > samples[worst].excess) worst = i;
  }
  out.constants["pairs"] = static_cast<double>(samples.size());
  out.constants["violations"] = violations;
  out.constants["violation_rate"] = samples.empty() ? 0.0 : static_cast<double>(violations) / samples.size();
  if (!samples.empty()) {
    out.residual = std::max(0.0, samples[worst].excess);
    const int n = corpus.bodies[worst].ambient_dim();
    Witness w = body_witness(violations ? "support of the smaller image exceeds the larger" : "smallest margin",
                             worst, corpus.bodies[worst], check_directions(n)[samples[worst].dir]);
    if (samples[worst].inner) {
      w.description += weak ? "; paired with the enlarged body" : "; paired with the inner body";
      Json both = Json::object();
      both["outer"] = body_to_json(weak ? *samples[worst].inner : corpus.bodies[worst]);
      both["inner"] = body_to_json(weak ? corpus.bodies[worst] : *samples[worst].inner);
      w.body = both;
    }
    out.witness = w;
    if (!samples[worst].error.empty()) out.notes.push_back("operator raised: " + samples[worst].error);
  }
  out.pass = violations == 0;
  out.notes.push_back(weak ? "pairs K subset K + P with P origin-symmetric (equal Steiner points)"
                           : "pairs M subset K with M built inside K");
  return out;
}

// ---------------------------------------------------------------------------
// Equivariance
// ---------------------------------------------------------------------------

VerificationReport equivariance_test(const OperatorDescriptor& op, const std::vector<Mat>& rotations,
                                     const Corpus& corpus, const VerifyOptions& opt) {
  for (const auto& g : rotations) {
    if (g.rows() != g.cols()) throw GeometryError("equivariance: matrix is not square");
    const double dev = (g.transpose() * g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    if (dev > 1e-12) throw GeometryError("equivariance: matrix is not orthogonal within 1e-12");
  }
  struct Sample {
    double residual = 0.0;
    std::size_t rot = 0;
  };
  const auto samples = parallel_map(corpus.bodies.size(), opt.threads, [&](std::size_t i) {
    Sample s;
    const Body& k = corpus.bodies[i];
    try {
      const Body img = apply(op, k);
      for (std::size_t r = 0; r < rotations.size(); ++r) {
        const double e = rel_hausdorff(apply(op, linear_image(rotations[r], k)), linear_image(rotations[r], img));
        if (e > s.residual) s.residual = e, s.rot = r;
      }
    } catch (const std::exception&) {
      s.residual = kInf;
    }
    return s;
  });
  VerificationReport out = leaf("equivariance", 0.0, opt.tol.equivariance);
  out.constants["rotations"] = static_cast<double>(rotations.size());
  if (samples.empty() || rotations.empty()) return out;
  const std::size_t w = argmax(samples, [](const Sample& s) { return s.residual; });
  out.residual = samples[w].residual;
  out.pass = out.residual <= out.tolerance;
  Witness wit = body_witness(out.pass ? "largest residual" : "Phi(gK) differs from g Phi(K)", w, corpus.bodies[w]);
  wit.description += "; rotation " + std::to_string(samples[w].rot);
  out.witness = wit;
  out.constants["worst_rotation"] = static_cast<double>(samples[w].rot);
  return out;
}

// ---------------------------------------------------------------------------
// Bi-Lipschitz estimate
// ---------------------------------------------------------------------------

VerificationReport bilip_estimate(const OperatorDescriptor& op, int n, int pair_count, std::uint64_t seed,
                                  const VerifyOptions& opt) {
  if (n < 2 || pair_count < 1) throw GeometryError("bilip: need n >= 2 and at least one pair");
  Rng rng(seed);
  std::vector<std::pair<Vec, Vec>> pairs;
  while (static_cast<int>(pairs.size()) < pair_count) {
    const Vec u = rng.unit_vector(n);
    Vec v;
    if (pairs.size() % 2 == 1) {
      Vec w = rng.gaussian_vector(n);
      w -= w.dot(u) * u;
      if (w.norm() < 1e-8) continue;
      w.normalize();
      const double delta = std::exp(rng.uniform(std::log(1e-4), std::log(1e-2)));
      v = std::cos(delta) * u + std::sin(delta) * w;
    } else {
      v = rng.unit_vector(n);
    }
    if (dist_lines(LineDir(u), LineDir(v)) < 1e-12) continue;  // coincident lines: resample
    pairs.emplace_back(u, v);
  }
  const auto ratios = parallel_map(pairs.size(), opt.threads, [&](std::size_t i) {
    const LineDir e(pairs[i].first), f(pairs[i].second);
    return dist_lines(pi1_of(op, e), pi1_of(op, f)) / dist_lines(e, f);
  });
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    if (ratios[i] < ratios[lo]) lo = i;
    if (ratios[i] > ratios[hi]) hi = i;
  }
  const bool ok = ratios[lo] > 0.0 && std::isfinite(ratios[hi]);
  VerificationReport out = leaf("bilipschitz", ok ? 0.0 : 1.0, 0.0);
  out.constants["k1_hat"] = ratios[lo];
  out.constants["k2_hat"] = ratios[hi];
  out.constants["pairs"] = static_cast<double>(pairs.size());
  Witness w;
  w.description = "pair attaining k2_hat; second line in direction";
  w.body = Json{{"E", vec_to_json(pairs[hi].first)}, {"F", vec_to_json(pairs[hi].second)}};
  w.direction = pairs[hi].second;
  out.witness = w;
  return out;
}

// ---------------------------------------------------------------------------
// g o D recovery
// ---------------------------------------------------------------------------

RecoverResult recover_gD(const OperatorDescriptor& op, const Corpus& corpus, int n, const VerifyOptions& opt) {
  RecoverResult res;
  VerificationReport& rep = res.report;
  rep = leaf("recover_gD", kInf, opt.tol.recover_residual);
  const double sign_tol = opt.tol.recover_sign;

  std::vector<Vec> cols;
  Mat g(n, n);
  try {
    for (int i = 0; i < n; ++i) cols.push_back(0.5 * p_of(op, Vec::Unit(n, i)));
    // Probe along (e_i + e_j)/sqrt 2: the image is +-(s_i c_i + s_j c_j).
    auto probe = [&](int i, int j) -> Vec { return (std::sqrt(2.0) * 0.5) * p_of(op, (Vec::Unit(n, i) + Vec::Unit(n, j)) / std::sqrt(2.0)); };
    auto match = [](const Vec& q, const Vec& s) { return std::min((q - s).norm(), (q + s).norm()); };
    std::vector<double> sign(n, 1.0);
    double worst_sign = 0.0;
    for (int j = 1; j < n; ++j) {
      const Vec q = probe(0, j);
      const double scale_ij = cols[0].norm() + cols[j].norm();
      const double same = match(q, cols[0] + cols[j]) / scale_ij;
      const double opposite = match(q, cols[0] - cols[j]) / scale_ij;
      sign[j] = same <= opposite ? 1.0 : -1.0;
      worst_sign = std::max(worst_sign, std::min(same, opposite));
    }
    for (int i = 1; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const Vec q = probe(i, j);
        worst_sign = std::max(worst_sign, match(q, sign[i] * cols[i] + sign[j] * cols[j]) /
                                              (cols[i].norm() + cols[j].norm()));
      }
    rep.constants["sign_residual"] = worst_sign;
    if (worst_sign > sign_tol) {
      rep.notes.push_back(
          "sign resolution inconsistent: segment images are not those of a linear map applied to the difference "
          "body, which is the form of every monotone operator with a volume constraint");
      return res;
    }
    for (int i = 0; i < n; ++i) g.col(i) = sign[i] * cols[i];
  } catch (const std::exception& e) {
    rep.notes.push_back(std::string("segment images unavailable: ") + e.what());
    return res;
  }
  if (numerical_rank(g) < n) {
    rep.notes.push_back("reconstructed matrix is singular");
    return res;
  }

  const OperatorDescriptor model = OperatorDescriptor::linear(g, OperatorDescriptor::diff_body());
  struct Sample {
    double residual = 0.0;
    std::size_t dir = 0;
  };
  const auto samples = parallel_map(corpus.bodies.size(), opt.threads, [&](std::size_t i) {
    Sample s;
    const Body& k = corpus.bodies[i];
    if (k.ambient_dim() != n) throw GeometryError("recover: corpus dimension differs from n");
    const Body a = apply(op, k);
    const Body b = apply(model, k);
    const auto& dirs = check_directions(n);
    double diam = 0.0;
    for (const auto& u : dirs) diam = std::max(diam, support(a, u) + support(a, -u));
    if (!(diam > 0.0)) diam = 1.0;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      const double e = std::abs(support(a, dirs[d]) - support(b, dirs[d])) / diam;
      if (e > s.residual) s.residual = e, s.dir = d;
    }
    return s;
  });
  rep.residual = 0.0;
  if (!samples.empty()) {
    const std::size_t w = argmax(samples, [](const Sample& s) { return s.residual; });
    rep.residual = samples[w].residual;
    rep.witness = body_witness("largest support residual", w, corpus.bodies[w], check_directions(n)[samples[w].dir]);
  }
  rep.pass = rep.residual <= rep.tolerance;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rep.constants["g_" + std::to_string(i) + std::to_string(j)] = g(i, j);
  if (!rep.pass) rep.notes.push_back("support residual too large: the operator is not of the form g D");
  res.g = g;
  return res;
}

// ---------------------------------------------------------------------------
// Blend fit
// ---------------------------------------------------------------------------

FitResult fit_blend(const OperatorDescriptor& op, const Corpus& corpus, int n, const VerifyOptions& opt) {
  FitResult res;
  VerificationReport& rep = res.report;
  rep = leaf("fit_blend", kInf, opt.tol.fit_residual);
  Vec p1;
  try {
    p1 = p_of(op, Vec::Unit(n, 0));
  } catch (const std::exception& e) {
    rep.notes.push_back(std::string("segment image unavailable: ") + e.what());
    return res;
  }
  const double sum = p1.norm();
  Mat g = Mat::Identity(n, n);
  if (n == 2) {
    const double angle = std::atan2(p1(1), p1(0));  // in [0, pi) by the canonical sign
    g = rotation2(angle);
    rep.constants["angle"] = angle;
    res.g = g;
  }
  const Mat gt = g.transpose();

  struct Sample {
    bool symmetric = true;
    Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
    Eigen::Vector2d atb = Eigen::Vector2d::Zero();
    std::vector<double> y, x1, x2;
    double scale = 1.0;
  };
  const auto& dirs = check_directions(n);
  const auto samples = parallel_map(corpus.bodies.size(), opt.threads, [&](std::size_t i) {
    Sample s;
    const Body& k = corpus.bodies[i];
    if (k.ambient_dim() != n) throw GeometryError("fit: corpus dimension differs from n");
    const Body k0 = translate(k, -steiner_point(k));
    const Body k1 = reflect(k0);
    s.symmetric = rel_hausdorff(k0, k1) <= 1e-9;
    const Body img = apply(op, k);
    s.scale = std::max(radius_about_steiner(img), 1e-300);
    for (const auto& u : dirs) {
      const Vec v = gt * u;
      s.y.push_back(support(img, u));
      s.x1.push_back(support(k0, v));
      s.x2.push_back(support(k1, v));
      const Eigen::Vector2d row(s.x1.back(), s.x2.back());
      s.ata += row * row.transpose();
      s.atb += row * s.y.back();
    }
    return s;
  });

  Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
  Eigen::Vector2d atb = Eigen::Vector2d::Zero();
  int asymmetric = 0;
  for (const auto& s : samples) {
    if (s.symmetric) continue;
    ++asymmetric;
    ata += s.ata;
    atb += s.atb;
  }
  if (asymmetric > 0) {
    const Eigen::Vector2d ab = ata.ldlt().solve(atb);
    res.a = ab(0);
    res.b = ab(1);
  } else {
    res.identifiable = false;
    res.a = res.b = 0.5 * sum;
    rep.notes.push_back("no non-symmetric bodies: only a + b is determined; reporting a = b");
  }

  double worst = 0.0;
  std::size_t arg = 0, arg_dir = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    for (std::size_t d = 0; d < s.y.size(); ++d) {
      const double e = std::abs(s.y[d] - res.a * s.x1[d] - res.b * s.x2[d]) / s.scale;
      if (e > worst) worst = e, arg = i, arg_dir = d;
    }
  }
  rep.residual = worst;
  rep.constants["a"] = res.a;
  rep.constants["b"] = res.b;
  rep.constants["a_plus_b"] = sum;
  rep.constants["identifiable"] = res.identifiable ? 1.0 : 0.0;
  rep.constants["asymmetric_bodies"] = asymmetric;
  const bool negative = res.a < -opt.tol.fit_negative || res.b < -opt.tol.fit_negative;
  if (negative) rep.notes.push_back("negative weight: the operator is not a nonnegative blend");
  rep.pass = worst <= rep.tolerance && !negative;
  if (!samples.empty()) rep.witness = body_witness("largest fit residual", arg, corpus.bodies[arg], dirs[arg_dir]);
  if (n == 2) rep.notes.push_back("rotation angle taken in [0, pi); angle + pi with a and b swapped is the same operator");
  return res;
}

}  // namespace minkops
