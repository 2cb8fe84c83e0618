#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "minkops/operators.hpp"
#include "minkops/random.hpp"
#include "minkops/report.hpp"

namespace minkops {

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

/// Counts per body family. Polygons, triangles and symmetric bodies are
/// planar; zonotopes and segments live in R^dim.
struct CorpusSpec {
  int polygons = 0;
  int triangles = 0;
  int symmetric = 0;
  int zonotopes = 0;
  int segments = 0;
  int dim = 2;
  int max_generators = 6;

  /// "polygons:20,triangles:10,dim:2"; unknown keys and negative counts throw.
  static CorpusSpec parse(const std::string& text);
  std::string to_string() const;
  Json to_json() const;
  int total() const { return polygons + triangles + symmetric + zonotopes + segments; }
};

struct Corpus {
  std::uint64_t seed = 0;
  CorpusSpec spec;
  std::vector<Body> bodies;
};

/// Deterministic in (spec, seed); each body draws from its own forked stream.
Corpus make_corpus(const CorpusSpec& spec, std::uint64_t seed);
Json corpus_to_json(const Corpus& c);

/// Random rotations (det +1) from QR of Gaussian matrices.
std::vector<Mat> random_rotations(int n, int count, std::uint64_t seed);
Mat rotation2(double angle);

/// Valid random table on `grid` nodes: log rho is a short Fourier series with
/// amplitude `rho_amp`; the lift is theta plus a periodic term whose
/// derivative stays above 1 - lift_amp, shifted by a random offset and
/// reversed when `reverse` is set. `frequency` sets the highest harmonic.
RhoPiTable random_rho_pi_table(int grid, std::uint64_t seed, double rho_amp = 0.3, double lift_amp = 0.5,
                               int frequency = 2, bool reverse = false);

// ---------------------------------------------------------------------------
// Parallel evaluation
// ---------------------------------------------------------------------------

/// 0 selects hardware parallelism.
int resolve_threads(int requested, std::size_t work);

/// f(0..count-1) evaluated on a thread pool; results are returned in index
/// order and the exception of the lowest failing index is rethrown.
template <class F>
auto parallel_map(std::size_t count, int threads, F&& f) {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<std::optional<R>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int t = resolve_threads(threads, count);
  if (t <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

struct VerifyOptions {
  Tolerances tol{};
  int threads = 0;
  std::uint64_t seed = 0;  // per-check randomness (translations, nested pairs)
};

/// V(DK)/V(K) against [2^n, binom(2n, n)]. Throws GeometryError when V(K) = 0.
VerificationReport rs_check(const Body& k, const Tolerances& tol = kDefaultTolerances);
/// rs_check over the full-dimensional bodies of the corpus.
VerificationReport rs_corpus_check(const Corpus& corpus, const VerifyOptions& opt = {});

/// Empirical VC constants over the full-dimensional bodies of the corpus.
/// When the operator declares closed-form constants a subcheck tests that the
/// empirical bracket lies inside them.
VerificationReport vc_estimate(const OperatorDescriptor& op, const Corpus& corpus, const VerifyOptions& opt = {});

/// Measured bracket of outer o inner against the product of the factor
/// brackets; the outer factor is measured on the corpus and on its image
/// under the inner factor.
VerificationReport vc_composition_check(const OperatorDescriptor& outer, const OperatorDescriptor& inner,
                                        const Corpus& corpus, const VerifyOptions& opt = {});

/// Additivity, translation invariance, point annihilation and dimension
/// preservation as subchecks. Operator exceptions count as failures.
VerificationReport check_operator_axioms(const OperatorDescriptor& op, const Corpus& corpus,
                                         const VerifyOptions& opt = {});

/// Phi(-K) = Phi(K) and Phi(K) = -Phi(K).
VerificationReport evenness_test(const OperatorDescriptor& op, const Corpus& corpus, const VerifyOptions& opt = {});

/// Support dominance h(Phi M, u) <= h(Phi K, u) + margin over nested pairs
/// M subset K built inside each corpus body. With `weak`, the pairs are
/// K subset K + P with P origin-symmetric, so both share the Steiner point.
VerificationReport monotonicity_test(const OperatorDescriptor& op, const Corpus& corpus,
                                     const VerifyOptions& opt = {}, bool weak = false);

/// Hausdorff distance between Phi(gK) and g Phi(K), relative to the body scale.
/// Throws GeometryError if a matrix is not orthogonal within 1e-12.
VerificationReport equivariance_test(const OperatorDescriptor& op, const std::vector<Mat>& rotations,
                                     const Corpus& corpus, const VerifyOptions& opt = {});

/// Ratios d(pi E, pi F) / d(E, F) over random line pairs in R^n; half the
/// pairs are close (angle below 1e-2). Constants k1_hat, k2_hat.
VerificationReport bilip_estimate(const OperatorDescriptor& op, int n, int pair_count, std::uint64_t seed,
                                  const VerifyOptions& opt = {});

struct RecoverResult {
  std::optional<Mat> g;  // up to a global sign
  VerificationReport report;
};

/// Reconstructs g with op = g o D from segment images and measures the
/// support residual over the corpus. A failed sign resolution is a failed
/// report without g.
RecoverResult recover_gD(const OperatorDescriptor& op, const Corpus& corpus, int n, const VerifyOptions& opt = {});

struct FitResult {
  double a = 0.0;
  double b = 0.0;
  std::optional<Mat> g;   // n = 2: the fitted rotation
  bool identifiable = true;
  VerificationReport report;
};

/// Least-squares fit of op = g (a (K - st K) + b (-K + st K)). In the plane g
/// is the rotation by the angle of p(e_1) in [0, pi); the fit with g replaced
/// by -g and (a, b) swapped is the same operator. Without non-symmetric
/// bodies only a + b is determined and a = b is reported.
FitResult fit_blend(const OperatorDescriptor& op, const Corpus& corpus, int n, const VerifyOptions& opt = {});

}  // namespace minkops
