#pragma once

// Empirical Hoelder constants, the explicit constants relating the four
// Hoelder classes, and seeded sampling-based classification.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bvlab/errors.hpp"
#include "bvlab/generators.hpp"
#include "bvlab/numeric.hpp"
#include "bvlab/space.hpp"

namespace bvlab {

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("Hoelder exponent must be positive");
  if (alpha > 1.0) {
    throw ParameterError("Hoelder exponents above 1 admit only constant maps; use alpha in (0, 1]");
  }
}

struct HolderEstimate {
  double alpha = 1.0;
  double delta = std::numeric_limits<double>::infinity();
  double L_hat = 0.0;
  std::optional<Pair> witness;
  std::size_t pairs_checked = 0;

  bool inconclusive() const { return pairs_checked == 0; }
};

/// max over pairs with 0 < ||u - w|| <= delta of ||f(u) - f(w)|| / ||u - w||^alpha.
/// The first pair attaining the maximum is the witness.
inline HolderEstimate empirical_holder_constant(const Generator& f, const std::vector<Pair>& pairs, double alpha,
                                                double delta = std::numeric_limits<double>::infinity()) {
  check_alpha(alpha);
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  HolderEstimate est;
  est.alpha = alpha;
  est.delta = delta;
  for (const auto& [u, w] : pairs) {
    const double d = distance(u, w);
    if (d == 0.0 || d > delta) continue;
    const double ratio = distance(eval_generator(f, u), eval_generator(f, w)) / power(d, alpha);
    if (est.pairs_checked == 0 || ratio > est.L_hat) {
      est.L_hat = ratio;
      est.witness = Pair{u, w};
    }
    ++est.pairs_checked;
  }
  return est;
}

/// Lambda = max{L, 2 M delta^-alpha}: a global constant for a bounded strg map.
inline double global_from_bounded(double L, double delta, double M, double alpha) {
  check_alpha(alpha);
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (!(L >= 0.0) || !(M >= 0.0)) throw ParameterError("L and M must be nonnegative");
  return std::max(L, 2.0 * M * power(delta, -alpha));
}

struct ChainConstant {
  double L_eta;
  std::uint64_t k;
};

/// L_eta = L k^(1-alpha), k = ceil(eta/delta): a constant for pairs at
/// distance <= eta from one for pairs at distance <= delta. Quotients within
/// 1e-12 of an integer are rounded to it before the ceiling.
inline ChainConstant chain_constant(double L, double delta, double eta, double alpha) {
  check_alpha(alpha);
  if (!(delta > 0.0) || !(eta > 0.0)) throw ParameterError("delta and eta must be positive");
  if (!(L >= 0.0)) throw ParameterError("L must be nonnegative");
  if (delta >= eta) return {L, 1};
  const double ratio = eta / delta;
  const double nearest = std::round(ratio);
  const double k = std::abs(ratio - nearest) <= 1e-12 * ratio ? nearest : std::ceil(ratio);
  if (k > 9.0e15) throw ParameterError("eta/delta is too large");
  return {L * power(k, 1.0 - alpha), static_cast<std::uint64_t>(k)};
}

/// ||f(0)|| + (1 + r/delta) L delta^alpha: a bound for ||f|| on the r-ball.
inline double ball_bound_from_strg(double L, double delta, double alpha, double r, double f0_norm) {
  check_alpha(alpha);
  if (!(delta > 0.0) || !(r > 0.0)) throw ParameterError("delta and r must be positive");
  return f0_norm + (1.0 + r / delta) * L * power(delta, alpha);
}

// ---------------------------------------------------------------------------
// Classification

/// Deterministic uniform doubles in [0, 1) from a 64-bit Mersenne twister,
/// independent of the standard library's distribution implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

  /// A point of s with norm at most radius.
  SpaceElement point(const SpaceInstance& s, double radius) {
    SpaceElement dir = direction(s);
    return (radius * uniform()) * dir;
  }

  /// A point within distance at most delta of u.
  SpaceElement near(const SpaceElement& u, double delta) {
    SpaceElement dir = direction(u.space());
    return lin(1.0, u, delta * uniform(), dir);
  }

 private:
  // A unit vector.
  SpaceElement direction(const SpaceInstance& s) {
    for (;;) {
      SpaceElement v;
      if (!s.sparse()) {
        std::vector<double> c(s.dim);
        for (double& x : c) x = uniform(-1.0, 1.0);
        v = SpaceElement::dense(s, std::move(c));
      } else {
        const std::size_t count = 1 + below(4);
        std::vector<std::size_t> sup;
        std::vector<double> val;
        for (std::size_t k = 1; k <= 8 && sup.size() < count; ++k) {
          if (below(2) == 0 || 8 - k < count - sup.size()) {
            sup.push_back(k);
            val.push_back(uniform(-1.0, 1.0));
          }
        }
        v = SpaceElement::sparse(s, std::move(sup), std::move(val));
      }
      const double n = norm(v);
      if (n > 1e-3) return (1.0 / n) * v;
    }
  }

  std::mt19937_64 rng_;
};

struct ClassifyConfig {
  double alpha = 1.0;
  std::vector<double> deltas{1.0};           // strg regimes
  std::vector<double> radii{1.0};            // bnd regimes
  std::vector<std::vector<SpaceElement>> clouds;  // comp regimes: finite point clouds
  bool include_global = true;
  double sample_radius = 10.0;               // where global/strg pairs are drawn
  std::size_t pairs = 2000;
  std::uint64_t seed = 1;
  std::map<HolderRegime, double> candidates; // candidate constant per regime
};

enum class EmpiricalVerdict { ConsistentWith, RefutedByWitness, NotCheckable };

inline std::string empirical_verdict_name(EmpiricalVerdict v) {
  switch (v) {
    case EmpiricalVerdict::ConsistentWith: return "consistent-with";
    case EmpiricalVerdict::RefutedByWitness: return "refuted-by-witness";
    case EmpiricalVerdict::NotCheckable: return "not-checkable";
  }
  return "?";
}

struct RegimeResult {
  HolderRegime kind;
  double delta_or_radius;  // inf for global, cloud index for comp
  double candidate;
  HolderEstimate estimate;
  EmpiricalVerdict verdict;
};

struct ClassificationReport {
  std::string generator_id;
  double alpha;
  std::vector<RegimeResult> regimes;
};

namespace detail {

inline RegimeResult judge(const Generator& f, HolderRegime kind, double scale, double candidate,
                          const std::vector<Pair>& pairs, double alpha, double delta) {
  RegimeResult r{kind, scale, candidate, empirical_holder_constant(f, pairs, alpha, delta),
                 EmpiricalVerdict::ConsistentWith};
  if (r.estimate.L_hat > candidate * (1.0 + 1e-12)) r.verdict = EmpiricalVerdict::RefutedByWitness;
  return r;
}

inline void append_witnesses(const Generator& f, HolderRegime kind, double alpha, double scale, double candidate,
                             std::vector<Pair>& pairs) {
  auto it = f.witnesses.find(kind);
  if (it == f.witnesses.end()) return;
  for (auto& p : it->second(alpha, scale, candidate)) pairs.push_back(std::move(p));
}

}  // namespace detail

/// Samples pairs per regime, adds the generator's witness families, and
/// compares each empirical constant with the candidate for that regime.
/// Results are ordered global, strg (by delta), bnd (by radius), comp (by cloud).
inline ClassificationReport classify_generator(const Generator& f, const ClassifyConfig& cfg) {
  check_alpha(cfg.alpha);
  ClassificationReport rep{f.id, cfg.alpha, {}};
  Sampler rng(cfg.seed);
  auto candidate = [&](HolderRegime k) {
    auto it = cfg.candidates.find(k);
    if (it == cfg.candidates.end()) {
      throw ConfigError("no candidate constant for regime " + regime_name(k));
    }
    return it->second;
  };
  const double inf = std::numeric_limits<double>::infinity();

  if (cfg.include_global) {
    const double L = candidate(HolderRegime::Global);
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < cfg.pairs; ++i) {
      SpaceElement u = rng.point(f.space, cfg.sample_radius);
      pairs.emplace_back(u, rng.point(f.space, cfg.sample_radius));
    }
    detail::append_witnesses(f, HolderRegime::Global, cfg.alpha, inf, L, pairs);
    rep.regimes.push_back(detail::judge(f, HolderRegime::Global, inf, L, pairs, cfg.alpha, inf));
  }
  for (double delta : cfg.deltas) {
    if (!(delta > 0.0)) throw ConfigError("strg delta must be positive");
    const double L = candidate(HolderRegime::Strg);
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < cfg.pairs; ++i) {
      SpaceElement u = rng.point(f.space, cfg.sample_radius);
      pairs.emplace_back(u, rng.near(u, delta));
    }
    detail::append_witnesses(f, HolderRegime::Strg, cfg.alpha, delta, L, pairs);
    rep.regimes.push_back(detail::judge(f, HolderRegime::Strg, delta, L, pairs, cfg.alpha, delta));
  }
  for (double r : cfg.radii) {
    if (!(r > 0.0)) throw ConfigError("bnd radius must be positive");
    const double L = candidate(HolderRegime::Bnd);
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < cfg.pairs; ++i) {
      SpaceElement u = rng.point(f.space, r);
      pairs.emplace_back(u, rng.point(f.space, r));
    }
    std::vector<Pair> extra;
    detail::append_witnesses(f, HolderRegime::Bnd, cfg.alpha, r, L, extra);
    for (auto& p : extra) {
      if (norm(p.first) <= r && norm(p.second) <= r) pairs.push_back(std::move(p));
    }
    rep.regimes.push_back(detail::judge(f, HolderRegime::Bnd, r, L, pairs, cfg.alpha, inf));
  }
  for (std::size_t c = 0; c < cfg.clouds.size(); ++c) {
    const double L = candidate(HolderRegime::Comp);
    const auto& cloud = cfg.clouds[c];
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      for (std::size_t j = i + 1; j < cloud.size(); ++j) pairs.emplace_back(cloud[i], cloud[j]);
    }
    rep.regimes.push_back(
        detail::judge(f, HolderRegime::Comp, static_cast<double>(c), L, pairs, cfg.alpha, inf));
  }
  return rep;
}

}  // namespace bvlab
