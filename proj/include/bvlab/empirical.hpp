#pragma once

// Sample-based evidence for or against a generator condition. Every
// refutation carries an explicit witness; nothing here proves a condition.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bvlab/conditions.hpp"
#include "bvlab/generators.hpp"
#include "bvlab/holder.hpp"

namespace bvlab {

struct EmpiricalConfig {
  ClassifyConfig classify;        // alpha is taken from the condition
  double power_L = 1.0;           // candidate L for the power bounds at 0
  double bound_M = 1.0;           // candidate bound for the boundedness conditions
  double constant_tol = 0.0;      // ||f(u) - f(v)|| above this refutes constancy
  std::vector<SpaceElement> continuity_witness;  // u_1, u_2, ..., u_k -> limit (last entry)
  double continuity_gap = 1e-3;
};

struct EmpiricalCheck {
  EmpiricalVerdict verdict = EmpiricalVerdict::ConsistentWith;
  std::optional<Pair> witness;
  std::string detail;
};

namespace detail {

inline std::vector<SpaceElement> sample_points(const Generator& f, const EmpiricalConfig& cfg, double radius,
                                               std::uint64_t salt) {
  Sampler rng(cfg.classify.seed ^ (0x9e3779b97f4a7c15ULL * salt));
  std::vector<SpaceElement> pts{SpaceElement::zero(f.space)};
  for (std::size_t i = 0; i < cfg.classify.pairs; ++i) pts.push_back(rng.point(f.space, radius));
  for (const auto& [kind, family] : f.witnesses) {
    for (const auto& [u, w] : family(1.0, radius, cfg.bound_M)) {
      pts.push_back(u);
      pts.push_back(w);
    }
  }
  return pts;
}

// sup ||f(u)|| over points within radius (all points when radius is inf).
inline EmpiricalCheck check_bound(const Generator& f, const std::vector<SpaceElement>& pts, double radius,
                                  double M) {
  EmpiricalCheck out;
  double worst = -1.0;
  for (const auto& u : pts) {
    if (norm(u) > radius) continue;
    const double v = norm(eval_generator(f, u));
    if (v > worst) {
      worst = v;
      if (v > M * (1.0 + 1e-12)) out.witness = Pair{u, u};
    }
  }
  if (out.witness) {
    out.verdict = EmpiricalVerdict::RefutedByWitness;
    out.detail = "||f(u)|| = " + std::to_string(worst) + " exceeds M = " + std::to_string(M);
  } else {
    out.detail = "sup ||f(u)|| over samples = " + std::to_string(worst);
  }
  return out;
}

// ||f(u) - f(w)|| <= L (||u||^e + ||w||^e) on B(0, delta); one_sided fixes w = 0.
// Refuted only if the candidate fails for every delta on the grid.
inline EmpiricalCheck check_power(const Generator& f, const EmpiricalConfig& cfg, double e, bool one_sided) {
  EmpiricalCheck out;
  out.verdict = EmpiricalVerdict::RefutedByWitness;
  std::vector<double> deltas = cfg.classify.deltas;
  for (int k = 1; k <= 8; ++k) deltas.push_back(std::pow(10.0, -k));
  const SpaceElement zero = SpaceElement::zero(f.space);
  const SpaceElement f0 = eval_generator(f, zero);
  std::uint64_t salt = 1;
  for (double delta : deltas) {
    Sampler rng(cfg.classify.seed + salt++);
    std::optional<Pair> bad;
    for (std::size_t i = 0; i < cfg.classify.pairs && !bad; ++i) {
      SpaceElement u = rng.point(f.space, delta);
      SpaceElement w = one_sided ? zero : rng.point(f.space, delta);
      const double lhs = one_sided ? distance(eval_generator(f, u), f0) : distance(eval_generator(f, u), eval_generator(f, w));
      const double rhs = cfg.power_L * (power(norm(u), e) + (one_sided ? 0.0 : power(norm(w), e)));
      if (lhs > rhs * (1.0 + 1e-12)) bad = Pair{u, w};
    }
    if (!bad) {
      out.verdict = EmpiricalVerdict::ConsistentWith;
      out.witness.reset();
      out.detail = "power bound holds on samples in B(0, " + std::to_string(delta) + ")";
      return out;
    }
    out.witness = bad;
  }
  out.detail = "power bound fails at every delta on the grid";
  return out;
}

inline EmpiricalCheck check_constant(const Generator& f, const std::vector<SpaceElement>& pts, double tol,
                                     bool zero) {
  EmpiricalCheck out;
  const SpaceElement ref = zero ? SpaceElement::zero(f.space) : eval_generator(f, pts.front());
  for (const auto& u : pts) {
    if (distance(eval_generator(f, u), ref) > tol) {
      out.verdict = EmpiricalVerdict::RefutedByWitness;
      out.witness = Pair{pts.front(), u};
      out.detail = zero ? "f(u) != 0" : "f takes two different values";
      return out;
    }
  }
  out.detail = "constant on " + std::to_string(pts.size()) + " samples";
  return out;
}

inline EmpiricalCheck from_regimes(const ClassificationReport& rep, HolderRegime kind, bool need_all) {
  EmpiricalCheck out;
  bool any = false, all = true;
  std::size_t n = 0;
  for (const auto& r : rep.regimes) {
    if (r.kind != kind) continue;
    ++n;
    const bool refuted = r.verdict == EmpiricalVerdict::RefutedByWitness;
    if (refuted && !out.witness) out.witness = r.estimate.witness;
    any = any || refuted;
    all = all && refuted;
  }
  if (n == 0) return {EmpiricalVerdict::NotCheckable, std::nullopt, "no " + regime_name(kind) + " regime configured"};
  const bool refuted = need_all ? all : any;
  out.verdict = refuted ? EmpiricalVerdict::RefutedByWitness : EmpiricalVerdict::ConsistentWith;
  if (!refuted) out.witness.reset();
  out.detail = regime_name(kind) + " constant " + (refuted ? "violated" : "respected") + " on samples";
  return out;
}

inline EmpiricalCheck both(EmpiricalCheck a, EmpiricalCheck b) {
  if (a.verdict == EmpiricalVerdict::RefutedByWitness) return a;
  if (b.verdict == EmpiricalVerdict::RefutedByWitness) return b;
  if (a.verdict == EmpiricalVerdict::NotCheckable) return a;
  return b;
}

}  // namespace detail

/// Checks cond against f on samples. ContinuousOnE is not checkable unless a
/// witness sequence is supplied in cfg.continuity_witness.
inline EmpiricalCheck check_condition_empirically(const GenCondition& cond, const Generator& f,
                                                  const EmpiricalConfig& cfg) {
  using G = GenTag;
  const double inf = std::numeric_limits<double>::infinity();
  const double R = cfg.classify.sample_radius;
  auto continuity = [&]() -> EmpiricalCheck {
    if (cfg.continuity_witness.size() < 2) {
      return {EmpiricalVerdict::NotCheckable, std::nullopt, "continuity needs a witness sequence"};
    }
    const SpaceElement& limit = cfg.continuity_witness.back();
    const SpaceElement fl = eval_generator(f, limit);
    double gap = inf;
    for (std::size_t i = 0; i + 1 < cfg.continuity_witness.size(); ++i) {
      gap = std::min(gap, distance(eval_generator(f, cfg.continuity_witness[i]), fl));
    }
    if (gap >= cfg.continuity_gap) {
      return {EmpiricalVerdict::RefutedByWitness, Pair{cfg.continuity_witness.front(), limit},
              "||f(u_n) - f(u)|| >= " + std::to_string(gap) + " along the witness sequence"};
    }
    return {EmpiricalVerdict::ConsistentWith, std::nullopt, "f(u_n) approaches f(u) along the witness"};
  };
  auto holder = [&](HolderRegime kind, bool need_all) {
    ClassifyConfig c = cfg.classify;
    c.alpha = *cond.exponent;
    c.include_global = false;
    if (kind != HolderRegime::Strg) c.deltas.clear();
    if (kind != HolderRegime::Bnd) c.radii.clear();
    if (kind != HolderRegime::Comp) c.clouds.clear();
    return detail::from_regimes(classify_generator(f, c), kind, need_all);
  };
  auto bounded_on = [&](double radius) {
    return detail::check_bound(f, detail::sample_points(f, cfg, std::isinf(radius) ? R : radius, 7), radius,
                               cfg.bound_M);
  };
  auto locally_bounded = [&]() {
    EmpiricalCheck out;
    for (double r : cfg.classify.radii) {
      out = detail::both(out, bounded_on(r));
      if (out.verdict == EmpiricalVerdict::RefutedByWitness) break;
    }
    return out;
  };

  switch (cond.tag) {
    case G::ZeroMap:
      return detail::check_constant(f, detail::sample_points(f, cfg, R, 1), cfg.constant_tol, true);
    case G::ConstantMap:
      return detail::check_constant(f, detail::sample_points(f, cfg, R, 1), cfg.constant_tol, false);
    case G::LocallyConstantAtZero: {
      // refuted if some point within delta/2 of 0 moves f, for every delta tried
      EmpiricalCheck out{EmpiricalVerdict::RefutedByWitness, std::nullopt, "f moves arbitrarily close to 0"};
      const SpaceElement zero = SpaceElement::zero(f.space);
      const SpaceElement f0 = eval_generator(f, zero);
      Sampler rng(cfg.classify.seed);
      for (int k = 0; k <= 12; ++k) {
        const double delta = std::pow(10.0, -k);
        bool moved = false;
        for (std::size_t i = 0; i < 16 && !moved; ++i) {
          SpaceElement u = rng.point(f.space, 0.5 * delta);
          if (distance(eval_generator(f, u), f0) > cfg.constant_tol) {
            moved = true;
            if (!out.witness) out.witness = Pair{zero, u};
          }
        }
        if (!moved) return {EmpiricalVerdict::ConsistentWith, std::nullopt,
                            "f is constant on samples within " + std::to_string(0.5 * delta) + " of 0"};
      }
      return out;
    }
    case G::PowerBoundAtZero:
      return detail::check_power(f, cfg, *cond.exponent, true);
    case G::LocallyBoundedPlusPowerBound:
      return detail::both(locally_bounded(), detail::check_power(f, cfg, *cond.exponent, false));
    case G::HolderStrg:
      return holder(HolderRegime::Strg, true);
    case G::HolderBounded:
      return holder(HolderRegime::Bnd, false);
    case G::HolderCompact:
      return holder(HolderRegime::Comp, false);
    case G::BoundedOnE:
      return bounded_on(inf);
    case G::BoundedOnCompact: {
      EmpiricalCheck out;
      for (const auto& cloud : cfg.classify.clouds) {
        out = detail::both(out, detail::check_bound(f, cloud, inf, cfg.bound_M));
      }
      if (cfg.classify.clouds.empty()) out = {EmpiricalVerdict::NotCheckable, std::nullopt, "no compact clouds"};
      return out;
    }
    case G::LocallyBounded:
      return locally_bounded();
    case G::ContinuousOnE:
      return continuity();
    case G::LocallyBoundedAndContinuous:
      return detail::both(locally_bounded(), continuity());
    case G::BoundedAndContinuous:
      return detail::both(bounded_on(inf), continuity());
  }
  return {EmpiricalVerdict::NotCheckable, std::nullopt, "unknown condition"};
}

}  // namespace bvlab
