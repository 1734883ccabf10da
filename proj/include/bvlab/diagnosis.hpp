#pragma once

// Membership diagnosis: partial trace plus a certificate issued relative to a
// registered comparator.

#include <optional>
#include <string>
#include <vector>

#include "bvlab/analysis.hpp"
#include "bvlab/comparators.hpp"
#include "bvlab/space_kind.hpp"

namespace bvlab {

enum class Verdict { ConvergedBound, Diverged, Inconclusive };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ConvergedBound: return "ConvergedBound";
    case Verdict::Diverged: return "Diverged";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> bound;          // ConvergedBound
  std::string comparator_id;            // empty if none
  std::string comparator_formula;
  Index onset = 0;
  Index crossing_index = 0;             // smallest n0 with domination on [n0, checked_until]; 0 if none
  Index checked_until = 0;
  std::optional<double> observed_sum;   // sum of compared terms over [onset, checked_until]
  std::optional<double> comparator_sum; // sum of comparator terms over the same range
  std::string note;
};

struct Diagnosis {
  SpaceKind space;
  PartialTrace trace;
  Certificate certificate;
};

inline constexpr double kCertificateTol = 1e-12;

namespace detail {

// The compared quantity t_1..t_M for the given space: p-th power terms for l^p,
// p-th power increments for bv_p, first-power increments for c/linf series
// bounds, plain term norms otherwise.
inline std::vector<double> compared_terms(const Seq& x, const SpaceKind& s, Index N,
                                          ComparatorKind kind) {
  const bool series = kind == ComparatorKind::DivergentSeries || kind == ComparatorKind::ConvergentSeries;
  switch (s.tag) {
    case SeqSpaceTag::Lp: {
      auto t = term_norms(x, N);
      for (double& v : t) v = power(v, s.p);
      return t;
    }
    case SeqSpaceTag::Bvp: {
      auto t = increment_norms(x, N);
      for (double& v : t) v = power(v, s.p);
      return t;
    }
    case SeqSpaceTag::C:
    case SeqSpaceTag::Linf:
      if (series) return increment_norms(x, N);
      return term_norms(x, N);
    case SeqSpaceTag::C0:
      return term_norms(x, N);
  }
  return {};
}

inline bool applies(ComparatorKind k, SeqSpaceTag t) {
  switch (k) {
    case ComparatorKind::DivergentSeries:
      return t == SeqSpaceTag::Lp || t == SeqSpaceTag::Bvp;
    case ComparatorKind::ConvergentSeries:
      return true;
    case ComparatorKind::Growth:
    case ComparatorKind::AnchorGrowth:
      return t == SeqSpaceTag::Linf || t == SeqSpaceTag::C || t == SeqSpaceTag::C0;
    case ComparatorKind::Floor:
    case ComparatorKind::DecayEnvelope:
      return t == SeqSpaceTag::C0;
    case ComparatorKind::Oscillation:
      return t == SeqSpaceTag::C || t == SeqSpaceTag::C0;
    case ComparatorKind::UniformBound:
      return t == SeqSpaceTag::Linf;
  }
  return false;
}

inline PartialTrace trace_for(const Seq& x, const SpaceKind& s, Index N) {
  switch (s.tag) {
    case SeqSpaceTag::Lp: return lp_partial_norm(x, s.p, N);
    case SeqSpaceTag::Bvp: return bvp_partial_norm(x, s.p, N);
    default: return sup_partial_norm(x, N);
  }
}

// Smallest n0 in [1, M] with t_n >= c_n (1 - tol) for all n in [n0, M];
// M + 1 if t_M already fails.
inline Index lower_crossing(const std::vector<double>& t, const std::function<double(Index)>& c) {
  Index n0 = t.size() + 1;
  for (Index n = t.size(); n >= 1; --n) {
    if (!(t[n - 1] >= c(n) * (1.0 - kCertificateTol))) break;
    n0 = n;
  }
  return n0;
}

inline Index upper_crossing(const std::vector<double>& t, const std::function<double(Index)>& c) {
  Index n0 = t.size() + 1;
  for (Index n = t.size(); n >= 1; --n) {
    if (!(t[n - 1] <= c(n) * (1.0 + kCertificateTol))) break;
    n0 = n;
  }
  return n0;
}

}  // namespace detail

/// Diagnoses membership of x in the space s over the horizon N.
///
/// Diverged and ConvergedBound are only issued through a comparator, with one
/// exception: a sequence of known finite length <= N is fully computed, so its
/// norm is exact and the verdict is ConvergedBound ("finite_support").
inline Diagnosis membership_diagnosis(const Seq& x, const SpaceKind& s, Index N,
                                      const std::optional<Comparator>& comparator = std::nullopt) {
  if (N < 2) throw ParameterError("diagnosis horizon must be at least 2");
  Diagnosis d{s, detail::trace_for(x, s, N), {}};
  Certificate& cert = d.certificate;
  cert.checked_until = N;

  if (!comparator) {
    if (x.known_length() && *x.known_length() < N) {
      cert.verdict = Verdict::ConvergedBound;
      cert.bound = d.trace.last();
      cert.comparator_id = "finite_support";
      cert.note = "sequence is zero past index " + std::to_string(*x.known_length()) +
                  "; the trace is the exact norm";
    } else {
      cert.note = "no comparator given";
    }
    return d;
  }

  const Comparator& cmp = *comparator;
  const ComparatorKind kind = cmp.info.kind;
  if (!detail::applies(kind, s.tag)) {
    throw ConfigError("comparator '" + cmp.id() + "' (" + comparator_kind_name(kind) +
                      ") does not apply to " + s.name());
  }
  cert.comparator_id = cmp.id();
  cert.comparator_formula = cmp.info.formula;
  cert.onset = cmp.onset;

  if (kind == ComparatorKind::Oscillation) {
    const auto need = static_cast<Index>(cmp.constant);
    std::optional<SpaceElement> a, b;
    Index switches = 0;
    int last = -1;  // 0 = a, 1 = b
    // along the anchor subsequence when one is given, otherwise every index
    std::vector<Index> where;
    if (!cmp.anchors.empty()) {
      for (Index j = cmp.onset; j <= cmp.anchors.size() && cmp.anchors[j - 1] <= N; ++j) {
        where.push_back(cmp.anchors[j - 1]);
      }
    } else {
      for (Index n = cmp.onset; n <= N; ++n) where.push_back(n);
    }
    for (Index n : where) {
      SpaceElement v = x(n);
      if (!a) {
        a = v;
        last = 0;
        continue;
      }
      int which = -1;
      if (v == *a) {
        which = 0;
      } else if (b && v == *b) {
        which = 1;
      } else if (!b) {
        b = v;
        which = 1;
      }
      if (which >= 0 && which != last) {
        ++switches;
        last = which;
      }
    }
    // visits alternate a, b, a, ...: the number of visits is switches + 1
    const Index visits = switches + 1;
    if (b && visits >= 2 * need) {
      cert.verdict = Verdict::Diverged;
      cert.crossing_index = cmp.onset;
      cert.note = "two distinct values recur alternately " + std::to_string(visits) +
                  " times; distance " + std::to_string(distance(*a, *b));
    } else {
      cert.note = "fewer than " + std::to_string(need) + " alternations of two values";
    }
    return d;
  }

  if (kind == ComparatorKind::AnchorGrowth) {
    Index checked = 0;
    bool ok = true;
    for (Index j = 1; j <= cmp.anchors.size(); ++j) {
      const Index i = cmp.anchors[j - 1];
      if (i > N) break;
      if (j < cmp.onset) continue;
      ++checked;
      if (!(norm(x(i)) >= cmp.term(j) * (1.0 - kCertificateTol))) {
        ok = false;
        cert.note = "anchor " + std::to_string(j) + " below c*j^e";
        break;
      }
    }
    if (ok && checked >= 2) {
      cert.verdict = Verdict::Diverged;
      cert.crossing_index = cmp.onset;
      cert.note = std::to_string(checked) + " anchors dominate c*j^e";
    } else if (ok) {
      cert.note = "fewer than two anchors inside the horizon";
    }
    return d;
  }

  const auto t = detail::compared_terms(x, s, N, kind);
  const Index M = t.size();
  if (M < cmp.onset) {
    cert.note = "horizon ends before the comparator onset";
    return d;
  }

  auto range_sums = [&](const std::function<double(Index)>& c) {
    CompensatedSum obs, ref;
    for (Index n = cmp.onset; n <= M; ++n) {
      obs += t[n - 1];
      ref += c(n);
    }
    cert.observed_sum = obs.value();
    cert.comparator_sum = ref.value();
  };

  switch (kind) {
    case ComparatorKind::DivergentSeries:
    case ComparatorKind::Growth: {
      const Index n0 = detail::lower_crossing(t, cmp.term);
      cert.crossing_index = n0 <= M ? n0 : 0;
      cert.checked_until = M;
      if (kind == ComparatorKind::DivergentSeries) range_sums(cmp.term);
      if (n0 <= cmp.onset) {
        cert.verdict = Verdict::Diverged;
        cert.note = "term-by-term domination on [" + std::to_string(n0) + ", " + std::to_string(M) + "]";
      } else {
        cert.note = "domination fails at index " + std::to_string(n0 - 1);
      }
      break;
    }
    case ComparatorKind::Floor: {
      const double c = cmp.constant;
      const Index n0 = detail::lower_crossing(t, [c](Index) { return c; });
      cert.crossing_index = n0 <= M ? n0 : 0;
      if (n0 <= cmp.onset) {
        cert.verdict = Verdict::Diverged;
        cert.note = "terms stay above the floor";
      } else {
        cert.note = "floor fails at index " + std::to_string(n0 - 1);
      }
      break;
    }
    case ComparatorKind::ConvergentSeries: {
      const Index n0 = detail::upper_crossing(t, cmp.term);
      cert.crossing_index = n0 <= M ? n0 : 0;
      cert.checked_until = M;
      range_sums(cmp.term);
      if (n0 > cmp.onset) {
        cert.note = "upper domination fails at index " + std::to_string(n0 - 1);
        break;
      }
      CompensatedSum head;
      for (Index n = 1; n < cmp.onset; ++n) head += t[n - 1];
      const double total = head.value() + cmp.tail_bound(cmp.onset);
      double bound = 0.0;
      switch (s.tag) {
        case SeqSpaceTag::Lp: bound = power(total, 1.0 / s.p); break;
        case SeqSpaceTag::Bvp: bound = norm(x(1)) + power(total, 1.0 / s.p); break;
        case SeqSpaceTag::C0: bound = d.trace.last(); break;
        case SeqSpaceTag::C:
        case SeqSpaceTag::Linf: bound = norm(x(1)) + total; break;
      }
      const bool capped = d.trace.last() <= bound * (1.0 + kCertificateTol);
      if (capped) {
        cert.verdict = Verdict::ConvergedBound;
        cert.bound = bound;
        cert.note = "terms dominated by a convergent series from the onset";
      } else {
        cert.note = "trace exceeds the analytic bound";
      }
      break;
    }
    case ComparatorKind::DecayEnvelope: {
      const Index n0 = detail::upper_crossing(t, cmp.term);
      cert.crossing_index = n0 <= M ? n0 : 0;
      if (n0 <= cmp.onset) {
        cert.verdict = Verdict::ConvergedBound;
        cert.bound = d.trace.last();
        cert.note = "terms below c*n^-e";
      } else {
        cert.note = "envelope fails at index " + std::to_string(n0 - 1);
      }
      break;
    }
    case ComparatorKind::UniformBound: {
      const double m = cmp.constant;
      const Index n0 = detail::upper_crossing(t, [m](Index) { return m; });
      cert.crossing_index = n0 <= M ? n0 : 0;
      if (n0 <= cmp.onset) {
        cert.verdict = Verdict::ConvergedBound;
        cert.bound = std::max(m, d.trace.last());
        cert.note = "terms below the uniform bound";
      } else {
        cert.note = "uniform bound fails at index " + std::to_string(n0 - 1);
      }
      break;
    }
    default: break;
  }
  return d;
}

inline Diagnosis membership_diagnosis(const Seq& x, const SpaceKind& s, Index N, const std::string& comparator_id,
                                      const std::map<std::string, double>& params = {}) {
  return membership_diagnosis(x, s, N, make_comparator(comparator_id, params));
}

}  // namespace bvlab
