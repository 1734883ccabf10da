#pragma once

// The composition operator C_f(x)(n) = f(x(n)) and the acting and
// boundedness experiments built on it.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "bvlab/conditions.hpp"
#include "bvlab/diagnosis.hpp"
#include "bvlab/embedding.hpp"
#include "bvlab/generators.hpp"
#include "bvlab/rulebook.hpp"
#include "bvlab/sequence.hpp"

namespace bvlab {

/// C_f(x), evaluated lazily. The result is finite only when x is and f(0) = 0.
inline Seq apply_composition(const Generator& f, const Seq& x) {
  if (!(x.space() == f.space)) {
    throw StructuralError("generator " + f.id + " on " + f.space.name() + " applied to a sequence over " +
                          x.space().name());
  }
  std::optional<Index> len;
  if (x.known_length()) {
    try {
      if (eval_generator(f, SpaceElement::zero(f.space)).is_zero()) len = x.known_length();
    } catch (const DomainError&) {
      // f undefined at 0: the zero tail fails when it is reached
    }
  }
  auto g = std::make_shared<const Generator>(f);
  return Seq::from_rule(
      f.space, [g, x](Index n) { return eval_generator(*g, x(n)); }, len);
}

/// f after g, both on the same space.
inline Generator compose(const Generator& f, const Generator& g) {
  if (!(f.space == g.space)) throw StructuralError("cannot compose generators on different spaces");
  Generator h;
  h.id = f.id + "∘" + g.id;
  h.space = f.space;
  h.eval = [f, g](const SpaceElement& u) { return eval_generator(f, eval_generator(g, u)); };
  h.notes = "composition";
  return h;
}

// ---------------------------------------------------------------------------
// Closed-form norms of images of alternating blocks

/// The bv_q norm of (a_lead..., u, w, u, w, ..., u, w, 0, 0, ...) mapped through
/// f, from the four distinct values alone. With lead zeros the jumps are
/// f(0)->f(u) once, f(u)->f(w) m times, f(w)->f(u) m-1 times, f(w)->f(0) once.
inline double altblock_image_bvq(const Generator& f, const SpaceElement& u, const SpaceElement& w, Index m,
                                 Index lead_zeros, double q) {
  detail::check_exponent(q);
  if (m == 0) throw ParameterError("block count must be positive");
  const SpaceElement f0 = eval_generator(f, SpaceElement::zero(f.space));
  const SpaceElement fu = eval_generator(f, u);
  const SpaceElement fw = eval_generator(f, w);
  const double uw = power(distance(fu, fw), q);
  const double wu = uw;
  const double w0 = power(distance(fw, f0), q);
  CompensatedSum acc;
  acc += static_cast<double>(m) * uw;
  acc += static_cast<double>(m - 1) * wu;
  acc += w0;
  double head = norm(fu);
  if (lead_zeros > 0) {
    head = norm(f0);
    acc += power(distance(f0, fu), q);
  }
  return head + power(acc.value(), 1.0 / q);
}

/// The sup norm of the same image.
inline double altblock_image_sup(const Generator& f, const SpaceElement& u, const SpaceElement& w) {
  const double f0 = norm(eval_generator(f, SpaceElement::zero(f.space)));
  const double m = std::max(norm(eval_generator(f, u)), norm(eval_generator(f, w)));
  return std::max(m, f0);
}

// ---------------------------------------------------------------------------
// Acting experiments

enum class Expectation { Acts, FailsToAct, Bounded, Unbounded };

inline std::string expectation_name(Expectation e) {
  switch (e) {
    case Expectation::Acts: return "Acts";
    case Expectation::FailsToAct: return "FailsToAct";
    case Expectation::Bounded: return "Bounded";
    case Expectation::Unbounded: return "Unbounded";
  }
  return "?";
}

inline Expectation parse_expectation(const std::string& s) {
  if (s == "Acts") return Expectation::Acts;
  if (s == "FailsToAct") return Expectation::FailsToAct;
  if (s == "Bounded") return Expectation::Bounded;
  if (s == "Unbounded") return Expectation::Unbounded;
  throw ConfigError("unknown expectation '" + s + "'");
}

struct GeneratorSpec {
  std::string id;
  std::map<std::string, double> params;

  Generator build(std::optional<SpaceInstance> space = std::nullopt) const {
    return catalog_generator(id, params, space);
  }
};

struct ComparatorSpec {
  std::string id;
  std::map<std::string, double> params;
};

/// A catalog sequence, or the embedding of a finite scalar list.
struct InputSpec {
  std::optional<CatalogSeqId> seq;
  std::vector<double> embed_values;
  double embed_p = 2.0;

  bool embedded() const { return !seq; }
};

struct ActingExperiment {
  std::string id;
  GeneratorSpec generator;
  InputSpec input;
  SpaceKind from;
  SpaceKind to;
  Index horizon = 1000;
  std::optional<ComparatorSpec> input_comparator;
  std::optional<ComparatorSpec> comparator;
  bool anchors_from_embedding = false;  // hand the embedding's idx(n) to the comparator
  Expectation expectation = Expectation::Acts;
  std::string notes;
};

/// Outcome of checking an expectation against the tables and the generator's facts.
struct RuleCrossCheck {
  std::string status;     // agrees, counterexample, unknown, not-covered, disagrees
  std::string condition;  // the matched row's condition, or NotCovered
  std::string row;
  std::string decision;   // decide() on the generator's facts
  std::string detail;

  bool ok() const { return status != "disagrees"; }
};

namespace detail {

inline bool space_is_complete(const SpaceInstance& s) { return s.complete; }

inline RuleCrossCheck cross_check(RuleTable table, const std::string& experiment_id, const Generator& f,
                                  const SpaceKind& from, const SpaceKind& to, bool expect_positive,
                                  const Rulebook& rb) {
  RuleCrossCheck out;
  const bool complete = space_is_complete(f.space);
  RuleMatch m;
  bool counterexample = false;
  try {
    m = rb.lookup(table, from, to, complete);
  } catch (const CompletenessRequired& e) {
    if (e.counterexample() != experiment_id) {
      out.status = "disagrees";
      out.detail = std::string(e.what());
      return out;
    }
    counterexample = true;
    m = rb.lookup(table, from, to, true);
  }
  out.condition = m.to_string();
  if (!m.covered()) {
    out.status = "not-covered";
    return out;
  }
  out.row = m.row->label();
  const Decision d = decide(*m.condition, f.facts);
  out.decision = decision_name(d);
  if (counterexample) {
    // the complete-space condition holds, yet the map fails over an incomplete E
    out.status = (d == Decision::Satisfied && !expect_positive) ? "counterexample" : "disagrees";
    out.detail = "E is incomplete; the row characterizes complete spaces only";
    return out;
  }
  if (d == Decision::Unknown) {
    out.status = "unknown";
  } else {
    out.status = (d == Decision::Satisfied) == expect_positive ? "agrees" : "disagrees";
  }
  if (!m.row->overlay.empty()) out.detail = "row also requires " + m.row->overlay;
  return out;
}

inline Comparator build_comparator(const ComparatorSpec& spec) { return make_comparator(spec.id, spec.params); }

}  // namespace detail

inline Seq build_input(const InputSpec& in, std::optional<EmbeddedSubsequence>& embedding) {
  if (in.seq) return catalog_sequence(*in.seq);
  std::vector<SpaceElement> els;
  for (double v : in.embed_values) els.push_back(SpaceElement::scalar(v));
  embedding = embed_subsequence(els, in.embed_p);
  return embedding->as_seq();
}

/// Cross-checks an experiment's declared expectation against the rulebook.
inline RuleCrossCheck cross_check_acting(const ActingExperiment& e, const Rulebook& rb = Rulebook::bundled()) {
  std::optional<EmbeddedSubsequence> emb;
  const Generator f = e.generator.build(build_input(e.input, emb).space());
  return detail::cross_check(RuleTable::Acting, e.id, f, e.from, e.to, e.expectation == Expectation::Acts, rb);
}

struct ActingResult {
  std::string id;
  Index horizon = 0;
  Diagnosis input;
  Diagnosis output;
  RuleCrossCheck rulebook;
  std::optional<EmbeddedSubsequence> embedding;
  bool matched = false;
  std::string mismatch;
};

/// Input trace and certificate, C_f, output trace and certificate, and the
/// expectation check: Acts needs a ConvergedBound output, FailsToAct a Diverged one.
/// Both need a ConvergedBound input.
inline ActingResult run_acting_experiment(const ActingExperiment& e, std::optional<Index> horizon = std::nullopt,
                                          const Rulebook& rb = Rulebook::bundled()) {
  if (e.expectation != Expectation::Acts && e.expectation != Expectation::FailsToAct) {
    throw ConfigError(e.id + ": acting experiments expect Acts or FailsToAct");
  }
  if (e.expectation == Expectation::FailsToAct && !e.comparator) {
    throw ConfigError(e.id + ": FailsToAct needs a comparator");
  }
  ActingResult r;
  r.id = e.id;
  r.horizon = horizon.value_or(e.horizon);
  if (r.horizon < 2) throw ConfigError("horizon must be at least 2");
  const Seq x = build_input(e.input, r.embedding);
  const Generator f = e.generator.build(x.space());

  auto cmp_for = [&](const std::optional<ComparatorSpec>& spec) -> std::optional<Comparator> {
    if (!spec) return std::nullopt;
    Comparator c = detail::build_comparator(*spec);
    if (e.anchors_from_embedding && r.embedding) {
      for (BigIndex i : r.embedding->idx) {
        if (i > static_cast<BigIndex>(std::numeric_limits<Index>::max())) break;
        c.anchors.push_back(static_cast<Index>(i));
      }
    }
    return c;
  };

  r.input = membership_diagnosis(x, e.from, r.horizon, cmp_for(e.input_comparator));
  r.output = membership_diagnosis(apply_composition(f, x), e.to, r.horizon, cmp_for(e.comparator));
  r.rulebook = detail::cross_check(RuleTable::Acting, e.id, f, e.from, e.to, e.expectation == Expectation::Acts, rb);

  const Verdict want = e.expectation == Expectation::Acts ? Verdict::ConvergedBound : Verdict::Diverged;
  if (r.input.certificate.verdict != Verdict::ConvergedBound) {
    r.mismatch = "input membership not certified: " + r.input.certificate.note;
  } else if (r.output.certificate.verdict != want) {
    r.mismatch = "output certificate " + verdict_name(r.output.certificate.verdict) + ", expected " +
                 verdict_name(want) + ": " + r.output.certificate.note;
  } else if (!r.rulebook.ok()) {
    r.mismatch = "rulebook disagrees: " + r.rulebook.condition + " is " + r.rulebook.decision;
  }
  r.matched = r.mismatch.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Boundedness experiments

/// Family x_n: ek_oscillation(n), or an alternating block of n (u, w) pairs.
struct FamilySpec {
  std::string kind = "altblock";  // altblock | ek_oscillation
  double u = 1.0;
  double w = 0.0;
  Index lead_zeros = 0;
  Index unit = 0;                 // altblock over L2Trunc along e_unit; 0 keeps scalars
};

struct BoundednessExperiment {
  std::string id;
  GeneratorSpec generator;
  FamilySpec family;
  Index n_min = 1;
  Index n_max = 100;
  SpaceKind from;
  SpaceKind to;
  double input_bound = 1.0;
  ComparatorSpec growth;         // power_growth (lower bound) or uniform_bound (upper bound)
  bool scale_by_jump = false;    // multiply the growth constant by ||f(u) - f(0)||
  RuleTable table = RuleTable::LocalBounded;
  Expectation expectation = Expectation::Unbounded;
  Index generic_check_max = 20;  // cross-check the closed form against direct evaluation up to here
};

struct BoundednessRow {
  Index n;
  double input_norm;
  double output_norm;
  double reference;
};

struct BoundednessResult {
  std::string id;
  std::vector<BoundednessRow> rows;
  RuleCrossCheck rulebook;
  double jump = 0.0;  // ||f(u) - f(0)||
  Index generic_checked = 0;
  bool matched = false;
  std::string mismatch;
};

namespace detail {

struct FamilyMember {
  SpaceElement u, w;
  Index m;
  Index lead;
};

inline FamilyMember family_member(const FamilySpec& fam, Index n) {
  if (fam.kind == "ek_oscillation") {
    const auto l2 = SpaceInstance::l2trunc();
    const double nn = static_cast<double>(n);
    return {SpaceElement::unit(l2, n), SpaceElement::unit(l2, n, 1.0 - 1.0 / (nn * nn)), n * n, 0};
  }
  if (fam.kind == "altblock") {
    if (fam.unit > 0) {
      const auto l2 = SpaceInstance::l2trunc();
      return {SpaceElement::unit(l2, fam.unit, fam.u), SpaceElement::unit(l2, fam.unit, fam.w), n, fam.lead_zeros};
    }
    return {SpaceElement::scalar(fam.u), SpaceElement::scalar(fam.w), n, fam.lead_zeros};
  }
  throw ConfigError("unknown family '" + fam.kind + "'");
}

// Norm of the image of a family member in space s, closed form.
inline double family_norm(const Generator& f, const FamilyMember& x, const SpaceKind& s) {
  switch (s.tag) {
    case SeqSpaceTag::Bvp: return altblock_image_bvq(f, x.u, x.w, x.m, x.lead, s.p);
    case SeqSpaceTag::C0:
    case SeqSpaceTag::C:
    case SeqSpaceTag::Linf: return altblock_image_sup(f, x.u, x.w);
    case SeqSpaceTag::Lp: break;
  }
  throw ConfigError("boundedness families are measured in bv_p or sup norms, not " + s.name());
}

// The same norm by direct evaluation over the whole finite block.
inline double family_norm_generic(const Generator& f, const FamilyMember& x, const SpaceKind& s) {
  const Seq xs = alternating_block(x.u, x.w, x.m, x.lead);
  const Seq ys = apply_composition(f, xs);
  const Index N = x.lead + 2 * x.m + 1;  // one index into the constant tail
  if (s.tag == SeqSpaceTag::Bvp) return bvp_partial_norm(ys, s.p, N).last();
  return sup_partial_norm(ys, N).last();
}

}  // namespace detail

inline RuleCrossCheck cross_check_boundedness(const BoundednessExperiment& e,
                                              const Rulebook& rb = Rulebook::bundled()) {
  const Generator f = e.generator.build(e.family.kind == "ek_oscillation" || e.family.unit > 0
                                            ? std::optional<SpaceInstance>(SpaceInstance::l2trunc())
                                            : std::nullopt);
  return detail::cross_check(e.table, e.id, f, e.from, e.to, e.expectation == Expectation::Bounded, rb);
}

/// Verifies the family stays in the input ball, then compares every output
/// norm with the growth comparator at each n (within 1e-9 relative).
inline BoundednessResult run_boundedness_experiment(const BoundednessExperiment& e,
                                                    const Rulebook& rb = Rulebook::bundled()) {
  if (e.n_min < 1 || e.n_max < e.n_min) throw ConfigError(e.id + ": bad family range");
  BoundednessResult r;
  r.id = e.id;
  const bool l2 = e.family.kind == "ek_oscillation" || e.family.unit > 0;
  const Generator f = e.generator.build(l2 ? std::optional<SpaceInstance>(SpaceInstance::l2trunc()) : std::nullopt);
  const Generator id = catalog_generator("identity", {}, f.space);
  Comparator growth = make_comparator(e.growth.id, e.growth.params);
  const bool upper = growth.info.kind == ComparatorKind::UniformBound;
  if (!upper && growth.info.kind != ComparatorKind::Growth) {
    throw ConfigError(e.id + ": growth comparator must be a growth or uniform bound");
  }
  if ((e.expectation == Expectation::Bounded) != upper) {
    throw ConfigError(e.id + ": Bounded needs an upper bound, Unbounded a growth comparator");
  }
  {
    const auto x = detail::family_member(e.family, e.n_min);
    r.jump = distance(eval_generator(f, x.u), eval_generator(f, SpaceElement::zero(f.space)));
  }
  const double scale = e.scale_by_jump ? r.jump : 1.0;
  r.rulebook = detail::cross_check(e.table, e.id, f, e.from, e.to, e.expectation == Expectation::Bounded, rb);

  for (Index n = e.n_min; n <= e.n_max; ++n) {
    const auto x = detail::family_member(e.family, n);
    BoundednessRow row{n, detail::family_norm(id, x, e.from), detail::family_norm(f, x, e.to), 0.0};
    row.reference = upper ? growth.constant : scale * growth.term(n);
    if (n <= e.generic_check_max) {
      const double in = detail::family_norm_generic(id, x, e.from);
      const double out = detail::family_norm_generic(f, x, e.to);
      if (!approx_rel(in, row.input_norm, 1e-12) || !approx_rel(out, row.output_norm, 1e-12)) {
        throw StructuralError(e.id + ": closed-form block norm disagrees with direct evaluation at n = " +
                              std::to_string(n));
      }
      ++r.generic_checked;
    }
    r.rows.push_back(row);
    if (r.mismatch.empty()) {
      if (!(row.input_norm <= e.input_bound * (1.0 + 1e-12))) {
        r.mismatch = "input norm " + std::to_string(row.input_norm) + " exceeds the bound at n = " + std::to_string(n);
      } else if (upper ? !(row.output_norm <= row.reference * (1.0 + 1e-9))
                       : !(row.output_norm >= row.reference * (1.0 - 1e-9))) {
        r.mismatch = "output norm " + std::to_string(row.output_norm) + " vs comparator " +
                     std::to_string(row.reference) + " at n = " + std::to_string(n);
      }
    }
  }
  if (r.mismatch.empty() && !r.rulebook.ok()) {
    r.mismatch = "rulebook disagrees: " + r.rulebook.condition + " is " + r.rulebook.decision;
  }
  r.matched = r.mismatch.empty();
  return r;
}

}  // namespace bvlab
