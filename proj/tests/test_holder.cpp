#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bvlab/holder.hpp"
#include "bvlab/sequence.hpp"

using namespace bvlab;

namespace {

SpaceElement s(double v) { return SpaceElement::scalar(v); }

std::vector<Pair> random_scalar_pairs(std::uint64_t seed, std::size_t n, double radius) {
  Sampler rng(seed);
  const auto r = SpaceInstance::real(1);
  std::vector<Pair> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(rng.point(r, radius), rng.point(r, radius));
  return out;
}

Generator scaled(const Generator& f, double lambda) {
  Generator g = f;
  g.eval = [f, lambda](const SpaceElement& u) { return lambda * f.eval(u); };
  return g;
}

}  // namespace

TEST(Eval, SinPsiAtUnitVectors) {
  const auto f = catalog_generator("sin_psi_l2");
  const auto l2 = SpaceInstance::l2trunc();
  for (std::size_t k = 1; k <= 200; ++k) {
    EXPECT_TRUE(eval_generator(f, SpaceElement::unit(l2, k)).is_zero()) << k;
    const double kk = static_cast<double>(k);
    const auto v = eval_generator(f, SpaceElement::unit(l2, k, 1.0 - 1.0 / (kk * kk)));
    const double expect = -std::sin((2.0 * std::numbers::pi + 1.0) / kk);
    EXPECT_NEAR(v.coord(1), expect, 1e-12) << k;
    EXPECT_LE(v.support().size(), 1u);
  }
}

TEST(Eval, NormReciprocalAlongPrefixes) {
  const auto f = catalog_generator("norm_reciprocal_c00");
  for (Index n = 1; n <= 500; ++n) {
    const double expect = static_cast<double>((n + 1) * (n + 1));
    EXPECT_NEAR(norm(eval_generator(f, prefix_of_a_element(n))), expect, 1e-9 * expect) << n;
  }
  // total on c00: ||u - a||_inf > 0 for every finitely supported u
  EXPECT_GT(norm(eval_generator(f, SpaceElement::zero(SpaceInstance::c00()))), -1.0);
}

TEST(Eval, ShiftMetricDomain) {
  const auto f = catalog_generator("shift_metric");
  EXPECT_EQ(eval_generator(f, s(4.5)).value(), 8.5);
  EXPECT_THROW(eval_generator(f, s(2.0)), DomainError);
  EXPECT_THROW(eval_generator(f, s(5.5)), DomainError);
}

TEST(Eval, WrongSpaceRejected) {
  EXPECT_THROW(eval_generator(catalog_generator("square"), SpaceElement::unit(SpaceInstance::c00(), 1)),
               StructuralError);
}

TEST(Catalog, UnknownGenerator) { EXPECT_THROW(catalog_generator("nope"), LookupError); }

TEST(Catalog, RationalIndicatorUsesTag) {
  const auto f = catalog_generator("power_rational_indicator", {{"p", 2}, {"q", 1}});
  EXPECT_EQ(eval_generator(f, SpaceElement::scalar(3.0, true)).value(), 9.0);
  EXPECT_EQ(eval_generator(f, SpaceElement::scalar(3.0, false)).value(), 0.0);
}

TEST(EmpiricalConstant, SquareWorkedExample) {
  const auto f = catalog_generator("square");
  const auto est = empirical_holder_constant(f, {{s(0), s(1)}, {s(1), s(2)}}, 1.0);
  EXPECT_EQ(est.L_hat, 3.0);
  ASSERT_TRUE(est.witness);
  EXPECT_EQ(est.witness->first, s(1));
  EXPECT_EQ(est.witness->second, s(2));
  EXPECT_EQ(est.pairs_checked, 2u);
}

TEST(EmpiricalConstant, IdentityAndConstant) {
  const auto pairs = random_scalar_pairs(3, 200, 5.0);
  EXPECT_NEAR(empirical_holder_constant(catalog_generator("identity"), pairs, 1.0).L_hat, 1.0, 1e-15);
  EXPECT_EQ(empirical_holder_constant(catalog_generator("constant", {{"c", 2.5}}), pairs, 0.7).L_hat, 0.0);
}

TEST(EmpiricalConstant, SkipsDegenerateAndFarPairs) {
  const auto f = catalog_generator("identity");
  const auto est = empirical_holder_constant(f, {{s(1), s(1)}, {s(0), s(5)}}, 1.0, 1.0);
  EXPECT_TRUE(est.inconclusive());
  EXPECT_EQ(est.pairs_checked, 0u);
  EXPECT_FALSE(est.witness);
}

TEST(EmpiricalConstant, RejectsBadAlpha) {
  const auto f = catalog_generator("identity");
  EXPECT_THROW(empirical_holder_constant(f, {}, 0.0), ParameterError);
  EXPECT_THROW(empirical_holder_constant(f, {}, 1.5), ParameterError);
}

TEST(EmpiricalConstant, SymmetricInPairOrder) {
  for (const char* id : {"square", "identity"}) {
    const auto f = catalog_generator(id);
    auto pairs = random_scalar_pairs(7, 500, 3.0);
    auto swapped = pairs;
    for (auto& [u, w] : swapped) std::swap(u, w);
    for (double alpha : {0.3, 0.5, 1.0}) {
      EXPECT_EQ(empirical_holder_constant(f, pairs, alpha).L_hat, empirical_holder_constant(f, swapped, alpha).L_hat);
    }
  }
}

TEST(EmpiricalConstant, ScalesWithGenerator) {
  const auto f = catalog_generator("square");
  const auto pairs = random_scalar_pairs(9, 500, 3.0);
  for (double lambda : {-3.0, 0.5, 7.25}) {
    const double base = empirical_holder_constant(f, pairs, 0.5).L_hat;
    const double sc = empirical_holder_constant(scaled(f, lambda), pairs, 0.5).L_hat;
    EXPECT_NEAR(sc, std::abs(lambda) * base, 1e-12 * std::abs(lambda) * base);
  }
}

TEST(EmpiricalConstant, RestrictionDoesNotIncrease) {
  const auto f = catalog_generator("square");
  const auto pairs = random_scalar_pairs(10, 1000, 4.0);
  const double full = empirical_holder_constant(f, pairs, 0.6).L_hat;
  for (double delta : {0.01, 0.1, 1.0, 3.0}) {
    EXPECT_LE(empirical_holder_constant(f, pairs, 0.6, delta).L_hat, full);
  }
}

TEST(Formulas, GlobalFromBounded) {
  EXPECT_EQ(global_from_bounded(1, 1, 2, 1), 4.0);
  EXPECT_EQ(global_from_bounded(3, 0.5, 0, 0.5), 3.0);
  EXPECT_EQ(global_from_bounded(10, 1, 1, 1), 10.0);
  EXPECT_THROW(global_from_bounded(1, 0, 1, 1), ParameterError);
}

TEST(Formulas, ChainConstant) {
  const auto c = chain_constant(2, 0.5, 1, 0.5);
  EXPECT_EQ(c.k, 2u);
  EXPECT_NEAR(c.L_eta, 2.0 * std::sqrt(2.0), 1e-15);
  EXPECT_EQ(chain_constant(3, 0.1, 0.7, 1.0).L_eta, 3.0);
  const auto same = chain_constant(5, 0.3, 0.3, 0.4);
  EXPECT_EQ(same.k, 1u);
  EXPECT_EQ(same.L_eta, 5.0);
  const auto wide = chain_constant(5, 2.0, 1.0, 0.4);
  EXPECT_EQ(wide.k, 1u);
  EXPECT_EQ(wide.L_eta, 5.0);
  // 0.3 / 0.1 is 2.9999999999999996 in binary
  EXPECT_EQ(chain_constant(1, 0.1, 0.3, 0.5).k, 3u);
  EXPECT_EQ(chain_constant(1, 0.1, 0.35, 0.5).k, 4u);
}

TEST(Formulas, ChainBoundCoversIdentity) {
  // for the identity, |u - w| = eta at distance eta, so L_eta eta^alpha >= eta
  for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
    for (double delta : {0.05, 0.1, 0.3, 1.0}) {
      for (double eta : {0.1, 0.5, 1.0, 2.0, 7.5}) {
        const double L = std::pow(delta, 1.0 - alpha);  // the identity's strg constant at scale delta
        const auto c = chain_constant(L, delta, eta, alpha);
        EXPECT_GE(c.L_eta * std::pow(eta, alpha) * (1 + 1e-12), eta) << alpha << " " << delta << " " << eta;
      }
    }
  }
}

TEST(Formulas, BallBound) {
  EXPECT_EQ(ball_bound_from_strg(0, 1, 1, 5, 2.5), 2.5);
  EXPECT_EQ(ball_bound_from_strg(1, 1, 1, 3, 0), 4.0);
  const double a = ball_bound_from_strg(2, 0.5, 0.5, 3, 0);
  const double b = ball_bound_from_strg(2, 0.5, 0.5, 6, 0);
  EXPECT_LE(b, 2 * a + 2 * std::pow(0.5, 0.5) + 1e-12);
}

TEST(Formulas, SquareStrgWitness) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double L = 0.1 + 100 * U(rng);
    const double delta = 1e-3 + U(rng);
    const double alpha = 0.05 + 0.95 * U(rng);
    const double u = 0.5 * L * std::pow(delta, alpha - 1.0);
    const double w = u + delta;
    EXPECT_GT(std::abs(w * w - u * u), L * std::pow(std::abs(w - u), alpha));
  }
}

TEST(Sampler, Deterministic) {
  Sampler a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(), b.uniform());
  Sampler c(5);
  const auto l2 = SpaceInstance::l2trunc();
  for (int i = 0; i < 200; ++i) EXPECT_LE(norm(c.point(l2, 2.0)), 2.0 * (1 + 1e-15));
}

TEST(Classify, IdentityStrgButNotGlobal) {
  ClassifyConfig cfg;
  cfg.alpha = 0.5;
  cfg.deltas = {1.0};
  cfg.radii = {};
  cfg.candidates = {{HolderRegime::Global, 1.0}, {HolderRegime::Strg, 1.0}};
  const auto rep = classify_generator(catalog_generator("identity"), cfg);
  ASSERT_EQ(rep.regimes.size(), 2u);
  EXPECT_EQ(rep.regimes[0].kind, HolderRegime::Global);
  EXPECT_EQ(rep.regimes[0].verdict, EmpiricalVerdict::RefutedByWitness);
  ASSERT_TRUE(rep.regimes[0].estimate.witness);
  EXPECT_EQ(rep.regimes[1].kind, HolderRegime::Strg);
  EXPECT_EQ(rep.regimes[1].verdict, EmpiricalVerdict::ConsistentWith);
}

TEST(Classify, SquareNotStrg) {
  for (double alpha : {0.2, 0.5, 1.0}) {
    ClassifyConfig cfg;
    cfg.alpha = alpha;
    cfg.include_global = false;
    cfg.deltas = {0.1, 1.0};
    cfg.radii = {};
    cfg.candidates = {{HolderRegime::Strg, 50.0}};
    const auto rep = classify_generator(catalog_generator("square"), cfg);
    for (const auto& r : rep.regimes) EXPECT_EQ(r.verdict, EmpiricalVerdict::RefutedByWitness) << alpha;
  }
}

TEST(Classify, NormReciprocalNotBnd) {
  ClassifyConfig cfg;
  cfg.alpha = 1.0;
  cfg.include_global = false;
  cfg.deltas = {};
  cfg.radii = {2.0};
  cfg.pairs = 100;
  cfg.candidates = {{HolderRegime::Bnd, 1000.0}};
  const auto rep = classify_generator(catalog_generator("norm_reciprocal_c00"), cfg);
  ASSERT_EQ(rep.regimes.size(), 1u);
  EXPECT_EQ(rep.regimes[0].verdict, EmpiricalVerdict::RefutedByWitness);
}

TEST(Classify, MissingCandidate) {
  ClassifyConfig cfg;
  cfg.candidates = {};
  EXPECT_THROW(classify_generator(catalog_generator("identity"), cfg), ConfigError);
}

TEST(Classify, ReproducibleAtFixedSeed) {
  ClassifyConfig cfg;
  cfg.alpha = 0.5;
  cfg.deltas = {0.5, 1.0};
  cfg.radii = {1.0, 3.0};
  cfg.candidates = {{HolderRegime::Global, 1.0}, {HolderRegime::Strg, 1.0}, {HolderRegime::Bnd, 10.0}};
  const auto f = catalog_generator("square");
  const auto a = classify_generator(f, cfg);
  const auto b = classify_generator(f, cfg);
  ASSERT_EQ(a.regimes.size(), b.regimes.size());
  for (std::size_t i = 0; i < a.regimes.size(); ++i) {
    EXPECT_EQ(a.regimes[i].estimate.L_hat, b.regimes[i].estimate.L_hat);
    EXPECT_EQ(a.regimes[i].verdict, b.regimes[i].verdict);
  }
}
