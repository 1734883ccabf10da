#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bvlab/analysis.hpp"
#include "bvlab/diagnosis.hpp"
#include "bvlab/pvariation.hpp"

using namespace bvlab;

namespace {

Seq cat(const std::string& id, std::map<std::string, double> params = {}) {
  return catalog_sequence({id, std::move(params)});
}

// Exhaustive search over every sub-partition of the grid that keeps both ends.
double brute_force_variation(const std::vector<SpaceElement>& g, double p) {
  const std::size_t n = g.size();
  if (n == 1) return 0.0;
  double best = 0.0;
  const std::size_t inner = n - 2;
  for (std::uint64_t mask = 0; mask < (1ULL << inner); ++mask) {
    double s = 0.0;
    std::size_t prev = 0;
    for (std::size_t i = 1; i < n; ++i) {
      const bool keep = i == n - 1 || (mask >> (i - 1)) & 1ULL;
      if (!keep) continue;
      s += std::pow(distance(g[i], g[prev]), p);
      prev = i;
    }
    best = std::max(best, s);
  }
  return best;
}

std::vector<SpaceElement> random_grid(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  const auto s = SpaceInstance::real(dim);
  std::vector<SpaceElement> g;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> c(dim);
    for (double& x : c) x = val(rng);
    g.push_back(SpaceElement::dense(s, c));
  }
  return g;
}

}  // namespace

TEST(LpPartial, Basics) {
  EXPECT_DOUBLE_EQ(lp_partial_norm(Seq::scalars({3, 4}), 2.0, 2).last(), 5.0);
  for (double v : lp_partial_norm(cat("zero"), 2.0, 10).values) EXPECT_EQ(v, 0.0);
}

TEST(LpPartial, ReciprocalAgainstLongDoubleReference) {
  const Index N = 10000;
  const auto t = lp_partial_norm(cat("reciprocal", {{"beta", 1.0}}), 2.0, N);
  long double ref = 0.0L;
  for (Index k = N; k >= 1; --k) ref += 1.0L / (static_cast<long double>(k) * k);
  EXPECT_NEAR(t.last(), std::sqrt(static_cast<double>(ref)), 1e-6);
  // the tail of sum 1/k^2 past N lies in (1/(N+1), 1/N)
  const double full = std::numbers::pi * std::numbers::pi / 6.0;
  EXPECT_NEAR(t.last(), std::sqrt(full - 1.0 / (N + 0.5)), 1e-6);
  for (std::size_t i = 1; i < t.values.size(); ++i) ASSERT_GE(t.values[i], t.values[i - 1]);
}

TEST(SupPartial, Basics) {
  for (Index N : {2, 5, 100}) EXPECT_EQ(sup_partial_norm(cat("alternating01"), N).last(), 1.0);
  EXPECT_EQ(sup_partial_norm(cat("zero"), 7).last(), 0.0);
  const Seq h = cat("harmonic_partial", {{"beta", 1.0}});
  EXPECT_EQ(sup_partial_norm(h, 300).last(), h(300).value());
}

TEST(BvpPartial, Alternating) { EXPECT_EQ(bvp_partial_norm(cat("alternating01"), 1.0, 5).last(), 4.0); }

TEST(BvpPartial, HarmonicBounded) {
  const auto t = bvp_partial_norm(cat("harmonic_partial", {{"beta", 1.0}}), 2.0, 100000);
  const double bound = 1.0 + std::sqrt(std::numbers::pi * std::numbers::pi / 6.0);
  EXPECT_LE(t.last(), bound);
  // increments are 1/(k+1), so the partial sum is sum_{2..N} 1/k^2
  long double ref = 0.0L;
  for (Index k = 100000; k >= 2; --k) ref += 1.0L / (static_cast<long double>(k) * k);
  EXPECT_NEAR(t.last(), 1.0 + std::sqrt(static_cast<double>(ref)), 1e-9);
}

TEST(BvpPartial, PrefixOfAIncrements) {
  const auto inc = increment_norms(cat("prefix_of_a"), 200);
  for (std::size_t n = 1; n <= inc.size(); ++n) {
    const double expect = 1.0 / static_cast<double>((n + 1) * (n + 1));
    ASSERT_DOUBLE_EQ(inc[n - 1], expect) << n;
  }
}

TEST(BvpPartial, HorizonAndExponentGuards) {
  EXPECT_THROW(bvp_partial_norm(cat("zero"), 1.0, 1), ParameterError);
  EXPECT_THROW(lp_partial_norm(cat("zero"), 0.5, 4), ParameterError);
}

TEST(Traces, Monotone) {
  for (const auto& x : {cat("alternating01"), cat("harmonic_partial", {{"beta", 0.75}}), cat("prefix_of_a"),
                        cat("ek_oscillation", {{"n", 6}})}) {
    for (double p : {1.0, 1.5, 2.0}) {
      const auto b = bvp_partial_norm(x, p, 500);
      const auto l = lp_partial_norm(x, p, 500);
      for (std::size_t i = 1; i < b.values.size(); ++i) {
        ASSERT_GE(b.values[i], b.values[i - 1]);
        ASSERT_GE(l.values[i], l.values[i - 1]);
      }
    }
  }
}

TEST(Traces, SupBelowBv1) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> v(2 + rng() % 60);
    for (double& x : v) x = val(rng);
    const Seq x = Seq::scalars(v);
    const Index N = v.size() + 3;
    const auto s = sup_partial_norm(x, N);
    const auto b = bvp_partial_norm(x, 1.0, N);
    for (Index n = 1; n <= N; ++n) ASSERT_LE(s.at(n), b.at(n) * (1.0 + 1e-12));
  }
}

TEST(Traces, IncrementPowersDecreaseInP) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(30);
    double cur = 0.0;
    for (double& x : v) {
      cur += (rng() % 2 ? 1 : -1) * val(rng);
      x = cur;
    }
    const Seq x = Seq::scalars(v);
    for (double p : {1.0, 1.5, 2.0}) {
      const double q = p + 0.75;
      ASSERT_LE(increment_power_sums(x, q, 30).back(), increment_power_sums(x, p, 30).back() * (1 + 1e-15));
    }
  }
}

TEST(PVariation, HandExamples) {
  auto grid = [](std::vector<double> v) {
    std::vector<SpaceElement> g;
    for (double x : v) g.push_back(SpaceElement::scalar(x));
    return g;
  };
  EXPECT_EQ(wiener_p_variation_grid(grid({0, 1, 0}), 1.0).var, 2.0);
  const auto mid = wiener_p_variation_grid(grid({0, 0.5, 1}), 2.0);
  EXPECT_EQ(mid.var, 1.0);
  EXPECT_EQ(mid.partition, (std::vector<std::size_t>{0, 2}));
  const auto full = wiener_p_variation_grid(grid({0, 1, 0}), 2.0);
  EXPECT_EQ(full.var, 2.0);
  EXPECT_EQ(full.partition, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_THROW(wiener_p_variation_grid(std::vector<SpaceElement>{}, 2.0), StructuralError);
}

TEST(PVariation, DynamicProgramEqualsBruteForce) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_grid(rng, 1 + rng() % 12, 1 + rng() % 3);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const auto dp = wiener_p_variation_grid(g, p);
      const double bf = brute_force_variation(g, p);
      ASSERT_NEAR(dp.var, bf, 1e-10 * std::max(1.0, bf));
      // the recovered partition attains the value
      double s = 0.0;
      for (std::size_t i = 1; i < dp.partition.size(); ++i) {
        s += std::pow(distance(g[dp.partition[i]], g[dp.partition[i - 1]]), p);
      }
      ASSERT_NEAR(s, dp.var, 1e-10 * std::max(1.0, bf));
      ASSERT_GE(dp.var * (1 + 1e-12), std::pow(distance(g.back(), g.front()), p));
    }
  }
}

TEST(PVariation, POneIsConsecutiveSum) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_grid(rng, 2 + rng() % 30, 2);
    double s = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) s += distance(g[i], g[i - 1]);
    ASSERT_NEAR(wiener_p_variation_grid(g, 1.0).var, s, 1e-12 * std::max(1.0, s));
  }
}

TEST(Diagnosis, HarmonicThreeQuartersInBv2) {
  const auto d = membership_diagnosis(cat("harmonic_partial", {{"beta", 0.75}}), SpaceKind::bvp(2.0), 10000,
                                      "shifted_p_series", {{"s", 1.5}, {"scale", 1.001}});
  EXPECT_EQ(d.certificate.verdict, Verdict::ConvergedBound);
  ASSERT_TRUE(d.certificate.bound.has_value());
  EXPECT_GE(*d.certificate.bound, d.trace.last());
}

TEST(Diagnosis, HarmonicNotInBv1) {
  const Seq x = cat("harmonic_partial", {{"beta", 1.0}});
  // increments 1/(n+1) >= (1/2)(1/n)
  const auto d = membership_diagnosis(x, SpaceKind::bvp(1.0), 10000, "harmonic", {{"scale", 0.5}});
  EXPECT_EQ(d.certificate.verdict, Verdict::Diverged);
  EXPECT_EQ(d.certificate.comparator_id, "harmonic");
  EXPECT_EQ(d.certificate.crossing_index, 1u);
  // 1/(n+1) < 1/n everywhere, so the unscaled series does not dominate
  const auto plain = membership_diagnosis(x, SpaceKind::bvp(1.0), 10000, "harmonic");
  EXPECT_NE(plain.certificate.verdict, Verdict::Diverged);
}

TEST(Diagnosis, AlternatingNotConvergent) {
  const auto d = membership_diagnosis(cat("alternating01"), SpaceKind::c(), 1000, "oscillation");
  EXPECT_EQ(d.certificate.verdict, Verdict::Diverged);
  EXPECT_EQ(d.certificate.comparator_id, "oscillation");
}

TEST(Diagnosis, NoComparatorIsInconclusive) {
  const auto d = membership_diagnosis(cat("alternating01"), SpaceKind::bvp(1.0), 100, std::nullopt);
  EXPECT_EQ(d.certificate.verdict, Verdict::Inconclusive);
  EXPECT_EQ(d.trace.values.size(), 100u);
}

TEST(Diagnosis, UnknownComparator) {
  EXPECT_THROW(membership_diagnosis(cat("zero"), SpaceKind::c0(), 10, "no_such"), LookupError);
}

TEST(Diagnosis, WrongComparatorDoesNotCertify) {
  // 1/n^2 terms never dominate the harmonic comparator
  const auto d = membership_diagnosis(cat("reciprocal", {{"beta", 2.0}}), SpaceKind::lp(1.0), 1000, "harmonic");
  EXPECT_NE(d.certificate.verdict, Verdict::Diverged);
}
