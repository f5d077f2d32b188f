#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "stepwalk/errors.hpp"
#include "stepwalk/model.hpp"

using namespace stepwalk;

TEST(Moments, ClosedForms) {
  const auto r = moments(StepDistribution::rademacher(0.7));
  EXPECT_NEAR(r.mu1, 0.4, 1e-15);
  EXPECT_DOUBLE_EQ(r.mu2, 1.0);

  const auto u = moments(StepDistribution::uniform(-1.0, 1.0));
  EXPECT_DOUBLE_EQ(u.mu1, 0.0);
  EXPECT_DOUBLE_EQ(u.mu2, 1.0 / 3.0);

  const auto d = moments(StepDistribution::discrete({1.0, 3.0}, {0.5, 0.5}));
  EXPECT_DOUBLE_EQ(d.mu1, 2.0);
  EXPECT_DOUBLE_EQ(d.mu2, 5.0);

  const auto g = moments(StepDistribution::gaussian(1.5, 2.0));
  EXPECT_DOUBLE_EQ(g.mu1, 1.5);
  EXPECT_DOUBLE_EQ(g.mu2, 6.25);
}

TEST(Moments, AbsoluteMoment) {
  EXPECT_DOUBLE_EQ(abs_moment(StepDistribution::rademacher(0.3)), 1.0);
  EXPECT_DOUBLE_EQ(abs_moment(StepDistribution::uniform(-1.0, 1.0)), 0.5);
  EXPECT_DOUBLE_EQ(abs_moment(StepDistribution::uniform(1.0, 3.0)), 2.0);
  EXPECT_NEAR(abs_moment(StepDistribution::gaussian(0.0, 1.0)), std::sqrt(2.0 / M_PI), 1e-15);
  EXPECT_DOUBLE_EQ(abs_moment(StepDistribution::discrete({-2.0, 1.0}, {0.25, 0.75})), 1.25);
}

TEST(DerivedConstants, ReferenceParameterSet) {
  const WalkParams params{0.8, 0.6, StepDistribution::rademacher(0.7)};
  const auto k = derive_constants(params);
  EXPECT_NEAR(k.a, 0.36, 1e-15);
  EXPECT_NEAR(*k.drift, 0.25, 1e-15);
  EXPECT_NEAR(*k.sigma2, 0.9375, 1e-15);
  EXPECT_EQ(k.regime, Regime::Diffusive);
}

TEST(DerivedConstants, MemoryIndexZeroAtHalf) {
  for (double alpha : {0.0, 0.3, 0.9, 1.0}) {
    EXPECT_EQ(derive_constants({0.5, alpha, StepDistribution::uniform(0.0, 2.0)}).a, 0.0);
  }
}

TEST(DerivedConstants, CriticalBoundaryAtThreeQuarters) {
  const auto dist = StepDistribution::rademacher(0.6);
  EXPECT_EQ(derive_constants({0.75, 1.0, dist}).regime, Regime::Critical);
  EXPECT_EQ(derive_constants({0.74, 1.0, dist}).regime, Regime::Diffusive);
  EXPECT_EQ(derive_constants({0.76, 1.0, dist}).regime, Regime::Superdiffusive);
  EXPECT_EQ(derive_constants({1.0, 0.5, dist}).regime, Regime::Critical);
}

TEST(DerivedConstants, DegenerateOnlyAtOneOne) {
  const auto k = derive_constants({1.0, 1.0, StepDistribution::rademacher(0.7)});
  EXPECT_EQ(k.regime, Regime::Degenerate);
  EXPECT_FALSE(k.drift.has_value());
  EXPECT_FALSE(k.sigma2.has_value());
  EXPECT_THROW(k.require_drift(), DegenerateMemory);
  EXPECT_THROW(k.require_sigma2(), DegenerateMemory);

  const auto neg = derive_constants({0.0, 1.0, StepDistribution::rademacher(0.7)});
  EXPECT_EQ(neg.a, -1.0);
  EXPECT_EQ(neg.regime, Regime::Diffusive);
  EXPECT_TRUE(neg.drift.has_value());
}

TEST(DerivedConstants, PureFunction) {
  const WalkParams params{0.37, 0.81, StepDistribution::gaussian(0.3, 1.7)};
  const auto x = derive_constants(params);
  const auto y = derive_constants(params);
  EXPECT_EQ(std::memcmp(&x.a, &y.a, sizeof x.a), 0);
  EXPECT_EQ(*x.drift, *y.drift);
  EXPECT_EQ(*x.sigma2, *y.sigma2);
}

TEST(DerivedConstants, SweepKeepsIndexAndVarianceInRange) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double p = unit(gen);
    const double alpha = unit(gen);
    const auto dist = i % 2 == 0 ? StepDistribution::rademacher(unit(gen))
                                 : StepDistribution::gaussian(4.0 * unit(gen) - 2.0, unit(gen));
    const auto k = derive_constants({p, alpha, dist});
    ASSERT_GE(k.a, -1.0);
    ASSERT_LE(k.a, 1.0);
    if (k.a < 1.0) ASSERT_GE(*k.sigma2, 0.0) << "p=" << p << " alpha=" << alpha;
  }
}

TEST(StepDistribution, Validation) {
  EXPECT_THROW(StepDistribution::rademacher(1.2), DomainError);
  EXPECT_THROW(StepDistribution::uniform(1.0, 1.0), DomainError);
  EXPECT_THROW(StepDistribution::gaussian(0.0, -1.0), DomainError);
  EXPECT_THROW(StepDistribution::discrete({1.0, 2.0}, {0.5, 0.4}), DomainError);
  EXPECT_THROW(StepDistribution::discrete({1.0}, {0.5, 0.5}), DomainError);
  EXPECT_NO_THROW(StepDistribution::discrete({1.0, 2.0}, {0.5, 0.5 + 1e-13}));
  EXPECT_NO_THROW(StepDistribution::gaussian(0.0, 0.0));
  EXPECT_THROW((WalkParams{1.1, 0.5, StepDistribution::rademacher(0.5)}.validate()), DomainError);
}

TEST(StepDistribution, ParseRoundTrip) {
  for (const char* text : {"rademacher:0.7", "uniform:-1:1", "gaussian:0:1", "discrete:1,3@0.5,0.5",
                           "discrete:-2,0,5@0.25,0.5,0.25"}) {
    const auto d = StepDistribution::parse(text);
    EXPECT_EQ(d.to_string(), text);
    EXPECT_EQ(StepDistribution::parse(d.to_string()), d);
  }
}

TEST(StepDistribution, ParseErrors) {
  for (const char* text : {"rademacher", "rademacher:x", "rademacher:1.5", "uniform:1", "uniform:2:1",
                           "poisson:1", "discrete:1,2@0.5", "discrete:1,2", "gaussian:0:1:2"}) {
    EXPECT_THROW(StepDistribution::parse(text), ConfigError) << text;
  }
}

TEST(StepDistribution, AtomsAreSymmetric) {
  const auto d = StepDistribution::discrete({-2.0, 0.0, 5.0}, {0.25, 0.5, 0.25});
  const auto atoms = d.atoms();
  ASSERT_EQ(atoms.size(), 5u);
  for (std::size_t i = 0; i < atoms.size(); ++i) EXPECT_EQ(atoms[i], -atoms[atoms.size() - 1 - i]);
  EXPECT_TRUE(StepDistribution::rademacher(0.2).is_atomic());
  EXPECT_FALSE(StepDistribution::uniform(0.0, 1.0).is_atomic());
}

TEST(SampleStep, DegenerateLaws) {
  RandomStream rng(1);
  const auto plus = StepDistribution::rademacher(1.0);
  const auto five = StepDistribution::discrete({5.0}, {1.0});
  for (int i = 0; i < 10000; ++i) {
    ASSERT_EQ(sample_step(plus, rng), 1.0);
    ASSERT_EQ(sample_step(five, rng), 5.0);
  }
}

TEST(SampleStep, SampleAtomMatchesSample) {
  const auto d = StepDistribution::discrete({-2.0, 0.0, 5.0}, {0.25, 0.5, 0.25});
  RandomStream a(77);
  RandomStream b(77);
  for (int i = 0; i < 10000; ++i) ASSERT_EQ(d.sample(a), d.atoms()[d.sample_atom(b)]);
  EXPECT_EQ(a, b);
}

class MomentsMonteCarlo : public ::testing::TestWithParam<const char*> {};

TEST_P(MomentsMonteCarlo, SampleMomentsWithinFiveStandardErrors) {
  const auto dist = StepDistribution::parse(GetParam());
  const auto m = moments(dist);
  RandomStream rng(2718);
  const int n = 1'000'000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = dist.sample(rng);
    s1 += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  const double var1 = m.mu2 - m.mu1 * m.mu1;
  const double var2 = s4 / n - (s2 / n) * (s2 / n);
  EXPECT_LE(std::abs(s1 / n - m.mu1), 5.0 * std::sqrt(var1 / n) + 1e-15);
  EXPECT_LE(std::abs(s2 / n - m.mu2), 5.0 * std::sqrt(var2 / n) + 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Laws, MomentsMonteCarlo,
                         ::testing::Values("rademacher:0.7", "uniform:-1:1", "gaussian:0.5:2",
                                           "discrete:1,3@0.5,0.5", "discrete:-2,0,5@0.25,0.5,0.25"));

TEST(SampleStep, RademacherMeanBound) {
  const auto d = StepDistribution::rademacher(0.7);
  RandomStream rng(31);
  double sum = 0.0;
  for (int i = 0; i < 1'000'000; ++i) sum += d.sample(rng);
  EXPECT_LT(std::abs(sum / 1e6 - 0.4), 0.005);
}

TEST(Regime, Classification) {
  EXPECT_EQ(classify_regime(0.5), Regime::Critical);
  EXPECT_EQ(classify_regime(0.5 + 1e-13), Regime::Critical);
  EXPECT_EQ(classify_regime(0.5 - 1e-11), Regime::Diffusive);
  EXPECT_EQ(classify_regime(0.9999), Regime::Superdiffusive);
  EXPECT_EQ(classify_regime(-1.0), Regime::Diffusive);
  EXPECT_EQ(classify_regime(1.0), Regime::Degenerate);
  EXPECT_EQ(to_string(Regime::Critical), "critical");
}
