#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "stepwalk/errors.hpp"
#include "stepwalk/walk.hpp"

using namespace stepwalk;

namespace {

const WalkParams kPsetA{0.8, 0.6, StepDistribution::rademacher(0.7)};

}  // namespace

TEST(WalkState, FirstStepIsInnovation) {
  const auto dist = StepDistribution::gaussian(0.0, 1.0);
  RandomStream a(9);
  RandomStream b(9);
  const WalkState state = WalkState::start(dist, a);
  EXPECT_EQ(state.n(), 1u);
  EXPECT_EQ(state.running_sum(), dist.sample(b));

  const Trajectory t = simulate_trajectory({0.5, 0.5, dist}, 1, {}, 9);
  RandomStream c(9);
  EXPECT_EQ(t.values.back().sum, dist.sample(c));
}

TEST(Advance, NoReinforcementIsIid) {
  // alpha = 0: every step is a fresh draw, so the stream is consumed exactly like
  // one move uniform followed by one innovation per step.
  const WalkParams params{0.3, 0.0, StepDistribution::uniform(-1.0, 1.0)};
  RandomStream rng(4);
  RandomStream ref(4);
  WalkState state = WalkState::start(params.dist, rng);
  ref.uniform01();
  for (int i = 0; i < 1000; ++i) {
    const double x = advance(state, params, rng);
    ref.uniform01();
    ASSERT_EQ(x, params.dist.sample(ref));
  }
}

TEST(Advance, FullPositiveMemoryRepeatsFirstStep) {
  const WalkParams params{1.0, 1.0, StepDistribution::gaussian(0.0, 1.0)};
  RandomStream rng(3);
  WalkState state = WalkState::start(params.dist, rng);
  const double x1 = state.running_sum();
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(advance(state, params, rng), x1);

  const auto t = simulate_trajectory({1.0, 1.0, StepDistribution::rademacher(0.4)}, 5000, {}, 8);
  EXPECT_EQ(std::abs(t.values.back().sum), 5000.0);
}

TEST(Advance, FullNegativeMemoryFlipsSecondStep) {
  const WalkParams params{0.0, 1.0, StepDistribution::rademacher(0.5)};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomStream rng(seed);
    WalkState state = WalkState::start(params.dist, rng);
    const double x1 = state.running_sum();
    EXPECT_EQ(advance(state, params, rng), -x1);
    EXPECT_EQ(state.running_sum(), 0.0);
  }
}

TEST(Advance, SignPreservedWithPositiveSteps) {
  for (double alpha : {0.0, 0.4, 0.9, 1.0}) {
    const auto t = simulate_trajectory({1.0, alpha, StepDistribution::rademacher(1.0)}, 10000, {}, 5);
    EXPECT_EQ(t.values.back().sum, 10000.0);
  }
}

TEST(Advance, BranchFrequencies) {
  const WalkParams params{0.3, 0.7, StepDistribution::rademacher(0.5)};
  RandomStream rng(12);
  std::array<double, 3> counts{};
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<int>(draw_move(params, rng))];
  const std::array<double, 3> probs{0.3 * 0.7, 0.7 * 0.7, 0.3};
  for (int j = 0; j < 3; ++j) {
    const double sd = std::sqrt(probs[j] * (1 - probs[j]) / n);
    EXPECT_NEAR(counts[j] / n, probs[j], 5 * sd) << j;
  }
}

TEST(ConditionalMean, Formula) {
  const auto state = WalkState::from_history(kPsetA.dist, std::vector<double>{1, 1, 1, 1, -1});
  EXPECT_NEAR(conditional_mean(state, kPsetA), 0.376, 1e-15);
  EXPECT_NEAR(conditional_mean(state, {0.9, 0.0, StepDistribution::rademacher(0.7)}), 0.4, 1e-15);
  EXPECT_NEAR(conditional_mean(state, {1.0, 1.0, StepDistribution::rademacher(0.7)}), 0.6, 1e-15);
}

TEST(ConditionalMean, MatchesDrawsFromFrozenState) {
  for (auto storage : {HistoryStorage::Flat, HistoryStorage::Counts}) {
    const auto state = WalkState::from_history(kPsetA.dist, std::vector<double>{1, 1, 1, 1, -1}, storage);
    RandomStream rng(21);
    double s1 = 0.0;
    double s2 = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
      const double x = reinforced_draw(state, kPsetA, rng);
      s1 += x;
      s2 += x * x;
    }
    const double mean = s1 / n;
    const double sd = std::sqrt((s2 / n - mean * mean) / n);
    EXPECT_NEAR(mean, 0.376, 5 * sd);
    EXPECT_EQ(state.n(), 5u);
  }
}

TEST(WalkState, RunningSumsAndCounts) {
  RandomStream rng(33);
  const WalkParams params{0.4, 0.8, StepDistribution::discrete({-1.0, 2.0, 3.5}, {0.2, 0.5, 0.3})};
  WalkState flat = WalkState::start(params.dist, rng, HistoryStorage::Flat);
  for (int i = 0; i < 5000; ++i) advance(flat, params, rng);
  const auto h = flat.history();
  EXPECT_EQ(h.size(), flat.n());
  EXPECT_NEAR(std::accumulate(h.begin(), h.end(), 0.0), flat.running_sum(), 1e-9);

  WalkState counts = WalkState::start(params.dist, rng, HistoryStorage::Counts);
  for (int i = 0; i < 5000; ++i) advance(counts, params, rng);
  const auto c = counts.counts();
  EXPECT_EQ(std::accumulate(c.begin(), c.end(), std::uint64_t{0}), counts.n());
  double sum = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) sum += static_cast<double>(c[j]) * counts.atoms()[j];
  EXPECT_NEAR(sum, counts.running_sum(), 1e-9);

  EXPECT_THROW(WalkState::from_history(params.dist, std::vector<double>{0.5}, HistoryStorage::Counts),
               DomainError);
  EXPECT_THROW(WalkState::start(StepDistribution::uniform(0, 1), rng, HistoryStorage::Counts), DomainError);
}

TEST(WalkState, RademacherSumsExact) {
  const auto t = simulate_trajectory(kPsetA, 100000, {}, 17, HistoryStorage::Flat);
  EXPECT_EQ(t.values.back().sum_sq, 100000.0);
  EXPECT_EQ(t.values.back().sum, std::round(t.values.back().sum));
}

// Flat and count storage cannot give the same values path by path (the same
// uniform index points into differently ordered histories), but they must read
// the same decision stream: same moves, same innovations, same stream state.
TEST(WalkState, StoragesConsumeTheSameStream) {
  const WalkParams params{0.3, 0.7, StepDistribution::discrete({-1.0, 2.0}, {0.4, 0.6})};
  RandomStream ra(55);
  RandomStream rb(55);
  WalkState a = WalkState::start(params.dist, ra, HistoryStorage::Flat);
  WalkState b = WalkState::start(params.dist, rb, HistoryStorage::Counts);
  EXPECT_EQ(a.running_sum(), b.running_sum());
  for (int i = 0; i < 20000; ++i) {
    const Move ma = draw_move(params, ra);
    const Move mb = draw_move(params, rb);
    ASSERT_EQ(ma, mb);
    if (ma == Move::Innovate) {
      ASSERT_EQ(a.append_innovation(params.dist, ra), b.append_innovation(params.dist, rb));
    } else {
      a.append_pick(ra, ma == Move::FlipCopy);
      b.append_pick(rb, mb == Move::FlipCopy);
    }
  }
  EXPECT_EQ(ra, rb);
}

TEST(WalkState, StoragesAgreeInDistribution) {
  const WalkParams params{0.8, 0.6, StepDistribution::discrete({-1.0, 2.0}, {0.4, 0.6})};
  const int reps = 4000;
  double mean[2] = {0, 0};
  double sq[2] = {0, 0};
  int k = 0;
  for (auto storage : {HistoryStorage::Flat, HistoryStorage::Counts}) {
    for (int i = 0; i < reps; ++i) {
      const double x = simulate_trajectory(params, 2000, {}, stream_seed(k, i), storage).values.back().sum;
      mean[k] += x / reps;
      sq[k] += x * x / reps;
    }
    ++k;
  }
  const double var0 = sq[0] - mean[0] * mean[0];
  const double var1 = sq[1] - mean[1] * mean[1];
  EXPECT_NEAR(mean[0], mean[1], 5 * std::sqrt((var0 + var1) / reps));
  EXPECT_NEAR(var0 / var1, 1.0, 5 * std::sqrt(4.0 / reps));
}

TEST(Trajectory, CheckpointsNormalized) {
  const std::vector<std::uint64_t> cps{50, 10, 10, 100};
  const auto grid = normalize_checkpoints(200, cps);
  EXPECT_EQ(grid, (std::vector<std::uint64_t>{10, 50, 100, 200}));
  EXPECT_THROW(normalize_checkpoints(200, std::vector<std::uint64_t>{0}), CheckpointOutOfRange);
  EXPECT_THROW(normalize_checkpoints(200, std::vector<std::uint64_t>{201}), CheckpointOutOfRange);

  const auto t = simulate_trajectory(kPsetA, 200, cps, 1);
  EXPECT_EQ(t.horizon(), 200u);
  EXPECT_EQ(t.at(50).n, 50u);
  EXPECT_THROW(t.at(51), CheckpointOutOfRange);

  const auto geo = geometric_checkpoints(1000);
  EXPECT_EQ(geo.front(), 1u);
  EXPECT_EQ(geo.back(), 1000u);
  for (std::size_t i = 1; i < geo.size(); ++i) EXPECT_LT(geo[i - 1], geo[i]);
}

TEST(Trajectory, CheckpointsDoNotChangeThePath) {
  const auto full = simulate_trajectory(kPsetA, 5000, geometric_checkpoints(5000), 3);
  const auto end = simulate_trajectory(kPsetA, 5000, {}, 3);
  EXPECT_EQ(full.values.back(), end.values.back());
}

TEST(Trajectory, Deterministic) {
  const WalkParams params{0.6, 0.9, StepDistribution::gaussian(0.2, 1.0)};
  const auto a = simulate_trajectory(params, 20000, geometric_checkpoints(20000), 99);
  const auto b = simulate_trajectory(params, 20000, geometric_checkpoints(20000), 99);
  EXPECT_EQ(a.values, b.values);
  const auto c = simulate_trajectory(params, 20000, {}, 100);
  EXPECT_NE(a.values.back().sum, c.values.back().sum);
}

TEST(Trajectory, CsvFormat) {
  Trajectory t{kPsetA, 0, {{1, 1.0, 1.0}, {3, 0.1, 2.0}}};
  std::ostringstream out;
  write_trajectory_csv(out, t);
  EXPECT_EQ(out.str(), "n,T_n,sum_sq\n1,1,1\n3,0.10000000000000001,2\n");
}

TEST(MarginalLaw, SquaredStepMatchesInnovation) {
  const WalkParams params{0.3, 0.8, StepDistribution::uniform(-1.0, 1.0)};
  const std::array<std::uint64_t, 4> ks{1, 10, 100, 1000};
  const int reps = 20000;
  std::array<double, 4> s1{}, s2{};
  for (int i = 0; i < reps; ++i) {
    RandomStream rng(stream_seed(404, i));
    WalkState state = WalkState::start(params.dist, rng);
    double x = state.running_sum();
    std::size_t j = 0;
    for (std::uint64_t step = 1; step <= 1000; ++step) {
      if (step == ks[j]) {
        s1[j] += x * x;
        s2[j] += x * x * x * x;
        ++j;
      }
      if (step < 1000) x = advance(state, params, rng);
    }
  }
  for (std::size_t j = 0; j < ks.size(); ++j) {
    const double mean = s1[j] / reps;
    const double se = std::sqrt((s2[j] / reps - mean * mean) / reps);
    EXPECT_LE(std::abs(mean - 1.0 / 3.0), 5 * se) << "k=" << ks[j];
  }
}

TEST(Gradual, CutoffValidation) {
  EXPECT_THROW((GradualMemorySpec{10, 10, 0.5}.validate()), InvalidMemoryCutoff);
  EXPECT_THROW((GradualMemorySpec{10, 0, 0.5}.validate()), InvalidMemoryCutoff);
  EXPECT_THROW(simulate_gradual(kPsetA, {5, 7, 0.5}, 1), InvalidMemoryCutoff);
  EXPECT_NO_THROW((GradualMemorySpec{10, 9, 0.9}.validate()));
}

TEST(Gradual, NoReinforcementIsIidSum) {
  // alpha = 0: first m steps are the walk (one move uniform + one draw per
  // step after the first), the rest one move uniform + one draw each.
  const WalkParams params{0.5, 0.0, StepDistribution::gaussian(0.0, 1.0)};
  const auto out = simulate_gradual(params, {100, 40, 0.4}, 6);
  RandomStream ref(6);
  double sum = params.dist.sample(ref);
  double t_m = 0.0;
  for (int j = 2; j <= 100; ++j) {
    ref.uniform01();
    sum += params.dist.sample(ref);
    if (j == 40) t_m = sum;
  }
  EXPECT_EQ(out.t_mn, t_m);
  EXPECT_NEAR(out.s_n, sum, 1e-12);
}

TEST(Gradual, LastStepOnly) {
  const WalkParams params{1.0, 1.0, StepDistribution::rademacher(0.5)};
  const auto out = simulate_gradual(params, {50, 49, 0.98}, 2);
  EXPECT_EQ(std::abs(out.t_mn), 49.0);
  EXPECT_EQ(out.s_n, out.t_mn * 50.0 / 49.0);
}

TEST(Gradual, DrawsFromFrozenPrefixHaveConditionalMean) {
  // every X' shares the frozen prefix, so their mean is a T_m / m + (1 - alpha) mu1
  RandomStream rng(8);
  WalkState prefix = WalkState::start(kPsetA.dist, rng);
  for (int i = 0; i < 999; ++i) advance(prefix, kPsetA, rng);
  const double target = conditional_mean(prefix, kPsetA);
  double s1 = 0.0, s2 = 0.0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const double x = reinforced_draw(prefix, kPsetA, rng);
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / n;
  EXPECT_NEAR(mean, target, 5 * std::sqrt((s2 / n - mean * mean) / n));
  EXPECT_EQ(prefix.n(), 1000u);
}

TEST(Gradual, CoupledRunSharesPrefix) {
  const auto a = simulate_gradual(kPsetA, {1000, 500, 0.5}, 77);
  const auto b = simulate_gradual_coupled(kPsetA, {1000, 500, 0.5}, 10000, 77);
  EXPECT_EQ(a.s_n, b.s_n);
  EXPECT_EQ(a.t_mn, b.t_mn);
  EXPECT_EQ(b.long_horizon, 10000u);
  EXPECT_EQ(a.long_horizon, 0u);
}
