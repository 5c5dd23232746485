#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "memforage/circuit.hpp"
#include "memforage/environment.hpp"
#include "memforage/strategy.hpp"
#include "support/reference.hpp"

namespace memforage {
namespace {

std::vector<MemristorState> rich_states() { return preset("rich").states(); }

Topology all_in_series(std::size_t n) {
  Branch b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = i;
  return {{b}};
}

TEST(BranchCurrent, SingletonAtROff) {
  auto s = std::vector{make_state({100.0, 100.0, 1.0})};
  EXPECT_DOUBLE_EQ(branch_current({0}, s, 5.0), 0.05);
}

TEST(BranchCurrent, RichPresetAtStart) {
  const auto s = rich_states();
  EXPECT_NEAR(branch_current({0, 1, 2, 3, 4}, s, 5.0), 5.0 / 22.5, 1e-15);
  EXPECT_NEAR(branch_current({0, 1, 2, 3, 4}, s, 5.0), 0.22222, 1e-5);
}

TEST(BranchCurrent, ZeroSupply) {
  const auto s = rich_states();
  EXPECT_EQ(branch_current({0, 1, 2}, s, 0.0), 0.0);
  EXPECT_THROW(branch_current({}, s, 5.0), std::invalid_argument);
}

TEST(VoltagesAcross, Singleton) {
  const auto s = rich_states();
  const auto v = voltages_across({3}, s, 5.0);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_DOUBLE_EQ(v[0], 5.0);
}

TEST(VoltagesAcross, ProportionalShare) {
  const auto s = rich_states();
  const auto v = voltages_across({0, 1, 2, 3, 4}, s, 5.0);
  EXPECT_NEAR(v[3], 5.0 * 15.0 / 22.5, 1e-12);
  EXPECT_NEAR(v[0] + v[1] + v[2] + v[3] + v[4], 5.0, 1e-12);
}

TEST(VoltagesAcross, EqualAtFullDepletion) {
  auto s = rich_states();
  for (auto& m : s) {
    m.q = depletion_charge(m.params);
    m.clamped = true;
  }
  for (double v : voltages_across({0, 1, 2, 3, 4}, s, 5.0)) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(AllocationShare, Singleton) {
  const auto s = rich_states();
  EXPECT_DOUBLE_EQ(allocation_share(2, {{{2}}}, s, 5.0), 1.0);
}

TEST(AllocationShare, WorstSiteTakesMostInSeries) {
  const auto s = rich_states();
  EXPECT_NEAR(allocation_share(3, all_in_series(5), s, 5.0), 15.0 / 22.5, 1e-12);
}

TEST(AllocationShare, LeafcutterPhaseTwoResidual) {
  auto s = rich_states();
  s[2].q = depletion_charge(s[2].params);
  s[2].clamped = true;
  const Topology t{{{0, 1, 3, 4}, {2}}};
  const double residual = 25.0 / 100.0;
  const double series = 25.0 / 22.0;
  EXPECT_NEAR(allocation_share(2, t, s, 5.0), residual / (residual + series), 1e-12);
  EXPECT_NEAR(allocation_share(2, t, s, 5.0), 0.1803, 1e-4);
  double total = 0.0;
  for (std::size_t i = 0; i < 5; ++i) total += allocation_share(i, t, s, 5.0);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(AllocationShare, UnwiredSiteIsAnError) {
  const auto s = rich_states();
  EXPECT_THROW(allocation_share(1, {{{2}}}, s, 5.0), std::invalid_argument);
}

TEST(Topology, Validation) {
  EXPECT_NO_THROW(validate(Topology{{{0, 1}, {2}}}, 3));
  EXPECT_THROW(validate(Topology{}, 3), std::invalid_argument);
  EXPECT_THROW(validate(Topology{{{}}}, 3), std::invalid_argument);
  EXPECT_THROW(validate(Topology{{{0, 1}, {1}}}, 3), std::invalid_argument);
  EXPECT_THROW(validate(Topology{{{0, 3}}}, 3), std::invalid_argument);
}

TEST(Step, RejectsNonPositiveDt) {
  const StaticTopology wiring(all_in_series(5));
  const auto state = make_initial_state(rich_states(), 5.0, wiring);
  EXPECT_THROW(step(state, 0.0), std::invalid_argument);
}

TEST(Step, RecordsStartOfStepQuantities) {
  const StaticTopology wiring(all_in_series(5));
  const auto state = make_initial_state(rich_states(), 5.0, wiring);
  const auto out = step(state, 0.001);
  EXPECT_EQ(out.record.step, 0);
  EXPECT_EQ(out.record.time, 0.0);
  EXPECT_NEAR(out.record.influx, 5.0 / 22.5, 1e-15);
  EXPECT_NEAR(out.record.delivered, 0.001 * 5.0 / 22.5, 1e-15);
  EXPECT_EQ(out.state.step, 1);
  EXPECT_DOUBLE_EQ(out.state.time, 0.001);
  for (const auto& site : out.state.sites) EXPECT_NEAR(site.q, 0.001 * 5.0 / 22.5, 1e-15);
  EXPECT_TRUE(out.events.empty());
}

TEST(Step, InterpolatesCrossingInsideStep) {
  std::vector<MemristorState> sites{make_state({15.0, 100.0, 1.0})};
  const StaticTopology wiring(Topology{{Branch{0}}});
  auto state = make_initial_state(sites, 5.0, wiring);
  state.sites[0].q = 0.05;
  const double current = 5.0 / memristance(state.sites[0]);
  const auto out = step(state, 1.0, &wiring);
  ASSERT_EQ(out.events.size(), 1u);
  EXPECT_NEAR(out.events[0].time, (17.0 / 300.0 - 0.05) / current, 1e-12);
  // Last site clamped: the step ends at the crossing.
  EXPECT_DOUBLE_EQ(out.state.time, out.events[0].time);
}

TEST(Run, SiteAlreadyAtROffDepletesBeforeAnyStep) {
  const StaticTopology wiring(Topology{{Branch{0}}});
  const auto state = make_initial_state({make_state({100.0, 100.0, 1.0}, "spent")}, 5.0, wiring);
  const auto trace = run(state, wiring, {});
  ASSERT_TRUE(trace.completed());
  ASSERT_EQ(trace.events.size(), 1u);
  EXPECT_EQ(trace.events[0].time, 0.0);
  EXPECT_EQ(trace.steps_taken, 0);
  EXPECT_FALSE(trace.depletion_step.has_value());
}

TEST(Run, RichAllSitesFirstAndLastDepletion) {
  const Environment env = preset("rich");
  const auto trace = run_strategy(env, all_sites_schedule(env.params()), default_run_options(env));
  ASSERT_TRUE(trace.completed());
  ASSERT_EQ(trace.events.size(), 5u);
  EXPECT_NEAR(trace.events.front().time, 0.9775, 0.9775 * 0.005);
  EXPECT_NEAR(trace.depletion_time, 161.81, 161.81 * 0.005);
  // Worst site first, best last.
  const std::vector<std::size_t> expected{3, 4, 1, 0, 2};
  for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(trace.events[k].site, expected[k]);
  EXPECT_EQ(trace.records.back().step, *trace.depletion_step);
}

TEST(Run, PoorAllSitesFinalDepletion) {
  const Environment env = preset("poor");
  const auto trace = run_strategy(env, all_sites_schedule(env.params()), default_run_options(env));
  ASSERT_TRUE(trace.completed());
  EXPECT_NEAR(trace.depletion_time, 179.15, 179.15 * 0.005);
}

TEST(Run, RichLeafcutter) {
  const Environment env = preset("rich");
  const auto schedule = leafcutter_schedule(env.params());
  const auto trace = run_strategy(env, schedule, default_run_options(env));
  ASSERT_TRUE(trace.completed());
  const double phase1 = *trace.site_depletion_times()[2];
  EXPECT_NEAR(phase1, 20.00, 20.0 * 0.005);
  EXPECT_NEAR(trace.depletion_time - phase1, 61.81, 61.81 * 0.005);
  EXPECT_NEAR(trace.depletion_time, 81.81, 81.81 * 0.005);
}

TEST(Run, MaxStepsExhaustedIsIncomplete) {
  const Environment env = preset("rich");
  RunOptions options = default_run_options(env);
  options.max_steps = 1;
  const auto trace = run_strategy(env, all_sites_schedule(env.params()), options);
  EXPECT_FALSE(trace.completed());
  EXPECT_EQ(trace.status, RunStatus::Incomplete);
  EXPECT_EQ(trace.records.size(), 1u);
  EXPECT_EQ(trace.steps_taken, 1);
}

TEST(Run, RejectsBadOptions) {
  const Environment env = preset("rich");
  const auto schedule = all_sites_schedule(env.params());
  RunOptions options;
  options.max_steps = 0;
  EXPECT_THROW(run_strategy(env, schedule, options), std::invalid_argument);
  options = {};
  options.record_every = 0;
  EXPECT_THROW(run_strategy(env, schedule, options), std::invalid_argument);
}

TEST(Run, RecordThinningKeepsFinalStep) {
  const Environment env = preset("poor");
  RunOptions options = default_run_options(env);
  options.record_every = 1000;
  const auto trace = run_strategy(env, leafcutter_schedule(env.params()), options);
  ASSERT_TRUE(trace.completed());
  for (std::size_t k = 0; k + 1 < trace.records.size(); ++k) EXPECT_EQ(trace.records[k].step % 1000, 0);
  EXPECT_EQ(trace.records.back().step, *trace.depletion_step);
}

// Invariants over whole runs.
TEST(RunInvariants, ConservationBoundsAndMonotonicity) {
  for (const char* name : {"rich", "poor"}) {
    const Environment env = preset(name);
    for (auto kind : {StrategyKind::AllSites, StrategyKind::Sequential, StrategyKind::Leafcutter}) {
      const auto schedule = make_schedule(kind, env.params());
      RunOptions options = default_run_options(env);
      options.record_every = 7;
      const auto trace = run_strategy(env, schedule, options);
      ASSERT_TRUE(trace.completed());
      std::vector<double> last_m(trace.site_count(), 0.0);
      double last_delivered = 0.0;
      for (const TraceRecord& r : trace.records) {
        std::vector<double> drop(r.branch_currents.size(), 0.0);
        double influx = 0.0;
        for (double i : r.branch_currents) influx += i;
        ASSERT_NEAR(r.influx, influx, 1e-12 * influx);
        for (std::size_t i = 0; i < trace.site_count(); ++i) {
          ASSERT_GE(r.m[i], trace.params[i].r_on);
          ASSERT_LE(r.m[i], trace.params[i].r_off);
          ASSERT_GE(r.m[i], last_m[i]);
          last_m[i] = r.m[i];
          if (r.branch_of[i] >= 0) drop[r.branch_of[i]] += r.v[i];
          else ASSERT_EQ(r.v[i], 0.0);
        }
        for (double d : drop) ASSERT_NEAR(d, env.supply_v, 1e-9 * env.supply_v);
        ASSERT_GE(r.delivered, last_delivered);
        last_delivered = r.delivered;
      }
    }
  }
}

TEST(RunInvariants, SeriesMembersShareCharge) {
  const Environment env = preset("rich");
  RunOptions options = default_run_options(env);
  options.record_every = 997;
  const auto trace = run_strategy(env, all_sites_schedule(env.params()), options);
  for (const TraceRecord& r : trace.records) {
    for (std::size_t i = 1; i < r.q.size(); ++i) ASSERT_EQ(r.q[i], r.q[0]);
  }
}

TEST(RunInvariants, SeriesDepletionOrderOnRandomEnvironments) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> m0(0.2, 95.0);
  for (int trial = 0; trial < 25; ++trial) {
    Environment env;
    env.name = "random";
    env.dt = 0.01;
    for (int k = 0; k < 5; ++k) env.sites.push_back({"s" + std::to_string(k), m0(rng)});
    RunOptions options = default_run_options(env);
    options.keep_records = false;
    const auto trace = run_strategy(env, all_sites_schedule(env.params()), options);
    ASSERT_TRUE(trace.completed());
    ASSERT_EQ(trace.events.size(), 5u);
    for (std::size_t k = 1; k < 5; ++k) {
      ASSERT_GT(env.sites[trace.events[k - 1].site].m0, env.sites[trace.events[k].site].m0);
      ASSERT_LT(trace.events[k - 1].time, trace.events[k].time);
    }
  }
}

TEST(RunInvariants, SupplyScalingIsExactWithScaledStep) {
  const Environment env = preset("rich");
  Environment doubled = env;
  doubled.supply_v = 10.0;
  doubled.dt = env.dt / 2.0;
  const auto schedule = leafcutter_schedule(env.params());
  RunOptions a = default_run_options(env);
  a.keep_records = false;
  RunOptions b = default_run_options(doubled);
  b.keep_records = false;
  const auto base = run_strategy(env, schedule, a);
  const auto fast = run_strategy(doubled, schedule, b);
  const auto t0 = base.site_depletion_times();
  const auto t1 = fast.site_depletion_times();
  for (std::size_t i = 0; i < t0.size(); ++i) {
    EXPECT_NEAR(*t1[i], *t0[i] / 2.0, 1e-6 * *t0[i]);
  }
}

TEST(RunInvariants, ConvergesLinearlyTowardClosedForm) {
  const Environment env = preset("rich");
  const auto reference = testing::ref_series_depletion_times(testing::ref_sites(testing::kRichM0), 5.0);
  const double oracle = *std::max_element(reference.begin(), reference.end());
  double previous = 0.0;
  for (double dt : {0.004, 0.002, 0.001}) {
    RunOptions options = default_run_options(env);
    options.dt = dt;
    options.keep_records = false;
    const double error = std::abs(run_strategy(env, all_sites_schedule(env.params()), options).depletion_time - oracle);
    if (previous > 0.0) {
      EXPECT_GE(error / previous, 0.3);
      EXPECT_LE(error / previous, 0.7);
    }
    previous = error;
  }
}

}  // namespace
}  // namespace memforage
