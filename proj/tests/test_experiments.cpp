#include <gtest/gtest.h>

#include <cmath>

#include "gt/experiments.hpp"

namespace gt {
namespace {

SweepSpec strong(ProbeSpec probe, std::vector<double> sigmas, int cutoff = 60) {
  SweepSpec s;
  s.experiment = ExperimentKind::strong_fixed_state;
  s.probes = {probe};
  s.sigma_grid = std::move(sigmas);
  s.cutoff = cutoff;
  return s;
}

TEST(StrongConvergence, VacuumClosedForm) {
  const auto spec = strong({ProbeKind::vacuum}, {1.0, 0.1, 0.01});
  const auto rows = run_strong_convergence(spec);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.value, r.sigma_bar / (1.0 + r.sigma_bar), 1e-15);
    EXPECT_NEAR(*r.oracle, r.value, 1e-9);
  }
  EXPECT_TRUE(check_rows(spec, rows).empty());
}

TEST(StrongConvergence, TmsvPinned) {
  const auto rows = run_strong_convergence(strong({ProbeKind::tmsv, 1.0}, {0.5}));
  EXPECT_NEAR(rows[0].value, 0.6, 1e-15);
  EXPECT_NEAR(*rows[0].oracle, 0.6, 1e-9);
}

TEST(StrongConvergence, BaselMonotoneWithExplicitFloor) {
  auto spec = strong({ProbeKind::basel}, {1.0, 0.1, 0.01, 0.001}, 2000);
  EXPECT_THROW(run_strong_convergence(spec), TruncationError);
  spec.truncation_floor = 0.999;
  const auto rows = run_strong_convergence(spec);
  EXPECT_TRUE(check_rows(spec, rows).empty());
  EXPECT_NEAR(rows[0].value, 0.8429434283784314, 1e-8);
  EXPECT_NEAR(rows[3].value, 0.009980746959102449, 1e-8);
  EXPECT_LT(rows[3].value, 0.02);
}

TEST(UniformDivergence, ClosedFormCovarianceAndOracle) {
  SweepSpec spec;
  spec.experiment = ExperimentKind::uniform_divergence;
  spec.sigma_grid = {0.1};
  spec.n_s_grid = {0.0, 1.0, 2.0, 1000.0};
  spec.cutoff = 60;
  const auto rows = run_uniform_divergence(spec);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NEAR(rows[0].value, 0.1 / 1.1, 1e-12);
  EXPECT_NEAR(rows[1].value, 0.23076923076923077, 1e-12);
  EXPECT_NEAR(*rows[1].oracle, 0.23076923076923077, 1e-4);
  EXPECT_NEAR(*rows[2].oracle, *rows[2].analytic, 1e-4);
  EXPECT_NEAR(rows[3].value, 0.99502734957732471, 1e-9);
  EXPECT_FALSE(rows[3].oracle.has_value());
  for (const auto& r : rows) EXPECT_NEAR(r.value, *r.analytic, 1e-12);
  EXPECT_TRUE(check_rows(spec, rows).empty());
}

TEST(TensorPower, ProductVacuumAndEntangledProbe) {
  SweepSpec spec;
  spec.experiment = ExperimentKind::tensor_power;
  spec.probes = {{ProbeKind::product_vacuum}};
  spec.sigma_grid = {1.0, 0.3, 0.01, 1e-4};
  spec.cutoff = 20;
  auto rows = run_tensor_power(spec);
  for (const auto& r : rows) {
    const double f = 1.0 / (1.0 + r.sigma_bar);
    EXPECT_NEAR(r.value * r.value, 1.0 - f * f, 1e-12);
    EXPECT_NEAR(*r.oracle, r.value, 1e-6);
  }
  EXPECT_TRUE(check_rows(spec, rows).empty());

  spec.probes = {{ProbeKind::tmsv, 1.0}};
  spec.sigma_grid = {0.3};
  spec.cutoff = 40;
  rows = run_tensor_power(spec);
  EXPECT_GT(rows[0].value, 0.0);
  EXPECT_LE(*rows[0].oracle, *rows[0].bound);
  EXPECT_NEAR(*rows[0].oracle, rows[0].value, 1e-4);
  EXPECT_TRUE(check_rows(spec, rows).empty());
}

TEST(AdaptiveSerial, GaussianAdaptorsRespectTelescoping) {
  SweepSpec spec;
  spec.experiment = ExperimentKind::adaptive_serial;
  spec.probes = {{ProbeKind::tmsv, 1.0}};
  spec.channel = ChannelDescriptor{ChannelKind::thermal, {0.5, 0.5}, {}};
  spec.sigma_grid = {1.0, 0.1, 0.01};
  spec.uses = 3;
  spec.adaptor = AdaptorKind::random_symplectic;
  spec.instances = 10;
  spec.seed = 5;
  const auto rows = run_adaptive_serial(spec);
  ASSERT_EQ(rows.size(), 30u);
  for (const auto& r : rows) {
    EXPECT_LE(r.value, *r.bound + 1e-12);
    EXPECT_LE(*r.bound, *r.uniform_bound + 1e-12);
  }
  EXPECT_TRUE(check_rows(spec, rows).empty());
  EXPECT_LT(rows.back().value, rows.front().value);
}

TEST(AdaptiveSerial, IdentityAdaptorsMatchSerialUses) {
  SweepSpec spec;
  spec.experiment = ExperimentKind::adaptive_serial;
  spec.probes = {{ProbeKind::tmsv, 1.0}};
  spec.channel = ChannelDescriptor{ChannelKind::identity, {}, {}};
  spec.sigma_grid = {0.2};
  spec.uses = 2;
  const auto rows = run_adaptive_serial(spec);
  // Two teleportations in series add noise 2 sigma.
  EXPECT_NEAR(rows[0].value, std::sqrt(0.4 * 3.0 / (1.0 + 0.4 * 3.0)), 1e-10);
  EXPECT_FALSE(rows[0].uniform_bound.has_value());
}

TEST(AdaptiveSerial, FockAdaptors) {
  for (auto adaptor : {AdaptorKind::swap, AdaptorKind::phase_rotation, AdaptorKind::reset}) {
    SweepSpec spec;
    spec.experiment = ExperimentKind::adaptive_serial;
    spec.probes = {{ProbeKind::tmsv, 0.5}};
    spec.channel = ChannelDescriptor{ChannelKind::pure_loss, {0.6}, {}};
    spec.sigma_grid = {0.3, 0.05};
    spec.uses = 2;
    spec.adaptor = adaptor;
    spec.cutoff = 25;
    spec.instances = 2;
    const auto rows = run_adaptive_serial(spec);
    EXPECT_TRUE(check_rows(spec, rows).empty()) << to_string(adaptor);
    for (const auto& r : rows) EXPECT_GT(r.value, 0.0);
  }
}

TEST(BoundVsOracle, ThermalProbesBelowBound) {
  SweepSpec spec;
  spec.experiment = ExperimentKind::bound_vs_oracle;
  spec.probes = {{ProbeKind::vacuum}, {ProbeKind::tmsv, 1.0}, {ProbeKind::tmsv, 2.0}, {ProbeKind::basel}};
  spec.channel = ChannelDescriptor{ChannelKind::thermal, {0.5, 1.0}, {}};
  spec.sigma_grid = {0.3, 0.1};
  spec.cutoff = 60;
  const auto rows = run_bound_vs_oracle(spec);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_TRUE(check_rows(spec, rows).empty());
  for (const auto& r : rows) {
    if (r.analytic) EXPECT_NEAR(*r.oracle, *r.analytic, 1e-6);
  }
}

TEST(BoundVsOracle, LeakageRaisesTruncationError) {
  SweepSpec spec;
  spec.experiment = ExperimentKind::bound_vs_oracle;
  spec.probes = {{ProbeKind::tmsv, 2.0}};
  spec.channel = ChannelDescriptor{ChannelKind::amplifier, {2.0, 1.0}, {}};
  spec.sigma_grid = {0.3};
  spec.cutoff = 30;
  try {
    run_bound_vs_oracle(spec);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_EQ(e.row(), 0u);
  }
}

TEST(SweepCsv, HeaderMetadataAndDeterminism) {
  auto spec = strong({ProbeKind::vacuum}, {1.0, 0.1});
  const auto csv = rows_to_csv(spec, run_strong_convergence(spec));
  EXPECT_EQ(csv.rfind("experiment,probe,sigma_bar", 0), 0u);
  EXPECT_NE(csv.find("0.090909090909090912"), std::string::npos);
  const auto last = csv.substr(csv.rfind('#'));
  EXPECT_NE(last.find("config_hash=fnv1a64:"), std::string::npos);
  EXPECT_NE(last.find(GTSIM_VERSION), std::string::npos);
  EXPECT_EQ(csv, rows_to_csv(spec, run_strong_convergence(spec, 2)));
  spec.output_path = "elsewhere.csv";
  EXPECT_EQ(csv, rows_to_csv(spec, run_strong_convergence(spec)));
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(SweepJson, StrictParsing) {
  const auto doc = Json::parse(R"({"experiment": "strong_fixed_state", "state": {"kind": "tmsv", "n_s": 1},
                                   "sigma_grid": [1, 0.1]})");
  const auto spec = sweep_spec_from_json(doc);
  EXPECT_EQ(spec.probes[0].n_s, 1.0);
  EXPECT_EQ(sweep_spec_to_json(sweep_spec_from_json(sweep_spec_to_json(spec))), sweep_spec_to_json(spec));
  auto bad = doc;
  bad["sigma_grid"] = {0.1, 1.0};
  EXPECT_THROW(sweep_spec_from_json(bad), std::invalid_argument);
  bad = doc;
  bad["extra"] = 1;
  EXPECT_THROW(sweep_spec_from_json(bad), std::invalid_argument);
  bad = doc;
  bad["adaptor"] = "measure_and_prepare";
  EXPECT_THROW(sweep_spec_from_json(bad), std::invalid_argument);
}

}  // namespace
}  // namespace gt
