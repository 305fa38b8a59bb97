#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qrep/analysis.hpp"
#include "qrep/code_factory.hpp"

using namespace qrep;

namespace {

TrialPlan lookup_segment_plan(double p_t) {
  TrialPlan plan;
  plan.model = model_for_total_error(p_t, NoiseSplit::pb_only);
  plan.decoder.kind = DecoderConfig::Kind::lookup;
  plan.mode = TrialMode::segment;
  return plan;
}

std::vector<SweepPoint> synthetic_table(double c, double p0, double alpha, double delta,
                                        const std::vector<size_t>& sizes,
                                        const std::vector<double>& grid,
                                        uint64_t trials_for_noise, uint64_t seed) {
  std::vector<SweepPoint> table;
  RngStream rng(seed, 0);
  for (size_t n : sizes)
    for (double pt : grid) {
      SweepPoint p;
      p.code_id = "synthetic" + std::to_string(n);
      p.n = n;
      p.p_t = pt;
      double pl = c * std::pow(pt / p0, alpha * std::pow(double(n), delta));
      if (trials_for_noise == 0) {
        p.trials = 1000000;
        p.failures = uint64_t(pl * 1e6);
        p.p_l = pl;
        p.ci_lo = 0.0;
        p.ci_hi = 0.0;  // width 0 -> unit weights in the fit
      } else {
        uint64_t fails = 0;
        for (uint64_t t = 0; t < trials_for_noise; ++t)
          if (rng.bernoulli(pl)) ++fails;
        p.trials = trials_for_noise;
        p.failures = fails;
        p.p_l = double(fails) / double(trials_for_noise);
        WilsonInterval w = wilson_interval(fails, trials_for_noise);
        p.ci_lo = w.lo;
        p.ci_hi = w.hi;
      }
      p.accepted = p.trials;
      table.push_back(p);
    }
  return table;
}

}  // namespace

TEST_CASE("wilson interval brackets the estimate") {
  WilsonInterval w = wilson_interval(10, 100);
  CHECK(w.lo < 0.1);
  CHECK(w.hi > 0.1);
  CHECK(w.lo > 0.0);
  WilsonInterval zero = wilson_interval(0, 100);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi > 0.0);
  CHECK(zero.hi < 0.05);
}

TEST_CASE("wilson interval empirical coverage near 95%") {
  const double p_true = 0.07;
  const uint64_t trials = 300;
  size_t covered = 0;
  const size_t reps = 1000;
  for (size_t rep = 0; rep < reps; ++rep) {
    RngStream rng(500, rep);
    uint64_t fails = 0;
    for (uint64_t t = 0; t < trials; ++t)
      if (rng.bernoulli(p_true)) ++fails;
    WilsonInterval w = wilson_interval(fails, trials);
    if (p_true >= w.lo && p_true <= w.hi) ++covered;
  }
  double coverage = double(covered) / double(reps);
  CHECK(coverage > 0.92);
  CHECK(coverage < 0.98);
}

TEST_CASE("noiseless trials never fail") {
  StabilizerCode code = builtin_code("steane713");
  TrialPlan plan;
  plan.model = NoiseModel{};
  plan.decoder.kind = DecoderConfig::Kind::lookup;
  plan.mode = TrialMode::segment;
  SweepPoint p = run_trials(code, plan, 500, 1, 2);
  CHECK(p.failures == 0);
}

TEST_CASE("far-above-threshold noise fails often on any code") {
  StabilizerCode code = builtin_code("steane713");
  SweepPoint p = run_trials(code, lookup_segment_plan(0.5), 2000, 2, 4);
  CHECK(p.p_l > 0.1);
}

TEST_CASE("failure counts are identical across worker counts") {
  StabilizerCode code = builtin_code("steane713");
  TrialPlan plan = lookup_segment_plan(0.06);
  SweepPoint w1 = run_trials(code, plan, 4000, 99, 1);
  SweepPoint w8 = run_trials(code, plan, 4000, 99, 8);
  CHECK(w1.failures == w8.failures);
  CHECK(w1.p_l == w8.p_l);
}

TEST_CASE("two-way mode books acceptance separately") {
  StabilizerCode code = builtin_code("c422");
  TrialPlan plan;
  plan.model = model_for_total_error(0.1, NoiseSplit::pb_only);
  plan.mode = TrialMode::distill_twoway;
  plan.decoder.kind = DecoderConfig::Kind::lookup;
  SweepPoint p = run_trials(code, plan, 3000, 7, 4);
  CHECK(p.accepted < p.trials);
  CHECK(p.accepted > 0);
  CHECK(p.failures <= p.accepted);
}

TEST_CASE("log grid endpoints and spacing") {
  auto g = log_grid(0.05, 0.13, 8);
  REQUIRE(g.size() == 8);
  CHECK(g.front() == 0.05);
  CHECK(g.back() == 0.13);
  double ratio = g[1] / g[0];
  for (size_t i = 2; i < g.size(); ++i)
    CHECK(g[i] / g[i - 1] == doctest::Approx(ratio).epsilon(1e-9));
}

TEST_CASE("model_for_total_error inverts to the requested p_t") {
  for (NoiseSplit split : {NoiseSplit::pb_only, NoiseSplit::equal}) {
    for (double pt : {0.02, 0.093, 0.3}) {
      NoiseModel m = model_for_total_error(pt, split);
      CHECK(total_bipartite(combined_single_party(m)) == doctest::Approx(pt).epsilon(1e-9));
    }
  }
}

TEST_CASE("sweep produces the full cross product and respects checkpoints") {
  StabilizerCode code = builtin_code("c422");
  std::string ck = "sweep_checkpoint_test.jsonl";
  std::remove(ck.c_str());
  SweepOptions opts;
  opts.plan.decoder.kind = DecoderConfig::Kind::lookup;
  opts.plan.mode = TrialMode::segment;
  opts.trials = 200;
  opts.master_seed = 3;
  opts.workers = 2;
  opts.checkpoint_path = ck;
  std::vector<double> grid{0.05, 0.1};
  auto t1 = sweep({code}, grid, opts);
  REQUIRE(t1.size() == 2);

  // resume: a second run must reuse the checkpoint and reproduce the table
  auto t2 = sweep({code}, grid, opts);
  REQUIRE(t2.size() == 2);
  for (size_t i = 0; i < 2; ++i) {
    CHECK(t1[i].failures == t2[i].failures);
    CHECK(t1[i].p_t == t2[i].p_t);
  }
  std::remove(ck.c_str());
}

TEST_CASE("fit recovers synthetic parameters within 1% (noiseless)") {
  std::vector<double> grid = log_grid(0.075, 0.12, 8);
  auto table = synthetic_table(0.1, 0.093, 0.9, 0.5, {625, 900, 1225}, grid, 0, 1);
  FitOptions opts;
  opts.pin_delta = true;
  opts.delta = 0.5;
  FitParams fit = fit_threshold(table, opts);
  CHECK(std::fabs(fit.c - 0.1) / 0.1 < 0.01);
  CHECK(std::fabs(fit.p0 - 0.093) / 0.093 < 0.01);
  CHECK(std::fabs(fit.alpha - 0.9) / 0.9 < 0.01);
}

TEST_CASE("fit with free delta recovers it on noiseless synthetic data") {
  std::vector<double> grid = log_grid(0.075, 0.12, 8);
  auto table = synthetic_table(0.1, 0.093, 0.9, 0.5, {625, 900, 1225}, grid, 0, 1);
  FitOptions opts;
  opts.pin_delta = false;
  opts.delta = 0.45;  // starting guess off the truth
  FitParams fit = fit_threshold(table, opts);
  CHECK(std::fabs(fit.delta - 0.5) < 0.02);
  CHECK(std::fabs(fit.p0 - 0.093) / 0.093 < 0.02);
}

TEST_CASE("fit under binomial noise recovers p0 within its standard error") {
  std::vector<double> grid = log_grid(0.075, 0.12, 8);
  auto table = synthetic_table(0.1, 0.093, 0.9, 0.5, {625, 900, 1225}, grid, 100000, 2);
  FitOptions opts;
  FitParams fit = fit_threshold(table, opts);
  CHECK(std::fabs(fit.p0 - 0.093) <= 3.0 * std::max(fit.se_p0, 1e-6));
}

TEST_CASE("fit error paths") {
  std::vector<double> grid = log_grid(0.08, 0.12, 4);
  auto single = synthetic_table(0.1, 0.093, 0.9, 0.5, {625}, grid, 0, 1);
  CHECK_THROWS_AS(fit_threshold(single, {}), std::invalid_argument);

  auto two_pts = synthetic_table(0.1, 0.093, 0.9, 0.5, {625, 900}, {0.08, 0.1}, 0, 1);
  CHECK_THROWS_AS(fit_threshold(two_pts, {}), std::invalid_argument);

  auto with_zero = synthetic_table(0.1, 0.093, 0.9, 0.5, {625, 900}, grid, 0, 1);
  with_zero[0].p_l = 0.0;
  CHECK_THROWS_AS(fit_threshold(with_zero, {}), std::invalid_argument);
}

TEST_CASE("fit is a consistent estimator as trial budgets grow") {
  std::vector<double> grid = log_grid(0.075, 0.12, 8);
  double prev_err = 1e9;
  for (uint64_t budget : {uint64_t(20000), uint64_t(200000), uint64_t(2000000)}) {
    auto table = synthetic_table(0.1, 0.093, 0.9, 0.5, {625, 900, 1225}, grid, budget, 5);
    FitParams fit = fit_threshold(table, {});
    double err = std::fabs(fit.p0 - 0.093);
    CHECK(err <= prev_err + 0.002);  // monotone up to noise slack
    prev_err = err;
  }
  CHECK(prev_err < 0.002);
}

TEST_CASE("plan picks the smallest adequate family size") {
  FitParams fit;
  fit.c = 0.1;
  fit.p0 = 0.093;
  fit.alpha = 0.9;
  fit.delta = 0.5;
  SegmentPlan plan = plan_code_size(10.0, 10.0, 1e-4, fit, 0.05);
  CHECK(plan.segments == 1);
  CHECK(plan.chosen_n >= 625);
  CHECK(plan.predicted_infidelity <= 1e-4);

  // doubling the distance doubles the predicted infidelity at fixed n
  SegmentPlan p1 = plan_code_size(100.0, 10.0, 1e-3, fit, 0.05);
  double pl_fixed_n = fit_predict(fit, p1.chosen_n, 0.05);
  CHECK(p1.segments == 10);
  CHECK(p1.predicted_infidelity == doctest::Approx(10.0 * pl_fixed_n));

  CHECK_THROWS_AS(plan_code_size(10.0, 10.0, 1e-4, fit, 0.1), std::invalid_argument);
}

TEST_CASE("csv round trip and header") {
  StabilizerCode code = builtin_code("c422");
  SweepPoint p = run_trials(code, lookup_segment_plan(0.08), 100, 4, 1);
  std::string csv = table_to_csv({p});
  CHECK(csv.rfind("code_id,n,p_t,trials,failures,p_l,ci_lo,ci_hi\n", 0) == 0);
  auto back = table_from_csv(csv);
  REQUIRE(back.size() == 1);
  CHECK(back[0].code_id == p.code_id);
  CHECK(back[0].n == p.n);
  CHECK(back[0].p_t == p.p_t);
  CHECK(back[0].failures == p.failures);
  CHECK(back[0].p_l == p.p_l);

  CHECK(table_to_csv({}) == "code_id,n,p_t,trials,failures,p_l,ci_lo,ci_hi\n");
}

TEST_CASE("svg plot renders polylines per code and the fit overlay") {
  std::vector<double> grid = log_grid(0.075, 0.12, 6);
  auto table = synthetic_table(0.1, 0.093, 0.9, 0.5, {625, 900}, grid, 100000, 9);
  FitParams fit = fit_threshold(table, {});
  std::string path = "svg_emit_test.svg";
  SvgDiagnostics diag = write_svg_plot(path, table, &fit);
  CHECK(diag.fit_within_ci_fraction >= 0.9);

  std::ifstream f(path);
  REQUIRE(f.good());
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') > 10);
  size_t polylines = 0;
  for (size_t pos = 0; (pos = text.find("<polyline", pos)) != std::string::npos; ++pos)
    ++polylines;
  CHECK(polylines == 4);  // data + fit per code size
  CHECK(text.find("n = 625") != std::string::npos);
  CHECK(text.find("n = 900") != std::string::npos);
  std::remove(path.c_str());
}
