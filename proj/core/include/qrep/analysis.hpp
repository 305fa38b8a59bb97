#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qrep/decode.hpp"
#include "qrep/noise.hpp"
#include "qrep/protocol.hpp"

namespace qrep {

struct WilsonInterval {
  double lo = 0.0, hi = 1.0;
};
// 95% by default (z = Phi^-1(0.975)).
WilsonInterval wilson_interval(uint64_t failures, uint64_t trials,
                               double z = 1.959963984540054);

enum class TrialMode { distill_oneway, distill_twoway, segment };
TrialMode trial_mode_from_string(const std::string& s);
std::string to_string(TrialMode m);

struct SweepPoint {
  std::string code_id;
  size_t n = 0;
  double p_t = 0.0;
  uint64_t trials = 0;
  uint64_t failures = 0;
  double p_l = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
  uint64_t accepted = 0;          // == trials outside two-way mode
  uint64_t decoder_failures = 0;
};

struct TrialPlan {
  NoiseModel model;
  DecoderConfig decoder;
  TrialMode mode = TrialMode::segment;
  size_t segments = 1;            // segment mode: chain length
  bool include_end_nodes = false;
};

// Runs `trials` independent trials; the failure count is identical for any
// worker count because each trial draws from its own (master_seed, index)
// stream and aggregation is commutative.
SweepPoint run_trials(const StabilizerCode& code, const TrialPlan& plan,
                      uint64_t trials, uint64_t master_seed, size_t workers = 1);

// How a scalar p_t sweep value is split into (p_r, p_b, p_m) for sampling.
enum class NoiseSplit { pb_only, equal };
NoiseSplit noise_split_from_string(const std::string& s);
std::string to_string(NoiseSplit s);
NoiseModel model_for_total_error(double p_t, NoiseSplit split);

// Log-spaced grid with `steps` points from a to b inclusive.
std::vector<double> log_grid(double a, double b, size_t steps);

struct SweepOptions {
  TrialPlan plan;                  // model is overwritten per grid point
  NoiseSplit split = NoiseSplit::pb_only;
  bool match_decoder_prior = true; // decoder prior follows the sampled p_t
  uint64_t trials = 10000;
  uint64_t master_seed = 1;
  size_t workers = 1;
  std::string checkpoint_path;     // resumable when nonempty
  std::function<void(const SweepPoint&)> on_point;  // progress callback
};

std::vector<SweepPoint> sweep(const std::vector<StabilizerCode>& codes,
                              const std::vector<double>& p_t_grid,
                              const SweepOptions& opts);

struct FitOptions {
  bool pin_delta = true;
  double delta = 0.5;
};

// Parameters of p_L = c (p/p0)^(alpha n^delta), fitted in log space by
// weighted nonlinear least squares.
struct FitParams {
  double c = 0.0, p0 = 0.0, alpha = 0.0, delta = 0.5;
  double se_c = 0.0, se_p0 = 0.0, se_alpha = 0.0, se_delta = 0.0;
  double residual_norm = 0.0;
  double cov_max_abs = 0.0;  // covariance diagnostic
  bool delta_pinned = true;
  size_t points_used = 0;
};

FitParams fit_threshold(const std::vector<SweepPoint>& table, const FitOptions& opts);
double fit_predict(const FitParams& f, size_t n, double p_t);

struct SegmentPlan {
  double total_distance = 0.0, segment_length = 0.0;
  size_t segments = 1;
  size_t chosen_nbits = 0;  // classical code size of the HGP self-product
  size_t chosen_n = 0;
  double predicted_p_l = 0.0;
  double predicted_infidelity = 0.0;
};

// Smallest code in the rate-0.04 HGP self-product family (n_bits = 20, 24,
// ...) with N p_L (+ 2 p_r when given) at or below the target.
SegmentPlan plan_code_size(double total_distance, double segment_length,
                           double target_infidelity, const FitParams& fit,
                           double p_t, double p_r = 0.0);

// --- emit ---------------------------------------------------------------

// CSV columns: code_id,n,p_t,trials,failures,p_l,ci_lo,ci_hi
std::string table_to_csv(const std::vector<SweepPoint>& table);
std::vector<SweepPoint> table_from_csv(const std::string& text);

struct SvgDiagnostics {
  double fit_within_ci_fraction = 1.0;
};
// Log-log plot: one polyline + CI bars per code, fitted curves overlaid
// when a fit is supplied.
SvgDiagnostics write_svg_plot(const std::string& path,
                              const std::vector<SweepPoint>& table,
                              const FitParams* fit = nullptr);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace qrep
