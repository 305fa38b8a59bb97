#include "qrep/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace qrep {

using json = nlohmann::ordered_json;

WilsonInterval wilson_interval(uint64_t failures, uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  double n = double(trials);
  double p = double(failures) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

TrialMode trial_mode_from_string(const std::string& s) {
  if (s == "oneway") return TrialMode::distill_oneway;
  if (s == "twoway") return TrialMode::distill_twoway;
  if (s == "segment") return TrialMode::segment;
  throw std::invalid_argument("unknown trial mode: " + s);
}

std::string to_string(TrialMode m) {
  switch (m) {
    case TrialMode::distill_oneway: return "oneway";
    case TrialMode::distill_twoway: return "twoway";
    default: return "segment";
  }
}

SweepPoint run_trials(const StabilizerCode& code, const TrialPlan& plan,
                      uint64_t trials, uint64_t master_seed, size_t workers) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  plan.model.check();
  if (workers == 0) workers = 1;
  workers = std::min<size_t>(workers, trials);

  struct Counts {
    uint64_t failures = 0, accepted = 0, decoder_failures = 0;
  };
  std::vector<Counts> per_worker(workers);

  auto body = [&](size_t w) {
    Decoder decoder(code, plan.decoder);
    Counts& c = per_worker[w];
    for (uint64_t i = w; i < trials; i += workers) {
      RngStream rng(master_seed, i);
      switch (plan.mode) {
        case TrialMode::distill_oneway: {
          ErrorFrame f = sample_error(plan.model, code, FrameRole::distill, rng);
          TrialResult r = distill_one_way(code, f, decoder);
          ++c.accepted;
          if (r.logical_failure) ++c.failures;
          if (r.decoder_failed) ++c.decoder_failures;
          break;
        }
        case TrialMode::distill_twoway: {
          ErrorFrame f = sample_error(plan.model, code, FrameRole::distill, rng);
          TrialResult r = distill_two_way(code, f);
          if (r.accepted) {
            ++c.accepted;
            if (r.logical_failure) ++c.failures;
          }
          break;
        }
        case TrialMode::segment: {
          ChainTrial t = run_chain(code, plan.segments, plan.model, decoder, rng,
                                   {plan.include_end_nodes});
          ++c.accepted;
          if (t.failure) ++c.failures;
          c.decoder_failures += t.decoder_failures;
          break;
        }
      }
    }
  };

  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& th : pool) th.join();
  }

  SweepPoint pt;
  pt.code_id = code.id;
  pt.n = code.n;
  pt.p_t = total_bipartite(combined_single_party(plan.model));
  pt.trials = trials;
  for (const Counts& c : per_worker) {
    pt.failures += c.failures;
    pt.accepted += c.accepted;
    pt.decoder_failures += c.decoder_failures;
  }
  uint64_t denom = (plan.mode == TrialMode::distill_twoway) ? pt.accepted : pt.trials;
  pt.p_l = denom ? double(pt.failures) / double(denom) : 0.0;
  WilsonInterval w = wilson_interval(pt.failures, std::max<uint64_t>(denom, 1));
  pt.ci_lo = w.lo;
  pt.ci_hi = w.hi;
  return pt;
}

NoiseSplit noise_split_from_string(const std::string& s) {
  if (s == "pb-only" || s == "pb_only") return NoiseSplit::pb_only;
  if (s == "equal") return NoiseSplit::equal;
  throw std::invalid_argument("unknown noise split: " + s);
}

std::string to_string(NoiseSplit s) {
  return s == NoiseSplit::pb_only ? "pb-only" : "equal";
}

NoiseModel model_for_total_error(double p_t, NoiseSplit split) {
  double p_c = party_error_for_total(p_t);
  NoiseModel m;
  if (split == NoiseSplit::pb_only) {
    m.p_b = p_c;
  } else {
    double y = equal_split_for_combined(p_c);
    m.p_r = y;
    m.p_b = y;
    m.p_m = y;
  }
  return m;
}

std::vector<double> log_grid(double a, double b, size_t steps) {
  if (!(a > 0.0) || !(b > 0.0) || b < a) throw std::invalid_argument("bad grid bounds");
  if (steps < 2) return {a};
  std::vector<double> g(steps);
  double la = std::log(a), lb = std::log(b);
  for (size_t i = 0; i < steps; ++i)
    g[i] = std::exp(la + (lb - la) * double(i) / double(steps - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

namespace {

std::string point_key(const std::string& code_id, size_t grid_idx, uint64_t trials) {
  return code_id + "#" + std::to_string(grid_idx) + "#" + std::to_string(trials);
}

json point_to_json(const SweepPoint& p) {
  json j;
  j["code_id"] = p.code_id;
  j["n"] = p.n;
  j["p_t"] = p.p_t;
  j["trials"] = p.trials;
  j["failures"] = p.failures;
  j["p_l"] = p.p_l;
  j["ci_lo"] = p.ci_lo;
  j["ci_hi"] = p.ci_hi;
  j["accepted"] = p.accepted;
  j["decoder_failures"] = p.decoder_failures;
  return j;
}

SweepPoint point_from_json(const json& j) {
  SweepPoint p;
  p.code_id = j.at("code_id").get<std::string>();
  p.n = j.at("n").get<size_t>();
  p.p_t = j.at("p_t").get<double>();
  p.trials = j.at("trials").get<uint64_t>();
  p.failures = j.at("failures").get<uint64_t>();
  p.p_l = j.at("p_l").get<double>();
  p.ci_lo = j.at("ci_lo").get<double>();
  p.ci_hi = j.at("ci_hi").get<double>();
  p.accepted = j.value("accepted", p.trials);
  p.decoder_failures = j.value("decoder_failures", uint64_t(0));
  return p;
}

}  // namespace

std::vector<SweepPoint> sweep(const std::vector<StabilizerCode>& codes,
                              const std::vector<double>& p_t_grid,
                              const SweepOptions& opts) {
  if (p_t_grid.empty()) throw std::invalid_argument("empty p_t grid");

  // load checkpoint
  std::unordered_map<std::string, SweepPoint> done;
  if (!opts.checkpoint_path.empty()) {
    std::ifstream in(opts.checkpoint_path);
    std::string line;
    while (in && std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("key")) continue;
      done[j["key"].get<std::string>()] = point_from_json(j["point"]);
    }
  }
  std::ofstream ck;
  if (!opts.checkpoint_path.empty())
    ck.open(opts.checkpoint_path, std::ios::app);

  std::vector<SweepPoint> table;
  for (const StabilizerCode& code : codes) {
    for (size_t gi = 0; gi < p_t_grid.size(); ++gi) {
      double pt = p_t_grid[gi];
      std::string key = point_key(code.id, gi, opts.trials);
      auto it = done.find(key);
      if (it != done.end()) {
        table.push_back(it->second);
        if (opts.on_point) opts.on_point(it->second);
        continue;
      }
      TrialPlan plan = opts.plan;
      plan.model = model_for_total_error(pt, opts.split);
      if (opts.match_decoder_prior) plan.decoder.prior_error_rate = pt;
      uint64_t point_seed =
          mix64(opts.master_seed ^ gf2::fnv1a64(code.id) ^ mix64(gi + 1));
      SweepPoint p = run_trials(code, plan, opts.trials, point_seed, opts.workers);
      p.p_t = pt;  // report the grid value, not the recomposed model total
      table.push_back(p);
      if (ck.is_open()) {
        json j;
        j["key"] = key;
        j["point"] = point_to_json(p);
        ck << j.dump() << "\n";
        ck.flush();
      }
      if (opts.on_point) opts.on_point(p);
    }
  }
  return table;
}

double fit_predict(const FitParams& f, size_t n, double p_t) {
  return f.c * std::pow(p_t / f.p0, f.alpha * std::pow(double(n), f.delta));
}

SegmentPlan plan_code_size(double total_distance, double segment_length,
                           double target_infidelity, const FitParams& fit,
                           double p_t, double p_r) {
  if (!(total_distance > 0.0) || !(segment_length > 0.0))
    throw std::invalid_argument("distances must be positive");
  if (!(p_t > 0.0) || p_t >= fit.p0)
    throw std::invalid_argument("operating point must satisfy p_t < p0");
  SegmentPlan plan;
  plan.total_distance = total_distance;
  plan.segment_length = segment_length;
  plan.segments = size_t(std::ceil(total_distance / segment_length));
  double end_term = 2.0 * p_r;
  if (end_term >= target_infidelity)
    throw std::invalid_argument("end-node term 2*p_r already exceeds the target");
  for (size_t nbits = 20; nbits <= 16384; nbits += 4) {
    size_t m = nbits * 3 / 4;
    size_t n = nbits * nbits + m * m;
    double pl = fit_predict(fit, n, p_t);
    double infid = double(plan.segments) * pl + end_term;
    if (infid <= target_infidelity) {
      plan.chosen_nbits = nbits;
      plan.chosen_n = n;
      plan.predicted_p_l = pl;
      plan.predicted_infidelity = infid;
      return plan;
    }
  }
  throw std::runtime_error("target unreachable within the family size cap");
}

}  // namespace qrep
