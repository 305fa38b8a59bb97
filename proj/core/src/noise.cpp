#include "qrep/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace qrep {

namespace {

void check_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(name) + " must be in [0,1]");
}

// Draws a uniform nontrivial Pauli with probability p and returns its
// (x,z) component pair; (0,0) otherwise.
std::pair<bool, bool> depolarize(double p, RngStream& rng) {
  if (p > 0.0 && rng.bernoulli(p)) {
    switch (rng.below(3)) {
      case 0: return {true, false};   // X
      case 1: return {false, true};   // Z
      default: return {true, true};   // Y
    }
  }
  return {false, false};
}

}  // namespace

void NoiseModel::check() const {
  check_prob(p_r, "p_r");
  check_prob(p_b, "p_b");
  check_prob(p_m, "p_m");
}

double compose(double p1, double p2) {
  check_prob(p1, "p1");
  check_prob(p2, "p2");
  return p1 + p2 - (4.0 / 3.0) * p1 * p2;
}

double combined_single_party(const NoiseModel& m) {
  m.check();
  return compose(compose(m.p_r, m.p_b), m.p_m);
}

double total_bipartite(double p_c) { return compose(p_c, p_c); }

double bell_fidelity(double p_b) {
  check_prob(p_b, "p_b");
  return 1.0 - 2.0 * p_b + (4.0 / 3.0) * p_b * p_b;
}

double party_error_for_total(double p_t) {
  check_prob(p_t, "p_t");
  // solve (4/3)x^2 - 2x + p_t = 0 for the root in [0, 3/4]
  return (2.0 - std::sqrt(4.0 - (16.0 / 3.0) * p_t)) / (8.0 / 3.0);
}

double equal_split_for_combined(double p_c) {
  check_prob(p_c, "p_c");
  double lo = 0.0, hi = 0.75;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (compose(compose(mid, mid), mid) < p_c) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

PartyFlips sample_party(const NoiseModel& m, size_t n, RngStream& rng) {
  PartyFlips f{BitVec(n), BitVec(n)};
  for (size_t i = 0; i < n; ++i) {
    // A Pauli (x,z) on either measured qubit flips the ZZ outcome when it has
    // an X component and the XX outcome when it has a Z component.
    auto [bx, bz] = depolarize(m.p_b, rng);
    auto [rx, rz] = depolarize(m.p_r, rng);
    bool ds = bz ^ rz, dt = bx ^ rx;
    if (m.p_m > 0.0 && rng.bernoulli(m.p_m)) {
      switch (rng.below(3)) {
        case 0: ds ^= 1; break;
        case 1: dt ^= 1; break;
        default: ds ^= 1; dt ^= 1; break;
      }
    }
    if (ds) f.ds.set(i, true);
    if (dt) f.dt.set(i, true);
  }
  return f;
}

OutputErrors sample_outputs(const NoiseModel& m, size_t k, RngStream& rng) {
  OutputErrors e{BitVec(k), BitVec(k)};
  for (size_t j = 0; j < k; ++j) {
    auto [x, z] = depolarize(m.p_r, rng);
    if (x) e.x.set(j, true);
    if (z) e.z.set(j, true);
  }
  return e;
}

ErrorFrame sample_error(const NoiseModel& m, const StabilizerCode& code,
                        FrameRole role, RngStream& rng) {
  m.check();
  PartyFlips a = sample_party(m, code.n, rng);
  PartyFlips b = sample_party(m, code.n, rng);
  ErrorFrame f;
  f.ds = a.ds ^ b.ds;
  f.dt = a.dt ^ b.dt;
  f.out_x = BitVec(code.k);
  f.out_z = BitVec(code.k);
  if (role == FrameRole::distill) {
    // An output-qubit X on either side flips the pair's ZZ parity; combine
    // both ends' draws.
    OutputErrors ea = sample_outputs(m, code.k, rng);
    OutputErrors eb = sample_outputs(m, code.k, rng);
    f.out_x = ea.x ^ eb.x;
    f.out_z = ea.z ^ eb.z;
  }
  return f;
}

}  // namespace qrep
