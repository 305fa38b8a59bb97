#pragma once

#include "qrep/rng.hpp"
#include "qrep/stab_code.hpp"

namespace qrep {

// Depolarizing error rates: p_r on each resource-state qubit, p_b on each
// transmitted Bell-state qubit, p_m per Bell measurement (outcome flips
// s-only / t-only / both, each with probability p_m/3).
struct NoiseModel {
  double p_r = 0.0;
  double p_b = 0.0;
  double p_m = 0.0;

  void check() const;
  bool noiseless() const { return p_r == 0.0 && p_b == 0.0 && p_m == 0.0; }
};

// Composition of two independent depolarizing errors:
//   f(p1,p2) = p1 + p2 - (4/3) p1 p2.
double compose(double p1, double p2);

// Single-party combined error p_c = f(f(p_r,p_b),p_m).
double combined_single_party(const NoiseModel& m);

// Total bipartite error p_t = f(p_c,p_c).
double total_bipartite(double p_c);

// Input Bell state fidelity F = 1 - 2 p_b + (4/3) p_b^2.
double bell_fidelity(double p_b);

// Inverse of total_bipartite: the single-party rate x with f(x,x) = p_t.
double party_error_for_total(double p_t);
// Rate y with f(f(y,y),y) = p_c, for splitting p_c evenly over three sources.
double equal_split_for_combined(double p_c);

// Per-segment sampled flips of Bell-measurement outcomes plus uncoded
// output-qubit errors. ds/dt are the combined (both parties) flip deltas of
// the XX/ZZ outcomes; the equivalent Pauli has x = dt, z = ds.
struct ErrorFrame {
  BitVec ds, dt;        // length n
  BitVec out_x, out_z;  // length k; zero unless the frame covers end nodes

  Pauli true_pauli(size_t n) const { return Pauli(n, dt, ds); }
};

// One party's Bell-measurement flip contribution across its n measured
// pairs: depolarizing(p_b) on the transmitted qubit, depolarizing(p_r) on
// the interfacing resource qubit, and the p_m measurement flip.
struct PartyFlips {
  BitVec ds, dt;
};
PartyFlips sample_party(const NoiseModel& m, size_t n, RngStream& rng);

// depolarizing(p_r) on k uncoded output qubits of one end.
struct OutputErrors {
  BitVec x, z;
};
OutputErrors sample_outputs(const NoiseModel& m, size_t k, RngStream& rng);

enum class FrameRole {
  segment,  // intermediate repeater segment: no uncoded output qubits
  distill,  // distillation between two end parties: outputs on both sides
};

ErrorFrame sample_error(const NoiseModel& m, const StabilizerCode& code,
                        FrameRole role, RngStream& rng);

}  // namespace qrep
