#pragma once

#include <utility>
#include <vector>

#include "qrep/decode.hpp"
#include "qrep/noise.hpp"
#include "qrep/stab_code.hpp"

namespace qrep {

// Pauli-Y compensation vector: r_i = sum_j a(i,j) b(i,j) mod 2. With
// (a,b) = (h1,h2) this is the syndrome offset r; with the logical matrices
// it gives r^b and r^p.
BitVec correction_vector_r(const BitMatrix& a, const BitMatrix& b);

// Syndrome in the delta frame (flip vectors relative to the noiseless
// baseline): S = H1.ds + H2.dt. The affine +r offset cancels between the
// two protocol runs.
BitVec syndrome_delta(const StabilizerCode& code, const BitVec& ds, const BitVec& dt);

// Raw-outcome syndrome S = H1.s + H2.t + r; zero for every noiseless
// outcome realization. Retained for oracle cross-checks.
BitVec syndrome_raw(const StabilizerCode& code, const BitVec& s, const BitVec& t);

// Bit and phase flips on the output qubits:
//   beta = (Z,e)_sp + Z1.s + Z2.t (+ r^b in the raw path)
//   phi  = (X,e)_sp + X1.s + X2.t (+ r^p in the raw path)
std::pair<BitVec, BitVec> flips_delta(const StabilizerCode& code, const Pauli& e_hat,
                                      const BitVec& ds, const BitVec& dt);
std::pair<BitVec, BitVec> flips_raw(const StabilizerCode& code, const Pauli& e_hat,
                                    const BitVec& s, const BitVec& t);

// Residual logical flips of a residual error (true xor estimated):
// beta_j = sp(logical_Z_j, res), phi_j = sp(logical_X_j, res).
std::pair<BitVec, BitVec> residual_flips(const StabilizerCode& code, const Pauli& residual);

struct TrialResult {
  BitVec syndrome;      // n-k
  Pauli estimate;
  BitVec beta, phi;     // corrections applied to the output qubits
  bool accepted = true;         // two-way mode: S == 0
  bool logical_failure = false; // defined only when accepted
  bool decoder_failed = false;
};

// One-way (error-correcting) distillation: decode, correct, count residual
// logical flips including the uncoded output-qubit contribution.
TrialResult distill_one_way(const StabilizerCode& code, const ErrorFrame& frame,
                            Decoder& decoder);

// Two-way (error-detecting) distillation: accept iff S == 0, no decoding.
TrialResult distill_two_way(const StabilizerCode& code, const ErrorFrame& frame);

struct SegmentOutcome {
  BitVec syndrome;
  Pauli estimate;
  BitVec beta, phi;          // node frame contribution
  BitVec res_beta, res_phi;  // residual logical flips
  bool decoder_failed = false;
  bool failed = false;
};

// Same computation as one-way distillation but without uncoded output
// qubits; returns the node's Pauli-frame contribution.
SegmentOutcome repeater_segment(const StabilizerCode& code, const ErrorFrame& frame,
                                Decoder& decoder);

// Coordinatewise XOR across nodes (repeater Step 5).
std::pair<BitVec, BitVec> chain_aggregate(
    const std::vector<std::pair<BitVec, BitVec>>& frames);

struct ChainOptions {
  // When set, depolarizing(p_r) on the k uncoded output qubits is sampled
  // once per end node and folded into the end-to-end residual.
  bool include_end_nodes = false;
};

struct ChainTrial {
  bool failure = false;
  BitVec res_beta, res_phi;
  size_t decoder_failures = 0;
};

// Samples `segments` independent segment frames, decodes each, aggregates
// residuals, and reports end-to-end failure.
ChainTrial run_chain(const StabilizerCode& code, size_t segments, const NoiseModel& model,
                     Decoder& decoder, RngStream& rng, const ChainOptions& opts = {});

}  // namespace qrep
