#pragma once

#include <vector>

#include "qrep/stab_code.hpp"
#include "qrep/tableau.hpp"

namespace qrep {

// Exact stabilizer-simulation reference for the measurement-based protocols.
// Used to validate the error-frame engine on small codes; capped at 64
// qubits by the cost of exact simulation.

enum class OracleMode { distill, repeater_segment };

// Errors injected into one protocol run. Pauli components act on the
// labelled qubits before the Bell measurements; flip vectors act on the
// recorded outcomes.
struct InjectedError {
  Pauli alice_input, bob_input;   // transmitted qubits, length n
  Pauli alice_iface, bob_iface;   // measured resource qubits, length n
  BitVec flip_sa, flip_ta, flip_sb, flip_tb;  // length n

  static InjectedError none(size_t n);
  // Combined flip deltas seen by the error-frame engine.
  BitVec delta_s(size_t n) const;
  BitVec delta_t(size_t n) const;
};

struct OracleRecord {
  BitVec sa, ta, sb, tb;  // raw outcomes per party
  BitVec s, t;            // combined parities
  BitVec syndrome;        // Eq. (H1.s + H2.t + r) on raw outcomes
  BitVec beta_raw, phi_raw;      // raw-outcome corrections actually applied
  BitVec beta_delta, phi_delta;  // baseline-subtracted (paired noiseless run)
  bool logical_failure = false;  // output differs from the target state
  double fidelity = 1.0;         // vs |Phi+>^k (distill) or logical pairs
};

class ProtocolOracle {
 public:
  ProtocolOracle(const StabilizerCode& code, OracleMode mode);

  // Runs the full protocol twice with the same random stream: once with the
  // injected error and estimate, once noiseless; delta fields are the XOR.
  OracleRecord run(const InjectedError& err, uint64_t seed, const Pauli& e_hat) const;

  // Noiseless single pass; used for the baseline invariants.
  OracleRecord run_noiseless(uint64_t seed) const;

 private:
  struct RawRun {
    BitVec sa, ta, sb, tb;
    BitVec beta_raw, phi_raw;
    bool logical_failure = false;
    double fidelity = 1.0;
  };
  RawRun execute(const InjectedError& err, uint64_t seed, const Pauli& e_hat) const;

  const StabilizerCode code_;
  OracleMode mode_;
  size_t q_ = 0;
  std::vector<size_t> a_iface_, b_iface_, a_out_, b_out_, in_a_, in_b_;
  Tableau base_;
};

// Appendix derivation path: n shared Bell pairs with random (s,t) frames,
// then bilateral code-generator measurements giving outcomes a_i, b_i.
// The parity identity states a_i + b_i = H1(i).s + H2(i).t + H1(i).H2(i)^T.
struct DerivationRecord {
  BitVec s, t;   // sampled frames
  BitVec a, b;   // bilateral measurement outcomes
  BitVec parity_rhs;  // per-generator right-hand side
  bool identity_holds = false;
};
DerivationRecord run_derivation_path(const StabilizerCode& code, uint64_t seed);

// Resource-state constructions (Eq. set {g_i, Xbar_j X_{n+j}, Zbar_j Z_{n+j}}
// for distillation and {g, g', XbarXbar', ZbarZbar'} for repeaters), with
// deterministic +1 signs on every generator.
std::vector<SignedPauli> distillation_resource_generators(const StabilizerCode& code);
std::vector<SignedPauli> repeater_resource_generators(const StabilizerCode& code);
Tableau prepare_distillation_resource(const StabilizerCode& code);
Tableau prepare_repeater_resource(const StabilizerCode& code);

// Full chain: node 0 and node N carry (n+k)-qubit distillation resources,
// intermediate nodes carry 2n-qubit repeater resources, neighbouring nodes
// share n input Bell pairs per segment.
class ChainOracle {
 public:
  ChainOracle(const StabilizerCode& code, size_t segments);

  struct SegmentError {
    Pauli left_input, right_input;  // length n
    BitVec flip_sl, flip_tl, flip_sr, flip_tr;
    static SegmentError none(size_t n);
  };

  struct ChainRecord {
    std::vector<BitVec> seg_syndrome;       // raw Eq. syndrome per segment
    std::vector<BitVec> seg_beta, seg_phi;  // raw per-segment flips
    bool logical_failure = false;
    double fidelity = 1.0;
  };

  // e_hats[r] is the estimate the engine decoded for segment r.
  ChainRecord run(const std::vector<SegmentError>& errors,
                  const std::vector<Pauli>& e_hats, uint64_t seed) const;

  size_t segments() const { return segments_; }

 private:
  const StabilizerCode code_;
  size_t segments_;
  size_t q_ = 0;
  std::vector<size_t> out0_, outn_;
  // meas_left_[r] = block the left node of segment r measures, etc.
  std::vector<std::vector<size_t>> meas_left_, meas_right_, in_left_, in_right_;
  Tableau base_;
};

// (1/2^m) sum over all products of the generator subsets: the overlap with
// the state stabilized by gens. Cost 2^m expectation calls.
double stabilizer_group_fidelity(const Tableau& t, std::span<const SignedPauli> gens);

}  // namespace qrep
