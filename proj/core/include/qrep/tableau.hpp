#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrep/gf2.hpp"
#include "qrep/rng.hpp"

namespace qrep {

using gf2::BitVec;
using gf2::Pauli;

// Hermitian Pauli with an explicit sign: (-1)^neg * i^(x.z) * X^x Z^z.
struct SignedPauli {
  Pauli p;
  bool neg = false;
};

// Stabilizer tableau in the Aaronson-Gottesman destabilizer form.
// Rows carry a phase exponent mod 4 with the convention
//   row = i^phase * X^x Z^z,
// under which row products need no per-qubit case analysis:
//   (x1,z1,p1)*(x2,z2,p2) = (x1^x2, z1^z2, p1+p2+2*|z1&x2|).
class Tableau {
 public:
  explicit Tableau(size_t q);  // |0...0>

  size_t num_qubits() const { return q_; }

  struct MeasureResult {
    bool outcome;
    bool random;
  };

  // Projective measurement of a Hermitian Pauli. Random outcomes are drawn
  // from rng; deterministic ones are computed from the destabilizer rows.
  MeasureResult measure(const SignedPauli& op, RngStream& rng);

  // Measurement with a chosen outcome for the random branch. Throws when the
  // outcome is deterministic and disagrees (the caller must repair signs
  // first; see state_from_stabilizers).
  MeasureResult measure_forced(const SignedPauli& op, bool want);

  // Conjugates the state by a Pauli error (sign flips only).
  void apply_pauli(const Pauli& e);

  // +1 / -1 when op (with its sign) is in +/-S, 0 when it anticommutes with
  // some stabilizer. Does not collapse the state.
  int expectation(const SignedPauli& op) const;

  // Overlap with the k Bell pairs (pairs[j].first, pairs[j].second):
  // expectation of the projector onto |Phi+>^(x)k. Cost 4^k terms.
  double bell_fidelity(std::span<const std::pair<size_t, size_t>> pairs) const;

 private:
  struct Row {
    BitVec x, z;
    uint8_t phase = 0;  // mod 4
  };

  bool anticommutes(const Row& r, const Pauli& p) const;
  void row_mul(Row& dst, const Row& src) const;   // dst *= src
  Row pauli_row(const SignedPauli& op) const;
  int deterministic_sign(const SignedPauli& op) const;  // requires commuting op
  MeasureResult measure_impl(const SignedPauli& op, bool have_forced, bool want, RngStream* rng);

  size_t q_;
  std::vector<Row> destab_, stab_;
};

// Builds the unique state with stabilizer group <(-1)^{neg_i} P_i> from a
// full-rank commuting generator list. Deterministic-sign mismatches during
// the forced measurements are repaired by solving for a Pauli that
// anticommutes with the offending generator and commutes with those already
// pinned.
Tableau state_from_stabilizers(size_t q, std::span<const SignedPauli> gens);

// Embeds a Pauli on a subset of tableau qubits (qubit_map[i] = target of
// local qubit i).
Pauli embed_pauli(const Pauli& local, std::span<const size_t> qubit_map, size_t q);

}  // namespace qrep
