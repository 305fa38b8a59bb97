#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrep/stab_code.hpp"

namespace qrep {

struct ClassicalCode {
  size_t n_bits = 0;
  size_t n_checks = 0;
  BitMatrix h;                    // n_checks x n_bits
  std::optional<size_t> girth;
};

struct LdpcOptions {
  size_t col_weight = 3;
  size_t row_weight = 4;
  bool require_girth6 = false;     // reject 4-cycles when set
  bool require_full_rank = true;   // regenerate until rank == n_checks
  size_t max_retries = 1000;
};

// Random (col_weight, row_weight)-regular LDPC code via the configuration
// model; multi-edges are resolved by edge swaps. Deterministic per seed.
ClassicalCode random_regular_ldpc(size_t n_bits, const LdpcOptions& opts, uint64_t seed);

// Girth of the Tanner graph, capped at `cap` (returns cap+2 when no cycle
// up to that length exists).
size_t tanner_girth(const BitMatrix& h, size_t cap = 8);

// Hypergraph product of two classical codes:
//   HX = (Ha x I | I x Hb^T),  HZ = (I x Hb | Ha^T x I)
// with N = na*nb + ma*mb qubits. Left block is the bit x bit grid in
// row-major order, right block the check x check grid, as recorded in the
// code file metadata.
StabilizerCode hgp(const ClassicalCode& a, const ClassicalCode& b, std::string id = "");

struct FamilyOptions {
  size_t instances_per_size = 10;
  size_t distance_effort = 64;
  LdpcOptions ldpc;
};

struct FamilyMember {
  StabilizerCode code;
  uint64_t instance_seed = 0;
  size_t instance_index = 0;
  DistanceEstimate distance;
};

// For each classical size, generates `instances_per_size` HGP self-products
// and keeps the instance with the largest distance estimate (first instance
// wins ties). Deterministic per master seed.
std::vector<FamilyMember> build_family(const std::vector<size_t>& n_bits_sizes,
                                       const FamilyOptions& opts, uint64_t master_seed);

// MacKay alist text format for classical parity-check matrices.
std::string to_alist(const BitMatrix& h);
BitMatrix from_alist(const std::string& text);
void save_alist(const BitMatrix& h, const std::string& path);
BitMatrix load_alist(const std::string& path);

}  // namespace qrep
