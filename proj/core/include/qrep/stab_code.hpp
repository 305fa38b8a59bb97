#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrep/gf2.hpp"

namespace qrep {

using gf2::BitMatrix;
using gf2::BitVec;
using gf2::Pauli;

// [[n,k,d]] stabilizer code. The check matrix is stored as the pair
// (h1|h2): h1 marks X components of the generators, h2 marks Z components.
// Logical operators are stored the same way, one row per logical qubit.
struct StabilizerCode {
  std::string id;
  size_t n = 0, k = 0;
  size_t d = 0;
  bool d_exact = false;

  BitMatrix h1, h2;                    // (n-k) x n
  BitMatrix lx1, lx2;                  // k x n, logical X rows
  BitMatrix lz1, lz2;                  // k x n, logical Z rows

  bool css = false;
  // CSS sector split: hx rows are the pure-X generators (their h1 part),
  // hz rows the pure-Z generators. Row i of hx corresponds to check row
  // x_rows[i] of h, likewise z_rows for hz.
  BitMatrix hx, hz;
  std::vector<size_t> x_rows, z_rows;

  size_t num_checks() const { return h1.rows(); }
  Pauli stabilizer(size_t i) const { return Pauli(n, h1.row(i), h2.row(i)); }
  Pauli logical_x(size_t j) const { return Pauli(n, lx1.row(j), lx2.row(j)); }
  Pauli logical_z(size_t j) const { return Pauli(n, lz1.row(j), lz2.row(j)); }
  double rate() const { return double(k) / double(n); }

  uint64_t content_hash() const;
};

struct ValidationIssue {
  std::string what;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Checks all the structural invariants: generators commute pairwise, rank of
// H equals n-k, logicals commute with H and pair symplectically.
ValidationReport validate(const StabilizerCode& code);

struct LogicalOperators {
  BitMatrix lx1, lx2, lz1, lz2;  // k rows each
};

// Extracts a symplectically paired logical basis from (h1|h2).
// Deterministic for a given H: CSS sector extraction when every row is pure
// X or pure Z, symplectic Gram-Schmidt over the normalizer otherwise; in
// both paths representatives are weight-reduced against the stabilizer rows
// with lexicographic tie-breaking.
LogicalOperators extract_logicals(const BitMatrix& h1, const BitMatrix& h2);

// Assembles a full StabilizerCode from a check matrix: validates H,
// extracts logicals, detects CSS structure. Distance left unset (d=0).
StabilizerCode code_from_checks(std::string id, const BitMatrix& h1, const BitMatrix& h2);

struct DistanceEstimate {
  size_t d = 0;
  bool exact = false;
  std::string method;
};

// Exact exhaustive minimum-weight logical search for n <= exhaustive_cutoff;
// randomized information-set upper bound otherwise (flagged non-exact).
DistanceEstimate estimate_distance(const StabilizerCode& code, size_t effort = 200,
                                   uint64_t seed = 0, size_t exhaustive_cutoff = 20);

// Built-in example codes: "c422", "steane713", "repetition(n)".
StabilizerCode builtin_code(const std::string& name);
bool is_builtin_name(const std::string& name);

// JSON code file format:
//   {n, k, d, d_exact, h1: [row bitstrings], h2, lx1, lx2, lz1, lz2, meta}
// Bitstrings are '0'/'1' characters, leftmost = qubit 1.
std::string code_to_json(const StabilizerCode& code, const std::string& meta_json = "");
StabilizerCode code_from_json(const std::string& text);
void save_code(const StabilizerCode& code, const std::string& path, const std::string& meta_json = "");
StabilizerCode load_code(const std::string& path);

}  // namespace qrep
