#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrep/stab_code.hpp"

namespace qrep {

struct DecoderConfig {
  enum class Kind { lookup, bp, bp_osd };
  enum class BpVariant { sum_product, min_sum };

  Kind kind = Kind::bp_osd;
  size_t bp_iterations = 50;
  BpVariant bp_variant = BpVariant::min_sum;
  double min_sum_scale = 0.625;
  size_t osd_order = 0;
  // Depolarizing rate the priors are derived from: per-sector marginal 2p/3.
  double prior_error_rate = 0.01;
  std::vector<double> prior_x, prior_z;  // optional per-bit overrides
  size_t lookup_max_n = 12;

  static Kind kind_from_string(const std::string& s);
  std::string kind_string() const;
};

struct DecodeResult {
  Pauli estimate;
  bool converged = true;  // estimate reproduces the syndrome
};

// Per-sector BP state exposed for OSD and for tests.
struct BpSectorResult {
  BitVec hard;                 // hard decision
  std::vector<double> llr;     // posterior log((1-p)/p) per bit
  bool converged = false;
};

// Syndrome decoder with per-instance scratch; use one Decoder per worker.
// Syndromes are indexed by rows of the code's check matrix H.
class Decoder {
 public:
  Decoder(const StabilizerCode& code, DecoderConfig cfg);

  DecodeResult decode(const BitVec& syndrome);
  const DecoderConfig& config() const { return cfg_; }

  // Exposed stages (tests and cross-checks):
  DecodeResult decode_lookup(const BitVec& syndrome);
  BpSectorResult run_bp_sector(bool x_sector, const BitVec& sector_syndrome);
  BitVec run_osd_sector(bool x_sector, const BitVec& sector_syndrome,
                        const std::vector<double>& llr);

  BitVec sector_syndrome(bool x_sector, const BitVec& syndrome) const;

 private:
  struct Sector {
    gf2::SparseMatrix h;                   // checks of this sector
    std::vector<size_t> syndrome_rows;     // rows of H feeding this sector
    std::vector<double> prior_llr;
    // edge-indexed message arrays
    std::vector<uint32_t> edge_var, edge_check;
    std::vector<std::vector<uint32_t>> check_edges, var_edges;
    std::vector<double> msg_cv, msg_vc;
  };

  void build_sector(Sector& s, const BitMatrix& checks, const std::vector<size_t>& rows,
                    const std::vector<double>& prior_override);
  BpSectorResult bp_on(Sector& s, const BitVec& syn);
  BitVec osd_on(Sector& s, const BitVec& syn, const std::vector<double>& llr);

  const StabilizerCode& code_;
  DecoderConfig cfg_;
  Sector sx_, sz_;  // sx decodes X errors (Z-type checks), sz decodes Z errors

  // lookup table: syndrome bits packed little-endian -> coset leader
  std::vector<Pauli> table_;
  bool table_built_ = false;
  void build_table();
};

}  // namespace qrep
