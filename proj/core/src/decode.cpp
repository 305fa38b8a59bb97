#include "qrep/decode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qrep/pauli_enum.hpp"

namespace qrep {

DecoderConfig::Kind DecoderConfig::kind_from_string(const std::string& s) {
  if (s == "lookup") return Kind::lookup;
  if (s == "bp") return Kind::bp;
  if (s == "bp-osd" || s == "bp_osd") return Kind::bp_osd;
  throw std::invalid_argument("unknown decoder kind: " + s);
}

std::string DecoderConfig::kind_string() const {
  switch (kind) {
    case Kind::lookup: return "lookup";
    case Kind::bp: return "bp";
    default: return "bp-osd";
  }
}

Decoder::Decoder(const StabilizerCode& code, DecoderConfig cfg)
    : code_(code), cfg_(std::move(cfg)) {
  if (cfg_.kind == DecoderConfig::Kind::lookup) {
    if (code.n > cfg_.lookup_max_n)
      throw std::invalid_argument("lookup decoder limited to n <= " +
                                  std::to_string(cfg_.lookup_max_n));
    build_table();
    return;
  }
  if (!code.css)
    throw std::invalid_argument("BP decoding requires a CSS code; use lookup");
  build_sector(sx_, code.hz, code.z_rows, cfg_.prior_x);
  build_sector(sz_, code.hx, code.x_rows, cfg_.prior_z);
}

void Decoder::build_sector(Sector& s, const BitMatrix& checks, const std::vector<size_t>& rows,
                           const std::vector<double>& prior_override) {
  s.h = gf2::SparseMatrix::from_dense(checks);
  s.syndrome_rows = rows;
  size_t n = code_.n;
  s.prior_llr.resize(n);
  for (size_t v = 0; v < n; ++v) {
    double p = prior_override.empty() ? 2.0 * cfg_.prior_error_rate / 3.0 : prior_override[v];
    p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    s.prior_llr[v] = std::log((1.0 - p) / p);
  }
  s.check_edges.assign(s.h.rows, {});
  s.var_edges.assign(n, {});
  for (size_t c = 0; c < s.h.rows; ++c)
    for (uint32_t v : s.h.row_idx[c]) {
      uint32_t e = uint32_t(s.edge_var.size());
      s.edge_var.push_back(v);
      s.edge_check.push_back(uint32_t(c));
      s.check_edges[c].push_back(e);
      s.var_edges[v].push_back(e);
    }
  s.msg_cv.assign(s.edge_var.size(), 0.0);
  s.msg_vc.assign(s.edge_var.size(), 0.0);
}

BitVec Decoder::sector_syndrome(bool x_sector, const BitVec& syndrome) const {
  const auto& rows = x_sector ? sx_.syndrome_rows : sz_.syndrome_rows;
  BitVec s(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) s.set(i, syndrome.get(rows[i]));
  return s;
}

BpSectorResult Decoder::bp_on(Sector& s, const BitVec& syn) {
  size_t n = code_.n;
  size_t ne = s.edge_var.size();
  for (size_t e = 0; e < ne; ++e) s.msg_vc[e] = s.prior_llr[s.edge_var[e]];
  std::fill(s.msg_cv.begin(), s.msg_cv.end(), 0.0);

  BpSectorResult out;
  out.hard = BitVec(n);
  out.llr.assign(n, 0.0);

  for (size_t iter = 0; iter < cfg_.bp_iterations; ++iter) {
    // check update
    for (size_t c = 0; c < s.h.rows; ++c) {
      const auto& edges = s.check_edges[c];
      double syn_sign = syn.get(c) ? -1.0 : 1.0;
      if (cfg_.bp_variant == DecoderConfig::BpVariant::min_sum) {
        // two smallest magnitudes + total sign
        double min1 = 1e300, min2 = 1e300;
        size_t arg1 = 0;
        int sign_all = 1;
        for (uint32_t e : edges) {
          double m = s.msg_vc[e];
          double a = std::fabs(m);
          if (m < 0) sign_all = -sign_all;
          if (a < min1) { min2 = min1; min1 = a; arg1 = e; }
          else if (a < min2) { min2 = a; }
        }
        for (uint32_t e : edges) {
          double a = (e == arg1) ? min2 : min1;
          int sgn = sign_all * (s.msg_vc[e] < 0 ? -1 : 1);
          s.msg_cv[e] = syn_sign * cfg_.min_sum_scale * sgn * a;
        }
      } else {
        double prod_all = syn_sign;
        for (uint32_t e : edges) prod_all *= std::tanh(0.5 * s.msg_vc[e]);
        for (uint32_t e : edges) {
          double t = std::tanh(0.5 * s.msg_vc[e]);
          double rest = (std::fabs(t) > 1e-12) ? prod_all / t : [&] {
            double p = syn_sign;
            for (uint32_t f : edges)
              if (f != e) p *= std::tanh(0.5 * s.msg_vc[f]);
            return p;
          }();
          rest = std::clamp(rest, -0.999999999999, 0.999999999999);
          s.msg_cv[e] = 2.0 * std::atanh(rest);
        }
      }
    }
    // variable update + posterior
    for (size_t v = 0; v < n; ++v) {
      double total = s.prior_llr[v];
      for (uint32_t e : s.var_edges[v]) total += s.msg_cv[e];
      out.llr[v] = total;
      out.hard.set(v, total < 0.0);
      for (uint32_t e : s.var_edges[v]) s.msg_vc[e] = total - s.msg_cv[e];
    }
    // converged when the hard decision reproduces the syndrome
    bool ok = true;
    for (size_t c = 0; c < s.h.rows && ok; ++c) {
      bool parity = false;
      for (uint32_t v : s.h.row_idx[c]) parity ^= out.hard.get(v);
      ok = (parity == syn.get(c));
    }
    if (ok) {
      out.converged = true;
      return out;
    }
  }
  out.converged = false;
  return out;
}

BitVec Decoder::osd_on(Sector& s, const BitVec& syn, const std::vector<double>& llr) {
  size_t n = code_.n;
  size_t m = s.h.rows;

  // Column order: most likely in error first (ascending llr), index tie-break.
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return llr[a] < llr[b]; });

  // Eliminate [H | syn] choosing pivots greedily in reliability order.
  BitMatrix a(m, n + 1);
  for (size_t c = 0; c < m; ++c) {
    for (uint32_t v : s.h.row_idx[c]) a.set(c, v, true);
    a.set(c, n, syn.get(c));
  }
  std::vector<size_t> pivot_col;
  std::vector<size_t> pivot_row;
  size_t r = 0;
  for (size_t oi = 0; oi < n && r < m; ++oi) {
    size_t c = order[oi];
    size_t piv = r;
    while (piv < m && !a.get(piv, c)) ++piv;
    if (piv == m) continue;
    a.swap_rows(r, piv);
    for (size_t i = 0; i < m; ++i)
      if (i != r && a.get(i, c)) a.row_xor(i, r);
    pivot_col.push_back(c);
    pivot_row.push_back(r);
    ++r;
  }
  for (size_t i = r; i < m; ++i)
    if (a.get(i, n)) throw std::logic_error("OSD: inconsistent syndrome");

  std::vector<size_t> free_cols;  // in reliability order
  {
    std::vector<bool> is_pivot(n, false);
    for (size_t c : pivot_col) is_pivot[c] = true;
    for (size_t oi = 0; oi < n; ++oi)
      if (!is_pivot[order[oi]]) free_cols.push_back(order[oi]);
  }

  auto solve_with = [&](const std::vector<size_t>& flipped_free) {
    BitVec e(n);
    for (size_t c : flipped_free) e.set(c, true);
    for (size_t i = 0; i < pivot_col.size(); ++i) {
      bool val = a.get(pivot_row[i], n);
      for (size_t c : flipped_free) val ^= a.get(pivot_row[i], c);
      e.set(pivot_col[i], val);
    }
    return e;
  };
  auto soft_weight = [&](const BitVec& e) {
    double w = 0.0;
    for (size_t v = 0; v < n; ++v)
      if (e.get(v)) w += std::fabs(llr[v]);  // cost of asserting an error there
    return w;
  };

  BitVec best = solve_with({});
  if (cfg_.osd_order == 0 || free_cols.empty()) return best;

  // Order-lambda combination sweep over the most reliable-to-flip free
  // columns: singletons plus pairs.
  double best_w = soft_weight(best);
  size_t lim = std::min(cfg_.osd_order, free_cols.size());
  for (size_t i = 0; i < lim; ++i) {
    BitVec cand = solve_with({free_cols[i]});
    double w = soft_weight(cand);
    if (w < best_w) { best = cand; best_w = w; }
    for (size_t j = i + 1; j < lim; ++j) {
      BitVec cand2 = solve_with({free_cols[i], free_cols[j]});
      double w2 = soft_weight(cand2);
      if (w2 < best_w) { best = cand2; best_w = w2; }
    }
  }
  return best;
}

BpSectorResult Decoder::run_bp_sector(bool x_sector, const BitVec& sector_syndrome) {
  return bp_on(x_sector ? sx_ : sz_, sector_syndrome);
}

BitVec Decoder::run_osd_sector(bool x_sector, const BitVec& sector_syndrome,
                               const std::vector<double>& llr) {
  return osd_on(x_sector ? sx_ : sz_, sector_syndrome, llr);
}

void Decoder::build_table() {
  size_t bits = code_.num_checks();
  table_.assign(size_t(1) << bits, Pauli());
  std::vector<bool> have(size_t(1) << bits, false);
  size_t remaining = table_.size();
  auto syndrome_index = [&](const Pauli& p) {
    size_t idx = 0;
    for (size_t i = 0; i < bits; ++i) {
      bool b = code_.h1.row_dot(i, p.z) ^ code_.h2.row_dot(i, p.x);
      if (b) idx |= size_t(1) << i;
    }
    return idx;
  };
  for (size_t w = 0; w <= code_.n && remaining > 0; ++w) {
    for_each_pauli_of_weight(code_.n, w, [&](const Pauli& p) {
      size_t idx = syndrome_index(p);
      if (!have[idx]) {
        have[idx] = true;
        table_[idx] = p;
        --remaining;
      }
      return remaining == 0;
    });
  }
  if (remaining > 0) throw std::logic_error("lookup table incomplete (H rank deficient?)");
  table_built_ = true;
}

DecodeResult Decoder::decode_lookup(const BitVec& syndrome) {
  if (!table_built_) build_table();
  if (syndrome.size() != code_.num_checks())
    throw std::invalid_argument("syndrome length mismatch");
  size_t idx = 0;
  for (size_t i = 0; i < syndrome.size(); ++i)
    if (syndrome.get(i)) idx |= size_t(1) << i;
  return {table_[idx], true};
}

DecodeResult Decoder::decode(const BitVec& syndrome) {
  if (syndrome.size() != code_.num_checks())
    throw std::invalid_argument("syndrome length mismatch");
  if (cfg_.kind == DecoderConfig::Kind::lookup) return decode_lookup(syndrome);

  BitVec syn_x = sector_syndrome(true, syndrome);
  BitVec syn_z = sector_syndrome(false, syndrome);
  BpSectorResult bx = bp_on(sx_, syn_x);
  BpSectorResult bz = bp_on(sz_, syn_z);

  DecodeResult out;
  out.estimate = Pauli(code_.n);
  if (cfg_.kind == DecoderConfig::Kind::bp) {
    out.estimate.x = bx.hard;
    out.estimate.z = bz.hard;
    out.converged = bx.converged && bz.converged;
    return out;
  }
  out.estimate.x = bx.converged ? bx.hard : osd_on(sx_, syn_x, bx.llr);
  out.estimate.z = bz.converged ? bz.hard : osd_on(sz_, syn_z, bz.llr);
  out.converged = true;
  return out;
}

}  // namespace qrep
