#include "qrep/code_factory.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qrep/rng.hpp"

namespace qrep {

namespace {

// One attempt at a configuration-model matching. Edge list pairs bit stubs
// with check stubs; duplicate edges are broken up by swapping with a random
// partner edge.
std::optional<BitMatrix> try_regular_graph(size_t n_bits, size_t n_checks,
                                           size_t col_w, size_t row_w, RngStream& rng) {
  size_t n_edges = n_bits * col_w;
  std::vector<uint32_t> bit_of(n_edges), check_of(n_edges);
  for (size_t e = 0; e < n_edges; ++e) bit_of[e] = uint32_t(e / col_w);
  for (size_t e = 0; e < n_edges; ++e) check_of[e] = uint32_t(e / row_w);
  for (size_t i = n_edges; i > 1; --i) std::swap(check_of[i - 1], check_of[rng.below(i)]);

  auto has_dup = [&](size_t e) {
    for (size_t f = 0; f < n_edges; ++f)
      if (f != e && bit_of[f] == bit_of[e] && check_of[f] == check_of[e]) return true;
    return false;
  };

  for (size_t round = 0; round < 64; ++round) {
    bool clean = true;
    for (size_t e = 0; e < n_edges; ++e) {
      if (!has_dup(e)) continue;
      clean = false;
      std::swap(check_of[e], check_of[rng.below(n_edges)]);
    }
    if (clean) {
      BitMatrix h(n_checks, n_bits);
      for (size_t e = 0; e < n_edges; ++e) h.set(check_of[e], bit_of[e], true);
      return h;
    }
  }
  return std::nullopt;
}

bool has_4cycle(const BitMatrix& h) {
  // two checks sharing two bits
  for (size_t a = 0; a < h.rows(); ++a)
    for (size_t b = a + 1; b < h.rows(); ++b) {
      size_t shared = 0;
      for (size_t c = 0; c < h.cols() && shared < 2; ++c)
        if (h.get(a, c) && h.get(b, c)) ++shared;
      if (shared >= 2) return true;
    }
  return false;
}

}  // namespace

ClassicalCode random_regular_ldpc(size_t n_bits, const LdpcOptions& opts, uint64_t seed) {
  if ((n_bits * opts.col_weight) % opts.row_weight != 0)
    throw std::invalid_argument("n_bits*col_weight must be divisible by row_weight");
  size_t n_checks = n_bits * opts.col_weight / opts.row_weight;

  RngStream rng(seed, 0x1dbc);
  for (size_t attempt = 0; attempt < opts.max_retries; ++attempt) {
    auto h = try_regular_graph(n_bits, n_checks, opts.col_weight, opts.row_weight, rng);
    if (!h) continue;
    if (opts.require_girth6 && has_4cycle(*h)) continue;
    if (opts.require_full_rank && gf2::rank(*h) != n_checks) continue;
    ClassicalCode c;
    c.n_bits = n_bits;
    c.n_checks = n_checks;
    c.h = std::move(*h);
    c.girth = tanner_girth(c.h);
    return c;
  }
  throw std::runtime_error("regular LDPC generation exhausted retry budget");
}

size_t tanner_girth(const BitMatrix& h, size_t cap) {
  // BFS from each bit vertex in the bipartite Tanner graph.
  size_t nb = h.cols(), nc = h.rows();
  gf2::SparseMatrix s = gf2::SparseMatrix::from_dense(h);
  size_t best = cap + 2;
  for (size_t src = 0; src < nb; ++src) {
    std::vector<int> dist_bit(nb, -1), dist_chk(nc, -1);
    std::vector<int> parent_bit(nb, -1), parent_chk(nc, -1);
    std::vector<std::pair<uint32_t, bool>> frontier{{uint32_t(src), true}};
    dist_bit[src] = 0;
    while (!frontier.empty()) {
      std::vector<std::pair<uint32_t, bool>> next;
      for (auto [v, is_bit] : frontier) {
        if (is_bit) {
          for (uint32_t c : s.col_idx[v]) {
            if (dist_chk[c] < 0) {
              dist_chk[c] = dist_bit[v] + 1;
              parent_chk[c] = int(v);
              next.push_back({c, false});
            } else if (parent_bit[v] != int(c)) {
              size_t cyc = dist_bit[v] + dist_chk[c] + 1;
              best = std::min(best, cyc);
            }
          }
        } else {
          for (uint32_t b : s.row_idx[v]) {
            if (dist_bit[b] < 0) {
              dist_bit[b] = dist_chk[v] + 1;
              parent_bit[b] = int(v);
              next.push_back({b, true});
            } else if (parent_chk[v] != int(b)) {
              size_t cyc = dist_chk[v] + dist_bit[b] + 1;
              best = std::min(best, cyc);
            }
          }
        }
      }
      frontier = std::move(next);
    }
  }
  return best;
}

StabilizerCode hgp(const ClassicalCode& a, const ClassicalCode& b, std::string id) {
  size_t na = a.n_bits, ma = a.n_checks;
  size_t nb = b.n_bits, mb = b.n_checks;

  BitMatrix hx = hstack(kron(a.h, BitMatrix::identity(nb)),
                        kron(BitMatrix::identity(ma), b.h.transposed()));
  BitMatrix hz = hstack(kron(BitMatrix::identity(na), b.h),
                        kron(a.h.transposed(), BitMatrix::identity(mb)));

  size_t n = na * nb + ma * mb;
  BitMatrix zero_x(hx.rows(), n), zero_z(hz.rows(), n);
  BitMatrix h1 = vstack(hx, zero_z);
  BitMatrix h2 = vstack(zero_x, hz);

  if (id.empty()) id = "hgp" + std::to_string(n);
  return code_from_checks(std::move(id), h1, h2);
}

std::vector<FamilyMember> build_family(const std::vector<size_t>& n_bits_sizes,
                                       const FamilyOptions& opts, uint64_t master_seed) {
  std::vector<FamilyMember> family;
  for (size_t si = 0; si < n_bits_sizes.size(); ++si) {
    size_t nb = n_bits_sizes[si];
    std::optional<FamilyMember> best;
    for (size_t inst = 0; inst < opts.instances_per_size; ++inst) {
      uint64_t seed = mix64(master_seed ^ mix64((si << 20) | inst));
      ClassicalCode c = random_regular_ldpc(nb, opts.ldpc, seed);
      StabilizerCode q = hgp(c, c);
      DistanceEstimate de = estimate_distance(q, opts.distance_effort, seed);
      q.d = de.d;
      q.d_exact = de.exact;
      q.id = "hgp" + std::to_string(q.n) + "-s" + std::to_string(master_seed) +
             "-i" + std::to_string(inst);
      if (!best || de.d > best->distance.d)
        best = FamilyMember{std::move(q), seed, inst, de};
    }
    family.push_back(std::move(*best));
  }
  return family;
}

std::string to_alist(const BitMatrix& h) {
  // MacKay alist: n m / max col deg, max row deg / per-col degs / per-row
  // degs / 1-based indices per column, then per row.
  gf2::SparseMatrix s = gf2::SparseMatrix::from_dense(h);
  size_t n = h.cols(), m = h.rows();
  size_t maxc = 0, maxr = 0;
  for (auto& v : s.col_idx) maxc = std::max(maxc, v.size());
  for (auto& v : s.row_idx) maxr = std::max(maxr, v.size());
  std::ostringstream os;
  os << n << ' ' << m << '\n' << maxc << ' ' << maxr << '\n';
  for (size_t c = 0; c < n; ++c) os << s.col_idx[c].size() << (c + 1 < n ? ' ' : '\n');
  for (size_t r = 0; r < m; ++r) os << s.row_idx[r].size() << (r + 1 < m ? ' ' : '\n');
  for (size_t c = 0; c < n; ++c) {
    for (size_t i = 0; i < maxc; ++i)
      os << (i < s.col_idx[c].size() ? s.col_idx[c][i] + 1 : 0) << (i + 1 < maxc ? ' ' : '\n');
  }
  for (size_t r = 0; r < m; ++r) {
    for (size_t i = 0; i < maxr; ++i)
      os << (i < s.row_idx[r].size() ? s.row_idx[r][i] + 1 : 0) << (i + 1 < maxr ? ' ' : '\n');
  }
  return os.str();
}

BitMatrix from_alist(const std::string& text) {
  std::istringstream is(text);
  size_t n, m, maxc, maxr;
  if (!(is >> n >> m >> maxc >> maxr)) throw std::invalid_argument("bad alist header");
  std::vector<size_t> cdeg(n), rdeg(m);
  for (auto& d : cdeg) is >> d;
  for (auto& d : rdeg) is >> d;
  BitMatrix h(m, n);
  for (size_t c = 0; c < n; ++c)
    for (size_t i = 0; i < maxc; ++i) {
      long v;
      is >> v;
      if (v > 0) h.set(size_t(v - 1), c, true);
    }
  if (!is) throw std::invalid_argument("truncated alist column section");
  return h;
}

void save_alist(const BitMatrix& h, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << to_alist(h);
}

BitMatrix load_alist(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_alist(ss.str());
}

}  // namespace qrep
