#include "qrep/stab_code.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qrep/pauli_enum.hpp"
#include "qrep/rng.hpp"

namespace qrep {

using gf2::RowBasis;
using json = nlohmann::ordered_json;

namespace {

BitVec concat(const BitVec& a, const BitVec& b) {
  BitVec v(a.size() + b.size());
  for (size_t i = 0; i < a.size(); ++i) v.set(i, a.get(i));
  for (size_t i = 0; i < b.size(); ++i) v.set(a.size() + i, b.get(i));
  return v;
}

BitVec pauli_to_vec(const Pauli& p) { return concat(p.x, p.z); }

Pauli vec_to_pauli(const BitVec& v) {
  size_t n = v.size() / 2;
  Pauli p(n);
  for (size_t i = 0; i < n; ++i) {
    p.x.set(i, v.get(i));
    p.z.set(i, v.get(n + i));
  }
  return p;
}

// Full check matrix (h1|h2) as rows of 2n-bit vectors.
std::vector<BitVec> check_rows(const BitMatrix& h1, const BitMatrix& h2) {
  std::vector<BitVec> rows;
  rows.reserve(h1.rows());
  for (size_t i = 0; i < h1.rows(); ++i) rows.push_back(concat(h1.row(i), h2.row(i)));
  return rows;
}

std::string lex_key(const Pauli& p) { return p.x.to_string() + p.z.to_string(); }

// Greedy weight reduction of a representative by stabilizer-row additions,
// which changes only the coset representative. Lexicographic tie-break keeps
// the choice reproducible across runs.
Pauli reduce_weight(Pauli p, const std::vector<Pauli>& stabs) {
  bool improved = true;
  size_t guard = 0;
  while (improved && guard++ < 4 * (stabs.size() + 1) * p.n) {
    improved = false;
    for (const Pauli& s : stabs) {
      Pauli cand = p * s;
      size_t wc = cand.weight(), wp = p.weight();
      if (wc < wp || (wc == wp && lex_key(cand) < lex_key(p))) {
        p = std::move(cand);
        improved = true;
      }
    }
  }
  return p;
}

gf2::BitMatrix invert(const BitMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("invert: not square");
  size_t n = m.rows();
  BitMatrix a = hstack(m, BitMatrix::identity(n));
  size_t r = 0;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = r;
    while (piv < n && !a.get(piv, c)) ++piv;
    if (piv == n) throw std::invalid_argument("invert: singular matrix");
    a.swap_rows(r, piv);
    for (size_t i = 0; i < n; ++i)
      if (i != r && a.get(i, c)) a.row_xor(i, r);
    ++r;
  }
  BitMatrix inv(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv.set(i, j, a.get(i, n + j));
  return inv;
}

LogicalOperators extract_css(const BitMatrix& hx, const BitMatrix& hz, size_t n, size_t k) {
  // X-type logicals: ker(hz) modulo the row space of hx; Z-type symmetric.
  auto sector = [&](const BitMatrix& ker_of, const BitMatrix& mod_of) {
    RowBasis basis(n);
    for (size_t r = 0; r < mod_of.rows(); ++r) basis.add(mod_of.row(r));
    std::vector<BitVec> out;
    for (BitVec& v : nullspace(ker_of)) {
      if (out.size() == k) break;
      if (basis.add(v)) out.push_back(std::move(v));
    }
    if (out.size() != k) throw std::logic_error("CSS logical extraction rank deficit");
    return out;
  };
  std::vector<BitVec> lx = sector(hz, hx);
  std::vector<BitVec> lz = sector(hx, hz);

  // Pair the sectors: transform lz so that lx_i . lz_j = delta_ij.
  BitMatrix m(k, k);
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) m.set(i, j, BitVec::dot(lx[i], lz[j]));
  BitMatrix a = invert(m).transposed();
  std::vector<BitVec> lz2(k, BitVec(n));
  for (size_t j = 0; j < k; ++j)
    for (size_t l = 0; l < k; ++l)
      if (a.get(j, l)) lz2[j] ^= lz[l];

  // Weight-reduce within each sector; sector stabilizer rows are orthogonal
  // to the opposite sector's logicals, so the pairing is untouched.
  std::vector<Pauli> sx, sz;
  for (size_t r = 0; r < hx.rows(); ++r) sx.emplace_back(n, hx.row(r), BitVec(n));
  for (size_t r = 0; r < hz.rows(); ++r) sz.emplace_back(n, BitVec(n), hz.row(r));

  LogicalOperators out;
  out.lx1 = BitMatrix(k, n); out.lx2 = BitMatrix(k, n);
  out.lz1 = BitMatrix(k, n); out.lz2 = BitMatrix(k, n);
  for (size_t j = 0; j < k; ++j) {
    Pauli px = reduce_weight(Pauli(n, lx[j], BitVec(n)), sx);
    Pauli pz = reduce_weight(Pauli(n, BitVec(n), lz2[j]), sz);
    out.lx1.set_row(j, px.x);
    out.lx2.set_row(j, px.z);
    out.lz1.set_row(j, pz.x);
    out.lz2.set_row(j, pz.z);
  }
  return out;
}

LogicalOperators extract_generic(const BitMatrix& h1, const BitMatrix& h2, size_t n, size_t k) {
  // Normalizer = kernel of the commutation map v -> (sp(v, g_i))_i, which in
  // (x|z) coordinates is the matrix (h2|h1).
  BitMatrix comm = hstack(h2, h1);
  std::vector<BitVec> norm = nullspace(comm);

  RowBasis hbasis(2 * n);
  for (BitVec& r : check_rows(h1, h2)) hbasis.add(std::move(r));

  std::vector<Pauli> cands;
  for (BitVec& v : norm) {
    if (cands.size() == 2 * k) break;
    if (hbasis.add(v)) cands.push_back(vec_to_pauli(v));
  }
  if (cands.size() != 2 * k) throw std::logic_error("normalizer rank deficit");

  // Symplectic Gram-Schmidt with lowest-index pivoting.
  std::vector<std::pair<Pauli, Pauli>> pairs;
  std::vector<Pauli> pool = std::move(cands);
  while (!pool.empty()) {
    Pauli v = pool.front();
    pool.erase(pool.begin());
    size_t wi = pool.size();
    for (size_t i = 0; i < pool.size(); ++i)
      if (symplectic_product(v, pool[i])) { wi = i; break; }
    if (wi == pool.size()) throw std::logic_error("symplectic pairing failed");
    Pauli w = pool[wi];
    pool.erase(pool.begin() + wi);
    for (Pauli& u : pool) {
      if (symplectic_product(u, w)) u *= v;
      if (symplectic_product(u, v)) u *= w;
    }
    pairs.emplace_back(std::move(v), std::move(w));
  }

  std::vector<Pauli> stabs;
  for (size_t i = 0; i < h1.rows(); ++i) stabs.emplace_back(n, h1.row(i), h2.row(i));

  LogicalOperators out;
  out.lx1 = BitMatrix(k, n); out.lx2 = BitMatrix(k, n);
  out.lz1 = BitMatrix(k, n); out.lz2 = BitMatrix(k, n);
  for (size_t j = 0; j < k; ++j) {
    Pauli px = reduce_weight(pairs[j].first, stabs);
    Pauli pz = reduce_weight(pairs[j].second, stabs);
    out.lx1.set_row(j, px.x);
    out.lx2.set_row(j, px.z);
    out.lz1.set_row(j, pz.x);
    out.lz2.set_row(j, pz.z);
  }
  return out;
}

bool commutes_with_all_checks(const StabilizerCode& code, const Pauli& p) {
  for (size_t i = 0; i < code.num_checks(); ++i)
    if (code.h1.row_dot(i, p.z) ^ code.h2.row_dot(i, p.x)) return false;
  return true;
}

DistanceEstimate exhaustive_distance(const StabilizerCode& code) {
  RowBasis hbasis(2 * code.n);
  for (BitVec& r : check_rows(code.h1, code.h2)) hbasis.add(std::move(r));
  for (size_t w = 1; w <= code.n; ++w) {
    bool found = for_each_pauli_of_weight(code.n, w, [&](const Pauli& p) {
      return commutes_with_all_checks(code, p) && !hbasis.contains(pauli_to_vec(p));
    });
    if (found) return {w, true, "exhaustive"};
  }
  throw std::logic_error("no logical operator found (k = 0?)");
}

// Randomized information-set probe for one CSS sector: min weight over
// ker(checks) \ rowspace(dual_checks), upper bound only.
size_t css_sector_bound(const BitMatrix& checks, const BitMatrix& dual, size_t n,
                        size_t effort, RngStream& rng, size_t init) {
  std::vector<BitVec> ker = nullspace(checks);
  if (ker.empty()) return init;
  RowBasis dual_basis(n);
  for (size_t r = 0; r < dual.rows(); ++r) dual_basis.add(dual.row(r));

  size_t best = init;
  auto consider = [&](const BitVec& v) {
    size_t w = v.popcount();
    if (w > 0 && w < best && !dual_basis.contains(v)) best = w;
  };

  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  BitMatrix g = BitMatrix::from_rows(ker, n);

  for (size_t t = 0; t < effort; ++t) {
    for (size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    BitMatrix gp(g.rows(), n);
    for (size_t r = 0; r < g.rows(); ++r)
      for (size_t c = 0; c < n; ++c)
        if (g.get(r, c)) gp.set(r, perm[c], true);
    gf2::RowEchelon re = row_reduce(gp);
    std::vector<BitVec> rows;
    for (size_t r = 0; r < re.rank; ++r) {
      BitVec v(n);
      for (size_t c = 0; c < n; ++c)
        if (re.reduced.get(r, perm[c])) v.set(c, true);
      consider(v);
      rows.push_back(std::move(v));
    }
    for (size_t a = 0; a < rows.size(); ++a)
      for (size_t b = a + 1; b < rows.size(); ++b) consider(rows[a] ^ rows[b]);
  }
  return best;
}

}  // namespace

uint64_t StabilizerCode::content_hash() const {
  std::ostringstream os;
  os << n << ':' << k << ':';
  for (size_t i = 0; i < h1.rows(); ++i)
    os << h1.row(i).to_string() << h2.row(i).to_string() << ';';
  for (size_t j = 0; j < k; ++j)
    os << lx1.row(j).to_string() << lx2.row(j).to_string() << '|'
       << lz1.row(j).to_string() << lz2.row(j).to_string() << ';';
  return gf2::fnv1a64(os.str());
}

ValidationReport validate(const StabilizerCode& code) {
  ValidationReport rep;
  auto issue = [&](std::string s) { rep.issues.push_back({std::move(s)}); };

  size_t m = code.num_checks();
  if (code.h2.rows() != m || code.h1.cols() != code.n || code.h2.cols() != code.n)
    issue("check matrix dimensions inconsistent");
  if (code.lx1.rows() != code.k || code.lz1.rows() != code.k)
    issue("logical matrix row count != k");
  if (!rep.ok()) return rep;

  std::vector<Pauli> gens;
  for (size_t i = 0; i < m; ++i) gens.push_back(code.stabilizer(i));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      if (symplectic_product(gens[i], gens[j]))
        issue("stabilizer rows " + std::to_string(i) + "," + std::to_string(j) + " anticommute");

  BitMatrix h = hstack(code.h1, code.h2);
  size_t r = gf2::rank(h);
  if (r != code.n - code.k)
    issue("rank(H) = " + std::to_string(r) + ", expected " + std::to_string(code.n - code.k));

  for (size_t j = 0; j < code.k; ++j) {
    Pauli lx = code.logical_x(j), lz = code.logical_z(j);
    for (size_t i = 0; i < m; ++i) {
      if (symplectic_product(lx, gens[i]))
        issue("logical X" + std::to_string(j) + " anticommutes with row " + std::to_string(i));
      if (symplectic_product(lz, gens[i]))
        issue("logical Z" + std::to_string(j) + " anticommutes with row " + std::to_string(i));
    }
    for (size_t l = 0; l < code.k; ++l) {
      bool want = (j == l);
      if (symplectic_product(lx, code.logical_z(l)) != want)
        issue("sp(X" + std::to_string(j) + ",Z" + std::to_string(l) + ") wrong");
      if (symplectic_product(lx, code.logical_x(l)))
        issue("logical X pair " + std::to_string(j) + "," + std::to_string(l) + " anticommutes");
      if (symplectic_product(lz, code.logical_z(l)))
        issue("logical Z pair " + std::to_string(j) + "," + std::to_string(l) + " anticommutes");
    }
  }
  return rep;
}

LogicalOperators extract_logicals(const BitMatrix& h1, const BitMatrix& h2) {
  size_t n = h1.cols();
  size_t r = gf2::rank(hstack(h1, h2));
  if (r != h1.rows()) throw std::invalid_argument("H rows dependent; rank != n-k assumption broken");
  size_t k = n - r;

  bool css = true;
  for (size_t i = 0; i < h1.rows() && css; ++i) {
    bool has_x = h1.row(i).any(), has_z = h2.row(i).any();
    if (has_x && has_z) css = false;
  }
  if (css) {
    std::vector<BitVec> hx_rows, hz_rows;
    for (size_t i = 0; i < h1.rows(); ++i) {
      if (h1.row(i).any()) hx_rows.push_back(h1.row(i));
      else hz_rows.push_back(h2.row(i));
    }
    return extract_css(BitMatrix::from_rows(hx_rows, n), BitMatrix::from_rows(hz_rows, n), n, k);
  }
  return extract_generic(h1, h2, n, k);
}

StabilizerCode code_from_checks(std::string id, const BitMatrix& h1, const BitMatrix& h2) {
  if (h1.rows() != h2.rows() || h1.cols() != h2.cols())
    throw std::invalid_argument("h1/h2 shape mismatch");
  StabilizerCode code;
  code.id = std::move(id);
  code.n = h1.cols();
  code.h1 = h1;
  code.h2 = h2;
  size_t r = gf2::rank(hstack(h1, h2));
  if (r != h1.rows()) throw std::invalid_argument("check rows are linearly dependent");
  code.k = code.n - r;

  LogicalOperators lo = extract_logicals(h1, h2);
  code.lx1 = lo.lx1; code.lx2 = lo.lx2;
  code.lz1 = lo.lz1; code.lz2 = lo.lz2;

  code.css = true;
  for (size_t i = 0; i < h1.rows(); ++i) {
    bool has_x = h1.row(i).any(), has_z = h2.row(i).any();
    if (has_x && has_z) { code.css = false; break; }
  }
  if (code.css) {
    std::vector<BitVec> hx_rows, hz_rows;
    for (size_t i = 0; i < h1.rows(); ++i) {
      if (h1.row(i).any()) { hx_rows.push_back(h1.row(i)); code.x_rows.push_back(i); }
      else { hz_rows.push_back(h2.row(i)); code.z_rows.push_back(i); }
    }
    code.hx = BitMatrix::from_rows(hx_rows, code.n);
    code.hz = BitMatrix::from_rows(hz_rows, code.n);
  }

  ValidationReport rep = validate(code);
  if (!rep.ok()) throw std::logic_error("constructed code failed validation: " + rep.issues[0].what);
  return code;
}

DistanceEstimate estimate_distance(const StabilizerCode& code, size_t effort,
                                   uint64_t seed, size_t exhaustive_cutoff) {
  if (code.k == 0) throw std::invalid_argument("distance undefined for k = 0");
  if (code.n <= exhaustive_cutoff) return exhaustive_distance(code);

  RngStream rng(seed, 0xd157);
  size_t best = code.n + 1;
  for (size_t j = 0; j < code.k; ++j) {
    best = std::min(best, code.logical_x(j).weight());
    best = std::min(best, code.logical_z(j).weight());
  }
  if (code.css) {
    best = css_sector_bound(code.hz, code.hx, code.n, effort, rng, best);
    best = css_sector_bound(code.hx, code.hz, code.n, effort, rng, best);
    return {best, false, "css-information-set"};
  }
  // Non-CSS fallback: sparse random combinations of normalizer coset reps.
  BitMatrix comm = hstack(code.h2, code.h1);
  std::vector<BitVec> norm = nullspace(comm);
  RowBasis hbasis(2 * code.n);
  for (BitVec& r : check_rows(code.h1, code.h2)) hbasis.add(std::move(r));
  for (size_t t = 0; t < effort * 16; ++t) {
    BitVec v(2 * code.n);
    size_t picks = 1 + rng.below(3);
    for (size_t i = 0; i < picks; ++i) v ^= norm[rng.below(norm.size())];
    if (!v.any() || hbasis.contains(v)) continue;
    best = std::min(best, vec_to_pauli(v).weight());
  }
  return {best, false, "random-combination"};
}

StabilizerCode builtin_code(const std::string& name) {
  if (name == "c422") {
    BitMatrix h1 = BitMatrix::from_strings({"1111", "0000"});
    BitMatrix h2 = BitMatrix::from_strings({"0000", "1111"});
    StabilizerCode c = code_from_checks("c422", h1, h2);
    DistanceEstimate de = estimate_distance(c);
    c.d = de.d; c.d_exact = de.exact;
    return c;
  }
  if (name == "steane713") {
    BitMatrix hx = BitMatrix::from_strings({"0001111", "0110011", "1010101"});
    BitMatrix zero(3, 7);
    StabilizerCode c = code_from_checks("steane713", vstack(hx, zero), vstack(zero, hx));
    DistanceEstimate de = estimate_distance(c);
    c.d = de.d; c.d_exact = de.exact;
    return c;
  }
  if (name.rfind("repetition(", 0) == 0 && name.back() == ')') {
    size_t n = std::stoul(name.substr(11, name.size() - 12));
    if (n < 2) throw std::invalid_argument("repetition code needs n >= 2");
    BitMatrix h1(n - 1, n), h2(n - 1, n);
    for (size_t i = 0; i + 1 < n; ++i) {
      h2.set(i, i, true);
      h2.set(i, i + 1, true);
    }
    StabilizerCode c = code_from_checks(name, h1, h2);
    DistanceEstimate de = estimate_distance(c);
    c.d = de.d; c.d_exact = de.exact;
    return c;
  }
  throw std::invalid_argument("unknown builtin code: " + name);
}

bool is_builtin_name(const std::string& name) {
  return name == "c422" || name == "steane713" || name.rfind("repetition(", 0) == 0;
}

namespace {

json matrix_to_json(const BitMatrix& m) {
  json rows = json::array();
  for (size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r).to_string());
  return rows;
}

BitMatrix matrix_from_json(const json& rows, size_t cols) {
  std::vector<std::string> v;
  for (const auto& r : rows) v.push_back(r.get<std::string>());
  if (v.empty()) return BitMatrix(0, cols);
  return BitMatrix::from_strings(v);
}

}  // namespace

std::string code_to_json(const StabilizerCode& code, const std::string& meta_json) {
  json j;
  j["n"] = code.n;
  j["k"] = code.k;
  j["d"] = code.d;
  j["d_exact"] = code.d_exact;
  j["h1"] = matrix_to_json(code.h1);
  j["h2"] = matrix_to_json(code.h2);
  j["lx1"] = matrix_to_json(code.lx1);
  j["lx2"] = matrix_to_json(code.lx2);
  j["lz1"] = matrix_to_json(code.lz1);
  j["lz2"] = matrix_to_json(code.lz2);
  json meta = meta_json.empty() ? json::object() : json::parse(meta_json);
  meta["id"] = code.id;
  j["meta"] = meta;
  return j.dump(2) + "\n";
}

StabilizerCode code_from_json(const std::string& text) {
  json j = json::parse(text);
  StabilizerCode code;
  code.n = j.at("n").get<size_t>();
  code.k = j.at("k").get<size_t>();
  code.d = j.at("d").get<size_t>();
  code.d_exact = j.at("d_exact").get<bool>();
  code.h1 = matrix_from_json(j.at("h1"), code.n);
  code.h2 = matrix_from_json(j.at("h2"), code.n);
  code.lx1 = matrix_from_json(j.at("lx1"), code.n);
  code.lx2 = matrix_from_json(j.at("lx2"), code.n);
  code.lz1 = matrix_from_json(j.at("lz1"), code.n);
  code.lz2 = matrix_from_json(j.at("lz2"), code.n);
  if (j.contains("meta") && j["meta"].contains("id"))
    code.id = j["meta"]["id"].get<std::string>();
  else
    code.id = "code";

  code.css = true;
  for (size_t i = 0; i < code.h1.rows(); ++i) {
    bool has_x = code.h1.row(i).any(), has_z = code.h2.row(i).any();
    if (has_x && has_z) { code.css = false; break; }
  }
  if (code.css) {
    std::vector<BitVec> hx_rows, hz_rows;
    for (size_t i = 0; i < code.h1.rows(); ++i) {
      if (code.h1.row(i).any()) { hx_rows.push_back(code.h1.row(i)); code.x_rows.push_back(i); }
      else { hz_rows.push_back(code.h2.row(i)); code.z_rows.push_back(i); }
    }
    code.hx = BitMatrix::from_rows(hx_rows, code.n);
    code.hz = BitMatrix::from_rows(hz_rows, code.n);
  }

  ValidationReport rep = validate(code);
  if (!rep.ok()) throw std::invalid_argument("code file failed validation: " + rep.issues[0].what);
  return code;
}

void save_code(const StabilizerCode& code, const std::string& path, const std::string& meta_json) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << code_to_json(code, meta_json);
}

StabilizerCode load_code(const std::string& path) {
  if (is_builtin_name(path)) return builtin_code(path);
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return code_from_json(ss.str());
}

}  // namespace qrep
