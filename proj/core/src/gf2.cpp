#include "qrep/gf2.hpp"

#include <algorithm>
#include <stdexcept>

namespace qrep::gf2 {

BitVec BitVec::from_string(std::string_view s) {
  BitVec v(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') v.set(i, true);
    else if (s[i] != '0') throw std::invalid_argument("bit string must be 0/1");
  }
  return v;
}

BitVec& BitVec::operator^=(const BitVec& o) {
  if (o.n_ != n_) throw std::invalid_argument("BitVec size mismatch");
  for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
  return *this;
}

BitVec& BitVec::operator&=(const BitVec& o) {
  if (o.n_ != n_) throw std::invalid_argument("BitVec size mismatch");
  for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
  return *this;
}

size_t BitVec::popcount() const {
  size_t c = 0;
  for (uint64_t w : w_) c += std::popcount(w);
  return c;
}

bool BitVec::any() const {
  for (uint64_t w : w_)
    if (w) return true;
  return false;
}

bool BitVec::dot(const BitVec& a, const BitVec& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("BitVec size mismatch");
  uint64_t acc = 0;
  for (size_t i = 0; i < a.w_.size(); ++i) acc ^= a.w_[i] & b.w_[i];
  return std::popcount(acc) & 1;
}

std::string BitVec::to_string() const {
  std::string s(n_, '0');
  for (size_t i = 0; i < n_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

BitMatrix BitMatrix::identity(size_t n) {
  BitMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<BitVec>& rows, size_t cols) {
  BitMatrix m(rows.size(), cols);
  for (size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
  return m;
}

BitMatrix BitMatrix::from_strings(const std::vector<std::string>& rows) {
  if (rows.empty()) return {};
  BitMatrix m(rows.size(), rows[0].size());
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw std::invalid_argument("ragged rows");
    m.set_row(r, BitVec::from_string(rows[r]));
  }
  return m;
}

BitVec BitMatrix::row(size_t r) const {
  BitVec v(cols_);
  auto src = row_words(r);
  std::copy(src.begin(), src.end(), v.words().begin());
  return v;
}

void BitMatrix::set_row(size_t r, const BitVec& v) {
  if (v.size() != cols_) throw std::invalid_argument("row length mismatch");
  auto dst = row_words(r);
  auto src = v.words();
  std::copy(src.begin(), src.end(), dst.begin());
}

void BitMatrix::row_xor(size_t dst, size_t src) {
  auto d = row_words(dst);
  auto s = row_words(src);
  for (size_t i = 0; i < wpr_; ++i) d[i] ^= s[i];
}

void BitMatrix::swap_rows(size_t a, size_t b) {
  if (a == b) return;
  auto ra = row_words(a);
  auto rb = row_words(b);
  for (size_t i = 0; i < wpr_; ++i) std::swap(ra[i], rb[i]);
}

size_t BitMatrix::row_weight(size_t r) const {
  size_t c = 0;
  for (uint64_t w : row_words(r)) c += std::popcount(w);
  return c;
}

bool BitMatrix::row_dot(size_t r, const BitVec& v) const {
  auto rw = row_words(r);
  auto vw = v.words();
  uint64_t acc = 0;
  for (size_t i = 0; i < wpr_; ++i) acc ^= rw[i] & vw[i];
  return std::popcount(acc) & 1;
}

BitVec BitMatrix::mul(const BitVec& x) const {
  if (x.size() != cols_) throw std::invalid_argument("dimension mismatch");
  BitVec y(rows_);
  for (size_t r = 0; r < rows_; ++r)
    if (row_dot(r, x)) y.set(r, true);
  return y;
}

BitMatrix BitMatrix::mul(const BitMatrix& o) const {
  if (cols_ != o.rows()) throw std::invalid_argument("dimension mismatch");
  BitMatrix out(rows_, o.cols());
  for (size_t r = 0; r < rows_; ++r) {
    auto dst = out.row_words(r);
    for (size_t c = 0; c < cols_; ++c) {
      if (!get(r, c)) continue;
      auto src = o.row_words(c);
      for (size_t i = 0; i < src.size(); ++i) dst[i] ^= src[i];
    }
  }
  return out;
}

BitMatrix BitMatrix::transposed() const {
  BitMatrix t(cols_, rows_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cols_; ++c)
      if (get(r, c)) t.set(c, r, true);
  return t;
}

BitMatrix hstack(const BitMatrix& a, const BitMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack row mismatch");
  BitMatrix m(a.rows(), a.cols() + b.cols());
  for (size_t r = 0; r < a.rows(); ++r) {
    for (size_t c = 0; c < a.cols(); ++c) m.set(r, c, a.get(r, c));
    for (size_t c = 0; c < b.cols(); ++c) m.set(r, a.cols() + c, b.get(r, c));
  }
  return m;
}

BitMatrix vstack(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack col mismatch");
  BitMatrix m(a.rows() + b.rows(), a.cols());
  for (size_t r = 0; r < a.rows(); ++r) m.set_row(r, a.row(r));
  for (size_t r = 0; r < b.rows(); ++r) m.set_row(a.rows() + r, b.row(r));
  return m;
}

BitMatrix kron(const BitMatrix& a, const BitMatrix& b) {
  BitMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (size_t ra = 0; ra < a.rows(); ++ra)
    for (size_t ca = 0; ca < a.cols(); ++ca) {
      if (!a.get(ra, ca)) continue;
      for (size_t rb = 0; rb < b.rows(); ++rb)
        for (size_t cb = 0; cb < b.cols(); ++cb)
          if (b.get(rb, cb))
            m.set(ra * b.rows() + rb, ca * b.cols() + cb, true);
    }
  return m;
}

RowEchelon row_reduce(const BitMatrix& m) {
  RowEchelon out{m, 0, {}};
  BitMatrix& a = out.reduced;
  size_t r = 0;
  for (size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    size_t piv = r;
    while (piv < a.rows() && !a.get(piv, c)) ++piv;
    if (piv == a.rows()) continue;
    a.swap_rows(r, piv);
    for (size_t i = 0; i < a.rows(); ++i)
      if (i != r && a.get(i, c)) a.row_xor(i, r);
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

size_t rank(const BitMatrix& m) { return row_reduce(m).rank; }

std::optional<BitVec> solve(const BitMatrix& m, const BitVec& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("rhs length mismatch");
  // eliminate on the augmented matrix [M | b]
  BitMatrix a = hstack(m, BitMatrix::from_rows({b}, 1).transposed());
  size_t r = 0;
  std::vector<size_t> pivot_cols;
  for (size_t c = 0; c < m.cols() && r < a.rows(); ++c) {
    size_t piv = r;
    while (piv < a.rows() && !a.get(piv, c)) ++piv;
    if (piv == a.rows()) continue;
    a.swap_rows(r, piv);
    for (size_t i = 0; i < a.rows(); ++i)
      if (i != r && a.get(i, c)) a.row_xor(i, r);
    pivot_cols.push_back(c);
    ++r;
  }
  for (size_t i = r; i < a.rows(); ++i)
    if (a.get(i, m.cols())) return std::nullopt;  // 0 = 1 row
  BitVec x(m.cols());
  for (size_t i = 0; i < pivot_cols.size(); ++i)
    if (a.get(i, m.cols())) x.set(pivot_cols[i], true);
  return x;
}

std::vector<BitVec> nullspace(const BitMatrix& m) {
  RowEchelon re = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (size_t c : re.pivot_cols) is_pivot[c] = true;
  std::vector<BitVec> basis;
  for (size_t c = 0; c < m.cols(); ++c) {
    if (is_pivot[c]) continue;
    BitVec v(m.cols());
    v.set(c, true);
    for (size_t i = 0; i < re.pivot_cols.size(); ++i)
      if (re.reduced.get(i, c)) v.set(re.pivot_cols[i], true);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool RowBasis::add(BitVec v) {
  v = reduce(std::move(v));
  if (!v.any()) return false;
  size_t piv = 0;
  while (!v.get(piv)) ++piv;
  // keep rows sorted by pivot so reduce() stays a single pass
  size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
  rows_.insert(rows_.begin() + pos, std::move(v));
  pivots_.insert(pivots_.begin() + pos, piv);
  return true;
}

BitVec RowBasis::reduce(BitVec v) const {
  for (size_t i = 0; i < rows_.size(); ++i)
    if (v.get(pivots_[i])) v ^= rows_[i];
  return v;
}

SparseMatrix SparseMatrix::from_dense(const BitMatrix& m) {
  SparseMatrix s;
  s.rows = m.rows();
  s.cols = m.cols();
  s.row_idx.resize(s.rows);
  s.col_idx.resize(s.cols);
  for (size_t r = 0; r < s.rows; ++r)
    for (size_t c = 0; c < s.cols; ++c)
      if (m.get(r, c)) {
        s.row_idx[r].push_back(uint32_t(c));
        s.col_idx[c].push_back(uint32_t(r));
      }
  return s;
}

Pauli::Pauli(size_t nq, BitVec xv, BitVec zv) : n(nq), x(std::move(xv)), z(std::move(zv)) {
  if (x.size() != n || z.size() != n)
    throw std::invalid_argument("Pauli component length mismatch");
}

Pauli Pauli::from_string(std::string_view s) {
  Pauli p(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    switch (s[i]) {
      case 'I': case '_': break;
      case 'X': p.x.set(i, true); break;
      case 'Z': p.z.set(i, true); break;
      case 'Y': p.x.set(i, true); p.z.set(i, true); break;
      default: throw std::invalid_argument("Pauli string must be I/X/Y/Z");
    }
  }
  return p;
}

size_t Pauli::weight() const {
  size_t c = 0;
  auto xw = x.words();
  auto zw = z.words();
  for (size_t i = 0; i < xw.size(); ++i) c += std::popcount(xw[i] | zw[i]);
  return c;
}

Pauli& Pauli::operator*=(const Pauli& o) {
  if (o.n != n) throw std::invalid_argument("Pauli size mismatch");
  x ^= o.x;
  z ^= o.z;
  return *this;
}

std::string Pauli::to_string() const {
  std::string s(n, 'I');
  for (size_t i = 0; i < n; ++i) {
    bool xi = x.get(i), zi = z.get(i);
    s[i] = xi ? (zi ? 'Y' : 'X') : (zi ? 'Z' : 'I');
  }
  return s;
}

bool symplectic_product(const Pauli& u, const Pauli& v) {
  if (u.n != v.n) throw std::invalid_argument("Pauli size mismatch");
  return BitVec::dot(u.x, v.z) ^ BitVec::dot(u.z, v.x);
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace qrep::gf2
