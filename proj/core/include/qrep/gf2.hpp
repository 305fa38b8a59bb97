#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrep::gf2 {

// Packed bit vector over GF(2). Word layout is little-endian within each
// 64-bit word; bits past size() are kept zero so word-wise ops stay exact.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(size_t n) : n_(n), w_((n + 63) / 64, 0) {}
  static BitVec from_string(std::string_view s);

  size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(size_t i, bool v) {
    uint64_t m = uint64_t(1) << (i & 63);
    if (v) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
  }
  void flip(size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

  BitVec& operator^=(const BitVec& o);
  BitVec& operator&=(const BitVec& o);
  friend BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }
  friend BitVec operator&(BitVec a, const BitVec& b) { a &= b; return a; }
  bool operator==(const BitVec&) const = default;

  size_t popcount() const;
  bool any() const;
  // a.b mod 2
  static bool dot(const BitVec& a, const BitVec& b);

  std::span<const uint64_t> words() const { return w_; }
  std::span<uint64_t> words() { return w_; }

  std::string to_string() const;

 private:
  size_t n_ = 0;
  std::vector<uint64_t> w_;
};

// Dense bit matrix, packed row-major.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(size_t rows, size_t cols)
      : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), w_(rows * wpr_, 0) {}
  static BitMatrix identity(size_t n);
  static BitMatrix from_rows(const std::vector<BitVec>& rows, size_t cols);
  static BitMatrix from_strings(const std::vector<std::string>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  bool get(size_t r, size_t c) const {
    return (w_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1;
  }
  void set(size_t r, size_t c, bool v) {
    uint64_t m = uint64_t(1) << (c & 63);
    if (v) w_[r * wpr_ + (c >> 6)] |= m; else w_[r * wpr_ + (c >> 6)] &= ~m;
  }

  BitVec row(size_t r) const;
  void set_row(size_t r, const BitVec& v);
  void row_xor(size_t dst, size_t src);  // row[dst] ^= row[src]
  void swap_rows(size_t a, size_t b);
  size_t row_weight(size_t r) const;
  bool row_dot(size_t r, const BitVec& v) const;

  BitVec mul(const BitVec& x) const;          // M.x
  BitMatrix mul(const BitMatrix& o) const;    // M.O
  BitMatrix transposed() const;

  bool operator==(const BitMatrix&) const = default;

  std::span<const uint64_t> row_words(size_t r) const {
    return {w_.data() + r * wpr_, wpr_};
  }
  std::span<uint64_t> row_words(size_t r) {
    return {w_.data() + r * wpr_, wpr_};
  }

 private:
  size_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<uint64_t> w_;
};

BitMatrix hstack(const BitMatrix& a, const BitMatrix& b);
BitMatrix vstack(const BitMatrix& a, const BitMatrix& b);
BitMatrix kron(const BitMatrix& a, const BitMatrix& b);

struct RowEchelon {
  BitMatrix reduced;               // reduced row echelon form
  size_t rank = 0;
  std::vector<size_t> pivot_cols;  // one per nonzero row, ascending
};

RowEchelon row_reduce(const BitMatrix& m);
size_t rank(const BitMatrix& m);

// Solves M.x = b; returns nullopt when inconsistent. Free variables are set
// to zero (lowest pivot-free index first), making the solution deterministic.
std::optional<BitVec> solve(const BitMatrix& m, const BitVec& b);

// Basis of {x : M.x = 0}; size == cols - rank.
std::vector<BitVec> nullspace(const BitMatrix& m);

// Incremental independence tracker: keeps a row-reduced basis and answers
// whether a new vector extends it.
class RowBasis {
 public:
  explicit RowBasis(size_t cols) : cols_(cols) {}
  // Returns true (and absorbs v) when v is independent of the basis so far.
  bool add(BitVec v);
  // Reduces v against the basis; result is zero iff v is in the row space.
  BitVec reduce(BitVec v) const;
  bool contains(const BitVec& v) const { return !reduce(v).any(); }
  size_t rank() const { return rows_.size(); }
  size_t cols() const { return cols_; }

 private:
  size_t cols_;
  std::vector<BitVec> rows_;       // echelon rows
  std::vector<size_t> pivots_;     // pivot column per row
};

// Row-index lists per row/column; used by BP and other LDPC-scale loops
// where dense row scans would dominate.
struct SparseMatrix {
  size_t rows = 0, cols = 0;
  std::vector<std::vector<uint32_t>> row_idx;
  std::vector<std::vector<uint32_t>> col_idx;

  static SparseMatrix from_dense(const BitMatrix& m);
};

// Pauli operator on n qubits up to phase, as the pair (x|z).
// x marks X components, z marks Z components; overlap means Y.
struct Pauli {
  size_t n = 0;
  BitVec x, z;

  Pauli() = default;
  explicit Pauli(size_t nq) : n(nq), x(nq), z(nq) {}
  Pauli(size_t nq, BitVec xv, BitVec zv);

  static Pauli from_string(std::string_view s);  // e.g. "XIYZ"

  bool is_identity() const { return !x.any() && !z.any(); }
  size_t weight() const;  // number of qubits acted on

  Pauli& operator*=(const Pauli& o);  // product up to phase
  friend Pauli operator*(Pauli a, const Pauli& b) { a *= b; return a; }
  bool operator==(const Pauli&) const = default;

  std::string to_string() const;
};

// Symplectic inner product: 1 iff the operators anticommute.
// Convention: sp((a|b),(c|d)) = a.d + b.c mod 2.
bool symplectic_product(const Pauli& u, const Pauli& v);

// 64-bit FNV-1a, used for content hashes in result provenance.
uint64_t fnv1a64(std::string_view s);

}  // namespace qrep::gf2
