#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qrep/gf2.hpp"
#include "qrep/rng.hpp"

using namespace qrep;
using namespace qrep::gf2;

namespace {

BitVec random_vec(size_t n, RngStream& rng) {
  BitVec v(n);
  for (size_t i = 0; i < n; ++i) v.set(i, rng.bit());
  return v;
}

BitMatrix random_matrix(size_t r, size_t c, RngStream& rng) {
  BitMatrix m(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) m.set(i, j, rng.bit());
  return m;
}

Pauli random_pauli(size_t n, RngStream& rng) {
  Pauli p(n);
  for (size_t i = 0; i < n; ++i) {
    p.x.set(i, rng.bit());
    p.z.set(i, rng.bit());
  }
  return p;
}

}  // namespace

TEST_CASE("symplectic product on single-qubit operators") {
  Pauli x1 = Pauli::from_string("X");
  Pauli z1 = Pauli::from_string("Z");
  CHECK(symplectic_product(x1, z1) == 1);
  CHECK(symplectic_product(x1, x1) == 0);
  CHECK(symplectic_product(z1, z1) == 0);
}

TEST_CASE("two anticommuting sites cancel mod 2") {
  Pauli yy = Pauli::from_string("YY");
  Pauli xx = Pauli::from_string("XX");
  CHECK(symplectic_product(yy, xx) == 0);
}

TEST_CASE("symplectic product is bilinear") {
  RngStream rng(7, 0);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 1 + rng.below(24);
    Pauli u = random_pauli(n, rng), w = random_pauli(n, rng), v = random_pauli(n, rng);
    bool lhs = symplectic_product(u * w, v);
    bool rhs = symplectic_product(u, v) ^ symplectic_product(w, v);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("symplectic dimension mismatch throws") {
  CHECK_THROWS_AS(symplectic_product(Pauli(3), Pauli(4)), std::invalid_argument);
}

TEST_CASE("row_reduce ranks") {
  CHECK(row_reduce(BitMatrix::identity(3)).rank == 3);
  CHECK(row_reduce(BitMatrix::from_strings({"11", "11"})).rank == 1);
  // H of the [[4,2,2]] code in (H1|H2) form
  BitMatrix h = BitMatrix::from_strings({"11110000", "00001111"});
  CHECK(row_reduce(h).rank == 2);
}

TEST_CASE("row_reduce preserves the row space") {
  RngStream rng(11, 0);
  for (int trial = 0; trial < 50; ++trial) {
    size_t r = 1 + rng.below(8), c = 1 + rng.below(12);
    BitMatrix m = random_matrix(r, c, rng);
    RowEchelon re = row_reduce(m);
    RowBasis reduced_basis(c);
    for (size_t i = 0; i < re.rank; ++i) reduced_basis.add(re.reduced.row(i));
    for (size_t i = 0; i < r; ++i) CHECK(reduced_basis.contains(m.row(i)));
    RowBasis orig_basis(c);
    for (size_t i = 0; i < r; ++i) orig_basis.add(m.row(i));
    CHECK(orig_basis.rank() == re.rank);
  }
}

TEST_CASE("solve identity and deterministic tie-break") {
  BitMatrix id = BitMatrix::identity(4);
  BitVec b = BitVec::from_string("1010");
  auto x = solve(id, b);
  REQUIRE(x.has_value());
  CHECK(*x == b);

  // [[1,1]] x = [1]: both [1,0] and [0,1] solve it; free variable is set to
  // zero, so the pivot column carries the 1.
  BitMatrix m = BitMatrix::from_strings({"11"});
  auto y = solve(m, BitVec::from_string("1"));
  REQUIRE(y.has_value());
  CHECK(y->to_string() == "10");
}

TEST_CASE("solve inconsistency returns nullopt") {
  BitMatrix m = BitMatrix::from_strings({"1", "1"});
  CHECK_FALSE(solve(m, BitVec::from_string("10")).has_value());
}

TEST_CASE("solve output satisfies the system") {
  RngStream rng(13, 0);
  for (int trial = 0; trial < 100; ++trial) {
    size_t r = 1 + rng.below(10), c = 1 + rng.below(14);
    BitMatrix m = random_matrix(r, c, rng);
    BitVec target = random_vec(c, rng);
    BitVec b = m.mul(target);  // consistent by construction
    auto x = solve(m, b);
    REQUIRE(x.has_value());
    CHECK(m.mul(*x) == b);
  }
}

TEST_CASE("nullspace basics") {
  CHECK(nullspace(BitMatrix::identity(5)).empty());
  auto basis = nullspace(BitMatrix::from_strings({"11"}));
  REQUIRE(basis.size() == 1);
  CHECK(basis[0].to_string() == "11");
}

TEST_CASE("nullspace vectors are independent and annihilated") {
  RngStream rng(17, 0);
  for (int trial = 0; trial < 50; ++trial) {
    size_t r = 1 + rng.below(8), c = 1 + rng.below(14);
    BitMatrix m = random_matrix(r, c, rng);
    auto basis = nullspace(m);
    CHECK(basis.size() == c - row_reduce(m).rank);
    RowBasis rb(c);
    for (const BitVec& v : basis) {
      CHECK_FALSE(m.mul(v).any());
      CHECK(rb.add(v));  // each extends the span
    }
  }
}

TEST_CASE("matrix multiply against direct evaluation") {
  RngStream rng(23, 0);
  BitMatrix a = random_matrix(5, 9, rng);
  BitMatrix b = random_matrix(9, 4, rng);
  BitMatrix ab = a.mul(b);
  for (size_t i = 0; i < 5; ++i)
    for (size_t j = 0; j < 4; ++j) {
      bool acc = false;
      for (size_t l = 0; l < 9; ++l) acc ^= a.get(i, l) && b.get(l, j);
      CHECK(ab.get(i, j) == acc);
    }
}

TEST_CASE("kron dimensions and spot values") {
  BitMatrix a = BitMatrix::from_strings({"10", "11"});
  BitMatrix b = BitMatrix::from_strings({"01", "10"});
  BitMatrix k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k.cols() == 4);
  CHECK(k.get(0, 1) == 1);  // a(0,0)*b(0,1)
  CHECK(k.get(0, 3) == 0);  // a(0,1)=0
  CHECK(k.get(3, 2) == 1);  // a(1,1)*b(1,0)
}

TEST_CASE("pauli string round trip and weight") {
  Pauli p = Pauli::from_string("XIYZ");
  CHECK(p.to_string() == "XIYZ");
  CHECK(p.weight() == 3);
  CHECK(p.x.to_string() == "1010");
  CHECK(p.z.to_string() == "0011");
}

TEST_CASE("bit vector packing across word boundaries") {
  BitVec v(130);
  v.set(0, true);
  v.set(64, true);
  v.set(129, true);
  CHECK(v.popcount() == 3);
  BitVec w(130);
  w.set(64, true);
  CHECK(BitVec::dot(v, w) == 1);
  v ^= w;
  CHECK(v.popcount() == 2);
  CHECK_FALSE(v.get(64));
}
