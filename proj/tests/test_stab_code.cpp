#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "qrep/code_factory.hpp"
#include "qrep/pauli_enum.hpp"
#include "qrep/stab_code.hpp"

using namespace qrep;

TEST_CASE("c422 builtin validates with expected parameters") {
  StabilizerCode c = builtin_code("c422");
  CHECK(c.n == 4);
  CHECK(c.k == 2);
  CHECK(c.d == 2);
  CHECK(c.d_exact);
  CHECK(c.css);
  CHECK(validate(c).ok());
}

TEST_CASE("anticommuting check rows are reported") {
  StabilizerCode bad;
  bad.n = 1;
  bad.k = 0;
  bad.h1 = BitMatrix::from_strings({"1", "0"});
  bad.h2 = BitMatrix::from_strings({"0", "1"});
  bad.lx1 = BitMatrix(0, 1);
  bad.lx2 = BitMatrix(0, 1);
  bad.lz1 = BitMatrix(0, 1);
  bad.lz2 = BitMatrix(0, 1);
  ValidationReport rep = validate(bad);
  CHECK_FALSE(rep.ok());
  bool found = false;
  for (auto& issue : rep.issues)
    if (issue.what.find("anticommute") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("steane builtin parameters") {
  StabilizerCode c = builtin_code("steane713");
  CHECK(c.n == 7);
  CHECK(c.k == 1);
  CHECK(c.d == 3);
  CHECK(c.d_exact);
  CHECK(c.css);
  CHECK(validate(c).ok());
  // weight-3 representatives exist in the logical coset
  CHECK(c.logical_x(0).weight() == 3);
  CHECK(c.logical_z(0).weight() == 3);
}

TEST_CASE("repetition(3) is the bit-flip code") {
  StabilizerCode c = builtin_code("repetition(3)");
  CHECK(c.n == 3);
  CHECK(c.k == 1);
  CHECK(c.d == 1);
  CHECK(c.d_exact);
  CHECK(validate(c).ok());
}

TEST_CASE("unknown builtin name") {
  CHECK_THROWS_AS(builtin_code("c999"), std::invalid_argument);
}

TEST_CASE("trivial code with empty H gets single-qubit logicals") {
  StabilizerCode c = code_from_checks("trivial1", BitMatrix(0, 1), BitMatrix(0, 1));
  CHECK(c.k == 1);
  CHECK(c.logical_x(0).to_string() == "X");
  CHECK(c.logical_z(0).to_string() == "Z");
}

TEST_CASE("extract_logicals round-trips through validate") {
  for (const char* name : {"c422", "steane713", "repetition(3)", "repetition(5)"}) {
    StabilizerCode c = builtin_code(name);
    LogicalOperators lo = extract_logicals(c.h1, c.h2);
    StabilizerCode rebuilt = c;
    rebuilt.lx1 = lo.lx1;
    rebuilt.lx2 = lo.lx2;
    rebuilt.lz1 = lo.lz1;
    rebuilt.lz2 = lo.lz2;
    CHECK(validate(rebuilt).ok());
  }
}

TEST_CASE("extract_logicals handles a non-CSS code with Y content") {
  // Single generator Y1 X2: r vector is nonzero for this code.
  BitMatrix h1 = BitMatrix::from_strings({"11"});
  BitMatrix h2 = BitMatrix::from_strings({"10"});
  StabilizerCode c = code_from_checks("y-toy", h1, h2);
  CHECK(c.k == 1);
  CHECK_FALSE(c.css);
  CHECK(validate(c).ok());
}

TEST_CASE("extract_logicals is deterministic") {
  StabilizerCode a = builtin_code("steane713");
  LogicalOperators l1 = extract_logicals(a.h1, a.h2);
  LogicalOperators l2 = extract_logicals(a.h1, a.h2);
  CHECK(l1.lx1 == l2.lx1);
  CHECK(l1.lz2 == l2.lz2);
}

TEST_CASE("exhaustive distance on [[7,1,3]] agrees with a weight sweep") {
  StabilizerCode c = builtin_code("steane713");
  // independent check: no logical of weight <= 2 exists
  bool found_w2 = for_each_pauli_up_to_weight(7, 2, [&](const Pauli& p) {
    if (p.is_identity()) return false;
    for (size_t i = 0; i < c.num_checks(); ++i)
      if (symplectic_product(p, c.stabilizer(i))) return false;
    return true;  // commuting non-identity of weight <= 2 would be d < 3
  });
  CHECK_FALSE(found_w2);
  DistanceEstimate de = estimate_distance(c);
  CHECK(de.d == 3);
  CHECK(de.exact);
}

TEST_CASE("randomized distance path upper-bounds and reaches the exact value") {
  for (const char* name : {"c422", "steane713"}) {
    StabilizerCode c = builtin_code(name);
    DistanceEstimate exact = estimate_distance(c);
    // force the randomized path by lowering the exhaustive cutoff
    DistanceEstimate probe = estimate_distance(c, 400, 3, 0);
    CHECK_FALSE(probe.exact);
    CHECK(probe.d >= exact.d);
    CHECK(probe.d == exact.d);  // small codes: enough effort finds the minimum
  }
}

TEST_CASE("JSON code file round trip is bit-exact") {
  StabilizerCode c = builtin_code("steane713");
  c.id = "steane-rt";
  std::string text = code_to_json(c);
  StabilizerCode back = code_from_json(text);
  CHECK(back.n == c.n);
  CHECK(back.k == c.k);
  CHECK(back.d == c.d);
  CHECK(back.d_exact == c.d_exact);
  CHECK(back.h1 == c.h1);
  CHECK(back.h2 == c.h2);
  CHECK(back.lx1 == c.lx1);
  CHECK(back.lz1 == c.lz1);
  CHECK(back.id == "steane-rt");
  CHECK(code_to_json(back) == text);
}

TEST_CASE("code file with corrupted logicals fails validation on load") {
  StabilizerCode c = builtin_code("c422");
  std::string text = code_to_json(c);
  // flip one logical bit: breaks the symplectic pairing
  auto pos = text.find("\"lx1\"");
  REQUIRE(pos != std::string::npos);
  auto bitpos = text.find('1', pos);
  text[bitpos] = '0';
  CHECK_THROWS(code_from_json(text));
}

TEST_CASE("alist round trip") {
  ClassicalCode c = random_regular_ldpc(20, {}, 5);
  std::string text = to_alist(c.h);
  BitMatrix back = from_alist(text);
  CHECK(back == c.h);
}
