#include "qrep/tableau.hpp"

#include <stdexcept>

namespace qrep {

namespace {

uint64_t and_popcount(const BitVec& a, const BitVec& b) {
  auto aw = a.words();
  auto bw = b.words();
  uint64_t c = 0;
  for (size_t i = 0; i < aw.size(); ++i) c += std::popcount(aw[i] & bw[i]);
  return c;
}

}  // namespace

Tableau::Tableau(size_t q) : q_(q) {
  destab_.reserve(q);
  stab_.reserve(q);
  for (size_t i = 0; i < q; ++i) {
    Row d{BitVec(q), BitVec(q), 0};
    d.x.set(i, true);
    destab_.push_back(std::move(d));
    Row s{BitVec(q), BitVec(q), 0};
    s.z.set(i, true);
    stab_.push_back(std::move(s));
  }
}

bool Tableau::anticommutes(const Row& r, const Pauli& p) const {
  return (and_popcount(r.x, p.z) + and_popcount(r.z, p.x)) & 1;
}

void Tableau::row_mul(Row& dst, const Row& src) const {
  dst.phase = uint8_t((dst.phase + src.phase + 2 * (and_popcount(dst.z, src.x) & 1)) & 3);
  dst.x ^= src.x;
  dst.z ^= src.z;
}

Tableau::Row Tableau::pauli_row(const SignedPauli& op) const {
  Row r{op.p.x, op.p.z, 0};
  r.phase = uint8_t((2 * (op.neg ? 1 : 0) + and_popcount(op.p.x, op.p.z)) & 3);
  return r;
}

int Tableau::deterministic_sign(const SignedPauli& op) const {
  // op commutes with the whole group, so it equals +/- the product of the
  // stabilizer rows indexed by destabilizers that anticommute with it.
  Row acc{BitVec(q_), BitVec(q_), 0};
  for (size_t j = 0; j < q_; ++j)
    if (anticommutes(destab_[j], op.p)) row_mul(acc, stab_[j]);
  Row target = pauli_row(op);
  if (acc.x != target.x || acc.z != target.z)
    throw std::logic_error("deterministic measurement: operator not in stabilizer span");
  uint8_t diff = uint8_t((target.phase - acc.phase) & 3);
  if (diff & 1) throw std::logic_error("non-Hermitian phase mismatch");
  return diff == 0 ? +1 : -1;
}

Tableau::MeasureResult Tableau::measure_impl(const SignedPauli& op, bool have_forced,
                                             bool want, RngStream* rng) {
  if (op.p.n != q_) throw std::invalid_argument("operator size mismatch");
  size_t pivot = q_;
  for (size_t i = 0; i < q_; ++i)
    if (anticommutes(stab_[i], op.p)) { pivot = i; break; }

  if (pivot == q_) {
    bool outcome = deterministic_sign(op) < 0;
    if (have_forced && outcome != want)
      throw std::logic_error("forced measurement contradicts deterministic outcome");
    return {outcome, false};
  }

  Row pivot_row = stab_[pivot];
  for (size_t i = 0; i < q_; ++i) {
    if (i != pivot && anticommutes(stab_[i], op.p)) row_mul(stab_[i], pivot_row);
    if (anticommutes(destab_[i], op.p)) row_mul(destab_[i], pivot_row);
  }
  destab_[pivot] = pivot_row;

  bool outcome = have_forced ? want : rng->bit();
  Row meas = pauli_row(op);
  meas.phase = uint8_t((meas.phase + 2 * (outcome ? 1 : 0)) & 3);
  stab_[pivot] = std::move(meas);
  return {outcome, true};
}

Tableau::MeasureResult Tableau::measure(const SignedPauli& op, RngStream& rng) {
  return measure_impl(op, false, false, &rng);
}

Tableau::MeasureResult Tableau::measure_forced(const SignedPauli& op, bool want) {
  return measure_impl(op, true, want, nullptr);
}

void Tableau::apply_pauli(const Pauli& e) {
  if (e.n != q_) throw std::invalid_argument("error size mismatch");
  for (Row& r : stab_)
    if (anticommutes(r, e)) r.phase = uint8_t((r.phase + 2) & 3);
  for (Row& r : destab_)
    if (anticommutes(r, e)) r.phase = uint8_t((r.phase + 2) & 3);
}

int Tableau::expectation(const SignedPauli& op) const {
  if (op.p.n != q_) throw std::invalid_argument("operator size mismatch");
  for (const Row& r : stab_)
    if (anticommutes(r, op.p)) return 0;
  return deterministic_sign(op);
}

double Tableau::bell_fidelity(std::span<const std::pair<size_t, size_t>> pairs) const {
  // |Phi+><Phi+| = (II + XX - YY + ZZ)/4 on each pair; expand the product.
  size_t k = pairs.size();
  double sum = 0.0;
  for (uint64_t mask = 0; mask < (uint64_t(1) << (2 * k)); ++mask) {
    SignedPauli term{Pauli(q_), false};
    int sign = 1;
    for (size_t j = 0; j < k; ++j) {
      int sel = int((mask >> (2 * j)) & 3);  // 0:I 1:XX 2:ZZ 3:YY
      auto [a, b] = pairs[j];
      if (sel == 0) continue;
      if (sel != 2) { term.p.x.set(a, true); term.p.x.set(b, true); }
      if (sel != 1) { term.p.z.set(a, true); term.p.z.set(b, true); }
      if (sel == 3) sign = -sign;
    }
    sum += sign * expectation(term);
  }
  return sum / double(uint64_t(1) << (2 * k));
}

Tableau state_from_stabilizers(size_t q, std::span<const SignedPauli> gens) {
  Tableau t(q);
  // Symplectic-dual rows of the generators pinned so far; used to solve for
  // sign-repair Paulis.
  gf2::BitMatrix pinned(gens.size(), 2 * q);
  for (size_t i = 0; i < gens.size(); ++i) {
    const SignedPauli& g = gens[i];
    if (g.p.n != q) throw std::invalid_argument("generator size mismatch");
    if (t.expectation(g) == -1) {
      // Deterministic wrong sign: flip it with a Pauli that anticommutes
      // with g but commutes with generators 0..i-1.
      BitVec rhs(i + 1);
      rhs.set(i, true);
      gf2::BitMatrix sys(i + 1, 2 * q);
      for (size_t r = 0; r < i; ++r) sys.set_row(r, pinned.row(r));
      for (size_t c = 0; c < q; ++c) {
        sys.set(i, c, g.p.z.get(c));
        sys.set(i, q + c, g.p.x.get(c));
      }
      auto u = gf2::solve(sys, rhs);
      if (!u) throw std::logic_error("sign repair infeasible: generators dependent?");
      Pauli corr(q);
      for (size_t c = 0; c < q; ++c) {
        corr.x.set(c, u->get(c));
        corr.z.set(c, u->get(q + c));
      }
      t.apply_pauli(corr);
    }
    t.measure_forced(g, g.neg);
    for (size_t c = 0; c < q; ++c) {
      pinned.set(i, c, g.p.z.get(c));
      pinned.set(i, q + c, g.p.x.get(c));
    }
  }
  return t;
}

Pauli embed_pauli(const Pauli& local, std::span<const size_t> qubit_map, size_t q) {
  if (local.n != qubit_map.size()) throw std::invalid_argument("qubit map size mismatch");
  Pauli out(q);
  for (size_t i = 0; i < local.n; ++i) {
    if (local.x.get(i)) out.x.set(qubit_map[i], true);
    if (local.z.get(i)) out.z.set(qubit_map[i], true);
  }
  return out;
}

}  // namespace qrep
