#include "qrep/oracle.hpp"

#include <bit>
#include <stdexcept>

#include "qrep/protocol.hpp"

namespace qrep {

namespace {

uint64_t and_popcount(const BitVec& a, const BitVec& b) {
  auto aw = a.words();
  auto bw = b.words();
  uint64_t c = 0;
  for (size_t i = 0; i < aw.size(); ++i) c += std::popcount(aw[i] & bw[i]);
  return c;
}

// i^phase X^x Z^z arithmetic for products of signed Hermitian Paulis.
struct PhasedPauli {
  Pauli p;
  int phase;  // mod 4
};

PhasedPauli to_phased(const SignedPauli& s) {
  return {s.p, int((2 * (s.neg ? 1 : 0) + and_popcount(s.p.x, s.p.z)) & 3)};
}

void mul_into(PhasedPauli& acc, const PhasedPauli& o) {
  acc.phase = int((acc.phase + o.phase + 2 * (and_popcount(acc.p.z, o.p.x) & 1)) & 3);
  acc.p *= o.p;
}

SignedPauli to_signed(const PhasedPauli& ph) {
  int diff = int((ph.phase - int(and_popcount(ph.p.x, ph.p.z))) & 3);
  if (diff & 1) throw std::logic_error("non-Hermitian Pauli product");
  return {ph.p, diff == 2};
}

SignedPauli pair_op(size_t q, size_t a, size_t b, bool zz) {
  SignedPauli op{Pauli(q), false};
  if (zz) {
    op.p.z.set(a, true);
    op.p.z.set(b, true);
  } else {
    op.p.x.set(a, true);
    op.p.x.set(b, true);
  }
  return op;
}

std::vector<size_t> iota_map(size_t start, size_t count) {
  std::vector<size_t> v(count);
  for (size_t i = 0; i < count; ++i) v[i] = start + i;
  return v;
}

}  // namespace

InjectedError InjectedError::none(size_t n) {
  InjectedError e;
  e.alice_input = Pauli(n);
  e.bob_input = Pauli(n);
  e.alice_iface = Pauli(n);
  e.bob_iface = Pauli(n);
  e.flip_sa = BitVec(n);
  e.flip_ta = BitVec(n);
  e.flip_sb = BitVec(n);
  e.flip_tb = BitVec(n);
  return e;
}

BitVec InjectedError::delta_s(size_t n) const {
  BitVec ds(n);
  ds ^= alice_input.z;
  ds ^= bob_input.z;
  ds ^= alice_iface.z;
  ds ^= bob_iface.z;
  ds ^= flip_sa;
  ds ^= flip_sb;
  return ds;
}

BitVec InjectedError::delta_t(size_t n) const {
  BitVec dt(n);
  dt ^= alice_input.x;
  dt ^= bob_input.x;
  dt ^= alice_iface.x;
  dt ^= bob_iface.x;
  dt ^= flip_ta;
  dt ^= flip_tb;
  return dt;
}

std::vector<SignedPauli> distillation_resource_generators(const StabilizerCode& code) {
  size_t q = code.n + code.k;
  std::vector<SignedPauli> gens;
  std::vector<size_t> iface = iota_map(0, code.n);
  for (size_t i = 0; i < code.num_checks(); ++i)
    gens.push_back({embed_pauli(code.stabilizer(i), iface, q), false});
  for (size_t j = 0; j < code.k; ++j) {
    SignedPauli gx{embed_pauli(code.logical_x(j), iface, q), false};
    gx.p.x.set(code.n + j, true);
    gens.push_back(gx);
    SignedPauli gz{embed_pauli(code.logical_z(j), iface, q), false};
    gz.p.z.set(code.n + j, true);
    gens.push_back(gz);
  }
  return gens;
}

std::vector<SignedPauli> repeater_resource_generators(const StabilizerCode& code) {
  size_t q = 2 * code.n;
  std::vector<SignedPauli> gens;
  std::vector<size_t> left = iota_map(0, code.n);
  std::vector<size_t> right = iota_map(code.n, code.n);
  for (size_t i = 0; i < code.num_checks(); ++i) {
    gens.push_back({embed_pauli(code.stabilizer(i), left, q), false});
    gens.push_back({embed_pauli(code.stabilizer(i), right, q), false});
  }
  for (size_t j = 0; j < code.k; ++j) {
    Pauli lx = code.logical_x(j), lz = code.logical_z(j);
    gens.push_back({embed_pauli(lx, left, q) * embed_pauli(lx, right, q), false});
    gens.push_back({embed_pauli(lz, left, q) * embed_pauli(lz, right, q), false});
  }
  return gens;
}

Tableau prepare_distillation_resource(const StabilizerCode& code) {
  auto gens = distillation_resource_generators(code);
  return state_from_stabilizers(code.n + code.k, gens);
}

Tableau prepare_repeater_resource(const StabilizerCode& code) {
  auto gens = repeater_resource_generators(code);
  return state_from_stabilizers(2 * code.n, gens);
}

ProtocolOracle::ProtocolOracle(const StabilizerCode& code, OracleMode mode)
    : code_(code), mode_(mode), base_(0) {
  size_t n = code.n, k = code.k;
  if (mode == OracleMode::distill) {
    q_ = 4 * n + 2 * k;
    a_iface_ = iota_map(0, n);
    a_out_ = iota_map(n, k);
    b_iface_ = iota_map(n + k, n);
    b_out_ = iota_map(2 * n + k, k);
  } else {
    q_ = 6 * n;
    // far (kept) halves first, measured halves second
    a_out_ = iota_map(0, n);       // Alice's kept logical block
    a_iface_ = iota_map(n, n);
    b_iface_ = iota_map(2 * n, n);
    b_out_ = iota_map(3 * n, n);   // Bob's kept logical block
  }
  size_t in_base = (mode == OracleMode::distill) ? 2 * n + 2 * k : 4 * n;
  in_a_.resize(n);
  in_b_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    in_a_[i] = in_base + 2 * i;
    in_b_[i] = in_base + 2 * i + 1;
  }
  if (q_ > 64)
    throw std::invalid_argument("oracle capped at 64 qubits; use smaller codes");

  std::vector<SignedPauli> gens;
  auto add_resource = [&](const std::vector<size_t>& iface, const std::vector<size_t>& out) {
    if (mode_ == OracleMode::distill) {
      for (size_t i = 0; i < code_.num_checks(); ++i)
        gens.push_back({embed_pauli(code_.stabilizer(i), iface, q_), false});
      for (size_t j = 0; j < k; ++j) {
        SignedPauli gx{embed_pauli(code_.logical_x(j), iface, q_), false};
        gx.p.x.set(out[j], true);
        gens.push_back(gx);
        SignedPauli gz{embed_pauli(code_.logical_z(j), iface, q_), false};
        gz.p.z.set(out[j], true);
        gens.push_back(gz);
      }
    } else {
      for (size_t i = 0; i < code_.num_checks(); ++i) {
        gens.push_back({embed_pauli(code_.stabilizer(i), iface, q_), false});
        gens.push_back({embed_pauli(code_.stabilizer(i), out, q_), false});
      }
      for (size_t j = 0; j < k; ++j) {
        Pauli lx = code_.logical_x(j), lz = code_.logical_z(j);
        gens.push_back({embed_pauli(lx, iface, q_) * embed_pauli(lx, out, q_), false});
        gens.push_back({embed_pauli(lz, iface, q_) * embed_pauli(lz, out, q_), false});
      }
    }
  };
  add_resource(a_iface_, a_out_);
  add_resource(b_iface_, b_out_);
  for (size_t i = 0; i < n; ++i) {
    gens.push_back(pair_op(q_, in_a_[i], in_b_[i], false));
    gens.push_back(pair_op(q_, in_a_[i], in_b_[i], true));
  }
  base_ = state_from_stabilizers(q_, gens);
}

ProtocolOracle::RawRun ProtocolOracle::execute(const InjectedError& err, uint64_t seed,
                                               const Pauli& e_hat) const {
  size_t n = code_.n, k = code_.k;
  Tableau t = base_;
  t.apply_pauli(embed_pauli(err.alice_input, in_a_, q_));
  t.apply_pauli(embed_pauli(err.bob_input, in_b_, q_));
  t.apply_pauli(embed_pauli(err.alice_iface, a_iface_, q_));
  t.apply_pauli(embed_pauli(err.bob_iface, b_iface_, q_));

  RngStream rng(seed, 0xbe11);
  RawRun run;
  run.sa = BitVec(n); run.ta = BitVec(n);
  run.sb = BitVec(n); run.tb = BitVec(n);
  for (size_t i = 0; i < n; ++i) {
    run.sa.set(i, t.measure(pair_op(q_, in_a_[i], a_iface_[i], false), rng).outcome);
    run.ta.set(i, t.measure(pair_op(q_, in_a_[i], a_iface_[i], true), rng).outcome);
  }
  for (size_t i = 0; i < n; ++i) {
    run.sb.set(i, t.measure(pair_op(q_, in_b_[i], b_iface_[i], false), rng).outcome);
    run.tb.set(i, t.measure(pair_op(q_, in_b_[i], b_iface_[i], true), rng).outcome);
  }
  run.sa ^= err.flip_sa;
  run.ta ^= err.flip_ta;
  run.sb ^= err.flip_sb;
  run.tb ^= err.flip_tb;

  BitVec s = run.sa ^ run.sb;
  BitVec tt = run.ta ^ run.tb;
  auto [beta, phi] = flips_raw(code_, e_hat, s, tt);
  run.beta_raw = beta;
  run.phi_raw = phi;

  // Step 5: correct Bob's kept qubits.
  Pauli corr(q_);
  for (size_t j = 0; j < k; ++j) {
    if (mode_ == OracleMode::distill) {
      if (beta.get(j)) corr.x.flip(b_out_[j]);
      if (phi.get(j)) corr.z.flip(b_out_[j]);
    } else {
      if (beta.get(j)) corr *= embed_pauli(code_.logical_x(j), b_out_, q_);
      if (phi.get(j)) corr *= embed_pauli(code_.logical_z(j), b_out_, q_);
    }
  }
  t.apply_pauli(corr);

  // Verdict: every target pair generator must sit at +1.
  std::vector<SignedPauli> targets;
  for (size_t j = 0; j < k; ++j) {
    if (mode_ == OracleMode::distill) {
      targets.push_back(pair_op(q_, a_out_[j], b_out_[j], false));
      targets.push_back(pair_op(q_, a_out_[j], b_out_[j], true));
    } else {
      Pauli lx = code_.logical_x(j), lz = code_.logical_z(j);
      targets.push_back(
          {embed_pauli(lx, a_out_, q_) * embed_pauli(lx, b_out_, q_), false});
      targets.push_back(
          {embed_pauli(lz, a_out_, q_) * embed_pauli(lz, b_out_, q_), false});
    }
  }
  run.logical_failure = false;
  for (const SignedPauli& g : targets) {
    int e = t.expectation(g);
    if (e == 0) throw std::logic_error("output left the Pauli frame of the target state");
    if (e < 0) run.logical_failure = true;
  }
  run.fidelity = stabilizer_group_fidelity(t, targets);
  return run;
}

OracleRecord ProtocolOracle::run(const InjectedError& err, uint64_t seed,
                                 const Pauli& e_hat) const {
  RawRun with_err = execute(err, seed, e_hat);
  RawRun baseline = execute(InjectedError::none(code_.n), seed, Pauli(code_.n));

  OracleRecord rec;
  rec.sa = with_err.sa; rec.ta = with_err.ta;
  rec.sb = with_err.sb; rec.tb = with_err.tb;
  rec.s = with_err.sa ^ with_err.sb;
  rec.t = with_err.ta ^ with_err.tb;
  rec.syndrome = syndrome_raw(code_, rec.s, rec.t);
  rec.beta_raw = with_err.beta_raw;
  rec.phi_raw = with_err.phi_raw;
  rec.beta_delta = with_err.beta_raw ^ baseline.beta_raw;
  rec.phi_delta = with_err.phi_raw ^ baseline.phi_raw;
  rec.logical_failure = with_err.logical_failure;
  rec.fidelity = with_err.fidelity;
  return rec;
}

OracleRecord ProtocolOracle::run_noiseless(uint64_t seed) const {
  RawRun r = execute(InjectedError::none(code_.n), seed, Pauli(code_.n));
  OracleRecord rec;
  rec.sa = r.sa; rec.ta = r.ta; rec.sb = r.sb; rec.tb = r.tb;
  rec.s = r.sa ^ r.sb;
  rec.t = r.ta ^ r.tb;
  rec.syndrome = syndrome_raw(code_, rec.s, rec.t);
  rec.beta_raw = r.beta_raw;
  rec.phi_raw = r.phi_raw;
  rec.beta_delta = BitVec(code_.k);
  rec.phi_delta = BitVec(code_.k);
  rec.logical_failure = r.logical_failure;
  rec.fidelity = r.fidelity;
  return rec;
}

DerivationRecord run_derivation_path(const StabilizerCode& code, uint64_t seed) {
  size_t n = code.n;
  size_t q = 2 * n;
  std::vector<size_t> alice = iota_map(0, n);
  std::vector<size_t> bob = iota_map(n, n);

  std::vector<SignedPauli> gens;
  for (size_t i = 0; i < n; ++i) {
    gens.push_back(pair_op(q, alice[i], bob[i], false));
    gens.push_back(pair_op(q, alice[i], bob[i], true));
  }
  Tableau t = state_from_stabilizers(q, gens);

  RngStream rng(seed, 0xab10);
  DerivationRecord rec;
  rec.s = BitVec(n);
  rec.t = BitVec(n);
  for (size_t i = 0; i < n; ++i) {
    rec.s.set(i, rng.bit());
    rec.t.set(i, rng.bit());
  }
  // (-1)^s XX and (-1)^t ZZ frames via X^t Z^s on Alice's half
  Pauli frame(q);
  for (size_t i = 0; i < n; ++i) {
    if (rec.t.get(i)) frame.x.set(alice[i], true);
    if (rec.s.get(i)) frame.z.set(alice[i], true);
  }
  t.apply_pauli(frame);

  size_t m = code.num_checks();
  rec.a = BitVec(m);
  rec.b = BitVec(m);
  for (size_t i = 0; i < m; ++i)
    rec.a.set(i, t.measure({embed_pauli(code.stabilizer(i), alice, q), false}, rng).outcome);
  for (size_t i = 0; i < m; ++i)
    rec.b.set(i, t.measure({embed_pauli(code.stabilizer(i), bob, q), false}, rng).outcome);

  rec.parity_rhs = BitVec(m);
  BitVec r = correction_vector_r(code.h1, code.h2);
  for (size_t i = 0; i < m; ++i) {
    bool rhs = code.h1.row_dot(i, rec.s) ^ code.h2.row_dot(i, rec.t) ^ r.get(i);
    rec.parity_rhs.set(i, rhs);
  }
  rec.identity_holds = true;
  for (size_t i = 0; i < m; ++i)
    if ((rec.a.get(i) ^ rec.b.get(i)) != rec.parity_rhs.get(i)) rec.identity_holds = false;
  return rec;
}

ChainOracle::ChainOracle(const StabilizerCode& code, size_t segments)
    : code_(code), segments_(segments), base_(0) {
  if (segments < 1) throw std::invalid_argument("need at least one segment");
  size_t n = code.n, k = code.k;
  size_t next = 0;
  auto take = [&](size_t count) {
    std::vector<size_t> v = iota_map(next, count);
    next += count;
    return v;
  };

  std::vector<size_t> iface0 = take(n);
  out0_ = take(k);
  std::vector<std::vector<size_t>> left(segments + 1), right(segments + 1);
  for (size_t r = 1; r < segments; ++r) {
    left[r] = take(n);
    right[r] = take(n);
  }
  std::vector<size_t> ifacen = take(n);
  outn_ = take(k);

  meas_left_.resize(segments);
  meas_right_.resize(segments);
  in_left_.resize(segments);
  in_right_.resize(segments);
  for (size_t r = 0; r < segments; ++r) {
    meas_left_[r] = (r == 0) ? iface0 : right[r];
    meas_right_[r] = (r + 1 == segments) ? ifacen : left[r + 1];
    in_left_[r] = take(n);
    in_right_[r] = take(n);
  }
  q_ = next;
  if (q_ > 64) throw std::invalid_argument("chain oracle exceeds the 64-qubit cap");

  std::vector<SignedPauli> gens;
  // end-node distillation resources
  auto add_distill = [&](const std::vector<size_t>& iface, const std::vector<size_t>& out) {
    for (size_t i = 0; i < code_.num_checks(); ++i)
      gens.push_back({embed_pauli(code_.stabilizer(i), iface, q_), false});
    for (size_t j = 0; j < k; ++j) {
      SignedPauli gx{embed_pauli(code_.logical_x(j), iface, q_), false};
      gx.p.x.set(out[j], true);
      gens.push_back(gx);
      SignedPauli gz{embed_pauli(code_.logical_z(j), iface, q_), false};
      gz.p.z.set(out[j], true);
      gens.push_back(gz);
    }
  };
  add_distill(iface0, out0_);
  add_distill(ifacen, outn_);
  for (size_t r = 1; r < segments; ++r) {
    for (size_t i = 0; i < code_.num_checks(); ++i) {
      gens.push_back({embed_pauli(code_.stabilizer(i), left[r], q_), false});
      gens.push_back({embed_pauli(code_.stabilizer(i), right[r], q_), false});
    }
    for (size_t j = 0; j < k; ++j) {
      Pauli lx = code_.logical_x(j), lz = code_.logical_z(j);
      gens.push_back({embed_pauli(lx, left[r], q_) * embed_pauli(lx, right[r], q_), false});
      gens.push_back({embed_pauli(lz, left[r], q_) * embed_pauli(lz, right[r], q_), false});
    }
  }
  for (size_t r = 0; r < segments; ++r)
    for (size_t i = 0; i < n; ++i) {
      gens.push_back(pair_op(q_, in_left_[r][i], in_right_[r][i], false));
      gens.push_back(pair_op(q_, in_left_[r][i], in_right_[r][i], true));
    }
  base_ = state_from_stabilizers(q_, gens);
}

ChainOracle::SegmentError ChainOracle::SegmentError::none(size_t n) {
  SegmentError e;
  e.left_input = Pauli(n);
  e.right_input = Pauli(n);
  e.flip_sl = BitVec(n);
  e.flip_tl = BitVec(n);
  e.flip_sr = BitVec(n);
  e.flip_tr = BitVec(n);
  return e;
}

ChainOracle::ChainRecord ChainOracle::run(const std::vector<SegmentError>& errors,
                                          const std::vector<Pauli>& e_hats,
                                          uint64_t seed) const {
  if (errors.size() != segments_ || e_hats.size() != segments_)
    throw std::invalid_argument("need one error set and estimate per segment");
  size_t n = code_.n, k = code_.k;
  Tableau t = base_;
  for (size_t r = 0; r < segments_; ++r) {
    t.apply_pauli(embed_pauli(errors[r].left_input, in_left_[r], q_));
    t.apply_pauli(embed_pauli(errors[r].right_input, in_right_[r], q_));
  }

  RngStream rng(seed, 0xc4a1);
  ChainRecord rec;
  std::vector<std::pair<BitVec, BitVec>> frames;
  for (size_t r = 0; r < segments_; ++r) {
    BitVec sl(n), tl(n), sr(n), tr(n);
    for (size_t i = 0; i < n; ++i) {
      sl.set(i, t.measure(pair_op(q_, in_left_[r][i], meas_left_[r][i], false), rng).outcome);
      tl.set(i, t.measure(pair_op(q_, in_left_[r][i], meas_left_[r][i], true), rng).outcome);
    }
    for (size_t i = 0; i < n; ++i) {
      sr.set(i, t.measure(pair_op(q_, in_right_[r][i], meas_right_[r][i], false), rng).outcome);
      tr.set(i, t.measure(pair_op(q_, in_right_[r][i], meas_right_[r][i], true), rng).outcome);
    }
    sl ^= errors[r].flip_sl;
    tl ^= errors[r].flip_tl;
    sr ^= errors[r].flip_sr;
    tr ^= errors[r].flip_tr;
    BitVec s = sl ^ sr, tt = tl ^ tr;
    rec.seg_syndrome.push_back(syndrome_raw(code_, s, tt));
    auto [beta, phi] = flips_raw(code_, e_hats[r], s, tt);
    rec.seg_beta.push_back(beta);
    rec.seg_phi.push_back(phi);
    frames.emplace_back(beta, phi);
  }

  auto [beta, phi] = chain_aggregate(frames);
  Pauli corr(q_);
  for (size_t j = 0; j < k; ++j) {
    if (beta.get(j)) corr.x.flip(outn_[j]);
    if (phi.get(j)) corr.z.flip(outn_[j]);
  }
  t.apply_pauli(corr);

  std::vector<SignedPauli> targets;
  for (size_t j = 0; j < k; ++j) {
    targets.push_back(pair_op(q_, out0_[j], outn_[j], false));
    targets.push_back(pair_op(q_, out0_[j], outn_[j], true));
  }
  rec.logical_failure = false;
  for (const SignedPauli& g : targets) {
    int e = t.expectation(g);
    if (e == 0) throw std::logic_error("chain output left the target Pauli frame");
    if (e < 0) rec.logical_failure = true;
  }
  rec.fidelity = stabilizer_group_fidelity(t, targets);
  return rec;
}

double stabilizer_group_fidelity(const Tableau& t, std::span<const SignedPauli> gens) {
  size_t m = gens.size();
  if (m > 20) throw std::invalid_argument("group fidelity limited to 20 generators");
  double sum = 0.0;
  for (uint64_t mask = 0; mask < (uint64_t(1) << m); ++mask) {
    PhasedPauli acc{Pauli(t.num_qubits()), 0};
    for (size_t j = 0; j < m; ++j)
      if (mask & (uint64_t(1) << j)) mul_into(acc, to_phased(gens[j]));
    sum += t.expectation(to_signed(acc));
  }
  return sum / double(uint64_t(1) << m);
}

}  // namespace qrep
