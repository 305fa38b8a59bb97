#include "qrep/protocol.hpp"

#include <bit>
#include <stdexcept>
#include <tuple>

namespace qrep {

namespace {

uint64_t and_parity(std::span<const uint64_t> a, std::span<const uint64_t> b) {
  uint64_t acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc ^= a[i] & b[i];
  return std::popcount(acc) & 1;
}

// M1.u + M2.v over GF(2), rowwise.
BitVec affine_map(const BitMatrix& m1, const BitMatrix& m2, const BitVec& u, const BitVec& v) {
  if (u.size() != m1.cols() || v.size() != m2.cols())
    throw std::invalid_argument("vector length mismatch");
  BitVec out(m1.rows());
  for (size_t i = 0; i < m1.rows(); ++i)
    out.set(i, m1.row_dot(i, u) ^ m2.row_dot(i, v));
  return out;
}

// sp(rows of (a|b), e) = a.e_z + b.e_x per row
BitVec rowwise_sp(const BitMatrix& a, const BitMatrix& b, const Pauli& e) {
  BitVec out(a.rows());
  for (size_t i = 0; i < a.rows(); ++i)
    out.set(i, a.row_dot(i, e.z) ^ b.row_dot(i, e.x));
  return out;
}

}  // namespace

BitVec correction_vector_r(const BitMatrix& a, const BitMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix shape mismatch");
  BitVec r(a.rows());
  for (size_t i = 0; i < a.rows(); ++i)
    r.set(i, and_parity(a.row_words(i), b.row_words(i)));
  return r;
}

BitVec syndrome_delta(const StabilizerCode& code, const BitVec& ds, const BitVec& dt) {
  return affine_map(code.h1, code.h2, ds, dt);
}

BitVec syndrome_raw(const StabilizerCode& code, const BitVec& s, const BitVec& t) {
  return affine_map(code.h1, code.h2, s, t) ^ correction_vector_r(code.h1, code.h2);
}

std::pair<BitVec, BitVec> flips_delta(const StabilizerCode& code, const Pauli& e_hat,
                                      const BitVec& ds, const BitVec& dt) {
  BitVec beta = rowwise_sp(code.lz1, code.lz2, e_hat) ^ affine_map(code.lz1, code.lz2, ds, dt);
  BitVec phi = rowwise_sp(code.lx1, code.lx2, e_hat) ^ affine_map(code.lx1, code.lx2, ds, dt);
  return {beta, phi};
}

std::pair<BitVec, BitVec> flips_raw(const StabilizerCode& code, const Pauli& e_hat,
                                    const BitVec& s, const BitVec& t) {
  auto [beta, phi] = flips_delta(code, e_hat, s, t);
  beta ^= correction_vector_r(code.lz1, code.lz2);
  phi ^= correction_vector_r(code.lx1, code.lx2);
  return {beta, phi};
}

std::pair<BitVec, BitVec> residual_flips(const StabilizerCode& code, const Pauli& residual) {
  return {rowwise_sp(code.lz1, code.lz2, residual),
          rowwise_sp(code.lx1, code.lx2, residual)};
}

TrialResult distill_one_way(const StabilizerCode& code, const ErrorFrame& frame,
                            Decoder& decoder) {
  TrialResult out;
  out.syndrome = syndrome_delta(code, frame.ds, frame.dt);
  DecodeResult dec = decoder.decode(out.syndrome);
  out.estimate = dec.estimate;
  out.decoder_failed = !dec.converged;
  std::tie(out.beta, out.phi) = flips_delta(code, out.estimate, frame.ds, frame.dt);

  Pauli residual = frame.true_pauli(code.n) * out.estimate;
  auto [rb, rp] = residual_flips(code, residual);
  rb ^= frame.out_x;
  rp ^= frame.out_z;
  out.accepted = true;
  out.logical_failure = rb.any() || rp.any() || out.decoder_failed;
  return out;
}

TrialResult distill_two_way(const StabilizerCode& code, const ErrorFrame& frame) {
  TrialResult out;
  out.syndrome = syndrome_delta(code, frame.ds, frame.dt);
  out.estimate = Pauli(code.n);
  out.accepted = !out.syndrome.any();
  std::tie(out.beta, out.phi) = flips_delta(code, out.estimate, frame.ds, frame.dt);
  if (out.accepted) {
    auto [rb, rp] = residual_flips(code, frame.true_pauli(code.n));
    rb ^= frame.out_x;
    rp ^= frame.out_z;
    out.logical_failure = rb.any() || rp.any();
  }
  return out;
}

SegmentOutcome repeater_segment(const StabilizerCode& code, const ErrorFrame& frame,
                                Decoder& decoder) {
  SegmentOutcome out;
  out.syndrome = syndrome_delta(code, frame.ds, frame.dt);
  DecodeResult dec = decoder.decode(out.syndrome);
  out.estimate = dec.estimate;
  out.decoder_failed = !dec.converged;
  std::tie(out.beta, out.phi) = flips_delta(code, out.estimate, frame.ds, frame.dt);
  Pauli residual = frame.true_pauli(code.n) * out.estimate;
  std::tie(out.res_beta, out.res_phi) = residual_flips(code, residual);
  out.failed = out.res_beta.any() || out.res_phi.any() || out.decoder_failed;
  return out;
}

std::pair<BitVec, BitVec> chain_aggregate(
    const std::vector<std::pair<BitVec, BitVec>>& frames) {
  if (frames.empty()) throw std::invalid_argument("empty frame list");
  BitVec beta = frames[0].first, phi = frames[0].second;
  for (size_t i = 1; i < frames.size(); ++i) {
    beta ^= frames[i].first;
    phi ^= frames[i].second;
  }
  return {beta, phi};
}

ChainTrial run_chain(const StabilizerCode& code, size_t segments, const NoiseModel& model,
                     Decoder& decoder, RngStream& rng, const ChainOptions& opts) {
  if (segments < 1) throw std::invalid_argument("need at least one segment");
  ChainTrial out;
  out.res_beta = BitVec(code.k);
  out.res_phi = BitVec(code.k);
  for (size_t r = 0; r < segments; ++r) {
    ErrorFrame frame = sample_error(model, code, FrameRole::segment, rng);
    SegmentOutcome seg = repeater_segment(code, frame, decoder);
    out.res_beta ^= seg.res_beta;
    out.res_phi ^= seg.res_phi;
    if (seg.decoder_failed) ++out.decoder_failures;
  }
  if (opts.include_end_nodes) {
    for (int end = 0; end < 2; ++end) {
      OutputErrors e = sample_outputs(model, code.k, rng);
      out.res_beta ^= e.x;
      out.res_phi ^= e.z;
    }
  }
  out.failure = out.res_beta.any() || out.res_phi.any() || out.decoder_failures > 0;
  return out;
}

}  // namespace qrep
