#pragma once

#include <numeric>
#include <vector>

#include "qrep/gf2.hpp"

namespace qrep {

// Visits every Pauli of exact support weight w on n qubits in deterministic
// order: support combinations ascending, then per-site types X < Z < Y.
// Stops early (returning true) when f returns true.
template <typename F>
bool for_each_pauli_of_weight(size_t n, size_t w, F&& f) {
  if (w > n) return false;
  std::vector<size_t> idx(w);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<int> type(w, 0);  // 0=X, 1=Z, 2=Y
    while (true) {
      gf2::Pauli p(n);
      for (size_t j = 0; j < w; ++j) {
        if (type[j] != 1) p.x.set(idx[j], true);
        if (type[j] != 0) p.z.set(idx[j], true);
      }
      if (f(p)) return true;
      size_t j = 0;
      while (j < w && type[j] == 2) { type[j] = 0; ++j; }
      if (j == w) break;
      ++type[j];
    }
    if (w == 0) return false;
    size_t j = w;
    while (j > 0) {
      --j;
      if (idx[j] != j + n - w) break;
    }
    if (idx[j] == j + n - w) return false;
    ++idx[j];
    for (size_t l = j + 1; l < w; ++l) idx[l] = idx[l - 1] + 1;
  }
}

// Weights 0..wmax in ascending order.
template <typename F>
bool for_each_pauli_up_to_weight(size_t n, size_t wmax, F&& f) {
  for (size_t w = 0; w <= wmax && w <= n; ++w)
    if (for_each_pauli_of_weight(n, w, f)) return true;
  return false;
}

}  // namespace qrep
