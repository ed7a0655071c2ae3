// Test-side oracles, kept deliberately independent of the library internals:
// plain enumeration, power-series bookkeeping, and a dense textbook Gauss.
#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "derham/rational.hpp"

namespace oracle {

// Coefficients of prod_i 1/(1 - s^{w_i}) up to degree tmax: the Hilbert
// series of a weighted polynomial ring.
inline std::vector<long long> series_dims(const std::vector<int>& weights, int tmax) {
  std::vector<long long> a(tmax + 1, 0);
  a[0] = 1;
  for (int w : weights)
    for (int t = w; t <= tmax; ++t) a[t] += a[t - w];
  return a;
}

// Coefficients of prod_i (1 - s^{d - w_i}) / prod_i (1 - s^{w_i}): the
// Hilbert series of a weighted complete intersection of n forms of degree
// d - w_i, e.g. the jacobian ideal of a smooth weighted form of degree d.
inline std::vector<long long> ci_hilbert(const std::vector<int>& weights, int d, int tmax) {
  std::vector<long long> a = series_dims(weights, tmax);
  for (int w : weights) {
    int g = d - w;
    std::vector<long long> b(a);
    if (g <= 0) {
      // a factor (1 - s^g) with g <= 0 never occurs for the smooth fixtures
      for (auto& x : b) x = 0;
      if (g == 0)
        for (auto& x : b) x = 0;
    } else {
      for (int t = tmax; t >= 0; --t) b[t] = a[t] - (t >= g ? a[t - g] : 0);
    }
    a.swap(b);
  }
  return a;
}

// Exponent vectors with sum e_i * w_i = t, by direct recursion.
inline void enumerate_rec(const std::vector<int>& w, std::size_t i, int rem,
                          std::vector<int>& cur, std::set<std::vector<int>>& out) {
  if (i + 1 == w.size()) {
    if (rem % w[i] == 0) {
      cur[i] = rem / w[i];
      out.insert(cur);
    }
    return;
  }
  for (int e = 0; e * w[i] <= rem; ++e) {
    cur[i] = e;
    enumerate_rec(w, i + 1, rem - e * w[i], cur, out);
  }
}

inline std::set<std::vector<int>> monomials_of_degree(const std::vector<int>& weights, int t) {
  std::set<std::vector<int>> out;
  if (t < 0) return out;
  std::vector<int> cur(weights.size(), 0);
  enumerate_rec(weights, 0, t, cur, out);
  return out;
}

// Dense exact Gauss over the rationals; row echelon with first-nonzero
// pivoting.  Small inputs only.
struct DenseQ {
  int rows = 0, cols = 0;
  std::vector<std::vector<derham::Rational>> a;

  DenseQ(int r, int c) : rows(r), cols(c), a(r, std::vector<derham::Rational>(c, 0)) {}

  long rank() const {
    auto m = a;
    long rk = 0;
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
      int piv = -1;
      for (int r = row; r < rows; ++r)
        if (m[r][col] != 0) { piv = r; break; }
      if (piv < 0) continue;
      std::swap(m[row], m[piv]);
      for (int r = row + 1; r < rows; ++r) {
        if (m[r][col] == 0) continue;
        derham::Rational factor = m[r][col] / m[row][col];
        for (int c = col; c < cols; ++c) m[r][c] -= factor * m[row][c];
      }
      ++row;
      ++rk;
    }
    return rk;
  }

  long nullity() const { return cols - rank(); }
};

}  // namespace oracle
