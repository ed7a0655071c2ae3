#include "derham/linalg.hpp"

#include <algorithm>

namespace derham {

// ------------------------------------------------------------ sparse vectors

SparseQ to_sparse_q(const SparseZ& v) {
  SparseQ out;
  out.reserve(v.size());
  for (const auto& [i, c] : v) out.push_back({i, Rational(c)});
  return out;
}

bool sparse_is_zero(const SparseQ& v) { return v.empty(); }

SparseQ sparse_add(const SparseQ& a, const SparseQ& b) {
  SparseQ out;
  out.reserve(a.size() + b.size());
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == a.end() || ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      Rational c = ia->second + ib->second;
      if (c != 0) out.push_back({ia->first, c});
      ++ia;
      ++ib;
    }
  }
  return out;
}

SparseQ sparse_scale(const SparseQ& a, const Rational& c) {
  SparseQ out;
  if (c == 0) return out;
  out.reserve(a.size());
  for (const auto& [i, v] : a) out.push_back({i, v * c});
  return out;
}

// ------------------------------------------------------------ RationalMatrix

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), cols_data_(cols) {}

void RationalMatrix::add(int r, int c, const Rational& v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw internal_error("matrix index");
  if (v == 0) return;
  auto& col = cols_data_[c];
  auto it = std::lower_bound(col.begin(), col.end(), r,
                             [](const auto& p, int key) { return p.first < key; });
  if (it != col.end() && it->first == r) {
    it->second += v;
    if (it->second == 0) col.erase(it);
  } else {
    col.insert(it, {r, v});
  }
}

void RationalMatrix::set_column(int c, SparseQ col) {
  std::sort(col.begin(), col.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  col.erase(std::remove_if(col.begin(), col.end(),
                           [](const auto& p) { return p.second == 0; }),
            col.end());
  for (const auto& [r, v] : col)
    if (r < 0 || r >= rows_) throw internal_error("matrix row index");
  cols_data_[c] = std::move(col);
}

Rational RationalMatrix::entry(int r, int c) const {
  const auto& col = cols_data_[c];
  auto it = std::lower_bound(col.begin(), col.end(), r,
                             [](const auto& p, int key) { return p.first < key; });
  if (it != col.end() && it->first == r) return it->second;
  return Rational(0);
}

long long RationalMatrix::nnz() const {
  long long n = 0;
  for (const auto& col : cols_data_) n += static_cast<long long>(col.size());
  return n;
}

std::vector<SparseQ> RationalMatrix::to_rows() const {
  std::vector<SparseQ> rows(rows_);
  for (int c = 0; c < cols_; ++c)
    for (const auto& [r, v] : cols_data_[c]) rows[r].push_back({c, v});
  return rows;
}

SparseQ RationalMatrix::apply(const SparseQ& x) const {
  std::map<int, Rational> acc;
  for (const auto& [j, xc] : x) {
    if (j < 0 || j >= cols_) throw internal_error("apply index");
    for (const auto& [r, v] : cols_data_[j]) acc[r] += v * xc;
  }
  SparseQ out;
  for (auto& [r, v] : acc)
    if (v != 0) out.push_back({r, v});
  return out;
}

RationalMatrix RationalMatrix::from_dense(const std::vector<std::vector<Rational>>& d) {
  int rows = static_cast<int>(d.size());
  int cols = rows == 0 ? 0 : static_cast<int>(d[0].size());
  RationalMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (d[r][c] != 0) m.add(r, c, d[r][c]);
  return m;
}

// -------------------------------------------------------------------- helpers

namespace {

// Divide out the content and make the leading entry positive.
void make_primitive(SparseZ& v) {
  if (v.empty()) return;
  Int g = 0;
  for (const auto& [i, c] : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  bool flip = v.front().second < 0;
  if (g == 1 && !flip) return;
  if (flip) g = -g;
  for (auto& [i, c] : v) c /= g;
}

// a*x - b*y into a fresh vector, dropping exact zeros.
SparseZ cross(const SparseZ& x, const Int& a, const SparseZ& y, const Int& b) {
  SparseZ out;
  out.reserve(x.size() + y.size());
  auto ix = x.begin(), iy = y.begin();
  while (ix != x.end() || iy != y.end()) {
    if (iy == y.end() || (ix != x.end() && ix->first < iy->first)) {
      out.push_back({ix->first, a * ix->second});
      ++ix;
    } else if (ix == x.end() || iy->first < ix->first) {
      out.push_back({iy->first, -b * iy->second});
      ++iy;
    } else {
      Int c = a * ix->second - b * iy->second;
      if (c != 0) out.push_back({ix->first, std::move(c)});
      ++ix;
      ++iy;
    }
  }
  return out;
}

SparseZ clear_denominators(const SparseQ& v, Int* multiplier = nullptr) {
  Int lcm = 1;
  for (const auto& [i, c] : v)
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
  SparseZ out;
  out.reserve(v.size());
  for (const auto& [i, c] : v) {
    Int z = c.get_num() * (lcm / c.get_den());
    if (z != 0) out.push_back({i, std::move(z)});
  }
  if (multiplier) *multiplier = lcm;
  return out;
}

}  // namespace

// -------------------------------------------------------------------- Echelon

Echelon::Echelon(int ambient) : ambient_(ambient) {
  if (ambient < 0) throw internal_error("negative ambient dimension");
}

bool Echelon::insert(const SparseQ& v) { return insert(clear_denominators(v)); }

bool Echelon::insert(SparseZ v) {
  while (!v.empty()) {
    int p = v.front().first;
    if (p < 0 || p >= ambient_) throw internal_error("echelon index out of range");
    auto it = pivots_.find(p);
    if (it == pivots_.end()) {
      make_primitive(v);
      rows_.push_back(std::move(v));
      pivots_.emplace(p, static_cast<int>(rows_.size()) - 1);
      return true;
    }
    const SparseZ& r = rows_[it->second];
    v = cross(v, r.front().second, r, v.front().second);
    make_primitive(v);
  }
  return false;
}

std::pair<SparseZ, Int> Echelon::reduce(const SparseQ& v) const {
  Int mult;
  SparseZ z = clear_denominators(v, &mult);
  auto [w, s] = reduce(std::move(z));
  return {std::move(w), s * mult};
}

std::pair<SparseZ, Int> Echelon::reduce(SparseZ v) const {
  Int scale = 1;
  // Clearing the pivot at position `at` rewrites v, but entries left of `at`
  // keep their (non-pivot) columns and new support appears only to the right,
  // so one left-to-right sweep reaches a fixed point.
  std::size_t at = 0;
  while (at < v.size()) {
    auto it = pivots_.find(v[at].first);
    if (it == pivots_.end()) {
      ++at;
      continue;
    }
    const SparseZ& r = rows_[it->second];
    Int a = r.front().second;  // positive on primitive rows
    Int b = v[at].second;
    v = cross(v, a, r, b);
    scale *= a;
    // normalize: divide v and scale by their common gcd
    Int g = scale;
    for (const auto& [i, c] : v) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) break;
    }
    if (g > 1) {
      for (auto& [i, c] : v) c /= g;
      scale /= g;
    }
  }
  return {std::move(v), std::move(scale)};
}

bool Echelon::contains(const SparseQ& v) const {
  SparseZ z = clear_denominators(v);
  // forward elimination without storing: cheaper than full reduce
  while (!z.empty()) {
    auto it = pivots_.find(z.front().first);
    if (it == pivots_.end()) return false;
    const SparseZ& r = rows_[it->second];
    z = cross(z, r.front().second, r, z.front().second);
    // light normalization to stop growth on long chains
    make_primitive(z);
  }
  return true;
}

// ----------------------------------------------------------- rank and kernel

long rank_of(const RationalMatrix& m) {
  // rank is transpose-invariant; insert the smaller family of vectors
  if (m.cols() <= m.rows()) {
    Echelon e(m.rows());
    for (int c = 0; c < m.cols(); ++c) e.insert(m.column(c));
    return e.dim();
  }
  Echelon e(m.cols());
  for (const auto& row : m.to_rows()) e.insert(row);
  return e.dim();
}

std::vector<SparseQ> kernel_basis(const RationalMatrix& m) {
  Echelon e(m.cols());
  for (const auto& row : m.to_rows()) e.insert(row);

  std::vector<SparseQ> out;
  const auto& pivots = e.pivots();

  // rows by descending pivot column for back-substitution
  std::vector<const SparseZ*> desc;
  desc.reserve(pivots.size());
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it)
    desc.push_back(&e.rows()[it->second]);

  for (int fc = 0; fc < m.cols(); ++fc) {
    if (pivots.count(fc)) continue;
    // x has 1 at the free column fc, 0 at other free columns; pivot entries
    // are forced bottom-up because each row only sees columns >= its pivot.
    std::map<int, Rational> x;
    x[fc] = 1;
    for (const SparseZ* rp : desc) {
      const SparseZ& r = *rp;
      int p = r.front().first;
      if (p > fc) continue;  // row only involves columns > fc beyond its pivot
      Rational s = 0;
      for (std::size_t k = 1; k < r.size(); ++k) {
        auto it = x.find(r[k].first);
        if (it != x.end()) s += Rational(r[k].second) * it->second;
      }
      if (s != 0) x[p] = -s / Rational(r.front().second);
    }
    SparseQ v;
    v.reserve(x.size());
    for (auto& [i, c] : x)
      if (c != 0) v.push_back({i, c});
    out.push_back(std::move(v));
  }
  return out;
}

// ------------------------------------------------------------------- Subspace

Subspace::Subspace(int ambient) : ambient_(ambient) {
  if (ambient < 0) throw internal_error("negative ambient dimension");
}

SparseQ Subspace::reduce(const SparseQ& v) const {
  SparseQ w = v;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    int p = pivot_cols_[i];
    auto it = std::lower_bound(w.begin(), w.end(), p,
                               [](const auto& a, int key) { return a.first < key; });
    if (it == w.end() || it->first != p) continue;
    w = sparse_add(w, sparse_scale(rows_[i], -it->second));
  }
  return w;
}

bool Subspace::contains(const SparseQ& v) const { return sparse_is_zero(reduce(v)); }

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw internal_error("ambient mismatch");
  return std::all_of(other.rows_.begin(), other.rows_.end(),
                     [this](const SparseQ& r) { return contains(r); });
}

bool Subspace::operator==(const Subspace& other) const {
  return ambient_ == other.ambient_ && rows_ == other.rows_;
}

Subspace Subspace::span(int ambient, const std::vector<SparseQ>& gens) {
  Subspace s(ambient);
  for (const auto& g : gens) {
    SparseQ w = s.reduce(g);
    if (sparse_is_zero(w)) continue;
    int p = w.front().first;
    if (p < 0 || p >= ambient) throw internal_error("subspace index out of range");
    w = sparse_scale(w, Rational(1) / w.front().second);
    // clear the new pivot from the existing rows
    for (auto& row : s.rows_) {
      auto it = std::lower_bound(row.begin(), row.end(), p,
                                 [](const auto& a, int key) { return a.first < key; });
      if (it != row.end() && it->first == p) row = sparse_add(row, sparse_scale(w, -it->second));
    }
    // insert keeping pivot columns ascending
    auto pos = std::lower_bound(s.pivot_cols_.begin(), s.pivot_cols_.end(), p);
    auto idx = pos - s.pivot_cols_.begin();
    s.pivot_cols_.insert(pos, p);
    s.rows_.insert(s.rows_.begin() + idx, std::move(w));
  }
  return s;
}

Subspace Subspace::image(const RationalMatrix& m) {
  std::vector<SparseQ> cols;
  cols.reserve(m.cols());
  for (int c = 0; c < m.cols(); ++c) cols.push_back(m.column(c));
  return span(m.rows(), cols);
}

Subspace Subspace::kernel(const RationalMatrix& m) {
  return span(m.cols(), kernel_basis(m));
}

// ------------------------------------------------------ quotient coordinates

std::optional<std::vector<Rational>> quotient_coordinates(const SparseQ& v,
                                                          const Subspace& Z,
                                                          const Subspace& B) {
  if (Z.ambient() != B.ambient()) throw internal_error("ambient mismatch");
  SpanSolver complement(Z.ambient());
  std::vector<int> kept;
  for (int i = 0; i < Z.dim(); ++i) {
    SparseQ r = B.reduce(Z.basis_rows()[i]);
    if (complement.add(r)) kept.push_back(i);
  }
  if (static_cast<int>(kept.size()) != Z.dim() - B.dim()) return std::nullopt;  // B not inside Z
  SparseQ w = B.reduce(v);
  auto expr = complement.express(w);
  if (!expr) return std::nullopt;
  // expr is indexed over all Z rows in order; compress to the kept ones (the
  // rest have coefficient zero by the solver contract)
  std::vector<Rational> out;
  out.reserve(kept.size());
  for (int i : kept) out.push_back((*expr)[i]);
  return out;
}

// ----------------------------------------------------------------- SpanSolver

SpanSolver::SpanSolver(int ambient) : ambient_(ambient) {
  if (ambient < 0) throw internal_error("negative ambient dimension");
}

bool SpanSolver::add(const SparseQ& g) {
  int gen = ngens_++;
  SparseQ w = g;
  std::vector<Rational> tail(static_cast<std::size_t>(gen) + 1, 0);
  tail[gen] = 1;
  while (!w.empty()) {
    auto it = pivots_.find(w.front().first);
    if (it == pivots_.end()) {
      Rational lead = w.front().second;
      w = sparse_scale(w, Rational(1) / lead);
      for (auto& t : tail) t /= lead;
      pivots_.emplace(w.front().first, static_cast<int>(rows_.size()));
      rows_.push_back({std::move(w), std::move(tail)});
      return true;
    }
    const Row& r = rows_[it->second];
    Rational c = w.front().second;  // r.w has unit leading entry
    w = sparse_add(w, sparse_scale(r.w, -c));
    for (std::size_t k = 0; k < r.tail.size(); ++k) tail[k] -= c * r.tail[k];
  }
  return false;
}

std::optional<std::vector<Rational>> SpanSolver::express(const SparseQ& v) const {
  SparseQ w = v;
  std::vector<Rational> out(ngens_, 0);
  while (!w.empty()) {
    auto it = pivots_.find(w.front().first);
    if (it == pivots_.end()) return std::nullopt;
    const Row& r = rows_[it->second];
    Rational c = w.front().second;
    w = sparse_add(w, sparse_scale(r.w, -c));
    for (std::size_t k = 0; k < r.tail.size(); ++k) out[k] += c * r.tail[k];
  }
  return out;
}

}  // namespace derham
