#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "derham/rational.hpp"

namespace derham {

// Sparse vectors: (index, value) pairs sorted by index, no zero values.
using SparseQ = std::vector<std::pair<int, Rational>>;
using SparseZ = std::vector<std::pair<int, Int>>;

SparseQ to_sparse_q(const SparseZ& v);
bool sparse_is_zero(const SparseQ& v);
SparseQ sparse_add(const SparseQ& a, const SparseQ& b);
SparseQ sparse_scale(const SparseQ& a, const Rational& c);

// Sparse exact rational matrix, column-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  void add(int r, int c, const Rational& v);  // accumulates
  void set_column(int c, SparseQ col);
  const SparseQ& column(int c) const { return cols_data_[c]; }
  Rational entry(int r, int c) const;
  long long nnz() const;

  std::vector<SparseQ> to_rows() const;
  SparseQ apply(const SparseQ& x) const;  // matrix * vector

  static RationalMatrix from_dense(const std::vector<std::vector<Rational>>& d);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<SparseQ> cols_data_;
};

// Forward-eliminated integer echelon of a subspace of Q^ambient.
//
// Rows are primitive integer vectors (content 1, positive leading entry) whose
// leading column is their pivot; pivots are pairwise distinct and each row has
// support inside [pivot, ambient).  Insertion reduces the incoming vector
// against existing pivots in column order ("first nonzero in canonical
// order"), making the result of a fixed insertion sequence deterministic.
// Fractions never appear: row updates are cross-multiplied and re-normalized,
// which is what keeps entry growth under control on large slices.
class Echelon {
 public:
  explicit Echelon(int ambient);

  int ambient() const { return ambient_; }
  int dim() const { return static_cast<int>(rows_.size()); }

  bool insert(const SparseQ& v);  // true iff a new pivot appeared
  bool insert(SparseZ v);

  // Canonical full reduction of v modulo the row span, scaled to integers:
  // the reduced vector equals (returned vector) / scale with scale > 0.
  // The result has no support on pivot columns.
  std::pair<SparseZ, Int> reduce(const SparseQ& v) const;
  std::pair<SparseZ, Int> reduce(SparseZ v) const;
  bool contains(const SparseQ& v) const;

  const std::vector<SparseZ>& rows() const { return rows_; }
  // pivot column -> row index, ordered by pivot column
  const std::map<int, int>& pivots() const { return pivots_; }

 private:
  int ambient_;
  std::vector<SparseZ> rows_;
  std::map<int, int> pivots_;
};

long rank_of(const RationalMatrix& m);

// Canonical kernel basis: one vector per free column (ascending), with value 1
// at its free column and support otherwise inside the pivot columns.
std::vector<SparseQ> kernel_basis(const RationalMatrix& m);

// Canonical subspace: reduced row echelon basis with unit pivots.  Equal
// subspaces have identical representations.
class Subspace {
 public:
  explicit Subspace(int ambient);
  static Subspace span(int ambient, const std::vector<SparseQ>& gens);
  static Subspace image(const RationalMatrix& m);   // column space
  static Subspace kernel(const RationalMatrix& m);  // null space

  int ambient() const { return ambient_; }
  int dim() const { return static_cast<int>(rows_.size()); }
  const std::vector<SparseQ>& basis_rows() const { return rows_; }
  const std::vector<int>& pivot_columns() const { return pivot_cols_; }

  SparseQ reduce(const SparseQ& v) const;
  bool contains(const SparseQ& v) const;
  bool contains(const Subspace& other) const;
  bool operator==(const Subspace& other) const;

 private:
  int ambient_;
  std::vector<SparseQ> rows_;      // RREF, unit pivots, pivots cleared above
  std::vector<int> pivot_cols_;
};

// Coordinates of v in the deterministic complement of B inside Z: reduce the
// RREF basis of Z modulo B, keep the vectors that extend B to a basis of Z,
// and express v - (its B-part) in those.  v must lie in Z and B in Z.
std::optional<std::vector<Rational>> quotient_coordinates(const SparseQ& v,
                                                          const Subspace& Z,
                                                          const Subspace& B);

// Expresses vectors as linear combinations of an ordered generating family.
// add() returns true when the new generator enlarged the span.
class SpanSolver {
 public:
  explicit SpanSolver(int ambient);
  bool add(const SparseQ& g);
  int rank() const { return static_cast<int>(rows_.size()); }
  // Coefficients over the generators passed to add(), or nullopt if v is
  // outside the span.  Generators that did not enlarge the span get 0.
  std::optional<std::vector<Rational>> express(const SparseQ& v) const;

 private:
  struct Row {
    SparseQ w;                   // echelon part, unit leading entry
    std::vector<Rational> tail;  // w as a combination of the added generators
  };
  int ambient_;
  int ngens_ = 0;
  std::map<int, int> pivots_;  // leading column of w -> row index
  std::vector<Row> rows_;
};

}  // namespace derham
