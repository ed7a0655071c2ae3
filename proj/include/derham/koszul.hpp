#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "derham/linalg.hpp"
#include "derham/ring.hpp"

namespace derham {

// Strictly increasing 0-based variable indices.
using IndexSubset = std::vector<int>;

// All p-subsets of {0..n-1} in lexicographic order.
std::vector<IndexSubset> subsets_of_size(int n, int p);

// Number of elements of J below i; the sign attached to inserting i into J is
// (-1)^koszul_sign.  Precondition: i not in J.
int koszul_sign(const IndexSubset& J, int i);

std::string subset_name(const RingContext& ctx, const IndexSubset& I);

// Coordinates on R_t modulo g * R_{t - deg g}: a deterministic echelon
// complement.  Representative monomials are the non-pivot elements of the
// canonical monomial basis of R_t.
class ModuloSlice {
 public:
  ModuloSlice(RingPtr ctx, const Polynomial& g, long t);

  long degree() const { return t_; }
  int dim() const { return static_cast<int>(reps_.size()); }
  const std::vector<Monomial>& rep_monomials() const { return reps_; }

  // Coordinates of [p] in the representative basis; p homogeneous of degree t
  // (or zero).
  SparseQ reduce_to_coords(const Polynomial& p) const;
  bool is_in_ideal_slice(const Polynomial& p) const;
  Polynomial lift(const SparseQ& coords) const;

 private:
  RingPtr ctx_;
  long t_;
  std::shared_ptr<const GradedBasis> basis_;
  Echelon ech_;                 // echelon of the g-multiples slice
  std::vector<Monomial> reps_;  // non-pivot monomials, canonical order
  std::vector<int> rep_col_;    // rep index -> column in basis_
  std::vector<int> col_rep_;    // column -> rep index or -1
};

// Shared per-hypersurface cache of mod-f coordinate slices.
class ModuloSliceCache {
 public:
  ModuloSliceCache(RingPtr ctx, Polynomial g);
  std::shared_ptr<const ModuloSlice> at(long t) const;

 private:
  RingPtr ctx_;
  Polynomial g_;
  mutable std::mutex mu_;
  mutable std::map<long, std::shared_ptr<const ModuloSlice>> slices_;
};

// One graded layer of a Koszul-type complex: one free summand per index
// subset, each with an explicit monomial coordinate basis for its coefficient
// space.  For differential layers (d/dx_i acting on R_f) the coefficient space
// of the summand at I in the pole-c slice of internal degree j is
// R_{c*d + j + sum of weights over I}; for multiplication layers (df/dx_i
// acting on R/(f)) it is the mod-f complement in degree t - p*d + sum(I).
struct LayerComponent {
  IndexSubset subset;
  long degree;                     // degree of the coefficient space
  std::vector<Monomial> monomials; // coordinate basis, canonical order
  int offset;                      // first global column index
  int dim() const { return static_cast<int>(monomials.size()); }
};

struct KoszulLayer {
  enum class Kind { derham, jacobian };
  Kind kind;
  int p;
  long internal_degree;
  int pole = -1;  // derham layers only
  std::vector<LayerComponent> components;
  int total_dim = 0;

  std::pair<int, int> locate(int global_index) const;  // (component, local)
};

// Pole-c slice of the differential layer K_p in internal degree j.
KoszulLayer derham_layer(const RingPtr& ctx, long d, int p, int pole, long j);

// Degree-t slice of the multiplication layer K'_p over R/(f).
KoszulLayer jacobian_layer(const RingPtr& ctx, const ModuloSliceCache& cache, long d,
                           int p, long t);

struct DifferentialMatrix {
  KoszulLayer source;
  KoszulLayer target;
  RationalMatrix mat;
};

// phi_p on the pole-c slice of internal degree j: component J of the image of
// (a_I) is sum over i not in J of (-1)^sigma (d_i(a) * f - c * a * d_i f),
// landing in the pole-(c+1) slice.  Signs follow koszul_sign.
DifferentialMatrix build_derham_differential(const RingPtr& ctx, const Polynomial& f,
                                             int p, int pole, long j);

// psi_p on the degree-t slice over A = R/(f): component J of the image of
// (a_I) is sum over i not in J of (-1)^sigma a_{J+i} * d_i f, reduced mod f.
DifferentialMatrix build_jacobian_differential(const RingPtr& ctx, const Polynomial& f,
                                               const ModuloSliceCache& cache,
                                               int p, long t);

}  // namespace derham
