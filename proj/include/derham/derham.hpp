#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "derham/milnor.hpp"

namespace derham {

// Pole order with a bottom element for the zero vector.
struct PoleOrder {
  bool minus_infinity = true;
  int value = 0;

  static PoleOrder neg_inf() { return PoleOrder{}; }
  static PoleOrder of(int v) { return PoleOrder{false, v}; }
  bool operator==(const PoleOrder& o) const {
    return minus_infinity == o.minus_infinity && (minus_infinity || value == o.value);
  }
  bool operator<(const PoleOrder& o) const {
    if (minus_infinity) return !o.minus_infinity;
    return !o.minus_infinity && value < o.value;
  }
  bool operator<=(const PoleOrder& o) const { return *this < o || *this == o; }
};

std::string to_string(const PoleOrder& L);

// Element of the pole-c slice of (K_p)_j over R_f: one numerator per index
// subset, all over the common denominator f^pole.  Numerator at I is
// homogeneous of weighted degree pole*d + j + sum of weights over I (or zero).
class LocalizedVector {
 public:
  LocalizedVector(HPtr h, int p, long j, int pole, std::vector<Polynomial> numerators);

  const HPtr& hypersurface() const { return h_; }
  int p() const { return p_; }
  long internal_degree() const { return j_; }
  int pole() const { return pole_; }
  const std::vector<Polynomial>& numerators() const { return nums_; }
  const std::vector<IndexSubset>& subsets() const { return subsets_; }

  bool is_zero() const;
  LocalizedVector raised_to_pole(int c) const;  // multiply numerators by f^(c - pole)
  LocalizedVector operator+(const LocalizedVector& o) const;
  LocalizedVector operator*(const Rational& c) const;
  bool same_element(const LocalizedVector& o) const;

  SparseQ slice_coords() const;  // coordinates in the pole-slice layer

 private:
  HPtr h_;
  int p_;
  long j_;
  int pole_;
  std::vector<IndexSubset> subsets_;
  std::vector<Polynomial> nums_;
};

// Divides the common f out of the numerators until some numerator is prime to
// f or the pole reaches 0.  Unique; idempotent.
LocalizedVector normal_form(const LocalizedVector& v);

// Pole order of the underlying element of K_p: minus infinity for 0, 0 for
// nonzero vectors of polynomials, otherwise the normal-form pole.
PoleOrder L_of(const LocalizedVector& v);

// Class of the normal-form numerator tuple in H_p(df; A)_t with t = (c+p)*d + j
// where c is the normal-form pole; for the theorem degree j = -omega this is
// (c+p)*d - omega.  Validates that v is a cycle for the differential layer and
// that the reduced tuple is a cycle for the multiplication layer.
struct ThetaClass {
  int p;
  long t;
  long target_dim;
  std::vector<Rational> coords;
  bool is_zero() const;
};

ThetaClass theta(const LocalizedVector& v);

// The alternating tuple of first partials over f in K_{n-1}, a pole-1 cycle;
// the sign pattern is chosen (and verified) so the cycle condition holds.
LocalizedVector explicit_kernel_cycle(const HPtr& h);

struct HomologyLevel {
  int pole;
  long slice_dim;
  long dim_Z;  // cycles in the pole slice
  long dim_B;  // boundaries with preimage pole < this level
  long dim_H;  // dim_Z - dim_B
};

// H_p(d; R_f)_j computed through pole truncations.  dim is the rank of the
// last transition map; the computation is stabilized when the last two
// transition ranks agree (and, under an automatic cap, the cap clears the
// filtration bound by two).
class DeRhamHomology {
 public:
  int p = 0;
  long j = 0;
  int cap = 0;
  bool auto_cap = false;
  int nu_star = 0;
  std::vector<HomologyLevel> levels;    // pole 0 .. cap
  std::vector<long> transition_ranks;   // H^(c) -> H^(c+1), c = 0 .. cap-1
  bool stabilized = false;
  long dim = 0;

  struct ClassInfo {
    LocalizedVector rep;             // cycle at its first pole level
    int first_pole;                  // level where the class entered
    PoleOrder pole_order;            // min over representatives, within cap
    std::vector<Rational> coords;    // in the surviving-class basis
  };
  std::vector<ClassInfo> class_basis;  // basis of the stabilized homology

  // Coordinates of the class of an arbitrary cycle (any pole <= cap) in the
  // surviving-class basis; nullopt if the vector is not a cycle or its class
  // falls outside the surviving span (possible only without stabilization).
  std::optional<std::vector<Rational>> class_coords(const LocalizedVector& v) const;

  // dim F_nu for nu = 0..cap, F_nu = classes with a pole <= nu representative.
  const std::vector<long>& filtration_dims() const { return filt_dims_; }

  // Basis classes of H^(nu) mapped into the surviving basis coordinates,
  // together with their minimal-pole representatives; drives the filtration.
  struct LevelClass {
    LocalizedVector rep;
    int first_pole;
    std::vector<Rational> coords;  // at the cap, surviving-class basis
  };
  const std::vector<std::vector<LevelClass>>& level_classes() const {
    return level_classes_;
  }

 private:
  friend DeRhamHomology derham_homology(const HPtr&, int, long, std::optional<int>);
  HPtr h_;
  std::shared_ptr<const Echelon> cap_boundaries_;  // B at the cap
  std::shared_ptr<SpanSolver> cap_span_;           // surviving classes, reduced
  std::vector<long> filt_dims_;
  std::vector<std::vector<LevelClass>> level_classes_;
};

// cap: explicit pole cap, or automatic max(nu*, 1) + 2 when the hypothesis
// H_{p+1}(df; A) = 0 holds in the scan range (throws hypothesis_error
// otherwise).
DeRhamHomology derham_homology(const HPtr& h, int p, long j,
                               std::optional<int> cap = {});

PoleOrder class_pole_order(const DeRhamHomology& H, const std::vector<Rational>& coords);

struct FiltrationRow {
  int nu;
  long dim_F;
  long dim_graded;      // dim F_nu / F_{nu-1}
  long target_t;        // (nu + p) * d - omega
  long target_dim;      // dim H_p(df; A)_{target_t}
  long eta_rank;        // rank of eta_nu on the graded piece
  long eta_kernel_dim;  // dim_graded - eta_rank
};

struct FiltrationReport {
  int p = 0;
  bool hypothesis_ok = false;  // H_{p+1}(df; A) = 0 through the scan bound
  std::vector<FiltrationRow> rows;
  bool sum_matches_dim = false;
  bool eta_injective_above_one = false;  // all nu >= 2
  bool eta1_injective = false;           // meaningful when p != n-1
  long eta1_kernel_dim = 0;
  bool kernel_spanned_by_explicit_cycle = false;  // meaningful when p = n-1
};

FiltrationReport filtration(const HPtr& h, const DeRhamHomology& H);

}  // namespace derham
