#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "derham/koszul.hpp"

namespace derham {

class JacobianHomologySlice;

// A weighted-homogeneous hypersurface f together with the shared caches used
// by every computation over it.  Construction validates the Euler identity.
class HypersurfaceContext : public std::enable_shared_from_this<HypersurfaceContext> {
 public:
  static std::shared_ptr<HypersurfaceContext> make(RingPtr ctx, Polynomial f);

  const RingPtr& ring() const { return ctx_; }
  const Polynomial& f() const { return f_; }
  long d() const { return d_; }  // weighted degree of f
  int nvars() const { return ctx_->nvars(); }
  long omega() const { return ctx_->omega(); }
  const std::vector<Polynomial>& partials() const { return partials_; }

  const ModuloSliceCache& mod_f() const { return mod_f_; }

  // Echelon of the degree-t slice of the jacobian ideal (d_1 f, .., d_n f).
  std::shared_ptr<const Echelon> jacobian_ideal_slice(long t) const;
  long milnor_dim(long t) const;  // dim of (R / jacobian ideal)_t

  std::shared_ptr<const JacobianHomologySlice> jacobian_homology(int p, long t) const;

  // dim H_p(df; A)_t by rank counting alone, without building class data:
  // dim ker psi_p - rank psi_{p+1}.  Much cheaper than jacobian_homology.
  long jacobian_homology_dim(int p, long t) const;

 private:
  HypersurfaceContext(RingPtr ctx, Polynomial f, long d);

  RingPtr ctx_;
  Polynomial f_;
  long d_;
  std::vector<Polynomial> partials_;
  ModuloSliceCache mod_f_;
  mutable std::mutex mu_;
  mutable std::map<long, std::shared_ptr<const Echelon>> ideal_slices_;
  mutable std::map<std::pair<int, long>, std::shared_ptr<const JacobianHomologySlice>>
      homology_slices_;
  mutable std::map<std::pair<int, long>, long> psi_ranks_;  // rank of psi_p at t
};

using HPtr = std::shared_ptr<HypersurfaceContext>;

// Hilbert data of the Milnor algebra R/(d_1 f..d_n f) on [0, scan_bound].
// Artinian is decided by vanishing on the window (n*d - 2*omega,
// n*d - 2*omega + max weight]; for a weighted-homogeneous isolated singularity
// the socle sits in degree n*d - 2*omega, so vanishing there certifies that
// the Hilbert function has terminated rather than paused.
struct MilnorProfile {
  long scan_bound = 0;
  std::vector<long> hilbert;  // index t -> dim, 0 <= t <= scan_bound
  bool is_artinian = false;
  long top_degree = -1;  // largest t with nonzero dim; -1 if none seen
};

MilnorProfile milnor_profile(const HPtr& h, std::optional<long> scan_bound = {});

// Smoothness of Proj(R/f) in the isolated-singularity sense: the Milnor
// algebra is Artinian.  Cached.
bool is_smooth(const HPtr& h);

// Upper end of every jacobian-homology degree scan: (n+1)*d - 2*omega + max
// weight covers the top degree of H_1(df; R/f) for smooth f, with the extra
// weight as the Artinian window margin.
long eta_scan_bound(const HPtr& h);

// Degree-t slice of H_p(df; A), A = R/(f): kernel of psi_p modulo image of
// psi_{p+1}, with class generators and a coordinate map for theta values.
class JacobianHomologySlice {
 public:
  JacobianHomologySlice(const HPtr& h, int p, long t);

  int p() const { return p_; }
  long t() const { return t_; }
  long dim() const { return dim_; }
  const KoszulLayer& layer() const { return source_layer_; }

  bool is_cycle(const SparseQ& v) const;
  bool is_boundary(const SparseQ& v) const;
  // Coordinates of the class of a cycle in the chosen basis of the slice;
  // nullopt if v is not a cycle.
  std::optional<std::vector<Rational>> class_coords(const SparseQ& v) const;

 private:
  int p_;
  long t_;
  long dim_ = 0;
  KoszulLayer source_layer_;
  RationalMatrix cycle_check_;   // psi_p slice matrix
  Echelon boundary_ech_;         // echelon of the psi_{p+1} image
  SpanSolver class_span_;        // reduced class generators
  std::vector<int> basis_gens_;  // generators that enlarged the class span
};

struct EtaTarget {
  int nu;
  long t;    // (nu + p) * d - omega
  long dim;  // dim H_p(df; A)_t
};

struct EtaScan {
  std::vector<EtaTarget> targets;
  int nu_star = 0;  // largest nu with nonzero target, 0 if none
  long scan_bound = 0;
};

// Target dimensions for the pole filtration maps at homological index p.
// Requires smoothness or an explicit degree bound.
EtaScan eta_target_degrees(const HPtr& h, int p, std::optional<long> user_bound = {});

// True iff H_p(df; A)_t = 0 for all 0 <= t <= tmax.
bool jacobian_vanishes_through(const HPtr& h, int p, long tmax);

}  // namespace derham
