#include "derham/milnor.hpp"

#include <algorithm>

namespace derham {

// --------------------------------------------------------- HypersurfaceContext

HypersurfaceContext::HypersurfaceContext(RingPtr ctx, Polynomial f, long d)
    : ctx_(std::move(ctx)), f_(std::move(f)), d_(d), mod_f_(ctx_, f_) {
  for (int i = 0; i < ctx_->nvars(); ++i) partials_.push_back(partial_derivative(f_, i));
}

std::shared_ptr<HypersurfaceContext> HypersurfaceContext::make(RingPtr ctx, Polynomial f) {
  auto wd = weighted_degree(f);
  if (!wd.is_homogeneous())
    throw input_error("hypersurface polynomial must be nonzero and weighted-homogeneous");
  if (wd.value < 1) throw input_error("hypersurface polynomial must have positive degree");
  if (!euler_check(f)) throw internal_error("euler identity failed on homogeneous input");
  return std::shared_ptr<HypersurfaceContext>(
      new HypersurfaceContext(std::move(ctx), std::move(f), wd.value));
}

std::shared_ptr<const Echelon> HypersurfaceContext::jacobian_ideal_slice(long t) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = ideal_slices_.find(t);
  if (it != ideal_slices_.end()) return it->second;

  auto basis = ctx_->basis(t);
  auto ech = std::make_shared<Echelon>(basis->dim());
  for (int i = 0; i < ctx_->nvars(); ++i) {
    if (partials_[i].is_zero()) continue;
    long gdeg = d_ - ctx_->weight(i);
    auto lower = ctx_->basis(t - gdeg);
    for (const auto& m : lower->monomials())
      ech->insert(basis->coords_of(partials_[i].times_monomial(m, 1)));
  }
  ideal_slices_.emplace(t, ech);
  return ech;
}

long HypersurfaceContext::milnor_dim(long t) const {
  if (t < 0) return 0;
  return slice_dim(ctx_, t) - jacobian_ideal_slice(t)->dim();
}

std::shared_ptr<const JacobianHomologySlice> HypersurfaceContext::jacobian_homology(
    int p, long t) const {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = homology_slices_.find({p, t});
    if (it != homology_slices_.end()) return it->second;
  }
  // build outside the lock; the slice constructor calls back into the caches
  auto slice = std::make_shared<const JacobianHomologySlice>(
      std::const_pointer_cast<HypersurfaceContext>(shared_from_this()), p, t);
  std::lock_guard<std::mutex> lk(mu_);
  auto [it, inserted] = homology_slices_.emplace(std::make_pair(p, t), slice);
  return it->second;
}

long HypersurfaceContext::jacobian_homology_dim(int p, long t) const {
  if (p < 1 || p > nvars()) return 0;
  auto psi_rank = [this](int q, long tt) -> long {
    if (q > nvars()) return 0;
    {
      std::lock_guard<std::mutex> lk(mu_);
      auto it = psi_ranks_.find({q, tt});
      if (it != psi_ranks_.end()) return it->second;
    }
    auto D = build_jacobian_differential(ctx_, f_, mod_f_, q, tt);
    long r = rank_of(D.mat);
    std::lock_guard<std::mutex> lk(mu_);
    psi_ranks_.emplace(std::make_pair(q, tt), r);
    return r;
  };
  long layer_dim = jacobian_layer(ctx_, mod_f_, d_, p, t).total_dim;
  if (layer_dim == 0) return 0;
  return layer_dim - psi_rank(p, t) - psi_rank(p + 1, t);
}

// ---------------------------------------------------------------- milnor data

MilnorProfile milnor_profile(const HPtr& h, std::optional<long> scan_bound) {
  MilnorProfile prof;
  long socle = static_cast<long>(h->nvars()) * h->d() - 2 * h->omega();
  prof.scan_bound = scan_bound.value_or(std::max(socle, 0L) + h->ring()->max_weight());
  prof.hilbert.resize(prof.scan_bound + 1, 0);
  for (long t = 0; t <= prof.scan_bound; ++t) {
    prof.hilbert[t] = h->milnor_dim(t);
    if (prof.hilbert[t] > 0) prof.top_degree = t;
  }
  // vanishing on a window as long as the largest weight, just past the socle
  // degree, forces vanishing in all higher degrees (every monomial of a higher
  // degree has a variable factor landing its complement inside the window), so
  // it certifies a terminated Hilbert function.
  prof.is_artinian = true;
  long win_lo = std::max(socle + 1, 0L);
  long win_hi = std::max(socle, 0L) + h->ring()->max_weight();
  for (long t = win_lo; t <= win_hi; ++t) {
    if (h->milnor_dim(t) != 0) {
      prof.is_artinian = false;
      break;
    }
  }
  return prof;
}

bool is_smooth(const HPtr& h) { return milnor_profile(h).is_artinian; }

long eta_scan_bound(const HPtr& h) {
  return static_cast<long>(h->nvars() + 1) * h->d() - 2 * h->omega() +
         h->ring()->max_weight();
}

// ------------------------------------------------------- JacobianHomologySlice

JacobianHomologySlice::JacobianHomologySlice(const HPtr& h, int p, long t)
    : p_(p),
      t_(t),
      source_layer_(jacobian_layer(h->ring(), h->mod_f(), h->d(), p, t)),
      boundary_ech_(source_layer_.total_dim),
      class_span_(source_layer_.total_dim) {
  if (p < 1 || p > h->nvars()) throw internal_error("homology index out of range");
  cycle_check_ = build_jacobian_differential(h->ring(), h->f(), h->mod_f(), p, t).mat;

  if (p + 1 <= h->nvars()) {
    auto D = build_jacobian_differential(h->ring(), h->f(), h->mod_f(), p + 1, t);
    for (int c = 0; c < D.mat.cols(); ++c) boundary_ech_.insert(D.mat.column(c));
  }

  int gen = 0;
  for (const auto& k : kernel_basis(cycle_check_)) {
    auto [w, s] = boundary_ech_.reduce(k);
    SparseQ reduced;
    reduced.reserve(w.size());
    for (const auto& [i, v] : w) reduced.push_back({i, Rational(v) / Rational(s)});
    if (class_span_.add(reduced)) basis_gens_.push_back(gen);
    ++gen;
  }
  dim_ = class_span_.rank();
}

bool JacobianHomologySlice::is_cycle(const SparseQ& v) const {
  return sparse_is_zero(cycle_check_.apply(v));
}

bool JacobianHomologySlice::is_boundary(const SparseQ& v) const {
  return boundary_ech_.contains(v);
}

std::optional<std::vector<Rational>> JacobianHomologySlice::class_coords(
    const SparseQ& v) const {
  if (!is_cycle(v)) return std::nullopt;
  auto [w, s] = boundary_ech_.reduce(v);
  SparseQ reduced;
  reduced.reserve(w.size());
  for (const auto& [i, val] : w) reduced.push_back({i, Rational(val) / Rational(s)});
  auto expr = class_span_.express(reduced);
  if (!expr) throw internal_error("cycle outside the class span");
  std::vector<Rational> out;
  out.reserve(basis_gens_.size());
  for (int g : basis_gens_) out.push_back((*expr)[g]);
  return out;
}

// ------------------------------------------------------------------ eta scans

EtaScan eta_target_degrees(const HPtr& h, int p, std::optional<long> user_bound) {
  EtaScan scan;
  if (user_bound) {
    scan.scan_bound = *user_bound;
  } else {
    if (!is_smooth(h))
      throw hypothesis_error(
          "eta scan needs a smooth hypersurface or an explicit degree bound");
    scan.scan_bound = eta_scan_bound(h);
  }
  for (int nu = 1;; ++nu) {
    long t = static_cast<long>(nu + p) * h->d() - h->omega();
    if (t > scan.scan_bound) break;
    EtaTarget target;
    target.nu = nu;
    target.t = t;
    target.dim = h->jacobian_homology_dim(p, t);
    if (target.dim > 0) scan.nu_star = nu;
    scan.targets.push_back(target);
  }
  return scan;
}

bool jacobian_vanishes_through(const HPtr& h, int p, long tmax) {
  for (long t = 0; t <= tmax; ++t)
    if (h->jacobian_homology_dim(p, t) != 0) return false;
  return true;
}

}  // namespace derham
