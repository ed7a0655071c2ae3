#include "derham/derham.hpp"

#include <algorithm>
#include <utility>

namespace derham {

std::string to_string(const PoleOrder& L) {
  if (L.minus_infinity) return "-inf";
  return std::to_string(L.value);
}

namespace {

long subset_weight(const RingPtr& ctx, const IndexSubset& I) {
  long w = 0;
  for (int i : I) w += ctx->weight(i);
  return w;
}

}  // namespace

LocalizedVector::LocalizedVector(HPtr h, int p, long j, int pole,
                                 std::vector<Polynomial> numerators)
    : h_(std::move(h)), p_(p), j_(j), pole_(pole) {
  if (!h_) throw input_error("localized vector needs a hypersurface");
  int n = h_->nvars();
  if (p_ < 0 || p_ > n) throw input_error("localized vector: index out of range");
  if (pole_ < 0) throw input_error("localized vector: negative pole");
  subsets_ = subsets_of_size(n, p_);
  if (numerators.size() != subsets_.size())
    throw input_error("localized vector: expected " + std::to_string(subsets_.size()) +
                      " numerators, got " + std::to_string(numerators.size()));
  for (std::size_t k = 0; k < numerators.size(); ++k) {
    if (!h_->ring()->same_as(*numerators[k].ctx()))
      throw input_error("localized vector: numerator over a different ring");
    long want = static_cast<long>(pole_) * h_->d() + j_ + subset_weight(h_->ring(), subsets_[k]);
    auto deg = weighted_degree(numerators[k]);
    if (!deg.is_zero() && (!deg.is_homogeneous() || deg.value != want))
      throw input_error("localized vector: numerator " + std::to_string(k) +
                        " must be homogeneous of degree " + std::to_string(want));
  }
  nums_ = std::move(numerators);
}

bool LocalizedVector::is_zero() const {
  for (const auto& a : nums_)
    if (!a.is_zero()) return false;
  return true;
}

LocalizedVector LocalizedVector::raised_to_pole(int c) const {
  if (c < pole_) throw input_error("raised_to_pole: target pole below current");
  if (c == pole_) return *this;
  Polynomial fk = Polynomial::constant(h_->ring(), 1);
  for (int k = 0; k < c - pole_; ++k) fk = fk * h_->f();
  std::vector<Polynomial> nums;
  nums.reserve(nums_.size());
  for (const auto& a : nums_) nums.push_back(a * fk);
  return LocalizedVector(h_, p_, j_, c, std::move(nums));
}

LocalizedVector LocalizedVector::operator+(const LocalizedVector& o) const {
  if (h_.get() != o.h_.get() && !(h_->ring()->same_as(*o.h_->ring()) && h_->f() == o.h_->f()))
    throw input_error("adding vectors over different hypersurfaces");
  if (p_ != o.p_ || j_ != o.j_)
    throw input_error("adding vectors of different index or internal degree");
  int c = std::max(pole_, o.pole_);
  auto a = raised_to_pole(c);
  auto b = o.raised_to_pole(c);
  std::vector<Polynomial> nums;
  nums.reserve(a.nums_.size());
  for (std::size_t k = 0; k < a.nums_.size(); ++k) nums.push_back(a.nums_[k] + b.nums_[k]);
  return LocalizedVector(h_, p_, j_, c, std::move(nums));
}

LocalizedVector LocalizedVector::operator*(const Rational& c) const {
  std::vector<Polynomial> nums;
  nums.reserve(nums_.size());
  for (const auto& a : nums_) nums.push_back(a * c);
  return LocalizedVector(h_, p_, j_, pole_, std::move(nums));
}

bool LocalizedVector::same_element(const LocalizedVector& o) const {
  if (p_ != o.p_ || j_ != o.j_) return false;
  int c = std::max(pole_, o.pole_);
  auto a = raised_to_pole(c);
  auto b = o.raised_to_pole(c);
  for (std::size_t k = 0; k < a.nums_.size(); ++k)
    if (!(a.nums_[k] == b.nums_[k])) return false;
  return true;
}

SparseQ LocalizedVector::slice_coords() const {
  auto L = derham_layer(h_->ring(), h_->d(), p_, pole_, j_);
  SparseQ out;
  for (std::size_t k = 0; k < nums_.size(); ++k) {
    const auto& comp = L.components[k];
    auto local = comp.dim() == 0
                     ? SparseQ{}
                     : [&] {
                         auto basis = h_->ring()->basis(comp.degree);
                         return basis->coords_of(nums_[k]);
                       }();
    for (const auto& [i, v] : local) out.emplace_back(comp.offset + i, v);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

LocalizedVector normal_form(const LocalizedVector& v) {
  auto cur = v;
  while (cur.pole() > 0) {
    std::vector<Polynomial> divided;
    divided.reserve(cur.numerators().size());
    bool all = true;
    for (const auto& a : cur.numerators()) {
      auto q = exact_divide(a, v.hypersurface()->f());
      if (!q) {
        all = false;
        break;
      }
      divided.push_back(*q);
    }
    if (!all) break;
    cur = LocalizedVector(v.hypersurface(), v.p(), v.internal_degree(), cur.pole() - 1,
                          std::move(divided));
  }
  return cur;
}

PoleOrder L_of(const LocalizedVector& v) {
  if (v.is_zero()) return PoleOrder::neg_inf();
  return PoleOrder::of(normal_form(v).pole());
}

bool ThetaClass::is_zero() const {
  for (const auto& c : coords)
    if (c != 0) return false;
  return true;
}

ThetaClass theta(const LocalizedVector& v) {
  const auto& h = v.hypersurface();
  auto nf = normal_form(v);
  if (nf.is_zero())
    throw input_error("theta: the zero vector has no pole class");
  if (nf.pole() == 0)
    throw input_error("theta: vector is polynomial, it carries no pole class");
  int p = nf.p();
  int c = nf.pole();
  long j = nf.internal_degree();

  // cycle check at the normal-form pole
  auto D = build_derham_differential(h->ring(), h->f(), p, c, j);
  if (!sparse_is_zero(D.mat.apply(nf.slice_coords())))
    throw input_error("theta: vector is not a cycle");

  long t = static_cast<long>(c + p) * h->d() + j;
  auto slice = h->jacobian_homology(p, t);
  const auto& layer = slice->layer();

  SparseQ reduced;
  for (std::size_t k = 0; k < nf.numerators().size(); ++k) {
    const auto& comp = layer.components[k];
    auto ms = h->mod_f().at(comp.degree);
    for (const auto& [i, val] : ms->reduce_to_coords(nf.numerators()[k]))
      reduced.emplace_back(comp.offset + i, val);
  }
  std::sort(reduced.begin(), reduced.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  auto coords = slice->class_coords(reduced);
  if (!coords)
    throw internal_error("theta: reduced tuple of a cycle failed the cycle check");
  return ThetaClass{p, t, slice->dim(), std::move(*coords)};
}

LocalizedVector explicit_kernel_cycle(const HPtr& h) {
  int n = h->nvars();
  if (n < 2) throw input_error("explicit cycle needs at least two variables");
  int p = n - 1;
  long j = -h->omega();
  auto subs = subsets_of_size(n, p);
  std::vector<Polynomial> nums;
  nums.reserve(subs.size());
  for (const auto& I : subs) {
    int missing = 0;
    {
      std::vector<bool> in(n, false);
      for (int i : I) in[i] = true;
      for (int i = 0; i < n; ++i)
        if (!in[i]) missing = i;
    }
    nums.push_back(h->partials()[missing] * Rational(missing % 2 == 0 ? 1 : -1));
  }
  LocalizedVector xi(h, p, j, 1, std::move(nums));
  auto D = build_derham_differential(h->ring(), h->f(), p, 1, j);
  if (!sparse_is_zero(D.mat.apply(xi.slice_coords())))
    throw internal_error("explicit cycle: sign pattern failed the cycle condition");
  return xi;
}

namespace {

// A tracked homology class generator inside the pole-truncation tower.
struct Gen {
  LocalizedVector vec;  // current representative, at the current level
  int first_pole;       // level where the class entered the tower
};

LocalizedVector lift_from_coords(const HPtr& h, const KoszulLayer& L, int p, long j,
                                 int pole, const SparseQ& coords) {
  std::vector<Polynomial> nums(L.components.size(), Polynomial::zero(h->ring()));
  for (const auto& [g, c] : coords) {
    auto [ci, li] = L.locate(g);
    nums[ci] = nums[ci] + Polynomial::term(h->ring(), L.components[ci].monomials[li], c);
  }
  return LocalizedVector(h, p, j, pole, std::move(nums));
}

SparseQ reduce_mod(const Echelon& B, const SparseQ& v) {
  auto [w, s] = B.reduce(v);
  return sparse_scale(to_sparse_q(w), Rational(1) / Rational(s));
}

}  // namespace

DeRhamHomology derham_homology(const HPtr& h, int p, long j, std::optional<int> cap_opt) {
  int n = h->nvars();
  if (p < 1 || p > n) throw input_error("derham_homology: index must be in [1, n]");

  DeRhamHomology H;
  H.h_ = h;
  H.p = p;
  H.j = j;

  // Pole activity bound: new classes at pole c >= 1 embed into H_p(df; A) in
  // degree (c+p)d + j, and classes dying across the transition at c >= 1
  // would produce nonzero H_{p+1}(df; A) in degree (c+p+1)d + j.  Once both
  // collections of degrees leave the support of the jacobian homology, the
  // tower has to stabilize; capping two levels above that makes the last two
  // transition ranks a genuine certificate.
  if (!cap_opt) {
    if (!is_smooth(h))
      throw hypothesis_error(
          "derham_homology: automatic pole cap needs a smooth hypersurface; "
          "pass an explicit cap");
    long bound = eta_scan_bound(h);
    int nu_star = 0;
    for (int c = 1;; ++c) {
      long tp = static_cast<long>(c + p) * h->d() + j;
      long tq = tp + h->d();
      if (tp > bound && tq > bound) break;
      bool active = false;
      if (tp >= 0 && tp <= bound && h->jacobian_homology_dim(p, tp) > 0) active = true;
      if (p + 1 <= n && tq >= 0 && tq <= bound && h->jacobian_homology_dim(p + 1, tq) > 0)
        active = true;
      if (active) nu_star = c;
    }
    H.nu_star = nu_star;
    H.cap = std::max(nu_star, 1) + 2;
    H.auto_cap = true;
  } else {
    if (*cap_opt < 0) throw input_error("derham_homology: negative cap");
    H.cap = *cap_opt;
    H.auto_cap = false;
    H.nu_star = 0;
  }

  std::vector<Gen> gens;
  std::shared_ptr<Echelon> B_ech;

  for (int c = 0; c <= H.cap; ++c) {
    auto D = build_derham_differential(h->ring(), h->f(), p, c, j);
    long slice_dim = D.source.total_dim;
    long dim_Z = slice_dim - rank_of(D.mat);

    B_ech = std::make_shared<Echelon>(static_cast<int>(slice_dim));
    if (c >= 1 && p + 1 <= n) {
      auto N = build_derham_differential(h->ring(), h->f(), p + 1, c - 1, j);
      for (int col = 0; col < N.mat.cols(); ++col) B_ech->insert(N.mat.column(col));
    }
    long dim_B = B_ech->dim();
    long dim_H = dim_Z - dim_B;
    if (dim_H < 0)
      throw internal_error("derham_homology: boundaries escaped the cycle space");
    H.levels.push_back({c, slice_dim, dim_Z, dim_B, dim_H});

    auto span = std::make_shared<SpanSolver>(static_cast<int>(slice_dim));

    // carry the previous level's classes across the transition
    std::vector<Gen> carried;
    if (c >= 1) {
      for (auto& g : gens) {
        auto moved = g.vec.raised_to_pole(c);
        if (span->add(reduce_mod(*B_ech, moved.slice_coords())))
          carried.push_back({std::move(moved), g.first_pole});
      }
      H.transition_ranks.push_back(span->rank());
    }

    // harvest new classes only when the counts say some exist
    std::vector<Gen> fresh;
    if (span->rank() < dim_H) {
      auto kb = kernel_basis(D.mat);
      for (const auto& k : kb) {
        if (span->rank() >= dim_H) break;
        if (span->add(reduce_mod(*B_ech, k)))
          fresh.push_back({lift_from_coords(h, D.source, p, j, c, k), c});
      }
      if (span->rank() != dim_H)
        throw internal_error("derham_homology: kernel scan missed a class");
    }

    gens = std::move(carried);
    for (auto& g : fresh) gens.push_back(std::move(g));

    H.level_classes_.emplace_back();
    for (const auto& g : gens)
      H.level_classes_.back().push_back({g.vec, g.first_pole, {}});
  }

  H.dim = H.cap >= 1 ? H.transition_ranks.back() : H.levels.back().dim_H;
  H.stabilized = H.cap >= 2 &&
                 H.transition_ranks[H.cap - 1] == H.transition_ranks[H.cap - 2];

  // Surviving basis: classes of the cap level that crossed the last
  // transition, i.e. the carried generators (first_pole < cap).
  H.cap_boundaries_ = B_ech;
  H.cap_span_ = std::make_shared<SpanSolver>(static_cast<int>(H.levels.back().slice_dim));
  for (const auto& g : gens) {
    if (g.first_pole >= H.cap) continue;
    SparseQ red = reduce_mod(*H.cap_boundaries_, g.vec.slice_coords());
    if (!H.cap_span_->add(red))
      throw internal_error("derham_homology: surviving classes are dependent");
    auto nf = normal_form(g.vec);
    std::vector<Rational> e(static_cast<std::size_t>(H.dim), Rational(0));
    e[H.class_basis.size()] = 1;
    H.class_basis.push_back(
        {nf, g.first_pole, PoleOrder::of(g.first_pole), std::move(e)});
  }
  if (static_cast<long>(H.class_basis.size()) != H.dim)
    throw internal_error("derham_homology: surviving basis does not match the rank");

  // Express every level class in the surviving basis at the cap; classes that
  // fall outside (possible only without stabilization) keep empty coordinates.
  for (int c = 0; c <= H.cap; ++c) {
    for (auto& lc : H.level_classes_[static_cast<std::size_t>(c)]) {
      auto raised = lc.rep.raised_to_pole(H.cap);
      auto expr = H.cap_span_->express(reduce_mod(*H.cap_boundaries_, raised.slice_coords()));
      if (expr) lc.coords = std::move(*expr);
    }
  }

  // dim F_nu: rank of the level-nu classes inside the cap level.
  {
    SpanSolver filt(static_cast<int>(H.levels.back().slice_dim));
    for (int c = 0; c <= H.cap; ++c) {
      for (const auto& lc : H.level_classes_[static_cast<std::size_t>(c)]) {
        auto raised = lc.rep.raised_to_pole(H.cap);
        filt.add(reduce_mod(*H.cap_boundaries_, raised.slice_coords()));
      }
      H.filt_dims_.push_back(filt.rank());
    }
  }

  // Minimal pole of each surviving class: the first filtration stage whose
  // classes span it.
  for (auto& cls : H.class_basis) {
    SpanSolver stage(static_cast<int>(H.dim));
    for (int c = 0; c <= H.cap; ++c) {
      bool complete = true;
      for (const auto& lc : H.level_classes_[static_cast<std::size_t>(c)]) {
        if (lc.coords.empty()) {
          complete = false;
          continue;
        }
        SparseQ v;
        for (std::size_t i = 0; i < lc.coords.size(); ++i)
          if (lc.coords[i] != 0) v.emplace_back(static_cast<int>(i), lc.coords[i]);
        stage.add(v);
      }
      SparseQ target;
      for (std::size_t i = 0; i < cls.coords.size(); ++i)
        if (cls.coords[i] != 0) target.emplace_back(static_cast<int>(i), cls.coords[i]);
      if (complete && stage.express(target)) {
        cls.pole_order = PoleOrder::of(c);
        break;
      }
    }
  }

  return H;
}

std::optional<std::vector<Rational>> DeRhamHomology::class_coords(
    const LocalizedVector& v) const {
  if (v.p() != p || v.internal_degree() != j) return std::nullopt;
  if (v.pole() > cap) return std::nullopt;
  if (v.is_zero()) return std::vector<Rational>(static_cast<std::size_t>(dim), Rational(0));

  // cycle check at the vector's own pole
  auto D = build_derham_differential(h_->ring(), h_->f(), p, v.pole(), j);
  if (!sparse_is_zero(D.mat.apply(v.slice_coords()))) return std::nullopt;

  auto raised = v.raised_to_pole(cap);
  auto expr = cap_span_->express(reduce_mod(*cap_boundaries_, raised.slice_coords()));
  if (!expr) return std::nullopt;
  return expr;
}

PoleOrder class_pole_order(const DeRhamHomology& H, const std::vector<Rational>& coords) {
  if (static_cast<long>(coords.size()) != H.dim)
    throw input_error("class_pole_order: coordinate size mismatch");
  bool zero = true;
  for (const auto& c : coords)
    if (c != 0) zero = false;
  if (zero) return PoleOrder::neg_inf();

  SparseQ target;
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] != 0) target.emplace_back(static_cast<int>(i), coords[i]);

  SpanSolver stage(static_cast<int>(H.dim));
  for (int c = 0; c <= H.cap; ++c) {
    for (const auto& lc : H.level_classes()[static_cast<std::size_t>(c)]) {
      if (lc.coords.empty()) continue;
      SparseQ v;
      for (std::size_t i = 0; i < lc.coords.size(); ++i)
        if (lc.coords[i] != 0) v.emplace_back(static_cast<int>(i), lc.coords[i]);
      stage.add(v);
    }
    if (stage.express(target)) return PoleOrder::of(c);
  }
  throw internal_error("class_pole_order: class not reached within the cap");
}

FiltrationReport filtration(const HPtr& h, const DeRhamHomology& H) {
  int n = h->nvars();
  FiltrationReport rep;
  rep.p = H.p;
  rep.hypothesis_ok =
      H.p + 1 > n || jacobian_vanishes_through(h, H.p + 1, eta_scan_bound(h));

  const auto& fd = H.filtration_dims();

  // graded-piece data per pole level
  std::vector<std::vector<const DeRhamHomology::LevelClass*>> graded_basis(
      static_cast<std::size_t>(H.cap) + 1);
  {
    SpanSolver cumulative(static_cast<int>(H.dim));
    for (int nu = 0; nu <= H.cap; ++nu) {
      for (const auto& lc : H.level_classes()[static_cast<std::size_t>(nu)]) {
        if (lc.coords.empty()) continue;
        SparseQ v;
        for (std::size_t i = 0; i < lc.coords.size(); ++i)
          if (lc.coords[i] != 0) v.emplace_back(static_cast<int>(i), lc.coords[i]);
        if (cumulative.add(v)) graded_basis[static_cast<std::size_t>(nu)].push_back(&lc);
      }
    }
  }

  bool above_one_ok = true;
  for (int nu = 1; nu <= H.cap; ++nu) {
    FiltrationRow row;
    row.nu = nu;
    row.dim_F = fd[static_cast<std::size_t>(nu)];
    row.dim_graded = fd[static_cast<std::size_t>(nu)] - fd[static_cast<std::size_t>(nu - 1)];
    row.target_t = static_cast<long>(nu + H.p) * h->d() + H.j;
    row.target_dim = row.target_t >= 0 ? h->jacobian_homology_dim(H.p, row.target_t) : 0;

    // eta_nu on the graded piece: theta of each graded basis representative
    SpanSolver eta_span(static_cast<int>(std::max<long>(row.target_dim, 1)));
    long eta_rank = 0;
    for (const auto* lc : graded_basis[static_cast<std::size_t>(nu)]) {
      auto nf = normal_form(lc->rep);
      if (nf.pole() != nu)
        throw internal_error("filtration: graded representative has the wrong pole");
      auto th = theta(nf);
      SparseQ v;
      for (std::size_t i = 0; i < th.coords.size(); ++i)
        if (th.coords[i] != 0) v.emplace_back(static_cast<int>(i), th.coords[i]);
      if (eta_span.add(v)) ++eta_rank;
    }
    row.eta_rank = eta_rank;
    row.eta_kernel_dim = row.dim_graded - eta_rank;
    if (nu >= 2 && row.eta_kernel_dim != 0) above_one_ok = false;
    rep.rows.push_back(row);
  }

  rep.sum_matches_dim = !fd.empty() && fd.back() == H.dim;
  rep.eta_injective_above_one = above_one_ok;
  rep.eta1_kernel_dim = rep.rows.empty() ? 0 : rep.rows.front().eta_kernel_dim;
  rep.eta1_injective = rep.eta1_kernel_dim == 0;

  if (H.p == n - 1) {
    auto xi = explicit_kernel_cycle(h);
    bool spanned = false;
    if (H.j == -h->omega()) {
      auto coords = H.class_coords(xi);
      if (coords) {
        if (rep.eta1_kernel_dim == 0) {
          // a trivial kernel is "spanned" only if the explicit class brings
          // nothing new beyond pole 0
          auto po = class_pole_order(H, *coords);
          spanned = po <= PoleOrder::of(0);
        } else if (rep.eta1_kernel_dim == 1) {
          auto po = class_pole_order(H, *coords);
          spanned = theta(xi).is_zero() && po == PoleOrder::of(1);
        }
      }
    }
    rep.kernel_spanned_by_explicit_cycle = spanned;
  }

  return rep;
}

}  // namespace derham
