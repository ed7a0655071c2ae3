#include "derham/koszul.hpp"

#include <algorithm>

namespace derham {

std::vector<IndexSubset> subsets_of_size(int n, int p) {
  std::vector<IndexSubset> out;
  if (p < 0 || p > n) return out;
  IndexSubset cur(p);
  for (int i = 0; i < p; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    if (p == 0) break;
    // advance to the next subset in lexicographic order
    int k = p - 1;
    while (k >= 0 && cur[k] == n - p + k) --k;
    if (k < 0) break;
    ++cur[k];
    for (int j = k + 1; j < p; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

int koszul_sign(const IndexSubset& J, int i) {
  int count = 0;
  for (int j : J) {
    if (j == i) throw internal_error("index already present in subset");
    if (j < i) ++count;
  }
  return count;
}

std::string subset_name(const RingContext& ctx, const IndexSubset& I) {
  std::string s = "[";
  for (std::size_t k = 0; k < I.size(); ++k) {
    if (k) s += ",";
    s += ctx.vars()[I[k]];
  }
  return s + "]";
}

// ---------------------------------------------------------------- ModuloSlice

ModuloSlice::ModuloSlice(RingPtr ctx, const Polynomial& g, long t)
    : ctx_(std::move(ctx)), t_(t), basis_(ctx_->basis(t)), ech_(basis_->dim()) {
  auto dg = weighted_degree(g);
  if (!dg.is_homogeneous()) throw input_error("quotient divisor must be homogeneous");
  auto lower = ctx_->basis(t - dg.value);
  for (const auto& m : lower->monomials()) {
    Polynomial prod = g.times_monomial(m, 1);
    ech_.insert(basis_->coords_of(prod));
  }
  col_rep_.assign(basis_->dim(), -1);
  for (int col = 0; col < basis_->dim(); ++col) {
    if (ech_.pivots().count(col)) continue;
    col_rep_[col] = static_cast<int>(reps_.size());
    rep_col_.push_back(col);
    reps_.push_back(basis_->monomial(col));
  }
}

SparseQ ModuloSlice::reduce_to_coords(const Polynomial& p) const {
  if (p.is_zero()) return {};
  auto wd = weighted_degree(p);
  if (!wd.is_homogeneous() || wd.value != t_)
    throw internal_error("polynomial outside the slice degree");
  auto [w, s] = ech_.reduce(basis_->coords_of(p));
  SparseQ out;
  out.reserve(w.size());
  for (const auto& [col, val] : w) out.push_back({col_rep_[col], Rational(val) / Rational(s)});
  return out;
}

bool ModuloSlice::is_in_ideal_slice(const Polynomial& p) const {
  return sparse_is_zero(reduce_to_coords(p));
}

Polynomial ModuloSlice::lift(const SparseQ& coords) const {
  std::vector<Polynomial::Term> terms;
  terms.reserve(coords.size());
  for (const auto& [i, c] : coords) terms.push_back({reps_[i], c});
  return Polynomial::from_terms(ctx_, std::move(terms));
}

ModuloSliceCache::ModuloSliceCache(RingPtr ctx, Polynomial g)
    : ctx_(std::move(ctx)), g_(std::move(g)) {}

std::shared_ptr<const ModuloSlice> ModuloSliceCache::at(long t) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = slices_.find(t);
  if (it != slices_.end()) return it->second;
  auto s = std::make_shared<const ModuloSlice>(ctx_, g_, t);
  slices_.emplace(t, s);
  return s;
}

// --------------------------------------------------------------------- layers

std::pair<int, int> KoszulLayer::locate(int global_index) const {
  if (global_index < 0 || global_index >= total_dim)
    throw internal_error("layer index out of range");
  // components are few; linear scan is fine
  for (std::size_t c = 0; c < components.size(); ++c) {
    const auto& comp = components[c];
    if (global_index < comp.offset + comp.dim())
      return {static_cast<int>(c), global_index - comp.offset};
  }
  throw internal_error("layer index not located");
}

namespace {

long subset_weight(const RingContext& ctx, const IndexSubset& I) {
  long w = 0;
  for (int i : I) w += ctx.weight(i);
  return w;
}

}  // namespace

KoszulLayer derham_layer(const RingPtr& ctx, long d, int p, int pole, long j) {
  KoszulLayer L;
  L.kind = KoszulLayer::Kind::derham;
  L.p = p;
  L.internal_degree = j;
  L.pole = pole;
  int offset = 0;
  for (auto& I : subsets_of_size(ctx->nvars(), p)) {
    LayerComponent comp;
    comp.degree = static_cast<long>(pole) * d + j + subset_weight(*ctx, I);
    comp.monomials = ctx->basis(comp.degree)->monomials();
    comp.subset = std::move(I);
    comp.offset = offset;
    offset += comp.dim();
    L.components.push_back(std::move(comp));
  }
  L.total_dim = offset;
  return L;
}

KoszulLayer jacobian_layer(const RingPtr& ctx, const ModuloSliceCache& cache, long d,
                           int p, long t) {
  KoszulLayer L;
  L.kind = KoszulLayer::Kind::jacobian;
  L.p = p;
  L.internal_degree = t;
  int offset = 0;
  for (auto& I : subsets_of_size(ctx->nvars(), p)) {
    LayerComponent comp;
    comp.degree = t - static_cast<long>(p) * d + subset_weight(*ctx, I);
    comp.monomials = cache.at(comp.degree)->rep_monomials();
    comp.subset = std::move(I);
    comp.offset = offset;
    offset += comp.dim();
    L.components.push_back(std::move(comp));
  }
  L.total_dim = offset;
  return L;
}

// -------------------------------------------------------------- differentials

DifferentialMatrix build_derham_differential(const RingPtr& ctx, const Polynomial& f,
                                             int p, int pole, long j) {
  auto wd = weighted_degree(f);
  if (!wd.is_homogeneous()) throw input_error("hypersurface polynomial must be homogeneous");
  long d = wd.value;
  if (p < 1 || p > ctx->nvars()) throw internal_error("differential layer index");

  DifferentialMatrix D;
  D.source = derham_layer(ctx, d, p, pole, j);
  D.target = derham_layer(ctx, d, p - 1, pole + 1, j);
  D.mat = RationalMatrix(D.target.total_dim, D.source.total_dim);

  // target component lookup by subset
  std::map<IndexSubset, int> target_index;
  for (std::size_t c = 0; c < D.target.components.size(); ++c)
    target_index.emplace(D.target.components[c].subset, static_cast<int>(c));

  std::vector<Polynomial> df;
  for (int i = 0; i < ctx->nvars(); ++i) df.push_back(partial_derivative(f, i));

  for (const auto& src : D.source.components) {
    for (int local = 0; local < src.dim(); ++local) {
      int col = src.offset + local;
      Polynomial a = Polynomial::term(ctx, src.monomials[local], 1);
      SparseQ column;
      for (std::size_t k = 0; k < src.subset.size(); ++k) {
        int i = src.subset[k];
        IndexSubset J = src.subset;
        J.erase(J.begin() + k);
        int sign_exp = koszul_sign(J, i);
        Rational sign = (sign_exp % 2 == 0) ? 1 : -1;
        Polynomial img =
            (partial_derivative(a, i) * f - a * df[i] * Rational(pole)) * sign;
        if (img.is_zero()) continue;
        // distinct i land in distinct target components, so rows never collide
        const auto& tgt = D.target.components[target_index.at(J)];
        auto tb = ctx->basis(tgt.degree);
        for (auto& [row, val] : tb->coords_of(img)) column.push_back({tgt.offset + row, val});
      }
      D.mat.set_column(col, std::move(column));
    }
  }
  return D;
}

DifferentialMatrix build_jacobian_differential(const RingPtr& ctx, const Polynomial& f,
                                               const ModuloSliceCache& cache,
                                               int p, long t) {
  auto wd = weighted_degree(f);
  if (!wd.is_homogeneous()) throw input_error("hypersurface polynomial must be homogeneous");
  long d = wd.value;
  if (p < 1 || p > ctx->nvars()) throw internal_error("differential layer index");

  DifferentialMatrix D;
  D.source = jacobian_layer(ctx, cache, d, p, t);
  D.target = jacobian_layer(ctx, cache, d, p - 1, t);
  D.mat = RationalMatrix(D.target.total_dim, D.source.total_dim);

  std::map<IndexSubset, int> target_index;
  for (std::size_t c = 0; c < D.target.components.size(); ++c)
    target_index.emplace(D.target.components[c].subset, static_cast<int>(c));

  std::vector<Polynomial> df;
  for (int i = 0; i < ctx->nvars(); ++i) df.push_back(partial_derivative(f, i));

  for (const auto& src : D.source.components) {
    for (int local = 0; local < src.dim(); ++local) {
      int col = src.offset + local;
      Polynomial a = Polynomial::term(ctx, src.monomials[local], 1);
      SparseQ column;
      for (std::size_t k = 0; k < src.subset.size(); ++k) {
        int i = src.subset[k];
        IndexSubset J = src.subset;
        J.erase(J.begin() + k);
        int sign_exp = koszul_sign(J, i);
        Rational sign = (sign_exp % 2 == 0) ? 1 : -1;
        Polynomial img = a * df[i] * sign;
        if (img.is_zero()) continue;
        // distinct i land in distinct target components, so rows never collide
        const auto& tgt = D.target.components[target_index.at(J)];
        for (auto& [row, val] : cache.at(tgt.degree)->reduce_to_coords(img))
          column.push_back({tgt.offset + row, val});
      }
      D.mat.set_column(col, std::move(column));
    }
  }
  return D;
}

}  // namespace derham
