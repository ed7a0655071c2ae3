#include "derham/ring.hpp"

#include <algorithm>
#include <map>

namespace derham {

// ---------------------------------------------------------------- RingContext

RingContext::RingContext(std::vector<std::string> vars, std::vector<int> weights)
    : vars_(std::move(vars)), weights_(std::move(weights)) {
  if (vars_.empty()) throw input_error("ring needs at least one variable");
  if (vars_.size() != weights_.size())
    throw input_error("variable and weight lists differ in length");
  omega_ = 0;
  max_weight_ = 0;
  for (int w : weights_) {
    if (w < 1) throw input_error("weights must be positive integers");
    omega_ += w;
    max_weight_ = std::max(max_weight_, w);
  }
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].empty()) throw input_error("empty variable name");
    for (std::size_t j = i + 1; j < vars_.size(); ++j)
      if (vars_[i] == vars_[j]) throw input_error("duplicate variable name: " + vars_[i]);
  }
}

std::optional<int> RingContext::var_index(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

bool RingContext::same_as(const RingContext& other) const {
  return this == &other || (vars_ == other.vars_ && weights_ == other.weights_);
}

std::shared_ptr<const GradedBasis> RingContext::basis(long t) const {
  std::lock_guard<std::mutex> lk(cache_mu_);
  auto it = basis_cache_.find(t);
  if (it != basis_cache_.end()) return it->second;
  auto b = std::make_shared<const GradedBasis>(shared_from_this(), t);
  basis_cache_.emplace(t, b);
  return b;
}

RingPtr make_ring(std::vector<std::string> vars, std::vector<int> weights) {
  return std::make_shared<const RingContext>(std::move(vars), std::move(weights));
}

// ------------------------------------------------------------------- Monomial

bool Monomial::is_one() const {
  return std::all_of(exps.begin(), exps.end(), [](int e) { return e == 0; });
}

long Monomial::weighted_degree(const RingContext& ctx) const {
  long t = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) t += static_cast<long>(exps[i]) * ctx.weight(i);
  return t;
}

bool Monomial::divides(const Monomial& m) const {
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] > m.exps[i]) return false;
  return true;
}

Monomial Monomial::times(const Monomial& m) const {
  Monomial r = *this;
  for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] += m.exps[i];
  return r;
}

Monomial Monomial::divided_by(const Monomial& m) const {
  Monomial r = *this;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    r.exps[i] -= m.exps[i];
    if (r.exps[i] < 0) throw internal_error("monomial division underflow");
  }
  return r;
}

std::size_t MonomialHash::operator()(const Monomial& m) const {
  std::size_t h = 1469598103934665603ull;
  for (int e : m.exps) {
    h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

bool monomial_before(const RingContext& ctx, const Monomial& a, const Monomial& b) {
  long da = a.weighted_degree(ctx), db = b.weighted_degree(ctx);
  if (da != db) return da > db;
  return a.exps > b.exps;
}

// ----------------------------------------------------------------- Polynomial

namespace {

struct TermCmp {
  const RingContext* ctx;
  bool operator()(const Monomial& a, const Monomial& b) const {
    return monomial_before(*ctx, a, b);
  }
};

}  // namespace

Polynomial::Polynomial(RingPtr ctx) : ctx_(std::move(ctx)) {
  if (!ctx_) throw internal_error("polynomial without ring context");
}

Polynomial Polynomial::zero(RingPtr ctx) { return Polynomial(std::move(ctx)); }

namespace {
// mpq_class does not canonicalize on construction from (num, den); every
// stored coefficient must be canonical for comparisons to be sound.
Rational canonical(const Rational& c) {
  Rational r = c;
  r.canonicalize();
  return r;
}
}  // namespace

Polynomial Polynomial::constant(RingPtr ctx, const Rational& c) {
  Polynomial p(ctx);
  Rational cc = canonical(c);
  if (cc != 0) p.terms_.push_back({Monomial{std::vector<int>(ctx->nvars(), 0)}, cc});
  return p;
}

Polynomial Polynomial::variable(RingPtr ctx, int i) {
  if (i < 0 || i >= ctx->nvars()) throw internal_error("variable index out of range");
  Monomial m{std::vector<int>(ctx->nvars(), 0)};
  m.exps[i] = 1;
  return term(std::move(ctx), std::move(m), 1);
}

Polynomial Polynomial::term(RingPtr ctx, Monomial m, const Rational& c) {
  Polynomial p(std::move(ctx));
  if (static_cast<int>(m.exps.size()) != p.ctx_->nvars())
    throw internal_error("monomial arity mismatch");
  Rational cc = canonical(c);
  if (cc != 0) p.terms_.push_back({std::move(m), cc});
  return p;
}

Polynomial Polynomial::from_terms(RingPtr ctx, std::vector<Term> terms) {
  Polynomial p(std::move(ctx));
  std::map<Monomial, Rational, TermCmp> acc(TermCmp{p.ctx_.get()});
  for (auto& [m, c] : terms) {
    if (static_cast<int>(m.exps.size()) != p.ctx_->nvars())
      throw internal_error("monomial arity mismatch");
    acc[m] += canonical(c);
  }
  for (auto& [m, c] : acc)
    if (c != 0) p.terms_.push_back({m, c});
  return p;
}

const Polynomial::Term& Polynomial::leading_term() const {
  if (terms_.empty()) throw internal_error("leading term of zero");
  return terms_.front();
}

Rational Polynomial::coeff(const Monomial& m) const {
  for (const auto& [mm, c] : terms_)
    if (mm == m) return c;
  return Rational(0);
}

Polynomial Polynomial::operator-() const {
  Polynomial r(ctx_);
  r.terms_ = terms_;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (!ctx_->same_as(*o.ctx_)) throw input_error("mixed ring contexts");
  Polynomial r(ctx_);
  TermCmp cmp{ctx_.get()};
  auto ia = terms_.begin(), ib = o.terms_.begin();
  while (ia != terms_.end() || ib != o.terms_.end()) {
    if (ib == o.terms_.end() || (ia != terms_.end() && cmp(ia->first, ib->first))) {
      r.terms_.push_back(*ia++);
    } else if (ia == terms_.end() || cmp(ib->first, ia->first)) {
      r.terms_.push_back(*ib++);
    } else {
      Rational c = ia->second + ib->second;
      if (c != 0) r.terms_.push_back({ia->first, c});
      ++ia;
      ++ib;
    }
  }
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (!ctx_->same_as(*o.ctx_)) throw input_error("mixed ring contexts");
  std::map<Monomial, Rational, TermCmp> acc(TermCmp{ctx_.get()});
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) acc[ma.times(mb)] += ca * cb;
  Polynomial r(ctx_);
  for (auto& [m, c] : acc)
    if (c != 0) r.terms_.push_back({m, c});
  return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial r(ctx_);
  Rational cn = canonical(c);
  if (cn == 0) return r;
  r.terms_ = terms_;
  for (auto& [m, cc] : r.terms_) cc *= cn;
  return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
  return ctx_->same_as(*o.ctx_) && terms_ == o.terms_;
}

Polynomial Polynomial::times_monomial(const Monomial& m, const Rational& c) const {
  Polynomial r(ctx_);
  Rational cn = canonical(c);
  if (cn == 0) return r;
  r.terms_.reserve(terms_.size());
  for (const auto& [mm, cc] : terms_) r.terms_.push_back({mm.times(m), cc * cn});
  return r;
}

WeightedDegree weighted_degree(const Polynomial& p) {
  if (p.is_zero()) return WeightedDegree{WeightedDegree::Kind::zero, 0};
  const auto& ctx = *p.ctx();
  long deg = p.terms().front().first.weighted_degree(ctx);
  for (const auto& [m, c] : p.terms())
    if (m.weighted_degree(ctx) != deg) return WeightedDegree{WeightedDegree::Kind::mixed, 0};
  return WeightedDegree{WeightedDegree::Kind::homogeneous, deg};
}

Polynomial partial_derivative(const Polynomial& p, int i) {
  if (i < 0 || i >= p.ctx()->nvars()) throw internal_error("derivative index out of range");
  std::vector<Polynomial::Term> terms;
  for (const auto& [m, c] : p.terms()) {
    if (m.exps[i] == 0) continue;
    Monomial mm = m;
    mm.exps[i] -= 1;
    terms.push_back({std::move(mm), c * m.exps[i]});
  }
  return Polynomial::from_terms(p.ctx(), std::move(terms));
}

bool euler_check(const Polynomial& p) {
  auto wd = weighted_degree(p);
  if (!wd.is_homogeneous()) return false;
  const auto& ctx = p.ctx();
  Polynomial acc = Polynomial::zero(ctx);
  for (int i = 0; i < ctx->nvars(); ++i) {
    acc = acc + Polynomial::variable(ctx, i) * partial_derivative(p, i) *
                    Rational(ctx->weight(i));
  }
  return acc == p * Rational(wd.value);
}

std::optional<Polynomial> exact_divide(const Polynomial& p, const Polynomial& f) {
  if (f.is_zero()) throw input_error("division by the zero polynomial");
  if (!p.ctx()->same_as(*f.ctx())) throw input_error("mixed ring contexts");
  // Single-divisor division: the canonical remainder is zero exactly when f
  // divides p, and the term order is multiplicative, so cancelling leading
  // terms either succeeds all the way down or certifies non-divisibility.
  Polynomial r = p;
  std::vector<Polynomial::Term> qterms;
  const auto& [fm, fc] = f.leading_term();
  while (!r.is_zero()) {
    const auto& [rm, rc] = r.leading_term();
    if (!fm.divides(rm)) return std::nullopt;
    Monomial m = rm.divided_by(fm);
    Rational c = rc / fc;
    r = r - f.times_monomial(m, c);
    qterms.push_back({std::move(m), std::move(c)});
  }
  return Polynomial::from_terms(p.ctx(), std::move(qterms));
}

// ---------------------------------------------------------------- GradedBasis

namespace {

void enumerate_descending(const RingContext& ctx, int i, long rem, std::vector<int>& cur,
                          std::vector<Monomial>& out) {
  int n = ctx.nvars();
  if (i == n - 1) {
    if (rem % ctx.weight(i) == 0) {
      cur[i] = static_cast<int>(rem / ctx.weight(i));
      out.push_back(Monomial{cur});
      cur[i] = 0;
    }
    return;
  }
  // Largest exponent first gives the canonical (lex-descending) order.
  for (long e = rem / ctx.weight(i); e >= 0; --e) {
    cur[i] = static_cast<int>(e);
    enumerate_descending(ctx, i + 1, rem - e * ctx.weight(i), cur, out);
  }
  cur[i] = 0;
}

}  // namespace

GradedBasis::GradedBasis(RingPtr ctx, long degree) : ctx_(std::move(ctx)), degree_(degree) {
  if (degree >= 0) {
    std::vector<int> cur(ctx_->nvars(), 0);
    enumerate_descending(*ctx_, 0, degree, cur, monomials_);
  }
  index_.reserve(monomials_.size());
  for (std::size_t i = 0; i < monomials_.size(); ++i)
    index_.emplace(monomials_[i], static_cast<int>(i));
}

std::optional<int> GradedBasis::index_of(const Monomial& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<int, Rational>> GradedBasis::coords_of(const Polynomial& p) const {
  std::vector<std::pair<int, Rational>> out;
  out.reserve(p.term_count());
  for (const auto& [m, c] : p.terms()) {
    auto idx = index_of(m);
    if (!idx) throw internal_error("polynomial outside graded slice");
    out.push_back({*idx, c});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

Polynomial GradedBasis::from_coords(const std::vector<std::pair<int, Rational>>& v) const {
  std::vector<Polynomial::Term> terms;
  terms.reserve(v.size());
  for (const auto& [i, c] : v) terms.push_back({monomials_[i], c});
  return Polynomial::from_terms(ctx_, std::move(terms));
}

}  // namespace derham
