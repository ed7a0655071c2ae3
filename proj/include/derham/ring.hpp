#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "derham/rational.hpp"

namespace derham {

class GradedBasis;

// Weighted polynomial ring K[x_1..x_n] over the rationals, deg x_i = w_i >= 1.
// Immutable; shared between all values built over it.  Holds a cache of
// graded monomial bases keyed by degree.
class RingContext : public std::enable_shared_from_this<RingContext> {
 public:
  RingContext(std::vector<std::string> vars, std::vector<int> weights);

  int nvars() const { return static_cast<int>(vars_.size()); }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<int>& weights() const { return weights_; }
  int weight(int i) const { return weights_[i]; }
  long omega() const { return omega_; }  // sum of the weights
  int max_weight() const { return max_weight_; }
  std::optional<int> var_index(const std::string& name) const;

  bool same_as(const RingContext& other) const;

  // Monomial basis of the degree-t slice, cached.  Empty basis for t < 0.
  std::shared_ptr<const GradedBasis> basis(long t) const;

 private:
  std::vector<std::string> vars_;
  std::vector<int> weights_;
  long omega_;
  int max_weight_;
  mutable std::mutex cache_mu_;
  mutable std::unordered_map<long, std::shared_ptr<const GradedBasis>> basis_cache_;
};

using RingPtr = std::shared_ptr<const RingContext>;

RingPtr make_ring(std::vector<std::string> vars, std::vector<int> weights);

// Exponent vector.  Context-free; the ring supplies weights and names.
struct Monomial {
  std::vector<int> exps;

  bool operator==(const Monomial& o) const { return exps == o.exps; }
  bool is_one() const;
  long weighted_degree(const RingContext& ctx) const;
  bool divides(const Monomial& m) const;
  Monomial times(const Monomial& m) const;
  Monomial divided_by(const Monomial& m) const;  // precondition: m divides *this
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const;
};

// Canonical term order: higher weighted degree first, ties broken by
// lexicographically larger exponent vector first.  Total and multiplicative.
bool monomial_before(const RingContext& ctx, const Monomial& a, const Monomial& b);

struct WeightedDegree {
  enum class Kind { zero, homogeneous, mixed };
  Kind kind = Kind::zero;
  long value = 0;  // meaningful only when kind == homogeneous

  bool is_homogeneous() const { return kind == Kind::homogeneous; }
  bool is_zero() const { return kind == Kind::zero; }
};

// Sparse polynomial with exact rational coefficients.  Terms are kept in
// canonical order with no zero coefficients.
class Polynomial {
 public:
  using Term = std::pair<Monomial, Rational>;

  explicit Polynomial(RingPtr ctx);
  static Polynomial zero(RingPtr ctx);
  static Polynomial constant(RingPtr ctx, const Rational& c);
  static Polynomial variable(RingPtr ctx, int i);
  static Polynomial term(RingPtr ctx, Monomial m, const Rational& c);
  // Terms in any order, possibly with repeats; normalized on construction.
  static Polynomial from_terms(RingPtr ctx, std::vector<Term> terms);

  const RingPtr& ctx() const { return ctx_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const Term& leading_term() const;  // precondition: nonzero
  Rational coeff(const Monomial& m) const;

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  bool operator==(const Polynomial& o) const;

  Polynomial times_monomial(const Monomial& m, const Rational& c) const;

 private:
  RingPtr ctx_;
  std::vector<Term> terms_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

WeightedDegree weighted_degree(const Polynomial& p);
Polynomial partial_derivative(const Polynomial& p, int i);

// True iff p is nonzero, weighted-homogeneous, and satisfies the Euler
// identity  sum_i w_i x_i d_i(p) = deg(p) * p  (verified exactly).
bool euler_check(const Polynomial& p);

// Quotient q with p = q * f when f divides p exactly, std::nullopt otherwise.
std::optional<Polynomial> exact_divide(const Polynomial& p, const Polynomial& f);

// Monomials of weighted degree exactly t, in canonical order, with index
// lookup.  The coordinate space for every graded computation.
class GradedBasis {
 public:
  GradedBasis(RingPtr ctx, long degree);

  long degree() const { return degree_; }
  int dim() const { return static_cast<int>(monomials_.size()); }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  const Monomial& monomial(int i) const { return monomials_[i]; }
  std::optional<int> index_of(const Monomial& m) const;
  const RingPtr& ctx() const { return ctx_; }

  // Coordinates of a homogeneous polynomial of degree() in this basis.
  std::vector<std::pair<int, Rational>> coords_of(const Polynomial& p) const;
  Polynomial from_coords(const std::vector<std::pair<int, Rational>>& v) const;

 private:
  RingPtr ctx_;
  long degree_;
  std::vector<Monomial> monomials_;
  std::unordered_map<Monomial, int, MonomialHash> index_;
};

inline std::shared_ptr<const GradedBasis> monomial_basis(const RingPtr& ctx, long t) {
  return ctx->basis(t);
}

inline long slice_dim(const RingPtr& ctx, long t) { return ctx->basis(t)->dim(); }

}  // namespace derham
