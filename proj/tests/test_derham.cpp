#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "derham/derham.hpp"
#include "derham/parser.hpp"
#include "oracles.hpp"

using namespace derham;

namespace {

HPtr H(const std::vector<std::string>& vars, const std::vector<int>& weights,
       const std::string& fsrc) {
  auto ctx = make_ring(vars, weights);
  return HypersurfaceContext::make(ctx, parse_polynomial(ctx, fsrc));
}

HPtr quadric() { return H({"x", "y", "z"}, {1, 1, 1}, "x^2 + y^2 + z^2"); }
HPtr cubic() { return H({"x", "y", "z"}, {1, 1, 1}, "x^3 + y^3 + z^3"); }
HPtr weighted() { return H({"x", "y", "z"}, {3, 2, 1}, "x^2 + y^3 + z^6"); }

Polynomial random_homogeneous(const RingPtr& ctx, long t, std::mt19937& rng,
                              int density_pct = 60) {
  auto basis = ctx->basis(t);
  std::uniform_int_distribution<int> pct(0, 99), num(-5, 5);
  std::vector<Polynomial::Term> terms;
  for (const auto& m : basis->monomials()) {
    if (pct(rng) >= density_pct) continue;
    int c = num(rng);
    if (c != 0) terms.push_back({m, Rational(c)});
  }
  return Polynomial::from_terms(ctx, std::move(terms));
}

LocalizedVector random_vector_at(const HPtr& h, int p, long j, int pole, std::mt19937& rng,
                                 int density_pct = 60) {
  auto subs = subsets_of_size(h->nvars(), p);
  std::vector<Polynomial> nums;
  for (const auto& I : subs) {
    long wI = 0;
    for (int i : I) wI += h->ring()->weight(i);
    nums.push_back(random_homogeneous(h->ring(), pole * h->d() + j + wI, rng, density_pct));
  }
  return LocalizedVector(h, p, j, pole, std::move(nums));
}

LocalizedVector vector_from_coords(const HPtr& h, int p, long j, int pole,
                                   const SparseQ& coords) {
  auto L = derham_layer(h->ring(), h->d(), p, pole, j);
  std::vector<Polynomial> nums(L.components.size(), Polynomial::zero(h->ring()));
  for (const auto& [g, c] : coords) {
    auto [ci, li] = L.locate(g);
    nums[ci] = nums[ci] + Polynomial::term(h->ring(), L.components[ci].monomials[li], c);
  }
  return LocalizedVector(h, p, j, pole, std::move(nums));
}

// random cycle at a given pole: random rational combination of a kernel basis
std::optional<LocalizedVector> random_cycle(const HPtr& h, int p, long j, int pole,
                                            std::mt19937& rng) {
  auto D = build_derham_differential(h->ring(), h->f(), p, pole, j);
  auto kb = kernel_basis(D.mat);
  if (kb.empty()) return std::nullopt;
  std::uniform_int_distribution<int> coef(-3, 3);
  SparseQ acc;
  for (const auto& k : kb) acc = sparse_add(acc, sparse_scale(k, coef(rng)));
  if (sparse_is_zero(acc)) return std::nullopt;
  return vector_from_coords(h, p, j, pole, acc);
}

// random boundary at pole c: image of a random vector at pole c-1
LocalizedVector random_boundary(const HPtr& h, int p, long j, int pole, std::mt19937& rng) {
  auto D = build_derham_differential(h->ring(), h->f(), p + 1, pole - 1, j);
  auto src = random_vector_at(h, p + 1, j, pole - 1, rng);
  return vector_from_coords(h, p, j, pole, D.mat.apply(src.slice_coords()));
}

}  // namespace

TEST_CASE("localized vectors validate and normalize") {
  auto h = quadric();
  auto ctx = h->ring();
  // p=1, j=-3, pole=2: numerator degrees 2*2-3+1 = 2
  auto good = LocalizedVector(
      h, 1, -3, 2,
      {parse_polynomial(ctx, "x^2"), Polynomial::zero(ctx), parse_polynomial(ctx, "y*z")});
  CHECK(!good.is_zero());
  CHECK(good.pole() == 2);

  // degree mismatch rejected
  CHECK_THROWS_AS(LocalizedVector(h, 1, -3, 2,
                                  {parse_polynomial(ctx, "x"), Polynomial::zero(ctx),
                                   Polynomial::zero(ctx)}),
                  input_error);
  // wrong numerator count rejected
  CHECK_THROWS_AS(LocalizedVector(h, 1, -3, 2, {Polynomial::zero(ctx)}), input_error);
  // inhomogeneous numerator rejected
  CHECK_THROWS_AS(LocalizedVector(h, 1, -3, 2,
                                  {parse_polynomial(ctx, "x^2 + x"), Polynomial::zero(ctx),
                                   Polynomial::zero(ctx)}),
                  input_error);

  // raising multiplies by f
  auto up = good.raised_to_pole(3);
  CHECK(up.pole() == 3);
  CHECK(up.numerators()[0] == parse_polynomial(ctx, "x^2") * h->f());
  CHECK(up.same_element(good));
  CHECK(good.same_element(up));

  // addition aligns poles
  auto sum = good + up;
  CHECK(sum.pole() == 3);
  CHECK(sum.same_element(good * Rational(2)));

  // coordinates round trip
  auto coords = good.slice_coords();
  auto back = vector_from_coords(h, 1, -3, 2, coords);
  CHECK(back.same_element(good));
  CHECK(back.numerators()[0] == good.numerators()[0]);
}

TEST_CASE("normal form strips exactly the shared power of f") {
  std::mt19937 rng(90210u);
  for (auto h : {quadric(), cubic(), weighted()}) {
    for (int it = 0; it < 10; ++it) {
      int p = 1 + static_cast<int>(rng() % (h->nvars() - 1));
      long j = -h->omega() + static_cast<long>(rng() % 3);
      int base_pole = 1 + static_cast<int>(rng() % 2);
      auto v = random_vector_at(h, p, j, base_pole, rng);
      if (v.is_zero()) continue;
      // ensure at least one numerator is not divisible by f, else strip first
      auto nf0 = normal_form(v);
      // multiply through by f^k and confirm the normal form lands back at nf0
      for (int k = 1; k <= 2; ++k) {
        auto w = v.raised_to_pole(base_pole + k);
        auto nf = normal_form(w);
        CHECK(nf.pole() == nf0.pole());
        CHECK(nf.same_element(v));
        for (std::size_t i = 0; i < nf.numerators().size(); ++i)
          CHECK(nf.numerators()[i] == nf0.numerators()[i]);
      }
      // idempotent
      auto nf2 = normal_form(nf0);
      CHECK(nf2.pole() == nf0.pole());
    }
  }
}

TEST_CASE("pole order laws") {
  std::mt19937 rng(55u);
  auto h = cubic();
  long j = -h->omega();

  // clause 1: the zero vector sits at minus infinity
  auto zero = LocalizedVector(h, 1, j, 2,
                              std::vector<Polynomial>(3, Polynomial::zero(h->ring())));
  CHECK(L_of(zero) == PoleOrder::neg_inf());
  CHECK(to_string(L_of(zero)) == "-inf");

  // clause 2, directly: a vector of polynomials has order zero even when
  // written with a denominator
  {
    auto v0 = random_vector_at(h, 1, 0, 0, rng, 100);
    REQUIRE(!v0.is_zero());
    CHECK(L_of(v0) == PoleOrder::of(0));
    CHECK(L_of(v0.raised_to_pole(2)) == PoleOrder::of(0));
    CHECK(to_string(L_of(v0)) == "0");
  }

  int checked_mixed = 0;
  for (int it = 0; it < 60; ++it) {
    int p = 1 + static_cast<int>(rng() % 2);
    int pole = 1 + static_cast<int>(rng() % 3);
    int wpole = 1 + static_cast<int>(rng() % 3);
    auto v = random_vector_at(h, p, j, pole, rng);
    auto w = random_vector_at(h, p, j, wpole, rng);
    if (v.is_zero() || w.is_zero()) continue;

    // clause 2: nonzero polynomial vectors have order zero
    {
      auto nf = normal_form(v);
      if (nf.pole() == 0) CHECK(L_of(nf) == PoleOrder::of(0));
    }

    // clause 3: representation invariance
    CHECK(L_of(v) == L_of(v.raised_to_pole(v.pole() + 2)));

    // clause 4: scaling invariance
    CHECK(L_of(v * Rational(7, 3)) == L_of(v));

    // clause 5: subadditive under addition
    auto vw = v + w;
    PoleOrder lv = L_of(v), lw = L_of(w), ls = L_of(vw);
    PoleOrder mx = lv < lw ? lw : lv;
    CHECK(ls <= mx);

    // clause 6: equality when the orders differ
    if (!(lv == lw)) {
      CHECK(ls == mx);
      ++checked_mixed;
    }

    // clause 7: never above the representation pole
    CHECK(ls <= PoleOrder::of(vw.pole()));
    CHECK(lv <= PoleOrder::of(v.pole()));
  }
  CHECK(checked_mixed > 0);  // the suite exercised the strict clause
}

TEST_CASE("theta lands in the predicted degree and kills boundaries") {
  std::mt19937 rng(777u);
  for (auto h : {quadric(), cubic()}) {
    long j = -h->omega();
    int n = h->nvars();
    for (int p = 1; p < n; ++p) {
      int found = 0;
      for (int pole = 1; pole <= 3 && found < 8; ++pole) {
        auto vc = random_cycle(h, p, j, pole, rng);
        if (!vc || vc->is_zero()) continue;
        ++found;
        auto nf = normal_form(*vc);
        if (nf.pole() == 0) continue;
        auto th = theta(*vc);
        CHECK(th.p == p);
        CHECK(th.t == static_cast<long>(nf.pole() + p) * h->d() + j);
        CHECK(th.target_dim == h->jacobian_homology_dim(p, th.t));
        // theta is invariant under raising the representation
        auto th2 = theta(vc->raised_to_pole(vc->pole() + 1));
        CHECK(th2.t == th.t);
        CHECK(th2.coords == th.coords);
      }

      // boundaries map to zero whenever they keep a genuine pole
      for (int pole = 2; pole <= 3; ++pole) {
        for (int it = 0; it < 6; ++it) {
          auto b = random_boundary(h, p, j, pole, rng);
          if (b.is_zero()) continue;
          auto nf = normal_form(b);
          if (nf.pole() == 0) continue;
          CHECK(theta(b).is_zero());
        }
      }
    }
  }
}

TEST_CASE("theta rejects non-cycles") {
  std::mt19937 rng(13u);
  auto h = cubic();
  for (int it = 0; it < 20; ++it) {
    auto v = random_vector_at(h, 1, -3, 2, rng);
    if (v.is_zero()) continue;
    auto D = build_derham_differential(h->ring(), h->f(), 1, 2, -3);
    if (sparse_is_zero(D.mat.apply(v.slice_coords()))) continue;  // rare: skip cycles
    CHECK_THROWS_AS(theta(v), input_error);
    break;
  }
}

TEST_CASE("explicit cycle at the top interesting index") {
  for (auto h : {quadric(), cubic(), weighted()}) {
    auto xi = explicit_kernel_cycle(h);
    int p = h->nvars() - 1;
    CHECK(xi.p() == p);
    CHECK(xi.pole() == 1);
    CHECK(xi.internal_degree() == -h->omega());
    CHECK(!xi.is_zero());
    // it really is a cycle
    auto D = build_derham_differential(h->ring(), h->f(), p, 1, -h->omega());
    CHECK(sparse_is_zero(D.mat.apply(xi.slice_coords())));
    // its numerators are the partials, up to alternating sign, indexed by the
    // missing variable
    auto subs = subsets_of_size(h->nvars(), p);
    for (std::size_t k = 0; k < subs.size(); ++k) {
      int missing = -1;
      for (int i = 0, at = 0; i < h->nvars(); ++i) {
        if (at < p && subs[k][at] == i) ++at;
        else missing = i;
      }
      auto want = h->partials()[missing] * Rational(missing % 2 == 0 ? 1 : -1);
      CHECK(xi.numerators()[k] == want);
    }
    // theta kills it: its image is the boundary of the full-subset generator
    CHECK(theta(xi).is_zero());
  }
}

TEST_CASE("homology of the quadric") {
  auto h = quadric();

  // top interesting index carries exactly one class, entering at pole 1
  auto H2 = derham_homology(h, 2, -3);
  CHECK(H2.p == 2);
  CHECK(H2.auto_cap);
  CHECK(H2.cap == 3);  // no nonzero targets: max(0,1)+2
  CHECK(H2.stabilized);
  CHECK(H2.dim == 1);
  REQUIRE(H2.class_basis.size() == 1);
  CHECK(H2.class_basis[0].pole_order == PoleOrder::of(1));
  CHECK(H2.class_basis[0].first_pole == 1);

  // the explicit cycle represents the generator
  auto xi = explicit_kernel_cycle(h);
  auto coords = H2.class_coords(xi);
  REQUIRE(coords.has_value());
  CHECK(coords->size() == 1);
  CHECK((*coords)[0] != 0);

  // index 1 is empty: every eta target vanishes and eta_1 is injective there
  auto H1 = derham_homology(h, 1, -3);
  CHECK(H1.stabilized);
  CHECK(H1.dim == 0);
  CHECK(H1.class_basis.empty());

  // levels are consistent: dim_H = dim_Z - dim_B >= 0, filtration monotone
  for (const auto& lvl : H2.levels) {
    CHECK(lvl.dim_H == lvl.dim_Z - lvl.dim_B);
    CHECK(lvl.dim_H >= 0);
  }
  const auto& fd = H2.filtration_dims();
  REQUIRE(static_cast<int>(fd.size()) == H2.cap + 1);
  for (std::size_t i = 1; i < fd.size(); ++i) CHECK(fd[i] >= fd[i - 1]);
  CHECK(fd.back() == H2.dim);
  CHECK(fd[1] == 1);  // the class is already present at pole 1
}

TEST_CASE("homology of the fermat cubic") {
  auto h = cubic();

  auto H2 = derham_homology(h, 2, -3);
  CHECK(H2.stabilized);
  CHECK(H2.dim == 1);
  REQUIRE(H2.class_basis.size() == 1);
  CHECK(H2.class_basis[0].pole_order == PoleOrder::of(1));
  auto xi = explicit_kernel_cycle(h);
  auto coords = H2.class_coords(xi);
  REQUIRE(coords.has_value());
  CHECK((*coords)[0] != 0);

  // index 1: eta targets have dims 1 (nu=1) and 1 (nu=2); injectivity bounds
  // the homology by 2 and the class count realizes the bound
  auto H1 = derham_homology(h, 1, -3);
  CHECK(H1.cap == 4);  // nu* = 2
  CHECK(H1.stabilized);
  CHECK(H1.dim == 2);
  REQUIRE(H1.class_basis.size() == 2);
  CHECK(H1.class_basis[0].pole_order == PoleOrder::of(1));
  CHECK(H1.class_basis[1].pole_order == PoleOrder::of(2));
  const auto& fd = H1.filtration_dims();
  CHECK(fd.back() == H1.dim);

  // every class's minimal pole matches its recorded entry level
  for (const auto& cls : H1.class_basis) {
    CHECK(!cls.pole_order.minus_infinity);
    CHECK(cls.pole_order.value <= cls.first_pole);
  }
}

TEST_CASE("class coordinates are linear and boundary-blind") {
  std::mt19937 rng(4242u);
  auto h = cubic();
  auto H2 = derham_homology(h, 2, -3);
  auto xi = explicit_kernel_cycle(h);
  auto c1 = H2.class_coords(xi);
  REQUIRE(c1.has_value());

  // adding a boundary leaves the class unchanged
  for (int it = 0; it < 5; ++it) {
    auto b = random_boundary(h, 2, -3, 2, rng);
    auto sum = xi.raised_to_pole(2) + b;
    auto c2 = H2.class_coords(sum);
    REQUIRE(c2.has_value());
    CHECK(*c2 == *c1);
  }

  // scaling scales
  auto c3 = H2.class_coords(xi * Rational(5));
  REQUIRE(c3.has_value());
  CHECK((*c3)[0] == (*c1)[0] * 5);

  // the zero vector has zero class
  auto zero = LocalizedVector(h, 2, -3, 1,
                              std::vector<Polynomial>(3, Polynomial::zero(h->ring())));
  auto c0 = H2.class_coords(zero);
  REQUIRE(c0.has_value());
  CHECK((*c0)[0] == 0);
}

TEST_CASE("filtration report for the quadric top index") {
  auto h = quadric();
  auto H2 = derham_homology(h, 2, -3);
  auto rep = filtration(h, H2);
  CHECK(rep.p == 2);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.sum_matches_dim);
  REQUIRE(!rep.rows.empty());
  CHECK(rep.rows[0].nu == 1);
  CHECK(rep.rows[0].dim_F == 1);
  CHECK(rep.rows[0].dim_graded == 1);
  CHECK(rep.rows[0].target_t == 3);              // (1+2)*2 - 3
  CHECK(rep.rows[0].target_dim == 0);            // higher homology vanishes
  CHECK(rep.rows[0].eta_rank == 0);
  CHECK(rep.rows[0].eta_kernel_dim == 1);        // the explicit cycle's class
  CHECK(rep.eta_injective_above_one);
  CHECK(!rep.eta1_injective);
  CHECK(rep.eta1_kernel_dim == 1);
  CHECK(rep.kernel_spanned_by_explicit_cycle);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].dim_graded == 0);
}

TEST_CASE("filtration report for the cubic") {
  auto h = cubic();

  // index 1: both graded pieces inject into their targets
  auto H1 = derham_homology(h, 1, -3);
  auto rep1 = filtration(h, H1);
  CHECK(rep1.hypothesis_ok);
  CHECK(rep1.sum_matches_dim);
  CHECK(rep1.eta_injective_above_one);
  CHECK(rep1.eta1_injective);
  CHECK(rep1.eta1_kernel_dim == 0);
  REQUIRE(rep1.rows.size() >= 2);
  CHECK(rep1.rows[0].target_t == 3);
  CHECK(rep1.rows[0].target_dim == 1);
  CHECK(rep1.rows[1].target_t == 6);
  CHECK(rep1.rows[1].target_dim == 1);
  // graded dims are bounded by their targets above nu = 1
  for (std::size_t i = 1; i < rep1.rows.size(); ++i)
    CHECK(rep1.rows[i].dim_graded <= rep1.rows[i].target_dim);

  // index 2 = n-1: same shape as the quadric
  auto H2 = derham_homology(h, 2, -3);
  auto rep2 = filtration(h, H2);
  CHECK(rep2.hypothesis_ok);
  CHECK(rep2.sum_matches_dim);
  CHECK(rep2.eta_injective_above_one);
  CHECK(rep2.eta1_kernel_dim == 1);
  CHECK(rep2.kernel_spanned_by_explicit_cycle);
}

TEST_CASE("weighted fixture carries one class at the top index") {
  auto h = weighted();
  auto H2 = derham_homology(h, 2, -6);
  CHECK(H2.stabilized);
  CHECK(H2.dim == 1);
  REQUIRE(H2.class_basis.size() == 1);
  CHECK(H2.class_basis[0].pole_order == PoleOrder::of(1));
  auto rep = filtration(h, H2);
  CHECK(rep.hypothesis_ok);
  CHECK(rep.sum_matches_dim);
  CHECK(rep.kernel_spanned_by_explicit_cycle);

  // index 1 mirrors the cubic: two classes entering at poles 1 and 2
  auto H1 = derham_homology(h, 1, -6);
  CHECK(H1.stabilized);
  CHECK(H1.dim == 2);
  auto rep1 = filtration(h, H1);
  CHECK(rep1.eta1_injective);
  CHECK(rep1.eta_injective_above_one);
  CHECK(rep1.sum_matches_dim);
}

TEST_CASE("off-degree slices are empty at the top index") {
  // concentration: the only internal degree carrying homology is -omega
  for (auto h : {quadric(), cubic()}) {
    for (long shift : {-1L, 1L, 3L}) {
      long j = -h->omega() + shift;
      auto Hj = derham_homology(h, h->nvars() - 1, j);
      CHECK(Hj.stabilized);
      CHECK(Hj.dim == 0);
    }
  }
}

TEST_CASE("manual caps are honest about stabilization") {
  auto h = quadric();
  // cap 2 sees r_0 = 0 (empty pole-0 slice) and r_1 = 1: not yet certified
  auto H2 = derham_homology(h, 2, -3, 2);
  CHECK(!H2.auto_cap);
  CHECK(H2.cap == 2);
  REQUIRE(H2.transition_ranks.size() == 2);
  CHECK(H2.transition_ranks[0] == 0);
  CHECK(H2.transition_ranks[1] == 1);
  CHECK(!H2.stabilized);

  // cap 3 matches the automatic choice and certifies
  auto H3 = derham_homology(h, 2, -3, 3);
  CHECK(!H3.auto_cap);
  CHECK(H3.stabilized);
  CHECK(H3.dim == 1);

  auto H2lo = derham_homology(h, 2, -3, 1);
  CHECK(H2lo.transition_ranks.size() == 1);
  CHECK(!H2lo.stabilized);  // a single transition cannot certify anything

  // singular inputs cannot auto-cap
  auto hs = H({"x", "y"}, {1, 1}, "x^2*y");
  CHECK_THROWS_AS(derham_homology(hs, 1, -2), hypothesis_error);
  auto Hs = derham_homology(hs, 1, -2, 2);  // explicit cap is allowed
  CHECK(Hs.cap == 2);
}
