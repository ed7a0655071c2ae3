#include "derham/cli.hpp"

#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "derham/parser.hpp"
#include "derham/report.hpp"
#include "json.hpp"

namespace derham {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Options {
  std::string f;
  std::string vars;     // comma separated, empty = infer
  std::string weights;  // comma separated, empty = all ones
  std::string format = "table";
  std::optional<long> degree_cap;
  unsigned seed = 1;
  int p = 0;
  std::optional<int> pole_cap;
  std::optional<long> internal_degree;
  std::optional<long> t_single;
  std::string t_range;  // "A..B"
  bool timing = false;
};

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

HPtr build_hypersurface(const Options& o) {
  std::vector<std::string> vars;
  if (!o.vars.empty()) {
    vars = split_commas(o.vars);
  } else {
    vars = scan_identifiers(o.f);
    if (vars.empty())
      throw input_error("no variables in the expression; pass --vars");
  }
  std::vector<int> weights;
  if (!o.weights.empty()) {
    for (const auto& w : split_commas(o.weights)) {
      try {
        std::size_t used = 0;
        int v = std::stoi(w, &used);
        if (used != w.size()) throw std::invalid_argument(w);
        weights.push_back(v);
      } catch (const std::exception&) {
        throw input_error("bad weight '" + w + "' in --weights");
      }
    }
    if (weights.size() != vars.size())
      throw input_error("--weights lists " + std::to_string(weights.size()) +
                        " values for " + std::to_string(vars.size()) + " variables");
  } else {
    weights.assign(vars.size(), 1);
  }
  auto ctx = make_ring(std::move(vars), std::move(weights));
  return HypersurfaceContext::make(ctx, parse_polynomial(ctx, o.f));
}

int run_check(const Options& o, std::ostream& out) {
  auto h = build_hypersurface(o);
  auto prof = milnor_profile(h, o.degree_cap);
  if (o.format == "json") {
    ordered_json j;
    j["f"] = format_polynomial(h->f());
    j["vars"] = h->ring()->vars();
    j["weights"] = h->ring()->weights();
    j["n"] = h->nvars();
    j["d"] = h->d();
    j["omega"] = h->omega();
    j["quasi_homogeneous"] = true;
    j["smooth"] = prof.is_artinian;
    j["milnor_scan_bound"] = prof.scan_bound;
    j["milnor_hilbert"] = prof.hilbert;
    j["milnor_artinian"] = prof.is_artinian;
    j["milnor_top_degree"] = prof.top_degree;
    out << j.dump(2) << "\n";
  } else {
    out << "f                 " << format_polynomial(h->f()) << "\n";
    out << "variables         ";
    for (std::size_t i = 0; i < h->ring()->vars().size(); ++i)
      out << (i ? " " : "") << h->ring()->vars()[i];
    out << "\nweights           ";
    for (std::size_t i = 0; i < h->ring()->weights().size(); ++i)
      out << (i ? " " : "") << h->ring()->weights()[i];
    out << "\n";
    out << "quasi-homogeneous yes\n";
    out << "degree d          " << h->d() << "\n";
    out << "omega             " << h->omega() << "\n";
    out << "smooth            " << (prof.is_artinian ? "yes" : "no") << "\n";
    out << "milnor hilbert    ";
    for (std::size_t i = 0; i < prof.hilbert.size(); ++i)
      out << (i ? " " : "") << prof.hilbert[i];
    out << "\n";
    out << "milnor top        " << prof.top_degree
        << (prof.is_artinian ? " (artinian)" : " (not artinian)") << "\n";
  }
  return kExitOk;
}

int run_milnor(const Options& o, std::ostream& out) {
  auto h = build_hypersurface(o);
  auto prof = milnor_profile(h, o.degree_cap);
  if (o.format == "json") {
    ordered_json j;
    j["scan_bound"] = prof.scan_bound;
    j["hilbert"] = prof.hilbert;
    j["artinian"] = prof.is_artinian;
    j["top_degree"] = prof.top_degree;
    out << j.dump(2) << "\n";
  } else {
    out << "t    dim\n";
    for (std::size_t t = 0; t < prof.hilbert.size(); ++t)
      out << t << (t < 10 ? "    " : t < 100 ? "   " : "  ") << prof.hilbert[t] << "\n";
    out << "artinian: " << (prof.is_artinian ? "yes" : "no") << ", top degree "
        << prof.top_degree << "\n";
  }
  return kExitOk;
}

int run_jkoszul(const Options& o, std::ostream& out) {
  auto h = build_hypersurface(o);
  if (o.p < 1 || o.p > h->nvars())
    throw input_error("--p must be between 1 and the number of variables");
  long lo = 0, hi = o.degree_cap ? *o.degree_cap : eta_scan_bound(h);
  if (o.t_single && !o.t_range.empty())
    throw input_error("pass --t or --t-range, not both");
  if (o.t_single) lo = hi = *o.t_single;
  if (!o.t_range.empty()) {
    auto at = o.t_range.find("..");
    if (at == std::string::npos)
      throw input_error("--t-range expects the form A..B");
    try {
      lo = std::stol(o.t_range.substr(0, at));
      hi = std::stol(o.t_range.substr(at + 2));
    } catch (const std::exception&) {
      throw input_error("--t-range expects integers in the form A..B");
    }
    if (lo > hi) throw input_error("--t-range is empty");
  }
  if (o.format == "json") {
    ordered_json j;
    j["p"] = o.p;
    j["rows"] = ordered_json::array();
    for (long t = lo; t <= hi; ++t) {
      ordered_json row;
      row["t"] = t;
      row["layer_dim"] = jacobian_layer(h->ring(), h->mod_f(), h->d(), o.p, t).total_dim;
      row["dim"] = h->jacobian_homology_dim(o.p, t);
      j["rows"].push_back(std::move(row));
    }
    out << j.dump(2) << "\n";
  } else {
    out << "t    layer    dim H_" << o.p << "\n";
    for (long t = lo; t <= hi; ++t) {
      out << t << "  " << jacobian_layer(h->ring(), h->mod_f(), h->d(), o.p, t).total_dim
          << "  " << h->jacobian_homology_dim(o.p, t) << "\n";
    }
  }
  return kExitOk;
}

int run_derham(const Options& o, std::ostream& out) {
  auto h = build_hypersurface(o);
  if (o.p < 1 || o.p > h->nvars())
    throw input_error("--p must be between 1 and the number of variables");
  long j = o.internal_degree ? *o.internal_degree : -h->omega();
  auto H = derham_homology(h, o.p, j, o.pole_cap);
  auto filt = filtration(h, H);
  if (o.format == "json") {
    ordered_json b;
    b["p"] = H.p;
    b["internal_degree"] = H.j;
    b["pole_cap"] = H.cap;
    b["auto_cap"] = H.auto_cap;
    b["nu_star"] = H.nu_star;
    ordered_json slice = ordered_json::array(), zdim = ordered_json::array(),
                 bdim = ordered_json::array(), hdim = ordered_json::array();
    for (const auto& lvl : H.levels) {
      slice.push_back(lvl.slice_dim);
      zdim.push_back(lvl.dim_Z);
      bdim.push_back(lvl.dim_B);
      hdim.push_back(lvl.dim_H);
    }
    b["slice_dims"] = std::move(slice);
    b["cycle_dims"] = std::move(zdim);
    b["boundary_dims"] = std::move(bdim);
    b["level_dims"] = std::move(hdim);
    b["transition_ranks"] = H.transition_ranks;
    b["stabilized"] = H.stabilized;
    b["dim"] = H.dim;
    b["classes"] = ordered_json::array();
    for (const auto& cls : H.class_basis) {
      ordered_json c;
      c["first_pole"] = cls.first_pole;
      c["pole_order"] = cls.pole_order.minus_infinity ? 0 : cls.pole_order.value;
      ordered_json nums = ordered_json::array();
      auto rep = cls.rep.raised_to_pole(cls.first_pole);
      for (const auto& num : rep.numerators()) nums.push_back(format_polynomial(num));
      c["numerators"] = std::move(nums);
      b["classes"].push_back(std::move(c));
    }
    b["hypothesis_ok"] = filt.hypothesis_ok;
    b["filtration"] = ordered_json::array();
    for (const auto& row : filt.rows) {
      ordered_json fr;
      fr["nu"] = row.nu;
      fr["dim_F"] = row.dim_F;
      fr["dim_graded"] = row.dim_graded;
      fr["target_t"] = row.target_t;
      fr["target_dim"] = row.target_dim;
      fr["eta_rank"] = row.eta_rank;
      fr["eta_kernel_dim"] = row.eta_kernel_dim;
      b["filtration"].push_back(std::move(fr));
    }
    b["sum_matches_dim"] = filt.sum_matches_dim;
    b["eta_injective_above_one"] = filt.eta_injective_above_one;
    b["eta1_injective"] = filt.eta1_injective;
    b["eta1_kernel_dim"] = filt.eta1_kernel_dim;
    b["kernel_spanned_by_explicit_cycle"] = filt.kernel_spanned_by_explicit_cycle;
    out << b.dump(2) << "\n";
  } else {
    out << "H_" << H.p << "(∂;R_f)  " << H.dim
        << (H.stabilized ? "" : "  [not stabilized]") << "\n";
    out << "  internal degree " << H.j << ", pole cap " << H.cap
        << (H.auto_cap ? " (auto)" : " (explicit)") << ", nu* " << H.nu_star << "\n";
    out << "  pole   slice   cycles   boundaries   classes\n";
    for (const auto& lvl : H.levels) {
      out << "  " << lvl.pole << "  " << lvl.slice_dim << "  " << lvl.dim_Z << "  "
          << lvl.dim_B << "  " << lvl.dim_H << "\n";
    }
    out << "  transition ranks ";
    for (std::size_t i = 0; i < H.transition_ranks.size(); ++i)
      out << (i ? " " : "") << H.transition_ranks[i];
    out << "\n";
    for (const auto& cls : H.class_basis) {
      out << "  class at pole " << to_string(cls.pole_order) << " (entered "
          << cls.first_pole << "):";
      auto rep = cls.rep.raised_to_pole(cls.first_pole);
      for (const auto& num : rep.numerators()) out << " [" << format_polynomial(num) << "]";
      out << "\n";
    }
    for (const auto& row : filt.rows) {
      out << "  nu=" << row.nu << "  dim F=" << row.dim_F << "  graded=" << row.dim_graded
          << "  target t=" << row.target_t << "  target dim=" << row.target_dim
          << "  eta rank=" << row.eta_rank << "  eta kernel=" << row.eta_kernel_dim
          << "\n";
    }
  }
  return H.stabilized ? kExitOk : kExitNotStabilized;
}

int run_verify(const Options& o, std::ostream& out) {
  auto h = build_hypersurface(o);
  VerifyOptions vopt;
  vopt.cap_override = o.pole_cap;
  vopt.timing = o.timing;
  auto rep = verify_main_theorem(h, vopt);
  if (o.format == "json")
    out << report_to_json(rep);
  else
    out << report_to_table(rep);
  if (rep.status == "verified") return kExitOk;
  if (rep.status == "failed") return kExitAssertionFailed;
  if (rep.status == "inconclusive") return kExitNotStabilized;
  return kExitHypothesisNotMet;
}

// ---- seeded self-test battery ----------------------------------------------

Polynomial random_homogeneous(const RingPtr& ctx, long t, std::mt19937& rng) {
  auto basis = ctx->basis(t);
  std::uniform_int_distribution<int> pct(0, 99), num(-5, 5);
  std::vector<Polynomial::Term> terms;
  for (const auto& m : basis->monomials()) {
    if (pct(rng) >= 60) continue;
    int c = num(rng);
    if (c != 0) terms.push_back({m, Rational(c)});
  }
  return Polynomial::from_terms(ctx, std::move(terms));
}

LocalizedVector random_vector_at(const HPtr& h, int p, long j, int pole,
                                 std::mt19937& rng) {
  auto subs = subsets_of_size(h->nvars(), p);
  std::vector<Polynomial> nums;
  for (const auto& I : subs) {
    long wI = 0;
    for (int i : I) wI += h->ring()->weight(i);
    nums.push_back(random_homogeneous(h->ring(), pole * h->d() + j + wI, rng));
  }
  return LocalizedVector(h, p, j, pole, std::move(nums));
}

LocalizedVector vector_from_coords(const HPtr& h, const KoszulLayer& L, int p, long j,
                                   int pole, const SparseQ& coords) {
  std::vector<Polynomial> nums(L.components.size(), Polynomial::zero(h->ring()));
  for (const auto& [g, c] : coords) {
    auto [ci, li] = L.locate(g);
    nums[ci] = nums[ci] + Polynomial::term(h->ring(), L.components[ci].monomials[li], c);
  }
  return LocalizedVector(h, p, j, pole, std::move(nums));
}

struct SelftestFailure {
  std::string battery;
  std::string detail;
};

int run_selftest(const Options& o, std::ostream& out) {
  std::mt19937 rng(o.seed);
  std::vector<SelftestFailure> failures;
  auto fail = [&](const std::string& battery, const std::string& detail) {
    failures.push_back({battery, detail});
  };

  std::vector<HPtr> fixtures;
  {
    auto c1 = make_ring({"x", "y", "z"}, {1, 1, 1});
    fixtures.push_back(HypersurfaceContext::make(c1, parse_polynomial(c1, "x^2+y^2+z^2")));
    auto c2 = make_ring({"x", "y", "z"}, {1, 1, 1});
    fixtures.push_back(HypersurfaceContext::make(c2, parse_polynomial(c2, "x^3+y^3+z^3")));
  }

  // pole-order laws
  long l_checks = 0;
  for (const auto& h : fixtures) {
    long j = -h->omega();
    for (int it = 0; it < 60; ++it) {
      int p = 1 + static_cast<int>(rng() % 2);
      auto v = random_vector_at(h, p, j, 1 + static_cast<int>(rng() % 3), rng);
      auto w = random_vector_at(h, p, j, 1 + static_cast<int>(rng() % 3), rng);
      if (v.is_zero() || w.is_zero()) continue;
      PoleOrder lv = L_of(v), lw = L_of(w), ls = L_of(v + w);
      PoleOrder mx = lv < lw ? lw : lv;
      if (!(ls <= mx)) fail("pole-order", "order of a sum exceeded the max");
      if (!(lv == lw) && !(ls == mx)) fail("pole-order", "strict clause violated");
      if (!(L_of(v * Rational(3, 2)) == lv)) fail("pole-order", "scaling changed the order");
      if (!(L_of(v.raised_to_pole(v.pole() + 1)) == lv))
        fail("pole-order", "representation changed the order");
      l_checks += 4;
    }
  }
  out << "ok pole-order laws (" << l_checks << " checks)\n";

  // normal-form uniqueness and idempotence
  long nf_checks = 0;
  for (const auto& h : fixtures) {
    long j = -h->omega();
    for (int it = 0; it < 25; ++it) {
      int p = 1 + static_cast<int>(rng() % 2);
      auto v = random_vector_at(h, p, j, 1 + static_cast<int>(rng() % 2), rng);
      if (v.is_zero()) continue;
      auto nf = normal_form(v);
      auto nf2 = normal_form(nf);
      if (nf2.pole() != nf.pole() || !nf2.same_element(nf))
        fail("normal-form", "not idempotent");
      auto raised = normal_form(v.raised_to_pole(v.pole() + 2));
      if (raised.pole() != nf.pole() || !raised.same_element(nf))
        fail("normal-form", "not unique across representations");
      nf_checks += 2;
    }
  }
  out << "ok normal form (" << nf_checks << " checks)\n";

  // theta kills boundaries and lands in the predicted degree
  long theta_checks = 0;
  for (const auto& h : fixtures) {
    long j = -h->omega();
    for (int p = 1; p < h->nvars(); ++p) {
      for (int pole = 2; pole <= 3; ++pole) {
        auto D = build_derham_differential(h->ring(), h->f(), p + 1, pole - 1, j);
        for (int it = 0; it < 5; ++it) {
          auto src = random_vector_at(h, p + 1, j, pole - 1, rng);
          auto b = vector_from_coords(h, D.target, p, j, pole,
                                      D.mat.apply(src.slice_coords()));
          if (b.is_zero()) continue;
          auto nf = normal_form(b);
          if (nf.pole() == 0) continue;
          auto th = theta(b);
          if (!th.is_zero()) fail("theta", "nonzero class on a boundary");
          if (th.t != static_cast<long>(nf.pole() + p) * h->d() + j)
            fail("theta", "landed in the wrong degree");
          theta_checks += 2;
        }
      }
    }
  }
  out << "ok theta on boundaries (" << theta_checks << " checks)\n";

  // differentials square to zero
  long square_checks = 0;
  for (const auto& h : fixtures) {
    long j = -h->omega();
    for (int it = 0; it < 6; ++it) {
      int p = 2 + static_cast<int>(rng() % (h->nvars() - 1));
      int pole = 1 + static_cast<int>(rng() % 2);
      auto D1 = build_derham_differential(h->ring(), h->f(), p, pole, j);
      auto D2 = build_derham_differential(h->ring(), h->f(), p - 1, pole + 1, j);
      for (int col = 0; col < D1.mat.cols(); ++col) {
        if (!sparse_is_zero(D2.mat.apply(D1.mat.column(col))))
          fail("squares", "derham differential does not square to zero");
      }
      square_checks += D1.mat.cols();
      long t = static_cast<long>(p + pole) * h->d() + j;
      if (t >= 0) {
        auto P1 = build_jacobian_differential(h->ring(), h->f(), h->mod_f(), p, t);
        auto P2 = build_jacobian_differential(h->ring(), h->f(), h->mod_f(), p - 1, t);
        for (int col = 0; col < P1.mat.cols(); ++col) {
          if (!sparse_is_zero(P2.mat.apply(P1.mat.column(col))))
            fail("squares", "jacobian differential does not square to zero");
        }
        square_checks += P1.mat.cols();
      }
    }
  }
  out << "ok complexes square to zero (" << square_checks << " checks)\n";

  if (!failures.empty()) {
    for (const auto& f : failures) out << "FAIL " << f.battery << ": " << f.detail << "\n";
    out << "selftest failed (" << failures.size() << " failures)\n";
    return kExitAssertionFailed;
  }
  out << "selftest passed (seed " << o.seed << ")\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact de Rham homology of hypersurface localizations"};
  app.name("derham");
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool with_f) {
    if (with_f)
      sub->add_option("f", o.f, "polynomial expression")->required();
    sub->add_option("--vars", o.vars, "comma-separated variables (default: inferred)");
    sub->add_option("--weights", o.weights, "comma-separated positive weights (default: 1)");
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
    sub->add_option("--degree-cap", o.degree_cap, "cap for degree scans");
    sub->add_option("--seed", o.seed, "seed for randomized batteries");
  };

  auto* c_check = app.add_subcommand("check", "parse and profile a hypersurface");
  add_common(c_check, true);
  auto* c_milnor = app.add_subcommand("milnor", "Hilbert table of the Milnor algebra");
  add_common(c_milnor, true);
  auto* c_jk = app.add_subcommand("jkoszul", "jacobian Koszul homology slice dims");
  add_common(c_jk, true);
  c_jk->add_option("--p", o.p, "homological index")->required();
  c_jk->add_option("--t", o.t_single, "single degree");
  c_jk->add_option("--t-range", o.t_range, "degree range A..B");
  auto* c_dr = app.add_subcommand("derham", "pole-truncated de Rham homology");
  add_common(c_dr, true);
  c_dr->add_option("--p", o.p, "homological index")->required();
  c_dr->add_option("--pole-cap", o.pole_cap, "explicit pole cap");
  c_dr->add_option("--internal-degree", o.internal_degree,
                   "internal degree (default -omega)");
  auto* c_verify = app.add_subcommand("verify", "full theorem verification");
  add_common(c_verify, true);
  c_verify->add_option("--pole-cap", o.pole_cap, "explicit pole cap");
  c_verify->add_flag("--timing", o.timing, "include wall-clock times in the report");
  auto* c_self = app.add_subcommand("selftest", "seeded property-test battery");
  add_common(c_self, false);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (app.got_subcommand(c_check)) return run_check(o, out);
    if (app.got_subcommand(c_milnor)) return run_milnor(o, out);
    if (app.got_subcommand(c_jk)) return run_jkoszul(o, out);
    if (app.got_subcommand(c_dr)) return run_derham(o, out);
    if (app.got_subcommand(c_verify)) return run_verify(o, out);
    if (app.got_subcommand(c_self)) return run_selftest(o, out);
    err << "error: usage: no subcommand\n";
    return kExitInputError;
  } catch (const ParseError& e) {
    err << "error: parse: " << e.what() << "\n";
    return kExitInputError;
  } catch (const input_error& e) {
    err << "error: input: " << e.what() << "\n";
    return kExitInputError;
  } catch (const hypothesis_error& e) {
    err << "error: hypothesis: " << e.what() << "\n";
    return kExitHypothesisNotMet;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace derham
