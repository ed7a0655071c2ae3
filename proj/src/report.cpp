#include "derham/report.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "derham/parser.hpp"
#include "json.hpp"

namespace derham {

namespace {

using ordered_json = nlohmann::ordered_json;
using clock_type = std::chrono::steady_clock;

long ms_between(clock_type::time_point a, clock_type::time_point b) {
  return static_cast<long>(
      std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count());
}

}  // namespace

VerificationReport verify_main_theorem(const HPtr& h, const VerifyOptions& opt) {
  VerificationReport r;
  auto t_total = clock_type::now();

  r.f = format_polynomial(h->f());
  r.vars = h->ring()->vars();
  r.weights = h->ring()->weights();
  r.n = h->nvars();
  r.d = h->d();
  r.omega = h->omega();
  r.quasi_homogeneous = true;  // enforced at construction via the Euler identity

  auto t0 = clock_type::now();
  auto prof = milnor_profile(h);
  r.smooth = prof.is_artinian;
  r.milnor_scan_bound = prof.scan_bound;
  r.milnor_hilbert = prof.hilbert;
  r.milnor_artinian = prof.is_artinian;
  r.milnor_top_degree = prof.top_degree;
  r.eta_scan_bound = eta_scan_bound(h);
  if (opt.timing) r.wall_ms.emplace_back("milnor", ms_between(t0, clock_type::now()));

  t0 = clock_type::now();
  for (int p = 1; p <= r.n; ++p) {
    VerificationReport::JacobianBlock blk;
    blk.p = p;
    blk.all_zero = true;
    for (long t = 0; t <= r.eta_scan_bound; ++t) {
      long dim = h->jacobian_homology_dim(p, t);
      blk.dims.push_back(dim);
      if (dim != 0) blk.all_zero = false;
    }
    r.jacobian.push_back(std::move(blk));
  }
  if (opt.timing) r.wall_ms.emplace_back("jacobian", ms_between(t0, clock_type::now()));

  bool computed_all = false;
  bool all_stabilized = true;
  if (r.smooth || opt.cap_override) {
    computed_all = true;
    for (int p = 1; p <= r.n - 1; ++p) {
      t0 = clock_type::now();
      auto H = derham_homology(h, p, -r.omega, opt.cap_override);
      if (opt.timing)
        r.wall_ms.emplace_back("derham_p" + std::to_string(p),
                               ms_between(t0, clock_type::now()));
      t0 = clock_type::now();
      auto filt = filtration(h, H);
      if (opt.timing)
        r.wall_ms.emplace_back("filtration_p" + std::to_string(p),
                               ms_between(t0, clock_type::now()));

      VerificationReport::DerhamBlock blk;
      blk.p = p;
      blk.internal_degree = H.j;
      blk.pole_cap = H.cap;
      blk.nu_star = H.nu_star;
      for (const auto& lvl : H.levels) {
        blk.slice_dims.push_back(lvl.slice_dim);
        blk.cycle_dims.push_back(lvl.dim_Z);
        blk.boundary_dims.push_back(lvl.dim_B);
        blk.level_dims.push_back(lvl.dim_H);
      }
      blk.transition_ranks = H.transition_ranks;
      blk.stabilized = H.stabilized;
      blk.dim = H.dim;
      if (!H.stabilized) all_stabilized = false;
      for (const auto& cls : H.class_basis) {
        VerificationReport::ClassEntry e;
        e.first_pole = cls.first_pole;
        e.pole_order = cls.pole_order.minus_infinity ? 0 : cls.pole_order.value;
        auto rep = cls.rep.raised_to_pole(cls.first_pole);
        for (const auto& num : rep.numerators())
          e.numerators.push_back(format_polynomial(num));
        blk.classes.push_back(std::move(e));
      }
      blk.hypothesis_ok = filt.hypothesis_ok;
      blk.filtration = filt.rows;
      blk.sum_matches_dim = filt.sum_matches_dim;
      blk.eta_injective_above_one = filt.eta_injective_above_one;
      blk.eta1_injective = filt.eta1_injective;
      blk.eta1_kernel_dim = filt.eta1_kernel_dim;
      blk.kernel_spanned_by_explicit_cycle = filt.kernel_spanned_by_explicit_cycle;
      r.derham.push_back(std::move(blk));
    }
  }

  if (!r.smooth) {
    r.status = "hypothesis_not_met";
  } else if (!computed_all) {
    r.status = "inconclusive";
  } else {
    bool all_ok = true;
    for (int p = 2; p <= r.n - 1; ++p) {
      VerificationReport::Assertion a;
      a.p = p;
      a.cohomology_index = r.n - p;
      a.expected = p == r.n - 1 ? 1 : 0;
      a.actual = r.derham[static_cast<std::size_t>(p - 1)].dim;
      a.ok = a.actual == a.expected;
      if (!a.ok) all_ok = false;
      r.assertions.push_back(a);
    }
    if (r.n == 2) {
      VerificationReport::Assertion a;
      a.p = 1;
      a.cohomology_index = 1;
      a.expected = 1;
      a.actual = r.derham[0].dim;
      a.ok = a.actual == a.expected;
      if (!a.ok) all_ok = false;
      r.assertions.push_back(a);
    }
    if (!all_stabilized)
      r.status = "inconclusive";
    else
      r.status = all_ok ? "verified" : "failed";
  }

  r.identification =
      "H_p(d; R_f)_j = H_p(d; R_f/R)_j = H_p(d; H^1_(f)(R))_j for p <= n-1, "
      "and H^i corresponds to H_{n-i}";

  for (const auto& blk : r.derham) {
    r.counter_differentials += 2 * static_cast<long long>(blk.pole_cap) + 1;
    for (std::size_t c = 0; c < blk.slice_dims.size(); ++c) {
      r.counter_echelon_rows +=
          blk.boundary_dims[c] + (blk.slice_dims[c] - blk.cycle_dims[c]);
      r.counter_max_slice = std::max(r.counter_max_slice,
                                     static_cast<long long>(blk.slice_dims[c]));
    }
  }

  r.timing_enabled = opt.timing;
  if (opt.timing) r.wall_ms.emplace_back("total", ms_between(t_total, clock_type::now()));
  return r;
}

namespace {

ordered_json row_to_json(const FiltrationRow& row) {
  ordered_json j;
  j["nu"] = row.nu;
  j["dim_F"] = row.dim_F;
  j["dim_graded"] = row.dim_graded;
  j["target_t"] = row.target_t;
  j["target_dim"] = row.target_dim;
  j["eta_rank"] = row.eta_rank;
  j["eta_kernel_dim"] = row.eta_kernel_dim;
  return j;
}

FiltrationRow row_from_json(const ordered_json& j) {
  FiltrationRow row;
  row.nu = j.at("nu").get<int>();
  row.dim_F = j.at("dim_F").get<long>();
  row.dim_graded = j.at("dim_graded").get<long>();
  row.target_t = j.at("target_t").get<long>();
  row.target_dim = j.at("target_dim").get<long>();
  row.eta_rank = j.at("eta_rank").get<long>();
  row.eta_kernel_dim = j.at("eta_kernel_dim").get<long>();
  return row;
}

}  // namespace

std::string report_to_json(const VerificationReport& r) {
  ordered_json j;
  j["f"] = r.f;
  j["vars"] = r.vars;
  j["weights"] = r.weights;
  j["n"] = r.n;
  j["d"] = r.d;
  j["omega"] = r.omega;
  j["quasi_homogeneous"] = r.quasi_homogeneous;
  j["smooth"] = r.smooth;
  j["milnor_scan_bound"] = r.milnor_scan_bound;
  j["eta_scan_bound"] = r.eta_scan_bound;
  j["milnor_hilbert"] = r.milnor_hilbert;
  j["milnor_artinian"] = r.milnor_artinian;
  j["milnor_top_degree"] = r.milnor_top_degree;
  j["jacobian"] = ordered_json::array();
  for (const auto& blk : r.jacobian) {
    ordered_json b;
    b["p"] = blk.p;
    b["dims"] = blk.dims;
    b["all_zero"] = blk.all_zero;
    j["jacobian"].push_back(std::move(b));
  }
  j["derham"] = ordered_json::array();
  for (const auto& blk : r.derham) {
    ordered_json b;
    b["p"] = blk.p;
    b["internal_degree"] = blk.internal_degree;
    b["pole_cap"] = blk.pole_cap;
    b["nu_star"] = blk.nu_star;
    b["slice_dims"] = blk.slice_dims;
    b["cycle_dims"] = blk.cycle_dims;
    b["boundary_dims"] = blk.boundary_dims;
    b["level_dims"] = blk.level_dims;
    b["transition_ranks"] = blk.transition_ranks;
    b["stabilized"] = blk.stabilized;
    b["dim"] = blk.dim;
    b["classes"] = ordered_json::array();
    for (const auto& cls : blk.classes) {
      ordered_json c;
      c["first_pole"] = cls.first_pole;
      c["pole_order"] = cls.pole_order;
      c["numerators"] = cls.numerators;
      b["classes"].push_back(std::move(c));
    }
    b["hypothesis_ok"] = blk.hypothesis_ok;
    b["filtration"] = ordered_json::array();
    for (const auto& row : blk.filtration) b["filtration"].push_back(row_to_json(row));
    b["sum_matches_dim"] = blk.sum_matches_dim;
    b["eta_injective_above_one"] = blk.eta_injective_above_one;
    b["eta1_injective"] = blk.eta1_injective;
    b["eta1_kernel_dim"] = blk.eta1_kernel_dim;
    b["kernel_spanned_by_explicit_cycle"] = blk.kernel_spanned_by_explicit_cycle;
    j["derham"].push_back(std::move(b));
  }
  j["assertions"] = ordered_json::array();
  for (const auto& a : r.assertions) {
    ordered_json b;
    b["p"] = a.p;
    b["cohomology_index"] = a.cohomology_index;
    b["expected"] = a.expected;
    b["actual"] = a.actual;
    b["ok"] = a.ok;
    j["assertions"].push_back(std::move(b));
  }
  j["status"] = r.status;
  j["identification"] = r.identification;
  j["counter_differentials"] = r.counter_differentials;
  j["counter_echelon_rows"] = r.counter_echelon_rows;
  j["counter_max_slice"] = r.counter_max_slice;
  j["timing_enabled"] = r.timing_enabled;
  j["wall_ms"] = ordered_json::array();
  for (const auto& [name, ms] : r.wall_ms) {
    ordered_json b;
    b["name"] = name;
    b["ms"] = ms;
    j["wall_ms"].push_back(std::move(b));
  }
  return j.dump(2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw input_error(std::string("report parse: ") + e.what());
  }
  try {
    VerificationReport r;
    r.f = j.at("f").get<std::string>();
    r.vars = j.at("vars").get<std::vector<std::string>>();
    r.weights = j.at("weights").get<std::vector<int>>();
    r.n = j.at("n").get<int>();
    r.d = j.at("d").get<long>();
    r.omega = j.at("omega").get<long>();
    r.quasi_homogeneous = j.at("quasi_homogeneous").get<bool>();
    r.smooth = j.at("smooth").get<bool>();
    r.milnor_scan_bound = j.at("milnor_scan_bound").get<long>();
    r.eta_scan_bound = j.at("eta_scan_bound").get<long>();
    r.milnor_hilbert = j.at("milnor_hilbert").get<std::vector<long>>();
    r.milnor_artinian = j.at("milnor_artinian").get<bool>();
    r.milnor_top_degree = j.at("milnor_top_degree").get<long>();
    for (const auto& b : j.at("jacobian")) {
      VerificationReport::JacobianBlock blk;
      blk.p = b.at("p").get<int>();
      blk.dims = b.at("dims").get<std::vector<long>>();
      blk.all_zero = b.at("all_zero").get<bool>();
      r.jacobian.push_back(std::move(blk));
    }
    for (const auto& b : j.at("derham")) {
      VerificationReport::DerhamBlock blk;
      blk.p = b.at("p").get<int>();
      blk.internal_degree = b.at("internal_degree").get<long>();
      blk.pole_cap = b.at("pole_cap").get<int>();
      blk.nu_star = b.at("nu_star").get<int>();
      blk.slice_dims = b.at("slice_dims").get<std::vector<long>>();
      blk.cycle_dims = b.at("cycle_dims").get<std::vector<long>>();
      blk.boundary_dims = b.at("boundary_dims").get<std::vector<long>>();
      blk.level_dims = b.at("level_dims").get<std::vector<long>>();
      blk.transition_ranks = b.at("transition_ranks").get<std::vector<long>>();
      blk.stabilized = b.at("stabilized").get<bool>();
      blk.dim = b.at("dim").get<long>();
      for (const auto& c : b.at("classes")) {
        VerificationReport::ClassEntry e;
        e.first_pole = c.at("first_pole").get<int>();
        e.pole_order = c.at("pole_order").get<int>();
        e.numerators = c.at("numerators").get<std::vector<std::string>>();
        blk.classes.push_back(std::move(e));
      }
      blk.hypothesis_ok = b.at("hypothesis_ok").get<bool>();
      for (const auto& row : b.at("filtration"))
        blk.filtration.push_back(row_from_json(row));
      blk.sum_matches_dim = b.at("sum_matches_dim").get<bool>();
      blk.eta_injective_above_one = b.at("eta_injective_above_one").get<bool>();
      blk.eta1_injective = b.at("eta1_injective").get<bool>();
      blk.eta1_kernel_dim = b.at("eta1_kernel_dim").get<long>();
      blk.kernel_spanned_by_explicit_cycle =
          b.at("kernel_spanned_by_explicit_cycle").get<bool>();
      r.derham.push_back(std::move(blk));
    }
    for (const auto& b : j.at("assertions")) {
      VerificationReport::Assertion a;
      a.p = b.at("p").get<int>();
      a.cohomology_index = b.at("cohomology_index").get<int>();
      a.expected = b.at("expected").get<long>();
      a.actual = b.at("actual").get<long>();
      a.ok = b.at("ok").get<bool>();
      r.assertions.push_back(a);
    }
    r.status = j.at("status").get<std::string>();
    r.identification = j.at("identification").get<std::string>();
    r.counter_differentials = j.at("counter_differentials").get<long long>();
    r.counter_echelon_rows = j.at("counter_echelon_rows").get<long long>();
    r.counter_max_slice = j.at("counter_max_slice").get<long long>();
    r.timing_enabled = j.at("timing_enabled").get<bool>();
    for (const auto& b : j.at("wall_ms"))
      r.wall_ms.emplace_back(b.at("name").get<std::string>(), b.at("ms").get<long>());
    return r;
  } catch (const input_error&) {
    throw;
  } catch (const std::exception& e) {
    throw input_error(std::string("report parse: ") + e.what());
  }
}

namespace {

std::string join_longs(const std::vector<long>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << " ";
    os << v[i];
  }
  return os.str();
}

}  // namespace

std::string report_to_table(const VerificationReport& r) {
  std::ostringstream os;
  os << "hypersurface      " << r.f << "\n";
  os << "variables         ";
  for (std::size_t i = 0; i < r.vars.size(); ++i) {
    if (i) os << " ";
    os << r.vars[i];
  }
  os << "\nweights           ";
  for (std::size_t i = 0; i < r.weights.size(); ++i) {
    if (i) os << " ";
    os << r.weights[i];
  }
  os << "\n";
  os << "degree d          " << r.d << "\n";
  os << "omega             " << r.omega << "\n";
  os << "smooth            " << (r.smooth ? "yes" : "no") << "\n";
  os << "milnor hilbert    " << join_longs(r.milnor_hilbert) << "\n";
  os << "milnor top        " << r.milnor_top_degree
     << (r.milnor_artinian ? " (artinian)" : " (not artinian)") << "\n";
  os << "scan bounds       milnor " << r.milnor_scan_bound << ", eta " << r.eta_scan_bound
     << "\n";
  os << "\n";
  for (const auto& blk : r.derham) {
    os << "H_" << blk.p << "(∂;R_f)  " << blk.dim
       << (blk.stabilized ? "" : "  [not stabilized]") << "\n";
    os << "  pole cap " << blk.pole_cap << ", nu* " << blk.nu_star << ", internal degree "
       << blk.internal_degree << "\n";
    os << "  level dims       " << join_longs(blk.level_dims) << "\n";
    os << "  transition ranks " << join_longs(blk.transition_ranks) << "\n";
    for (const auto& cls : blk.classes) {
      os << "  class at pole " << cls.pole_order << " (entered " << cls.first_pole << "):";
      for (const auto& num : cls.numerators) os << " [" << num << "]";
      os << "\n";
    }
    for (const auto& row : blk.filtration) {
      os << "  nu=" << row.nu << "  dim F=" << row.dim_F << "  graded=" << row.dim_graded
         << "  target t=" << row.target_t << "  target dim=" << row.target_dim
         << "  eta rank=" << row.eta_rank << "  eta kernel=" << row.eta_kernel_dim << "\n";
    }
    os << "  eta injective above 1: " << (blk.eta_injective_above_one ? "yes" : "no")
       << "; eta_1 " << (blk.eta1_injective ? "injective" : "kernel dim " +
                                                  std::to_string(blk.eta1_kernel_dim))
       << (blk.kernel_spanned_by_explicit_cycle ? " (spanned by the explicit cycle)" : "")
       << "\n";
  }
  if (!r.assertions.empty()) {
    os << "\n";
    for (const auto& a : r.assertions) {
      os << "assert H_" << a.p << " = H^" << a.cohomology_index << "  expected "
         << a.expected << "  actual " << a.actual << "  " << (a.ok ? "ok" : "FAIL") << "\n";
    }
  }
  os << "\nstatus            " << r.status << "\n";
  os << "identification    " << r.identification << "\n";
  os << "counters          differentials " << r.counter_differentials << ", echelon rows "
     << r.counter_echelon_rows << ", max slice " << r.counter_max_slice << "\n";
  if (r.timing_enabled) {
    for (const auto& [name, ms] : r.wall_ms)
      os << "time              " << name << " " << ms << " ms\n";
  }
  return os.str();
}

}  // namespace derham
