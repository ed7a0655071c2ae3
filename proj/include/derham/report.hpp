#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "derham/derham.hpp"

namespace derham {

// Pure-data result of a full theorem verification; serializes to JSON and
// back field-for-field.  All volatile quantities (wall-clock times) are
// opt-in so that the default JSON is byte-stable run to run.
struct VerificationReport {
  // input
  std::string f;
  std::vector<std::string> vars;
  std::vector<int> weights;
  int n = 0;
  long d = 0;
  long omega = 0;

  // checks
  bool quasi_homogeneous = false;
  bool smooth = false;
  long milnor_scan_bound = 0;
  long eta_scan_bound = 0;

  // milnor block
  std::vector<long> milnor_hilbert;
  bool milnor_artinian = false;
  long milnor_top_degree = -1;

  // jacobian block: dims of H_p(df; A)_t for t = 0..eta_scan_bound
  struct JacobianBlock {
    int p = 0;
    std::vector<long> dims;
    bool all_zero = false;
  };
  std::vector<JacobianBlock> jacobian;

  // de Rham block, one entry per homological index p = 1..n-1
  struct ClassEntry {
    int first_pole = 0;
    int pole_order = 0;
    std::vector<std::string> numerators;  // at the first_pole slice
  };
  struct DerhamBlock {
    int p = 0;
    long internal_degree = 0;
    int pole_cap = 0;
    int nu_star = 0;
    std::vector<long> slice_dims;       // pole 0..cap
    std::vector<long> cycle_dims;
    std::vector<long> boundary_dims;
    std::vector<long> level_dims;       // dim H^(c)
    std::vector<long> transition_ranks; // c -> c+1
    bool stabilized = false;
    long dim = 0;
    std::vector<ClassEntry> classes;
    // filtration
    bool hypothesis_ok = false;
    std::vector<FiltrationRow> filtration;
    bool sum_matches_dim = false;
    bool eta_injective_above_one = false;
    bool eta1_injective = false;
    long eta1_kernel_dim = 0;
    bool kernel_spanned_by_explicit_cycle = false;
  };
  std::vector<DerhamBlock> derham;

  // theorem block
  struct Assertion {
    int p = 0;                 // homological index
    int cohomology_index = 0;  // n - p
    long expected = 0;
    long actual = 0;
    bool ok = false;
  };
  std::vector<Assertion> assertions;
  // verified | failed | inconclusive | hypothesis_not_met
  std::string status;
  std::string identification;

  // deterministic work counters; wall times only when requested
  long long counter_differentials = 0;
  long long counter_echelon_rows = 0;
  long long counter_max_slice = 0;
  bool timing_enabled = false;
  std::vector<std::pair<std::string, long>> wall_ms;
};

struct VerifyOptions {
  std::optional<int> cap_override;
  bool timing = false;
};

VerificationReport verify_main_theorem(const HPtr& h, const VerifyOptions& opt = {});

std::string report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const std::string& text);
std::string report_to_table(const VerificationReport& r);

}  // namespace derham
