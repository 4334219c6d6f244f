#pragma once

#include <array>
#include <string>
#include <vector>

#include "cnsfv/config.hpp"
#include "cnsfv/diagnostics.hpp"
#include "cnsfv/transport.hpp"

namespace cnsfv {

struct RunSummary {
  State final_state;
  std::vector<DiagnosticsRecord> records;
  long long steps = 0;
  double max_div = 0.0;    // sup over steps of post-projection max |div u|
  double mass_drift = 0.0; // max relative deviation of the mass column
  std::string csv_path;    // empty when nothing was written
};

/// Step size under the automatic policy: minimum of the transport CFL bound,
/// 0.9x the donor-cell positivity bound, and the momentum-convection Courant
/// cap. Throws InvariantError when the result is not a positive finite number.
double auto_dt(const Grid& g, const State& s, const ModelParams& p,
               double safety = 0.4);

/// Advances the configured scenario to t_final (or time.max_steps): per step
/// fluid -> signal -> density, with dt from the policy ("fixed" uses time.dt;
/// "auto" combines the CFL bound, the donor-cell positivity bound, and the
/// momentum-convection Courant cap). Every diag.cadence steps a diagnostics
/// record is appended (and streamed to out_dir/diagnostics.csv when
/// write_output is set); snapshots are written at the configured times.
/// Mass drift beyond 1e-12 relative or a c_max rise beyond 1e-12 absolute
/// aborts with InvariantError carrying the step index; on any error the
/// partial CSV is flushed before rethrowing.
RunSummary run(const RunConfig& cfg, bool write_output = true);

struct EpsStudyResult {
  std::vector<double> eps_values;
  std::vector<DiagnosticsRecord> final_records;  // one per eps
  std::vector<double> n_distance_l1;  // consecutive final-field distances
  std::vector<double> c_distance_l2;
  std::vector<double> u_distance_l2;
  std::array<double, 7> sup_accumulators{};  // sup over eps of A1..A7
  double max_div = 0.0;  // sup over member runs of post-projection |div u|
  bool accumulators_bounded = false;  // A1..A3 within bound_ratio of median
  bool distances_nonincreasing = false;
  bool pass = false;
};

/// Repeats the configured run for each regularization strength (sequence
/// must be non-increasing, >= 3 entries) and probes the limit passage:
/// consecutive final-field distances and the across-eps spread of the
/// space-time accumulators. Member runs write output only when requested
/// (under out_dir/eps_<index>).
EpsStudyResult eps_study(const RunConfig& cfg,
                         const std::vector<double>& eps_list,
                         double bound_ratio = 2.0, bool write_output = false);

struct MmsRow {
  int size = 0;
  double h = 0.0;
  double dt_signal = 0.0;
  double dt_density = 0.0;
  double err_signal = 0.0;   // max |c - series| at T
  double err_density = 0.0;  // max |n - series| at T
  double order_signal = 0.0; // vs previous row, 0 on the first
  double order_density = 0.0;
};

struct MmsTable {
  std::vector<MmsRow> rows;
  bool pass = false;
  std::string message;
};

/// Heat sub-cases against the cosine-series oracle on the unit box:
/// the signal path (n = 0, u = 0, implicit diffusion) and the density path
/// (m = 1, uniform c, u = 0, explicit diffusion), both with dt scaled as
/// h^2. Pass requires every observed order >= 1.8. Needs >= 3 sizes, each
/// double the previous.
MmsTable mms_validate(const std::vector<int>& sizes);

struct BarenblattRow {
  int size = 0;
  double h = 0.0;
  double dt = 0.0;
  double err_l1 = 0.0;
  double order = 0.0;      // vs previous row, 0 on the first
  double mass = 0.0;       // discrete mass at t1
  double mass_drift = 0.0; // relative drift from the discrete initial mass
};

struct BarenblattTable {
  std::vector<BarenblattRow> rows;
  bool pass = false;
  std::string message;
};

/// Porous-medium sub-case (m > 1): starts from the self-similar source
/// profile at t0 = 1e-3, evolves the density alone (c = 0, u = 0) to
/// t1 = 4e-3, and compares in L1 against the profile at t1. Pass requires
/// strictly decreasing errors, observed order >= 0.8, and per-row mass
/// drift <= 1e-12 relative.
BarenblattTable barenblatt_validate(const std::vector<int>& sizes, double m);

}  // namespace cnsfv
