#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cnsfv/fields.hpp"
#include "cnsfv/model.hpp"
#include "cnsfv/transport.hpp"

namespace cnsfv {

/// One sampled row of every tracked functional. The trailing i1..i3 fields
/// are the instantaneous integrands behind a1..a3; they are carried so the
/// next evaluate() can advance the accumulators by the trapezoidal rule, and
/// they do not appear in the CSV.
struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double c_max = 0.0;
  double c_min = 0.0;
  double n_max = 0.0;
  double entropy = 0.0;     // integral of n ln n (0 at vacuum)
  double psi_energy = 0.0;  // 0.5 * integral |grad c|^2 / g(c)
  double kinetic = 0.0;     // K * integral |u|^2
  double combined_energy = 0.0;
  double d1 = 0.0;  // integral (n+eps)^(m-2) |grad n|^2
  double d2 = 0.0;  // integral |Hess c|^2 / c
  double d3 = 0.0;  // integral |grad c|^4 / c^3
  double d4 = 0.0;  // integral |grad u|^2
  double a1 = 0.0;  // time integral of i1
  double a2 = 0.0;  // time integral of i2
  double a3 = 0.0;  // time integral of i3
  double a4 = 0.0;  // time integral of d1
  double a5 = 0.0;  // time integral of d2
  double a6 = 0.0;  // time integral of d3
  double a7 = 0.0;  // time integral of d4
  long long floored_cells = 0;  // cells with c below the configured floor

  double i1 = 0.0;  // integral |grad n^(m/2)|^2
  double i2 = 0.0;  // integral (n+eps)^((3m+2)/3)
  double i3 = 0.0;  // integral |u|^(10/3)
  double n_min = 0.0;  // also outside the CSV (positivity audits)
};

/// Evaluates every functional at the given state. When prev is supplied the
/// a1..a7 accumulators continue from it (trapezoid over [prev->t, s.t]);
/// otherwise they start at zero. Signal values below params.c_floor use the
/// floor in singular denominators and are counted in floored_cells.
DiagnosticsRecord evaluate(const Grid& g, const State& s,
                           const ModelParams& params,
                           const DiagnosticsRecord* prev = nullptr);

/// integral of (n + eps)^power over the domain (the a2 integrand; power 1
/// reduces to mass + eps*|domain|).
double power_integral(const Grid& g, const ScalarField& n, double eps,
                      double power);

struct BudgetReport {
  bool pass = false;
  double max_energy_increase = 0.0;  // largest combined-energy rise
  double implied_constant = 0.0;     // sup over intervals of dE/dt + diss/(2K)
  double first_quartile_max = 0.0;
  double last_quartile_max = 0.0;
  std::string message;
};

/// Audits the energy inequality over uniformly sampled records. Per interval
/// it forms dE/dt + (1/(2K)) * mean of (a*d1 + d2 + d3 + d4). With a constant
/// potential the combined energy must be non-increasing up to slack; with
/// gravity the audit instead requires no blow-up trend: the max over the last
/// quarter of intervals must not exceed twice the max over the first quarter
/// plus slack. Non-uniform sampling is rejected.
BudgetReport energy_budget_check(const std::vector<DiagnosticsRecord>& records,
                                 const ModelParams& params,
                                 bool phi_is_constant, double slack);

// ---------------------------------------------------------------------------
// Weak-form residuals. The accumulator streams a trajectory sampled at
// uniform dt: feed consecutive states, then read the defect. The time
// derivative is moved onto the data by forward differences, flux integrals
// use the face/cell quadrature of the grid operators at the older sample.
// ---------------------------------------------------------------------------

enum class WeakEquation { density, signal, momentum };

/// Scalar space-time test function with analytic gradient.
struct TestFunction {
  std::function<double(const std::array<double, 3>&, double)> value;
  std::function<std::array<double, 3>(const std::array<double, 3>&, double)>
      grad;
};

/// Vector test function for the momentum identity: must be solenoidal and
/// vanish on the walls. grad(pos,t)[i][j] = d phi_i / d x_j.
struct VectorTestFunction {
  std::function<std::array<double, 3>(const std::array<double, 3>&, double)>
      value;
  std::function<std::array<std::array<double, 3>, 3>(
      const std::array<double, 3>&, double)>
      grad;
};

class WeakResidualAccumulator {
 public:
  WeakResidualAccumulator(const Grid& g, const ModelParams& p,
                          WeakEquation which, TestFunction phi);
  WeakResidualAccumulator(const Grid& g, const ModelParams& p,
                          VectorTestFunction phi);

  /// Consumes the next sample; states must arrive in time order at a fixed
  /// spacing. The first call checks boundary/solenoidality preconditions of
  /// the momentum test function.
  void add_state(const State& s);

  /// Absolute defect of the selected integral identity. Requires at least
  /// two states; throws if the test function fails to vanish near the final
  /// consumed time (support violation).
  double residual() const;

  int states_seen() const { return count_; }

 private:
  void accumulate_pair(const State& a, const State& b);

  Grid g_;
  ModelParams p_;
  WeakEquation which_;
  TestFunction phi_;
  VectorTestFunction vphi_;
  std::optional<State> prev_;
  int count_ = 0;
  double dt_ = 0.0;
  double sum_ = 0.0;
  double comp_ = 0.0;     // Neumaier carry for sum_
  double scale_ = 0.0;    // running max |phi| for the support check
  double last_t_ = 0.0;
};

/// Convenience wrapper: residual of a fully stored trajectory.
double weak_residual(const Grid& g, const std::vector<State>& trajectory,
                     const ModelParams& p, const TestFunction& phi,
                     WeakEquation which);
double weak_residual_momentum(const Grid& g,
                              const std::vector<State>& trajectory,
                              const ModelParams& p,
                              const VectorTestFunction& phi);

// ---------------------------------------------------------------------------
// CSV output: fixed column order
//   t, mass, c_max, c_min, n_max, entropy, psi_energy, kinetic,
//   combined_energy, d1..d4, A1..A7, floored_cells
// with 17 significant digits.
// ---------------------------------------------------------------------------

void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r);
void write_diagnostics_csv(std::ostream& os,
                           const std::vector<DiagnosticsRecord>& recs);

}  // namespace cnsfv
