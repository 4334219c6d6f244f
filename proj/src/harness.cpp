#include "cnsfv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "cnsfv/errors.hpp"
#include "cnsfv/fluid.hpp"
#include "cnsfv/operators.hpp"
#include "cnsfv/reference.hpp"
#include "cnsfv/snapshot.hpp"

namespace cnsfv {

namespace {

constexpr double kMassDriftTol = 1e-12;       // relative, per record
constexpr double kCmaxRiseTol = 1e-12;        // absolute, per record
constexpr double kPositivityFraction = 0.9;   // of the donor-cell bound

double linf_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i)
    m = std::max(m, std::abs(da[i] - db[i]));
  return m;
}

}  // namespace

double auto_dt(const Grid& g, const State& s, const ModelParams& p,
               double safety) {
  double dt = cfl_dt(g, s, p, safety);
  dt = std::min(dt, kPositivityFraction * positivity_dt_bound(g, s, p));
  if (p.kappa != 0.0) {
    for (int a = 0; a < g.dim; ++a) {
      double v = std::abs(p.kappa) * max_abs_face(g, s.u, a);
      if (v > 0.0) dt = std::min(dt, safety * g.spacing(a) / v);
    }
  }
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw InvariantError("auto dt policy produced a non-positive step");
  return dt;
}

RunSummary run(const RunConfig& cfg, bool write_output) {
  require_valid(cfg);
  ValidationReport vr =
      validate_assumptions(cfg.model, cfg.c_max_probe, cfg.n_probe_points);
  if (!vr.pass)
    throw ConfigError("model assumptions failed screening:\n" + vr.summary());

  Grid g = make_grid(cfg);
  State s = initial_state(g, cfg);

  RunSummary out;
  std::ofstream csv;
  if (write_output) {
    std::filesystem::create_directories(cfg.out_dir);
    out.csv_path =
        (std::filesystem::path(cfg.out_dir) / "diagnostics.csv").string();
    csv.open(out.csv_path, std::ios::binary);
    if (!csv) throw IoError("run: cannot open '" + out.csv_path + "'");
    write_diagnostics_header(csv);
  }

  std::vector<double> snaps = cfg.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t snap_next = 0;
  int snap_count = 0;
  auto maybe_snapshot = [&](const State& st) {
    while (snap_next < snaps.size() && st.t >= snaps[snap_next] - 1e-12) {
      if (write_output) {
        const std::string stem =
            (std::filesystem::path(cfg.out_dir) /
             ("snap_" + std::to_string(snap_count)))
                .string();
        write_snapshot(stem + "_n.cfx", g, st.n, st.t, "n", "cell_density");
        write_snapshot(stem + "_c.cfx", g, st.c, st.t, "c", "oxygen");
        write_snapshot(stem + "_p.cfx", g, st.p, st.t, "p", "pressure");
        const char* unames[3] = {"ux", "uy", "uz"};
        const char* uroles[3] = {"velocity_x", "velocity_y", "velocity_z"};
        for (int a = 0; a < g.dim; ++a)
          write_snapshot(stem + "_" + unames[a] + ".cfx", g, st.u.comp(a),
                         st.t, unames[a], uroles[a]);
      }
      ++snap_next;
      ++snap_count;
    }
  };

  DiagnosticsRecord rec = evaluate(g, s, cfg.model, nullptr);
  out.records.push_back(rec);
  if (csv.is_open()) {
    write_diagnostics_row(csv, rec);
    csv.flush();
  }
  maybe_snapshot(s);

  const double mass0 = rec.mass;
  double prev_cmax = rec.c_max;

  FluidWorkspace ws;
  long long step = 0;
  try {
    while (s.t < cfg.t_final - 1e-12 * cfg.t_final &&
           (cfg.max_steps == 0 || step < cfg.max_steps)) {
      double dt = cfg.dt_policy == "fixed"
                      ? cfg.dt
                      : auto_dt(g, s, cfg.model, cfg.safety);
      if (s.t + dt > cfg.t_final) dt = cfg.t_final - s.t;

      FluidStepReport fr;
      ScalarField pressure;
      s.u = fluid_step(g, s, cfg.model, dt, cfg.solver, &pressure, &fr, &ws);
      s.p = pressure;
      s.c = update_c(g, s, cfg.model, dt, cfg.solver);
      s.n = update_n(g, s, cfg.model, dt);
      s.t += dt;
      ++step;

      out.max_div = std::max(out.max_div, fr.div_inf);

      const bool done = !(s.t < cfg.t_final - 1e-12 * cfg.t_final) ||
                        (cfg.max_steps != 0 && step >= cfg.max_steps);
      if (step % cfg.cadence == 0 || done) {
        DiagnosticsRecord r2 = evaluate(g, s, cfg.model, &out.records.back());
        double drift = std::abs(r2.mass - mass0) /
                       std::max(std::abs(mass0), 1e-300);
        out.mass_drift = std::max(out.mass_drift, drift);
        if (drift > kMassDriftTol)
          throw InvariantError(
              "mass drift " + std::to_string(drift) + " beyond 1e-12 relative",
              step);
        if (r2.c_max > prev_cmax + kCmaxRiseTol)
          throw InvariantError("c_max rose beyond the 1e-12 tolerance", step);
        prev_cmax = r2.c_max;
        out.records.push_back(r2);
        if (csv.is_open()) {
          write_diagnostics_row(csv, r2);
          csv.flush();
        }
      }
      maybe_snapshot(s);
    }
  } catch (const InvariantError& e) {
    if (csv.is_open()) csv.flush();
    if (e.step >= 0) throw;
    throw InvariantError(
        std::string(e.what()) + " (step " + std::to_string(step + 1) + ")",
        step + 1);
  } catch (const SolverError& e) {
    if (csv.is_open()) csv.flush();
    throw SolverError(
        std::string(e.what()) + " (step " + std::to_string(step + 1) + ")",
        e.iterations, e.residual);
  } catch (...) {
    if (csv.is_open()) csv.flush();
    throw;
  }

  out.steps = step;
  out.final_state = std::move(s);
  return out;
}

EpsStudyResult eps_study(const RunConfig& cfg,
                         const std::vector<double>& eps_list,
                         double bound_ratio, bool write_output) {
  if (eps_list.size() < 3)
    throw ConfigError("eps study needs at least 3 values");
  for (double e : eps_list)
    if (!(e > 0.0) || !(e < 1.0))
      throw ConfigError("eps study values must lie in (0,1)");
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (eps_list[i + 1] > eps_list[i])
      throw ConfigError("eps study sequence must be non-increasing");
  if (!(bound_ratio >= 1.0))
    throw ConfigError("eps study bound ratio must be >= 1");

  EpsStudyResult res;
  res.eps_values = eps_list;
  Grid g = make_grid(cfg);

  std::vector<State> finals;
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    RunConfig c2 = cfg;
    c2.model.eps = eps_list[i];
    if (write_output)
      c2.out_dir = (std::filesystem::path(cfg.out_dir) /
                    ("eps_" + std::to_string(i)))
                       .string();
    RunSummary rs = run(c2, write_output);
    finals.push_back(std::move(rs.final_state));
    res.final_records.push_back(rs.records.back());
    res.max_div = std::max(res.max_div, rs.max_div);
  }

  for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
    res.n_distance_l1.push_back(l1_diff_cells(g, finals[i].n, finals[i + 1].n));
    res.c_distance_l2.push_back(l2_diff_cells(g, finals[i].c, finals[i + 1].c));
    res.u_distance_l2.push_back(l2_diff_faces(g, finals[i].u, finals[i + 1].u));
  }

  auto acc_of = [](const DiagnosticsRecord& r, int j) {
    const double v[7] = {r.a1, r.a2, r.a3, r.a4, r.a5, r.a6, r.a7};
    return v[j];
  };
  bool bounded = true;
  for (int j = 0; j < 7; ++j) {
    std::vector<double> v;
    for (const DiagnosticsRecord& r : res.final_records)
      v.push_back(acc_of(r, j));
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    double med = n % 2 ? sorted[n / 2]
                       : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    res.sup_accumulators[j] = sorted.back();
    if (j < 3) {
      // the eps-uniform trio: every value within bound_ratio of the median
      const double slack = 1e-14 * (1.0 + med);
      for (double x : v)
        if (!(x <= bound_ratio * med + slack &&
              x + slack >= med / bound_ratio))
          bounded = false;
    }
  }
  res.accumulators_bounded = bounded;

  bool finite = true;
  auto nonincreasing = [&](const std::vector<double>& d) {
    bool ok = true;
    for (double x : d)
      if (!std::isfinite(x)) finite = false;
    for (std::size_t i = 0; i + 1 < d.size(); ++i)
      if (d[i + 1] > d[i] + 1e-14 * (1.0 + d[i])) ok = false;
    return ok;
  };
  res.distances_nonincreasing = nonincreasing(res.n_distance_l1) &&
                                nonincreasing(res.c_distance_l2) &&
                                nonincreasing(res.u_distance_l2);
  res.pass = res.accumulators_bounded && res.distances_nonincreasing && finite;
  return res;
}

MmsTable mms_validate(const std::vector<int>& sizes) {
  if (sizes.size() < 3) throw ConfigError("mms needs at least 3 sizes");
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
    if (sizes[i + 1] != 2 * sizes[i])
      throw ConfigError("mms sizes must form a doubling chain");

  HeatNeumannSolution series;
  series.mean = 1.0;
  series.modes = {{0.4, 1, 0, 0}, {0.2, 2, 1, 0}};
  const double T = 0.05;

  MmsTable tab;
  for (int nsize : sizes) {
    Grid g = Grid::make_2d(nsize, nsize, 1.0, 1.0, BcMode::box);
    MmsRow row;
    row.size = nsize;
    row.h = g.hx;

    {
      ModelParams p;
      SolverOptions opt;
      long long steps =
          static_cast<long long>(0.8 * T * nsize * nsize) + 1;
      double dt = T / static_cast<double>(steps);
      row.dt_signal = dt;
      State s = State::zeros(g);
      s.c = series.evaluate(g, 0.0);
      for (long long k = 0; k < steps; ++k) {
        s.c = update_c(g, s, p, dt, opt);
        s.t += dt;
      }
      row.err_signal = linf_diff(s.c, series.evaluate(g, T));
    }

    {
      ModelParams p;
      p.m = 1.0;  // constant unit diffusivity
      p.a = 1.0;
      long long steps =
          static_cast<long long>(std::ceil(5.0 * T * nsize * nsize));
      double dt = T / static_cast<double>(steps);
      row.dt_density = dt;
      State s = State::zeros(g);
      s.n = series.evaluate(g, 0.0);
      for (long long k = 0; k < steps; ++k) {
        s.n = update_n(g, s, p, dt);
        s.t += dt;
      }
      row.err_density = linf_diff(s.n, series.evaluate(g, T));
    }

    if (!tab.rows.empty()) {
      const MmsRow& prev = tab.rows.back();
      row.order_signal = std::log2(prev.err_signal / row.err_signal);
      row.order_density = std::log2(prev.err_density / row.err_density);
    }
    tab.rows.push_back(row);
  }

  tab.pass = true;
  for (std::size_t i = 1; i < tab.rows.size(); ++i)
    if (tab.rows[i].order_signal < 1.8 || tab.rows[i].order_density < 1.8)
      tab.pass = false;
  tab.message = tab.pass ? "observed spatial order >= 1.8 on both heat paths"
                         : "observed order below 1.8";
  return tab;
}

BarenblattTable barenblatt_validate(const std::vector<int>& sizes, double m) {
  if (sizes.size() < 2)
    throw ConfigError("barenblatt needs at least 2 sizes");
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
    if (sizes[i + 1] <= sizes[i])
      throw ConfigError("barenblatt sizes must increase");
  if (!(m > 1.0)) throw ConfigError("barenblatt needs m > 1");

  const double t0 = 1e-3, t1 = 4e-3;
  BarenblattSolution sol(m, 1.0, 1.0, 2, {0.5, 0.5, 0.0});

  BarenblattTable tab;
  for (int nsize : sizes) {
    Grid g = Grid::make_2d(nsize, nsize, 1.0, 1.0, BcMode::box);
    ModelParams p;
    p.m = m;
    p.a = 1.0;
    p.eps = 1e-6;

    State s = State::zeros(g);
    s.n = sol.evaluate(g, t0);
    s.t = t0;
    const double mass_init = integrate_cells(g, s.n);

    const double dmax = D_eps(p, max_cells(s.n));
    const double stab =
        1.0 / (2.0 * dmax * (1.0 / (g.hx * g.hx) + 1.0 / (g.hy * g.hy)));
    long long steps =
        static_cast<long long>(std::ceil((t1 - t0) / (0.5 * stab)));
    double dt = (t1 - t0) / static_cast<double>(steps);

    for (long long k = 0; k < steps; ++k) {
      s.n = update_n(g, s, p, dt);
      s.t += dt;
    }

    BarenblattRow row;
    row.size = nsize;
    row.h = g.hx;
    row.dt = dt;
    row.err_l1 = l1_diff_cells(g, s.n, sol.evaluate(g, t1));
    row.mass = integrate_cells(g, s.n);
    row.mass_drift = std::abs(row.mass - mass_init) / mass_init;
    if (!tab.rows.empty()) {
      const BarenblattRow& prev = tab.rows.back();
      row.order = std::log(prev.err_l1 / row.err_l1) /
                  std::log(static_cast<double>(nsize) / prev.size);
    }
    tab.rows.push_back(row);
  }

  tab.pass = true;
  for (std::size_t i = 0; i < tab.rows.size(); ++i) {
    if (tab.rows[i].mass_drift > 1e-12) tab.pass = false;
    if (i > 0 && !(tab.rows[i].err_l1 < tab.rows[i - 1].err_l1))
      tab.pass = false;
    if (i > 0 && tab.rows[i].order < 0.8) tab.pass = false;
  }
  tab.message = tab.pass
                    ? "L1 error decreasing with order >= 0.8, mass conserved"
                    : "free-boundary convergence check failed";
  return tab;
}

}  // namespace cnsfv
