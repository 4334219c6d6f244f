#include "cnsfv.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cnsfv/config.hpp"
#include "cnsfv/diagnostics.hpp"
#include "cnsfv/errors.hpp"
#include "cnsfv/fields.hpp"
#include "cnsfv/fluid.hpp"
#include "cnsfv/harness.hpp"
#include "cnsfv/operators.hpp"
#include "cnsfv/transport.hpp"

struct cns_config {
  cnsfv::RunConfig c;
};

struct cns_sim {
  cnsfv::RunConfig cfg;
  cnsfv::Grid g;
  cnsfv::State s;
  cnsfv::FluidWorkspace ws;
  std::optional<cnsfv::DiagnosticsRecord> prev;  // accumulator continuity
  double div_inf = 0.0;                          // last post-projection value
  long long steps = 0;
};

namespace {

thread_local std::string t_last_error;

const char* kVersion = "1.0.0";

void set_error(const std::string& msg) { t_last_error = msg; }

template <typename Fn>
cns_status guarded(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return CNS_OK;
  } catch (const cnsfv::ConfigError& e) {
    set_error(e.what());
    return CNS_ERROR_CONFIG;
  } catch (const cnsfv::InvariantError& e) {
    set_error(e.what());
    return CNS_ERROR_INVARIANT;
  } catch (const cnsfv::SolverError& e) {
    set_error(e.what());
    return CNS_ERROR_SOLVER;
  } catch (const cnsfv::IoError& e) {
    set_error(e.what());
    return CNS_ERROR_IO;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return CNS_ERROR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return CNS_ERROR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return CNS_ERROR_INTERNAL;
  }
}

cns_status fail_invalid(const std::string& msg) {
  set_error(msg);
  return CNS_ERROR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) return nullptr;
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// out_dir semantics shared by cns_run / cns_eps_study: NULL keeps the
// config's own directory, "" disables writing.
bool resolve_out(const char* out_dir, cnsfv::RunConfig& cfg) {
  if (out_dir == nullptr) return true;
  if (*out_dir == '\0') return false;
  cfg.out_dir = out_dir;
  return true;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cnsfv::IoError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

extern "C" {

const char* cns_last_error(void) { return t_last_error.c_str(); }

const char* cns_version(void) { return kVersion; }

void cns_free(char* p) { std::free(p); }

cns_config* cns_config_create(void) {
  return new (std::nothrow) cns_config{};
}

cns_status cns_config_load(const char* path, cns_config** out) {
  if (!path || !out) return fail_invalid("cns_config_load: NULL argument");
  *out = nullptr;
  return guarded([&] {
    auto* h = new cns_config{cnsfv::load_config(path)};
    *out = h;
  });
}

cns_status cns_config_parse(const char* text, cns_config** out) {
  if (!text || !out) return fail_invalid("cns_config_parse: NULL argument");
  *out = nullptr;
  return guarded([&] {
    auto* h = new cns_config{cnsfv::parse_config(text)};
    *out = h;
  });
}

cns_status cns_config_set(cns_config* cfg, const char* key,
                          const char* value) {
  if (!cfg || !key || !value)
    return fail_invalid("cns_config_set: NULL argument");
  return guarded([&] { cnsfv::set_key(cfg->c, key, value); });
}

cns_status cns_config_get(const cns_config* cfg, const char* key,
                          char** value_out) {
  if (!cfg || !key || !value_out)
    return fail_invalid("cns_config_get: NULL argument");
  *value_out = nullptr;
  return guarded([&] {
    std::string v = cnsfv::get_key(cfg->c, key);
    *value_out = dup_string(v);
    if (!*value_out) throw std::bad_alloc();
  });
}

cns_status cns_config_serialize(const cns_config* cfg, char** text_out) {
  if (!cfg || !text_out)
    return fail_invalid("cns_config_serialize: NULL argument");
  *text_out = nullptr;
  return guarded([&] {
    *text_out = dup_string(cnsfv::serialize_config(cfg->c));
    if (!*text_out) throw std::bad_alloc();
  });
}

cns_status cns_config_save(const cns_config* cfg, const char* path) {
  if (!cfg || !path) return fail_invalid("cns_config_save: NULL argument");
  return guarded([&] { cnsfv::save_config(cfg->c, path); });
}

void cns_config_destroy(cns_config* cfg) { delete cfg; }

cns_status cns_validate(const cns_config* cfg, char** report_out,
                        int* pass_out) {
  if (!cfg || !pass_out) return fail_invalid("cns_validate: NULL argument");
  if (report_out) *report_out = nullptr;
  return guarded([&] {
    cnsfv::require_valid(cfg->c);
    cnsfv::ValidationReport vr = cnsfv::validate_assumptions(
        cfg->c.model, cfg->c.c_max_probe, cfg->c.n_probe_points);
    *pass_out = vr.pass ? 1 : 0;
    if (report_out) {
      *report_out = dup_string(vr.summary());
      if (!*report_out) throw std::bad_alloc();
    }
  });
}

cns_status cns_run(const cns_config* cfg, const char* out_dir,
                   char** summary_out) {
  if (!cfg) return fail_invalid("cns_run: NULL config");
  if (summary_out) *summary_out = nullptr;
  return guarded([&] {
    cnsfv::RunConfig c = cfg->c;
    const bool write = resolve_out(out_dir, c);
    cnsfv::RunSummary rs = cnsfv::run(c, write);
    if (summary_out) {
      const cnsfv::DiagnosticsRecord& last = rs.records.back();
      std::ostringstream os;
      os << "steps = " << rs.steps << '\n';
      os << "final_time = " << fmt17(rs.final_state.t) << '\n';
      os << "records = " << rs.records.size() << '\n';
      os << "mass = " << fmt17(last.mass) << '\n';
      os << "mass_drift = " << fmt17(rs.mass_drift) << '\n';
      os << "max_div = " << fmt17(rs.max_div) << '\n';
      os << "c_max = " << fmt17(last.c_max) << '\n';
      os << "combined_energy = " << fmt17(last.combined_energy) << '\n';
      if (!rs.csv_path.empty()) os << "csv = " << rs.csv_path << '\n';
      *summary_out = dup_string(os.str());
      if (!*summary_out) throw std::bad_alloc();
    }
  });
}

cns_status cns_eps_study(const cns_config* cfg, const double* eps, int n_eps,
                         const char* out_dir, char** report_out,
                         int* pass_out) {
  if (!cfg || !eps || n_eps <= 0)
    return fail_invalid("cns_eps_study: NULL or empty input");
  if (report_out) *report_out = nullptr;
  return guarded([&] {
    cnsfv::RunConfig c = cfg->c;
    const bool write = resolve_out(out_dir, c);
    std::vector<double> eps_list(eps, eps + n_eps);
    cnsfv::EpsStudyResult r = cnsfv::eps_study(c, eps_list, 2.0, write);
    if (pass_out) *pass_out = r.pass ? 1 : 0;

    std::ostringstream table;
    table << "eps,mass,c_max,a1,a2,a3,a4,a5,a6,a7\n";
    for (std::size_t i = 0; i < r.eps_values.size(); ++i) {
      const cnsfv::DiagnosticsRecord& rec = r.final_records[i];
      table << fmt17(r.eps_values[i]) << ',' << fmt17(rec.mass) << ','
            << fmt17(rec.c_max) << ',' << fmt17(rec.a1) << ','
            << fmt17(rec.a2) << ',' << fmt17(rec.a3) << ',' << fmt17(rec.a4)
            << ',' << fmt17(rec.a5) << ',' << fmt17(rec.a6) << ','
            << fmt17(rec.a7) << '\n';
    }
    if (write) {
      std::filesystem::create_directories(c.out_dir);
      write_text_file(
          (std::filesystem::path(c.out_dir) / "eps_study.csv").string(),
          table.str());
    }

    if (report_out) {
      std::ostringstream os;
      os << table.str();
      auto list = [&os](const char* label, const std::vector<double>& v) {
        os << label;
        for (std::size_t i = 0; i < v.size(); ++i)
          os << (i ? "," : " ") << fmt17(v[i]);
        os << '\n';
      };
      list("distance_n_l1 =", r.n_distance_l1);
      list("distance_c_l2 =", r.c_distance_l2);
      list("distance_u_l2 =", r.u_distance_l2);
      os << "accumulators_bounded = "
         << (r.accumulators_bounded ? "yes" : "no") << '\n';
      os << "distances_nonincreasing = "
         << (r.distances_nonincreasing ? "yes" : "no") << '\n';
      os << (r.pass ? "PASS" : "FAIL") << '\n';
      *report_out = dup_string(os.str());
      if (!*report_out) throw std::bad_alloc();
    }
  });
}

cns_status cns_mms_study(const int* sizes, int n_sizes, const char* out_dir,
                         char** report_out, int* pass_out) {
  if (!sizes || n_sizes <= 0)
    return fail_invalid("cns_mms_study: NULL or empty sizes");
  if (report_out) *report_out = nullptr;
  return guarded([&] {
    std::vector<int> sz(sizes, sizes + n_sizes);
    cnsfv::MmsTable t = cnsfv::mms_validate(sz);
    if (pass_out) *pass_out = t.pass ? 1 : 0;

    std::ostringstream table;
    table << "size,h,dt_signal,err_signal,order_signal,dt_density,"
             "err_density,order_density\n";
    for (const cnsfv::MmsRow& row : t.rows)
      table << row.size << ',' << fmt17(row.h) << ',' << fmt17(row.dt_signal)
            << ',' << fmt17(row.err_signal) << ',' << fmt17(row.order_signal)
            << ',' << fmt17(row.dt_density) << ',' << fmt17(row.err_density)
            << ',' << fmt17(row.order_density) << '\n';
    if (out_dir && *out_dir) {
      std::filesystem::create_directories(out_dir);
      write_text_file((std::filesystem::path(out_dir) / "mms.csv").string(),
                      table.str());
    }
    if (report_out) {
      std::ostringstream os;
      os << table.str() << t.message << '\n'
         << (t.pass ? "PASS" : "FAIL") << '\n';
      *report_out = dup_string(os.str());
      if (!*report_out) throw std::bad_alloc();
    }
  });
}

cns_status cns_barenblatt_study(double m, const int* sizes, int n_sizes,
                                const char* out_dir, char** report_out,
                                int* pass_out) {
  if (!sizes || n_sizes <= 0)
    return fail_invalid("cns_barenblatt_study: NULL or empty sizes");
  if (report_out) *report_out = nullptr;
  return guarded([&] {
    std::vector<int> sz(sizes, sizes + n_sizes);
    cnsfv::BarenblattTable t = cnsfv::barenblatt_validate(sz, m);
    if (pass_out) *pass_out = t.pass ? 1 : 0;

    std::ostringstream table;
    table << "size,h,dt,err_l1,order,mass,mass_drift\n";
    for (const cnsfv::BarenblattRow& row : t.rows)
      table << row.size << ',' << fmt17(row.h) << ',' << fmt17(row.dt) << ','
            << fmt17(row.err_l1) << ',' << fmt17(row.order) << ','
            << fmt17(row.mass) << ',' << fmt17(row.mass_drift) << '\n';
    if (out_dir && *out_dir) {
      std::filesystem::create_directories(out_dir);
      write_text_file(
          (std::filesystem::path(out_dir) / "barenblatt.csv").string(),
          table.str());
    }
    if (report_out) {
      std::ostringstream os;
      os << table.str() << t.message << '\n'
         << (t.pass ? "PASS" : "FAIL") << '\n';
      *report_out = dup_string(os.str());
      if (!*report_out) throw std::bad_alloc();
    }
  });
}

cns_status cns_sim_create(const cns_config* cfg, cns_sim** out) {
  if (!cfg || !out) return fail_invalid("cns_sim_create: NULL argument");
  *out = nullptr;
  return guarded([&] {
    cnsfv::require_valid(cfg->c);
    cnsfv::ValidationReport vr = cnsfv::validate_assumptions(
        cfg->c.model, cfg->c.c_max_probe, cfg->c.n_probe_points);
    if (!vr.pass)
      throw cnsfv::ConfigError("model assumptions failed screening:\n" +
                               vr.summary());
    auto* sim = new cns_sim{cfg->c, cnsfv::make_grid(cfg->c), {}, {}, {}, 0.0,
                            0};
    sim->s = cnsfv::initial_state(sim->g, cfg->c);
    *out = sim;
  });
}

cns_status cns_sim_step(cns_sim* sim, double dt) {
  if (!sim) return fail_invalid("cns_sim_step: NULL handle");
  return guarded([&] {
    double h = dt > 0.0 ? dt
                        : cnsfv::auto_dt(sim->g, sim->s, sim->cfg.model,
                                         sim->cfg.safety);
    cnsfv::FluidStepReport fr;
    cnsfv::ScalarField pressure;
    sim->s.u = cnsfv::fluid_step(sim->g, sim->s, sim->cfg.model, h,
                                 sim->cfg.solver, &pressure, &fr, &sim->ws);
    sim->s.p = pressure;
    sim->s.c = cnsfv::update_c(sim->g, sim->s, sim->cfg.model, h,
                               sim->cfg.solver);
    sim->s.n = cnsfv::update_n(sim->g, sim->s, sim->cfg.model, h);
    sim->s.t += h;
    sim->div_inf = fr.div_inf;
    ++sim->steps;
  });
}

cns_status cns_sim_advance(cns_sim* sim, double t_target) {
  if (!sim) return fail_invalid("cns_sim_advance: NULL handle");
  return guarded([&] {
    const double tol = 1e-12 * std::max(1.0, std::abs(t_target));
    while (sim->s.t < t_target - tol) {
      double h =
          cnsfv::auto_dt(sim->g, sim->s, sim->cfg.model, sim->cfg.safety);
      if (sim->s.t + h > t_target) h = t_target - sim->s.t;
      cnsfv::FluidStepReport fr;
      cnsfv::ScalarField pressure;
      sim->s.u = cnsfv::fluid_step(sim->g, sim->s, sim->cfg.model, h,
                                   sim->cfg.solver, &pressure, &fr, &sim->ws);
      sim->s.p = pressure;
      sim->s.c = cnsfv::update_c(sim->g, sim->s, sim->cfg.model, h,
                                 sim->cfg.solver);
      sim->s.n = cnsfv::update_n(sim->g, sim->s, sim->cfg.model, h);
      sim->s.t += h;
      sim->div_inf = fr.div_inf;
      ++sim->steps;
    }
  });
}

double cns_sim_time(const cns_sim* sim) { return sim ? sim->s.t : 0.0; }

cns_status cns_sim_get_scalar(const cns_sim* sim, const char* name,
                              double* out) {
  if (!sim || !name || !out)
    return fail_invalid("cns_sim_get_scalar: NULL argument");
  return guarded([&] {
    const std::string k = name;
    if (k == "t") {
      *out = sim->s.t;
      return;
    }
    if (k == "div_inf") {
      *out = cnsfv::max_abs_cells(cnsfv::divergence(sim->g, sim->s.u));
      return;
    }
    if (k == "n_min" || k == "c_min_raw") {
      const cnsfv::ScalarField& f = k == "n_min" ? sim->s.n : sim->s.c;
      double mn = f.data()[0];
      for (double v : f.data()) mn = std::min(mn, v);
      *out = mn;
      return;
    }
    cnsfv::DiagnosticsRecord r =
        cnsfv::evaluate(sim->g, sim->s, sim->cfg.model, nullptr);
    if (k == "mass") *out = r.mass;
    else if (k == "n_max") *out = r.n_max;
    else if (k == "c_max") *out = r.c_max;
    else if (k == "c_min") *out = r.c_min;
    else if (k == "entropy") *out = r.entropy;
    else if (k == "psi_energy") *out = r.psi_energy;
    else if (k == "kinetic") *out = r.kinetic;
    else if (k == "combined_energy") *out = r.combined_energy;
    else if (k == "d1") *out = r.d1;
    else if (k == "d2") *out = r.d2;
    else if (k == "d3") *out = r.d3;
    else if (k == "d4") *out = r.d4;
    else
      throw std::invalid_argument("cns_sim_get_scalar: unknown name '" + k +
                                  "'");
  });
}

const char* cns_diagnostics_header(void) {
  static const std::string header = [] {
    std::ostringstream os;
    cnsfv::write_diagnostics_header(os);
    std::string s = os.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
  }();
  return header.c_str();
}

cns_status cns_sim_diagnostics_csv(cns_sim* sim, char** row_out) {
  if (!sim || !row_out)
    return fail_invalid("cns_sim_diagnostics_csv: NULL argument");
  *row_out = nullptr;
  return guarded([&] {
    cnsfv::DiagnosticsRecord r =
        cnsfv::evaluate(sim->g, sim->s, sim->cfg.model,
                        sim->prev ? &*sim->prev : nullptr);
    sim->prev = r;
    std::ostringstream os;
    cnsfv::write_diagnostics_row(os, r);
    std::string s = os.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    *row_out = dup_string(s);
    if (!*row_out) throw std::bad_alloc();
  });
}

void cns_sim_destroy(cns_sim* sim) { delete sim; }

}  // extern "C"
