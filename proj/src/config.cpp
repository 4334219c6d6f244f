#include "cnsfv/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cnsfv/errors.hpp"
#include "cnsfv/numerics.hpp"
#include "cnsfv/operators.hpp"

namespace cnsfv {

RunConfig::RunConfig() {
  model.phi_grad = {0.0, -0.1, 0.0};
  model.kinetics = kinetics_linear();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.dim == b.dim && a.nx == b.nx && a.ny == b.ny && a.nz == b.nz &&
         a.lx == b.lx && a.ly == b.ly && a.lz == b.lz && a.bc == b.bc &&
         a.model.m == b.model.m && a.model.a == b.model.a &&
         a.model.eps == b.model.eps && a.model.kappa == b.model.kappa &&
         a.model.phi_grad == b.model.phi_grad &&
         a.model.energy_weight == b.model.energy_weight &&
         a.model.c_floor == b.model.c_floor &&
         a.kinetics_name == b.kinetics_name && a.ic_preset == b.ic_preset &&
         a.blob_mass == b.blob_mass && a.blob_sigma == b.blob_sigma &&
         a.blob_center == b.blob_center && a.n_floor == b.n_floor &&
         a.c0 == b.c0 && a.perturb_amp == b.perturb_amp && a.seed == b.seed &&
         a.t_final == b.t_final && a.dt_policy == b.dt_policy && a.dt == b.dt &&
         a.safety == b.safety && a.max_steps == b.max_steps &&
         a.cadence == b.cadence &&
         a.solver.tol_project == b.solver.tol_project &&
         a.solver.tol_scalar == b.solver.tol_scalar &&
         a.solver.tol_helmholtz == b.solver.tol_helmholtz &&
         a.solver.max_iter == b.solver.max_iter &&
         a.snapshot_times == b.snapshot_times && a.out_dir == b.out_dir &&
         a.c_max_probe == b.c_max_probe &&
         a.n_probe_points == b.n_probe_points;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& v, int line) {
  std::size_t used = 0;
  double x;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) +
                      ": bad number '" + v + "'");
  }
  if (used != v.size())
    throw ConfigError("config line " + std::to_string(line) +
                      ": trailing junk in number '" + v + "'");
  return x;
}

long long parse_int(const std::string& v, int line) {
  std::size_t used = 0;
  long long x;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) +
                      ": bad integer '" + v + "'");
  }
  if (used != v.size())
    throw ConfigError("config line " + std::to_string(line) +
                      ": trailing junk in integer '" + v + "'");
  return x;
}

unsigned long long parse_uint(const std::string& v, int line) {
  std::size_t used = 0;
  unsigned long long x;
  try {
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    throw ConfigError("config line " + std::to_string(line) +
                      ": bad unsigned integer '" + v + "'");
  }
  if (used != v.size())
    throw ConfigError("config line " + std::to_string(line) +
                      ": trailing junk in integer '" + v + "'");
  return x;
}

std::vector<double> parse_double_list(const std::string& v, int line) {
  std::vector<double> out;
  std::string cur;
  std::stringstream ss(v);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (cur.empty()) continue;
    out.push_back(parse_double(cur, line));
  }
  return out;
}

void apply_key(RunConfig& c, const std::string& key, const std::string& val,
               int line) {
  if (key == "grid.dim") c.dim = static_cast<int>(parse_int(val, line));
  else if (key == "grid.nx") c.nx = static_cast<int>(parse_int(val, line));
  else if (key == "grid.ny") c.ny = static_cast<int>(parse_int(val, line));
  else if (key == "grid.nz") c.nz = static_cast<int>(parse_int(val, line));
  else if (key == "grid.lx") c.lx = parse_double(val, line);
  else if (key == "grid.ly") c.ly = parse_double(val, line);
  else if (key == "grid.lz") c.lz = parse_double(val, line);
  else if (key == "grid.bc") {
    if (val == "box") c.bc = BcMode::box;
    else if (val == "periodic") c.bc = BcMode::periodic;
    else
      throw ConfigError("config line " + std::to_string(line) +
                        ": grid.bc must be box or periodic");
  } else if (key == "model.m") c.model.m = parse_double(val, line);
  else if (key == "model.a") c.model.a = parse_double(val, line);
  else if (key == "model.eps") c.model.eps = parse_double(val, line);
  else if (key == "model.kappa") c.model.kappa = parse_double(val, line);
  else if (key == "model.phi_grad_x") c.model.phi_grad[0] = parse_double(val, line);
  else if (key == "model.phi_grad_y") c.model.phi_grad[1] = parse_double(val, line);
  else if (key == "model.phi_grad_z") c.model.phi_grad[2] = parse_double(val, line);
  else if (key == "model.energy_weight") c.model.energy_weight = parse_double(val, line);
  else if (key == "model.c_floor") c.model.c_floor = parse_double(val, line);
  else if (key == "model.kinetics") c.kinetics_name = val;
  else if (key == "ic.preset") c.ic_preset = val;
  else if (key == "ic.blob_mass") c.blob_mass = parse_double(val, line);
  else if (key == "ic.blob_sigma") c.blob_sigma = parse_double(val, line);
  else if (key == "ic.blob_center_x") c.blob_center[0] = parse_double(val, line);
  else if (key == "ic.blob_center_y") c.blob_center[1] = parse_double(val, line);
  else if (key == "ic.blob_center_z") c.blob_center[2] = parse_double(val, line);
  else if (key == "ic.n_floor") c.n_floor = parse_double(val, line);
  else if (key == "ic.c0") c.c0 = parse_double(val, line);
  else if (key == "ic.perturb_amp") c.perturb_amp = parse_double(val, line);
  else if (key == "ic.seed") {
    c.seed = parse_uint(val, line);
    c.seed_set = true;
  } else if (key == "time.t_final") c.t_final = parse_double(val, line);
  else if (key == "time.dt_policy") c.dt_policy = val;
  else if (key == "time.dt") c.dt = parse_double(val, line);
  else if (key == "time.safety") c.safety = parse_double(val, line);
  else if (key == "time.max_steps") c.max_steps = parse_int(val, line);
  else if (key == "diag.cadence") c.cadence = static_cast<int>(parse_int(val, line));
  else if (key == "solver.tol_project") c.solver.tol_project = parse_double(val, line);
  else if (key == "solver.tol_scalar") c.solver.tol_scalar = parse_double(val, line);
  else if (key == "solver.tol_helmholtz") c.solver.tol_helmholtz = parse_double(val, line);
  else if (key == "solver.max_iter") c.solver.max_iter = static_cast<int>(parse_int(val, line));
  else if (key == "snapshot.times") c.snapshot_times = parse_double_list(val, line);
  else if (key == "out.dir") c.out_dir = val;
  else if (key == "validate.c_max_probe") c.c_max_probe = parse_double(val, line);
  else if (key == "validate.n_probe_points") c.n_probe_points = static_cast<int>(parse_int(val, line));
  else
    throw ConfigError("config line " + std::to_string(line) +
                      ": unknown key '" + key + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    std::string s = raw;
    if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
    s = trim(s);
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line) +
                        ": expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("config line " + std::to_string(line) +
                        ": empty key or value");

    apply_key(c, key, val, line);
  }
  c.model.kinetics = kinetics_by_name(c.kinetics_name);
  require_valid(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "grid.dim = " << c.dim << '\n';
  os << "grid.nx = " << c.nx << '\n';
  os << "grid.ny = " << c.ny << '\n';
  os << "grid.nz = " << c.nz << '\n';
  os << "grid.lx = " << fmt(c.lx) << '\n';
  os << "grid.ly = " << fmt(c.ly) << '\n';
  os << "grid.lz = " << fmt(c.lz) << '\n';
  os << "grid.bc = " << to_string(c.bc) << '\n';
  os << "model.m = " << fmt(c.model.m) << '\n';
  os << "model.a = " << fmt(c.model.a) << '\n';
  os << "model.eps = " << fmt(c.model.eps) << '\n';
  os << "model.kappa = " << fmt(c.model.kappa) << '\n';
  os << "model.phi_grad_x = " << fmt(c.model.phi_grad[0]) << '\n';
  os << "model.phi_grad_y = " << fmt(c.model.phi_grad[1]) << '\n';
  os << "model.phi_grad_z = " << fmt(c.model.phi_grad[2]) << '\n';
  os << "model.energy_weight = " << fmt(c.model.energy_weight) << '\n';
  os << "model.c_floor = " << fmt(c.model.c_floor) << '\n';
  os << "model.kinetics = " << c.kinetics_name << '\n';
  os << "ic.preset = " << c.ic_preset << '\n';
  os << "ic.blob_mass = " << fmt(c.blob_mass) << '\n';
  os << "ic.blob_sigma = " << fmt(c.blob_sigma) << '\n';
  os << "ic.blob_center_x = " << fmt(c.blob_center[0]) << '\n';
  os << "ic.blob_center_y = " << fmt(c.blob_center[1]) << '\n';
  os << "ic.blob_center_z = " << fmt(c.blob_center[2]) << '\n';
  os << "ic.n_floor = " << fmt(c.n_floor) << '\n';
  os << "ic.c0 = " << fmt(c.c0) << '\n';
  os << "ic.perturb_amp = " << fmt(c.perturb_amp) << '\n';
  if (c.seed_set) os << "ic.seed = " << c.seed << '\n';
  os << "time.t_final = " << fmt(c.t_final) << '\n';
  os << "time.dt_policy = " << c.dt_policy << '\n';
  os << "time.dt = " << fmt(c.dt) << '\n';
  os << "time.safety = " << fmt(c.safety) << '\n';
  os << "time.max_steps = " << c.max_steps << '\n';
  os << "diag.cadence = " << c.cadence << '\n';
  os << "solver.tol_project = " << fmt(c.solver.tol_project) << '\n';
  os << "solver.tol_scalar = " << fmt(c.solver.tol_scalar) << '\n';
  os << "solver.tol_helmholtz = " << fmt(c.solver.tol_helmholtz) << '\n';
  os << "solver.max_iter = " << c.solver.max_iter << '\n';
  if (!c.snapshot_times.empty()) {
    os << "snapshot.times = ";
    for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
      if (i) os << ',';
      os << fmt(c.snapshot_times[i]);
    }
    os << '\n';
  }
  os << "out.dir = " << c.out_dir << '\n';
  os << "validate.c_max_probe = " << fmt(c.c_max_probe) << '\n';
  os << "validate.n_probe_points = " << c.n_probe_points << '\n';
  return os.str();
}

void save_config(const RunConfig& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  out << serialize_config(c);
}

void set_key(RunConfig& c, const std::string& key, const std::string& value) {
  const std::string k = trim(key);
  const std::string v = trim(value);
  if (k.empty() || v.empty()) throw ConfigError("set: empty key or value");
  apply_key(c, k, v, 0);
  if (k == "model.kinetics") c.model.kinetics = kinetics_by_name(c.kinetics_name);
}

std::string get_key(const RunConfig& c, const std::string& key) {
  const std::string k = trim(key);
  if (k == "grid.dim") return std::to_string(c.dim);
  if (k == "grid.nx") return std::to_string(c.nx);
  if (k == "grid.ny") return std::to_string(c.ny);
  if (k == "grid.nz") return std::to_string(c.nz);
  if (k == "grid.lx") return fmt(c.lx);
  if (k == "grid.ly") return fmt(c.ly);
  if (k == "grid.lz") return fmt(c.lz);
  if (k == "grid.bc") return to_string(c.bc);
  if (k == "model.m") return fmt(c.model.m);
  if (k == "model.a") return fmt(c.model.a);
  if (k == "model.eps") return fmt(c.model.eps);
  if (k == "model.kappa") return fmt(c.model.kappa);
  if (k == "model.phi_grad_x") return fmt(c.model.phi_grad[0]);
  if (k == "model.phi_grad_y") return fmt(c.model.phi_grad[1]);
  if (k == "model.phi_grad_z") return fmt(c.model.phi_grad[2]);
  if (k == "model.energy_weight") return fmt(c.model.energy_weight);
  if (k == "model.c_floor") return fmt(c.model.c_floor);
  if (k == "model.kinetics") return c.kinetics_name;
  if (k == "ic.preset") return c.ic_preset;
  if (k == "ic.blob_mass") return fmt(c.blob_mass);
  if (k == "ic.blob_sigma") return fmt(c.blob_sigma);
  if (k == "ic.blob_center_x") return fmt(c.blob_center[0]);
  if (k == "ic.blob_center_y") return fmt(c.blob_center[1]);
  if (k == "ic.blob_center_z") return fmt(c.blob_center[2]);
  if (k == "ic.n_floor") return fmt(c.n_floor);
  if (k == "ic.c0") return fmt(c.c0);
  if (k == "ic.perturb_amp") return fmt(c.perturb_amp);
  if (k == "ic.seed") return std::to_string(c.seed);
  if (k == "time.t_final") return fmt(c.t_final);
  if (k == "time.dt_policy") return c.dt_policy;
  if (k == "time.dt") return fmt(c.dt);
  if (k == "time.safety") return fmt(c.safety);
  if (k == "time.max_steps") return std::to_string(c.max_steps);
  if (k == "diag.cadence") return std::to_string(c.cadence);
  if (k == "solver.tol_project") return fmt(c.solver.tol_project);
  if (k == "solver.tol_scalar") return fmt(c.solver.tol_scalar);
  if (k == "solver.tol_helmholtz") return fmt(c.solver.tol_helmholtz);
  if (k == "solver.max_iter") return std::to_string(c.solver.max_iter);
  if (k == "snapshot.times") {
    std::string s;
    for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
      if (i) s += ',';
      s += fmt(c.snapshot_times[i]);
    }
    return s;
  }
  if (k == "out.dir") return c.out_dir;
  if (k == "validate.c_max_probe") return fmt(c.c_max_probe);
  if (k == "validate.n_probe_points") return std::to_string(c.n_probe_points);
  throw ConfigError("get: unknown key '" + k + "'");
}

void require_valid(const RunConfig& c) {
  if (c.dim != 2 && c.dim != 3)
    throw ConfigError("grid.dim must be 2 or 3");
  if (c.nx < 4 || c.ny < 4 || (c.dim == 3 && c.nz < 4))
    throw ConfigError("grid needs at least 4 cells per axis");
  if (!(c.lx > 0.0) || !(c.ly > 0.0) || (c.dim == 3 && !(c.lz > 0.0)))
    throw ConfigError("grid extents must be positive");
  c.model.require_valid();
  kinetics_by_name(c.kinetics_name);  // throws on unknown preset
  if (c.ic_preset != "gaussian-blob" && c.ic_preset != "stratified-c" &&
      c.ic_preset != "random-perturbation")
    throw ConfigError("unknown ic.preset '" + c.ic_preset + "'");
  if (!(c.blob_mass >= 0.0)) throw ConfigError("ic.blob_mass must be >= 0");
  if (!(c.blob_sigma > 0.0)) throw ConfigError("ic.blob_sigma must be > 0");
  if (!(c.n_floor > 0.0))
    throw ConfigError("ic.n_floor must be > 0 (initial density is positive)");
  if (!(c.c0 >= 0.0)) throw ConfigError("ic.c0 must be >= 0");
  if (!(c.perturb_amp >= 0.0) || !(c.perturb_amp < 1.0))
    throw ConfigError("ic.perturb_amp must lie in [0,1)");
  if (c.ic_preset == "random-perturbation" && !c.seed_set)
    throw ConfigError("ic.seed is mandatory for the random-perturbation preset");
  if (!(c.t_final > 0.0)) throw ConfigError("time.t_final must be > 0");
  if (c.dt_policy != "auto" && c.dt_policy != "fixed")
    throw ConfigError("time.dt_policy must be auto or fixed");
  if (c.dt_policy == "fixed" && !(c.dt > 0.0))
    throw ConfigError("time.dt must be > 0 for the fixed policy");
  if (!(c.safety > 0.0) || !(c.safety <= 1.0))
    throw ConfigError("time.safety must lie in (0,1]");
  if (c.max_steps < 0) throw ConfigError("time.max_steps must be >= 0");
  if (c.cadence < 1) throw ConfigError("diag.cadence must be >= 1");
  if (!(c.solver.tol_project > 0.0) || !(c.solver.tol_scalar > 0.0) ||
      !(c.solver.tol_helmholtz > 0.0))
    throw ConfigError("solver tolerances must be > 0");
  if (c.solver.max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
  for (double t : c.snapshot_times)
    if (!(t >= 0.0)) throw ConfigError("snapshot.times must be >= 0");
  if (!(c.c_max_probe > 0.0))
    throw ConfigError("validate.c_max_probe must be > 0");
  if (c.n_probe_points < 16)
    throw ConfigError("validate.n_probe_points must be >= 16");
}

Grid make_grid(const RunConfig& c) {
  if (c.dim == 2) return Grid::make_2d(c.nx, c.ny, c.lx, c.ly, c.bc);
  return Grid::make_3d(c.nx, c.ny, c.nz, c.lx, c.ly, c.lz, c.bc);
}

State initial_state(const Grid& g, const RunConfig& c) {
  require_valid(c);
  State s = State::zeros(g);

  // normalized gaussian bump: discrete integral of the bump part equals
  // blob_mass exactly, so total mass is blob_mass + n_floor*|domain|
  ScalarField bump = ScalarField::cell_centered(g);
  const double s2 = 2.0 * c.blob_sigma * c.blob_sigma;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        double r2 = 0.0;
        double xs[3] = {g.cell_center(0, i), g.cell_center(1, j),
                        g.dim == 3 ? g.cell_center(2, k) : 0.0};
        for (int a = 0; a < g.dim; ++a)
          r2 += (xs[a] - c.blob_center[a]) * (xs[a] - c.blob_center[a]);
        bump(i, j, k) = std::exp(-r2 / s2);
      }
  double raw = integrate_cells(g, bump);
  const double scale = raw > 0.0 ? c.blob_mass / raw : 0.0;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        s.n(i, j, k) = c.n_floor + scale * bump(i, j, k);

  if (c.ic_preset == "stratified-c") {
    // oxygen ramp along the last axis, thin at the bottom, c0 at the top
    const int axis = g.dim - 1;
    const double len = g.extent(axis);
    for (int k = 0; k < g.nz; ++k)
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          double x = g.cell_center(axis, axis == 0 ? i : axis == 1 ? j : k);
          s.c(i, j, k) = c.c0 * (0.05 + 0.95 * x / len);
        }
  } else {
    s.c.fill(c.c0);
  }

  if (c.ic_preset == "random-perturbation") {
    std::mt19937_64 rng(c.seed);
    for (double& v : s.n.data()) v *= 1.0 + c.perturb_amp * uniform_real(rng, -1.0, 1.0);
    for (double& v : s.c.data()) {
      v *= 1.0 + c.perturb_amp * uniform_real(rng, -1.0, 1.0);
      if (v < 0.0) v = 0.0;
    }
  }

  s.t = 0.0;
  return s;
}

}  // namespace cnsfv
