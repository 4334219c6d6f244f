#pragma once

#include <array>
#include <string>
#include <vector>

#include "cnsfv/fields.hpp"
#include "cnsfv/model.hpp"
#include "cnsfv/transport.hpp"

namespace cnsfv {

/// Full run description. File format: flat `key = value` lines with dotted
/// section prefixes, '#' comments, UTF-8. serialize_config() emits every key;
/// parse_config(serialize_config(c)) reproduces c exactly (doubles printed
/// with 17 significant digits).
struct RunConfig {
  // grid.*
  int dim = 2;
  int nx = 64, ny = 64, nz = 4;
  double lx = 1.0, ly = 1.0, lz = 1.0;
  BcMode bc = BcMode::box;

  // model.*  (kinetics resolved from kinetics_name)
  ModelParams model;
  std::string kinetics_name = "linear";

  // ic.*
  std::string ic_preset = "gaussian-blob";  // | stratified-c | random-perturbation
  double blob_mass = 1.0;
  double blob_sigma = 0.08;
  std::array<double, 3> blob_center = {0.5, 0.5, 0.5};
  double n_floor = 1e-3;
  double c0 = 1.0;
  double perturb_amp = 0.1;
  unsigned long long seed = 0;
  bool seed_set = false;  // random-perturbation demands an explicit seed

  // time.*
  double t_final = 1.0;
  std::string dt_policy = "auto";  // | fixed
  double dt = 1e-4;                // used by the fixed policy
  double safety = 0.4;             // CFL fraction for the auto policy
  long long max_steps = 0;         // 0 = no cap

  // diag.*
  int cadence = 10;  // record every this many steps

  // solver.*
  SolverOptions solver;

  // snapshot.*
  std::vector<double> snapshot_times;

  // out.*
  std::string out_dir = "out";

  // validate.*
  double c_max_probe = 2.0;
  int n_probe_points = 256;

  RunConfig();  // applies the default scenario (gravity (0,-0.1), linear kinetics)
};

bool operator==(const RunConfig& a, const RunConfig& b);
inline bool operator!=(const RunConfig& a, const RunConfig& b) {
  return !(a == b);
}

/// Parses config text; unknown keys, malformed values, and structural
/// violations raise ConfigError with the offending line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::string serialize_config(const RunConfig& c);
void save_config(const RunConfig& c, const std::string& path);

/// Assign one dotted key using the config-file grammar for its value.
/// No cross-field validation (callers validate when the config is complete);
/// unknown keys and malformed values throw ConfigError.
void set_key(RunConfig& c, const std::string& key, const std::string& value);
/// Read one key back in its serialized form. Unknown keys throw ConfigError.
std::string get_key(const RunConfig& c, const std::string& key);

/// Structural screening (presets exist, T_final > 0, tolerances > 0,
/// positivity of the initial floor, explicit seed for the random preset).
/// Throws ConfigError.
void require_valid(const RunConfig& c);

Grid make_grid(const RunConfig& c);

/// Builds the initial state of the configured preset on the grid:
/// n > 0 everywhere (floor + normalized blob), c >= 0, u = 0, t = 0.
State initial_state(const Grid& g, const RunConfig& c);

}  // namespace cnsfv
