#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace cnsfv {

/// Oxygen kinetics: sensitivity chi(c) and consumption rate f(c), plus the
/// derived ratio g = f/chi that drives the gradient-energy weight. Presets
/// may supply derivatives (used directly when present, finite differences
/// otherwise) and a closed form for the weight integral Psi.
struct KineticsPreset {
  std::string name;
  std::function<double(double)> chi;
  std::function<double(double)> f;
  std::function<double(double)> g;           // f/chi
  std::function<double(double)> g_prime;     // optional
  std::function<double(double)> g_second;    // optional
  std::function<double(double)> chif_prime;  // optional, (chi*f)'
  std::function<double(double)> lambda;      // f(c)/c continued by f'(0) at 0
  std::function<double(double)> psi_closed;  // optional closed-form Psi
};

/// chi = 1, f(c) = c.
KineticsPreset kinetics_linear();
/// chi = 1, f(c) = c/(1+c).
KineticsPreset kinetics_saturating();
/// Lookup by preset name ("linear" | "saturating"); throws ConfigError.
KineticsPreset kinetics_by_name(const std::string& name);

struct ModelParams {
  double m = 2.0;     // diffusion exponent, D(s) = a * s^(m-1)
  double a = 1.0;     // diffusion scale
  double eps = 1e-2;  // regularization strength
  double kappa = 1.0; // convection switch/strength in the momentum equation
  std::array<double, 3> phi_grad = {0.0, 0.0, 0.0};  // constant grad(Phi)
  double energy_weight = 1.0;  // K, weight of the kinetic term in the budget
  double c_floor = 1e-12;      // denominator floor for c-weighted integrals
  KineticsPreset kinetics = kinetics_linear();

  /// Cheap structural check used at operation entry (full assumption
  /// screening lives in validate_assumptions). Throws ConfigError.
  void require_valid() const;
};

/// Saturated cell mass F_eps(s) = log(1 + eps*s)/eps.
/// 0 <= F_eps(s) <= s, increasing in s, and F_eps(s) -> s as eps -> 0.
double F_eps(double eps, double s);

/// F_eps'(s) = 1/(1 + eps*s), in (0,1]; s * F_eps'(s) <= 1/eps.
double F_eps_prime(double eps, double s);

/// Regularized diffusion coefficient D_eps(s) = a*(s + eps)^(m-1).
double D_eps(const ModelParams& p, double s);

/// Psi(s) = integral from 1 to s of dq/sqrt(g(q)); closed form when supplied,
/// otherwise adaptive quadrature at 1e-10 relative tolerance. Requires
/// s >= c_floor > 0.
double psi(const KineticsPreset& kin, double s, double c_floor);

struct ValidationCheck {
  std::string id;
  std::string description;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool pass = false;
  std::string summary() const;
};

/// Screens the parameter set and kinetics against the structural assumptions
/// the dissipation estimates rest on: chi > 0 and smooth; f(0) = 0, f > 0 on
/// (0, c_max]; g = f/chi strictly increasing and concave; (chi*f)'
/// non-decreasing; m >= 2/3; a > 0; eps in (0,1); K >= 1. Derivative
/// conditions are sampled on an equispaced grid over (0, c_max_probe].
/// Violations are reported, not thrown.
ValidationReport validate_assumptions(const ModelParams& p,
                                      double c_max_probe = 2.0,
                                      int n_probe_points = 256);

}  // namespace cnsfv
