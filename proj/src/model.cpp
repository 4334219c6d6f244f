#include "cnsfv/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cnsfv/errors.hpp"
#include "cnsfv/numerics.hpp"

namespace cnsfv {

KineticsPreset kinetics_linear() {
  KineticsPreset k;
  k.name = "linear";
  k.chi = [](double) { return 1.0; };
  k.f = [](double c) { return c; };
  k.g = [](double c) { return c; };
  k.g_prime = [](double) { return 1.0; };
  k.g_second = [](double) { return 0.0; };
  k.chif_prime = [](double) { return 1.0; };
  k.lambda = [](double) { return 1.0; };
  k.psi_closed = [](double s) { return 2.0 * (std::sqrt(s) - 1.0); };
  return k;
}

KineticsPreset kinetics_saturating() {
  KineticsPreset k;
  k.name = "saturating";
  k.chi = [](double) { return 1.0; };
  k.f = [](double c) { return c / (1.0 + c); };
  k.g = [](double c) { return c / (1.0 + c); };
  k.g_prime = [](double c) { double t = 1.0 + c; return 1.0 / (t * t); };
  k.g_second = [](double c) { double t = 1.0 + c; return -2.0 / (t * t * t); };
  k.chif_prime = [](double c) { double t = 1.0 + c; return 1.0 / (t * t); };
  k.lambda = [](double c) { return 1.0 / (1.0 + c); };
  return k;
}

KineticsPreset kinetics_by_name(const std::string& name) {
  if (name == "linear") return kinetics_linear();
  if (name == "saturating") return kinetics_saturating();
  throw ConfigError("unknown kinetics preset '" + name + "'");
}

void ModelParams::require_valid() const {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw ConfigError("model: eps must lie in (0,1)");
  if (!(m >= 2.0 / 3.0)) throw ConfigError("model: m must be >= 2/3");
  if (!(a > 0.0)) throw ConfigError("model: diffusion scale must be > 0");
  if (!(energy_weight >= 1.0)) throw ConfigError("model: energy weight must be >= 1");
  if (!(c_floor > 0.0)) throw ConfigError("model: c floor must be > 0");
  if (!kinetics.chi || !kinetics.f || !kinetics.g || !kinetics.lambda)
    throw ConfigError("model: kinetics preset is incomplete");
}

double F_eps(double eps, double s) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("F_eps: eps must lie in (0,1)");
  if (!(s >= 0.0)) throw std::invalid_argument("F_eps: s must be >= 0");
  return std::log1p(eps * s) / eps;
}

double F_eps_prime(double eps, double s) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("F_eps_prime: eps must lie in (0,1)");
  if (!(s >= 0.0)) throw std::invalid_argument("F_eps_prime: s must be >= 0");
  return 1.0 / (1.0 + eps * s);
}

double D_eps(const ModelParams& p, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("D_eps: s must be >= 0");
  return p.a * std::pow(s + p.eps, p.m - 1.0);
}

double psi(const KineticsPreset& kin, double s, double c_floor) {
  if (!(c_floor > 0.0)) throw std::domain_error("psi: floor must be > 0");
  if (!(s >= c_floor)) throw std::domain_error("psi: argument below floor");
  if (kin.psi_closed) return kin.psi_closed(s);
  auto integrand = [&](double q) {
    double gq = kin.g(q);
    if (!(gq > 0.0)) throw std::domain_error("psi: g(q) <= 0 inside integral");
    return 1.0 / std::sqrt(gq);
  };
  if (s == 1.0) return 0.0;
  return adaptive_simpson(integrand, 1.0, s, 1e-10, 48);
}

namespace {

struct DerivativeEval {
  std::function<double(double)> value;
  bool symbolic = false;
};

DerivativeEval first_derivative(const std::function<double(double)>& fn,
                                const std::function<double(double)>& supplied) {
  if (supplied) return {supplied, true};
  return {[fn](double c) {
            double h = std::max(1e-6, 1e-6 * c);
            double lo = std::max(c - h, 0.0);
            double hi = c + h;
            return (fn(hi) - fn(lo)) / (hi - lo);
          },
          false};
}

DerivativeEval second_derivative(const std::function<double(double)>& fn,
                                 const std::function<double(double)>& supplied) {
  if (supplied) return {supplied, true};
  return {[fn](double c) {
            double h = std::max(1e-5, 1e-5 * c);
            if (c - h < 0.0) h = c;  // one-sided shift keeps the domain
            if (h == 0.0) h = 1e-5;
            double cc = std::max(c, h);
            return (fn(cc + h) - 2.0 * fn(cc) + fn(cc - h)) / (h * h);
          },
          false};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "pass" : "FAIL") << "  " << c.id << ": " << c.description;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  os << (pass ? "all assumptions hold" : "assumption screening FAILED") << "\n";
  return os.str();
}

ValidationReport validate_assumptions(const ModelParams& p, double c_max_probe,
                                      int n_probe_points) {
  if (!(c_max_probe > 0.0))
    throw std::invalid_argument("validate_assumptions: c_max_probe must be > 0");
  if (n_probe_points < 16)
    throw std::invalid_argument("validate_assumptions: need >= 16 probe points");
  if (!p.kinetics.chi || !p.kinetics.f || !p.kinetics.g)
    throw std::invalid_argument("validate_assumptions: kinetics incomplete");

  const auto& kin = p.kinetics;
  ValidationReport rep;
  auto add = [&rep](const std::string& id, const std::string& desc, bool pass,
                    const std::string& detail = "") {
    rep.checks.push_back({id, desc, pass, detail});
  };

  // Value conditions, probed on [0, c_max] for chi and (0, c_max] for f.
  {
    bool ok = true;
    double worst = 1e300, at = 0.0;
    for (int i = 0; i <= n_probe_points; ++i) {
      double c = c_max_probe * i / n_probe_points;
      double v = kin.chi(c);
      if (v < worst) { worst = v; at = c; }
      if (!(v > 0.0)) ok = false;
    }
    add("chi-positive", "sensitivity chi > 0 on [0, c_max]", ok,
        "min chi = " + fmt(worst) + " at c = " + fmt(at));
  }
  {
    double f0 = kin.f(0.0);
    add("f-vanishes-at-zero", "consumption rate f(0) = 0",
        std::abs(f0) <= 1e-14, "f(0) = " + fmt(f0));
  }
  {
    bool ok = true;
    double worst = 1e300, at = 0.0;
    for (int i = 1; i <= n_probe_points; ++i) {
      double c = c_max_probe * i / n_probe_points;
      double v = kin.f(c);
      if (v < worst) { worst = v; at = c; }
      if (!(v > 0.0)) ok = false;
    }
    add("f-positive", "consumption rate f > 0 on (0, c_max]", ok,
        "min f = " + fmt(worst) + " at c = " + fmt(at));
  }

  // Derivative conditions on g = f/chi and chi*f, probed on (0, c_max].
  DerivativeEval g1 = first_derivative(kin.g, kin.g_prime);
  DerivativeEval g2 = second_derivative(kin.g, kin.g_second);
  DerivativeEval cf1 = first_derivative(
      [&kin](double c) { return kin.chi(c) * kin.f(c); }, kin.chif_prime);
  const double slack1 = g1.symbolic ? 0.0 : 1e-10;
  const double slack2 = g2.symbolic ? 1e-12 : 1e-6;
  const double slack3 = cf1.symbolic ? 1e-12 : 1e-10;
  {
    bool ok = true;
    double worst = 1e300, at = 0.0;
    for (int i = 1; i <= n_probe_points; ++i) {
      double c = c_max_probe * i / n_probe_points;
      double v = g1.value(c);
      if (v < worst) { worst = v; at = c; }
      if (g1.symbolic ? !(v > 0.0) : !(v > -slack1)) ok = false;
    }
    add("ratio-increasing", "g = f/chi strictly increasing on (0, c_max]", ok,
        "min g' = " + fmt(worst) + " at c = " + fmt(at));
  }
  {
    bool ok = true;
    double worst = -1e300, at = 0.0;
    for (int i = 1; i <= n_probe_points; ++i) {
      double c = c_max_probe * i / n_probe_points;
      double v = g2.value(c);
      if (v > worst) { worst = v; at = c; }
      if (!(v <= slack2)) ok = false;
    }
    add("ratio-concave", "g = f/chi concave on (0, c_max]", ok,
        "max g'' = " + fmt(worst) + " at c = " + fmt(at));
  }
  {
    bool ok = true;
    double worst = 1e300, at = 0.0;
    for (int i = 1; i <= n_probe_points; ++i) {
      double c = c_max_probe * i / n_probe_points;
      double v = cf1.value(c);
      if (v < worst) { worst = v; at = c; }
      if (!(v >= -slack3)) ok = false;
    }
    add("product-nondecreasing", "(chi*f)' >= 0 on (0, c_max]", ok,
        "min (chi*f)' = " + fmt(worst) + " at c = " + fmt(at));
  }

  // Parameter ranges.
  add("exponent-range", "diffusion exponent m >= 2/3", p.m >= 2.0 / 3.0,
      "m = " + fmt(p.m));
  add("diffusion-scale-positive", "diffusion scale a > 0", p.a > 0.0,
      "a = " + fmt(p.a));
  add("regularization-range", "regularization eps in (0,1)",
      p.eps > 0.0 && p.eps < 1.0, "eps = " + fmt(p.eps));
  add("energy-weight", "kinetic weight K >= 1", p.energy_weight >= 1.0,
      "K = " + fmt(p.energy_weight));
  add("floor-positive", "denominator floor > 0", p.c_floor > 0.0,
      "floor = " + fmt(p.c_floor));
  {
    bool ok = std::isfinite(p.phi_grad[0]) && std::isfinite(p.phi_grad[1]) &&
              std::isfinite(p.phi_grad[2]);
    add("potential-bounded", "grad(Phi) finite", ok,
        "|grad Phi| = " + fmt(std::hypot(p.phi_grad[0], p.phi_grad[1],
                                          p.phi_grad[2])));
  }

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace cnsfv
