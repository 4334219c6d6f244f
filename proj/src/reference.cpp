#include "cnsfv/reference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cnsfv {

double HeatNeumannSolution::value(const Grid& g, double x, double y, double z,
                                  double t) const {
  if (g.periodic())
    throw std::invalid_argument("HeatNeumannSolution: box grids only");
  constexpr double pi = std::numbers::pi;
  double w = mean;
  for (const Mode& md : modes) {
    double kxw = md.kx * pi / g.lx;
    double kyw = md.ky * pi / g.ly;
    double kzw = g.dim == 3 ? md.kz * pi / g.lz : 0.0;
    double lam = kxw * kxw + kyw * kyw + kzw * kzw;
    double s = md.amplitude * std::exp(-lam * t) * std::cos(kxw * x) *
               std::cos(kyw * y);
    if (g.dim == 3) s *= std::cos(kzw * z);
    w += s;
  }
  return w;
}

ScalarField HeatNeumannSolution::evaluate(const Grid& g, double t) const {
  ScalarField out = ScalarField::cell_centered(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        out(i, j, k) = value(g, g.cell_center(0, i), g.cell_center(1, j),
                             g.dim == 3 ? g.cell_center(2, k) : 0.0, t);
  return out;
}

BarenblattSolution::BarenblattSolution(double m_, double a_, double mass_,
                                       int dim_,
                                       const std::array<double, 3>& center_)
    : m(m_), a(a_), mass(mass_), dim(dim_), center(center_) {
  if (!(m > 1.0))
    throw std::invalid_argument("BarenblattSolution: needs m > 1");
  if (!(a > 0.0) || !(mass > 0.0))
    throw std::invalid_argument("BarenblattSolution: a and mass must be > 0");
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("BarenblattSolution: dim must be 2 or 3");

  const double d = dim;
  const double q = 1.0 / (m - 1.0);
  beta_ = 1.0 / (d * (m - 1.0) + 2.0);
  alpha_ = d * beta_;
  k_ = (m - 1.0) * beta_ / (2.0 * m);
  // mass normalization: integral of (C - k|x|^2)_+^q over R^d equals mass
  constexpr double pi = std::numbers::pi;
  double num = mass * std::tgamma(q + 1.0 + d / 2.0) * std::pow(k_, d / 2.0);
  double den = std::pow(pi, d / 2.0) * std::tgamma(q + 1.0);
  c0_ = std::pow(num / den, 1.0 / (q + d / 2.0));
}

double BarenblattSolution::value(double x, double y, double z,
                                 double t) const {
  if (!(t > 0.0))
    throw std::invalid_argument("BarenblattSolution: needs t > 0");
  const double tau = (a / m) * t;
  double r2 = (x - center[0]) * (x - center[0]) +
              (y - center[1]) * (y - center[1]);
  if (dim == 3) r2 += (z - center[2]) * (z - center[2]);
  double inner = c0_ - k_ * r2 * std::pow(tau, -2.0 * beta_);
  if (inner <= 0.0) return 0.0;
  return std::pow(tau, -alpha_) * std::pow(inner, 1.0 / (m - 1.0));
}

double BarenblattSolution::support_radius(double t) const {
  if (!(t > 0.0))
    throw std::invalid_argument("BarenblattSolution: needs t > 0");
  const double tau = (a / m) * t;
  return std::sqrt(c0_ / k_) * std::pow(tau, beta_);
}

ScalarField BarenblattSolution::evaluate(const Grid& g, double t) const {
  if (g.dim != dim)
    throw std::invalid_argument("BarenblattSolution: grid dimension mismatch");
  ScalarField out = ScalarField::cell_centered(g);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        out(i, j, k) = value(g.cell_center(0, i), g.cell_center(1, j),
                             g.dim == 3 ? g.cell_center(2, k) : 0.0, t);
  return out;
}

}  // namespace cnsfv
