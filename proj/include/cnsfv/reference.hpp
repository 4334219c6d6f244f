#pragma once

#include <array>
#include <vector>

#include "cnsfv/fields.hpp"

namespace cnsfv {

/// Separable cosine series solving w_t = Lap(w) with zero-flux walls on the
/// grid's box. Each mode decays with the continuum rate
/// sum_a (k_a*pi/L_a)^2; evaluate() samples cell centers at time t.
struct HeatNeumannSolution {
  struct Mode {
    double amplitude = 0.0;
    int kx = 0;
    int ky = 0;
    int kz = 0;
  };
  double mean = 0.0;
  std::vector<Mode> modes;

  double value(const Grid& g, double x, double y, double z, double t) const;
  ScalarField evaluate(const Grid& g, double t) const;
};

/// Self-similar source solution of n_t = div(a * n^(m-1) * grad n) for m > 1:
/// compactly supported, total integral == mass for every t > 0, collapsing
/// onto mass * delta(x - center) as t -> 0+.
struct BarenblattSolution {
  double m = 2.0;
  double a = 1.0;
  double mass = 1.0;
  int dim = 2;
  std::array<double, 3> center{0.5, 0.5, 0.0};

  BarenblattSolution(double m_, double a_, double mass_, int dim_,
                     const std::array<double, 3>& center_);

  double value(double x, double y, double z, double t) const;
  double support_radius(double t) const;
  ScalarField evaluate(const Grid& g, double t) const;

  // profile constants (fixed by m, a, mass, dim)
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double k() const { return k_; }
  double c0() const { return c0_; }

 private:
  double alpha_ = 0.0, beta_ = 0.0, k_ = 0.0, c0_ = 0.0;
};

}  // namespace cnsfv
