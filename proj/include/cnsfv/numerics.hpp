#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>

namespace cnsfv {

/// Neumaier compensated accumulator. Used for every reported integral so that
/// summation order, not rounding, is the only thing that distinguishes runs.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace detail {
inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature; tolerance is relative to the coarse estimate
/// (with an absolute floor so integrals through zero terminate).
inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double rel_tol,
                               int max_depth = 40) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double tol = rel_tol * std::max(std::abs(whole), 1e-300);
  if (tol <= 0.0) throw std::invalid_argument("adaptive_simpson: bad tolerance");
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Deterministic uniform double in [lo, hi) from a 64-bit generator state.
/// (53 mantissa bits of the engine output; avoids library-specific
/// distribution implementations.)
template <class Engine>
double uniform_real(Engine& eng, double lo, double hi) {
  double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

}  // namespace cnsfv
