#include "cnsfv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "cnsfv/errors.hpp"
#include "cnsfv/fluid.hpp"
#include "cnsfv/numerics.hpp"
#include "cnsfv/operators.hpp"
#include "face_iter.hpp"

namespace cnsfv {

namespace {

double floored(double c, double floor_val) {
  return c < floor_val ? floor_val : c;
}

// index of the neighbour `delta` cells away along one axis, with reflected
// ghosts in box mode (zero-flux walls) and wrap-around in periodic mode
int ghost_neighbor(const Grid& g, int idx, int n, int delta) {
  int m = idx + delta;
  if (g.periodic()) return wrap_index(m, n);
  if (m < 0) return -m - 1;
  if (m >= n) return 2 * n - 1 - m;
  return m;
}

std::array<double, 3> cell_velocity(const Grid& g, const VectorField& u,
                                    int i, int j, int k) {
  std::array<double, 3> w{0.0, 0.0, 0.0};
  w[0] = 0.5 * (u.comp(0)(i, j, k) + u.comp(0)(i + 1, j, k));
  w[1] = 0.5 * (u.comp(1)(i, j, k) + u.comp(1)(i, j + 1, k));
  if (g.dim == 3) w[2] = 0.5 * (u.comp(2)(i, j, k) + u.comp(2)(i, j, k + 1));
  return w;
}

std::array<double, 3> cell_pos(const Grid& g, int i, int j, int k) {
  return {g.cell_center(0, i), g.cell_center(1, j),
          g.dim == 3 ? g.cell_center(2, k) : 0.0};
}

void require_state(const Grid& g, const State& s, const char* what) {
  if (s.n.nx() != g.nx || s.n.ny() != g.ny || s.n.nz() != g.nz)
    throw std::invalid_argument(std::string(what) + ": state shape mismatch");
}

// Neumaier-compensated add into (sum, carry)
void addc(double& sum, double& carry, double x) {
  double t = sum + x;
  if (std::abs(sum) >= std::abs(x))
    carry += (sum - t) + x;
  else
    carry += (x - t) + sum;
  sum = t;
}

}  // namespace

double power_integral(const Grid& g, const ScalarField& n, double eps,
                      double power) {
  KahanSum s;
  const double vol = g.cell_volume();
  for (double v : n.data()) s.add(vol * std::pow(v + eps, power));
  return s.value();
}

DiagnosticsRecord evaluate(const Grid& g, const State& s,
                           const ModelParams& p,
                           const DiagnosticsRecord* prev) {
  p.require_valid();
  require_state(g, s, "diagnostics");

  DiagnosticsRecord r;
  r.t = s.t;
  r.mass = integrate_cells(g, s.n);
  r.c_max = max_cells(s.c);
  r.c_min = min_cells(s.c);
  r.n_max = max_cells(s.n);
  r.n_min = min_cells(s.n);

  const double vol = g.cell_volume();

  {
    KahanSum ent;
    for (double v : s.n.data())
      if (v > 0.0) ent.add(vol * v * std::log(v));
    r.entropy = ent.value();
  }

  long long nfloor = 0;
  for (double v : s.c.data())
    if (v < p.c_floor) ++nfloor;
  r.floored_cells = nfloor;

  VectorField gc = gradient(g, s.c);

  ScalarField nhalf(g.nx, g.ny, g.nz);
  {
    auto dst = nhalf.data();
    auto src = s.n.data();
    const double e = 0.5 * p.m;
    for (std::size_t q = 0; q < dst.size(); ++q) dst[q] = std::pow(src[q], e);
  }

  KahanSum psi_e, d1s, i1s;
  for (int a = 0; a < g.dim; ++a) {
    const double h = g.spacing(a);
    const ScalarField& ga = gc.comp(a);
    detail::for_each_flux_face(
        g, a,
        [&](int fi, int fj, int fk, int li, int lj, int lk, int hi, int hj,
            int hk) {
          double dc = ga(fi, fj, fk);
          if (dc != 0.0) {
            double cf =
                floored(0.5 * (s.c(li, lj, lk) + s.c(hi, hj, hk)), p.c_floor);
            psi_e.add(0.5 * vol * dc * dc / p.kinetics.g(cf));
          }
          double nl = s.n(li, lj, lk), nh = s.n(hi, hj, hk);
          double dn = (nh - nl) / h;
          if (dn != 0.0)
            d1s.add(vol * std::pow(0.5 * (nl + nh) + p.eps, p.m - 2.0) * dn *
                    dn);
          double dm = (nhalf(hi, hj, hk) - nhalf(li, lj, lk)) / h;
          if (dm != 0.0) i1s.add(vol * dm * dm);
        });
  }
  r.psi_energy = psi_e.value();
  r.d1 = d1s.value();
  r.i1 = i1s.value();

  r.kinetic = p.energy_weight * l2_sq_faces(g, s.u);
  r.combined_energy = r.entropy + r.psi_energy + r.kinetic;

  const double hh[3] = {g.hx, g.hy, g.dim == 3 ? g.hz : 1.0};
  const double pw = (3.0 * p.m + 2.0) / 3.0;
  KahanSum d2s, d3s, i2s, i3s;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double cv = floored(s.c(i, j, k), p.c_floor);
        const int pos[3] = {i, j, k};

        double frob = 0.0;
        for (int a = 0; a < g.dim; ++a) {
          int pl[3] = {i, j, k}, ph[3] = {i, j, k};
          pl[a] = ghost_neighbor(g, pos[a], g.cells(a), -1);
          ph[a] = ghost_neighbor(g, pos[a], g.cells(a), +1);
          double saa = (s.c(ph[0], ph[1], ph[2]) - 2.0 * s.c(i, j, k) +
                        s.c(pl[0], pl[1], pl[2])) /
                       (hh[a] * hh[a]);
          frob += saa * saa;
        }
        for (int a = 0; a < g.dim; ++a)
          for (int b = a + 1; b < g.dim; ++b) {
            int pp[3] = {i, j, k}, pm[3] = {i, j, k};
            int mp[3] = {i, j, k}, mm[3] = {i, j, k};
            pp[a] = ghost_neighbor(g, pos[a], g.cells(a), +1);
            pp[b] = ghost_neighbor(g, pos[b], g.cells(b), +1);
            pm[a] = pp[a];
            pm[b] = ghost_neighbor(g, pos[b], g.cells(b), -1);
            mp[a] = ghost_neighbor(g, pos[a], g.cells(a), -1);
            mp[b] = pp[b];
            mm[a] = mp[a];
            mm[b] = pm[b];
            double sab = (s.c(pp[0], pp[1], pp[2]) - s.c(pm[0], pm[1], pm[2]) -
                          s.c(mp[0], mp[1], mp[2]) + s.c(mm[0], mm[1], mm[2])) /
                         (4.0 * hh[a] * hh[b]);
            frob += 2.0 * sab * sab;
          }
        d2s.add(vol * frob / cv);

        double g2 = 0.0;
        for (int a = 0; a < g.dim; ++a) {
          int pf[3] = {i, j, k};
          int pg[3] = {i, j, k};
          ++pg[a];
          double gv = 0.5 * (gc.comp(a)(pf[0], pf[1], pf[2]) +
                             gc.comp(a)(pg[0], pg[1], pg[2]));
          g2 += gv * gv;
        }
        if (g2 > 0.0) d3s.add(vol * g2 * g2 / (cv * cv * cv));

        i2s.add(vol * std::pow(s.n(i, j, k) + p.eps, pw));

        auto w = cell_velocity(g, s.u, i, j, k);
        double u2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
        if (u2 > 0.0) i3s.add(vol * std::pow(u2, 5.0 / 3.0));
      }
  r.d2 = d2s.value();
  r.d3 = d3s.value();
  r.i2 = i2s.value();
  r.i3 = i3s.value();
  r.d4 = velocity_gradient_sq(g, s.u);

  if (prev) {
    double dt = r.t - prev->t;
    if (dt < 0.0)
      throw std::invalid_argument("diagnostics: records out of time order");
    r.a1 = prev->a1 + 0.5 * dt * (prev->i1 + r.i1);
    r.a2 = prev->a2 + 0.5 * dt * (prev->i2 + r.i2);
    r.a3 = prev->a3 + 0.5 * dt * (prev->i3 + r.i3);
    r.a4 = prev->a4 + 0.5 * dt * (prev->d1 + r.d1);
    r.a5 = prev->a5 + 0.5 * dt * (prev->d2 + r.d2);
    r.a6 = prev->a6 + 0.5 * dt * (prev->d3 + r.d3);
    r.a7 = prev->a7 + 0.5 * dt * (prev->d4 + r.d4);
  }
  return r;
}

BudgetReport energy_budget_check(const std::vector<DiagnosticsRecord>& records,
                                 const ModelParams& params,
                                 bool phi_is_constant, double slack) {
  params.require_valid();
  if (records.size() < 2)
    throw std::invalid_argument("energy_budget_check: needs >= 2 records");
  const double dt0 = records[1].t - records[0].t;
  if (!(dt0 > 0.0))
    throw std::invalid_argument("energy_budget_check: time must increase");
  for (std::size_t k = 1; k + 1 < records.size(); ++k) {
    double dt = records[k + 1].t - records[k].t;
    if (std::abs(dt - dt0) > 1e-9 * dt0)
      throw std::invalid_argument("energy_budget_check: non-uniform sampling");
  }

  BudgetReport rep;
  const double twoK = 2.0 * params.energy_weight;
  std::vector<double> rate(records.size() - 1);
  double max_inc = -1e300;
  for (std::size_t k = 0; k + 1 < records.size(); ++k) {
    const DiagnosticsRecord& r0 = records[k];
    const DiagnosticsRecord& r1 = records[k + 1];
    double de = r1.combined_energy - r0.combined_energy;
    max_inc = std::max(max_inc, de);
    double diss0 = params.a * r0.d1 + r0.d2 + r0.d3 + r0.d4;
    double diss1 = params.a * r1.d1 + r1.d2 + r1.d3 + r1.d4;
    rate[k] = de / dt0 + 0.5 * (diss0 + diss1) / twoK;
  }
  rep.max_energy_increase = max_inc;
  rep.implied_constant = *std::max_element(rate.begin(), rate.end());

  const std::size_t q = std::max<std::size_t>(1, rate.size() / 4);
  rep.first_quartile_max = *std::max_element(rate.begin(), rate.begin() + q);
  rep.last_quartile_max = *std::max_element(rate.end() - q, rate.end());

  if (phi_is_constant) {
    rep.pass = rep.max_energy_increase <= slack;
    rep.message = rep.pass
                      ? "combined energy non-increasing"
                      : "combined energy increased beyond the allowed slack";
  } else {
    rep.pass = std::isfinite(rep.implied_constant) &&
               rep.last_quartile_max <= 2.0 * rep.first_quartile_max + slack;
    rep.message = rep.pass ? "dissipation-adjusted rate bounded over the run"
                           : "dissipation-adjusted rate trending upward";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Weak residuals
// ---------------------------------------------------------------------------

WeakResidualAccumulator::WeakResidualAccumulator(const Grid& g,
                                                 const ModelParams& p,
                                                 WeakEquation which,
                                                 TestFunction phi)
    : g_(g), p_(p), which_(which), phi_(std::move(phi)) {
  p_.require_valid();
  if (which_ == WeakEquation::momentum)
    throw std::invalid_argument(
        "weak residual: momentum takes the vector test function");
  if (!phi_.value || !phi_.grad)
    throw std::invalid_argument("weak residual: test function not set");
}

WeakResidualAccumulator::WeakResidualAccumulator(const Grid& g,
                                                 const ModelParams& p,
                                                 VectorTestFunction phi)
    : g_(g), p_(p), which_(WeakEquation::momentum), vphi_(std::move(phi)) {
  p_.require_valid();
  if (!vphi_.value || !vphi_.grad)
    throw std::invalid_argument("weak residual: test function not set");
}

void WeakResidualAccumulator::add_state(const State& s) {
  require_state(g_, s, "weak residual");

  if (count_ == 0 && which_ == WeakEquation::momentum) {
    // screen the declared solenoidality and wall values at the first time
    double max_grad = 0.0, max_div = 0.0, max_phi = 0.0;
    for (int k = 0; k < g_.nz; ++k)
      for (int j = 0; j < g_.ny; ++j)
        for (int i = 0; i < g_.nx; ++i) {
          auto pos = cell_pos(g_, i, j, k);
          auto grd = vphi_.grad(pos, s.t);
          double div = 0.0;
          for (int a = 0; a < g_.dim; ++a) {
            div += grd[a][a];
            for (int b = 0; b < g_.dim; ++b)
              max_grad = std::max(max_grad, std::abs(grd[a][b]));
          }
          max_div = std::max(max_div, std::abs(div));
          auto ph = vphi_.value(pos, s.t);
          for (int a = 0; a < g_.dim; ++a)
            max_phi = std::max(max_phi, std::abs(ph[a]));
        }
    if (max_div > 1e-8 * std::max(1.0, max_grad))
      throw std::invalid_argument(
          "weak residual: momentum test function must be solenoidal");
    if (!g_.periodic()) {
      double worst = 0.0;
      for (int a = 0; a < g_.dim; ++a)
        for (int side = 0; side < 2; ++side) {
          // sweep the wall plane through the cell-center tangential lattice
          for (int k = 0; k < g_.nz; ++k)
            for (int j = 0; j < g_.ny; ++j)
              for (int i = 0; i < g_.nx; ++i) {
                if ((a == 0 && i > 0) || (a == 1 && j > 0) ||
                    (a == 2 && k > 0))
                  continue;
                auto pos = cell_pos(g_, i, j, k);
                pos[a] = side == 0 ? 0.0 : g_.extent(a);
                auto ph = vphi_.value(pos, s.t);
                for (int b = 0; b < g_.dim; ++b)
                  worst = std::max(worst, std::abs(ph[b]));
              }
        }
      if (worst > 1e-9 * std::max(1.0, max_phi))
        throw std::invalid_argument(
            "weak residual: momentum test function must vanish on the walls");
    }
  }

  if (prev_) {
    double dt = s.t - prev_->t;
    if (!(dt > 0.0))
      throw std::invalid_argument("weak residual: time must increase");
    if (count_ >= 2 && std::abs(dt - dt_) > 1e-9 * dt_)
      throw std::invalid_argument("weak residual: non-uniform sampling");
    dt_ = dt;
    accumulate_pair(*prev_, s);
  }
  prev_ = s;
  last_t_ = s.t;
  ++count_;
}

double WeakResidualAccumulator::residual() const {
  if (count_ < 2)
    throw std::logic_error("weak residual: needs at least two states");

  double worst = 0.0;
  for (int k = 0; k < g_.nz; ++k)
    for (int j = 0; j < g_.ny; ++j)
      for (int i = 0; i < g_.nx; ++i) {
        auto pos = cell_pos(g_, i, j, k);
        if (which_ == WeakEquation::momentum) {
          auto ph = vphi_.value(pos, last_t_);
          for (int a = 0; a < g_.dim; ++a)
            worst = std::max(worst, std::abs(ph[a]));
        } else {
          worst = std::max(worst, std::abs(phi_.value(pos, last_t_)));
        }
      }
  if (worst > 1e-10 * std::max(1.0, scale_))
    throw std::invalid_argument(
        "weak residual: test function must vanish near the final time");

  return std::abs(sum_ + comp_);
}

void WeakResidualAccumulator::accumulate_pair(const State& sa,
                                              const State& sb) {
  const double dt = sb.t - sa.t;
  const double t = sa.t;
  const double vol = g_.cell_volume();

  if (which_ != WeakEquation::momentum) {
    const bool density = which_ == WeakEquation::density;
    const ScalarField& q0 = density ? sa.n : sa.c;
    const ScalarField& q1 = density ? sb.n : sb.c;

    for (int k = 0; k < g_.nz; ++k)
      for (int j = 0; j < g_.ny; ++j)
        for (int i = 0; i < g_.nx; ++i) {
          auto pos = cell_pos(g_, i, j, k);
          double ph = phi_.value(pos, t);
          scale_ = std::max(scale_, std::abs(ph));
          addc(sum_, comp_, vol * (q1(i, j, k) - q0(i, j, k)) * ph);
          if (!density)
            addc(sum_, comp_,
                 dt * vol * F_eps(p_.eps, sa.n(i, j, k)) *
                     p_.kinetics.f(sa.c(i, j, k)) * ph);
        }

    VectorField gc = gradient(g_, sa.c);
    for (int a = 0; a < g_.dim; ++a) {
      const double h = g_.spacing(a);
      const ScalarField& ua = sa.u.comp(a);
      const ScalarField& ga = gc.comp(a);
      detail::for_each_flux_face(
          g_, a,
          [&](int fi, int fj, int fk, int li, int lj, int lk, int hi, int hj,
              int hk) {
            std::array<double, 3> pos = cell_pos(g_, li, lj, lk);
            pos[a] = g_.face_coord(a, a == 0 ? fi : a == 1 ? fj : fk);
            double gphi = phi_.grad(pos, t)[a];
            if (gphi == 0.0) return;
            double flux;
            if (density) {
              double nl = sa.n(li, lj, lk), nh = sa.n(hi, hj, hk);
              double nf = 0.5 * (nl + nh);
              double cf = 0.5 * (sa.c(li, lj, lk) + sa.c(hi, hj, hk));
              double dn = (nh - nl) / h;
              flux = D_eps(p_, nf) * dn -
                     nf * F_eps_prime(p_.eps, nf) * p_.kinetics.chi(cf) *
                         ga(fi, fj, fk) -
                     nf * ua(fi, fj, fk);
            } else {
              double cf = 0.5 * (sa.c(li, lj, lk) + sa.c(hi, hj, hk));
              flux = ga(fi, fj, fk) - cf * ua(fi, fj, fk);
            }
            addc(sum_, comp_, dt * vol * flux * gphi);
          });
    }
    return;
  }

  // momentum identity
  for (int a = 0; a < g_.dim; ++a) {
    const ScalarField& ua0 = sa.u.comp(a);
    const ScalarField& ua1 = sb.u.comp(a);
    const bool per = g_.periodic();
    const int na = g_.cells(a);
    const int fi_lo = per ? 0 : 1;
    const int fi_hi = per ? na - 1 : na - 1;  // inclusive
    const int ncell[3] = {g_.nx, g_.ny, g_.dim == 3 ? g_.nz : 1};
    int beg[3] = {0, 0, 0};
    int end[3] = {ncell[0] - 1, ncell[1] - 1, ncell[2] - 1};
    beg[a] = fi_lo;
    end[a] = fi_hi;
    for (int k = beg[2]; k <= end[2]; ++k)
      for (int j = beg[1]; j <= end[1]; ++j)
        for (int i = beg[0]; i <= end[0]; ++i) {
          auto pos = cell_pos(g_, i, j, k);
          pos[a] = g_.face_coord(a, a == 0 ? i : a == 1 ? j : k);
          auto ph = vphi_.value(pos, t);
          scale_ = std::max(scale_, std::abs(ph[a]));
          addc(sum_, comp_, vol * (ua1(i, j, k) - ua0(i, j, k)) * ph[a]);
        }
  }

  // cell terms: convection and buoyancy
  for (int k = 0; k < g_.nz; ++k)
    for (int j = 0; j < g_.ny; ++j)
      for (int i = 0; i < g_.nx; ++i) {
        auto pos = cell_pos(g_, i, j, k);
        auto w = cell_velocity(g_, sa.u, i, j, k);
        auto grd = vphi_.grad(pos, t);
        double conv = 0.0;
        for (int aa = 0; aa < g_.dim; ++aa)
          for (int bb = 0; bb < g_.dim; ++bb)
            conv += w[aa] * w[bb] * grd[aa][bb];
        if (conv != 0.0) addc(sum_, comp_, -dt * vol * p_.kappa * conv);
        auto ph = vphi_.value(pos, t);
        double buoy = 0.0;
        for (int aa = 0; aa < g_.dim; ++aa)
          buoy += p_.phi_grad[aa] * ph[aa];
        if (buoy != 0.0)
          addc(sum_, comp_, -dt * vol * sa.n(i, j, k) * buoy);
      }

  // viscous term: grad u contracted with the analytic gradient, sampled at
  // the same points as velocity_gradient_sq
  const bool per = g_.periodic();
  const int ncell[3] = {g_.nx, g_.ny, g_.dim == 3 ? g_.nz : 1};
  for (int a = 0; a < g_.dim; ++a) {
    const ScalarField& qa = sa.u.comp(a);
    const double ha = g_.spacing(a);
    const int na = g_.cells(a);

    for (int k = 0; k < ncell[2]; ++k)
      for (int j = 0; j < ncell[1]; ++j)
        for (int i = 0; i < ncell[0]; ++i) {
          int lo[3] = {i, j, k}, hi2[3] = {i, j, k};
          ++hi2[a];
          double d =
              (qa(hi2[0], hi2[1], hi2[2]) - qa(lo[0], lo[1], lo[2])) / ha;
          if (d == 0.0) continue;
          auto pos = cell_pos(g_, i, j, k);
          addc(sum_, comp_, dt * vol * d * vphi_.grad(pos, t)[a][a]);
        }

    for (int b = 0; b < g_.dim; ++b) {
      if (b == a) continue;
      const double hb = g_.spacing(b);
      const int nb = g_.cells(b);
      int beg[3] = {0, 0, 0};
      int end[3] = {ncell[0] - 1, ncell[1] - 1, ncell[2] - 1};
      beg[a] = per ? 0 : 1;
      end[a] = na - 1;
      beg[b] = per ? 0 : 1;
      end[b] = nb - 1;
      for (int k = beg[2]; k <= end[2]; ++k)
        for (int j = beg[1]; j <= end[1]; ++j)
          for (int i = beg[0]; i <= end[0]; ++i) {
            int pos_i[3] = {i, j, k};
            int lo[3] = {i, j, k};
            lo[b] = per ? wrap_index(pos_i[b] - 1, nb) : pos_i[b] - 1;
            double d =
                (qa(pos_i[0], pos_i[1], pos_i[2]) - qa(lo[0], lo[1], lo[2])) /
                hb;
            if (d == 0.0) continue;
            auto pos = cell_pos(g_, i, j, k);
            pos[a] = g_.face_coord(a, pos_i[a]);
            pos[b] = g_.face_coord(b, pos_i[b]);
            addc(sum_, comp_, dt * vol * d * vphi_.grad(pos, t)[a][b]);
          }

      if (!per) {
        for (int side = 0; side < 2; ++side) {
          int cbeg[3] = {0, 0, 0};
          int cend[3] = {ncell[0] - 1, ncell[1] - 1, ncell[2] - 1};
          cbeg[a] = 1;
          cend[a] = na - 1;
          cbeg[b] = cend[b] = side == 0 ? 0 : nb - 1;
          for (int k = cbeg[2]; k <= cend[2]; ++k)
            for (int j = cbeg[1]; j <= cend[1]; ++j)
              for (int i = cbeg[0]; i <= cend[0]; ++i) {
                int pos_i[3] = {i, j, k};
                double v = qa(i, j, k);
                double d = (side == 0 ? 1.0 : -1.0) * 2.0 * v / hb;
                if (d == 0.0) continue;
                auto pos = cell_pos(g_, i, j, k);
                pos[a] = g_.face_coord(a, pos_i[a]);
                pos[b] = side == 0 ? 0.0 : g_.extent(b);
                addc(sum_, comp_, 0.5 * dt * vol * d * vphi_.grad(pos, t)[a][b]);
              }
        }
      }
    }
  }
}

double weak_residual(const Grid& g, const std::vector<State>& trajectory,
                     const ModelParams& p, const TestFunction& phi,
                     WeakEquation which) {
  WeakResidualAccumulator acc(g, p, which, phi);
  for (const State& s : trajectory) acc.add_state(s);
  return acc.residual();
}

double weak_residual_momentum(const Grid& g,
                              const std::vector<State>& trajectory,
                              const ModelParams& p,
                              const VectorTestFunction& phi) {
  WeakResidualAccumulator acc(g, p, phi);
  for (const State& s : trajectory) acc.add_state(s);
  return acc.residual();
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {
void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}
}  // namespace

void write_diagnostics_header(std::ostream& os) {
  os << "t,mass,c_max,c_min,n_max,entropy,psi_energy,kinetic,combined_energy,"
        "d1,d2,d3,d4,A1,A2,A3,A4,A5,A6,A7,floored_cells\n";
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
  const double cols[20] = {r.t,  r.mass,    r.c_max,   r.c_min, r.n_max,
                           r.entropy, r.psi_energy, r.kinetic,
                           r.combined_energy, r.d1, r.d2, r.d3, r.d4,
                           r.a1, r.a2, r.a3, r.a4, r.a5, r.a6, r.a7};
  for (int i = 0; i < 20; ++i) {
    if (i) os << ',';
    put(os, cols[i]);
  }
  os << ',' << r.floored_cells << '\n';
}

void write_diagnostics_csv(std::ostream& os,
                           const std::vector<DiagnosticsRecord>& recs) {
  write_diagnostics_header(os);
  for (const DiagnosticsRecord& r : recs) write_diagnostics_row(os, r);
}

}  // namespace cnsfv
