#include "dle/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "dle/kernels.hpp"

namespace dle {

namespace {

constexpr double kSwallowEps = 1e-9;

// Dormand-Prince 5(4) embedded pair.
struct Dopri {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

// One flow problem: y' = sign * 2 / (y - a(u)). The driver is evaluated in
// the integrator's own time variable u.
struct FlowProblem {
  const DriverFunction* driver;
  double sign;        // +2/(y-psi) forward, -2/(y-psi(t-s)) reverse
  double t_total;     // reverse flows look up psi(t_total - u)
  bool reversed;

  double driver_at(double u) const {
    double q = reversed ? t_total - u : u;
    q = std::clamp(q, 0.0, driver->horizon);
    return driver->value(q);
  }
  Complex rhs(double u, Complex y) const { return sign * 2.0 / (y - driver_at(u)); }
};

struct StepOutcome {
  Complex y;
  double u;
  bool hit = false;  // gap dropped below the swallow threshold inside [u0, u]
};

// Integrate from (u0, y0) to u_end with adaptive steps. The step size is
// capped by 0.25*dist^2 where dist is the distance to the driver (the
// collapse-time scale of the 2/(y-psi) right-hand side). term_of supplies the
// quantity whose vanishing ends the flow (imaginary part for interior
// forward solves, driver distance for boundary probes); the integration
// stops once it falls below terminal_eps.
template <typename TermFn>
StepOutcome integrate(const FlowProblem& p, Complex y0, double u0, double u_end,
                      double tol, const TermFn& term_of, double terminal_eps,
                      double* min_term = nullptr) {
  Complex y = y0;
  double u = u0;
  const auto dist_of = [&](Complex w, double s) { return std::abs(w - p.driver_at(s)); };
  double dist = dist_of(y, u);
  double term = term_of(y, u);
  if (min_term) *min_term = std::min(*min_term, term);
  if (terminal_eps > 0.0 && term < terminal_eps) return {y, u, true};
  double h = std::min({u_end - u0, 0.25 * dist * dist, p.driver->max_step, 0.1});
  h = std::max(h, 1e-14);
  Complex k1 = p.rhs(u, y);
  int rejects_in_a_row = 0;
  while (u < u_end) {
    h = std::min({h, u_end - u, 0.25 * dist * dist, p.driver->max_step});
    h = std::max(h, 1e-15 * std::max(1.0, u_end));
    const Complex k2 = p.rhs(u + Dopri::c2 * h, y + h * (Dopri::a21 * k1));
    const Complex k3 = p.rhs(u + Dopri::c3 * h, y + h * (Dopri::a31 * k1 + Dopri::a32 * k2));
    const Complex k4 =
        p.rhs(u + Dopri::c4 * h, y + h * (Dopri::a41 * k1 + Dopri::a42 * k2 + Dopri::a43 * k3));
    const Complex k5 = p.rhs(u + Dopri::c5 * h, y + h * (Dopri::a51 * k1 + Dopri::a52 * k2 +
                                                         Dopri::a53 * k3 + Dopri::a54 * k4));
    const Complex k6 = p.rhs(u + h, y + h * (Dopri::a61 * k1 + Dopri::a62 * k2 +
                                             Dopri::a63 * k3 + Dopri::a64 * k4 + Dopri::a65 * k5));
    const Complex y5 = y + h * (Dopri::b1 * k1 + Dopri::b3 * k3 + Dopri::b4 * k4 +
                                Dopri::b5 * k5 + Dopri::b6 * k6);
    const Complex k7 = p.rhs(u + h, y5);
    const Complex errc = h * (Dopri::e1 * k1 + Dopri::e3 * k3 + Dopri::e4 * k4 +
                              Dopri::e5 * k5 + Dopri::e6 * k6 + Dopri::e7 * k7);
    const double scale = tol * (1.0 + std::abs(y));
    const double err = std::abs(errc) / scale;
    if (err <= 1.0 || h <= 1e-14) {
      u += h;
      y = y5;
      k1 = k7;  // FSAL
      dist = dist_of(y, u);
      term = term_of(y, u);
      if (min_term) *min_term = std::min(*min_term, term);
      if (terminal_eps > 0.0 && term < terminal_eps) return {y, u, true};
      rejects_in_a_row = 0;
    } else {
      ++rejects_in_a_row;
      if (rejects_in_a_row > 60) return {y, u, terminal_eps > 0.0 && term < 10 * terminal_eps};
    }
    const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    h *= std::clamp(grow, 0.2, 5.0);
  }
  return {y, u, false};
}

Complex normalize_uhp(Complex z) { return {z.real(), z.imag() + 0.0}; }

}  // namespace

DriverFunction DriverFunction::constant(double a, double horizon) {
  return {[a](double) { return a; }, horizon, 1e100};
}

DriverFunction DriverFunction::interpolated(WalkPath walk) {
  const double horizon = walk.horizon();
  const double step = 1.0 / static_cast<double>(walk.n);
  auto shared = std::make_shared<WalkPath>(std::move(walk));
  return {[shared](double u) { return interpolate(*shared, u); }, horizon, step};
}

DriverFunction DriverFunction::stepped(WalkPath walk) {
  const double horizon = walk.horizon();
  const double step = 1.0 / static_cast<double>(walk.n);
  auto shared = std::make_shared<WalkPath>(std::move(walk));
  return {[shared](double u) { return piecewise_constant(*shared, u); }, horizon, step};
}

DriverFunction DriverFunction::shifted(DriverFunction base, std::function<double(double)> shift) {
  auto fn = base.value;
  return {[fn, shift](double u) { return fn(u) + shift(u); }, base.horizon, base.max_step};
}

FlowResult solve_forward(const DriverFunction& d, Complex z, double t, double tol) {
  const Complex z0 = normalize_uhp(z);
  const bool started_real = z0.imag() == 0.0;
  const FlowProblem p{&d, +1.0, 0.0, false};
  const auto term_of = [&](Complex y, double u) {
    return started_real ? std::abs(y - p.driver_at(u)) : y.imag();
  };
  if (term_of(z0, 0.0) < kSwallowEps) {
    return {z0, FlowStatus::swallowed, 0.0};
  }
  auto out = integrate(p, z0, 0.0, t, tol, term_of, kSwallowEps);
  if (!out.hit) return {out.y, FlowStatus::alive, 0.0};

  // Monotone bisection of the swallow time: "alive at time s" is decreasing
  // in s, so rerun short segments from the last alive checkpoint.
  double lo = 0.0, hi = out.u;
  Complex y_lo = z0;
  Complex last = out.y;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    auto seg = integrate(p, y_lo, lo, mid, tol, term_of, kSwallowEps);
    if (seg.hit) {
      hi = seg.u;
      last = seg.y;
    } else {
      lo = mid;
      y_lo = seg.y;
    }
  }
  return {last, FlowStatus::swallowed, 0.5 * (lo + hi)};
}

Complex solve_reverse(const DriverFunction& d, Complex z, double t, double tol) {
  if (t == 0.0) return normalize_uhp(z);
  const Complex z0 = normalize_uhp(z);
  const FlowProblem p{&d, -1.0, t, true};
  const auto term_of = [&](Complex y, double u) { return std::abs(y - p.driver_at(u)); };
  // Interior starting points never collide (the imaginary part grows along
  // the reverse flow); only real starts stop on driver collision.
  const double terminal = z0.imag() > 0.0 ? 0.0 : kSwallowEps;
  auto out = integrate(p, z0, 0.0, t, tol, term_of, terminal);
  return out.y;
}

RealFlowProbe solve_reverse_real(const DriverFunction& d, double x, double t, double tol) {
  const FlowProblem p{&d, -1.0, t, true};
  const auto term_of = [&](Complex y, double u) { return std::abs(y - p.driver_at(u)); };
  double min_gap = std::numeric_limits<double>::infinity();
  auto out = integrate(p, Complex{x, 0.0}, 0.0, t, tol, term_of, kSwallowEps, &min_gap);
  return {out.y.real(), out.hit, min_gap};
}

Complex solve_reverse_piecewise_window(const WalkPath& w, Complex z, double t, double s) {
  if (s <= 0.0) return normalize_uhp(z);
  const double n = static_cast<double>(w.n);
  const double u_lo = std::max(t - s, 0.0);
  double u_hi = t;
  Complex y = normalize_uhp(z);
  while (u_hi > u_lo + 1e-15) {
    long k = static_cast<long>(std::ceil(u_hi * n - 1e-12)) - 1;
    k = std::max(k, 0L);
    const double piece_start = static_cast<double>(k) / n;
    const double u_next = std::max(piece_start, u_lo);
    const double dt = u_hi - u_next;
    if (dt > 0.0) {
      y = kernels::scalar::slit_point(w.knot(static_cast<std::size_t>(k)),
                                      2.0 * std::sqrt(dt), y);
    }
    u_hi = u_next;
    if (k == 0 && u_hi <= u_lo + 1e-15) break;
  }
  return y;
}

Complex solve_reverse_piecewise(const WalkPath& w, Complex z, double t) {
  return solve_reverse_piecewise_window(w, z, t, t);
}

RealInterval hull_interval(const DriverFunction& d, double t, double tol) {
  if (t <= 0.0) {
    const double a = d.value(0.0);
    return {a, a};
  }
  double psi_min = d.value(0.0), psi_max = psi_min;
  const int samples = 2048;
  for (int i = 0; i <= samples; ++i) {
    const double v = d.value(t * i / samples);
    psi_min = std::min(psi_min, v);
    psi_max = std::max(psi_max, v);
  }
  const double ode_tol = std::min(1e-9, tol * 1e-2);
  const auto collides = [&](double x) {
    return solve_reverse_real(d, x, t, ode_tol).collided;
  };
  const double inner = d.value(t);  // always part of the collision set
  const double margin = 2.0 * std::sqrt(t) + 1.0;

  const auto bisect_edge = [&](double x_in, double x_out) {
    while (collides(x_out)) x_out += (x_out - x_in) + margin;
    while (std::fabs(x_out - x_in) > tol) {
      const double mid = 0.5 * (x_in + x_out);
      if (collides(mid)) {
        x_in = mid;
      } else {
        x_out = mid;
      }
    }
    return 0.5 * (x_in + x_out);
  };

  const double hi = bisect_edge(inner, psi_max + margin);
  const double lo = bisect_edge(inner, psi_min - margin);
  return {lo, hi};
}

double capacity_estimate(const std::function<Complex(Complex)>& map, double R, int points) {
  // Fit w(z) - z = c0 + c1/z on the upper semicircle |z| = R; the capacity is
  // -Re(c1)/2 and c0 absorbs any translation term.
  const int K = std::max(points, 4);
  Complex sum_q{}, sum_d{}, sum_qd{};
  double sum_qq = 0.0;
  for (int j = 0; j < K; ++j) {
    const double theta = std::numbers::pi * (j + 0.5) / K;
    const Complex z = R * Complex{std::cos(theta), std::sin(theta)};
    const Complex q = 1.0 / z;
    const Complex dj = map(z) - z;
    sum_q += q;
    sum_d += dj;
    sum_qd += std::conj(q) * dj;
    sum_qq += std::norm(q);
  }
  const double kd = static_cast<double>(K);
  const Complex det = kd * sum_qq - std::conj(sum_q) * sum_q;
  const Complex c1 = (kd * sum_qd - std::conj(sum_q) * sum_d) / det;
  return -0.5 * c1.real();
}

}  // namespace dle
