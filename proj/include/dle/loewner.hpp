#pragma once

// Chordal Loewner flows. The forward flow g' = 2/(g - psi(t)) contracts the
// imaginary part and swallows points in finite time; the reverse flow
// h' = -2/(h - psi(t-s)) expands it and is globally solvable for interior
// starting points. Piecewise-constant drivers are flowed exactly by composing
// closed-form slit maps; everything else uses an adaptive embedded
// Runge-Kutta pair with steps capped by the squared distance to the driver.

#include <functional>

#include "dle/driving_walk.hpp"
#include "dle/halfplane_maps.hpp"

namespace dle {

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DriverFunction {
  std::function<double(double)> value;  // psi(u) for u in [0, horizon]
  double horizon = 0.0;
  double max_step = 1e100;  // integrator step cap (driver feature scale)

  static DriverFunction constant(double a, double horizon);
  static DriverFunction interpolated(WalkPath walk);       // S_n(t)
  static DriverFunction stepped(WalkPath walk);            // left-constant sampling
  static DriverFunction shifted(DriverFunction base, std::function<double(double)> shift);
};

enum class FlowStatus { alive, swallowed };

struct FlowResult {
  Complex value;
  FlowStatus status = FlowStatus::alive;
  double swallow_time = 0.0;  // meaningful iff status == swallowed
};

// g(t, psi; z). Interior z, or real z != psi(0); real z = psi(0) swallows at
// t = 0. Swallowing is declared once Im(g) (or the gap to the driver, for
// real starts) drops below 1e-9, and the swallow time is then refined by
// monotone bisection to within tol.
FlowResult solve_forward(const DriverFunction& d, Complex z, double t, double tol = 1e-9);

// h(t, psi; z) for z in the closed half-plane; equals the inverse map
// f(t, psi; .) of the forward flow.
Complex solve_reverse(const DriverFunction& d, Complex z, double t, double tol = 1e-9);

// Reverse flow started on the real axis, tracking the closest approach to the
// time-reversed driver; used by hull_interval to classify base points.
struct RealFlowProbe {
  double value = 0.0;
  bool collided = false;
  double min_gap = 0.0;
};
RealFlowProbe solve_reverse_real(const DriverFunction& d, double x, double t,
                                 double tol = 1e-9);

// Reverse flow for the left-constant sampling of the walk, solved exactly as
// a composition of slit-type maps (one per constant piece, 4*dt in place of
// 4/n). At t = m/n this equals eval_chain over the first m walk positions.
Complex solve_reverse_piecewise(const WalkPath& w, Complex z, double t);
// Same flow stopped after duration s <= t (driver time runs down from t).
Complex solve_reverse_piecewise_window(const WalkPath& w, Complex z, double t, double s);

// Convex hull of the reverse-flow collision set on the real axis,
// [A_f, B_f] of the time-t map. Monotone bisection outward from the driver
// range; the initial bracket max|psi| + 2*sqrt(t) + 1 is widened if needed.
RealInterval hull_interval(const DriverFunction& d, double t, double tol = 1e-6);

// Half-plane capacity from the expansion w(z) = z + c0 + c1/z + O(1/z^2) on
// |z| = R: returns -c1/2. Least-squares fit over points on the upper
// semicircle; error O(1/R).
double capacity_estimate(const std::function<Complex(Complex)>& map, double R,
                         int points = 16);

}  // namespace dle
