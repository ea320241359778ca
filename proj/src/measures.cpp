#include "dle/measures.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include <nlohmann/json.hpp>

#include "dle/kernels.hpp"

namespace dle {

namespace {

constexpr double kPi = std::numbers::pi;

double arcsine_radius(long n) { return 2.0 / std::sqrt(static_cast<double>(n)); }

// Boundary atom of the deformed arcsine: the reciprocal transform
// a + sqrt((z-a)^2 - 4/n) has one real zero at a - sgn(a) sqrt(a^2 + 4/n),
// where the Cauchy transform has a simple pole of residue |a|/sqrt(a^2+4/n).
struct DeformationAtom {
  double x = 0.0;
  double w = 0.0;
};

DeformationAtom deformation_atom(long n, double a) {
  if (a == 0.0) return {};
  const double root = std::sqrt(a * a + 4.0 / static_cast<double>(n));
  return {a - std::copysign(root, a), std::fabs(a) / root};
}

}  // namespace

CompactMeasure CompactMeasure::point_mass(double a) {
  CompactMeasure m;
  m.atoms = {{a, 1.0}};
  m.A = m.B = a;
  return m;
}

CompactMeasure CompactMeasure::from_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ConfigError("measure needs at least one atom");
  double total = 0.0;
  for (const auto& at : atoms) {
    if (!std::isfinite(at.x) || !(at.w >= 0.0))
      throw ConfigError("atoms must be finite with nonnegative weights");
    total += at.w;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw ConfigError("atom weights must sum to 1");
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  CompactMeasure m;
  m.atoms = std::move(atoms);
  m.A = m.atoms.front().x;
  m.B = m.atoms.back().x;
  return m;
}

CompactMeasure CompactMeasure::arcsine(long n, double shift) {
  if (n < 1) throw ConfigError("arcsine scale n must be >= 1");
  CompactMeasure m;
  m.family = Family::arcsine;
  m.n = n;
  m.shift = shift;
  const double r = arcsine_radius(n);
  m.A = shift - r;
  m.B = shift + r;
  const auto atom = deformation_atom(n, shift);
  if (atom.w > 0.0) {
    m.A = std::min(m.A, atom.x);
    m.B = std::max(m.B, atom.x);
  }
  return m;
}

double CompactMeasure::mean() const {
  if (is_atomic()) {
    double s = 0.0;
    for (const auto& at : atoms) s += at.x * at.w;
    return s;
  }
  // Slit-map measures have vanishing first moment for every shift: the
  // boundary atom balances the deformed density exactly.
  return 0.0;
}

double CompactMeasure::cdf(double x) const {
  if (is_atomic()) {
    double s = 0.0;
    for (const auto& at : atoms) {
      if (at.x <= x) s += at.w;
    }
    return s;
  }
  const double r = arcsine_radius(n);
  const double a = shift;
  double s = 0.0;
  const auto atom = deformation_atom(n, a);
  if (atom.w > 0.0 && atom.x <= x) s += atom.w;
  if (x <= a - r) return s;
  if (a == 0.0) {
    const double u = std::clamp(x / r, -1.0, 1.0);
    return s + 0.5 + std::asin(u) / kPi;
  }
  // Deformed density sqrt(r^2-u^2)/(pi (a^2+r^2-u^2)); integrate numerically.
  const double hi = std::min(x, a + r);
  const int panels = 512;
  double acc = 0.0;
  const double lo = a - r;
  for (int i = 0; i < panels; ++i) {
    const double u0 = lo + (hi - lo) * i / panels - a;
    const double u1 = lo + (hi - lo) * (i + 1) / panels - a;
    const double um = 0.5 * (u0 + u1);
    const auto dens = [&](double u) {
      const double q = std::max(r * r - u * u, 0.0);
      return std::sqrt(q) / (kPi * (a * a + q));
    };
    acc += (u1 - u0) * (dens(u0) + 4.0 * dens(um) + dens(u1)) / 6.0;
  }
  return s + acc;
}

std::vector<CompactMeasure::Atom> CompactMeasure::discretized(std::size_t bins) const {
  if (is_atomic()) return atoms;
  std::vector<Atom> out;
  const double r = arcsine_radius(n);
  const double lo = shift - r, hi = shift + r;
  double prev = cdf(lo - 1e-12);
  const auto atom = deformation_atom(n, shift);
  if (atom.w > 0.0 && atom.x < lo) {
    out.push_back({atom.x, atom.w});
  }
  for (std::size_t i = 0; i < bins; ++i) {
    const double x1 = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(bins);
    const double c = cdf(x1);
    const double w = c - prev;
    prev = c;
    if (w > 0.0) out.push_back({x1 - 0.5 * (hi - lo) / static_cast<double>(bins), w});
  }
  if (atom.w > 0.0 && atom.x > hi) out.push_back({atom.x, atom.w});
  double total = 0.0;
  for (auto& at : out) total += at.w;
  for (auto& at : out) at.w /= total;
  return out;
}

// ---------------------------------------------------------------------------
// Levy metric
// ---------------------------------------------------------------------------

namespace {

struct SortedAtoms {
  std::vector<double> x;
  std::vector<double> cum;  // cum[i] = weight of atoms <= x[i]

  double cdf(double v) const {
    const auto it = std::upper_bound(x.begin(), x.end(), v);
    if (it == x.begin()) return 0.0;
    return cum[static_cast<std::size_t>(it - x.begin()) - 1];
  }
  double cdf_left(double v) const {
    const auto it = std::lower_bound(x.begin(), x.end(), v);
    if (it == x.begin()) return 0.0;
    return cum[static_cast<std::size_t>(it - x.begin()) - 1];
  }
};

SortedAtoms sorted_atoms(const CompactMeasure& m) {
  const auto list = m.is_atomic() ? m.atoms : m.discretized(512);
  SortedAtoms s;
  s.x.reserve(list.size());
  s.cum.reserve(list.size());
  double acc = 0.0;
  for (const auto& at : list) {
    acc += at.w;
    if (!s.x.empty() && s.x.back() == at.x) {
      s.cum.back() = acc;
    } else {
      s.x.push_back(at.x);
      s.cum.push_back(acc);
    }
  }
  return s;
}

// sup_x [G(x) - F(x + delta)]: attained at an atom of G or just below a jump
// of the shifted F.
double band_excess(const SortedAtoms& G, const SortedAtoms& F, double delta) {
  double best = -1e300;
  for (std::size_t j = 0; j < G.x.size(); ++j) {
    best = std::max(best, G.cum[j] - F.cdf(G.x[j] + delta));
  }
  for (const double a : F.x) {
    best = std::max(best, G.cdf_left(a - delta) - F.cdf_left(a));
  }
  return best;
}

double required_delta(const SortedAtoms& F, const SortedAtoms& G, double delta) {
  return std::max(band_excess(G, F, delta), band_excess(F, G, delta));
}

}  // namespace

double levy_distance(const CompactMeasure& mu, const CompactMeasure& nu) {
  const SortedAtoms F = sorted_atoms(mu);
  const SortedAtoms G = sorted_atoms(nu);
  std::vector<double> breaks{0.0};
  breaks.reserve(F.x.size() * G.x.size() + 1);
  for (const double a : F.x)
    for (const double b : G.x) breaks.push_back(std::fabs(a - b));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const auto feasible = [&](double d) { return required_delta(F, G, d) <= d; };
  double best = 1e300;
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    const double b = breaks[k];
    if (b < best && feasible(b)) best = b;
    // inside (breaks[k], breaks[k+1]) the excess is constant, so the smallest
    // feasible point of the interval is the excess value itself
    const double hi = (k + 1 < breaks.size()) ? breaks[k + 1] : b + 1.0;
    const double mid = 0.5 * (b + hi);
    const double need = required_delta(F, G, mid);
    if (need > b && need <= hi && need < best && feasible(need)) best = need;
  }
  return std::max(best, 0.0);
}

double rho_metric(const CompactMeasure& mu, const CompactMeasure& nu) {
  return levy_distance(mu, nu) +
         std::max(std::fabs(mu.A - nu.A), std::fabs(mu.B - nu.B));
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

Complex cauchy_transform(const CompactMeasure& mu, Complex z) {
  if (mu.is_atomic()) {
    if (z.imag() == 0.0) {
      for (const auto& at : mu.atoms) {
        if (z.real() == at.x) throw std::domain_error("cauchy_transform: z is an atom");
      }
    }
    std::vector<double> xs(mu.atoms.size()), ws(mu.atoms.size());
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
      xs[i] = mu.atoms[i].x;
      ws[i] = mu.atoms[i].w;
    }
    return kernels::cauchy_sum(xs.data(), ws.data(), xs.size(), z.real(), z.imag());
  }

  const double r = arcsine_radius(mu.n);
  const double a = mu.shift;
  if (z.imag() == 0.0 && z.real() > a - r && z.real() < a + r)
    throw std::domain_error("cauchy_transform: z inside the continuous support");

  // Gauss-Chebyshev quadrature against the arcsine weight: the continuous
  // part is sum_k w_k/(z - (a + u_k)) with u_k = r cos((2k-1)pi/2K) and
  // w_k = (1/K)(r^2-u_k^2)/(a^2+r^2-u_k^2). Node count doubles until stable.
  const auto atom = deformation_atom(mu.n, a);
  Complex prev{0.0, 0.0};
  for (std::size_t K = 32; K <= (1u << 16); K *= 2) {
    std::vector<double> xs(K), ws(K);
    for (std::size_t k = 0; k < K; ++k) {
      const double u = r * std::cos((2.0 * static_cast<double>(k) + 1.0) * kPi /
                                    (2.0 * static_cast<double>(K)));
      const double q = r * r - u * u;
      xs[k] = a + u;
      ws[k] = q / ((a * a + q) * static_cast<double>(K));
    }
    Complex G = kernels::cauchy_sum(xs.data(), ws.data(), K, z.real(), z.imag());
    if (K > 32 && std::abs(G - prev) <= 1e-13 * (1.0 + std::abs(G))) {
      prev = G;
      break;
    }
    prev = G;
  }
  Complex G = prev;
  if (atom.w > 0.0) G += atom.w / (z - atom.x);
  return G;
}

Complex reciprocal_cauchy(const CompactMeasure& mu, Complex z) {
  return 1.0 / cauchy_transform(mu, z);
}

// ---------------------------------------------------------------------------
// Stieltjes inversion
// ---------------------------------------------------------------------------

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
  const double right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

double integrate_density(const std::function<Complex(Complex)>& G, double x0, double x1,
                         double y, double tol, std::size_t min_panels = 64) {
  const auto f = [&](double x) { return -G(Complex{x, y}).imag() / kPi; };
  // Pre-split at the Poisson-kernel scale so narrow peaks are seen before the
  // adaptive pass refines them.
  const std::size_t panels = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil((x1 - x0) / (0.5 * y))), min_panels, 8192);
  double total = 0.0;
  double xa = x0, fxa = f(xa);
  for (std::size_t i = 0; i < panels; ++i) {
    const double xb = x0 + (x1 - x0) * static_cast<double>(i + 1) / static_cast<double>(panels);
    const double xm = 0.5 * (xa + xb);
    const double fxb = f(xb), fxm = f(xm);
    const double whole = (xb - xa) * (fxa + 4.0 * fxm + fxb) / 6.0;
    total += adaptive_simpson(f, xa, xb, fxa, fxm, fxb, whole,
                              tol / static_cast<double>(panels), 12);
    xa = xb;
    fxa = fxb;
  }
  return total;
}

}  // namespace

double stieltjes_invert(const std::function<Complex(Complex)>& G, double x0, double x1,
                        const StieltjesOptions& opts) {
  if (!(x0 < x1)) throw std::domain_error("stieltjes_invert: requires x0 < x1");
  const auto& ys = opts.y_levels;
  if (ys.size() < 3) throw ConfigError("stieltjes_invert: need at least 3 y levels");
  std::vector<double> I(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i)
    I[i] = integrate_density(G, x0, x1, ys[i], opts.quad_tol);

  // Least-squares fit I(y) = I0 + c1 sqrt(y) + c2 y. Edge-of-support mass
  // smoothed by the Poisson kernel leaks like sqrt(y); interior atoms and
  // smooth densities contribute the linear term.
  const std::size_t L = ys.size();
  double M[3][3] = {};
  double rhs[3] = {};
  for (std::size_t i = 0; i < L; ++i) {
    const double phi[3] = {1.0, std::sqrt(ys[i]), ys[i]};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) M[r][c] += phi[r] * phi[c];
      rhs[r] += phi[r] * I[i];
    }
  }
  // 3x3 Gaussian elimination
  double sol[3] = {};
  {
    double aug[3][4];
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) aug[r][c] = M[r][c];
      aug[r][3] = rhs[r];
    }
    for (int p = 0; p < 3; ++p) {
      int piv = p;
      for (int r = p + 1; r < 3; ++r)
        if (std::fabs(aug[r][p]) > std::fabs(aug[piv][p])) piv = r;
      std::swap(aug[p], aug[piv]);
      for (int r = p + 1; r < 3; ++r) {
        const double q = aug[r][p] / aug[p][p];
        for (int c = p; c < 4; ++c) aug[r][c] -= q * aug[p][c];
      }
    }
    for (int r = 2; r >= 0; --r) {
      double s = aug[r][3];
      for (int c = r + 1; c < 3; ++c) s -= aug[r][c] * sol[c];
      sol[r] = s / aug[r][r];
    }
  }
  double rss = 0.0;
  for (std::size_t i = 0; i < L; ++i) {
    const double fit = sol[0] + sol[1] * std::sqrt(ys[i]) + sol[2] * ys[i];
    rss += (I[i] - fit) * (I[i] - fit);
  }
  if (L > 3 && std::sqrt(rss / static_cast<double>(L)) > opts.extrapolation_tol)
    throw NumericalFailure("stieltjes_invert: extrapolation did not settle");
  return sol[0];
}

// ---------------------------------------------------------------------------
// Monotone convolution
// ---------------------------------------------------------------------------

CompactMeasure monotone_convolve(const CompactMeasure& mu, const CompactMeasure& nu,
                                 const ConvolutionGrid& grid) {
  // f_{nu} = z - b when nu = delta_b, so mu |> delta_b translates mu by b.
  if (nu.is_atomic() && nu.atoms.size() == 1 && mu.is_atomic()) {
    const double b = nu.atoms.front().x;
    auto shifted = mu.atoms;
    for (auto& at : shifted) at.x += b;
    return CompactMeasure::from_atoms(std::move(shifted));
  }

  const auto G_lambda = [&](Complex z) {
    const Complex fz = reciprocal_cauchy(nu, z);
    return cauchy_transform(mu, fz);
  };

  const double lo = mu.A + nu.A - grid.margin;
  const double hi = mu.B + nu.B + grid.margin;
  const std::size_t bins = std::max<std::size_t>(grid.bins, 8);

  // Per-bin Stieltjes masses at each y level, extrapolated bin by bin.
  const auto& ys = grid.stieltjes.y_levels;
  std::vector<std::vector<double>> bin_mass(ys.size(), std::vector<double>(bins, 0.0));
  for (std::size_t yi = 0; yi < ys.size(); ++yi) {
    for (std::size_t b = 0; b < bins; ++b) {
      const double x0 = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
      const double x1 = lo + (hi - lo) * static_cast<double>(b + 1) / static_cast<double>(bins);
      bin_mass[yi][b] = integrate_density(G_lambda, x0, x1, ys[yi],
                                          grid.stieltjes.quad_tol * 10.0, 4);
    }
  }

  std::vector<CompactMeasure::Atom> atoms(bins);
  double total = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    // same sqrt-aware extrapolation as stieltjes_invert, per bin
    double M[3][3] = {};
    double rhs[3] = {};
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double phi[3] = {1.0, std::sqrt(ys[i]), ys[i]};
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) M[r][c] += phi[r] * phi[c];
        rhs[r] += phi[r] * bin_mass[i][b];
      }
    }
    // Cramer solve of the 3x3 system
    const auto det3 = [](const double m[3][3]) {
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double d0 = det3(M);
    double Mx[3][3];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) Mx[r][c] = (c == 0) ? rhs[r] : M[r][c];
    double w = det3(Mx) / d0;
    if (w < 0.0) w = 0.0;
    const double x0 = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
    const double x1 = lo + (hi - lo) * static_cast<double>(b + 1) / static_cast<double>(bins);
    atoms[b] = {0.5 * (x0 + x1), w};
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-3)
    throw NumericalFailure("monotone_convolve: inverted mass " + std::to_string(total));
  std::vector<CompactMeasure::Atom> kept;
  for (const auto& at : atoms) {
    if (at.w > 1e-14) kept.push_back({at.x, at.w / total});
  }
  return CompactMeasure::from_atoms(std::move(kept));
}

// ---------------------------------------------------------------------------
// Sigma maps and path metric
// ---------------------------------------------------------------------------

SigmaMap sigma_from_measure(const CompactMeasure& mu) {
  auto copy = std::make_shared<CompactMeasure>(mu);
  return {[copy](Complex z) { return reciprocal_cauchy(*copy, z); }, mu.A, mu.B};
}

SigmaMap sigma_from_chain(const SlitChain& chain, std::size_t m) {
  auto copy = std::make_shared<SlitChain>(chain);
  const auto iv = chain_base_interval(chain, m);
  return {[copy, m](Complex z) { return eval_chain_prefix(*copy, m, z); }, iv.lo, iv.hi};
}

double sigma_distance(const SigmaMap& f, const SigmaMap& g, double a, std::size_t grid) {
  if (!(a > 0.0)) throw std::domain_error("sigma_distance: a must be positive");
  const double R = std::max({std::fabs(f.A), std::fabs(f.B), std::fabs(g.A),
                             std::fabs(g.B), 1.0}) +
                   1.0 + 1.0 / a;
  double sup = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = -R + 2.0 * R * static_cast<double>(i) / static_cast<double>(grid - 1);
    const Complex z{x, a};
    sup = std::max(sup, std::abs(f.eval(z) - g.eval(z)));
  }
  return sup + std::max(std::fabs(f.A - g.A), std::fabs(f.B - g.B));
}

double path_distance(const SigmaPath& P, const SigmaPath& Q, double a) {
  if (P.times.size() != Q.times.size())
    throw std::domain_error("path_distance: mismatched time grids");
  for (std::size_t i = 0; i < P.times.size(); ++i) {
    if (std::fabs(P.times[i] - Q.times[i]) > 1e-12)
      throw std::domain_error("path_distance: mismatched time grids");
  }
  std::vector<double> dist(P.times.size());
  for (std::size_t i = 0; i < P.times.size(); ++i)
    dist[i] = sigma_distance(P.maps[i], Q.maps[i], a);

  constexpr int N = 30;  // 2^-30 < 1e-9 tail
  double total = 0.0;
  for (int k = 1; k <= N; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < P.times.size(); ++i) {
      if (P.times[i] <= static_cast<double>(k) + 1e-12) s = std::max(s, dist[i]);
    }
    total += std::pow(0.5, k) * s / (1.0 + s);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

nlohmann::json measure_to_json(const CompactMeasure& mu) {
  nlohmann::json doc;
  if (mu.is_atomic()) {
    auto arr = nlohmann::json::array();
    for (const auto& at : mu.atoms) arr.push_back({at.x, at.w});
    doc["atoms"] = std::move(arr);
  } else {
    doc["family"] = "arcsine";
    doc["n"] = mu.n;
    doc["shift"] = mu.shift;
  }
  return doc;
}

CompactMeasure measure_from_json(const nlohmann::json& doc) {
  if (doc.contains("atoms")) {
    std::vector<CompactMeasure::Atom> atoms;
    for (const auto& item : doc.at("atoms")) {
      if (!item.is_array() || item.size() != 2)
        throw ConfigError("measure atoms must be [x, w] pairs");
      atoms.push_back({item.at(0).get<double>(), item.at(1).get<double>()});
    }
    return CompactMeasure::from_atoms(std::move(atoms));
  }
  if (doc.contains("family")) {
    const auto fam = doc.at("family").get<std::string>();
    if (fam != "arcsine") throw ConfigError("unknown measure family: " + fam);
    const long n = doc.at("n").get<long>();
    const double shift = doc.value("shift", 0.0);
    return CompactMeasure::arcsine(n, shift);
  }
  throw ConfigError("measure document needs \"atoms\" or \"family\"");
}

}  // namespace dle
