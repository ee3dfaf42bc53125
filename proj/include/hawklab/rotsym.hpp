#pragma once

// Rotationally symmetric 3-metrics g = phi(r)^{-1} dr^2 + r^2 g_{S^2}:
// curvature scalars of centered spheres, Hawking mass, the candidate
// isoperimetric profile I(V) with one-sided derivatives, the second-order
// profile inequality, comparison-profile bounds, small-volume asymptotics,
// and the unit-normal-flow variation identities.
//
// Numerical backbone: V(r) is tabulated once per metric on a fixed panel
// schedule (each panel refined by Gauss-Kronrod error control, then frozen)
// and evaluated by prefix sums plus a 32-point Gauss rule on the partial
// panel.  That makes V(r) smooth to machine precision in r, which the
// finite-difference work on I(V) depends on; per-call adaptive quadrature
// would inject relative noise of ~1e-10 and destroy the second-difference
// checks.  Near a horizon the first panel is integrated in w = sqrt(r-r_min),
// removing the 1/sqrt(phi) singularity exactly.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "hawklab/base.hpp"
#include "hawklab/quadrature.hpp"

namespace hawklab::rotsym {

enum class MetricKind { flat, schwarzschild, hyperbolic, ads_schwarzschild, mass_profile, custom };

inline const char* kind_name(MetricKind k) {
  switch (k) {
    case MetricKind::flat: return "flat";
    case MetricKind::schwarzschild: return "schwarzschild";
    case MetricKind::hyperbolic: return "hyperbolic";
    case MetricKind::ads_schwarzschild: return "ads_schwarzschild";
    case MetricKind::mass_profile: return "mass_profile";
    default: return "custom";
  }
}

struct RadialMetric {
  MetricKind kind = MetricKind::flat;
  double m = 0.0;  // mass (schwarzschild, ads) or m_inf (mass_profile)
  double a = 0.0;  // mass_profile smoothing scale
  double r_min = 0.0;
  MassMode mode = MassMode::flat;
  std::function<double(double)> phi_fn, dphi_fn;  // custom kind only

  double phi(double r) const {
    switch (kind) {
      case MetricKind::flat: return 1.0;
      case MetricKind::schwarzschild: return 1.0 - 2.0 * m / r;
      case MetricKind::hyperbolic: return 1.0 + r * r;
      case MetricKind::ads_schwarzschild: return 1.0 + r * r - 2.0 * m / r;
      case MetricKind::mass_profile: {
        const double r3 = r * r * r;
        return 1.0 - 2.0 * m * r * r / (r3 + a * a * a);
      }
      default: return phi_fn(r);
    }
  }

  double dphi(double r) const {
    switch (kind) {
      case MetricKind::flat: return 0.0;
      case MetricKind::schwarzschild: return 2.0 * m / (r * r);
      case MetricKind::hyperbolic: return 2.0 * r;
      case MetricKind::ads_schwarzschild: return 2.0 * r + 2.0 * m / (r * r);
      case MetricKind::mass_profile: {
        const double a3 = a * a * a, r3 = r * r * r;
        const double den = r3 + a3;
        return -2.0 * m * r * (2.0 * a3 - r3) / (den * den);
      }
      default: return dphi_fn(r);
    }
  }

  // 1 - phi without cancellation (drives Hawking mass and scalar curvature)
  double one_minus_phi(double r) const {
    switch (kind) {
      case MetricKind::flat: return 0.0;
      case MetricKind::schwarzschild: return 2.0 * m / r;
      case MetricKind::hyperbolic: return -r * r;
      case MetricKind::ads_schwarzschild: return 2.0 * m / r - r * r;
      case MetricKind::mass_profile: {
        const double r3 = r * r * r;
        return 2.0 * m * r * r / (r3 + a * a * a);
      }
      default: return 1.0 - phi_fn(r);
    }
  }

  // the quantity whose r/2 multiple is the Hawking mass: 1-phi (flat mode)
  // or 1-phi+r^2 (hyperbolic mode), evaluated cancellation-free per kind
  double hawking_deficit(double r) const {
    if (mode == MassMode::flat) return one_minus_phi(r);
    switch (kind) {
      case MetricKind::hyperbolic: return 0.0;
      case MetricKind::ads_schwarzschild: return 2.0 * m / r;
      default: return one_minus_phi(r) + r * r;
    }
  }

  // scalar curvature R = -2 phi'/r + 2(1-phi)/r^2
  double scalar_curvature(double r) const {
    return -2.0 * dphi(r) / r + 2.0 * one_minus_phi(r) / (r * r);
  }

  double ric_nn(double r) const { return -dphi(r) / r; }

  // mass_profile helpers
  double mass_at(double r) const {
    const double r3 = r * r * r;
    return m * r3 / (r3 + a * a * a);
  }
  double dmass_at(double r) const {
    const double a3 = a * a * a, den = r * r * r + a3;
    return 3.0 * m * a3 * r * r / (den * den);
  }
};

inline RadialMetric flat_metric(MassMode mode = MassMode::flat) {
  RadialMetric g;
  g.kind = MetricKind::flat;
  g.mode = mode;
  return g;
}

inline RadialMetric schwarzschild_metric(double m) {
  if (!(m > 0.0)) throw std::domain_error("schwarzschild_metric: mass must be positive");
  RadialMetric g;
  g.kind = MetricKind::schwarzschild;
  g.m = m;
  g.r_min = 2.0 * m;
  g.mode = MassMode::flat;
  return g;
}

inline RadialMetric hyperbolic_metric() {
  RadialMetric g;
  g.kind = MetricKind::hyperbolic;
  g.mode = MassMode::hyperbolic;
  return g;
}

// horizon = the real root of r^3 + r - 2m (Cardano, then Newton polish)
inline RadialMetric ads_schwarzschild_metric(double m) {
  if (!(m > 0.0)) throw std::domain_error("ads_schwarzschild_metric: mass must be positive");
  RadialMetric g;
  g.kind = MetricKind::ads_schwarzschild;
  g.m = m;
  g.mode = MassMode::hyperbolic;
  const double disc = std::sqrt(m * m + 1.0 / 27.0);
  double r = std::cbrt(m + disc) + std::cbrt(m - disc);
  for (int i = 0; i < 3; ++i)
    r -= (r * r * r + r - 2.0 * m) / (3.0 * r * r + 1.0);
  g.r_min = r;
  return g;
}

// phi = 1 - 2 m(r)/r with m(r) = m_inf r^3/(r^3+a^3); horizon-free iff
// max_r 2m(r)/r = 2 m_inf 2^{2/3}/(3a) < 1, checked analytically.
inline RadialMetric mass_profile_metric(double m_inf, double a) {
  if (!(m_inf >= 0.0)) throw std::domain_error("mass_profile_metric: mass must be >= 0");
  if (!(a > 0.0)) throw std::domain_error("mass_profile_metric: scale must be positive");
  if (2.0 * m_inf * std::cbrt(4.0) / (3.0 * a) >= 1.0)
    throw std::domain_error("mass_profile_metric: 2m(r)/r reaches 1 (horizon forms)");
  RadialMetric g;
  g.kind = MetricKind::mass_profile;
  g.m = m_inf;
  g.a = a;
  g.mode = MassMode::flat;
  return g;
}

inline RadialMetric custom_metric(std::function<double(double)> phi,
                                  std::function<double(double)> dphi, double r_min,
                                  MassMode mode) {
  RadialMetric g;
  g.kind = MetricKind::custom;
  g.phi_fn = std::move(phi);
  g.dphi_fn = std::move(dphi);
  g.r_min = r_min;
  g.mode = mode;
  return g;
}

// ---------------------------------------------------------------------------
// V(r) = int_{r_min}^r 4 pi s^2 / sqrt(phi(s)) ds and its inverse.

class VolumeMap {
 public:
  explicit VolumeMap(const RadialMetric& g) : g_(g) {
    horizon_ = g_.r_min > 0.0 && g_.phi(g_.r_min + 1e-14 * std::max(1.0, g_.r_min)) < 0.5;
    w0_ = 0.25 * std::max(1.0, g_.r_min);
    next_width_ = w0_;
    bnd_.push_back(g_.r_min);
    acc_.push_back(0.0);
    sched_end_ = g_.r_min;
  }

  double r_min() const { return g_.r_min; }

  double volume(double r) const {
    if (r < g_.r_min) throw std::domain_error("VolumeMap::volume: r below inner boundary");
    if (r == g_.r_min) return 0.0;
    extend_to(r);
    const auto it = std::upper_bound(bnd_.begin(), bnd_.end(), r);
    const size_t k = static_cast<size_t>(it - bnd_.begin()) - 1;
    if (bnd_[k] == r) return acc_[k];
    return acc_[k] + partial(bnd_[k], r);
  }

  double dVdr(double r) const {
    const double p = g_.phi(r);
    if (!(p > 0.0)) throw std::domain_error("VolumeMap::dVdr: phi <= 0");
    return 4.0 * std::numbers::pi * r * r / std::sqrt(p);
  }

  double radius(double V) const {
    if (V < 0.0) throw std::domain_error("VolumeMap::radius: negative volume");
    if (V == 0.0) return g_.r_min;
    double hi = std::max(g_.r_min + std::max(1.0, w0_), 1.0);
    extend_to(hi);
    while (acc_.back() < V) extend_to(bnd_.back() * 2.0 + 1.0);
    double lo = g_.r_min;
    hi = bnd_.back();
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (volume(mid) < V ? lo : hi) = mid;
    }
    double r = hi;
    for (int i = 0; i < 3; ++i) {
      const double p = g_.phi(r);
      if (!(p > 0.0)) break;
      const double step = (volume(r) - V) / dVdr(r);
      const double rn = r - step;
      if (rn > g_.r_min && std::isfinite(rn)) r = rn;
    }
    return r;
  }

 private:
  double integrand(double s) const {
    const double p = g_.phi(s);
    if (!(p > 0.0))
      throw integration_error("VolumeMap: phi <= 0 inside the working range at r = " + fmt17(s));
    return 4.0 * std::numbers::pi * s * s / std::sqrt(p);
  }

  // w-substituted integrand for the horizon panel; when r_min + w^2 rounds
  // into r_min itself, phi falls back to its leading Taylor term phi'(r_min) w^2
  double integrand_w(double w) const {
    const double s = g_.r_min + w * w;
    double p = g_.phi(s);
    if (!(p > 0.0)) p = g_.dphi(g_.r_min) * w * w;
    if (!(p > 0.0))
      throw integration_error("VolumeMap: phi <= 0 near the inner boundary");
    return 2.0 * w * 4.0 * std::numbers::pi * s * s / std::sqrt(p);
  }

  bool in_horizon_panel(double x) const {
    return horizon_ && x < g_.r_min + w0_ * (1.0 - 1e-12);
  }

  // integral over [a,b]; inside the first horizon panel substitute
  // r = r_min + w^2 (integrand 2 w f(r_min + w^2), smooth at w = 0)
  template <class Rule>
  auto integ(double a, double b, Rule&& rule) const {
    if (in_horizon_panel(a)) {
      const double wa = std::sqrt(std::max(0.0, a - g_.r_min));
      const double wb = std::sqrt(std::max(0.0, b - g_.r_min));
      return rule([&](double w) { return integrand_w(w); }, wa, wb);
    }
    return rule([&](double s) { return integrand(s); }, a, b);
  }

  double gl32(double a, double b) const {
    static const Quadrature1D q = gauss_legendre(32);
    return integ(a, b, [&](auto&& f, double lo, double hi) {
      const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      double s = 0.0;
      for (int i = 0; i < 32; ++i) s += q.w[i] * f(c + h * q.x[i]);
      return s * h;
    });
  }

  double partial(double a, double r) const { return gl32(a, r); }

  // split [a,b] until the GK 7/15 error estimate clears tolerance; append the
  // accepted subpanels (deterministic: depends only on [a,b])
  void refine_append(double a, double b, int depth) const {
    GkEstimate e = integ(a, b, [](auto&& f, double lo, double hi) {
      return gk15(f, lo, hi);
    });
    if (e.error <= 1e-12 * std::abs(e.value) + 1e-300 || depth >= 40) {
      if (depth >= 40 && e.error > 1e-9 * std::abs(e.value) + 1e-12)
        throw integration_error("VolumeMap: panel refinement stalled");
      // store with the more accurate 32-point value so stored prefixes and
      // partial evaluations agree to round-off
      bnd_.push_back(b);
      acc_.push_back(acc_.back() + gl32(a, b));
      return;
    }
    const double mid = 0.5 * (a + b);
    refine_append(a, mid, depth + 1);
    refine_append(mid, b, depth + 1);
  }

  void extend_to(double r) const {
    while (sched_end_ < r) {
      const double a = sched_end_;
      const double b = a + next_width_;
      refine_append(a, b, 0);
      sched_end_ = b;
      next_width_ *= 1.5;
    }
  }

  RadialMetric g_;
  bool horizon_;
  double w0_;
  mutable double next_width_;
  mutable double sched_end_;
  mutable std::vector<double> bnd_;
  mutable std::vector<double> acc_;
};

// ---------------------------------------------------------------------------

struct SphereData {
  double r, area, H, A_sq, A0_sq, Ric_nn, R, V, m_H;
};

inline SphereData sphere_data(const RadialMetric& g, const VolumeMap& vm, double r) {
  if (!(r > g.r_min)) throw std::domain_error("sphere_data: r must exceed the inner boundary");
  const double p = g.phi(r);
  if (!(p > 0.0)) throw std::domain_error("sphere_data: phi(r) <= 0");
  SphereData d;
  d.r = r;
  d.area = 4.0 * std::numbers::pi * r * r;
  d.H = 2.0 * std::sqrt(p) / r;
  d.A_sq = 0.5 * d.H * d.H;
  d.A0_sq = 0.0;
  d.Ric_nn = g.ric_nn(r);
  d.R = g.scalar_curvature(r);
  d.V = vm.volume(r);
  d.m_H = 0.5 * r * g.hawking_deficit(r);
  return d;
}

inline SphereData sphere_data(const RadialMetric& g, double r) {
  VolumeMap vm(g);
  return sphere_data(g, vm, r);
}

// Lambda2 of the centered r-sphere: first nonzero Laplace eigenvalue of the
// induced round metric minus the constant Jacobi potential,
// 2/r^2 - (|A|^2 + Ric_nn) = 2(1-phi)/r^2 + phi'/r.
inline double stability_gap(const RadialMetric& g, double r) {
  if (!(r > g.r_min)) throw std::domain_error("stability_gap: r must exceed the inner boundary");
  return 2.0 * g.one_minus_phi(r) / (r * r) + g.dphi(r) / r;
}

struct CurvatureReport {
  double max_formula_dev = 0.0;   // worst closed-form identity deviation
  double max_fd_rel_dev = 0.0;    // worst |phi'_closed - phi'_fd| / max(1,|phi'|)
  double max_gauss_closure = 0.0; // worst |R/2 - Ric_nn + (H^2-|A|^2)/2 - 1/r^2|
};

// Validates the curvature closed forms: finite-difference guard on phi', the
// per-kind identities (schwarzschild R = 0; hyperbolic R = -6, Ric_nn = -2;
// ads R = -6; mass_profile R = 4 m'/r^2; flat all zero), and the Gauss
// closure of the induced sphere curvature.  Any mismatch throws check_error
// naming the metric and radius.
inline CurvatureReport curvature_check(const RadialMetric& g,
                                       const std::vector<double>& r_samples) {
  CurvatureReport rep;
  auto fail = [&](const char* what, double r) {
    throw check_error(std::string("curvature_check: ") + what + " regressed for " +
                      kind_name(g.kind) + " at r = " + fmt17(r));
  };
  for (double r : r_samples) {
    if (!(r > g.r_min)) fail("sample radius (must exceed r_min)", r);
    const double p = g.phi(r), dp = g.dphi(r);
    // 4th-order central difference guard on the supplied derivative
    const double h = 1e-5 * std::max(1.0, std::abs(r));
    const double fd =
        (g.phi(r - 2 * h) - 8.0 * g.phi(r - h) + 8.0 * g.phi(r + h) - g.phi(r + 2 * h)) /
        (12.0 * h);
    const double fd_dev = std::abs(fd - dp) / std::max(1.0, std::abs(dp));
    rep.max_fd_rel_dev = std::max(rep.max_fd_rel_dev, fd_dev);
    if (fd_dev > 1e-6) fail("phi' (finite-difference guard)", r);

    const double R = g.scalar_curvature(r), ric = g.ric_nn(r);
    double dev = 0.0;
    switch (g.kind) {
      case MetricKind::flat:
        dev = std::max(std::abs(R), std::abs(ric));
        break;
      case MetricKind::schwarzschild:
        dev = std::abs(R);
        break;
      case MetricKind::hyperbolic:
        dev = std::max(std::abs(R + 6.0), std::abs(ric + 2.0));
        break;
      case MetricKind::ads_schwarzschild:
        dev = std::abs(R + 6.0);
        break;
      case MetricKind::mass_profile:
        dev = std::abs(R - 4.0 * g.dmass_at(r) / (r * r));
        break;
      default:
        dev = 0.0;  // no closed-form identity for custom phi
    }
    rep.max_formula_dev = std::max(rep.max_formula_dev, dev);
    if (dev > 1e-10) fail("curvature closed form", r);

    // Gauss equation: K_Sigma = R/2 - Ric_nn + (H^2 - |A|^2)/2 must be 1/r^2
    const double H2 = 4.0 * p / (r * r);
    const double closure = 0.5 * R - ric + 0.5 * (H2 - 0.5 * H2) - 1.0 / (r * r);
    rep.max_gauss_closure = std::max(rep.max_gauss_closure, std::abs(closure));
    if (std::abs(closure) > 1e-10) fail("Gauss-equation closure", r);
  }
  return rep;
}

// Unit-speed normal flow dr/dt = sqrt(phi): RK4 trajectory, then 4th-order
// centered differences of the closed-form A, V, H along it.  Residuals:
// |dA/dt - H A| (H constant on each sphere, so int H dmu = H A),
// |dV/dt - A|, |dH/dt + |A|^2 + Ric_nn|.
inline std::array<double, 3> normal_flow_check(const RadialMetric& g, double r0,
                                               double t_span, double step) {
  if (!(r0 > g.r_min)) throw std::domain_error("normal_flow_check: r0 must exceed r_min");
  if (!(t_span > 0.0) || !(step > 0.0))
    throw std::domain_error("normal_flow_check: span and step must be positive");
  const int n = static_cast<int>(std::llround(t_span / step));
  if (n < 5) throw std::domain_error("normal_flow_check: too few steps for the stencil");
  auto f = [&](double r) {
    const double p = g.phi(r);
    if (!(p > 0.0)) throw std::range_error("normal_flow_check: flow exits the domain");
    return std::sqrt(p);
  };
  std::vector<double> r(n + 1);
  r[0] = r0;
  for (int k = 0; k < n; ++k) {
    const double k1 = f(r[k]);
    const double k2 = f(r[k] + 0.5 * step * k1);
    const double k3 = f(r[k] + 0.5 * step * k2);
    const double k4 = f(r[k] + step * k3);
    r[k + 1] = r[k] + step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  VolumeMap vm(g);
  std::vector<double> A(n + 1), V(n + 1), H(n + 1);
  for (int k = 0; k <= n; ++k) {
    A[k] = 4.0 * std::numbers::pi * r[k] * r[k];
    V[k] = vm.volume(r[k]);
    H[k] = 2.0 * std::sqrt(g.phi(r[k])) / r[k];
  }
  auto d5 = [&](const std::vector<double>& y, int k) {
    return (y[k - 2] - 8.0 * y[k - 1] + 8.0 * y[k + 1] - y[k + 2]) / (12.0 * step);
  };
  std::array<double, 3> res{0.0, 0.0, 0.0};
  for (int k = 2; k + 2 <= n; ++k) {
    const double Asq = 2.0 * g.phi(r[k]) / (r[k] * r[k]);
    res[0] = std::max(res[0], std::abs(d5(A, k) - H[k] * A[k]));
    res[1] = std::max(res[1], std::abs(d5(V, k) - A[k]));
    res[2] = std::max(res[2], std::abs(d5(H, k) + Asq + g.ric_nn(r[k])));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Candidate isoperimetric profile on centered spheres.

// sqrt(I) (16 pi - I I'^2); the normalized variant divides by (16 pi)^{3/2}
inline double hawking_plus(double I, double I_plus) {
  if (!(I > 0.0)) throw std::domain_error("hawking_plus: I must be positive");
  return std::sqrt(I) * (16.0 * std::numbers::pi - I * I_plus * I_plus);
}

inline double hawking_plus_normalized(double I, double I_plus) {
  return hawking_plus(I, I_plus) / std::pow(16.0 * std::numbers::pi, 1.5);
}

struct ProfileSample {
  double V, r, I, I_plus, H, mH_plus, mH_plus_normalized, R, stability_gap;
};

struct ProfileCurve {
  RadialMetric metric;
  std::vector<ProfileSample> samples;
  std::shared_ptr<const VolumeMap> map;
};

// I' by forward difference h = 1e-4 V with one Richardson step (the candidate
// profiles are smooth, so one-sided and two-sided derivatives agree and the
// kink machinery reduces to this tolerance).
inline ProfileCurve profile_curve(const RadialMetric& g, const std::vector<double>& V_grid) {
  if (V_grid.empty()) throw std::domain_error("profile_curve: empty volume grid");
  for (size_t i = 0; i < V_grid.size(); ++i) {
    if (!(V_grid[i] > 0.0)) throw std::domain_error("profile_curve: volumes must be positive");
    if (i > 0 && !(V_grid[i] > V_grid[i - 1]))
      throw std::domain_error("profile_curve: volume grid must be strictly increasing");
  }
  ProfileCurve curve;
  curve.metric = g;
  auto vm = std::make_shared<VolumeMap>(g);
  curve.map = vm;
  auto I_of = [&](double V) {
    const double r = vm->radius(V);
    return 4.0 * std::numbers::pi * r * r;
  };
  for (double V : V_grid) {
    ProfileSample s;
    s.V = V;
    s.r = vm->radius(V);
    s.I = 4.0 * std::numbers::pi * s.r * s.r;
    const double h = 1e-4 * V;
    const double d1 = (I_of(V + h) - s.I) / h;
    const double d2 = (I_of(V + 0.5 * h) - s.I) / (0.5 * h);
    s.I_plus = 2.0 * d2 - d1;
    s.H = 2.0 * std::sqrt(g.phi(s.r)) / s.r;
    s.mH_plus = hawking_plus(s.I, s.I_plus);
    s.mH_plus_normalized = s.mH_plus / std::pow(16.0 * std::numbers::pi, 1.5);
    s.R = g.scalar_curvature(s.r);
    s.stability_gap = stability_gap(g, s.r);
    curve.samples.push_back(s);
  }
  return curve;
}

struct MonotonicityReport {
  double min_increment = 0.0;       // min of consecutive Delta(mH_plus_normalized)
  double min_increment_at_V = 0.0;
  double bray_max_violation = 0.0;  // max of I'' - (16 pi - 3 I'^2 I)/(4 I^2)
  double bray_at_V = 0.0;
  double min_R = 0.0;               // min scalar curvature over samples
  double min_stability_gap = 0.0;
  int n_samples = 0;
};

// Nondecreasing maximal Hawking mass plus the second-order profile
// inequality.  I'' at each interior sample uses central second differences
// with h = 1e-2 V and one Richardson step; stencils tied to the sample
// spacing would lose the inequality to truncation error near equality cases.
inline MonotonicityReport monotonicity_report(const ProfileCurve& curve) {
  const auto& s = curve.samples;
  if (s.size() < 3) throw precondition_error("monotonicity_report: need at least 3 samples");
  MonotonicityReport rep;
  rep.n_samples = static_cast<int>(s.size());
  rep.min_increment = std::numeric_limits<double>::infinity();
  rep.bray_max_violation = -std::numeric_limits<double>::infinity();
  rep.min_R = std::numeric_limits<double>::infinity();
  rep.min_stability_gap = std::numeric_limits<double>::infinity();
  const VolumeMap& vm = *curve.map;
  auto I_of = [&](double V) {
    const double r = vm.radius(V);
    return 4.0 * std::numbers::pi * r * r;
  };
  for (size_t k = 0; k < s.size(); ++k) {
    rep.min_R = std::min(rep.min_R, s[k].R);
    rep.min_stability_gap = std::min(rep.min_stability_gap, s[k].stability_gap);
    if (k > 0) {
      const double inc = s[k].mH_plus_normalized - s[k - 1].mH_plus_normalized;
      if (inc < rep.min_increment) {
        rep.min_increment = inc;
        rep.min_increment_at_V = s[k].V;
      }
    }
    if (k == 0 || k + 1 == s.size()) continue;
    const double V = s[k].V, I = s[k].I;
    auto second = [&](double h) {
      return (I_of(V + h) - 2.0 * I + I_of(V - h)) / (h * h);
    };
    const double h = 1e-2 * V;
    const double Isec = (4.0 * second(0.5 * h) - second(h)) / 3.0;
    const double rhs =
        (16.0 * std::numbers::pi - 3.0 * s[k].I_plus * s[k].I_plus * I) / (4.0 * I * I);
    const double viol = Isec - rhs;
    if (viol > rep.bray_max_violation) {
      rep.bray_max_violation = viol;
      rep.bray_at_V = V;
    }
  }
  return rep;
}

// Closed-form hyperbolic ball profile: V(rho) = pi (sinh 2rho - 2rho),
// A(rho) = 4 pi sinh^2 rho.  Monotone, inverted by bisection + Newton.
inline double hyperbolic_ball_area(double V) {
  if (!(V >= 0.0)) throw std::domain_error("hyperbolic_ball_area: negative volume");
  if (V == 0.0) return 0.0;
  const double pi = std::numbers::pi;
  auto vol = [&](double rho) { return pi * (std::sinh(2.0 * rho) - 2.0 * rho); };
  double lo = 0.0, hi = std::max(1.0, std::cbrt(3.0 * V / (4.0 * pi)));
  while (vol(hi) < V) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (vol(mid) < V ? lo : hi) = mid;
  }
  double rho = hi;
  for (int i = 0; i < 3; ++i) {
    const double dp = pi * (2.0 * std::cosh(2.0 * rho) - 2.0);
    if (dp > 0.0) rho -= (vol(rho) - V) / dp;
  }
  const double sh = std::sinh(rho);
  return 4.0 * pi * sh * sh;
}

struct ShiReport {
  double max_gap = 0.0;  // max of I - I_comparison(V); bound holds if <= 1e-8
  double min_gap = 0.0;
  bool equality = false;   // |gap| <= 1e-8 at every sample
  bool strictly_below = false;  // gap < -1e-8 at every sample
};

// Comparison-profile bound: flat mode checks I <= (36 pi)^{1/3} V^{2/3}
// (equality exactly for the flat metric), hyperbolic mode checks against the
// hyperbolic ball profile.  Requires a horizon-free metric (a horizon makes
// I(0+) = 4 pi r_min^2 > 0, violating the comparison near V = 0) and a
// certified scalar-curvature sign on the sampled range.
inline ShiReport shi_bound_check(const ProfileCurve& curve, MassMode mode) {
  if (curve.metric.r_min > 0.0)
    throw precondition_error("shi_bound_check: metric has a horizon (r_min > 0)");
  const double floor_R = mode == MassMode::flat ? 0.0 : -6.0;
  for (const auto& s : curve.samples)
    if (s.R < floor_R - 1e-10)
      throw precondition_error("shi_bound_check: scalar-curvature bound not certified at V = " +
                               fmt17(s.V));
  ShiReport rep;
  rep.max_gap = -std::numeric_limits<double>::infinity();
  rep.min_gap = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  for (const auto& s : curve.samples) {
    const double comp = mode == MassMode::flat
                            ? std::cbrt(36.0 * std::numbers::pi) * std::pow(s.V, 2.0 / 3.0)
                            : hyperbolic_ball_area(s.V);
    const double gap = s.I - comp;
    rep.max_gap = std::max(rep.max_gap, gap);
    rep.min_gap = std::min(rep.min_gap, gap);
    max_abs = std::max(max_abs, std::abs(gap));
  }
  rep.equality = max_abs <= 1e-8;
  rep.strictly_below = rep.max_gap < -1e-8;
  return rep;
}

struct SmallVolumeReport {
  std::vector<double> volumes;   // 1e-2 ... 1e-8
  std::vector<double> ratios;    // I(V) / ((36 pi)^{1/3} V^{2/3})
  double ratio_at_smallest = 0.0;
  double extrapolated = 0.0;     // Richardson in V^{2/3} from the last two
};

inline std::vector<double> default_small_volumes() {
  std::vector<double> v;
  for (int e = 2; e <= 8; ++e) v.push_back(std::pow(10.0, -e));
  return v;
}

inline SmallVolumeReport small_volume_asymptotics(
    const RadialMetric& g, const std::vector<double>& V_sequence = default_small_volumes()) {
  if (g.r_min > 0.0)
    throw precondition_error("small_volume_asymptotics: metric has a horizon (r_min > 0)");
  if (V_sequence.size() < 2)
    throw precondition_error("small_volume_asymptotics: need at least 2 volumes");
  VolumeMap vm(g);
  SmallVolumeReport rep;
  for (double V : V_sequence) {
    if (!(V > 0.0)) throw std::domain_error("small_volume_asymptotics: volumes must be positive");
    const double r = vm.radius(V);
    const double I = 4.0 * std::numbers::pi * r * r;
    rep.volumes.push_back(V);
    rep.ratios.push_back(I / (std::cbrt(36.0 * std::numbers::pi) * std::pow(V, 2.0 / 3.0)));
  }
  rep.ratio_at_smallest = rep.ratios.back();
  const size_t n = rep.ratios.size();
  const double t1 = std::pow(rep.volumes[n - 2], 2.0 / 3.0);
  const double t2 = std::pow(rep.volumes[n - 1], 2.0 / 3.0);
  rep.extrapolated =
      rep.ratios[n - 1] - t2 * (rep.ratios[n - 1] - rep.ratios[n - 2]) / (t2 - t1);
  return rep;
}

}  // namespace hawklab::rotsym
