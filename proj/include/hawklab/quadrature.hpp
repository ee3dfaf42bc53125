#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "hawklab/base.hpp"

namespace hawklab {

// One-dimensional quadrature: Gauss-Legendre rules (colatitude grids, radial
// volume panels) and a Gauss-Kronrod 7/15 pair for adaptive refinement.

struct Quadrature1D {
  std::vector<double> x;  // nodes on [-1,1], ascending
  std::vector<double> w;  // positive weights, sum = 2
};

// Gauss-Legendre rule of order n.  Roots of P_n by Newton iteration from the
// Chebyshev-angle guess; weights 2/((1-x^2) P_n'^2).  Nodes are mirrored so
// the rule is symmetric to the last bit.
inline Quadrature1D gauss_legendre(int n) {
  if (n < 1) throw std::domain_error("gauss_legendre: order must be >= 1");
  Quadrature1D q;
  q.x.assign(n, 0.0);
  q.w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = -p1 / dp;
      x += dx;
      if (std::abs(dx) < 1e-15 * std::max(1.0, std::abs(x))) {
        // one final polish
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        x -= p1 / dp;
        break;
      }
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // i = 0 is the largest root; mirror onto the ascending layout.
    q.x[n - 1 - i] = x;
    q.x[i] = -x;
    q.w[n - 1 - i] = w;
    q.w[i] = w;
  }
  if (n % 2 == 1) q.x[n / 2] = 0.0;
  return q;
}

// Gauss-Kronrod 7/15 pair on [a,b].  Nodes/weights from the standard tables.
struct GkEstimate {
  double value;
  double error;  // |K15 - G7|, a usable refinement signal for smooth f
};

template <class F>
GkEstimate gk15(F&& f, double a, double b) {
  static const double xgk[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static const double wgk[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static const double wg[4] = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = wgk[7] * fc;
  double resg = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * xgk[i];
    const double s = f(c - dx) + f(c + dx);
    resk += wgk[i] * s;
    if (i % 2 == 1) resg += wg[i / 2] * s;
  }
  return {resk * h, std::abs((resk - resg) * h)};
}

// Adaptive bisection until each panel satisfies err <= rel_tol*|value| +
// abs_floor.  Panels are visited left to right, so the summation order (and
// hence the result, bit for bit) is deterministic.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-12,
                          double abs_floor = 1e-300, int max_depth = 48) {
  struct Frame {
    double a, b;
    int depth;
  };
  double total = 0.0;
  std::vector<Frame> stack{{a, b, 0}};
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    GkEstimate e = gk15(f, fr.a, fr.b);
    if (e.error <= rel_tol * std::abs(e.value) + abs_floor || fr.depth >= max_depth) {
      if (fr.depth >= max_depth && e.error > 1e-6 * std::abs(e.value) + 1e-12)
        throw integration_error("integrate_adaptive: refinement stalled");
      total += e.value;
      continue;
    }
    const double m = 0.5 * (fr.a + fr.b);
    // push right first so the left half is processed first
    stack.push_back({m, fr.b, fr.depth + 1});
    stack.push_back({fr.a, m, fr.depth + 1});
  }
  return total;
}

}  // namespace hawklab
