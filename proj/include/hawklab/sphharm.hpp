#pragma once

// Real orthonormal spherical harmonics on S^2, band-limited transforms on
// Gauss-Legendre x uniform-phi grids, and exact projected products.
//
// Conventions: coefficients are indexed (l,m) lexicographically, length
// (L+1)^2 for band limit L.  m < 0 labels the sine branch, m > 0 the cosine
// branch, m = 0 the zonal functions; no Condon-Shortley phase.  With these
// choices Y_{1,1} = sqrt(3/4pi) sin(theta) cos(phi), Y_{2,0} =
// sqrt(5/16pi) (3cos^2(theta) - 1), etc.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hawklab/base.hpp"
#include "hawklab/quadrature.hpp"

namespace hawklab::sphharm {

struct HarmonicIndex {
  int l, m;
};

// flat index of (l,m) within a band-limited coefficient vector
inline int lm_index(int l, int m) { return l * l + l + m; }

struct SphGrid {
  int L = 0;           // band limit the grid is certified for
  int n_theta = 0;     // Gauss-Legendre colatitude nodes
  int n_phi = 0;       // uniform longitudes, phi_j = 2 pi j / n_phi
  std::vector<double> x;          // cos(theta), descending (theta ascending)
  std::vector<double> sin_theta;  // sin(theta) >= 0
  std::vector<double> theta;
  std::vector<double> w;          // GL weights, sum = 2
  std::vector<double> phi;
};

// Gauss-Legendre x uniform grid exact for all integrands of harmonic degree
// <= 4L: n_theta = 2L+2 resolves polynomial degree 4L+3 in cos(theta),
// n_phi = 4L+1 resolves Fourier modes through 4L.
inline SphGrid build_grid(int L, int n_theta, int n_phi) {
  if (L < 4) throw config_error("build_grid: band limit must be >= 4");
  if (n_theta < 2 * L + 2)
    throw resolution_error("build_grid: n_theta < 2L+2 cannot certify band limit");
  if (n_phi < 4 * L + 1)
    throw resolution_error("build_grid: n_phi < 4L+1 cannot certify band limit");
  SphGrid g;
  g.L = L;
  g.n_theta = n_theta;
  g.n_phi = n_phi;
  Quadrature1D q = gauss_legendre(n_theta);
  g.x.resize(n_theta);
  g.w.resize(n_theta);
  g.theta.resize(n_theta);
  g.sin_theta.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    // ascending theta = descending x
    g.x[i] = q.x[n_theta - 1 - i];
    g.w[i] = q.w[n_theta - 1 - i];
    g.theta[i] = std::acos(g.x[i]);
    g.sin_theta[i] = std::sqrt((1.0 - g.x[i]) * (1.0 + g.x[i]));
  }
  g.phi.resize(n_phi);
  for (int j = 0; j < n_phi; ++j)
    g.phi[j] = 2.0 * std::numbers::pi * j / n_phi;
  return g;
}

inline SphGrid build_grid(int L) { return build_grid(L, 2 * L + 2, 4 * L + 1); }

// 2x oversampling in both directions; used wherever point-wise nonlinear maps
// (exp, products of fields) are analyzed back to band L.
inline SphGrid oversampled_grid(int L) {
  return build_grid(L, 2 * (2 * L + 2), 2 * (4 * L + 1));
}

struct GridField {
  SphGrid grid;
  std::vector<double> v;  // theta-major: v[i*n_phi + j]

  double& at(int i, int j) { return v[static_cast<size_t>(i) * grid.n_phi + j]; }
  double at(int i, int j) const { return v[static_cast<size_t>(i) * grid.n_phi + j]; }
};

inline GridField make_field(const SphGrid& g) {
  GridField f;
  f.grid = g;
  f.v.assign(static_cast<size_t>(g.n_theta) * g.n_phi, 0.0);
  return f;
}

template <class F>
GridField make_field(const SphGrid& g, F&& fn) {
  GridField f = make_field(g);
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      f.at(i, j) = fn(g.theta[i], g.phi[j]);
  return f;
}

// Quadrature of f over S^2.  Summation order is fixed (phi within theta,
// ascending) so results are reproducible bit for bit.
inline double integrate(const GridField& f) {
  const int nt = f.grid.n_theta, np = f.grid.n_phi;
  double total = 0.0;
  for (int i = 0; i < nt; ++i) {
    double row = 0.0;
    const double* p = f.v.data() + static_cast<size_t>(i) * np;
    for (int j = 0; j < np; ++j) row += p[j];
    total += f.grid.w[i] * row;
  }
  return total * (2.0 * std::numbers::pi / np);
}

inline double sup_norm(const GridField& f) {
  double s = 0.0;
  for (double v : f.v) s = std::max(s, std::abs(v));
  return s;
}

struct SphCoeffs {
  int L = 0;
  std::vector<double> c;  // length (L+1)^2

  static SphCoeffs zeros(int L) {
    SphCoeffs out;
    out.L = L;
    out.c.assign(static_cast<size_t>(L + 1) * (L + 1), 0.0);
    return out;
  }
  double& at(int l, int m) {
    check_index(l, m);
    return c[lm_index(l, m)];
  }
  double at(int l, int m) const {
    check_index(l, m);
    return c[lm_index(l, m)];
  }
  void check_index(int l, int m) const {
    if (l < 0 || std::abs(m) > l) throw std::domain_error("SphCoeffs: invalid (l,m)");
    if (l > L) throw std::range_error("SphCoeffs: l exceeds band limit");
  }
  double l2_norm() const {
    double s = 0.0;
    for (double x : c) s += x * x;
    return std::sqrt(s);
  }
};

inline SphCoeffs resize_band(const SphCoeffs& a, int L) {
  SphCoeffs out = SphCoeffs::zeros(L);
  int Lc = std::min(a.L, L);
  for (int l = 0; l <= Lc; ++l)
    for (int m = -l; m <= l; ++m) out.c[lm_index(l, m)] = a.c[lm_index(l, m)];
  return out;
}

inline SphCoeffs operator+(const SphCoeffs& a, const SphCoeffs& b) {
  SphCoeffs out = resize_band(a, std::max(a.L, b.L));
  for (int l = 0; l <= b.L; ++l)
    for (int m = -l; m <= l; ++m) out.c[lm_index(l, m)] += b.c[lm_index(l, m)];
  return out;
}

inline SphCoeffs operator-(const SphCoeffs& a, const SphCoeffs& b) {
  SphCoeffs out = resize_band(a, std::max(a.L, b.L));
  for (int l = 0; l <= b.L; ++l)
    for (int m = -l; m <= l; ++m) out.c[lm_index(l, m)] -= b.c[lm_index(l, m)];
  return out;
}

inline SphCoeffs operator*(double s, const SphCoeffs& a) {
  SphCoeffs out = a;
  for (double& x : out.c) x *= s;
  return out;
}

// ---------------------------------------------------------------------------
// Normalized associated Legendre triangle.  tri[l(l+1)/2 + m] = \bar P_l^m(x)
// with normalization such that Y_{l,0} = \bar P_l^0 and Y_{l,+-m} =
// sqrt(2) \bar P_l^m {cos,sin}(m phi) are L^2-orthonormal on S^2.

inline int tri_index(int l, int m) { return l * (l + 1) / 2 + m; }

inline void legendre_triangle(int L, double x, double s, double* tri) {
  double pmm = 1.0 / (2.0 * std::sqrt(std::numbers::pi));  // \bar P_0^0
  for (int m = 0; m <= L; ++m) {
    if (m > 0) pmm *= s * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    tri[tri_index(m, m)] = pmm;
    if (m == L) break;
    double p_prev = pmm;
    double p_cur = std::sqrt(2.0 * m + 3.0) * x * pmm;
    tri[tri_index(m + 1, m)] = p_cur;
    for (int l = m + 2; l <= L; ++l) {
      double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
      double b = std::sqrt(((l - 1.0) * (l - 1.0) - static_cast<double>(m) * m) /
                           (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      double p = a * (x * p_cur - b * p_prev);
      p_prev = p_cur;
      p_cur = p;
      tri[tri_index(l, m)] = p;
    }
  }
}

// Point evaluation of one harmonic.
inline double eval_real_ylm(HarmonicIndex idx, double theta, double phi) {
  const int l = idx.l, m = idx.m, am = std::abs(idx.m);
  if (l < 0 || am > l) throw std::domain_error("eval_real_ylm: invalid (l,m)");
  const double x = std::cos(theta), s = std::sin(theta);
  std::vector<double> tri(static_cast<size_t>(tri_index(l, l)) + 1);
  legendre_triangle(l, x, std::abs(s), tri.data());
  double p = tri[tri_index(l, am)];
  if (m == 0) return p;
  const double r = std::numbers::sqrt2 * p;
  return m > 0 ? r * std::cos(am * phi) : r * std::sin(am * phi);
}

namespace detail {

// cos/sin tables for m = 0..M at the grid longitudes
inline void fourier_tables(const SphGrid& g, int M, std::vector<double>& ct,
                           std::vector<double>& st) {
  const int np = g.n_phi;
  ct.assign(static_cast<size_t>(M + 1) * np, 0.0);
  st.assign(static_cast<size_t>(M + 1) * np, 0.0);
  for (int m = 0; m <= M; ++m)
    for (int j = 0; j < np; ++j) {
      ct[static_cast<size_t>(m) * np + j] = std::cos(m * g.phi[j]);
      st[static_cast<size_t>(m) * np + j] = std::sin(m * g.phi[j]);
    }
}

// Analysis to an explicit band (no capacity checks; callers certify).
inline SphCoeffs analyze_band(const GridField& f, int Lb) {
  const SphGrid& g = f.grid;
  const int nt = g.n_theta, np = g.n_phi;
  std::vector<double> ct, st;
  fourier_tables(g, Lb, ct, st);
  std::vector<double> tri(static_cast<size_t>(tri_index(Lb, Lb)) + 1);
  std::vector<double> C(Lb + 1), S(Lb + 1);
  SphCoeffs out = SphCoeffs::zeros(Lb);
  const double sq2 = std::numbers::sqrt2;
  for (int i = 0; i < nt; ++i) {
    const double* row = f.v.data() + static_cast<size_t>(i) * np;
    for (int m = 0; m <= Lb; ++m) {
      const double* cm = ct.data() + static_cast<size_t>(m) * np;
      const double* sm = st.data() + static_cast<size_t>(m) * np;
      double a = 0.0, b = 0.0;
      for (int j = 0; j < np; ++j) {
        a += row[j] * cm[j];
        b += row[j] * sm[j];
      }
      C[m] = a;
      S[m] = b;
    }
    legendre_triangle(Lb, g.x[i], g.sin_theta[i], tri.data());
    const double wi = g.w[i];
    for (int l = 0; l <= Lb; ++l) {
      out.c[lm_index(l, 0)] += wi * tri[tri_index(l, 0)] * C[0];
      for (int m = 1; m <= l; ++m) {
        const double p = wi * sq2 * tri[tri_index(l, m)];
        out.c[lm_index(l, m)] += p * C[m];
        out.c[lm_index(l, -m)] += p * S[m];
      }
    }
  }
  const double scale = 2.0 * std::numbers::pi / np;
  for (double& x : out.c) x *= scale;
  return out;
}

inline GridField synthesize_band(const SphCoeffs& c, const SphGrid& g) {
  const int Lb = c.L, nt = g.n_theta, np = g.n_phi;
  std::vector<double> ct, st;
  fourier_tables(g, Lb, ct, st);
  std::vector<double> tri(static_cast<size_t>(tri_index(Lb, Lb)) + 1);
  std::vector<double> Gc(Lb + 1), Gs(Lb + 1);
  GridField f = make_field(g);
  const double sq2 = std::numbers::sqrt2;
  for (int i = 0; i < nt; ++i) {
    legendre_triangle(Lb, g.x[i], g.sin_theta[i], tri.data());
    for (int m = 0; m <= Lb; ++m) {
      double gc = 0.0, gs = 0.0;
      for (int l = m; l <= Lb; ++l) {
        const double p = tri[tri_index(l, m)];
        gc += p * c.c[lm_index(l, m)];
        if (m > 0) gs += p * c.c[lm_index(l, -m)];
      }
      Gc[m] = (m == 0) ? gc : sq2 * gc;
      Gs[m] = sq2 * gs;
    }
    double* row = f.v.data() + static_cast<size_t>(i) * np;
    for (int j = 0; j < np; ++j) {
      double v = Gc[0];
      for (int m = 1; m <= Lb; ++m)
        v += Gc[m] * ct[static_cast<size_t>(m) * np + j] +
             Gs[m] * st[static_cast<size_t>(m) * np + j];
      row[j] = v;
    }
  }
  return f;
}

}  // namespace detail

// Forward transform at the grid's certified band limit.
inline SphCoeffs analyze(const GridField& f) { return detail::analyze_band(f, f.grid.L); }

// Inverse transform; the grid must be certified for the coefficient band.
inline GridField synthesize(const SphCoeffs& c, const SphGrid& g) {
  if (g.L < c.L)
    throw dimension_error("synthesize: grid band limit below coefficient band limit");
  return detail::synthesize_band(c, g);
}

inline double sup_norm(const SphCoeffs& c, const SphGrid& g) {
  return sup_norm(synthesize(c, g));
}

inline SphCoeffs laplace_beltrami(const SphCoeffs& a) {
  SphCoeffs out = a;
  for (int l = 0; l <= a.L; ++l) {
    const double e = -static_cast<double>(l) * (l + 1);
    for (int m = -l; m <= l; ++m) out.c[lm_index(l, m)] *= e;
  }
  return out;
}

// Coefficients of phi |-> f(theta, phi - alpha).
inline SphCoeffs rotate_zonal(const SphCoeffs& a, double alpha) {
  SphCoeffs out = a;
  for (int l = 1; l <= a.L; ++l)
    for (int m = 1; m <= l; ++m) {
      const double cm = a.c[lm_index(l, m)], sm = a.c[lm_index(l, -m)];
      const double ca = std::cos(m * alpha), sa = std::sin(m * alpha);
      out.c[lm_index(l, m)] = cm * ca + sm * sa;
      out.c[lm_index(l, -m)] = -cm * sa + sm * ca;
    }
  return out;
}

// Band-limited projection of the point-wise product a*b onto band L_out.
// Components with l <= min(L_out, a.L + b.L) are exact: the internal grid is
// sized so quadrature of degree a.L + b.L + l integrands is exact.  An
// explicit grid must have that capacity or resolution_error is thrown.
inline SphCoeffs product_project(const SphCoeffs& a, const SphCoeffs& b, int L_out,
                                 const SphGrid* grid = nullptr) {
  if (L_out < 0) throw std::domain_error("product_project: negative band limit");
  const int L_an = std::min(L_out, a.L + b.L);
  const int need = a.L + b.L + L_an;
  SphGrid local;
  const SphGrid* g = grid;
  if (g) {
    if (2 * g->n_theta - 1 < need || g->n_phi < need + 1)
      throw resolution_error("product_project: grid cannot integrate the product exactly");
  } else {
    const int Lg = std::max({4, a.L, b.L, (need + 3) / 4});
    local = build_grid(Lg);
    g = &local;
  }
  GridField fa = detail::synthesize_band(a, *g);
  GridField fb = detail::synthesize_band(b, *g);
  for (size_t k = 0; k < fa.v.size(); ++k) fa.v[k] *= fb.v[k];
  SphCoeffs prod = detail::analyze_band(fa, L_an);
  return resize_band(prod, L_out);
}

// ---------------------------------------------------------------------------
// Degree-2 subspace helpers.  E2 vectors hold (lambda_{-2},...,lambda_2).

using E2Vector = std::array<double, 5>;

inline E2Vector project_E2(const SphCoeffs& a) {
  if (a.L < 2) throw dimension_error("project_E2: band limit must be >= 2");
  E2Vector v;
  for (int m = -2; m <= 2; ++m) v[m + 2] = a.c[lm_index(2, m)];
  return v;
}

inline SphCoeffs p_perp(const SphCoeffs& a) {
  SphCoeffs out = a;
  if (a.L >= 2)
    for (int m = -2; m <= 2; ++m) out.c[lm_index(2, m)] = 0.0;
  return out;
}

inline SphCoeffs embed_E2(const E2Vector& v, int L) {
  if (L < 2) throw dimension_error("embed_E2: band limit must be >= 2");
  SphCoeffs out = SphCoeffs::zeros(L);
  for (int m = -2; m <= 2; ++m) out.c[lm_index(2, m)] = v[m + 2];
  return out;
}

inline double e2_norm(const E2Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// |grad f|^2 as band-2L coefficients via the pointwise identity
// |grad f|^2 = (1/2) Lap(f^2) - f Lap f, all products exactly projected.
inline SphCoeffs grad_sq(const SphCoeffs& a) {
  const int L2 = 2 * a.L;
  SphCoeffs sq = product_project(a, a, L2);
  SphCoeffs ada = product_project(a, laplace_beltrami(a), L2);
  SphCoeffs out = laplace_beltrami(sq);
  for (size_t k = 0; k < out.c.size(); ++k) out.c[k] = 0.5 * out.c[k] - ada.c[k];
  return out;
}

// Quadrature value of int |grad x_i|^2 dmu over the unit sphere (i = 1,2,3
// the ambient coordinates); equals 8 pi / 3 for each.
inline double hersch_energy(const SphGrid& g, int i) {
  if (i < 1 || i > 3) throw std::domain_error("hersch_energy: coordinate index must be 1..3");
  const double k = std::sqrt(4.0 * std::numbers::pi / 3.0);
  SphCoeffs c = SphCoeffs::zeros(1);
  if (i == 1) c.at(1, 1) = k;       // x = sin(theta) cos(phi)
  else if (i == 2) c.at(1, -1) = k; // y = sin(theta) sin(phi)
  else c.at(1, 0) = k;              // z = cos(theta)
  return integrate(synthesize(grad_sq(c), g));
}

// Max deviation of the quadrature Gram matrix of the band-Lmax basis from the
// identity.  Each column is analyze(synthesize(e_lm)).
inline double orthonormality_max_dev(const SphGrid& g, int Lmax) {
  if (2 * g.n_theta - 1 < 2 * Lmax || g.n_phi < 2 * Lmax + 1)
    throw resolution_error("orthonormality_max_dev: grid cannot integrate degree-2Lmax products");
  double dev = 0.0;
  for (int l = 0; l <= Lmax; ++l)
    for (int m = -l; m <= l; ++m) {
      SphCoeffs e = SphCoeffs::zeros(Lmax);
      e.c[lm_index(l, m)] = 1.0;
      SphCoeffs col = detail::analyze_band(detail::synthesize_band(e, g), Lmax);
      for (int l2 = 0; l2 <= Lmax; ++l2)
        for (int m2 = -l2; m2 <= l2; ++m2) {
          const double want = (l2 == l && m2 == m) ? 1.0 : 0.0;
          dev = std::max(dev, std::abs(col.c[lm_index(l2, m2)] - want));
        }
    }
  return dev;
}

// ---------------------------------------------------------------------------
// Closed-form table of all 15 projected products of degree-2 harmonics, plus
// a 16th "degree closure" check that no component outside l in {0,2,4}
// survives.  Coefficients were derived by exact symbolic integration and are
// cross-checked against brute-force quadrature in the test suite.

struct GauntEntry {
  std::string name;
  double max_dev;  // worst coefficient deviation from the closed form (l <= 4)
};

struct GauntReport {
  std::vector<GauntEntry> entries;  // 15 products + closure
  double max_dev = 0.0;
  bool pass(double tol) const { return max_dev <= tol; }
};

namespace detail {

struct ProductIdentity {
  int m1, m2;  // degree-2 pair, m1 <= m2
  struct Term {
    int l, m;
    double coeff;
  };
  std::vector<Term> terms;
};

inline const std::vector<ProductIdentity>& product_identities() {
  static const std::vector<ProductIdentity> table = [] {
    const double pi = std::numbers::pi;
    const double c1 = 1.0 / (2.0 * std::sqrt(pi));
    const double A = std::sqrt(5.0 / pi) / 7.0;
    const double B = std::sqrt(5.0 / pi) / 14.0;
    const double C = std::sqrt(15.0 / pi) / 14.0;
    const double E = 3.0 / (7.0 * std::sqrt(pi));
    const double F = 1.0 / (14.0 * std::sqrt(pi));
    const double D = -2.0 / (7.0 * std::sqrt(pi));
    const double G = std::sqrt(35.0) / (14.0 * std::sqrt(pi));
    const double H = std::sqrt(30.0) / (14.0 * std::sqrt(pi));
    const double I = std::sqrt(10.0) / (28.0 * std::sqrt(pi));
    const double J = std::sqrt(70.0) / (28.0 * std::sqrt(pi));
    std::vector<ProductIdentity> t;
    t.push_back({-2, -2, {{0, 0, c1}, {2, 0, -A}, {4, 0, F}, {4, 4, -G}}});
    t.push_back({-2, -1, {{2, 1, C}, {4, 1, -I}, {4, 3, -J}}});
    t.push_back({-2, 0, {{2, -2, -A}, {4, -2, C}}});
    t.push_back({-2, 1, {{2, -1, C}, {4, -1, -I}, {4, -3, J}}});
    t.push_back({-2, 2, {{4, -4, G}}});
    t.push_back({-1, -1, {{0, 0, c1}, {2, 0, B}, {2, 2, -C}, {4, 0, D}, {4, 2, -A}}});
    t.push_back({-1, 0, {{2, -1, B}, {4, -1, H}}});
    t.push_back({-1, 1, {{2, -2, C}, {4, -2, A}}});
    t.push_back({-1, 2, {{2, -1, -C}, {4, -1, I}, {4, -3, J}}});
    t.push_back({0, 0, {{0, 0, c1}, {2, 0, A}, {4, 0, E}}});
    t.push_back({0, 1, {{2, 1, B}, {4, 1, H}}});
    t.push_back({0, 2, {{2, 2, -A}, {4, 2, C}}});
    t.push_back({1, 1, {{0, 0, c1}, {2, 0, B}, {2, 2, C}, {4, 0, D}, {4, 2, A}}});
    t.push_back({1, 2, {{2, 1, C}, {4, 1, -I}, {4, 3, J}}});
    t.push_back({2, 2, {{0, 0, c1}, {2, 0, -A}, {4, 0, F}, {4, 4, G}}});
    return t;
  }();
  return table;
}

}  // namespace detail

// Verifies every degree-2 product against its closed form on the given grid.
// The grid must certify band 8 so the full product (degree 4) can be analyzed
// with headroom for the closure scan.
inline GauntReport gaunt_table_check(const SphGrid& g) {
  if (g.L < 8)
    throw resolution_error("gaunt_table_check: grid band limit must be >= 8");
  GauntReport rep;
  double closure = 0.0;
  for (const auto& id : detail::product_identities()) {
    SphCoeffs a = SphCoeffs::zeros(2), b = SphCoeffs::zeros(2);
    a.at(2, id.m1) = 1.0;
    b.at(2, id.m2) = 1.0;
    GridField fa = detail::synthesize_band(a, g);
    GridField fb = detail::synthesize_band(b, g);
    for (size_t k = 0; k < fa.v.size(); ++k) fa.v[k] *= fb.v[k];
    SphCoeffs prod = detail::analyze_band(fa, 8);
    SphCoeffs want = SphCoeffs::zeros(4);
    for (const auto& t : id.terms) want.at(t.l, t.m) = t.coeff;
    double dev = 0.0;
    for (int l = 0; l <= 8; ++l)
      for (int m = -l; m <= l; ++m) {
        const double got = prod.c[lm_index(l, m)];
        if (l == 0 || l == 2 || l == 4)
          dev = std::max(dev, std::abs(got - want.c[lm_index(l, m)]));
        else
          closure = std::max(closure, std::abs(got));
      }
    rep.entries.push_back(
        {"Y(2," + std::to_string(id.m1) + ")*Y(2," + std::to_string(id.m2) + ")", dev});
    rep.max_dev = std::max(rep.max_dev, dev);
  }
  rep.entries.push_back({"closure(l outside {0,2,4})", closure});
  rep.max_dev = std::max(rep.max_dev, closure);
  return rep;
}

}  // namespace hawklab::sphharm
