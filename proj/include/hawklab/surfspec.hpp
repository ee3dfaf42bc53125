#pragma once

// Intrinsic geometry and spectra of conformal sphere metrics g = e^u g0:
// Gauss curvature, area normalization, the Schroedinger pencil
// (-Lap_{g0} + e^u q) psi = lambda e^u psi in the harmonic basis, the
// mean-zero second eigenvalue Lambda2, and the related inequalities.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "hawklab/base.hpp"
#include "hawklab/sphharm.hpp"

namespace hawklab::surfspec {

using sphharm::GridField;
using sphharm::SphCoeffs;
using sphharm::SphGrid;

struct ConformalMetric {
  SphCoeffs u;     // g = e^u g0
  double area;     // int e^u dmu_{g0}
  GridField K;     // Gauss curvature of g on the working grid
  GridField eu;    // e^u on the same grid (cached for assembly/integration)
};

namespace detail {

inline void check_same_grid(const SphGrid& a, const SphGrid& b, const char* who) {
  if (a.n_theta != b.n_theta || a.n_phi != b.n_phi)
    throw dimension_error(std::string(who) + ": fields live on different grids");
}

inline GridField exp_on_grid(const SphCoeffs& u, const SphGrid& g) {
  GridField f = sphharm::synthesize(resize_band(u, g.L), g);
  double sup = sphharm::sup_norm(f);
  if (sup > 50.0) throw std::range_error("exp_on_grid: sup|u| > 50 overflows e^u");
  for (double& v : f.v) v = std::exp(v);
  return f;
}

}  // namespace detail

// K = e^{-u} (1 - (1/2) Lap_{g0} u), sampled on the 2x-oversampled grid of
// band max(4, u.L).
inline GridField gauss_curvature(const SphCoeffs& u, const SphGrid* grid = nullptr) {
  const int B = std::max(4, u.L);
  SphGrid local;
  if (!grid) {
    local = sphharm::oversampled_grid(B);
    grid = &local;
  } else if (grid->L < B) {
    throw dimension_error("gauss_curvature: grid band limit below u band limit");
  }
  SphCoeffs ub = resize_band(u, B);
  GridField uf = sphharm::synthesize(resize_band(ub, grid->L), *grid);
  GridField lf = sphharm::synthesize(resize_band(laplace_beltrami(ub), grid->L), *grid);
  GridField K = sphharm::make_field(*grid);
  for (size_t k = 0; k < K.v.size(); ++k)
    K.v[k] = std::exp(-uf.v[k]) * (1.0 - 0.5 * lf.v[k]);
  return K;
}

// Builds the metric on a grid large enough for spectral assembly at band
// min_band (default 12).
inline ConformalMetric make_metric(const SphCoeffs& u, int min_band = 12) {
  ConformalMetric m;
  m.u = u;
  const int B = std::max({4, u.L, min_band});
  SphGrid g = sphharm::oversampled_grid(B);
  m.eu = detail::exp_on_grid(u, g);
  m.area = sphharm::integrate(m.eu);
  m.K = gauss_curvature(u, &g);
  return m;
}

// Shift u by the constant that makes the area exactly 4 pi.
inline SphCoeffs normalize_area(const SphCoeffs& u) {
  const int B = std::max(4, u.L);
  GridField eu = detail::exp_on_grid(u, sphharm::oversampled_grid(B));
  const double area = sphharm::integrate(eu);
  if (!(area > 0.0)) throw std::domain_error("normalize_area: non-positive area");
  SphCoeffs out = resize_band(u, B);
  out.c[0] += std::log(4.0 * std::numbers::pi / area) * 2.0 * std::sqrt(std::numbers::pi);
  return out;
}

// Gram matrix G_ab = <Y_a, weight * Y_b> over the g0 measure, quadrature on
// the weight's grid.  Assembled as B diag(w) B^T and symmetrized; the basis
// is enumerated in (l,m) order.
inline Eigen::MatrixXd weighted_gram(const GridField& weight, int L_op) {
  const SphGrid& g = weight.grid;
  if (2 * g.n_theta - 1 < 4 * L_op || g.n_phi < 4 * L_op + 1)
    throw resolution_error("weighted_gram: grid cannot integrate band-2L_op products");
  const int N = (L_op + 1) * (L_op + 1);
  const int P = g.n_theta * g.n_phi;
  Eigen::MatrixXd B(N, P);
  std::vector<double> tri(static_cast<size_t>(sphharm::tri_index(L_op, L_op)) + 1);
  const double sq2 = std::numbers::sqrt2;
  for (int i = 0; i < g.n_theta; ++i) {
    sphharm::legendre_triangle(L_op, g.x[i], g.sin_theta[i], tri.data());
    for (int j = 0; j < g.n_phi; ++j) {
      const int p = i * g.n_phi + j;
      for (int l = 0; l <= L_op; ++l) {
        B(sphharm::lm_index(l, 0), p) = tri[sphharm::tri_index(l, 0)];
        for (int m = 1; m <= l; ++m) {
          const double base = sq2 * tri[sphharm::tri_index(l, m)];
          B(sphharm::lm_index(l, m), p) = base * std::cos(m * g.phi[j]);
          B(sphharm::lm_index(l, -m), p) = base * std::sin(m * g.phi[j]);
        }
      }
    }
  }
  Eigen::VectorXd wq(P);
  const double phi_w = 2.0 * std::numbers::pi / g.n_phi;
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      wq(i * g.n_phi + j) = g.w[i] * phi_w * weight.v[static_cast<size_t>(i) * g.n_phi + j];
  Eigen::MatrixXd Bw = B * wq.asDiagonal();
  Eigen::MatrixXd G(N, N);
  G.noalias() = Bw * B.transpose();
  G = 0.5 * (G + G.transpose()).eval();
  return G;
}

struct SpectralOperator {
  GridField q;
  Eigen::MatrixXd stiffness;  // diag(l(l+1)) + <Y_a, e^u q Y_b>
  Eigen::MatrixXd mass;       // <Y_a, e^u Y_b>
  int L_op = 0;
  double area = 0.0;
  double q_integral = 0.0;  // int q dmu_g
};

inline SpectralOperator assemble_operator(const ConformalMetric& m, const GridField& q,
                                          int L_op = 12) {
  if (L_op < 12) throw config_error("assemble_operator: band limit must be >= 12");
  detail::check_same_grid(m.eu.grid, q.grid, "assemble_operator");
  SpectralOperator op;
  op.q = q;
  op.L_op = L_op;
  op.area = m.area;
  GridField euq = q;
  for (size_t k = 0; k < euq.v.size(); ++k) euq.v[k] *= m.eu.v[k];
  op.q_integral = sphharm::integrate(euq);
  op.stiffness = weighted_gram(euq, L_op);
  for (int l = 0; l <= L_op; ++l)
    for (int mm = -l; mm <= l; ++mm)
      op.stiffness(sphharm::lm_index(l, mm), sphharm::lm_index(l, mm)) +=
          static_cast<double>(l) * (l + 1);
  op.mass = weighted_gram(m.eu, L_op);
  return op;
}

struct PencilSolution {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, mass-orthonormal
};

inline PencilSolution solve_pencil(const SpectralOperator& op) {
  Eigen::LLT<Eigen::MatrixXd> llt(op.mass);
  if (llt.info() != Eigen::Success)
    throw solve_error("solve_pencil: mass matrix not positive definite (assembly)");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(op.stiffness, op.mass);
  if (es.info() != Eigen::Success)
    throw solve_error("solve_pencil: generalized eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

struct EigenGroup {
  double value;  // first (smallest) member of the degenerate group
  int multiplicity;
};

inline std::vector<EigenGroup> group_spectrum(const Eigen::VectorXd& raw, int n_eigs,
                                              double tol = 1e-8) {
  std::vector<EigenGroup> groups;
  const int n = std::min<int>(n_eigs, static_cast<int>(raw.size()));
  for (int i = 0; i < n; ++i) {
    if (!groups.empty() && raw(i) - groups.back().value <= tol)
      ++groups.back().multiplicity;
    else
      groups.push_back({raw(i), 1});
  }
  return groups;
}

// Minimum Rayleigh quotient over the g-mean-zero subspace.  With mass = L L^T
// (L lower triangular) the transformed pencil is Ahat = L^{-1} S L^{-T}, and
// the constant function maps to the first coordinate axis, so deflation is
// exactly dropping row/column 0.
inline double lambda2_meanzero(const SpectralOperator& op) {
  Eigen::LLT<Eigen::MatrixXd> llt(op.mass);
  if (llt.info() != Eigen::Success)
    throw solve_error("lambda2_meanzero: mass matrix not positive definite (assembly)");
  Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd T = L.triangularView<Eigen::Lower>().solve(op.stiffness);
  Eigen::MatrixXd Ahat =
      L.triangularView<Eigen::Lower>().solve(T.transpose()).transpose();
  Ahat = 0.5 * (Ahat + Ahat.transpose()).eval();
  const int N = static_cast<int>(Ahat.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ahat.block(1, 1, N - 1, N - 1),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw solve_error("lambda2_meanzero: eigensolver failed");
  return es.eigenvalues()(0);
}

struct SpectrumReport {
  std::vector<EigenGroup> eigenvalues;
  double lambda2 = 0.0;  // second distinct eigenvalue
  double Lambda2 = 0.0;  // mean-zero-constrained second eigenvalue
  double esi_gap = 0.0;  // [8 pi + int q dmu_g] - lambda2 * area
  double area = 0.0;
  double q_integral = 0.0;
};

inline SpectrumReport spectrum_from_operator(const SpectralOperator& op, int n_eigs) {
  PencilSolution sol = solve_pencil(op);
  SpectrumReport rep;
  rep.eigenvalues = group_spectrum(sol.values, std::max(n_eigs, 4));
  std::vector<EigenGroup> all = group_spectrum(sol.values, static_cast<int>(sol.values.size()));
  if (all.size() < 2) throw solve_error("spectrum: fewer than two distinct eigenvalues");
  rep.lambda2 = all[1].value;
  rep.Lambda2 = lambda2_meanzero(op);
  rep.area = op.area;
  rep.q_integral = op.q_integral;
  rep.esi_gap = (8.0 * std::numbers::pi + op.q_integral) - rep.lambda2 * op.area;
  return rep;
}

inline SpectrumReport spectrum(const ConformalMetric& m, const GridField& q, int n_eigs = 16,
                               int L_op = 12) {
  return spectrum_from_operator(assemble_operator(m, q, L_op), n_eigs);
}

inline double lambda2_meanzero(const ConformalMetric& m, const GridField& q, int L_op = 12) {
  return lambda2_meanzero(assemble_operator(m, q, L_op));
}

struct EsiReport {
  double gap;        // must be >= -1e-8
  double lambda2;
  double area;
  double q_integral;
};

// Eigenvalue upper bound check; the metric must be area-normalized.
inline EsiReport esi_check(const ConformalMetric& m, const GridField& q, int L_op = 12) {
  if (std::abs(m.area - 4.0 * std::numbers::pi) > 1e-6)
    throw precondition_error("esi_check: metric is not area-normalized");
  SpectrumReport rep = spectrum(m, q, 4, L_op);
  return {rep.esi_gap, rep.lambda2, rep.area, rep.q_integral};
}

struct GradIdentityReport {
  double sup_map_identity;                  // sup|sum_i |grad_g x_i|^2 - 2 e^{-u}|
  std::optional<double> sup_solution_identity;  // sup||grad_g phi|^2 - (3 - K)|
};

// phi = (x1,x2,x3) as candidate conformal map.  The first identity is
// definitional (conformal gradient scaling); the second holds only on
// mean-field solutions, so requesting it requires a certified residual.
inline GradIdentityReport grad_identity_check(
    const SphCoeffs& u, std::optional<double> certified_residual_l2 = std::nullopt) {
  const int B = std::max(4, u.L);
  SphGrid g = sphharm::oversampled_grid(B);
  // sum_i |grad_{g0} x_i|^2 as band-2 coefficients (= 2 up to transform noise)
  SphCoeffs s0 = SphCoeffs::zeros(2);
  const double kx = std::sqrt(4.0 * std::numbers::pi / 3.0);
  for (int i = 0; i < 3; ++i) {
    SphCoeffs c = SphCoeffs::zeros(1);
    if (i == 0) c.at(1, 1) = kx;
    else if (i == 1) c.at(1, -1) = kx;
    else c.at(1, 0) = kx;
    s0 = s0 + sphharm::grad_sq(c);
  }
  GridField s0f = sphharm::synthesize(resize_band(s0, g.L), g);
  GridField uf = sphharm::synthesize(resize_band(u, g.L), g);
  GradIdentityReport rep{0.0, std::nullopt};
  for (size_t k = 0; k < s0f.v.size(); ++k) {
    const double emu = std::exp(-uf.v[k]);
    rep.sup_map_identity =
        std::max(rep.sup_map_identity, std::abs(emu * s0f.v[k] - 2.0 * emu));
  }
  if (certified_residual_l2) {
    if (!(*certified_residual_l2 <= 1e-10))
      throw precondition_error(
          "grad_identity_check: solution identity requested without a certified residual");
    GridField K = gauss_curvature(u, &g);
    double dev = 0.0;
    for (size_t k = 0; k < s0f.v.size(); ++k) {
      const double emu = std::exp(-uf.v[k]);
      dev = std::max(dev, std::abs(emu * s0f.v[k] - (3.0 - K.v[k])));
    }
    rep.sup_solution_identity = dev;
  }
  return rep;
}

// Per-surface data for the stable-CMC curvature inequality.  A0_sq and R are
// sampled w.r.t. the round metric scaled to total area `area`.
struct CyData {
  double H;
  GridField A0_sq;
  GridField R;
  double area;
};

struct CyResult {
  double lhs;  // 16 pi - int H^2
  double rhs;  // (2/3) int (R + |A0|^2)
};

inline CyResult cy_inequality_check(const CyData& d) {
  detail::check_same_grid(d.A0_sq.grid, d.R.grid, "cy_inequality_check");
  const double measure_scale = d.area / (4.0 * std::numbers::pi);
  const double lhs = 16.0 * std::numbers::pi - d.H * d.H * d.area;
  const double rhs =
      (2.0 / 3.0) * measure_scale * (sphharm::integrate(d.R) + sphharm::integrate(d.A0_sq));
  return {lhs, rhs};
}

struct WillmoreHawking {
  double willmore;
  double hawking;
};

inline WillmoreHawking willmore_and_hawking(double area, double H_sq_integral, MassMode mode) {
  if (!(area > 0.0)) throw std::domain_error("willmore_and_hawking: area must be positive");
  const double pi = std::numbers::pi;
  const double arg =
      mode == MassMode::flat ? H_sq_integral : H_sq_integral - 4.0 * area;
  WillmoreHawking out;
  out.willmore = 0.25 * arg;
  out.hawking = std::sqrt(area) * (16.0 * pi - arg) / std::pow(16.0 * pi, 1.5);
  return out;
}

}  // namespace hawklab::surfspec
