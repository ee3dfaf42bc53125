#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hawklab/surfspec.hpp"

using namespace hawklab;
using namespace hawklab::surfspec;
namespace sh = hawklab::sphharm;

namespace {
constexpr double pi = std::numbers::pi;

// random conformal exponent through degree 4, rescaled to the requested sup
sh::SphCoeffs random_u(int band, double sup, std::uint64_t seed, std::uint64_t trial) {
  CounterRng rng(seed, trial);
  auto u = sh::SphCoeffs::zeros(band);
  for (int l = 0; l <= std::min(4, band); ++l)
    for (int m = -l; m <= l; ++m) u.at(l, m) = rng.next_symmetric();
  const double s = sh::sup_norm(u, sh::oversampled_grid(band));
  return (sup / s) * u;
}

GridField constant_field(const SphGrid& g, double c) {
  GridField f = sh::make_field(g);
  for (double& v : f.v) v = c;
  return f;
}
}  // namespace

TEST_CASE("round metric: area, curvature, normalization") {
  const auto m = make_metric(sh::SphCoeffs::zeros(4));
  REQUIRE(std::abs(m.area - 4.0 * pi) < 1e-12);
  for (double k : m.K.v) REQUIRE(k == 1.0);
  for (double e : m.eu.v) REQUIRE(e == 1.0);

  // normalize_area undoes a constant conformal shift
  auto u = random_u(8, 0.25, 3, 1);
  u.at(0, 0) += 0.8;
  const auto n = make_metric(normalize_area(u));
  REQUIRE(std::abs(n.area - 4.0 * pi) < 1e-12);

  auto neg = sh::SphCoeffs::zeros(4);
  neg.c[0] = 400.0;
  REQUIRE_THROWS_AS(normalize_area(neg), std::range_error);
}

TEST_CASE("total curvature is a conformal invariant") {
  // int K_g dmu_g = 4 pi for every conformal factor: the discrete analogue of
  // K e^u = 1 - (1/2) Lap u holding pointwise, so quadrature sees a band-
  // limited integrand regardless of u
  for (int t = 0; t < 20; ++t) {
    const auto m = make_metric(random_u(8, 0.3, 11, t));
    GridField keu = m.K;
    for (size_t k = 0; k < keu.v.size(); ++k) keu.v[k] *= m.eu.v[k];
    REQUIRE(std::abs(sh::integrate(keu) - 4.0 * pi) < 1e-10);
  }
}

TEST_CASE("weighted gram of the unit weight is the identity") {
  const SphGrid g = sh::oversampled_grid(12);
  const auto G = weighted_gram(constant_field(g, 1.0), 12);
  REQUIRE(G.rows() == 169);
  double dev = 0.0;
  for (int i = 0; i < G.rows(); ++i)
    for (int j = 0; j < G.cols(); ++j)
      dev = std::max(dev, std::abs(G(i, j) - (i == j ? 1.0 : 0.0)));
  REQUIRE(dev < 1e-13);
  REQUIRE((G - G.transpose()).norm() == 0.0);

  // a plain band-12 grid cannot integrate band-24 products
  const SphGrid small = sh::build_grid(8);
  REQUIRE_THROWS_AS(weighted_gram(constant_field(small, 1.0), 12), resolution_error);
}

TEST_CASE("round spectrum of the curvature operator") {
  const auto m = make_metric(sh::SphCoeffs::zeros(4));
  const auto rep = spectrum(m, m.K, 16);
  // -Lap + 1 on the round sphere: l(l+1) + 1 with multiplicity 2l+1
  REQUIRE(rep.eigenvalues.size() >= 3);
  REQUIRE(rep.eigenvalues[0].multiplicity == 1);
  REQUIRE(rep.eigenvalues[1].multiplicity == 3);
  REQUIRE(rep.eigenvalues[2].multiplicity == 5);
  REQUIRE(std::abs(rep.eigenvalues[0].value - 1.0) < 1e-10);
  REQUIRE(std::abs(rep.eigenvalues[1].value - 3.0) < 1e-10);
  REQUIRE(std::abs(rep.eigenvalues[2].value - 7.0) < 1e-10);
  REQUIRE(std::abs(rep.lambda2 - 3.0) < 1e-10);
  REQUIRE(std::abs(rep.Lambda2 - 3.0) < 1e-10);
  REQUIRE(std::abs(rep.esi_gap) < 1e-10);
  REQUIRE(std::abs(rep.area - 4.0 * pi) < 1e-12);
  REQUIRE(std::abs(rep.q_integral - 4.0 * pi) < 1e-11);
}

TEST_CASE("zero eigentriple of the shifted round operator") {
  // q = K - 3 kills the degree-1 block; its three eigenfunctions phi_i satisfy
  // sum phi_i^2 = const and sum |grad phi_i|^2 = const, the coordinate-map
  // normalization behind the conformal balancing argument
  const auto m = make_metric(sh::SphCoeffs::zeros(4));
  GridField q = m.K;
  for (double& v : q.v) v -= 3.0;
  const auto op = assemble_operator(m, q, 12);
  const auto sol = solve_pencil(op);

  std::vector<int> zero_idx;
  for (int i = 0; i < sol.values.size(); ++i)
    if (std::abs(sol.values(i)) < 1e-8) zero_idx.push_back(i);
  REQUIRE(zero_idx.size() == 3);

  const SphGrid g = m.eu.grid;
  GridField sumsq = constant_field(g, 0.0);
  GridField sumgrad = constant_field(g, 0.0);
  for (int i : zero_idx) {
    auto phi = sh::SphCoeffs::zeros(12);
    for (int a = 0; a < 169; ++a) phi.c[a] = sol.vectors(a, i);
    const GridField pf = sh::synthesize(resize_band(phi, g.L), g);
    const GridField gf = sh::synthesize(resize_band(sh::grad_sq(phi), g.L), g);
    for (size_t k = 0; k < sumsq.v.size(); ++k) {
      sumsq.v[k] += pf.v[k] * pf.v[k];
      sumgrad.v[k] += gf.v[k];
    }
  }
  // scaled so the round coordinate functions give exactly 1 and 2
  const double scale = 4.0 * pi / 3.0;
  for (size_t k = 0; k < sumsq.v.size(); ++k) {
    REQUIRE(std::abs(scale * sumsq.v[k] - 1.0) < 1e-10);
    REQUIRE(std::abs(scale * sumgrad.v[k] - 2.0) < 1e-10);
  }
}

TEST_CASE("eigenvalues shift with the potential, the gap does not") {
  const auto m = make_metric(normalize_area(random_u(8, 0.2, 21, 5)));
  GridField q = m.K;
  for (double& v : q.v) v -= 3.0;
  GridField qc = q;
  for (double& v : qc.v) v += 0.7;

  const auto a = spectrum(m, q, 8);
  const auto b = spectrum(m, qc, 8);
  REQUIRE(a.eigenvalues.size() >= 3);
  for (size_t i = 0; i < 3; ++i)
    REQUIRE(std::abs(b.eigenvalues[i].value - a.eigenvalues[i].value - 0.7) < 1e-10);
  REQUIRE(std::abs(b.lambda2 - a.lambda2 - 0.7) < 1e-10);
  REQUIRE(std::abs(b.esi_gap - a.esi_gap) < 1e-9);
}

TEST_CASE("constrained second eigenvalue never exceeds the unconstrained one") {
  for (int t = 0; t < 10; ++t) {
    const auto m = make_metric(random_u(8, 0.2, 31, t));
    const auto rep = spectrum(m, m.K, 8);
    REQUIRE(rep.Lambda2 <= rep.lambda2 + 1e-12);
  }
}

TEST_CASE("eigenvalue upper bound on normalized random metrics") {
  for (int t = 0; t < 20; ++t) {
    const auto m = make_metric(normalize_area(random_u(8, 0.2, 41, t)));
    GridField q = m.K;
    for (double& v : q.v) v -= 3.0;
    const auto rep = esi_check(m, q);
    REQUIRE(rep.gap >= -1e-8);
  }
  const auto off = make_metric(random_u(8, 0.2, 41, 100));
  GridField q = off.K;
  REQUIRE_THROWS_AS(esi_check(off, q), precondition_error);
}

TEST_CASE("conformal gradient identities for the coordinate map") {
  const auto zero = sh::SphCoeffs::zeros(8);
  const auto rep = grad_identity_check(zero, 0.0);
  REQUIRE(rep.sup_map_identity < 1e-13);
  REQUIRE(rep.sup_solution_identity.has_value());
  REQUIRE(*rep.sup_solution_identity < 1e-10);

  const auto plain = grad_identity_check(random_u(8, 0.2, 51, 0));
  REQUIRE(plain.sup_map_identity < 1e-13 * std::exp(0.2) + 1e-12);
  REQUIRE_FALSE(plain.sup_solution_identity.has_value());

  REQUIRE_THROWS_AS(grad_identity_check(random_u(8, 0.2, 51, 1), 0.5),
                    precondition_error);
}

TEST_CASE("stability inequality data on the round sphere") {
  const SphGrid g = sh::build_grid(4);
  CyData d{2.0, constant_field(g, 0.0), constant_field(g, 0.0), 4.0 * pi};
  const auto r = cy_inequality_check(d);
  REQUIRE(std::abs(r.lhs) < 1e-12);
  REQUIRE(r.rhs == 0.0);

  // positive ambient scalar curvature pushes the right side up
  CyData dp{2.0, constant_field(g, 0.0), constant_field(g, 1.5), 4.0 * pi};
  const auto rp = cy_inequality_check(dp);
  REQUIRE(std::abs(rp.rhs - 4.0 * pi) < 1e-12);

  CyData bad{2.0, constant_field(g, 0.0), constant_field(sh::build_grid(5), 0.0), 4.0 * pi};
  REQUIRE_THROWS_AS(cy_inequality_check(bad), dimension_error);
}

TEST_CASE("willmore energy and the two mass conventions") {
  const auto flat = willmore_and_hawking(4.0 * pi, 16.0 * pi, MassMode::flat);
  REQUIRE(std::abs(flat.willmore - 4.0 * pi) < 1e-14);
  REQUIRE(flat.hawking == 0.0);

  // the hyperbolic convention subtracts the 4|Sigma| ambient term
  const auto hyp = willmore_and_hawking(4.0 * pi, 16.0 * pi + 16.0 * pi, MassMode::hyperbolic);
  REQUIRE(std::abs(hyp.hawking) < 1e-14);

  REQUIRE_THROWS_AS(willmore_and_hawking(0.0, 1.0, MassMode::flat), std::domain_error);
  REQUIRE_THROWS_AS(willmore_and_hawking(-1.0, 1.0, MassMode::flat), std::domain_error);
}

TEST_CASE("assembly guards") {
  const auto m = make_metric(sh::SphCoeffs::zeros(4));
  REQUIRE_THROWS_AS(assemble_operator(m, m.K, 8), config_error);

  GridField wrong = constant_field(sh::build_grid(5), 1.0);
  REQUIRE_THROWS_AS(assemble_operator(m, wrong, 12), dimension_error);

  SpectralOperator op = assemble_operator(m, m.K, 12);
  op.mass = -Eigen::MatrixXd::Identity(op.mass.rows(), op.mass.cols());
  REQUIRE_THROWS_AS(solve_pencil(op), solve_error);
  REQUIRE_THROWS_AS(lambda2_meanzero(op), solve_error);
}
