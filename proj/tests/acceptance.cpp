// Acceptance gate: every headline property of the laboratory, one line each,
// with its pinned tolerance.  Exit status is the number of failed criteria.
// argv[1] (optional for 1-12, required for 13) is the path to the CLI tool.
#include <hawklab/meanfield.hpp>
#include <hawklab/rotsym.hpp>
#include <hawklab/sphharm.hpp>
#include <hawklab/surfspec.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace sh = hawklab::sphharm;
namespace mf = hawklab::meanfield;
namespace ss = hawklab::surfspec;
namespace rs = hawklab::rotsym;
namespace fs = std::filesystem;
using hawklab::CounterRng;
using hawklab::MassMode;

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void run(int n, const char* what, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = fmt("exception: %s", e.what());
  }
  std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "ok  " : "FAIL", n, what,
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

sh::SphCoeffs random_u(int band, double sup, std::uint64_t seed, std::uint64_t trial) {
  CounterRng rng(seed, trial);
  auto u = sh::SphCoeffs::zeros(band);
  for (int l = 0; l <= std::min(4, band); ++l)
    for (int m = -l; m <= l; ++m) u.at(l, m) = rng.next_symmetric();
  const double s = sh::sup_norm(u, sh::oversampled_grid(band));
  return (sup / s) * u;
}

std::vector<double> geometric_volumes(const rs::VolumeMap& vm, double r_lo, double r_hi,
                                      int n) {
  std::vector<double> V(n);
  for (int i = 0; i < n; ++i)
    V[i] = vm.volume(r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (n - 1)));
  return V;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in.good()) return "<missing " + p.string() + ">";
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  run(1, "degree-2 product table at band limit 12, dev <= 1e-12, < 5 s",
      [](std::string& d) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rep = sh::gaunt_table_check(sh::oversampled_grid(12));
        const double secs = seconds_since(t0);
        d = fmt("%zu identities, max dev %.2e, %.2f s", rep.entries.size(), rep.max_dev,
                secs);
        return rep.entries.size() == 16 && rep.max_dev <= 1e-12 && secs < 5.0;
      });

  run(2, "projection norm identity on 1000 random degree-2 vectors, 1e-12 rel, < 10 s",
      [](std::string& d) {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (int t = 0; t < 1000; ++t) {
          CounterRng rng(2025, static_cast<std::uint64_t>(t));
          sh::E2Vector v;
          for (double& x : v) x = rng.next_symmetric();
          const auto id = mf::p2_norm_identity_check(v);
          worst = std::max(worst, std::abs(id.lhs - id.rhs) / id.rhs);
        }
        const double secs = seconds_since(t0);
        d = fmt("max rel dev %.2e, %.2f s", worst, secs);
        return worst <= 1e-12 && secs < 10.0;
      });

  run(3, "coordinate gradient energy = 8 pi / 3 +- 1e-12", [](std::string& d) {
    const sh::SphGrid g = sh::oversampled_grid(12);
    double worst = 0.0;
    for (int i = 1; i <= 3; ++i)
      worst = std::max(worst, std::abs(sh::hersch_energy(g, i) - 8.0 * pi / 3.0));
    d = fmt("max dev %.2e", worst);
    return worst <= 1e-12;
  });

  run(4, "round spectrum {1, 3x3, 7x5}, lambda2 = 3, gap = 0, zero triple, 1e-10",
      [](std::string& d) {
        const auto m = ss::make_metric(sh::SphCoeffs::zeros(4));
        const auto rep = ss::spectrum(m, m.K, 9, 12);
        const double want_v[3] = {1.0, 3.0, 7.0};
        const int want_m[3] = {1, 3, 5};
        bool ok = rep.eigenvalues.size() >= 3;
        double dev = 0.0;
        for (int k = 0; k < 3 && ok; ++k) {
          dev = std::max(dev, std::abs(rep.eigenvalues[k].value - want_v[k]));
          ok = rep.eigenvalues[k].multiplicity == want_m[k];
        }
        dev = std::max(dev, std::abs(rep.lambda2 - 3.0));
        dev = std::max(dev, std::abs(rep.esi_gap));

        hawklab::sphharm::GridField q = m.K;
        for (double& v : q.v) v -= 3.0;
        const auto sol = ss::solve_pencil(ss::assemble_operator(m, q, 12));
        std::vector<int> zero_idx;
        for (int i = 0; i < sol.values.size(); ++i)
          if (std::abs(sol.values(i)) < 1e-8) zero_idx.push_back(i);
        ok = ok && zero_idx.size() == 3;
        double tdev = 0.0;
        if (ok) {
          const sh::SphGrid g = m.eu.grid;
          const size_t npts = static_cast<size_t>(g.n_theta) * g.n_phi;
          std::vector<double> sumsq(npts, 0.0), sumgrad(npts, 0.0);
          for (int i : zero_idx) {
            auto phi = sh::SphCoeffs::zeros(12);
            for (int a = 0; a < 169; ++a) phi.c[a] = sol.vectors(a, i);
            const auto pf = sh::synthesize(sh::resize_band(phi, g.L), g);
            const auto gf = sh::synthesize(sh::resize_band(sh::grad_sq(phi), g.L), g);
            for (size_t k = 0; k < sumsq.size(); ++k) {
              sumsq[k] += pf.v[k] * pf.v[k];
              sumgrad[k] += gf.v[k];
            }
          }
          for (size_t k = 0; k < sumsq.size(); ++k) {
            tdev = std::max(tdev, std::abs(4.0 * pi / 3.0 * sumsq[k] - 1.0));
            tdev = std::max(tdev, std::abs(4.0 * pi / 3.0 * sumgrad[k] - 2.0));
          }
        }
        d = fmt("spectrum dev %.2e, triple dev %.2e", dev, tdev);
        return ok && dev <= 1e-10 && tdev <= 1e-10;
      });

  run(5, "eigenvalue upper bound on 100 normalized random factors, gap >= -1e-8, < 2 min",
      [](std::string& d) {
        const auto t0 = std::chrono::steady_clock::now();
        double min_gap = std::numeric_limits<double>::infinity();
        double max_sup = 0.0;
        for (int t = 0; t < 100; ++t) {
          const auto u = ss::normalize_area(random_u(8, 0.25, 77, t));
          const auto m = ss::make_metric(u);
          max_sup = std::max(max_sup, sh::sup_norm(u, m.eu.grid));
          hawklab::sphharm::GridField q = m.K;
          for (double& v : q.v) v -= 3.0;
          min_gap = std::min(min_gap, ss::esi_check(m, q, 12).gap);
        }
        const double secs = seconds_since(t0);
        d = fmt("min gap %.3e, max sup %.3f, %.1f s", min_gap, max_sup, secs);
        return min_gap >= -1e-8 && max_sup <= 0.3 && secs < 120.0;
      });

  run(6, "100 small starts reach zero under both solvers, decay exponent >= 1.4, < 2 min",
      [](std::string& d) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rep = mf::uniqueness_experiment(0.05, 100, 0, 12);
        double worst_sup = 0.0;
        for (const auto* traces : {&rep.ls_traces, &rep.newton_traces})
          for (const auto& tr : *traces)
            if (!tr.rows.empty()) worst_sup = std::max(worst_sup, tr.rows.back().sup_norm);
        const double secs = seconds_since(t0);
        d = fmt("converged %d/%d, final sup %.2e, exponent %.3f, %.0f s",
                rep.converged_to_zero, rep.trials, worst_sup,
                rep.decay_exponent_estimate, secs);
        return rep.converged_to_zero == 100 && rep.nonzero_candidates.empty() &&
               worst_sup <= 1e-11 && rep.decay_exponent_estimate >= 1.4 && secs < 120.0;
      });

  run(7, "schwarzschild: m_H = m +- 1e-9, normalized m+ = 1 +- 1e-5, R = 0 +- 1e-12",
      [](std::string& d) {
        const auto g = rs::schwarzschild_metric(1.0);
        rs::VolumeMap vm(g);
        double mdev = 0.0;
        for (double r : {2.1, 3.0, 5.0, 10.0, 50.0})
          mdev = std::max(mdev, std::abs(rs::sphere_data(g, vm, r).m_H - 1.0));
        const auto curve = rs::profile_curve(g, geometric_volumes(vm, 2.1, 40.0, 200));
        double ndev = 0.0, rdev = 0.0;
        for (const auto& s : curve.samples) {
          ndev = std::max(ndev, std::abs(s.mH_plus_normalized - 1.0));
          rdev = std::max(rdev, std::abs(s.R));
        }
        d = fmt("m_H dev %.2e, m+ dev %.2e, |R| %.2e", mdev, ndev, rdev);
        return mdev <= 1e-9 && ndev <= 1e-5 && rdev <= 1e-12;
      });

  run(8, "flat space: I(4pi/3) = 4pi +- 1e-12, profile +- 1e-10, equality flag only here",
      [](std::string& d) {
        const auto g = rs::flat_metric();
        rs::VolumeMap vm(g);
        const double r1 = vm.radius(4.0 * pi / 3.0);
        const double dev0 = std::abs(4.0 * pi * r1 * r1 - 4.0 * pi);
        const auto curve = rs::profile_curve(g, geometric_volumes(vm, 0.05, 10.0, 200));
        double idev = 0.0;
        for (const auto& s : curve.samples)
          idev = std::max(idev, std::abs(s.I - std::cbrt(36.0 * pi) *
                                                   std::pow(s.V, 2.0 / 3.0)));
        const auto shi_flat = rs::shi_bound_check(curve, MassMode::flat);

        const auto gm = rs::mass_profile_metric(1.0, 2.0);
        rs::VolumeMap vmm(gm);
        const auto curve_m = rs::profile_curve(gm, geometric_volumes(vmm, 0.05, 20.0, 60));
        const auto shi_m = rs::shi_bound_check(curve_m, MassMode::flat);
        d = fmt("I(4pi/3) dev %.2e, profile dev %.2e, flags %d/%d", dev0, idev,
                int(shi_flat.equality), int(shi_m.equality));
        return dev0 <= 1e-12 && idev <= 1e-10 && shi_flat.equality && !shi_m.equality;
      });

  run(9, "hyperbolic: m_H = 0, ads m_H = m (+- 1e-9), ball profile +- 1e-8",
      [](std::string& d) {
        const auto gh = rs::hyperbolic_metric();
        rs::VolumeMap vmh(gh);
        double hdev = 0.0;
        for (double r : {0.5, 1.0, 2.0, 5.0})
          hdev = std::max(hdev, std::abs(rs::sphere_data(gh, vmh, r).m_H));
        const auto ga = rs::ads_schwarzschild_metric(1.0);
        rs::VolumeMap vma(ga);
        double adev = 0.0;
        for (double r : {1.5, 2.0, 4.0, 10.0})
          adev = std::max(adev, std::abs(rs::sphere_data(ga, vma, r).m_H - 1.0));
        const auto curve = rs::profile_curve(gh, geometric_volumes(vmh, 0.05, 10.0, 200));
        double pdev = 0.0;
        for (const auto& s : curve.samples)
          pdev = std::max(pdev, std::abs(s.I - rs::hyperbolic_ball_area(s.V)));
        d = fmt("m_H dev %.2e, ads dev %.2e, profile dev %.2e", hdev, adev, pdev);
        return hdev <= 1e-9 && adev <= 1e-9 && pdev <= 1e-8;
      });

  run(10, "mass profile: R >= 0, m+ nondecreasing, Bray +- 1e-6, strict comparison gap",
      [](std::string& d) {
        const auto g = rs::mass_profile_metric(1.0, 2.0);
        rs::VolumeMap vm(g);
        const auto curve = rs::profile_curve(g, geometric_volumes(vm, 0.05, 20.0, 200));
        const auto rep = rs::monotonicity_report(curve);
        const auto shi = rs::shi_bound_check(curve, MassMode::flat);
        d = fmt("min R %.2e, min inc %.2e, bray %.2e, max gap %.2e", rep.min_R,
                rep.min_increment, rep.bray_max_violation, shi.max_gap);
        return rep.min_R >= 0.0 && rep.min_increment >= -1e-8 &&
               rep.bray_max_violation <= 1e-6 && shi.strictly_below;
      });

  run(11, "normal-flow variation identities <= 1e-8 on all five kinds", [](std::string& d) {
    const rs::RadialMetric kinds[] = {
        rs::flat_metric(), rs::schwarzschild_metric(1.0), rs::hyperbolic_metric(),
        rs::ads_schwarzschild_metric(1.0), rs::mass_profile_metric(1.0, 2.0)};
    double worst = 0.0;
    for (const auto& g : kinds) {
      const double r0 = std::max(1.5 * g.r_min, 1.0);
      const auto res = rs::normal_flow_check(g, r0, 2.0, 1e-3);
      for (double x : res) worst = std::max(worst, x);
    }
    d = fmt("max residual %.2e", worst);
    return worst <= 1e-8;
  });

  run(12, "small-volume isoperimetric ratio = 1 +- 1e-4 at V = 1e-8", [](std::string& d) {
    const rs::RadialMetric kinds[] = {rs::flat_metric(), rs::hyperbolic_metric(),
                                      rs::mass_profile_metric(1.0, 2.0)};
    double worst = 0.0;
    for (const auto& g : kinds)
      worst = std::max(worst,
                       std::abs(rs::small_volume_asymptotics(g).ratio_at_smallest - 1.0));
    d = fmt("max |ratio - 1| %.2e", worst);
    return worst <= 1e-4;
  });

  run(13, "repeated CLI runs are byte-identical", [&cli](std::string& d) {
    if (cli.empty()) {
      d = "CLI path not supplied as argv[1]";
      return false;
    }
    struct Job {
      std::string args;
      std::vector<std::string> files;
    };
    const std::vector<Job> jobs = {
        {"sht-check", {"sht_report.json", "grid.csv"}},
        {"meanfield --trials 5", {"uniqueness_report.json", "trace_000.csv", "trace_004.csv"}},
        {"spectrum --u random --seed 1", {"spectrum_report.json"}},
        {"profile --metric schwarzschild --samples 30", {"profile_report.json", "profile.csv"}},
    };
    const fs::path base = fs::temp_directory_path() / "hawklab_acceptance";
    fs::remove_all(base);
    int compared = 0;
    for (size_t j = 0; j < jobs.size(); ++j) {
      fs::path dir[2];
      for (int k = 0; k < 2; ++k) {
        dir[k] = base / fmt("job%zu_%d", j, k);
        fs::create_directories(dir[k]);
        const std::string cmd = "\"" + cli + "\" " + jobs[j].args + " --out \"" +
                                dir[k].string() + "\" > \"" +
                                (dir[k] / "stdout.txt").string() + "\" 2>&1";
        const int rc = std::system(cmd.c_str());
        if (rc == -1 || !WIFEXITED(rc) || WEXITSTATUS(rc) != 0) {
          d = fmt("command '%s' exited nonzero", jobs[j].args.c_str());
          return false;
        }
      }
      for (const auto& f : jobs[j].files) {
        if (slurp(dir[0] / f) != slurp(dir[1] / f)) {
          d = fmt("'%s' differs between runs of '%s'", f.c_str(), jobs[j].args.c_str());
          return false;
        }
        ++compared;
      }
    }
    d = fmt("%zu commands, %d files compared", jobs.size(), compared);
    return true;
  });

  std::printf("%s: %d of 13 criteria failed\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures;
}
