// Acceptance suite: one criterion per numbered block, each printing a
// PASS/FAIL line with its runtime against the stated budget. Exits nonzero
// when any criterion fails. The determinism criterion (10) drives the CLI
// binary, whose path arrives as argv[1].

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sphermean/abel.hpp"
#include "sphermean/inversion.hpp"
#include "sphermean/phantom.hpp"
#include "sphermean/specfun.hpp"
#include "sphermean/transform.hpp"
#include "sphermean/verify.hpp"

using namespace sphermean;
using field::GridGeometry;
using field::Point;

namespace {

int g_failures = 0;

void criterion(int num, const char* name, double budget_s,
               const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = dt < budget_s;
    const bool pass = ok && in_budget;
    if (!pass) ++g_failures;
    std::printf("criterion %2d %s  (%6.2f s / %3.0f s)  %s%s%s\n", num, pass ? "PASS" : "FAIL",
                dt, budget_s, name, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, format, a, b);
    return buf;
}

double l2_rel(const std::vector<double>& a, const std::vector<double>& b) {
    double err = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        err += (a[i] - b[i]) * (a[i] - b[i]);
        norm += b[i] * b[i];
    }
    return std::sqrt(err / norm);
}

int run_cli(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is.good()) return {};
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    // 1. Special functions against closed forms and the independent oracle.
    criterion(1, "special functions", 1.0, [](std::string& d) {
        using namespace specfun;
        double j12 = 0.0;
        for (double x = 0.01; x <= 50.0; x += 0.01)
            j12 = std::max(j12, std::abs(normalized_j(BesselOrder(0.5), x) - std::sin(x) / x));
        const auto zeros = bessel_zeros(BesselOrder(0.5), 10, 1e-12);
        double zerr = 0.0;
        for (int k = 0; k < 10; ++k)
            zerr = std::max(zerr, std::abs(zeros.zeros[k] - (k + 1) * pi));
        const double z0 = bessel_zeros(BesselOrder(0.0), 1, 1e-12).zeros[0];
        const double oerr = std::abs(z0 - verify::detail_verify::oracle_j0_first_zero());
        d = fmt("j12 err %.2e, zero errs %.2e", j12, std::max(zerr, oerr));
        return j12 <= 1e-12 && zerr <= 1e-10 && oerr <= 1e-10;
    });

    // 2. Multiplier route vs direct quadrature on the Gaussian phantom.
    criterion(2, "multiplier equivalence (n=2, 256^2, sigma=0.1, R=0.7)", 10.0,
              [](std::string& d) {
                  GridGeometry g = field::centered_geometry(2, 256, 1.28);
                  const auto f = phantom::gaussian(g, 0.1);
                  const transform::SphereKernel k(0.7, 2);
                  const auto h = transform::fixed_radius_transform(f, k);
                  const auto q = transform::fixed_radius_transform_quadrature(
                      f, k, field::sphere_quadrature(2, 720));
                  const double dev = transform::oracle_relative_deviation(h, q);
                  d = fmt("interior rel dev %.2e (tol 1e-3)", dev);
                  return dev <= 1e-3;
              });

    // 3. Representation lemma residuals and their refinement behavior.
    criterion(3, "volume representation identity (zeros 0 and 1, refinement >= 2x)", 30.0,
              [](std::string& d) {
                  GridGeometry g = field::centered_geometry(2, 256, 2.0);
                  const auto f = phantom::gaussian(g, 0.1);
                  const auto rep0 = transform::RepresentationKernel::from_zero_index(0.7, 2, 0);
                  const auto rep1 = transform::RepresentationKernel::from_zero_index(0.7, 2, 1);
                  const auto r0 = transform::representation_check(f, rep0);
                  const auto r1 = transform::representation_check(f, rep1);
                  GridGeometry gf = field::centered_geometry(2, 512, 2.0);
                  const auto rf = transform::representation_check(phantom::gaussian(gf, 0.1), rep0);
                  const double ratio = r0.residual / rf.residual;
                  d = fmt("worst residual %.2e (tol 1e-2), refinement x%.1f",
                          std::max(r0.residual, r1.residual), ratio);
                  return r0.residual <= 1e-2 && r1.residual <= 1e-2 && ratio >= 2.0;
              });

    // 4. Zero-ring vanishing of transformed spectra, with negative control.
    criterion(4, "zero-ring vanishing (k <= 3) and negative control", 10.0, [](std::string& d) {
        GridGeometry g = field::centered_geometry(2, 1024, 65.0);
        const auto f = phantom::gaussian(g, 0.45);
        const transform::SphereKernel k(0.7, 2);
        const auto h = transform::fixed_radius_transform(f, k);
        const auto rings = transform::spectral_ring_check(h, k, 3);
        const auto control = transform::spectral_ring_check(f, k, 3);
        double worst = 0.0, neg = 0.0;
        for (double m : rings.maxima) worst = std::max(worst, m);
        for (double m : control.maxima) neg = std::max(neg, m);
        d = fmt("ring max %.2e (tol 1e-2), control %.2e (>= 1e-1)", worst, neg);
        return worst <= 1e-2 && neg >= 1e-1;
    });

    // 5. Zalcman counterexample: means, product identity, tail trends.
    criterion(5, "Zalcman counterexample (means, identity, L^p tails)", 30.0,
              [](std::string& d) {
                  using namespace inversion;
                  const auto spec = CounterexampleSpec::from_zero_index(2, 0);
                  GridGeometry g = field::centered_geometry(2, 512, 2.56);
                  const auto f = zalcman_field(spec, g);
                  const auto quad = field::sphere_quadrature(2, 512);
                  Rng rng(7);
                  double means = 0.0;
                  int tested = 0;
                  while (tested < 100) {
                      const double x = rng.uniform(-1.4, 1.4), y = rng.uniform(-1.4, 1.4);
                      if (std::hypot(x, y) > 1.4) continue;
                      ++tested;
                      means = std::max(means,
                                       std::abs(field::spherical_mean(f, {x, y, 0.0}, 1.0, quad)));
                  }
                  std::vector<double> ts;
                  for (int i = 0; i < 14; ++i) ts.push_back(0.2 + 1.3 * i / 13.0);
                  const std::vector<Point> centers = {
                      {0.3, 0.2, 0.0}, {-0.55, 0.1, 0.0}, {0.0, 0.8, 0.0}};
                  const auto idrep = zalcman_product_identity(f, spec, centers, ts, quad);

                  GridGeometry gt = field::centered_geometry(2, 1024, 65.0);
                  const auto ft = zalcman_field(spec, gt);
                  const std::vector<double> t0s = {4.0, 8.0, 16.0, 32.0};
                  const auto hi = lp_annulus_tails(ft, 5.0, t0s);
                  const auto lo = lp_annulus_tails(ft, 3.5, t0s);
                  bool dec = true, inc = true;
                  for (std::size_t i = 0; i + 1 < t0s.size(); ++i) {
                      dec = dec && hi[i + 1] < hi[i];
                      inc = inc && lo[i + 1] > lo[i];
                  }
                  d = fmt("means %.2e (tol 1e-4), identity %.2e (tol 1e-3)", means,
                          idrep.max_rel_err) + (dec && inc ? ", tails bracket p=4" : ", TAILS WRONG");
                  return means <= 1e-4 * f.max_abs() && idrep.max_rel_err <= 1e-3 && dec && inc;
              });

    // 6. Abel machinery.
    criterion(6, "Abel round trip, ridge fixed point, identity, Titchmarsh", 30.0,
              [](std::string& d) {
                  const auto s = verify::abel_suite(7);
                  d = s.pass ? "all abel checks green" : "see verify abel report";
                  return s.pass;
              });

    // 7. R-convexity vs the exhaustive oracle.
    criterion(7, "R-convexity verdicts (25 seeded masks, convex sweep, gap witness)", 60.0,
              [](std::string& d) {
                  const auto s = verify::rconvex_suite(7);
                  d = s.pass ? "25/25 oracle agreement" : "disagreement or witness failure";
                  return s.pass;
              });

    // 8. Support theorem harness.
    criterion(8, "support theorem harness (pass, witness, deconvolution)", 60.0,
              [](std::string& d) {
                  const auto s = verify::support_suite(7);
                  d = s.pass ? "hypothesis/conclusion/round-trip green" : "see verify support";
                  return s.pass;
              });

    // 9. The R-convex connectedness walk.
    criterion(9, "R-convex walk (L-shape coverage, pocket frontier)", 60.0, [](std::string& d) {
        const auto s = verify::rconvex_walk_suite();
        d = s.pass ? "C_f = C and frontier witness adjacent to the bump" : "walk failed";
        return s.pass;
    });

    // 10. Determinism of the CLI verification entry point.
    criterion(10, "determinism: verify all --seed 7 twice, byte-identical", 300.0,
              [&cli](std::string& d) {
                  if (cli.empty()) {
                      d = "CLI path not supplied";
                      return false;
                  }
                  const std::string r1 = "/tmp/sphermean_acc_run1.json";
                  const std::string r2 = "/tmp/sphermean_acc_run2.json";
                  const int c1 = run_cli(cli + " verify all --seed 7 --dim 2 --report " + r1);
                  const int c2 = run_cli(cli + " verify all --seed 7 --dim 2 --report " + r2);
                  const std::string a = slurp(r1), b = slurp(r2);
                  if (c1 != 0 || c2 != 0) {
                      d = "verify all exited nonzero";
                      return false;
                  }
                  if (a.empty() || a != b) {
                      d = "reports differ between runs";
                      return false;
                  }
                  d = fmt("reports identical (%.0f bytes)", static_cast<double>(a.size()));
                  return true;
              });

    std::printf("%s: %d/10 criteria passed\n", g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                10 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
