// sphermean: command-line surface over the spherical-mean-transform library.
// Subcommands: bessel, phantom, transform, invert, abel, verify.
// Exit codes: 0 success, 1 verification/IO failure, 2 usage error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sphermean/abel.hpp"
#include "sphermean/inversion.hpp"
#include "sphermean/io.hpp"
#include "sphermean/phantom.hpp"
#include "sphermean/report.hpp"
#include "sphermean/specfun.hpp"
#include "sphermean/transform.hpp"
#include "sphermean/verify.hpp"

using namespace sphermean;

namespace {

bool g_verbose = false;

/// One-line stage log on stderr, so stdout reports stay byte-identical.
void note(const std::string& line) {
    if (g_verbose) std::cerr << "sphermean: " << line << "\n";
}

void emit_report(const report::Value& doc, const std::string& path) {
    if (path.empty()) {
        std::cout << doc.str();
        return;
    }
    std::ofstream os(path);
    require(os.good(), "cannot open report path " + path);
    os << doc.str();
}

field::Point parse_center(const std::string& s, int dim) {
    field::Point c{0.0, 0.0, 0.0};
    std::size_t pos = 0;
    for (int a = 0; a < dim; ++a) {
        std::size_t used = 0;
        c[a] = std::stod(s.substr(pos), &used);
        pos += used;
        if (a + 1 < dim) {
            require(pos < s.size() && s[pos] == ',', "center: expected dim comma-separated values");
            ++pos;
        }
    }
    return c;
}

struct BesselArgs {
    double order = 0.0;
    int count = 10;
    double tol = 1e-12;
    std::string output;
};

struct PhantomArgs {
    std::string kind;
    int dim = 2;
    int shape = 256;
    double extent = 2.56;
    double sigma = 0.15;
    double radius = 0.5;
    double amplitude = 1.0;
    std::string center = "0,0";
    int lambda_index = 0;
    double gap = 2.5;
    double arm_length = 1.8;
    double arm_width = 0.55;
    double fillet = 0.28;
    std::uint64_t seed = 1;
    std::string output;
};

struct TransformArgs {
    std::string input;
    double radius = 0.0;
    std::string method = "fft";
    std::string output;
    bool verify = false;
    int quad_order = 256;
    std::string report_path;
};

struct InvertArgs {
    std::string input;
    double radius = 0.0;
    std::string policy = "zero";
    std::string output;
    double ring_width = 0.0;
    std::string report_path;
};

struct AbelArgs {
    std::string input;
    std::string output;
    int dim = 3;
    bool singular = false;
};

struct VerifyArgs {
    std::string suite;
    std::uint64_t seed = 7;
    int dim = 2;
    std::string report_path;
    std::string mask_path;
    std::string field_path;
    double radius = 0.0;
    double mean_tol = 1e-3;
    double support_tol = 1e-3;
};

int run_bessel(const BesselArgs& a) {
    const auto table = specfun::bessel_zeros(specfun::BesselOrder(a.order), a.count, a.tol);
    if (a.output.empty()) {
        io::write_zero_table_csv(std::cout, table);
    } else {
        std::ofstream os(a.output);
        require(os.good(), "cannot open " + a.output);
        io::write_zero_table_csv(os, table);
    }
    return 0;
}

int run_phantom(const PhantomArgs& a) {
    const auto geom = field::centered_geometry(a.dim, a.shape, a.extent);
    const field::Point c = parse_center(a.center, a.dim);

    if (a.kind == "gaussian") {
        io::save_field(a.output, phantom::gaussian(geom, a.sigma, c, a.amplitude));
    } else if (a.kind == "bump") {
        io::save_field(a.output, phantom::bump(geom, a.radius, c, a.amplitude));
    } else if (a.kind == "zalcman") {
        const auto spec = inversion::CounterexampleSpec::from_zero_index(a.dim, a.lambda_index);
        io::save_field(a.output, inversion::zalcman_field(spec, geom));
    } else if (a.kind == "disk-mask") {
        io::save_mask(a.output, phantom::disk_mask(geom, a.radius, c));
    } else if (a.kind == "square-mask") {
        io::save_mask(a.output, phantom::square_mask(geom, a.radius, c));
    } else if (a.kind == "two-disk-mask") {
        io::save_mask(a.output, phantom::two_disk_mask(geom, a.radius, a.gap));
    } else if (a.kind == "lshape-mask") {
        io::save_mask(a.output, phantom::lshape_mask(geom, a.arm_length, a.arm_width, a.fillet));
    } else if (a.kind == "random-mask") {
        Rng rng(a.seed);
        io::save_mask(a.output, phantom::random_blob_mask(geom, rng, 0.3 * a.extent));
    } else {
        require(false, "unknown phantom kind: " + a.kind);
    }
    return 0;
}

int run_transform(const TransformArgs& a) {
    const auto f = io::load_field(a.input);
    note("loaded " + a.input);
    const transform::SphereKernel kernel(a.radius, f.geom.dim);

    field::GridField h;
    if (a.method == "fft") {
        h = transform::fixed_radius_transform(f, kernel);
    } else if (a.method == "quad") {
        const auto q = transform::fixed_radius_transform_quadrature(
            f, kernel, field::sphere_quadrature(f.geom.dim, a.quad_order));
        h = q.values;
    } else {
        require(false, "method must be fft or quad");
    }
    if (!a.output.empty()) {
        io::save_field(a.output, h);
        note("wrote " + a.output);
    }

    if (a.verify) {
        note("running the quadrature oracle and ring check");
        const auto q = transform::fixed_radius_transform_quadrature(
            f, kernel, field::sphere_quadrature(f.geom.dim, a.quad_order));
        const auto hf = a.method == "fft" ? h : transform::fixed_radius_transform(f, kernel);
        const double dev = transform::oracle_relative_deviation(hf, q);
        const auto rings = transform::spectral_ring_check(hf, kernel, 3);
        report::Value doc = report::Value::object();
        doc.set("method", a.method);
        doc.set("R", a.radius);
        doc.set("ring_maxima", report::Value::from_vector(rings.maxima));
        doc.set("oracle_rel_err", dev);
        emit_report(doc, a.report_path);
    }
    return 0;
}

int run_invert(const InvertArgs& a) {
    const auto h = io::load_field(a.input);
    const transform::SphereKernel kernel(a.radius, h.geom.dim);

    inversion::RegularizationPolicy policy;
    policy.ring_half_width = a.ring_width;
    if (a.policy == "zero") {
        policy.strategy = inversion::RegularizationPolicy::Strategy::zero_fill;
    } else if (a.policy.rfind("tikhonov:", 0) == 0) {
        policy.strategy = inversion::RegularizationPolicy::Strategy::tikhonov;
        policy.epsilon = std::stod(a.policy.substr(9));
    } else {
        require(false, "policy must be zero or tikhonov:EPS");
    }

    note("loaded " + a.input);
    const auto rep = inversion::deconvolve(h, kernel, policy);
    if (!a.output.empty()) {
        io::save_field(a.output, rep.estimate);
        note("wrote " + a.output);
    }

    report::Value doc = report::Value::object();
    doc.set("R", a.radius);
    doc.set("policy", a.policy);
    doc.set("ring_energy_fraction", rep.ring_energy_fraction);
    doc.set("ring_half_width", rep.ring_half_width);
    doc.set("dominated_warning", rep.dominated_warning);
    emit_report(doc, a.report_path);
    return 0;
}

int run_abel(const AbelArgs& a, bool forward) {
    const abel::AbelParams params{a.dim, a.singular};
    if (forward) {
        const auto g = io::load_even_profile_csv(a.input);
        io::save_profile_csv(a.output, abel::abel_forward(g, params));
        return 0;
    }
    const auto f = io::load_profile_csv(a.input);
    const auto inv = abel::abel_inverse(f, params);
    io::save_even_profile_csv(a.output, inv.g);
    if (inv.conditioning_warning)
        std::cerr << "warning: finite-difference stencils disagree by "
                  << inv.stencil_disagreement << " (noisy input?)\n";
    return 0;
}

int run_verify(const VerifyArgs& a) {
    // file-based modes first: operate on user-supplied artifacts
    if (a.suite == "rconvex" && !a.mask_path.empty()) {
        require(a.radius > 0.0, "verify rconvex --mask requires --radius");
        const auto K = io::load_mask(a.mask_path);
        const auto v = geometry::r_convex(K, a.radius);
        report::Value doc = report::Value::object();
        doc.set("suite", "rconvex");
        report::Value config = report::Value::object();
        config.set("mask", a.mask_path);
        config.set("radius", a.radius);
        doc.set("config", std::move(config));
        report::Value metrics = report::Value::object();
        metrics.set("component_count", static_cast<std::int64_t>(v.component_count));
        metrics.set("coverage_ok", !v.has_coverage_witness);
        doc.set("metrics", std::move(metrics));
        report::Value witnesses = report::Value::array();
        if (v.has_coverage_witness) {
            report::Value w = report::Value::object();
            w.set("kind", "coverage_fail_witness");
            w.set("i", static_cast<std::int64_t>(v.coverage_fail_witness[0]));
            w.set("j", static_cast<std::int64_t>(v.coverage_fail_witness[1]));
            const auto p = K.geom.point(v.coverage_fail_witness[0], v.coverage_fail_witness[1],
                                        v.coverage_fail_witness[2]);
            w.set("x", p[0]);
            w.set("y", p[1]);
            witnesses.push(std::move(w));
        }
        if (v.component_count > 1) {
            report::Value w = report::Value::object();
            w.set("kind", "disconnected_witness");
            w.set("component_a_i", static_cast<std::int64_t>(v.component_witness_a[0]));
            w.set("component_a_j", static_cast<std::int64_t>(v.component_witness_a[1]));
            w.set("component_b_i", static_cast<std::int64_t>(v.component_witness_b[0]));
            w.set("component_b_j", static_cast<std::int64_t>(v.component_witness_b[1]));
            witnesses.push(std::move(w));
        }
        doc.set("witnesses", std::move(witnesses));
        doc.set("pass", v.is_r_convex());
        emit_report(doc, a.report_path);
        return v.is_r_convex() ? 0 : 1;
    }
    if ((a.suite == "support" || a.suite == "rconvex-walk") && !a.field_path.empty()) {
        require(!a.mask_path.empty() && a.radius > 0.0,
                "verify " + a.suite + " file mode requires --field, --mask and --radius");
        const auto f = io::load_field(a.field_path);
        inversion::HarnessConfig cfg;
        cfg.K = io::load_mask(a.mask_path);
        cfg.R = a.radius;
        cfg.mean_tol = a.mean_tol;
        cfg.support_tol = a.support_tol;
        cfg.quad = field::sphere_quadrature(f.geom.dim, f.geom.dim == 2 ? 256 : 48);

        report::Value doc = report::Value::object();
        doc.set("suite", a.suite);
        report::Value config = report::Value::object();
        config.set("field", a.field_path);
        config.set("mask", a.mask_path);
        config.set("radius", a.radius);
        config.set("mean_tol", a.mean_tol);
        config.set("support_tol", a.support_tol);
        doc.set("config", std::move(config));
        report::Value metrics = report::Value::object();
        report::Value witnesses = report::Value::array();
        bool pass = false;
        if (a.suite == "support") {
            const auto rep = inversion::support_theorem_harness(f, cfg);
            using C = inversion::SupportReport::Classification;
            metrics.set("classification",
                        rep.classification == C::consistent_pass      ? "consistent-pass"
                        : rep.classification == C::hypothesis_violated ? "hypothesis-violated"
                                                                       : "conclusion-violated");
            metrics.set("hypothesis_max_mean", rep.hypothesis_max_mean);
            metrics.set("hypothesis_tol_abs", rep.hypothesis_tol_abs);
            metrics.set("exterior_mass_fraction", rep.exterior_mass_fraction);
            metrics.set("centers_tested", rep.centers_tested);
            if (rep.classification == C::hypothesis_violated) {
                report::Value w = report::Value::object();
                w.set("kind", "hypothesis_witness");
                w.set("center_x", rep.witness_center[0]);
                w.set("center_y", rep.witness_center[1]);
                w.set("point_x", rep.witness_point[0]);
                w.set("point_y", rep.witness_point[1]);
                witnesses.push(std::move(w));
            }
            if (!rep.tail_values.empty()) {
                metrics.set("tail_p", rep.tail_p);
                metrics.set("tail_t0", report::Value::from_vector(rep.tail_t0));
                metrics.set("tail_values", report::Value::from_vector(rep.tail_values));
            }
            pass = rep.classification == C::consistent_pass;
        } else {
            const auto rep = inversion::rconvex_region_growing(f, cfg);
            metrics.set("k_rejected", rep.k_rejected);
            metrics.set("complete", rep.complete);
            metrics.set("c_count", rep.c_count);
            metrics.set("cf_count", rep.cf_count);
            metrics.set("hypothesis_max_mean", rep.hypothesis_max_mean);
            for (const auto& fr : rep.frontier) {
                report::Value w = report::Value::object();
                w.set("kind", "frontier");
                w.set("i", static_cast<std::int64_t>(fr[0]));
                w.set("j", static_cast<std::int64_t>(fr[1]));
                witnesses.push(std::move(w));
            }
            pass = !rep.k_rejected && rep.complete;
        }
        doc.set("metrics", std::move(metrics));
        doc.set("witnesses", std::move(witnesses));
        doc.set("pass", pass);
        emit_report(doc, a.report_path);
        return pass ? 0 : 1;
    }

    note("running suite " + a.suite);
    verify::SuiteResult res;
    if (a.suite == "specfun") res = verify::specfun_suite();
    else if (a.suite == "field") res = verify::field_suite(a.seed);
    else if (a.suite == "transform") res = verify::transform_suite();
    else if (a.suite == "zalcman") res = verify::zalcman_suite(a.seed);
    else if (a.suite == "abel") res = verify::abel_suite(a.seed);
    else if (a.suite == "local") res = verify::local_suite();
    else if (a.suite == "support") res = verify::support_suite(a.seed);
    else if (a.suite == "rconvex") res = verify::rconvex_suite(a.seed);
    else if (a.suite == "rconvex-walk") res = verify::rconvex_walk_suite();
    else if (a.suite == "all") res = verify::all_suites(a.seed, a.dim);
    else require(false, "unknown suite: " + a.suite);
    emit_report(res.doc, a.report_path);
    return res.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-radius spherical mean transform toolkit"};
    app.require_subcommand(1);
    app.add_flag("-v,--verbose", g_verbose, "one line of progress per stage on stderr");

    BesselArgs bessel_args;
    auto* bessel = app.add_subcommand("bessel", "print Bessel zero tables as CSV");
    bessel->add_option("--order", bessel_args.order, "order nu >= 0")->check(CLI::NonNegativeNumber);
    bessel->add_option("--count", bessel_args.count, "number of zeros")->check(CLI::PositiveNumber);
    bessel->add_option("--tol", bessel_args.tol, "absolute accuracy")->check(CLI::PositiveNumber);
    bessel->add_option("--output", bessel_args.output, "CSV path (stdout when omitted)");

    PhantomArgs phantom_args;
    auto* phant = app.add_subcommand("phantom", "generate phantom fields and masks");
    phant->add_option("--kind", phantom_args.kind,
                      "gaussian|bump|zalcman|disk-mask|square-mask|two-disk-mask|lshape-mask|"
                      "random-mask")
        ->required();
    phant->add_option("--dim", phantom_args.dim)->check(CLI::Range(2, 3));
    phant->add_option("--shape", phantom_args.shape, "samples per axis")
        ->check(CLI::Range(8, 4096));
    phant->add_option("--extent", phantom_args.extent, "half extent of the centered domain")
        ->check(CLI::PositiveNumber);
    phant->add_option("--sigma", phantom_args.sigma)->check(CLI::PositiveNumber);
    phant->add_option("--radius", phantom_args.radius)->check(CLI::PositiveNumber);
    phant->add_option("--amplitude", phantom_args.amplitude);
    phant->add_option("--center", phantom_args.center, "comma-separated coordinates");
    phant->add_option("--lambda-index", phantom_args.lambda_index)->check(CLI::NonNegativeNumber);
    phant->add_option("--gap", phantom_args.gap)->check(CLI::PositiveNumber);
    phant->add_option("--arm-length", phantom_args.arm_length)->check(CLI::PositiveNumber);
    phant->add_option("--arm-width", phantom_args.arm_width)->check(CLI::PositiveNumber);
    phant->add_option("--fillet", phantom_args.fillet)->check(CLI::PositiveNumber);
    phant->add_option("--seed", phantom_args.seed);
    phant->add_option("--output", phantom_args.output)->required();

    TransformArgs transform_args;
    auto* trans = app.add_subcommand("transform", "fixed-radius spherical mean transform");
    trans->add_option("--input", transform_args.input)->required();
    trans->add_option("--radius", transform_args.radius)->required()->check(CLI::PositiveNumber);
    trans->add_option("--method", transform_args.method)
        ->check(CLI::IsMember({"fft", "quad"}));
    trans->add_option("--output", transform_args.output);
    trans->add_flag("--verify", transform_args.verify, "emit the oracle/ring report");
    trans->add_option("--quad-order", transform_args.quad_order)->check(CLI::PositiveNumber);
    trans->add_option("--report", transform_args.report_path);

    InvertArgs invert_args;
    auto* inv = app.add_subcommand("invert", "regularized deconvolution of a transform");
    inv->add_option("--input", invert_args.input)->required();
    inv->add_option("--radius", invert_args.radius)->required()->check(CLI::PositiveNumber);
    inv->add_option("--policy", invert_args.policy, "zero | tikhonov:EPS");
    inv->add_option("--output", invert_args.output);
    inv->add_option("--ring-width", invert_args.ring_width, "ring half width in |xi| units")
        ->check(CLI::NonNegativeNumber);
    inv->add_option("--report", invert_args.report_path);

    AbelArgs abel_args;
    auto* abl = app.add_subcommand("abel", "Abel-type transforms on CSV profiles");
    abl->require_subcommand(1);
    auto* abl_fwd = abl->add_subcommand("forward", "even profile -> radialized profile");
    auto* abl_inv = abl->add_subcommand("inverse", "radial profile -> even profile");
    for (auto* sub : {abl_fwd, abl_inv}) {
        sub->add_option("--input", abel_args.input)->required();
        sub->add_option("--output", abel_args.output)->required();
        sub->add_option("--dim", abel_args.dim)->check(CLI::Range(2, 3));
        sub->add_flag("--singular", abel_args.singular, "enable n=2 endpoint quadrature");
    }

    VerifyArgs verify_args;
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("suite", verify_args.suite,
                    "specfun|field|transform|zalcman|abel|local|support|rconvex|rconvex-walk|all")
        ->required();
    ver->add_option("--seed", verify_args.seed);
    ver->add_option("--dim", verify_args.dim)->check(CLI::Range(2, 3));
    ver->add_option("--report", verify_args.report_path);
    ver->add_option("--mask", verify_args.mask_path, "mask file for file-based modes");
    ver->add_option("--field", verify_args.field_path, "field file for file-based modes");
    ver->add_option("--radius", verify_args.radius)->check(CLI::PositiveNumber);
    ver->add_option("--mean-tol", verify_args.mean_tol)->check(CLI::PositiveNumber);
    ver->add_option("--support-tol", verify_args.support_tol)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(bessel)) return run_bessel(bessel_args);
        if (app.got_subcommand(phant)) return run_phantom(phantom_args);
        if (app.got_subcommand(trans)) return run_transform(transform_args);
        if (app.got_subcommand(inv)) return run_invert(invert_args);
        if (app.got_subcommand(abl)) return run_abel(abel_args, abl->got_subcommand(abl_fwd));
        if (app.got_subcommand(ver)) return run_verify(verify_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
