// hvlab: numerical laboratory for transport-coefficient geometry of planar
// measures.  Subcommands: gen | alpha | transform | construct | analyze |
// verify | report.  Exit codes: 0 ok, 1 check failed, 2 error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "hv/analysis.hpp"
#include "hv/calibration.hpp"
#include "hv/config.hpp"
#include "hv/generators.hpp"
#include "hv/kernel_series.hpp"
#include "hv/pipeline.hpp"
#include "hv/svg.hpp"

using namespace hv;
namespace fs = std::filesystem;

namespace {

using clock_type = std::chrono::steady_clock;
double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

const char* kVersion = "hvlab 1.0";

void write_alpha_csv_header(std::ofstream& f) {
    f << "cx,cy,r,kind,value,raw,density_scale,c,witness_m,witness_angle,witness_vx,witness_vy,"
         "status,tolerance\n";
}

void write_alpha_row(std::ofstream& f, const Ball& b, const std::string& kind,
                     const AlphaResult& a) {
    char buf[512];
    double wm = 0, wang = 0, wx = 0, wy = 0;
    if (a.witness) {
        wm = a.witness->m;
        wang = a.witness->base_angle;
        wx = a.witness->vertex.real();
        wy = a.witness->vertex.imag();
    }
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g,%.17g,%g,%.17g,%.17g,%.17g,%s,%.17g\n",
                  b.center.real(), b.center.imag(), b.radius, kind.c_str(), a.value, a.raw,
                  a.density_scale, a.normalization, wm, wang, wx, wy, to_string(a.status),
                  a.tolerance);
    f << buf;
}

int cmd_gen(const GeneratorSpec& spec, const std::string& out) {
    DiscreteMeasure mu = generate(spec);
    write_measure(out, mu);
    std::printf("wrote %zu atoms (mass %.6g) to %s\n", mu.atoms.size(), mu.total_mass(),
                out.c_str());
    return 0;
}

int cmd_alpha(const std::string& measure_path, const std::string& kind, Ball b, int k,
              const std::string& mode, double angle, double cone, int sweep, double rmin,
              double rmax, const std::string& csv, const std::string& svg,
              const std::string& nu_path) {
    DiscreteMeasure mu = read_measure(measure_path);
    AlphaOptions opt;
    opt.final_aggregate = true;

    std::ofstream cf;
    if (!csv.empty()) {
        cf.open(csv);
        write_alpha_csv_header(cf);
    }

    std::vector<double> radii;
    if (sweep > 1) {
        double ratio = std::pow(rmax / rmin, 1.0 / (sweep - 1));
        for (int i = 0; i < sweep; ++i) radii.push_back(rmin * std::pow(ratio, i));
    } else {
        radii.push_back(b.radius);
    }

    AlphaResult last;
    for (double r : radii) {
        Ball bb(b.center, r);
        AlphaResult a;
        if (kind == "line") {
            LineQuery q;
            if (mode == "fixed") {
                q.mode = LineMode::fixed;
                q.fixed_angle = angle;
            } else if (mode == "cone") {
                q.mode = LineMode::cone;
                q.cone_center = angle;
                q.cone_half_width = cone;
            }
            a = alpha_line(mu, bb, q, opt);
        } else if (kind == "spike") {
            a = alpha_spike(mu, bb, k, opt);
        } else if (kind == "pair") {
            DiscreteMeasure nu = read_measure(nu_path);
            a = alpha_pair(mu, nu, bb, opt);
        } else {
            std::fprintf(stderr, "unknown alpha kind %s\n", kind.c_str());
            return 2;
        }
        std::printf("r=%-12.6g value=%-12.6g raw=%-12.6g c=%-10.4g status=%s\n", r, a.value, a.raw,
                    a.normalization, to_string(a.status));
        if (cf.is_open()) write_alpha_row(cf, bb, kind, a);
        last = a;
    }

    if (!svg.empty()) {
        double R = 4.5 * radii.back();
        SvgWriter w(b.center.real() - R, b.center.real() + R, b.center.imag() - R,
                    b.center.imag() + R);
        w.add_measure(mu);
        w.add_ball(Ball(b.center, radii.back()));
        w.add_ball(Ball(b.center, 4.0 * radii.back()), "#d0a0a0");
        if (last.witness) {
            for (const Line& ln : last.witness->lines())
                w.add_segment(ln.point_at(-R * 1.5), ln.point_at(R * 1.5));
        }
        w.save(svg);
    }
    return 0;
}

int cmd_transform(const std::string& measure_path, int k, const std::string& part, double zx,
                  double zy, double r1, double r2, bool opnorm, const std::string& csv) {
    DiscreteMeasure mu = read_measure(measure_path);
    if (opnorm) {
        auto grid = default_r_grid(mu, 3);
        auto est = operator_norm_estimate(mu, k, grid);
        std::printf("operator-norm lower bound %.8g at r=%.6g (converged=%d)\n", est.value,
                    est.best_r, est.converged ? 1 : 0);
        return 0;
    }
    std::ofstream cf;
    if (!csv.empty()) {
        cf.open(csv);
        cf << "zx,zy,r,re,im\n";
    }
    cpx z(zx, zy);
    std::optional<double> upper;
    if (r2 > 0.0) upper = r2;
    cpx v = truncated_transform(mu, z, r1, k, upper);
    double shown = (part == "normal") ? v.imag() : std::abs(v);
    std::printf("T(z=%.4g%+.4gi, r=%.4g%s) = %.10g%+.10gi  (%s %.10g)\n", zx, zy, r1,
                upper ? ", band" : "", v.real(), v.imag(), part.c_str(), shown);
    if (cf.is_open()) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", zx, zy, r1, v.real(),
                      v.imag());
        cf << buf;
    }
    return 0;
}

void write_report_file(const std::string& path, const PipelineResult& res, const StopParams& p) {
    std::ofstream f(path);
    auto line = [&](const std::string& key, double v) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-28s %.10g\n", key.c_str(), v);
        f << buf;
    };
    line("mass_core", res.report.mass_core);
    line("mass_z", res.report.mass_z);
    line("mass_f1", res.report.mass_f1);
    line("mass_f2", res.report.mass_f2);
    line("mass_leak", res.report.mass_leak);
    line("leak_count", res.report.leak_count);
    line("graph_lip", res.report.lip);
    line("graph_support_radius", res.report.graph_support_radius);
    line("closeness_fraction", res.report.closeness_fraction);
    line("grad_l2_squared", res.report.derivative_l2_squared);
    line("second_derivative_ratio", res.report.second_derivative_ratio);
    line("max_height", res.report.max_height);
    line("height_band_sqrt_eps_alpha", res.report.height_band);
    line("whitney_intervals", static_cast<double>(res.cover.intervals.size()));
    line("whitney_overlap_2x", res.cover.max_overlap_2x);
    line("whitney_overlap_10x", res.cover.max_overlap_10x);
    line("whitney_b3_violations", res.cover.b3_violations);
    line("flagged_intervals", res.report.flagged_intervals);
    line("flagged_mass", res.report.flagged_mass);
    line("growth_violations", static_cast<double>(res.growth.size()));
    line("g_max", res.gbounds.max_g);
    line("g_l2_deviation", res.gbounds.l2_deviation);
    line("monotone_ok", res.stop.monotone_ok ? 1.0 : 0.0);
    line("monotone_violations", res.stop.monotone_violations);
    line("h_ge_d_violations", res.stop.h_ge_d_violations);
    line("z_conflicts", res.graph.z_conflicts);
    line("lambda", p.lambda());
    if (res.assumptions.ran) {
        line("assume_a_alpha30_raw", res.assumptions.alpha30_raw);
        line("assume_a_out_mass", res.assumptions.out_mass);
        line("assume_b_max_mod_density", res.assumptions.max_mod_density);
        line("assume_b_threshold", res.assumptions.mod_density_threshold);
        line("assume_c_max_alpha_spike", res.assumptions.max_alpha_spike);
        line("assume_d_op_norm", res.assumptions.op_norm);
        line("assume_e_max_band", res.assumptions.max_band);
    }
}

int cmd_construct(const std::string& config_path) {
    ExperimentConfig cfg = load_config(config_path);
    DiscreteMeasure mu = cfg.load_measure();
    fs::create_directories(cfg.out_dir);

    RunManifest manifest;
    manifest.cfg_hash = config_hash(cfg);
    manifest.tool_version = kVersion;

    auto t0 = clock_type::now();
    PipelineOptions popt;
    popt.check_assumptions = cfg.check_assumptions;
    PipelineResult res = run_construct(mu, cfg.b0(), cfg.stop, popt);
    manifest.stage_seconds.push_back({"construct", seconds_since(t0)});

    // graph file: two columns, knot and value
    std::string graph_path = cfg.out_dir + "/graph.txt";
    {
        std::ofstream f(graph_path);
        f << "p value\n";
        char buf[96];
        for (size_t j = 0; j < res.graph.values.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n",
                          res.graph.knot_lo + j * res.graph.knot_step, res.graph.values[j]);
            f << buf;
        }
    }
    std::string report_path = cfg.out_dir + "/report.txt";
    write_report_file(report_path, res, cfg.stop);

    // overlay: normalized atoms, B0, Whitney balls, graph
    std::string svg_path = cfg.out_dir + "/overlay.svg";
    {
        SvgWriter w(-4.0, 4.0, -2.0, 2.0);
        w.add_measure(res.normalized);
        w.add_ball(Ball(cpx(0, 0), 1.0));
        int count = 0;
        for (const auto& I : res.cover.intervals) {
            if (I.flagged || ++count > 400) continue;
            w.add_ball(Ball(I.ball_center, I.ball_radius), "#90b090");
        }
        std::vector<cpx> pts;
        for (size_t j = 0; j < res.graph.values.size(); ++j)
            pts.push_back(cpx(res.graph.knot_lo + j * res.graph.knot_step, res.graph.values[j]));
        w.add_polyline(pts);
        w.save(svg_path);
    }

    manifest.outputs = {graph_path, report_path, svg_path};
    write_manifest(cfg.out_dir + "/manifest.json", manifest);

    std::printf("construct: core=%.5g Z=%.5g F1=%.5g F2=%.5g leak=%.5g lip=%.4g close=%.4f\n",
                res.report.mass_core, res.report.mass_z, res.report.mass_f1, res.report.mass_f2,
                res.report.mass_leak, res.report.lip, res.report.closeness_fraction);
    return 0;
}

int cmd_analyze(const std::string& config_path) {
    ExperimentConfig cfg = load_config(config_path);
    DiscreteMeasure mu = cfg.load_measure();
    fs::create_directories(cfg.out_dir);
    PipelineResult res = run_construct(mu, cfg.b0(), cfg.stop, {});

    std::string path = cfg.out_dir + "/analysis.txt";
    std::ofstream f(path);
    char buf[200];
    std::snprintf(buf, sizeof buf, "g_max %.10g\ng_l2_deviation %.10g\ngrowth_violations %zu\n",
                  res.gbounds.max_g, res.gbounds.l2_deviation, res.growth.size());
    f << buf;

    // band-operator values over the F atoms inside pi^-1(4 I0)
    double band_sq = 0.0, fmass = 0.0, band_max = 0.0;
    for (size_t fi = 0; fi < res.stop.f_atoms.size(); ++fi) {
        const Atom& a = res.normalized.atoms[res.stop.f_atoms[fi]];
        if (std::fabs(a.pos.real()) > 4.0) continue;
        double v = band_operator_normal(res.normalized, res.stop, a.pos, cfg.stop.k);
        band_sq += v * v * a.w;
        band_max = std::max(band_max, std::fabs(v));
        fmass += a.w;
    }
    std::snprintf(buf, sizeof buf, "band_l2_mu %.10g\nband_max %.10g\ngrad_l2 %.10g\n",
                  std::sqrt(band_sq), band_max, std::sqrt(res.report.derivative_l2_squared));
    f << buf;
    std::printf("analyze: band_l2=%.6g grad_l2=%.6g g_max=%.6g growth_violations=%zu -> %s\n",
                std::sqrt(band_sq), std::sqrt(res.report.derivative_l2_squared), res.gbounds.max_g,
                res.growth.size(), path.c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// verify suites

int verify_kernel_series() {
    int failures = 0;
    for (int k : {1, 3, 5, 7}) {
        KernelSeries s = kernel_series(k, 41);
        bool ok = s.coefficients.at(1) == Rational(k);
        std::printf("  c(%d,1) == %d : %s\n", k, k, ok ? "pass" : "FAIL");
        failures += ok ? 0 : 1;
    }
    KernelSeries s3 = kernel_series(3, 41);
    bool ok33 = s3.coefficients.at(3) == Rational(-7);
    bool ok35 = s3.coefficients.at(5) == Rational(11);
    std::printf("  c(3,3) == -7 : %s\n  c(3,5) == 11 : %s\n", ok33 ? "pass" : "FAIL",
                ok35 ? "pass" : "FAIL");
    failures += (ok33 ? 0 : 1) + (ok35 ? 0 : 1);
    double inc = std::fabs(s3.coefficient(41)) * std::pow(0.5, 41);
    bool okc = inc < 1e-6;
    std::printf("  partial-sum increment at l=41 = %.3g < 1e-6 : %s\n", inc, okc ? "pass" : "FAIL");
    failures += okc ? 0 : 1;
    return failures;
}

int verify_lemmas(int instances);
int verify_modified_density();
int verify_graph_pipeline();
int verify_analysis();

int cmd_verify(const std::string& suite, int instances) {
    std::printf("suite %s\n", suite.c_str());
    int failures = 0;
    if (suite == "kernel-series")
        failures = verify_kernel_series();
    else if (suite == "lemmas-3-4")
        failures = verify_lemmas(instances);
    else if (suite == "modified-density")
        failures = verify_modified_density();
    else if (suite == "graph-pipeline")
        failures = verify_graph_pipeline();
    else if (suite == "analysis")
        failures = verify_analysis();
    else {
        std::fprintf(stderr, "unknown suite %s\n", suite.c_str());
        return 2;
    }
    std::printf("%s: %d failure(s)\n", suite.c_str(), failures);
    return failures == 0 ? 0 : 1;
}

int verify_lemmas(int instances) {
    // randomized literal-constant checks for the density-comparison bounds;
    // hypotheses are verified computationally before each assertion
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int failures = 0, done31 = 0, done421 = 0, done422 = 0;
    AlphaOptions aopt;
    aopt.final_aggregate = true;
    long guard = 0;
    while ((done31 < instances || done421 < instances || done422 < instances) &&
           ++guard < 40L * instances) {
        int m = unif(rng) < 0.5 ? 1 : 3;
        double base = unif(rng) * kPi / m;
        SpikeMeasure model(cpx(0, 0), base, m, 1.0);
        double spacing = 4e-3;
        DiscreteMeasure mu = discretize_model(model, Ball(cpx(0, 0), 10.0), spacing);
        // light off-support dust keeps the instances honest
        int dust = 1 + static_cast<int>(unif(rng) * 3);
        for (int dd = 0; dd < dust; ++dd) {
            Atom da;
            da.pos = cpx(4.0 * (unif(rng) - 0.5), 4.0 * (unif(rng) - 0.5));
            da.w = 1e-4 + 1e-3 * unif(rng);
            mu.atoms.push_back(da);
        }
        cpx x = model.vertex;
        double r = 0.5 + unif(rng);
        Ball b(x, r);
        DiscreteMeasure nu = discretize_model(model, Ball(x, 4.0 * r), spacing / 2.0);
        AlphaResult ar = alpha_pair(mu, nu, b, aopt);
        if (!ar.ok()) continue;
        double dens = density(mu, b).density;
        if (dens <= 0.0) continue;
        double dnu = density_ratio_spike(model);
        double gamma_base = (ar.raw + ar.tolerance) / dens;

        if (done31 < instances) {
            // off-support ball: dist(z, supp nu) >= 2s, B(z,s) in B(x,3r)
            double s = r * (0.05 + 0.2 * unif(rng));
            double ang = model.ray_angle(0) + kPi / (2.0 * m);
            double dist = 2.2 * s + unif(rng) * r;
            cpx z = x + std::polar(dist, ang);
            if (model.distance_to_support(z) >= 2.0 * s && std::abs(z - x) + s <= 3.0 * r) {
                double gamma = std::max(gamma_base, 1e-12);
                double lhs = density(mu, Ball(z, s)).density;
                double rhs = gamma * (r / s) * (r / s) * dens;
                if (lhs > rhs * (1.0 + 1e-9)) {
                    ++failures;
                    std::printf("  off-support bound FAIL lhs=%.4g rhs=%.4g\n", lhs, rhs);
                }
                ++done31;
            }
        }
        if (done421 < instances) {
            // upper comparison: gamma < (1/9)(s/r)^2
            double s = r * (0.4 + 0.6 * unif(rng));
            cpx z = x + std::polar(unif(rng) * 2.0 * r, unif(rng) * 2.0 * kPi);
            if (std::abs(z - x) + s <= 3.0 * r) {
                double gamma = std::max(gamma_base, 1e-12);
                if (gamma < (s / r) * (s / r) / 9.0) {
                    double lhs = density(mu, Ball(z, s)).density;
                    double rhs = 3.0 * dnu * (1.0 + 8.0 * std::sqrt(gamma) * r / s) * dens;
                    if (lhs > rhs * (1.0 + 1e-9)) {
                        ++failures;
                        std::printf("  upper comparison FAIL lhs=%.4g rhs=%.4g\n", lhs, rhs);
                    }
                    if (m == 1) {
                        double sharp = (1.0 + 8.0 * std::sqrt(gamma) * r / s) * dens;
                        if (lhs > sharp * (1.0 + 1e-9)) {
                            ++failures;
                            std::printf("  sharp line comparison FAIL\n");
                        }
                    }
                    ++done421;
                }
            }
        }
        if (done422 < instances) {
            // lower comparison at a support point: gamma < (1/9 Dnu)(s/r)^2
            double s = r * (0.55 + 0.45 * unif(rng));
            int ray = static_cast<int>(unif(rng) * m);
            double rho = (unif(rng) - 0.5) * 2.0 * r;
            cpx z = x + std::polar(rho, model.ray_angle(ray));
            if (std::abs(z - x) + s <= 3.0 * r) {
                double gamma = std::max(gamma_base, 1e-12);
                if (gamma < (s / r) * (s / r) / (9.0 * dnu)) {
                    double lhs = density(mu, Ball(z, s)).density;
                    double rhs =
                        (1.0 - 8.0 * std::sqrt(dnu * gamma) * r / s) / dnu * dens;
                    if (lhs < rhs * (1.0 - 1e-9) - spacing) {
                        ++failures;
                        std::printf("  lower comparison FAIL lhs=%.4g rhs=%.4g\n", lhs, rhs);
                    }
                    ++done422;
                }
            }
        }
    }
    std::printf("  instances: off-support %d, upper %d, lower %d; failures %d\n", done31, done421,
                done422, failures);
    if (done31 < instances || done421 < instances || done422 < instances) {
        std::printf("  sampler exhausted before reaching the requested count\n");
        ++failures;
    }
    return failures;
}

int verify_modified_density() {
    int failures = 0;
    // flat input: the base ball qualifies, value near 1
    GeneratorSpec g;
    g.kind = "segment";
    g.half_length = 40.0;
    g.spacing = 2e-3;
    DiscreteMeasure seg = generate(g);
    auto md = modified_density(seg, Ball(cpx(0, 0), 1.0), 0.05, 3);
    bool ok1 = md.witness.has_value() && std::fabs(md.value - 1.0) < 0.1;
    std::printf("  segment: value %.4f witness=%d : %s\n", md.value, md.witness.has_value(),
                ok1 ? "pass" : "FAIL");
    failures += ok1 ? 0 : 1;
    // bound value <= (2/lambda_k) base density
    bool ok2 = md.value <= (2.0 / lambda_k(3)) * density(seg, Ball(cpx(0, 0), 1.0)).density;
    std::printf("  upper bound via lambda_k : %s\n", ok2 ? "pass" : "FAIL");
    failures += ok2 ? 0 : 1;
    return failures;
}

int verify_graph_pipeline() {
    int failures = 0;
    GeneratorSpec g;
    g.kind = "lipschitz-graph";
    g.shape = "saw";
    g.slope = 0.005;
    g.period = 0.5;
    g.half_length = 50.0;  // the t_max = 12 windows must stay inside the data
    g.spacing = 1e-2;
    DiscreteMeasure mu = generate(g);
    StopParams p;
    p.epsilon = 1e-8;
    p.theta = 1e-2;
    p.alpha = 1e-1;
    p.delta = 4e-1;
    PipelineResult res = run_construct(mu, Ball(cpx(0, 0), 1.0), p, {});
    bool okz = res.report.mass_z >= 0.95 * res.report.mass_core;
    bool okl = res.report.lip <= 10.0 * p.alpha;
    bool okc = res.report.closeness_fraction >= 0.99;
    bool okg = res.growth.empty();
    std::printf("  Z mass %.4g / core %.4g : %s\n", res.report.mass_z, res.report.mass_core,
                okz ? "pass" : "FAIL");
    std::printf("  lip %.4g <= %.2g : %s\n", res.report.lip, 10.0 * p.alpha, okl ? "pass" : "FAIL");
    std::printf("  closeness %.4f : %s\n", res.report.closeness_fraction, okc ? "pass" : "FAIL");
    std::printf("  growth violations %zu : %s\n", res.growth.size(), okg ? "pass" : "FAIL");
    failures += (okz ? 0 : 1) + (okl ? 0 : 1) + (okc ? 0 : 1) + (okg ? 0 : 1);
    return failures;
}

int verify_analysis() {
    int failures = 0;
    // smoothing kernel mass
    for (double p : {0.1, 1.0, 7.3}) {
        double acc = 0.0, h = p * 1e-6;
        for (double t = -p + h / 2; t < p; t += h) acc += eta_p(p, t) * h;
        bool ok = std::fabs(acc - 1.0) < 1e-6;
        std::printf("  ||eta_p||_1 (p=%.2g) = %.8f : %s\n", p, acc, ok ? "pass" : "FAIL");
        failures += ok ? 0 : 1;
    }
    // shift bound of the smoothing kernel against a 1-Lipschitz profile
    {
        auto Dfun = [](double t) { return 1.0 + 0.5 * std::sin(t); };
        double lam = 1e-2;
        double worst = 0.0;
        bool okw = true;
        for (double s = -3.0; s <= 3.0; s += 0.01) {
            double Ds = Dfun(s);
            for (double t = s - 1.5; t <= s + 1.5; t += 0.01) {
                double diff = std::fabs(eta_p(std::sqrt(lam) * Dfun(t), t - s) -
                                        eta_p(std::sqrt(lam) * Ds, t - s));
                if (diff > 1e-15 &&
                    std::fabs(t - s) > calib::kEtaShiftWindow * std::sqrt(lam) * Ds)
                    okw = false;
                worst = std::max(worst, diff / (std::sqrt(lam) / Ds));
            }
        }
        bool okc = worst <= calib::kEtaShiftC;
        std::printf("  eta shift constant %.3f <= %.3f, window : %s\n", worst, calib::kEtaShiftC,
                    (okc && okw) ? "pass" : "FAIL");
        failures += (okc && okw) ? 0 : 1;
    }
    return failures;
}

int cmd_report(const std::string& run_dir) {
    for (const char* name : {"report.txt", "analysis.txt", "manifest.json"}) {
        fs::path p = fs::path(run_dir) / name;
        if (!fs::exists(p)) continue;
        std::printf("== %s ==\n", p.string().c_str());
        std::ifstream f(p);
        std::string line;
        while (std::getline(f, line)) std::printf("%s\n", line.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for transport-coefficient geometry of planar measures"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic measure file");
    GeneratorSpec spec;
    std::string out = "measure.txt";
    gen->add_option("--kind", spec.kind, "segment|spike|cantor|lipschitz-graph|perturbed-line")
        ->required();
    gen->add_option("--spacing", spec.spacing);
    gen->add_option("--half-length", spec.half_length);
    gen->add_option("--m", spec.m);
    gen->add_option("--base-angle", spec.base_angle);
    gen->add_option("--density", spec.c);
    gen->add_option("--window-radius", spec.window_radius);
    gen->add_option("--vertex-x", spec.vertex_x);
    gen->add_option("--vertex-y", spec.vertex_y);
    gen->add_option("--level", spec.level);
    gen->add_option("--shape", spec.shape);
    gen->add_option("--amplitude", spec.amplitude);
    gen->add_option("--center", spec.center);
    gen->add_option("--width", spec.width);
    gen->add_option("--slope", spec.slope);
    gen->add_option("--period", spec.period);
    gen->add_option("--eta", spec.eta);
    gen->add_option("--modes", spec.modes);
    gen->add_option("--seed", spec.seed);
    gen->add_option("--out", out);

    // alpha
    auto* al = app.add_subcommand("alpha", "transportation coefficients on a ball or sweep");
    std::string a_measure, a_kind = "line", a_mode = "search", a_csv, a_svg, a_nu;
    double a_cx = 0, a_cy = 0, a_r = 1, a_angle = 0, a_cone = 0.1, a_rmin = 0.01, a_rmax = 1.0;
    int a_k = 3, a_sweep = 0;
    al->add_option("--measure", a_measure)->required();
    al->add_option("--kind", a_kind, "line|spike|pair");
    al->add_option("--cx", a_cx);
    al->add_option("--cy", a_cy);
    al->add_option("--r", a_r);
    al->add_option("--k", a_k);
    al->add_option("--mode", a_mode, "search|fixed|cone");
    al->add_option("--angle", a_angle);
    al->add_option("--cone-width", a_cone);
    al->add_option("--sweep", a_sweep, "number of radii (geometric between rmin and rmax)");
    al->add_option("--rmin", a_rmin);
    al->add_option("--rmax", a_rmax);
    al->add_option("--csv", a_csv);
    al->add_option("--svg", a_svg);
    al->add_option("--nu", a_nu, "second measure for kind=pair");

    // transform
    auto* tr = app.add_subcommand("transform", "truncated/band transforms and operator norms");
    std::string t_measure, t_part = "normal", t_csv;
    double t_zx = 0, t_zy = 0, t_r1 = 0.1, t_r2 = -1;
    int t_k = 3;
    bool t_opnorm = false;
    tr->add_option("--measure", t_measure)->required();
    tr->add_option("--k", t_k);
    tr->add_option("--part", t_part, "full|normal");
    tr->add_option("--zx", t_zx);
    tr->add_option("--zy", t_zy);
    tr->add_option("--r", t_r1);
    tr->add_option("--r2", t_r2, "outer band scale (zero band when r2 <= r)");
    tr->add_flag("--op-norm", t_opnorm);
    tr->add_option("--csv", t_csv);

    // construct / analyze
    auto* co = app.add_subcommand("construct", "run the stopping-time graph construction");
    std::string c_config;
    co->add_option("--config", c_config)->required();
    auto* an = app.add_subcommand("analyze", "projection/band analysis of a configured run");
    std::string an_config;
    an->add_option("--config", an_config)->required();

    // verify / report
    auto* ve = app.add_subcommand("verify", "run a named invariant suite");
    std::string v_suite;
    int v_instances = 200;
    ve->add_option("--suite", v_suite,
                   "lemmas-3-4|modified-density|kernel-series|graph-pipeline|analysis")
        ->required();
    ve->add_option("--instances", v_instances);
    auto* re = app.add_subcommand("report", "print the reports of a run directory");
    std::string r_dir;
    re->add_option("--run", r_dir)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(spec, out);
        if (al->parsed())
            return cmd_alpha(a_measure, a_kind, Ball(cpx(a_cx, a_cy), a_r), a_k, a_mode, a_angle,
                             a_cone, a_sweep, a_rmin, a_rmax, a_csv, a_svg, a_nu);
        if (tr->parsed())
            return cmd_transform(t_measure, t_k, t_part, t_zx, t_zy, t_r1, t_r2, t_opnorm, t_csv);
        if (co->parsed()) return cmd_construct(c_config);
        if (an->parsed()) return cmd_analyze(an_config);
        if (ve->parsed()) return cmd_verify(v_suite, v_instances);
        if (re->parsed()) return cmd_report(r_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
