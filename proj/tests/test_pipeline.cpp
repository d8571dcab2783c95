#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hv/analysis.hpp"
#include "hv/calibration.hpp"
#include "hv/cutoffs.hpp"
#include "hv/generators.hpp"
#include "hv/pipeline.hpp"

using namespace hv;

namespace {

StoppingData synthetic_region(double lo, double step, const std::vector<double>& D) {
    StoppingData sd;
    sd.knot_lo = lo;
    sd.knot_step = step;
    sd.D_grid = D;
    return sd;
}

}  // namespace

TEST_CASE("whitney cover on a constant distance function") {
    // D == 1: the largest dyadic with diam <= 1/20 is 1/32
    int n = 20001;
    std::vector<double> D(n, 1.0);
    StoppingData sd = synthetic_region(-10.0, 20.0 / (n - 1), D);
    WhitneyCover cover = whitney_cover(sd);
    REQUIRE(!cover.intervals.empty());
    for (const auto& I : cover.intervals) CHECK(I.diam() == doctest::Approx(1.0 / 32.0));
    CHECK(cover.b3_violations == 0);
    CHECK(cover.max_overlap_10x <= 16);
}

TEST_CASE("whitney cover respects maximality for D(u) = |u|") {
    int n = 40001;
    double step = 20.0 / (n - 1);
    std::vector<double> D(n);
    for (int j = 0; j < n; ++j) D[j] = std::fabs(-10.0 + j * step);
    StoppingData sd = synthetic_region(-10.0, step, D);
    WhitneyCover cover = whitney_cover(sd);
    bool found = false;
    for (const auto& I : cover.intervals) {
        if (I.lo <= 1.0 && 1.0 < I.hi) {
            found = true;
            CHECK(I.lo == doctest::Approx(1.0));
            CHECK(I.hi == doctest::Approx(33.0 / 32.0));
        }
        // certificate: diam <= (1/20) inf over the interval
        double inf_d = std::min(std::fabs(I.lo), std::fabs(I.hi));
        if (I.lo < 0.0 && I.hi > 0.0) inf_d = 0.0;
        CHECK(I.diam() <= inf_d / 20.0 + 1e-12);
    }
    CHECK(found);
}

TEST_CASE("stopping region on an exact segment") {
    GeneratorSpec g;
    g.kind = "segment";
    g.half_length = 50.0;
    g.spacing = 0.04;
    DiscreteMeasure mu = generate(g);
    double w_scale = 2.0 / density(mu, Ball(cpx(0, 0), 1.0)).mass;
    mu = mu.scaled_weights(w_scale);

    StopParams p;
    p.epsilon = 1e-8;
    p.theta = 1e-2;
    p.alpha = 1e-1;
    p.delta = 4e-1;
    StoppingData sd = build_stopping(mu, p);
    CHECK(sd.monotone_ok);
    for (double h : sd.height) CHECK(h == 0.0);  // every scale is a member
    CHECK(sd.max_height == 0.0);

    Partition part = partition_scales(mu, sd, p);
    CHECK(part.mass_z == doctest::Approx(part.mass_core));
    CHECK(part.mass_f1 == 0.0);
    CHECK(part.mass_f2 == 0.0);

    // d vanishes on Z atoms and is 1-Lipschitz on samples
    for (size_t c = 0; c < sd.core.size(); ++c) CHECK(sd.d_at_f[sd.core[c]] <= 1e-12);
    for (size_t j = 1; j + 1 < sd.D_grid.size(); j += 97)
        CHECK(std::fabs(sd.D_grid[j + 1] - sd.D_grid[j]) <= sd.knot_step + 1e-12);

    // h >= d on the core
    CHECK(sd.h_ge_d_violations == 0);

    WhitneyCover cover = whitney_cover(sd);
    attach_interval_lines(cover, mu, sd, p);
    LipschitzGraph graph = assemble_graph(cover, mu, sd, part, p);
    CHECK(graph.lip_estimate <= 5e-3);
    CHECK(graph.max_abs <= 1e-3);
    GraphReport rep = graph_report(graph, cover, mu, sd, part, p);
    CHECK(rep.closeness_fraction == doctest::Approx(1.0));
    CHECK(rep.derivative_l2_squared <= 1e-6);
    CHECK(rep.graph_support_radius <= 3.0);
}

TEST_CASE("membership examples") {
    GeneratorSpec g;
    g.kind = "segment";
    g.half_length = 50.0;
    g.spacing = 0.04;
    DiscreteMeasure mu = generate(g);
    double w_scale = 2.0 / density(mu, Ball(cpx(0, 0), 1.0)).mass;
    mu = mu.scaled_weights(w_scale);
    StopParams p;
    p.epsilon = 1e-8;
    p.theta = 1e-2;
    p.alpha = 1e-1;
    p.delta = 4e-1;
    SpatialIndex idx(mu);
    double nn = idx.median_nn_spacing();

    Membership yes = in_s_total(mu, idx, cpx(0.2, 0.0), 1.0, p, nn);
    CHECK(yes.member);
    REQUIRE(yes.witness.has_value());
    CHECK(angle_between(yes.witness->base_angle, 0.0) <= p.alpha + 1e-9);

    // a scale holding one atom has density below delta
    DiscreteMeasure lonely = mu;
    lonely.atoms.push_back({cpx(0.3, 0.9), 1e-4});
    SpatialIndex idx2(lonely);
    Membership tiny = in_s_total(lonely, idx2, cpx(0.3, 0.9), 3.0 * nn, p, nn);
    CHECK(!tiny.member);
    CHECK(tiny.density < p.delta);
}

TEST_CASE("isolated light atom lands in F1") {
    GeneratorSpec g;
    g.kind = "segment";
    g.half_length = 50.0;
    g.spacing = 0.04;
    DiscreteMeasure mu = generate(g);
    double w_scale = 2.0 / density(mu, Ball(cpx(0, 0), 1.0)).mass;
    mu = mu.scaled_weights(w_scale);
    mu.atoms.push_back({cpx(0.4, 0.85), 2e-4});

    StopParams p;
    p.epsilon = 1e-8;
    p.theta = 1e-2;
    p.alpha = 1e-1;
    p.delta = 4e-1;
    StoppingData sd = build_stopping(mu, p);
    Partition part = partition_scales(mu, sd, p);

    int mine = -1;
    for (size_t c = 0; c < sd.core.size(); ++c)
        if (mu.atoms[sd.f_atoms[sd.core[c]]].pos == cpx(0.4, 0.85)) mine = static_cast<int>(c);
    REQUIRE(mine >= 0);
    CHECK(sd.height[mine] > 0.0);
    CHECK(part.label[mine] == FLabel::F1);
    CHECK(part.mass_f1 > 0.0);
}

TEST_CASE("off-cone flat scales land in F2") {
    // rotated segment: flat at every scale but at an angle beyond the cone
    GeneratorSpec g;
    g.kind = "segment";
    g.half_length = 12.0;
    g.spacing = 0.02;
    DiscreteMeasure mu = generate(g).rotated(0.35);

    StopParams p;
    p.epsilon = 1e-8;
    p.theta = 1e-2;
    p.alpha = 1e-1;
    p.delta = 4e-1;

    // fabricate heights at a scale where the window is pure rotated line
    StoppingData sd;
    for (int i = 0; i < static_cast<int>(mu.atoms.size()); ++i)
        if (std::abs(mu.atoms[i].pos) <= 10.0) sd.f_atoms.push_back(i);
    for (int fi = 0; fi < static_cast<int>(sd.f_atoms.size()); ++fi)
        if (std::abs(mu.atoms[sd.f_atoms[fi]].pos) <= 1.0) sd.core.push_back(fi);
    sd.height.assign(sd.core.size(), 0.5);
    sd.first_member.assign(sd.core.size(), 0.5);

    Partition part = partition_scales(mu, sd, p);
    int f2 = 0;
    for (auto l : part.label)
        if (l == FLabel::F2) ++f2;
    CHECK(f2 > 0);
    CHECK(part.mass_f2 > 0.9 * part.mass_core);
}

TEST_CASE("slope bounds of sampled pairs and Z atoms") {
    GeneratorSpec g;
    g.kind = "lipschitz-graph";
    g.shape = "saw";
    g.slope = 0.004;
    g.period = 1.0;
    g.half_length = 50.0;
    g.spacing = 0.04;
    DiscreteMeasure mu = generate(g);
    double w_scale = 2.0 / density(mu, Ball(cpx(0, 0), 1.0)).mass;
    mu = mu.scaled_weights(w_scale);
    StopParams p;
    p.epsilon = 1e-8;
    p.theta = 1e-2;
    p.alpha = 1e-1;
    p.delta = 4e-1;
    StoppingData sd = build_stopping(mu, p);
    double lam = p.lambda();

    // pairs (x, t) with t = first member scale; the comparison applies when
    // the separation exceeds sqrt(lambda) max(t1, t2)
    int checked = 0;
    for (size_t a = 0; a < sd.core.size(); a += 7) {
        for (size_t b = a + 1; b < sd.core.size(); b += 11) {
            cpx x = mu.atoms[sd.f_atoms[sd.core[a]]].pos;
            cpx y = mu.atoms[sd.f_atoms[sd.core[b]]].pos;
            double t1 = std::max(sd.first_member[a], sd.t_min);
            double t2 = std::max(sd.first_member[b], sd.t_min);
            if (!std::isfinite(t1) || !std::isfinite(t2)) continue;
            if (std::abs(x - y) < std::sqrt(lam) * std::max(t1, t2)) continue;
            double lhs = std::fabs(proj_perp(x) - proj_perp(y));
            double rhs = (p.alpha + calib::kSlopeC * std::sqrt(lam)) *
                         std::fabs(proj(x) - proj(y));
            CHECK(lhs <= rhs + 1e-12);
            ++checked;
            // Z atoms satisfy the literal 2 alpha bound
            if (sd.height[a] == 0.0 && sd.height[b] == 0.0)
                CHECK(lhs <= 2.0 * p.alpha * std::fabs(proj(x) - proj(y)) + 1e-12);
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("smoothed density and growth on a segment projection") {
    GeneratorSpec g;
    g.kind = "segment";
    g.half_length = 50.0;
    g.spacing = 0.02;
    DiscreteMeasure mu = generate(g);
    double w_scale = 2.0 / density(mu, Ball(cpx(0, 0), 1.0)).mass;
    mu = mu.scaled_weights(w_scale);
    StopParams p;
    p.epsilon = 1e-8;
    p.theta = 1e-2;
    p.alpha = 1e-1;
    p.delta = 4e-1;
    StoppingData sd = build_stopping(mu, p);
    std::vector<int> fidx = sd.f_atoms;
    Measure1D sigma = pushforward_projection(mu, fidx);

    auto grow = sigma_growth_check(sigma, sd, p.epsilon, p.alpha, calib::kGrowthC);
    CHECK(grow.empty());

    // g at points with positive window: close to 1; bounded by 3 everywhere
    GBounds gb = g_bounds_check(sigma, sd, p.lambda());
    CHECK(gb.max_g <= 3.0);
    CHECK(gb.max_g <= 1.0 + calib::kGrowthC * p.alpha * p.alpha + 0.05);

    // degenerate projection grossly violates growth and is detected
    DiscreteMeasure vert;
    for (int i = 0; i < 200; ++i) vert.atoms.push_back({cpx(0.0, i * 1e-3), 0.05});
    Measure1D sv = pushforward_projection(vert, [&] {
        std::vector<int> v(vert.atoms.size());
        for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
        return v;
    }());
    StoppingData fake = sd;
    auto bad = sigma_growth_check(sv, fake, p.epsilon, p.alpha, calib::kGrowthC);
    CHECK(!bad.empty());
}

TEST_CASE("band operator zero convention and segment bound") {
    GeneratorSpec g;
    g.kind = "segment";
    g.half_length = 50.0;
    g.spacing = 0.02;
    DiscreteMeasure mu = generate(g);
    StopParams p;
    p.epsilon = 1e-8;
    p.theta = 1e-2;
    p.alpha = 1e-1;
    p.delta = 4e-1;
    StoppingData sd = build_stopping(mu, p);

    // l(x) >= 1 gives the zero band
    StoppingData far = sd;
    far.D_grid.assign(far.D_grid.size(), 15.0);
    CHECK(band_operator_normal(mu, far, cpx(0.1, 0.0), 3) == 0.0);

    // on-segment band value is a quadrature remnant of an odd kernel
    StoppingData mid = sd;
    mid.D_grid.assign(mid.D_grid.size(), 1.0);  // l(x) = 0.1
    double v = band_operator_normal(mu, mid, cpx(0.11, 0.0), 3);
    CHECK(std::fabs(v) <= 5.0 * g.spacing / 0.1);
}

TEST_CASE("eta shift bound against 1-Lipschitz windows") {
    auto Dfun = [](double t) { return 1.0 + 0.4 * std::sin(1.3 * t); };
    double lam = 4e-3;
    for (double s = -2.0; s <= 2.0; s += 0.017) {
        double Ds = Dfun(s);
        for (double t = s - 1.0; t <= s + 1.0; t += 0.013) {
            double diff = std::fabs(eta_p(std::sqrt(lam) * Dfun(t), t - s) -
                                    eta_p(std::sqrt(lam) * Ds, t - s));
            if (diff > 1e-15)
                CHECK(std::fabs(t - s) <=
                      calib::kEtaShiftWindow * std::sqrt(lam) * Ds + 1e-12);
            CHECK(diff <= calib::kEtaShiftC * std::sqrt(lam) / Ds + 1e-12);
        }
    }
}

TEST_CASE("commutator tail") {
    SampledFunction flat = SampledFunction::sample(-2.0, 2.0, 1e-2, [](double) { return 0.0; });
    CHECK(commutator_tail(flat, 0.2, 3) == 0.0);

    GeneratorSpec g;
    g.kind = "lipschitz-graph";
    g.shape = "bump";
    g.amplitude = 0.05;
    g.width = 1.0;
    g.half_length = 3.0;
    SampledFunction A = graph_profile(g, 2e-3);

    // k = 1 tail is nonzero (the expansion has higher odd terms) and matches
    // the series evaluation route term-by-term at leading order
    double tail1 = commutator_tail(A, 0.25, 1);
    CHECK(std::fabs(tail1) > 1e-8);

    // the tail is the full transform minus the leading commutator term
    double full = pv_graph_transform(A, 0.25, 3).value;
    double lead = 0.0;
    {
        // k (A(t)-A(s))/(t-s)^2 by the same symmetric quadrature
        double du = A.h, range = (A.t_end() - A.t0) + 8.0, at = A(0.25);
        long steps = static_cast<long>(std::ceil(range / du));
        for (long j = 1; j <= steps; ++j) {
            double u = (j - 0.5) * du;
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                double s = 0.25 + sgn * u;
                lead += 3.0 * (at - A(s)) / ((0.25 - s) * (0.25 - s)) * du;
            }
        }
    }
    double tail3 = commutator_tail(A, 0.25, 3);
    // J factors are absent from both tail and lead, so compare at O(slope^2)
    CHECK(tail3 == doctest::Approx(full - lead).epsilon(0.05).scale(std::fabs(full) + 1e-6));

    CHECK_THROWS(commutator_tail(SampledFunction::sample(-1, 1, 1e-2, [](double t) { return t; }),
                                 0.0, 3));
}

TEST_CASE("lower bound ledger scaling") {
    auto make = [](double a) {
        GeneratorSpec g;
        g.kind = "lipschitz-graph";
        g.shape = "bump";
        g.amplitude = a;
        g.width = 1.0;
        g.half_length = 3.0;
        return graph_profile(g, 4e-3);
    };
    SampledFunction zero = make(0.0);
    LowerBoundLedger z = lower_bound_ledger(zero, 3);
    CHECK(z.lhs == 0.0);
    CHECK(z.grad_l2_squared == 0.0);
    CHECK(z.grad_sup == 0.0);

    PvOptions opt;
    opt.u_step = 4e-3;
    LowerBoundLedger small = lower_bound_ledger(make(1e-3), 3, 0.05, opt, 4);
    LowerBoundLedger mid = lower_bound_ledger(make(1e-2), 3, 0.05, opt, 4);
    CHECK(small.lhs / 1e-6 == doctest::Approx(mid.lhs / 1e-4).epsilon(0.02));

    LowerBoundLedger k1 = lower_bound_ledger(make(1e-3), 1, 0.05, opt, 4);
    LowerBoundLedger k5 = lower_bound_ledger(make(1e-3), 5, 0.05, opt, 4);
    CHECK(small.lhs / (9.0 * k1.lhs) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(k5.lhs / (25.0 * k1.lhs) == doctest::Approx(1.0).epsilon(0.05));

    CHECK_THROWS(lower_bound_ledger(make(0.2), 3));
}
