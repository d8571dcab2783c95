#include "hv/pipeline.hpp"

#include <cmath>
#include <stdexcept>

#include "hv/calibration.hpp"

namespace hv {

PipelineResult run_construct(const DiscreteMeasure& input, const Ball& b0, const StopParams& params,
                             const PipelineOptions& opt) {
    params.validate();
    PipelineResult out;

    // base direction from the flatness witness of 30 B0 on the raw input
    {
        AlphaOptions aopt = params.alpha_opt;
        aopt.final_aggregate = true;
        AlphaResult a = alpha_line(input, b0.scaled(30.0), LineQuery{}, aopt);
        out.base_angle_original = a.witness ? a.witness->base_angle : 0.0;
    }

    // normalize: rotate the base line onto the real axis, move c(B0) to the
    // origin, rescale to unit radius and unit density
    double mass_b0 = density(input, b0).mass;
    if (!(mass_b0 > 0.0)) throw std::invalid_argument("run_construct: B0 carries no mass");
    out.frame.center = b0.center;
    out.frame.radius = b0.radius;
    out.frame.rotation = -out.base_angle_original;
    out.frame.weight_scale = 2.0 / mass_b0 * b0.radius;

    DiscreteMeasure mu = input.rotated(out.frame.rotation, b0.center)
                             .translated(-b0.center)
                             .dilated(1.0 / b0.radius);
    // dilated() scales weights by the factor; rescale to unit density
    double w_scale = 2.0 / density(mu, Ball(cpx(0, 0), 1.0)).mass;
    mu = mu.scaled_weights(w_scale);
    out.normalized = mu;

    out.stop = build_stopping(mu, params);
    out.part = partition_scales(mu, out.stop, params);
    out.cover = whitney_cover(out.stop);
    attach_interval_lines(out.cover, mu, out.stop, params);
    out.graph = assemble_graph(out.cover, mu, out.stop, out.part, params);
    out.report = graph_report(out.graph, out.cover, mu, out.stop, out.part, params);

    out.sigma = pushforward_projection(mu, [&] {
        std::vector<int> idxs;
        for (int fi : out.stop.f_atoms) idxs.push_back(fi);
        return idxs;
    }());
    out.growth = sigma_growth_check(out.sigma, out.stop, params.epsilon, params.alpha,
                                    calib::kGrowthC);
    out.gbounds = g_bounds_check(out.sigma, out.stop, params.lambda());

    if (opt.check_assumptions) {
        AssumptionChecks& ac = out.assumptions;
        ac.ran = true;
        AlphaOptions aopt = params.alpha_opt;
        aopt.final_aggregate = true;
        {
            LineQuery fixed;
            fixed.mode = LineMode::fixed;
            fixed.fixed_angle = 0.0;
            AlphaResult a30 = alpha_line(mu, Ball(cpx(0, 0), 30.0), fixed, aopt);
            ac.alpha30_raw = a30.raw;
        }
        double total_10 = 0.0;
        for (const auto& a : mu.atoms)
            if (std::abs(a.pos) < 10.0) total_10 += a.w;
        double f_mass = 0.0;
        for (int fi : out.stop.f_atoms) f_mass += mu.atoms[fi].w;
        ac.out_mass = std::max(0.0, total_10 - f_mass);

        // sampled (b) and (c) over core atoms and a few scales
        ac.mod_density_threshold = 1.0 + std::pow(params.theta, params.theta_exponent);
        int ns = std::max(1, opt.assumption_samples);
        size_t stride = std::max<size_t>(1, out.stop.core.size() / ns);
        ModifiedDensityOptions mopt;
        mopt.alpha = params.alpha_opt;
        ac.samples = 0;
        for (size_t c = 0; c < out.stop.core.size(); c += stride) {
            cpx x = mu.atoms[out.stop.f_atoms[out.stop.core[c]]].pos;
            for (double r : {0.5, 2.0, 20.0}) {
                auto md = modified_density(mu, Ball(x, r), params.epsilon, params.k, mopt);
                ac.max_mod_density = std::max(ac.max_mod_density, md.value);
                AlphaResult as = alpha_spike(mu, Ball(x, r), params.k, aopt);
                if (as.ok()) ac.max_alpha_spike = std::max(ac.max_alpha_spike, as.raw);
                ++ac.samples;
            }
        }

        // (d) operator norm on an aggregated copy
        {
            DiscreteMeasure small = mu;
            double cell = 1e-2;
            while (small.atoms.size() > 1200) {
                small = aggregate(mu, cell);
                cell *= 2.0;
            }
            ac.op_norm =
                operator_norm_estimate(small, params.k, default_r_grid(small, 2), 200, 1500).value;
        }

        // (e) band values over sampled atoms and scale pairs
        for (size_t c = 0; c < out.stop.core.size(); c += stride) {
            cpx x = mu.atoms[out.stop.f_atoms[out.stop.core[c]]].pos;
            for (double r1 : {0.01, 0.1, 1.0})
                for (double r2 : {0.5, 4.0, 80.0})
                    if (r1 < r2)
                        ac.max_band = std::max(
                            ac.max_band,
                            std::abs(truncated_transform(mu, x, r1, params.k, r2)));
        }
    }
    return out;
}

}  // namespace hv
