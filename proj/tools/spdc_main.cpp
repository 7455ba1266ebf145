#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spdc/analysis.hpp"
#include "spdc/clicks.hpp"
#include "spdc/config.hpp"
#include "spdc/csv.hpp"
#include "spdc/errors.hpp"
#include "spdc/interferometry.hpp"
#include "spdc/magnus.hpp"
#include "spdc/manifest.hpp"
#include "spdc/model.hpp"
#include "spdc/nlfit.hpp"
#include "spdc/propagator.hpp"
#include "spdc/units.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<double> gain;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "Run configuration JSON (default: built-in scenario)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_dir, "Output directory (created if missing)");
    cmd->add_option("--seed", o.seed, "Override the configured random seed");
    cmd->add_option("--gain", o.gain, "Override pump.gain");
}

spdc::RunConfig resolve_config(const CommonOpts& o) {
    spdc::RunConfig cfg = o.config_path.empty() ? spdc::default_reference_config()
                                                : spdc::load_config(o.config_path);
    if (o.seed) cfg.seed = *o.seed;
    if (o.gain) cfg.pump.gain = *o.gain;
    cfg.validate();
    return cfg;
}

std::map<std::string, std::string> base_meta(const spdc::RunConfig& cfg,
                                             const std::string& command) {
    return {
        {"tool", "spdc"},
        {"version", spdc::kToolVersion},
        {"command", command},
        {"config_hash", spdc::hex64(spdc::fnv1a64(spdc::dump_config(cfg)))},
        {"seed", std::to_string(cfg.seed)},
    };
}

void write_json_file(const std::string& path, const json& j) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw spdc::data_error("cannot open '" + tmp + "' for writing");
        out << j.dump(2) << "\n";
        if (!out) throw spdc::data_error("short write to '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw spdc::data_error("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

double solver_window(const spdc::RunConfig& cfg) {
    return cfg.solver.window_halfwidth > 0.0 ? cfg.solver.window_halfwidth
                                             : 8.0 / cfg.pump.pulse_duration_ps;
}

json delay_json(const spdc::AnalyticDelayResult& ad) {
    return {{"delay_ps", ad.delay_ps},
            {"beta0_ps", ad.beta0_ps},
            {"beta_ps", ad.beta_ps},
            {"within_validated_gain", ad.within_validated_gain}};
}

// ---- jsa ----------------------------------------------------------------

std::vector<std::string> cmd_jsa(const spdc::RunConfig& cfg, const std::string& out,
                                 bool run_sweep) {
    std::vector<std::string> outputs;

    const spdc::TransferMatrices tm = spdc::propagate(cfg.crystal, cfg.pump, cfg.solver);
    const spdc::JsaDecomposition dec = spdc::jsa_from_transfer(tm);
    const spdc::JsaGrid state = spdc::state_jsa(tm);
    // A zero-gain run produces an identically zero amplitude; the delay is
    // then undefined and reported as null rather than extracted from noise.
    std::optional<spdc::PhaseSlopeEstimate> slope;
    if (dec.total_pairs > 0.0) slope = spdc::extract_delay_phase(state);
    const spdc::AnalyticDelayResult ad =
        spdc::delay_analytic(cfg.crystal, cfg.pump.pulse_duration_ps, cfg.pump.gain);

    auto dump_jsa = [&](const spdc::JsaGrid& j, const std::string& name) {
        auto meta = base_meta(cfg, "jsa");
        meta["gain"] = spdc::format_double(tm.gain);
        meta["n_freq"] = std::to_string(j.grid_signal.size());
        std::vector<std::vector<double>> rows;
        rows.reserve(static_cast<std::size_t>(j.grid_signal.size()) * j.grid_idler.size());
        for (int is = 0; is < j.grid_signal.size(); ++is)
            for (int ii = 0; ii < j.grid_idler.size(); ++ii)
                rows.push_back({j.grid_signal[is], j.grid_idler[ii], std::abs(j.amp(is, ii)),
                                std::arg(j.amp(is, ii))});
        spdc::write_csv(out + "/" + name, meta,
                        {"detuning_signal_rad_per_ps", "detuning_idler_rad_per_ps",
                         "amplitude_abs", "amplitude_phase_rad"},
                        rows);
        outputs.push_back(name);
    };
    dump_jsa(state, "jsa.csv");

    spdc::JsaGrid analytic = spdc::jsa_total(tm.grid, cfg.pump.pulse_duration_ps, tm.gain);
    spdc::lab_frame_phase(analytic, cfg.crystal);
    dump_jsa(analytic, "jsa_analytic.csv");

    {
        json j;
        j["gain"] = tm.gain;
        j["coupling_scale"] = tm.coupling_scale;
        j["residual_unitarity"] = tm.residual_unitarity;
        j["residual_symmetry"] = tm.residual_symmetry;
        j["total_pairs"] = dec.total_pairs;
        j["schmidt_number"] = dec.schmidt_number;
        const std::size_t n_report = std::min<std::size_t>(dec.schmidt_r.size(), 10);
        j["schmidt_r"] = std::vector<double>(dec.schmidt_r.begin(),
                                             dec.schmidt_r.begin() + n_report);
        j["delay_defined"] = slope.has_value();
        if (slope) {
            j["delay_numeric_ps"] = slope->delay_ps;
            j["delay_numeric_weight_fraction"] = slope->weight_fraction;
        } else {
            j["delay_numeric_ps"] = nullptr;
        }
        j["delay_analytic"] = delay_json(ad);
        j["grid"] = {{"n_freq", tm.grid.size()},
                     {"halfwidth_rad_per_ps", tm.grid.halfwidth()},
                     {"spacing_rad_per_ps", tm.grid.spacing()}};
        write_json_file(out + "/jsa_summary.json", j);
        outputs.push_back("jsa_summary.json");
    }

    if (run_sweep) {
        std::vector<std::vector<double>> rows;
        for (double g : cfg.sweep.gains) {
            spdc::RunConfig c2 = cfg;
            c2.pump.gain = g;
            const spdc::TransferMatrices t2 = spdc::propagate(c2.crystal, c2.pump, c2.solver);
            const spdc::JsaDecomposition d2 = spdc::jsa_from_transfer(t2);
            const spdc::PhaseSlopeEstimate s2 = spdc::extract_delay_phase(spdc::state_jsa(t2));
            const spdc::AnalyticDelayResult a2 =
                spdc::delay_analytic(c2.crystal, c2.pump.pulse_duration_ps, g);
            rows.push_back({g, s2.delay_ps, a2.delay_ps, a2.beta0_ps, a2.beta_ps,
                            d2.total_pairs, d2.schmidt_number});
        }
        spdc::write_csv(out + "/delay_sweep.csv", base_meta(cfg, "jsa"),
                        {"gain", "delay_numeric_ps", "delay_analytic_ps", "beta0_ps",
                         "beta_ps", "total_pairs", "schmidt_number"},
                        rows);
        outputs.push_back("delay_sweep.csv");
    }
    return outputs;
}

// ---- dynamics -----------------------------------------------------------

std::vector<std::string> cmd_dynamics(const spdc::RunConfig& cfg, const std::string& out) {
    std::vector<std::string> outputs;
    const spdc::DynamicsMap dm = spdc::pulse_dynamics(cfg.crystal, cfg.pump, cfg.solver);

    {
        std::vector<std::vector<double>> rows;
        rows.reserve(dm.z_mm.size() * dm.t_ps.size());
        for (std::size_t iz = 0; iz < dm.z_mm.size(); ++iz)
            for (std::size_t it = 0; it < dm.t_ps.size(); ++it)
                rows.push_back({dm.z_mm[iz], dm.t_ps[it],
                                dm.n_signal(static_cast<int>(iz), static_cast<int>(it)),
                                dm.n_idler(static_cast<int>(iz), static_cast<int>(it))});
        spdc::write_csv(out + "/dynamics.csv", base_meta(cfg, "dynamics"),
                        {"z_mm", "t_ps", "n_signal_per_ps", "n_idler_per_ps"}, rows);
        outputs.push_back("dynamics.csv");
    }
    {
        std::vector<std::vector<double>> rows;
        for (std::size_t iz = 0; iz < dm.z_mm.size(); ++iz)
            rows.push_back({dm.z_mm[iz], dm.centroid_signal_ps[iz], dm.centroid_idler_ps[iz]});
        spdc::write_csv(out + "/centroids.csv", base_meta(cfg, "dynamics"),
                        {"z_mm", "centroid_signal_ps", "centroid_idler_ps"}, rows);
        outputs.push_back("centroids.csv");
    }
    {
        std::vector<std::vector<double>> rows;
        for (std::size_t it = 0; it < dm.t_ps.size(); ++it)
            rows.push_back({dm.t_ps[it], dm.pump_power_w[it]});
        spdc::write_csv(out + "/pump_profile.csv", base_meta(cfg, "dynamics"),
                        {"t_ps", "power_w"}, rows);
        outputs.push_back("pump_profile.csv");
    }
    {
        json j;
        j["exit_time_difference_ps"] = dm.exit_time_difference_ps;
        j["beta0_ps"] = spdc::walkoff_beta0(cfg.crystal);
        j["delay_analytic"] = delay_json(
            spdc::delay_analytic(cfg.crystal, cfg.pump.pulse_duration_ps, cfg.pump.gain));
        j["n_z_samples"] = dm.z_mm.size();
        j["n_t_samples"] = dm.t_ps.size();
        write_json_file(out + "/dynamics_summary.json", j);
        outputs.push_back("dynamics_summary.json");
    }
    return outputs;
}

// ---- interferogram ------------------------------------------------------

spdc::Interferogram build_model(const spdc::RunConfig& cfg) {
    const double tau = cfg.pump.pulse_duration_ps;
    const spdc::FrequencyGrid grid =
        spdc::FrequencyGrid::symmetric(cfg.solver.n_freq, solver_window(cfg));

    if (cfg.interferogram.kind == spdc::InterferogramKind::model_pure) {
        const spdc::TransferMatrices tm = spdc::propagate(cfg.crystal, cfg.pump, cfg.solver);
        return spdc::coincidence_density_pure(spdc::state_jsa(tm));
    }

    double tau_eff = tau;
    if (cfg.interferogram.marginal_sigma_ghz > 0.0) {
        // j^2 ~ exp(-4 tau^2 w^2): rms sigma_w = 1/(2 sqrt(2) tau).
        const double sigma_w = spdc::units::ghz_to_rad_per_ps(cfg.interferogram.marginal_sigma_ghz);
        tau_eff = 1.0 / (2.0 * std::sqrt(2.0) * sigma_w);
    }
    const std::vector<double> marginal = spdc::gaussian_marginal(grid, tau_eff);
    const spdc::AnalyticDelayResult ad =
        spdc::delay_analytic(cfg.crystal, tau, cfg.pump.gain);
    return spdc::coincidence_density_attenuated(grid, marginal, ad.delay_ps,
                                                cfg.interferogram.visibility);
}

std::vector<std::string> cmd_interferogram(const spdc::RunConfig& cfg, const std::string& out) {
    std::vector<std::string> outputs;
    const spdc::Interferogram model = build_model(cfg);
    const spdc::Interferogram hist = spdc::synthesize_histogram(
        model, cfg.detection.chain, cfg.interferogram.total_counts, cfg.seed);

    auto dump_grid = [&](const spdc::Interferogram& g, const std::string& name,
                         const std::string& value_column) {
        auto meta = base_meta(cfg, "interferogram");
        meta["kind"] = spdc::to_string(g.kind);
        meta["fringe_delay_ps"] = spdc::format_double(g.fringe_delay_ps);
        meta["visibility"] = spdc::format_double(g.visibility);
        meta["sigma_jitter_ghz"] = spdc::format_double(g.sigma_jitter_ghz);
        meta["total_counts"] = spdc::format_double(g.total_counts);
        std::vector<std::vector<double>> rows;
        rows.reserve(g.axis1_ghz.size() * g.axis2_ghz.size());
        for (std::size_t a = 0; a < g.axis1_ghz.size(); ++a)
            for (std::size_t b = 0; b < g.axis2_ghz.size(); ++b)
                rows.push_back({g.axis1_ghz[a], g.axis2_ghz[b],
                                g.density(static_cast<int>(a), static_cast<int>(b))});
        spdc::write_csv(out + "/" + name, meta, {"nu1_ghz", "nu2_ghz", value_column}, rows);
        outputs.push_back(name);
    };
    dump_grid(model, "model.csv", "density_per_ghz2");
    dump_grid(hist, "histogram.csv", "counts");

    json j;
    j["kind"] = spdc::to_string(model.kind);
    j["model_fringe_delay_ps"] = model.fringe_delay_ps;
    j["histogram_fringe_delay_ps"] = hist.fringe_delay_ps;
    j["delay_offset_ps"] = cfg.detection.chain.delay_offset_ps;
    j["visibility"] = model.visibility;
    j["sigma_jitter_ghz"] = hist.sigma_jitter_ghz;
    j["bin_width_ghz"] = cfg.detection.chain.bin_width_ghz;
    j["seed"] = hist.seed;
    j["expected_counts"] = cfg.interferogram.total_counts;
    j["realized_counts"] = hist.total_counts;
    if (model.kind == spdc::InterferogramKind::model_attenuated)
        j["fringe_contrast"] = spdc::fringe_contrast(model);
    write_json_file(out + "/interferogram.json", j);
    outputs.push_back("interferogram.json");
    return outputs;
}

// ---- extract ------------------------------------------------------------

spdc::Interferogram histogram_from_csv(const std::string& path) {
    const spdc::CsvTable t = spdc::read_csv(path);
    const int c1 = t.column_index("nu1_ghz");
    const int c2 = t.column_index("nu2_ghz");
    const int cc = t.column_index("counts");

    std::map<double, int> ax1, ax2;
    for (const auto& r : t.rows) {
        ax1.emplace(r[static_cast<std::size_t>(c1)], 0);
        ax2.emplace(r[static_cast<std::size_t>(c2)], 0);
    }
    int k = 0;
    for (auto& [v, idx] : ax1) idx = k++;
    k = 0;
    for (auto& [v, idx] : ax2) idx = k++;
    if (ax1.size() * ax2.size() != t.rows.size())
        throw spdc::data_error(path + ": histogram rows do not form a complete grid");

    spdc::Interferogram h;
    h.kind = spdc::InterferogramKind::synthetic;
    for (const auto& [v, idx] : ax1) h.axis1_ghz.push_back(v);
    for (const auto& [v, idx] : ax2) h.axis2_ghz.push_back(v);
    h.density = Eigen::MatrixXd::Zero(static_cast<int>(ax1.size()), static_cast<int>(ax2.size()));
    for (const auto& r : t.rows) {
        const int a = ax1.at(r[static_cast<std::size_t>(c1)]);
        const int b = ax2.at(r[static_cast<std::size_t>(c2)]);
        h.density(a, b) = r[static_cast<std::size_t>(cc)];
    }
    h.total_counts = h.density.sum();
    const auto it = t.meta.find("sigma_jitter_ghz");
    if (it != t.meta.end()) h.sigma_jitter_ghz = std::stod(it->second);
    return h;
}

std::vector<std::string> cmd_extract(const spdc::RunConfig& cfg, const std::string& out,
                                     const std::string& histogram_path) {
    const spdc::Interferogram hist = histogram_from_csv(histogram_path);
    const double offset = cfg.detection.chain.delay_offset_ps;
    const spdc::DelayEstimate est = spdc::extract_delay_fft(hist, offset);
    const spdc::VisibilityFit vis = spdc::fit_visibility(hist, est.raw_separation_ps);

    json j;
    j["histogram"] = histogram_path;
    j["delay_offset_ps"] = offset;
    j["delay_ps"] = est.delay_ps;
    j["uncertainty_ps"] = est.uncertainty_ps;
    j["raw_separation_ps"] = est.raw_separation_ps;
    j["sideband_t1_ps"] = est.sideband_t1_ps;
    j["sideband_t2_ps"] = est.sideband_t2_ps;
    j["antidiag_offset_ps"] = est.antidiag_offset_ps;
    j["peak_to_median"] = est.peak_to_median;
    j["visibility"] = vis.visibility;
    j["visibility_amplitude"] = vis.amplitude;
    j["visibility_rms_residual"] = vis.rms_residual;
    write_json_file(out + "/delay_estimate.json", j);
    return {"delay_estimate.json"};
}

// ---- gain ---------------------------------------------------------------

std::vector<std::string> cmd_gain(const spdc::RunConfig& cfg, const std::string& out) {
    std::vector<std::string> outputs;
    const double eta_s = cfg.detection.chain.efficiency_signal;
    const double eta_i = cfg.detection.chain.efficiency_idler;
    const bool split = cfg.detection.split_arms;

    const spdc::ClickModel model =
        spdc::lossy_pair_model({cfg.pump.gain}, eta_s, eta_i, split);
    const std::vector<double> probs =
        spdc::all_pattern_probabilities(model.state, model.layout);
    const spdc::ClickStats stats =
        spdc::sample_click_stats(probs, cfg.detection.shots, cfg.seed, 2);

    std::vector<double> freqs(probs.size());
    for (std::size_t p = 0; p < probs.size(); ++p)
        freqs[p] = static_cast<double>(stats.pattern_counts[p]) /
                   static_cast<double>(stats.shots);
    const spdc::GainEstimate est = spdc::estimate_gain(freqs, eta_s, eta_i, split);

    const int det_signal = 0;
    const int det_idler = split ? 2 : 1;
    const spdc::KlyshkoEstimate kly = spdc::klyshko_efficiency(stats, det_signal, det_idler);
    const spdc::ThermalAttenuationParams th =
        spdc::thermal_attenuation_params(cfg.pump.gain, eta_s);

    {
        std::vector<std::vector<double>> rows;
        for (std::size_t p = 0; p < probs.size(); ++p)
            rows.push_back({static_cast<double>(p), probs[p],
                            static_cast<double>(stats.pattern_counts[p])});
        spdc::write_csv(out + "/patterns.csv", base_meta(cfg, "gain"),
                        {"pattern_mask", "probability", "count"}, rows);
        outputs.push_back("patterns.csv");
    }
    {
        json j;
        j["configured_gain"] = cfg.pump.gain;
        j["estimated_gain"] = est.gain;
        j["residual"] = est.residual;
        j["all_silent"] = est.all_silent;
        j["shots"] = stats.shots;
        j["split_arms"] = split;
        j["mean_photons_total"] = model.state.total_photons();
        j["klyshko"] = {{"eta_signal", kly.eta_signal},
                        {"eta_idler", kly.eta_idler},
                        {"high_gain_bias", kly.high_gain_bias}};
        j["thermal"] = {{"lambda", th.lambda},
                        {"eps_prime", th.eps_prime},
                        {"n_bar", th.n_bar},
                        {"in_domain", th.in_domain},
                        {"eta_used", eta_s}};
        write_json_file(out + "/gain_estimate.json", j);
        outputs.push_back("gain_estimate.json");
    }
    return outputs;
}

// ---- spmfit -------------------------------------------------------------

std::vector<std::string> cmd_spmfit(const spdc::RunConfig& cfg, const std::string& out) {
    std::vector<std::string> outputs;
    const double length =
        cfg.spm.length_mm > 0.0 ? cfg.spm.length_mm : cfg.crystal.length_mm;
    const double gamma_true = cfg.crystal.gamma_pump_per_w_m;
    const spdc::SpmSpectrum spec =
        spdc::spm_spectrum(cfg.pump, gamma_true, length, cfg.spm.n_time);
    const spdc::GammaFit fit = spdc::fit_gamma_p(spec.rms_width_ghz, cfg.pump, length);
    const spdc::SelfFocusingParams sf = spdc::self_focusing(cfg.pump, cfg.crystal);

    {
        std::vector<std::vector<double>> rows;
        for (std::size_t k = 0; k < spec.nu_ghz.size(); ++k)
            rows.push_back({spec.nu_ghz[k], spec.density[k]});
        spdc::write_csv(out + "/spectrum.csv", base_meta(cfg, "spmfit"),
                        {"nu_ghz", "density_per_ghz"}, rows);
        outputs.push_back("spectrum.csv");
    }
    {
        json j;
        j["length_mm"] = length;
        j["b_integral"] = spec.b_integral;
        j["rms_width_ghz"] = spec.rms_width_ghz;
        j["gamma_true_per_w_m"] = gamma_true;
        j["gamma_fit_per_w_m"] = fit.gamma_p_per_w_m;
        j["gamma_relative_error"] =
            gamma_true > 0.0 ? std::abs(fit.gamma_p_per_w_m - gamma_true) / gamma_true : 0.0;
        j["width_residual_ghz"] = fit.width_residual_ghz;
        j["n2_m2_per_w"] = sf.n2_m2_per_w;
        j["critical_power_w"] = sf.critical_power_w;
        j["above_threshold"] = sf.above_threshold;
        if (std::isfinite(sf.focusing_distance_mm))
            j["focusing_distance_mm"] = sf.focusing_distance_mm;
        write_json_file(out + "/gamma_fit.json", j);
        outputs.push_back("gamma_fit.json");
    }
    return outputs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twin-beam squeezer simulation and analysis toolkit"};
    app.require_subcommand(1);

    CommonOpts jsa_opts, dyn_opts, ifg_opts, ext_opts, gain_opts, spm_opts;
    bool jsa_sweep = false;
    std::string extract_histogram;

    CLI::App* c_jsa = app.add_subcommand("jsa", "Joint spectral amplitude and pair delay");
    add_common(c_jsa, jsa_opts);
    c_jsa->add_flag("--sweep", jsa_sweep, "Also sweep the configured gain list");

    CLI::App* c_dyn = app.add_subcommand("dynamics", "Photon flux along the crystal");
    add_common(c_dyn, dyn_opts);

    CLI::App* c_ifg =
        app.add_subcommand("interferogram", "Model fringe density and synthetic histogram");
    add_common(c_ifg, ifg_opts);

    CLI::App* c_ext = app.add_subcommand("extract", "Delay and visibility from a histogram CSV");
    add_common(c_ext, ext_opts);
    c_ext->add_option("--histogram", extract_histogram, "Histogram CSV (from 'interferogram')")
        ->required()
        ->check(CLI::ExistingFile);

    CLI::App* c_gain = app.add_subcommand("gain", "Click statistics and gain estimation");
    add_common(c_gain, gain_opts);

    CLI::App* c_spm = app.add_subcommand("spmfit", "Pump SPM spectrum and Kerr-coefficient fit");
    add_common(c_spm, spm_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const std::string started = spdc::utc_timestamp();

    try {
        const CommonOpts* opts = nullptr;
        std::string command;
        if (c_jsa->parsed()) {
            opts = &jsa_opts;
            command = "jsa";
        } else if (c_dyn->parsed()) {
            opts = &dyn_opts;
            command = "dynamics";
        } else if (c_ifg->parsed()) {
            opts = &ifg_opts;
            command = "interferogram";
        } else if (c_ext->parsed()) {
            opts = &ext_opts;
            command = "extract";
        } else if (c_gain->parsed()) {
            opts = &gain_opts;
            command = "gain";
        } else {
            opts = &spm_opts;
            command = "spmfit";
        }

        const spdc::RunConfig cfg = resolve_config(*opts);
        std::filesystem::create_directories(opts->out_dir);

        std::vector<std::string> outputs;
        if (command == "jsa") outputs = cmd_jsa(cfg, opts->out_dir, jsa_sweep);
        else if (command == "dynamics") outputs = cmd_dynamics(cfg, opts->out_dir);
        else if (command == "interferogram") outputs = cmd_interferogram(cfg, opts->out_dir);
        else if (command == "extract") outputs = cmd_extract(cfg, opts->out_dir, extract_histogram);
        else if (command == "gain") outputs = cmd_gain(cfg, opts->out_dir);
        else outputs = cmd_spmfit(cfg, opts->out_dir);

        spdc::RunManifest m;
        m.command = command;
        for (int i = 0; i < argc; ++i) m.arguments.emplace_back(argv[i]);
        m.config_hash = spdc::hex64(spdc::fnv1a64(spdc::dump_config(cfg)));
        m.seed = cfg.seed;
        m.started_utc = started;
        m.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        m.outputs = outputs;
        spdc::write_manifest(m, opts->out_dir + "/manifest.json");

        for (const auto& f : outputs) std::cout << opts->out_dir << "/" << f << "\n";
        return 0;
    } catch (const spdc::config_error& e) {
        std::cerr << "spdc: config error: " << e.what() << "\n";
        return 2;
    } catch (const spdc::data_error& e) {
        std::cerr << "spdc: data error: " << e.what() << "\n";
        return 3;
    } catch (const spdc::numeric_error& e) {
        std::cerr << "spdc: numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "spdc: error: " << e.what() << "\n";
        return 1;
    }
}
