#include "spdc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "spdc/errors.hpp"

namespace spdc {

namespace {

using nlohmann::json;

std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

// Claims keys as they are read; finish() rejects whatever was never claimed.
class Section {
  public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object())
            throw config_error("config section '" + path_ + "' must be an object");
    }

    const json* claim(const std::string& key) {
        seen_.insert(key);
        const auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& target) {
        if (const json* v = claim(key)) {
            if (!v->is_number()) fail(key, "a number");
            target = v->get<double>();
        }
    }
    void integer(const std::string& key, int& target) {
        if (const json* v = claim(key)) {
            if (!v->is_number_integer()) fail(key, "an integer");
            target = v->get<int>();
        }
    }
    void integer(const std::string& key, long long& target) {
        if (const json* v = claim(key)) {
            if (!v->is_number_integer()) fail(key, "an integer");
            target = v->get<long long>();
        }
    }
    void unsigned64(const std::string& key, std::uint64_t& target) {
        if (const json* v = claim(key)) {
            if (!v->is_number_integer() || (v->is_number_integer() && v->get<long long>() < 0))
                fail(key, "a non-negative integer");
            target = v->get<std::uint64_t>();
        }
    }
    void boolean(const std::string& key, bool& target) {
        if (const json* v = claim(key)) {
            if (!v->is_boolean()) fail(key, "a boolean");
            target = v->get<bool>();
        }
    }
    void text(const std::string& key, std::string& target) {
        if (const json* v = claim(key)) {
            if (!v->is_string()) fail(key, "a string");
            target = v->get<std::string>();
        }
    }
    void number_list(const std::string& key, std::vector<double>& target) {
        if (const json* v = claim(key)) {
            if (!v->is_array()) fail(key, "an array of numbers");
            target.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) fail(key, "an array of numbers");
                target.push_back(e.get<double>());
            }
        }
    }
    void optional_number(const std::string& key, std::optional<double>& target) {
        if (const json* v = claim(key)) {
            if (v->is_null()) {
                target.reset();
                return;
            }
            if (!v->is_number()) fail(key, "a number or null");
            target = v->get<double>();
        }
    }

    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (!seen_.count(it.key()))
                throw config_error("unknown config key '" + join_path(path_, it.key()) + "'");
        }
    }

    const std::string& path() const { return path_; }

  private:
    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw config_error("config key '" + join_path(path_, key) + "' must be " + what);
    }

    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

void parse_crystal(const json& node, CrystalParams& c) {
    Section s(node, "crystal");
    s.number("length_mm", c.length_mm);
    s.number("group_index_pump", c.group_index_pump);
    s.number("group_index_signal", c.group_index_signal);
    s.number("group_index_idler", c.group_index_idler);
    std::string pmf = to_string(c.pmf_kind);
    s.text("pmf", pmf);
    c.pmf_kind = pmf_kind_from_string(pmf);
    s.number("gaussian_gamma", c.gaussian_gamma);
    s.number("gamma_pump_per_w_m", c.gamma_pump_per_w_m);
    s.number("gamma_signal_per_w_m", c.gamma_signal_per_w_m);
    s.number("gamma_idler_per_w_m", c.gamma_idler_per_w_m);
    s.optional_number("poling_period_um", c.poling_period_um);
    s.finish();
}

void parse_pump(const json& node, PumpParams& p) {
    Section s(node, "pump");
    s.number("center_wavelength_nm", p.center_wavelength_nm);
    s.number("pulse_duration_ps", p.pulse_duration_ps);
    s.number("gain", p.gain);
    s.number("peak_power_w", p.peak_power_w);
    s.number("waist_um", p.waist_um);
    s.number("rep_rate_khz", p.rep_rate_khz);
    s.finish();
}

void parse_grid(const json& node, SolverSettings& sv) {
    Section s(node, "grid");
    s.integer("n_freq", sv.n_freq);
    s.number("window_halfwidth_rad_per_ps", sv.window_halfwidth);
    s.finish();
}

void parse_solver(const json& node, SolverSettings& sv) {
    Section s(node, "solver");
    s.integer("n_zsteps", sv.n_zsteps);
    std::string integ = to_string(sv.integrator);
    s.text("integrator", integ);
    sv.integrator = integrator_from_string(integ);
    std::string cal = to_string(sv.calibration);
    s.text("gain_calibration", cal);
    sv.calibration = calibration_from_string(cal);
    s.boolean("chi3", sv.chi3);
    s.number("invariant_tolerance", sv.invariant_tolerance);
    s.finish();
}

void parse_detection(const json& node, DetectionConfig& d) {
    Section s(node, "detection");
    s.number("efficiency_signal", d.chain.efficiency_signal);
    s.number("efficiency_idler", d.chain.efficiency_idler);
    s.number("fiber_gdd_ns_per_nm", d.chain.fiber_gdd_ns_per_nm);
    s.number("timing_jitter_ns", d.chain.timing_jitter_ns);
    s.number("bin_width_ghz", d.chain.bin_width_ghz);
    s.number("delay_offset_ps", d.chain.delay_offset_ps);
    s.number("center_wavelength_nm", d.chain.center_wavelength_nm);
    s.number("rep_rate_khz", d.chain.rep_rate_khz);
    s.number("integration_time_s", d.chain.integration_time_s);
    s.integer("shots", d.shots);
    s.boolean("split_arms", d.split_arms);
    s.finish();
}

void parse_interferogram(const json& node, InterferogramConfig& ic) {
    Section s(node, "interferogram");
    std::string kind = to_string(ic.kind);
    s.text("kind", kind);
    ic.kind = interferogram_kind_from_string(kind);
    s.number("total_counts", ic.total_counts);
    s.number("visibility", ic.visibility);
    s.number("marginal_sigma_ghz", ic.marginal_sigma_ghz);
    s.finish();
}

void parse_spm(const json& node, SpmConfig& sp) {
    Section s(node, "spm");
    s.number("length_mm", sp.length_mm);
    s.integer("n_time", sp.n_time);
    s.finish();
}

void parse_sweep(const json& node, SweepConfig& sw) {
    Section s(node, "sweep");
    s.number_list("gains", sw.gains);
    s.finish();
}

}  // namespace

void RunConfig::validate() const {
    crystal.validate();
    pump.validate();
    solver.validate();
    detection.chain.validate();
    if (detection.shots <= 0) throw config_error("detection.shots must be positive");
    if (interferogram.total_counts <= 0.0)
        throw config_error("interferogram.total_counts must be positive");
    if (interferogram.visibility < 0.0 || interferogram.visibility > 1.0)
        throw config_error("interferogram.visibility must lie in [0, 1]");
    if (interferogram.marginal_sigma_ghz < 0.0)
        throw config_error("interferogram.marginal_sigma_ghz must be non-negative");
    if (spm.length_mm < 0.0) throw config_error("spm.length_mm must be non-negative");
    if (spm.n_time < 64) throw config_error("spm.n_time must be at least 64");
    if (sweep.gains.empty()) throw config_error("sweep.gains must not be empty");
    for (double g : sweep.gains)
        if (g <= 0.0) throw config_error("sweep.gains entries must be positive");
}

namespace {

// Keys overwrite cfg in place, so a partial document inherits every field it
// does not mention from the starting point.
RunConfig apply_document(RunConfig cfg, const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw config_error(origin + ": top level must be an object");

    Section top(doc, "");
    if (const json* n = top.claim("crystal")) parse_crystal(*n, cfg.crystal);
    if (const json* n = top.claim("pump")) parse_pump(*n, cfg.pump);
    if (const json* n = top.claim("grid")) parse_grid(*n, cfg.solver);
    if (const json* n = top.claim("solver")) parse_solver(*n, cfg.solver);
    if (const json* n = top.claim("detection")) parse_detection(*n, cfg.detection);
    if (const json* n = top.claim("interferogram")) parse_interferogram(*n, cfg.interferogram);
    if (const json* n = top.claim("spm")) parse_spm(*n, cfg.spm);
    if (const json* n = top.claim("sweep")) parse_sweep(*n, cfg.sweep);
    top.unsigned64("seed", cfg.seed);
    top.finish();

    try {
        cfg.validate();
    } catch (const config_error& e) {
        throw config_error(origin + ": " + e.what());
    }
    return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const std::string& origin) {
    return apply_document(default_reference_config(), json_text, origin);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

RunConfig default_reference_config() {
    // The builtin document sets every key, so it can start from the raw
    // struct; everything else layers on top of it.
    static const RunConfig ref = apply_document(RunConfig{}, kReferenceScenarioJson, "<builtin>");
    return ref;
}

std::string dump_config(const RunConfig& cfg) {
    json j;
    j["crystal"]["length_mm"] = cfg.crystal.length_mm;
    j["crystal"]["group_index_pump"] = cfg.crystal.group_index_pump;
    j["crystal"]["group_index_signal"] = cfg.crystal.group_index_signal;
    j["crystal"]["group_index_idler"] = cfg.crystal.group_index_idler;
    j["crystal"]["pmf"] = to_string(cfg.crystal.pmf_kind);
    j["crystal"]["gaussian_gamma"] = cfg.crystal.gaussian_gamma;
    j["crystal"]["gamma_pump_per_w_m"] = cfg.crystal.gamma_pump_per_w_m;
    j["crystal"]["gamma_signal_per_w_m"] = cfg.crystal.gamma_signal_per_w_m;
    j["crystal"]["gamma_idler_per_w_m"] = cfg.crystal.gamma_idler_per_w_m;
    if (cfg.crystal.poling_period_um)
        j["crystal"]["poling_period_um"] = *cfg.crystal.poling_period_um;
    j["pump"]["center_wavelength_nm"] = cfg.pump.center_wavelength_nm;
    j["pump"]["pulse_duration_ps"] = cfg.pump.pulse_duration_ps;
    j["pump"]["gain"] = cfg.pump.gain;
    j["pump"]["peak_power_w"] = cfg.pump.peak_power_w;
    j["pump"]["waist_um"] = cfg.pump.waist_um;
    j["pump"]["rep_rate_khz"] = cfg.pump.rep_rate_khz;
    j["grid"]["n_freq"] = cfg.solver.n_freq;
    j["grid"]["window_halfwidth_rad_per_ps"] = cfg.solver.window_halfwidth;
    j["solver"]["n_zsteps"] = cfg.solver.n_zsteps;
    j["solver"]["integrator"] = to_string(cfg.solver.integrator);
    j["solver"]["gain_calibration"] = to_string(cfg.solver.calibration);
    j["solver"]["chi3"] = cfg.solver.chi3;
    j["solver"]["invariant_tolerance"] = cfg.solver.invariant_tolerance;
    j["detection"]["efficiency_signal"] = cfg.detection.chain.efficiency_signal;
    j["detection"]["efficiency_idler"] = cfg.detection.chain.efficiency_idler;
    j["detection"]["fiber_gdd_ns_per_nm"] = cfg.detection.chain.fiber_gdd_ns_per_nm;
    j["detection"]["timing_jitter_ns"] = cfg.detection.chain.timing_jitter_ns;
    j["detection"]["bin_width_ghz"] = cfg.detection.chain.bin_width_ghz;
    j["detection"]["delay_offset_ps"] = cfg.detection.chain.delay_offset_ps;
    j["detection"]["center_wavelength_nm"] = cfg.detection.chain.center_wavelength_nm;
    j["detection"]["rep_rate_khz"] = cfg.detection.chain.rep_rate_khz;
    j["detection"]["integration_time_s"] = cfg.detection.chain.integration_time_s;
    j["detection"]["shots"] = cfg.detection.shots;
    j["detection"]["split_arms"] = cfg.detection.split_arms;
    j["interferogram"]["kind"] = to_string(cfg.interferogram.kind);
    j["interferogram"]["total_counts"] = cfg.interferogram.total_counts;
    j["interferogram"]["visibility"] = cfg.interferogram.visibility;
    j["interferogram"]["marginal_sigma_ghz"] = cfg.interferogram.marginal_sigma_ghz;
    j["spm"]["length_mm"] = cfg.spm.length_mm;
    j["spm"]["n_time"] = cfg.spm.n_time;
    j["sweep"]["gains"] = cfg.sweep.gains;
    j["seed"] = cfg.seed;
    return j.dump(2) + "\n";
}

std::string to_string(Integrator v) {
    return v == Integrator::expm_taylor ? "expm_taylor" : "rk4";
}

std::string to_string(GainCalibration v) {
    return v == GainCalibration::matched_photon_number ? "matched_photon_number"
                                                       : "linear_lowgain";
}

std::string to_string(InterferogramKind v) {
    switch (v) {
        case InterferogramKind::model_pure: return "model_pure";
        case InterferogramKind::model_attenuated: return "model_attenuated";
        case InterferogramKind::synthetic: return "synthetic";
    }
    throw config_error("unhandled interferogram kind");
}

Integrator integrator_from_string(const std::string& s) {
    if (s == "expm_taylor") return Integrator::expm_taylor;
    if (s == "rk4") return Integrator::rk4;
    throw config_error("solver.integrator must be 'expm_taylor' or 'rk4', got '" + s + "'");
}

GainCalibration calibration_from_string(const std::string& s) {
    if (s == "matched_photon_number") return GainCalibration::matched_photon_number;
    if (s == "linear_lowgain") return GainCalibration::linear_lowgain;
    throw config_error(
        "solver.gain_calibration must be 'matched_photon_number' or 'linear_lowgain', got '" +
        s + "'");
}

InterferogramKind interferogram_kind_from_string(const std::string& s) {
    if (s == "model_pure") return InterferogramKind::model_pure;
    if (s == "model_attenuated") return InterferogramKind::model_attenuated;
    throw config_error(
        "interferogram.kind must be 'model_pure' or 'model_attenuated', got '" + s + "'");
}

const char* const kReferenceScenarioJson = R"json({
  "crystal": {
    "length_mm": 2.0,
    "group_index_pump": 1.80921,
    "group_index_signal": 1.85141,
    "group_index_idler": 1.75381,
    "pmf": "gaussian",
    "gaussian_gamma": 0.193,
    "gamma_pump_per_w_m": 5.0e-4,
    "gamma_signal_per_w_m": 3.3333333333333333e-4,
    "gamma_idler_per_w_m": 1.0e-3
  },
  "pump": {
    "center_wavelength_nm": 779.2,
    "pulse_duration_ps": 0.132,
    "gain": 1.407,
    "peak_power_w": 1.6e6,
    "waist_um": 125.0,
    "rep_rate_khz": 0.0
  },
  "grid": {
    "n_freq": 401,
    "window_halfwidth_rad_per_ps": 0.0
  },
  "solver": {
    "n_zsteps": 200,
    "integrator": "expm_taylor",
    "gain_calibration": "matched_photon_number",
    "chi3": false,
    "invariant_tolerance": 1.0e-6
  },
  "detection": {
    "efficiency_signal": 0.07,
    "efficiency_idler": 0.07,
    "fiber_gdd_ns_per_nm": 1.033,
    "timing_jitter_ns": 0.1,
    "bin_width_ghz": 30.0,
    "delay_offset_ps": 0.833,
    "center_wavelength_nm": 1558.4,
    "rep_rate_khz": 0.0,
    "integration_time_s": 0.0,
    "shots": 1000000,
    "split_arms": true
  },
  "interferogram": {
    "kind": "model_attenuated",
    "total_counts": 1.0e6,
    "visibility": 0.3333333333333333,
    "marginal_sigma_ghz": 0.0
  },
  "spm": {
    "length_mm": 0.0,
    "n_time": 4096
  },
  "sweep": {
    "gains": [0.1, 0.25, 0.5, 0.75, 1.0]
  },
  "seed": 20260814
})json";

}  // namespace spdc
