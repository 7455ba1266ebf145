#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spdc/interferometry.hpp"
#include "spdc/model.hpp"
#include "spdc/propagator.hpp"

namespace spdc {

// One JSON document drives every subcommand. Parsing is strict: unknown keys
// are rejected by full path so typos cannot silently fall back to defaults.

struct DetectionConfig {
    DetectionChain chain;
    long long shots = 1000000;  // repetitions for click sampling
    bool split_arms = true;     // balanced splitter + two detectors per arm
};

struct InterferogramConfig {
    InterferogramKind kind = InterferogramKind::model_attenuated;
    double total_counts = 1e6;
    double visibility = kIdealAttenuatedVisibility;
    double marginal_sigma_ghz = 0.0;  // 0 -> the pump-matched mode width
};

struct SpmConfig {
    double length_mm = 0.0;  // 0 -> crystal length
    int n_time = 4096;
};

struct SweepConfig {
    std::vector<double> gains{0.1, 0.25, 0.5, 0.75, 1.0};
};

struct RunConfig {
    CrystalParams crystal;
    PumpParams pump;
    SolverSettings solver;
    DetectionConfig detection;
    InterferogramConfig interferogram;
    SpmConfig spm;
    SweepConfig sweep;
    std::uint64_t seed = 20260814;

    void validate() const;
};

// Built-in copy of data/reference_scenario.json.
extern const char* const kReferenceScenarioJson;
RunConfig default_reference_config();

// `origin` labels error messages (file name or "<builtin>").
RunConfig parse_config(const std::string& json_text, const std::string& origin);
RunConfig load_config(const std::string& path);

// Canonical dump: alphabetical keys, fixed layout; input to the run hash.
std::string dump_config(const RunConfig& cfg);

std::string to_string(Integrator v);
std::string to_string(GainCalibration v);
std::string to_string(InterferogramKind v);
Integrator integrator_from_string(const std::string& s);
GainCalibration calibration_from_string(const std::string& s);
InterferogramKind interferogram_kind_from_string(const std::string& s);

}  // namespace spdc
