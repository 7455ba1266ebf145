#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spdc {

inline constexpr const char* kToolVersion = "1.0.0";

// Sidecar written next to every CLI output set. Carries the wall clock, so it
// is the one file excluded from the byte-for-byte reproducibility contract.
struct RunManifest {
    std::string tool = "spdc";
    std::string version = kToolVersion;
    std::string command;
    std::vector<std::string> arguments;
    std::string config_hash;  // fnv1a64 of the canonical config dump
    std::uint64_t seed = 0;
    std::string started_utc;
    double wall_seconds = 0.0;
    std::vector<std::string> outputs;
};

std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t value);
std::string utc_timestamp();

// Atomic write (tmp + rename) of the manifest as pretty JSON.
void write_manifest(const RunManifest& m, const std::string& path);

}  // namespace spdc
