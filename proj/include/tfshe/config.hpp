#pragma once

// Flat typed key-value experiment configuration.
//
//   # comment
//   mode: string = excitation
//   alpha: real = 2
//   L: real = 16 [length]
//   lambdas: reals = 4, 8, 16, 32
//
// Every key is declared with a type; dimensional keys carry a fixed unit which
// may be restated in brackets and must then match. Unknown keys, duplicate keys
// and type mismatches are errors.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfshe/mcsim.hpp"
#include "tfshe/model.hpp"

namespace tfshe::expcli {

enum class Mode { KernelVerify, MomentOracle, McWhite, McColored, Excitation, Hoelder };
std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct ExperimentConfig {
    Mode mode = Mode::MomentOracle;
    ModelParams model;
    mc::GridSpec grid;
    double u0 = 1.0;                     // constant level, or the height of an indicator
    std::optional<std::pair<double, double>> u0_support; // indicator of (lo, hi) when set
    std::vector<double> lambdas;
    int replicas = 200;
    std::uint64_t seed = 1;
    std::filesystem::path outputs = "out";
    std::string pipeline = "oracle";     // excitation: oracle | mc
    std::vector<double> fit_times{1.0, 0.1};   // excitation; the first one is asserted
    std::vector<double> check_times{0.25, 0.5, 1.0}; // mc modes: oracle comparison times
    double tail_fraction = 0.5;
    int lags = 64;                       // hoelder
    unsigned threads = 0;
    bool blocked_history = false;
    int bootstrap = 400;
    std::vector<double> probes{0.0};

    // Canonical "key: type = value" text, sorted by key; hashed by the manifest.
    std::string canonical() const;
    InitialData initial() const;
    // Model predicates plus mode-specific requirements; throws ConfigError naming
    // the violated condition.
    void validate() const;
};

struct KeySpec {
    std::string type; // int | u64 | real | bool | string | reals
    std::string unit; // empty when dimensionless
    std::string help;
};
const std::map<std::string, KeySpec>& config_schema();

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

} // namespace tfshe::expcli
