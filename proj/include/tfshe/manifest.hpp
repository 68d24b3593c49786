#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tfshe::expcli {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);
// FNV-1a of the file contents, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

struct Check {
    std::string name;
    bool pass = false;
    bool asserted = true; // informational entries do not affect the exit code
    nlohmann::json detail;
};

struct Manifest {
    std::string mode;
    std::string config_hash;
    std::string config_text;
    std::uint64_t seed = 0;
    std::string seed_streams;
    nlohmann::json versions;
    double wall_seconds = 0.0;
    std::vector<std::pair<std::string, std::string>> outputs; // file name relative to the run directory, hash
    std::vector<Check> checks;

    bool pass() const;
    nlohmann::json to_json() const;
    static Manifest from_json(const nlohmann::json& j);

    // Records name and content hash of a file written into dir.
    void add_output(const std::filesystem::path& dir, const std::string& name);
    void write(const std::filesystem::path& dir) const;
    static std::optional<Manifest> read(const std::filesystem::path& dir);
    // Same config hash and every listed output present with its recorded hash.
    bool reusable(const std::filesystem::path& dir, const std::string& config_hash) const;
};

nlohmann::json build_versions();

} // namespace tfshe::expcli
