#include "tfshe/manifest.hpp"

#include <fftw3.h>
#include <gsl/gsl_version.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tfshe/errors.hpp"

namespace tfshe::expcli {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string file_hash(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IOError("cannot hash " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return hex64(fnv1a64(ss.str()));
}

bool Manifest::pass() const {
    for (const auto& c : checks)
        if (c.asserted && !c.pass) return false;
    return true;
}

nlohmann::json Manifest::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [f, h] : outputs) out.push_back({{"file", f}, {"fnv1a64", h}});
    nlohmann::json ch = nlohmann::json::array();
    for (const auto& c : checks)
        ch.push_back({{"name", c.name}, {"pass", c.pass}, {"asserted", c.asserted}, {"detail", c.detail}});
    return {{"mode", mode},         {"config_hash", config_hash}, {"config", config_text},
            {"seed", seed},         {"seed_streams", seed_streams}, {"versions", versions},
            {"wall_seconds", wall_seconds}, {"outputs", out}, {"checks", ch}, {"pass", pass()}};
}

Manifest Manifest::from_json(const nlohmann::json& j) {
    Manifest m;
    m.mode = j.at("mode").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.config_text = j.at("config").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.seed_streams = j.at("seed_streams").get<std::string>();
    m.versions = j.at("versions");
    m.wall_seconds = j.at("wall_seconds").get<double>();
    for (const auto& o : j.at("outputs")) m.outputs.emplace_back(o.at("file").get<std::string>(), o.at("fnv1a64").get<std::string>());
    for (const auto& c : j.at("checks"))
        m.checks.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(), c.at("asserted").get<bool>(),
                            c.at("detail")});
    return m;
}

void Manifest::add_output(const std::filesystem::path& dir, const std::string& name) {
    outputs.emplace_back(name, file_hash(dir / name));
}

void Manifest::write(const std::filesystem::path& dir) const {
    std::ofstream os(dir / "manifest.json");
    if (!os) throw IOError("cannot write manifest in " + dir.string());
    os << to_json().dump(2) << "\n";
}

std::optional<Manifest> Manifest::read(const std::filesystem::path& dir) {
    const auto path = dir / "manifest.json";
    if (!std::filesystem::exists(path)) return std::nullopt;
    std::ifstream is(path);
    try {
        return from_json(nlohmann::json::parse(is));
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

bool Manifest::reusable(const std::filesystem::path& dir, const std::string& hash) const {
    if (hash != config_hash) return false;
    for (const auto& [f, h] : outputs) {
        if (!std::filesystem::exists(dir / f)) return false;
        if (file_hash(dir / f) != h) return false;
    }
    return true;
}

nlohmann::json build_versions() {
    return {{"tfshe", "1.0.0"},
            {"compiler", __VERSION__},
            {"cxx_standard", static_cast<long>(__cplusplus)},
            {"gsl", GSL_VERSION},
            {"fftw", std::string(fftw_version)},
            {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                         "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

} // namespace tfshe::expcli
