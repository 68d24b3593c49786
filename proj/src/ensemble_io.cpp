#include "tfshe/ensemble_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "tfshe/errors.hpp"

namespace tfshe::mc {

namespace {

constexpr char kMagic[8] = {'T', 'F', 'S', 'H', 'E', 'E', 'N', 'S'};

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw IOError("ensemble: truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

void put_doubles(std::ostream& os, const std::vector<double>& v) {
    for (double x : v) put_u64(os, std::bit_cast<std::uint64_t>(x));
}

void get_doubles(std::istream& is, std::vector<double>& v, std::size_t n) {
    v.resize(n);
    for (double& x : v) x = std::bit_cast<double>(get_u64(is));
}

} // namespace

void write_ensemble(const FieldEnsemble& e, const std::filesystem::path& path) {
    nlohmann::json h{{"params", e.params.to_json()},
                     {"grid", e.grid.to_json()},
                     {"initial", e.initial},
                     {"noise", e.noise},
                     {"seed", e.seed},
                     {"replicas", e.replicas},
                     {"streams", "replica r uses stream id r"},
                     {"blocked_history", e.blocked_history},
                     {"snapshot_times", e.snapshot_times},
                     {"snapshot_steps", e.snapshot_steps},
                     {"probe_cells", e.probe_cells},
                     {"aborted_at", e.aborted_at},
                     {"warnings", e.warnings},
                     {"layout", {{"snapshots", "[snapshot][replica][cell]"},
                                 {"probe_series", "[replica][probe][step]"},
                                 {"mean_square", "[replica][step]"}}},
                     {"counts", {e.snapshots.size(), e.probe_series.size(), e.mean_square.size()}}};
    const std::string text = h.dump();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IOError("cannot write " + path.string());
    os.write(kMagic, 8);
    put_u64(os, text.size());
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    put_doubles(os, e.snapshots);
    put_doubles(os, e.probe_series);
    put_doubles(os, e.mean_square);
    if (!os) throw IOError("write failed: " + path.string());
}

FieldEnsemble read_ensemble(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IOError("cannot read " + path.string());
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw IOError("ensemble: bad magic in " + path.string());
    const std::uint64_t len = get_u64(is);
    std::string text(len, '\0');
    if (!is.read(text.data(), static_cast<std::streamsize>(len))) throw IOError("ensemble: truncated header");
    const nlohmann::json h = nlohmann::json::parse(text);
    FieldEnsemble e;
    e.params = ModelParams::from_json(h.at("params"));
    e.grid = GridSpec::from_json(h.at("grid"));
    e.initial = h.at("initial").get<std::string>();
    e.noise = h.at("noise").get<std::string>();
    e.seed = h.at("seed").get<std::uint64_t>();
    e.replicas = h.at("replicas").get<int>();
    e.blocked_history = h.at("blocked_history").get<bool>();
    e.snapshot_times = h.at("snapshot_times").get<std::vector<double>>();
    e.snapshot_steps = h.at("snapshot_steps").get<std::vector<int>>();
    e.probe_cells = h.at("probe_cells").get<std::vector<std::size_t>>();
    e.aborted_at = h.at("aborted_at").get<std::vector<int>>();
    e.warnings = h.at("warnings").get<std::vector<std::string>>();
    const auto counts = h.at("counts").get<std::vector<std::size_t>>();
    if (counts.size() != 3) throw IOError("ensemble: bad counts");
    get_doubles(is, e.snapshots, counts[0]);
    get_doubles(is, e.probe_series, counts[1]);
    get_doubles(is, e.mean_square, counts[2]);
    return e;
}

} // namespace tfshe::mc
