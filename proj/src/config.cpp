#include "tfshe/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tfshe/errors.hpp"

namespace tfshe::expcli {

namespace {

const std::map<Mode, std::string>& mode_names() {
    static const std::map<Mode, std::string> m{{Mode::KernelVerify, "kernel-verify"}, {Mode::MomentOracle, "moment-oracle"},
                                               {Mode::McWhite, "mc-white"},           {Mode::McColored, "mc-colored"},
                                               {Mode::Excitation, "excitation"},      {Mode::Hoelder, "hoelder"}};
    return m;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string fmt(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

struct Raw {
    std::string type, value;
    int line;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double to_real(const Raw& r) {
    double v = 0.0;
    const char* b = r.value.data();
    const char* e = b + r.value.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || !std::isfinite(v)) fail(r.line, "not a finite real: '" + r.value + "'");
    return v;
}

long long to_int(const Raw& r) {
    long long v = 0;
    const char* b = r.value.data();
    const char* e = b + r.value.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail(r.line, "not an integer: '" + r.value + "'");
    return v;
}

std::uint64_t to_u64(const Raw& r) {
    std::uint64_t v = 0;
    const char* b = r.value.data();
    const char* e = b + r.value.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail(r.line, "not an unsigned 64-bit integer: '" + r.value + "'");
    return v;
}

bool to_bool(const Raw& r) {
    if (r.value == "true") return true;
    if (r.value == "false") return false;
    fail(r.line, "not a bool (true|false): '" + r.value + "'");
}

std::vector<double> to_reals(const Raw& r) {
    std::vector<double> out;
    std::stringstream ss(r.value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_real({r.type, trim(item), r.line}));
    if (out.empty()) fail(r.line, "empty list");
    return out;
}

} // namespace

std::string to_string(Mode m) { return mode_names().at(m); }

Mode mode_from_string(const std::string& s) {
    for (const auto& [m, name] : mode_names())
        if (name == s) return m;
    throw ConfigError("unknown mode '" + s + "'");
}

const std::map<std::string, KeySpec>& config_schema() {
    static const std::map<std::string, KeySpec> s{
        {"mode", {"string", "", "kernel-verify | moment-oracle | mc-white | mc-colored | excitation | hoelder"}},
        {"alpha", {"real", "", "spatial stability index in (0, 2]"}},
        {"beta", {"real", "", "time order in (0, 1), or 1 with classical = true"}},
        {"classical", {"bool", "", "classical-limit flag (beta = 1)"}},
        {"nu", {"real", "", "diffusion coefficient"}},
        {"d", {"int", "", "space dimension"}},
        {"gamma", {"real", "", "Riesz exponent; absent for white noise"}},
        {"lambda", {"real", "", "noise level for single-lambda modes"}},
        {"sigma", {"string", "", "linear | clipped-affine"}},
        {"sigma_slope", {"real", "", "slope of the linear sigma"}},
        {"sigma_a", {"real", "", "clipped-affine offset"}},
        {"sigma_b", {"real", "", "clipped-affine slope"}},
        {"sigma_l", {"real", "", "lower cone constant"}},
        {"sigma_L", {"real", "", "Lipschitz constant"}},
        {"u0", {"real", "", "initial level"}},
        {"u0_lo", {"real", "length", "indicator support start"}},
        {"u0_hi", {"real", "length", "indicator support end"}},
        {"L", {"real", "length", "torus period"}},
        {"nx", {"int", "", "points per axis (power of two)"}},
        {"T", {"real", "time", "horizon"}},
        {"nt", {"int", "", "time steps"}},
        {"lambdas", {"reals", "", "ascending noise levels"}},
        {"replicas", {"int", "", "Monte Carlo replicas"}},
        {"seed", {"u64", "", "base seed"}},
        {"outputs", {"string", "", "output directory"}},
        {"pipeline", {"string", "", "excitation pipeline: oracle | mc"}},
        {"fit_times", {"reals", "time", "fixed times for excitation fits"}},
        {"check_times", {"reals", "time", "times of the MC-vs-oracle comparison"}},
        {"tail_fraction", {"real", "", "fraction of the horizon used by growth-rate fits"}},
        {"lags", {"int", "", "number of Hoelder lags"}},
        {"threads", {"int", "", "worker threads, 0 for all cores"}},
        {"blocked_history", {"bool", "", "dyadic blocked history sum"}},
        {"bootstrap", {"int", "", "bootstrap resamples"}},
        {"probes", {"reals", "length", "probe x-coordinates"}},
    };
    return s;
}

ExperimentConfig parse_config(const std::string& text) {
    const auto& schema = config_schema();
    std::map<std::string, Raw> raw;
    std::istringstream is(text);
    std::string line;
    int no = 0;
    while (std::getline(is, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto colon = line.find(':'), eq = line.find('=');
        if (colon == std::string::npos || eq == std::string::npos || colon > eq)
            fail(no, "expected 'key: type = value'");
        const std::string key = trim(line.substr(0, colon));
        const std::string type = trim(line.substr(colon + 1, eq - colon - 1));
        std::string value = trim(line.substr(eq + 1));
        auto it = schema.find(key);
        if (it == schema.end()) fail(no, "unknown key '" + key + "'");
        if (type != it->second.type) fail(no, "key '" + key + "' has type " + it->second.type + ", not " + type);
        if (!value.empty() && value.back() == ']') {
            const auto lb = value.rfind('[');
            if (lb == std::string::npos) fail(no, "unbalanced unit bracket");
            const std::string unit = trim(value.substr(lb + 1, value.size() - lb - 2));
            if (unit != it->second.unit)
                fail(no, "key '" + key + "' is in " + (it->second.unit.empty() ? "no unit" : it->second.unit) +
                             ", not '" + unit + "'");
            value = trim(value.substr(0, lb));
        }
        if (value.empty()) fail(no, "missing value for '" + key + "'");
        if (!raw.emplace(key, Raw{type, value, no}).second) fail(no, "duplicate key '" + key + "'");
    }

    ExperimentConfig c;
    auto get = [&](const char* k) -> const Raw* {
        auto it = raw.find(k);
        return it == raw.end() ? nullptr : &it->second;
    };
    if (auto r = get("mode")) c.mode = mode_from_string(r->value);
    double alpha = 2.0, beta = 0.5;
    bool classical = false;
    if (auto r = get("alpha")) alpha = to_real(*r);
    if (auto r = get("beta")) beta = to_real(*r);
    if (auto r = get("classical")) classical = to_bool(*r);
    c.model.frac = {alpha, beta, classical};
    if (auto r = get("nu")) c.model.nu = to_real(*r);
    if (auto r = get("d")) c.model.d = static_cast<int>(to_int(*r));
    if (auto r = get("gamma")) c.model.gamma = to_real(*r);
    if (auto r = get("lambda")) c.model.lambda = to_real(*r);

    const std::string sigma = get("sigma") ? get("sigma")->value : "linear";
    try {
        if (sigma == "linear") {
            c.model.sigma = SigmaSpec::linear(get("sigma_slope") ? to_real(*get("sigma_slope")) : 1.0);
        } else if (sigma == "clipped-affine") {
            for (const char* k : {"sigma_a", "sigma_b", "sigma_l", "sigma_L"})
                if (!get(k)) throw ConfigError(std::string("clipped-affine sigma requires ") + k);
            c.model.sigma = SigmaSpec::clipped_affine(to_real(*get("sigma_a")), to_real(*get("sigma_b")),
                                                      to_real(*get("sigma_l")), to_real(*get("sigma_L")));
            c.model.sigma.validate();
        } else {
            throw ConfigError("unknown sigma '" + sigma + "'");
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid sigma: ") + e.what());
    }

    if (auto r = get("u0")) c.u0 = to_real(*r);
    if (get("u0_lo") || get("u0_hi")) {
        if (!get("u0_lo") || !get("u0_hi")) throw ConfigError("u0_lo and u0_hi must be given together");
        c.u0_support = std::make_pair(to_real(*get("u0_lo")), to_real(*get("u0_hi")));
    }
    if (auto r = get("L")) c.grid.L = to_real(*r);
    if (auto r = get("nx")) c.grid.nx = static_cast<int>(to_int(*r));
    if (auto r = get("T")) c.grid.T = to_real(*r);
    if (auto r = get("nt")) c.grid.nt = static_cast<int>(to_int(*r));
    c.grid.d = c.model.d;
    if (auto r = get("lambdas")) c.lambdas = to_reals(*r);
    if (auto r = get("replicas")) c.replicas = static_cast<int>(to_int(*r));
    if (auto r = get("seed")) c.seed = to_u64(*r);
    if (auto r = get("outputs")) c.outputs = r->value;
    if (auto r = get("pipeline")) c.pipeline = r->value;
    if (auto r = get("fit_times")) c.fit_times = to_reals(*r);
    if (auto r = get("check_times")) c.check_times = to_reals(*r);
    if (auto r = get("tail_fraction")) c.tail_fraction = to_real(*r);
    if (auto r = get("lags")) c.lags = static_cast<int>(to_int(*r));
    if (auto r = get("threads")) {
        const long long t = to_int(*r);
        if (t < 0) fail(r->line, "threads >= 0 required");
        c.threads = static_cast<unsigned>(t);
    }
    if (auto r = get("blocked_history")) c.blocked_history = to_bool(*r);
    if (auto r = get("bootstrap")) c.bootstrap = static_cast<int>(to_int(*r));
    if (auto r = get("probes")) c.probes = to_reals(*r);
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

InitialData ExperimentConfig::initial() const {
    if (u0_support) return InitialData::step({{u0_support->first, u0_support->second, u0}});
    return InitialData::constant(u0);
}

void ExperimentConfig::validate() const {
    try {
        model.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid model: ") + e.what());
    }
    try {
        initial().validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid initial data: ") + e.what());
    }
    const bool needs_grid = mode == Mode::McWhite || mode == Mode::McColored || mode == Mode::Hoelder ||
                            (mode == Mode::Excitation && pipeline == "mc");
    if (needs_grid) {
        try {
            grid.validate();
        } catch (const DomainError& e) {
            throw ConfigError(std::string("invalid grid: ") + e.what());
        }
        if (replicas < 2) throw ConfigError("replicas >= 2 required");
    }
    if (!(grid.T > 0.0)) throw ConfigError("T > 0 required");
    if (mode == Mode::McWhite && !model.white()) throw ConfigError("mc-white mode with gamma set");
    if (mode == Mode::McColored && model.white()) throw ConfigError("mc-colored mode requires gamma");
    if (mode == Mode::Hoelder && model.white()) throw ConfigError("hoelder mode requires gamma (colored noise)");
    if (mode == Mode::Hoelder && lags < 32) throw ConfigError("hoelder mode requires lags >= 32");
    if (mode == Mode::Excitation) {
        if (pipeline != "oracle" && pipeline != "mc") throw ConfigError("pipeline must be oracle or mc");
        if (lambdas.size() < 4) throw ConfigError("excitation needs at least four lambdas");
    }
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0)) throw ConfigError("lambdas must be positive");
        if (i && !(lambdas[i] > lambdas[i - 1])) throw ConfigError("lambdas must be strictly ascending");
    }
    const bool fits = mode == Mode::Excitation || (mode == Mode::MomentOracle && lambdas.size() >= 4);
    for (double t : fit_times)
        if (fits && (!(t > 0.0) || t > grid.T)) throw ConfigError("fit_times must lie in (0, T]");
    if (mode == Mode::McWhite || mode == Mode::McColored)
        for (double t : check_times)
            if (!(t > 0.0) || t > grid.T) throw ConfigError("check_times must lie in (0, T]");
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) throw ConfigError("tail_fraction in (0, 1) required");
    if ((mode == Mode::MomentOracle || (mode == Mode::Excitation && pipeline == "oracle")) &&
        (!model.sigma.is_linear() || u0_support))
        throw ConfigError("oracle pipelines require linear sigma and constant u0");
    if (bootstrap < 0) throw ConfigError("bootstrap >= 0 required");
}

std::string ExperimentConfig::canonical() const {
    std::map<std::string, std::string> kv;
    auto put = [&](const std::string& k, const std::string& v) {
        kv[k] = k + ": " + config_schema().at(k).type + " = " + v;
    };
    put("mode", to_string(mode));
    put("alpha", fmt(model.alpha()));
    put("beta", fmt(model.beta()));
    put("classical", model.frac.classical ? "true" : "false");
    put("nu", fmt(model.nu));
    put("d", std::to_string(model.d));
    if (model.gamma) put("gamma", fmt(*model.gamma));
    put("lambda", fmt(model.lambda));
    const nlohmann::json sj = model.sigma.to_json();
    put("sigma", sj.at("kind").get<std::string>());
    if (model.sigma.is_linear()) {
        put("sigma_slope", fmt(model.sigma.slope()));
    } else {
        put("sigma_a", fmt(sj.at("a").get<double>()));
        put("sigma_b", fmt(sj.at("b").get<double>()));
        put("sigma_l", fmt(sj.at("l").get<double>()));
        put("sigma_L", fmt(sj.at("L").get<double>()));
    }
    put("u0", fmt(u0));
    if (u0_support) {
        put("u0_lo", fmt(u0_support->first));
        put("u0_hi", fmt(u0_support->second));
    }
    put("L", fmt(grid.L));
    put("nx", std::to_string(grid.nx));
    put("T", fmt(grid.T));
    put("nt", std::to_string(grid.nt));
    if (!lambdas.empty()) put("lambdas", fmt(lambdas));
    put("replicas", std::to_string(replicas));
    put("seed", std::to_string(seed));
    put("pipeline", pipeline);
    put("fit_times", fmt(fit_times));
    put("check_times", fmt(check_times));
    put("tail_fraction", fmt(tail_fraction));
    put("lags", std::to_string(lags));
    put("blocked_history", blocked_history ? "true" : "false");
    put("bootstrap", std::to_string(bootstrap));
    put("probes", fmt(probes));
    // outputs and threads do not change results and stay out of the hash
    std::string out;
    for (const auto& [k, line] : kv) out += line + "\n";
    return out;
}

} // namespace tfshe::expcli
