#include "fgf/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "fgf/format.hpp"
#include "fgf/shape.hpp"

namespace fgf {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return from_string(buf.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
    if (key.empty()) throw ConfigError("config: empty key");
    kv_[key] = value;
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not a number: '" + it->second + "'");
    }
}

int Config::get_int(const std::string& key, int fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        size_t used = 0;
        int v = std::stoi(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not an integer: '" + it->second + "'");
    }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        size_t used = 0;
        std::uint64_t v = std::stoull(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not a u64: '" + it->second + "'");
    }
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::vector<double> out;
    std::string item;
    std::istringstream is(it->second);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("config: key '" + key + "' has a bad list entry: '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("config: key '" + key + "' is an empty list");
    return out;
}

std::string Config::semantic_hash() const {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    auto feed = [&hash](const std::string& s) {
        for (unsigned char c : s) {
            hash ^= c;
            hash *= 0x100000001B3ULL;
        }
    };
    for (const auto& [k, v] : kv_) {
        if (k == "out" || k == "threads") continue;
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

ExperimentKind parse_experiment_kind(const std::string& name) {
    if (name == "converge") return ExperimentKind::Converge;
    if (name == "variance") return ExperimentKind::Variance;
    if (name == "sample") return ExperimentKind::Sample;
    if (name == "maxstat") return ExperimentKind::MaxStat;
    if (name == "spectrum") return ExperimentKind::Spectrum;
    if (name == "selftest") return ExperimentKind::SelfTest;
    throw ConfigError("config: unknown experiment '" + name + "'");
}

std::string experiment_kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Converge: return "converge";
        case ExperimentKind::Variance: return "variance";
        case ExperimentKind::Sample: return "sample";
        case ExperimentKind::MaxStat: return "maxstat";
        case ExperimentKind::Spectrum: return "spectrum";
        case ExperimentKind::SelfTest: return "selftest";
    }
    return "?";
}

ExperimentConfig ExperimentConfig::from(const Config& cfg) {
    ExperimentConfig e;
    e.kind = parse_experiment_kind(cfg.get_string("experiment", "selftest"));
    e.domain_spec = cfg.get_string("domain", "box(0,1)");
    e.s = cfg.get_double("s", 1.0);
    e.h_list = cfg.get_double_list("h", {});
    e.seed = cfg.get_u64("seed", 1);
    e.replicas = cfg.get_int("replicas", 1000);
    e.theta_order = cfg.get_int("theta_order", 4);
    e.quadrature_q = cfg.get_int("q", 0);
    e.oversampling = cfg.get_int("oversampling", 8);
    e.pad_factor = cfg.get_double("pad", 4.0);
    e.threads = cfg.get_int("threads", 1);
    e.out_dir = cfg.get_string("out", ".");
    e.s_list = cfg.get_double_list("s_list", {e.s});
    e.heightmap = cfg.get_int("heightmap", 0);
    e.dump_vectors = cfg.get_int("vectors", 0);
    e.rhs_kind = cfg.get_string("rhs", "bump");
    if (e.rhs_kind != "bump" && e.rhs_kind != "const" && e.rhs_kind != "zero")
        throw ConfigError("config: rhs must be 'bump', 'const' or 'zero'");

    int dim;
    try {
        dim = parse_shape(e.domain_spec)->dim();
    } catch (const std::exception& ex) {
        throw ConfigError(std::string("config: bad domain: ") + ex.what());
    }

    if (e.s < 0) throw ConfigError("config: s must be >= 0");
    for (size_t i = 0; i + 1 < e.h_list.size(); ++i)
        if (!(e.h_list[i + 1] < e.h_list[i]))
            throw ConfigError("config: h list must be strictly decreasing");
    for (double h : e.h_list)
        if (!(h > 0)) throw ConfigError("config: h entries must be positive");
    if (e.replicas < 1) throw ConfigError("config: replicas must be >= 1");
    if (e.theta_order < 1) throw ConfigError("config: theta_order must be >= 1");
    if (e.oversampling < 1) throw ConfigError("config: oversampling must be >= 1");
    if (e.threads < 1) throw ConfigError("config: threads must be >= 1");

    if (e.kind == ExperimentKind::Converge || e.kind == ExperimentKind::Variance ||
        e.kind == ExperimentKind::MaxStat) {
        if (e.h_list.empty()) throw ConfigError("config: experiment needs an h list");
    }
    if (e.kind == ExperimentKind::Variance &&
        !(e.theta_order > e.s + 0.5 * dim))
        throw ConfigError("config: interpolation requires theta_order k > s + d/2");
    if (e.kind == ExperimentKind::Converge && e.theta_order < e.s)
        throw ConfigError("config: the error estimate requires theta_order k >= s");
    if (e.kind == ExperimentKind::MaxStat && !(dim < 2 * e.s))
        throw ConfigError("config: maximum convergence requires the subcritical regime d < 2s");
    return e;
}

Config ExperimentConfig::to_config() const {
    Config c;
    c.set("experiment", experiment_kind_name(kind));
    c.set("domain", domain_spec);
    c.set("s", format_double(s));
    if (!h_list.empty()) {
        std::string hs;
        for (size_t i = 0; i < h_list.size(); ++i)
            hs += (i ? "," : "") + format_double(h_list[i]);
        c.set("h", hs);
    }
    c.set("seed", std::to_string(seed));
    c.set("replicas", std::to_string(replicas));
    c.set("theta_order", std::to_string(theta_order));
    c.set("q", std::to_string(quadrature_q));
    c.set("oversampling", std::to_string(oversampling));
    c.set("pad", format_double(pad_factor));
    c.set("threads", std::to_string(threads));
    c.set("out", out_dir);
    if (s_list.size() > 1 || (s_list.size() == 1 && s_list[0] != s)) {
        std::string ss;
        for (size_t i = 0; i < s_list.size(); ++i) ss += (i ? "," : "") + format_double(s_list[i]);
        c.set("s_list", ss);
    }
    if (heightmap) c.set("heightmap", std::to_string(heightmap));
    if (dump_vectors) c.set("vectors", std::to_string(dump_vectors));
    if (rhs_kind != "bump") c.set("rhs", rhs_kind);
    return c;
}

}  // namespace fgf
