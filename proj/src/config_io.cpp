#include "isac/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace isac::io {

namespace {

const std::set<std::string> kNetworkKeys = {"lambda_b", "m_t",   "m_r",     "p_t",    "alpha",
                                            "beta",     "xi_sq", "kappa",   "delta_t", "j_max"};
const std::set<std::string> kAllocationKeys = {"k", "l", "j", "q"};
const std::set<std::string> kRunKeys = {"n_realizations", "seed", "r_window_km", "rel_tol"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& value, int line, int column) {
    const std::string v = trim(value);
    if (v.empty()) throw ParseError("empty value", line, column);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size()) throw ParseError("malformed number '" + v + "'", line, column);
    return x;
}

long parse_integer(const std::string& value, int line, int column) {
    const double x = parse_number(value, line, column);
    const long i = static_cast<long>(x);
    if (static_cast<double>(i) != x)
        throw ParseError("expected an integer, got '" + trim(value) + "'", line, column);
    return i;
}

} // namespace

LoadedConfig parse_config(const std::string& text) {
    LoadedConfig cfg;
    std::map<std::string, std::pair<std::string, std::pair<int, int>>> seen; // key -> value, loc

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::string section;
    while (std::getline(in, raw)) {
        ++lineno;
        // strip comments ('#' or ';' to end of line)
        const auto cpos = raw.find_first_of("#;");
        std::string body = cpos == std::string::npos ? raw : raw.substr(0, cpos);
        const std::string lt = trim(body);
        if (lt.empty()) continue;
        if (lt.front() == '[') {
            if (lt.back() != ']')
                throw ParseError("unterminated section header", lineno,
                                 static_cast<int>(body.find('[')) + 1);
            section = trim(lt.substr(1, lt.size() - 2));
            if (section != "network" && section != "allocation" && section != "run")
                throw ParseError("unknown section [" + section + "]", lineno, 1);
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key = value", lineno, static_cast<int>(body.size()) + 1);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = body.substr(eq + 1);
        const int col = static_cast<int>(body.find_first_not_of(" \t")) + 1;
        if (section.empty()) throw ParseError("key '" + key + "' before any section", lineno, col);
        const auto& keyset = section == "network"      ? kNetworkKeys
                             : section == "allocation" ? kAllocationKeys
                                                       : kRunKeys;
        if (!keyset.count(key))
            throw ParseError("unknown key '" + key + "' in section [" + section + "]", lineno, col);
        const std::string qual = section + "." + key;
        if (seen.count(qual)) throw ParseError("duplicate key '" + key + "'", lineno, col);
        seen[qual] = {value, {lineno, static_cast<int>(eq) + 2}};
    }

    auto has = [&](const std::string& qual) { return seen.count(qual) != 0; };
    auto num = [&](const std::string& qual) {
        const auto& [v, loc] = seen.at(qual);
        return parse_number(v, loc.first, loc.second);
    };
    auto integer = [&](const std::string& qual) {
        const auto& [v, loc] = seen.at(qual);
        return parse_integer(v, loc.first, loc.second);
    };

    if (has("network.lambda_b")) cfg.network.lambda_b = num("network.lambda_b");
    if (has("network.m_t")) cfg.network.m_t = static_cast<int>(integer("network.m_t"));
    if (has("network.m_r")) cfg.network.m_r = static_cast<int>(integer("network.m_r"));
    if (has("network.p_t")) cfg.network.p_t = num("network.p_t");
    if (has("network.alpha")) cfg.network.alpha = num("network.alpha");
    if (has("network.beta")) cfg.network.beta = num("network.beta");
    if (has("network.xi_sq")) cfg.network.xi_sq = num("network.xi_sq");
    if (has("network.kappa")) cfg.network.kappa = num("network.kappa");
    if (has("network.delta_t")) cfg.network.delta_t = num("network.delta_t");
    if (has("network.j_max")) cfg.network.j_max = static_cast<int>(integer("network.j_max"));
    if (has("allocation.k")) cfg.alloc.k = static_cast<int>(integer("allocation.k"));
    if (has("allocation.l")) cfg.alloc.l = static_cast<int>(integer("allocation.l"));
    if (has("allocation.j")) cfg.alloc.j = static_cast<int>(integer("allocation.j"));
    if (has("allocation.q")) cfg.alloc.q = static_cast<int>(integer("allocation.q"));
    if (has("run.n_realizations")) cfg.run.n_realizations = integer("run.n_realizations");
    if (has("run.seed")) cfg.run.seed = static_cast<std::uint64_t>(integer("run.seed"));
    if (has("run.r_window_km")) cfg.run.r_window_km = num("run.r_window_km");
    if (has("run.rel_tol")) cfg.run.rel_tol = num("run.rel_tol");

    const char* all_keys[] = {"network.lambda_b", "network.m_t",     "network.m_r",
                              "network.p_t",      "network.alpha",   "network.beta",
                              "network.xi_sq",    "network.kappa",   "network.delta_t",
                              "network.j_max",    "allocation.k",    "allocation.l",
                              "allocation.j",     "allocation.q",    "run.n_realizations",
                              "run.seed",         "run.r_window_km", "run.rel_tol"};
    for (const char* k : all_keys)
        if (!has(k)) cfg.defaulted_keys.push_back(k);

    try {
        cfg.network.validate();
    } catch (const DomainError& e) {
        throw ValidationError(e.what());
    }
    if (cfg.alloc.k < 1 || cfg.alloc.l < 1 || cfg.alloc.j < 1 || cfg.alloc.q < 1)
        throw ValidationError("Allocation: k, l, j, q must all be >= 1");
    if (cfg.run.n_realizations < 1)
        throw ValidationError("RunSettings: n_realizations must be >= 1");
    if (cfg.run.r_window_km < 0.0) throw ValidationError("RunSettings: r_window_km must be >= 0");
    if (cfg.run.rel_tol < 0.0) throw ValidationError("RunSettings: rel_tol must be >= 0");
    return cfg;
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("load_config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string canonical_text(const LoadedConfig& cfg) {
    char buf[64];
    std::string out;
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%s=%.17g\n", key, v);
        out += buf;
    };
    auto puti = [&](const char* key, long long v) {
        std::snprintf(buf, sizeof buf, "%s=%lld\n", key, v);
        out += buf;
    };
    put("lambda_b", cfg.network.lambda_b);
    puti("m_t", cfg.network.m_t);
    puti("m_r", cfg.network.m_r);
    put("p_t", cfg.network.p_t);
    put("alpha", cfg.network.alpha);
    put("beta", cfg.network.beta);
    put("xi_sq", cfg.network.xi_sq);
    put("kappa", cfg.network.kappa);
    put("delta_t", cfg.network.delta_t);
    puti("j_max", cfg.network.j_max);
    puti("k", cfg.alloc.k);
    puti("l", cfg.alloc.l);
    puti("j", cfg.alloc.j);
    puti("q", cfg.alloc.q);
    puti("n_realizations", cfg.run.n_realizations);
    puti("seed", static_cast<long long>(cfg.run.seed));
    put("r_window_km", cfg.run.r_window_km);
    put("rel_tol", cfg.run.rel_tol);
    return out;
}

std::string config_hash(const LoadedConfig& cfg) {
    const std::string text = canonical_text(cfg);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

} // namespace isac::io
