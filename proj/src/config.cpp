#include "hmsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace hmsim {

const char* to_string(Organization o) {
    switch (o) {
        case Organization::NoCache: return "nocache";
        case Organization::IdealSram: return "ideal_sram";
        case Organization::Tic: return "tic";
        case Organization::Toc: return "toc";
        case Organization::TicToc: return "tictoc";
    }
    return "?";
}

const char* to_string(BypassMode b) {
    switch (b) {
        case BypassMode::None: return "none";
        case BypassMode::Bypass90: return "bypass90";
        case BypassMode::WriteAllocate: return "write_allocate";
        case BypassMode::PreemptiveWriteAllocate: return "preemptive_write_allocate";
    }
    return "?";
}

const char* to_string(ChannelMode m) {
    return m == ChannelMode::Shared ? "shared" : "dedicated";
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
    std::string s = lower(v);
    if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "off" || s == "no") return false;
    throw ConfigError("bad boolean value '" + v + "' for key '" + key + "'");
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        std::uint64_t r = std::stoull(v, &pos, 0);
        if (pos != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value '" + v + "' for key '" + key + "'");
    }
}

}  // namespace

Organization organization_from_string(const std::string& s) {
    std::string v = lower(s);
    if (v == "nocache" || v == "no_cache") return Organization::NoCache;
    if (v == "ideal_sram" || v == "idealsram" || v == "sram") return Organization::IdealSram;
    if (v == "tic") return Organization::Tic;
    if (v == "toc") return Organization::Toc;
    if (v == "tictoc") return Organization::TicToc;
    throw ConfigError("unknown organization '" + s + "'");
}

BypassMode bypass_from_string(const std::string& s) {
    std::string v = lower(s);
    if (v == "none") return BypassMode::None;
    if (v == "bypass90") return BypassMode::Bypass90;
    if (v == "write_allocate") return BypassMode::WriteAllocate;
    if (v == "preemptive_write_allocate") return BypassMode::PreemptiveWriteAllocate;
    throw ConfigError("unknown bypass mode '" + s + "'");
}

ChannelMode channel_mode_from_string(const std::string& s) {
    std::string v = lower(s);
    if (v == "shared") return ChannelMode::Shared;
    if (v == "dedicated") return ChannelMode::Dedicated;
    throw ConfigError("unknown channel mode '" + s + "'");
}

void PolicyConfig::validate() const {
    if (!geometry.valid())
        throw ConfigError("invalid geometry: cache_lines must be a power of two, "
                          "metadata region must cover the cache, memory >= cache");
    if (metadata_cache_entries == 0)
        throw ConfigError("metadata_cache_entries must be > 0");
    if (l3_ways == 0 || l3_lines == 0 || l3_lines % l3_ways != 0)
        throw ConfigError("l3_lines must be a nonzero multiple of l3_ways");
    std::uint64_t sets = l3_lines / l3_ways;
    if ((sets & (sets - 1)) != 0)
        throw ConfigError("l3 set count must be a power of two");

    bool tictoc = organization == Organization::TicToc;
    if (dcd_enabled && !tictoc)
        throw ConfigError("dcd requires organization=tictoc");
    if (pdm_enabled && !tictoc)
        throw ConfigError("pdm requires organization=tictoc");
    if (bypass != BypassMode::None) {
        bool tic_b90 = organization == Organization::Tic && bypass == BypassMode::Bypass90;
        if (!tictoc && !tic_b90)
            throw ConfigError("bypass mode '" + std::string(to_string(bypass)) +
                              "' requires organization=tictoc (bypass90 also allowed for tic)");
    }
}

PolicyConfig parse_config_text(const std::string& text) {
    PolicyConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        std::string key = lower(trim(line.substr(0, eq)));
        std::string val = trim(line.substr(eq + 1));
        if (key == "organization") cfg.organization = organization_from_string(val);
        else if (key == "dcd") cfg.dcd_enabled = parse_bool(val, key);
        else if (key == "pdm") cfg.pdm_enabled = parse_bool(val, key);
        else if (key == "bypass") cfg.bypass = bypass_from_string(val);
        else if (key == "metadata_cache_entries")
            cfg.metadata_cache_entries = static_cast<std::uint32_t>(parse_u64(val, key));
        else if (key == "channel_mode") cfg.channel_mode = channel_mode_from_string(val);
        else if (key == "rng_seed") cfg.rng_seed = parse_u64(val, key);
        else if (key == "memory_lines") cfg.geometry.memory_lines = parse_u64(val, key);
        else if (key == "cache_lines") cfg.geometry.cache_lines = parse_u64(val, key);
        else if (key == "metadata_region_lines")
            cfg.geometry.metadata_region_lines = parse_u64(val, key);
        else if (key == "l3_lines") cfg.l3_lines = parse_u64(val, key);
        else if (key == "l3_ways") cfg.l3_ways = static_cast<std::uint32_t>(parse_u64(val, key));
        else
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

PolicyConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace hmsim
