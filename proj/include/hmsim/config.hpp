#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "hmsim/addr.hpp"

namespace hmsim {

enum class Organization { NoCache, IdealSram, Tic, Toc, TicToc };
enum class BypassMode { None, Bypass90, WriteAllocate, PreemptiveWriteAllocate };
enum class ChannelMode { Shared, Dedicated };

const char* to_string(Organization o);
const char* to_string(BypassMode b);
const char* to_string(ChannelMode m);

Organization organization_from_string(const std::string& s);
BypassMode bypass_from_string(const std::string& s);
ChannelMode channel_mode_from_string(const std::string& s);

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One simulated configuration: organization, feature flags, structure sizes.
struct PolicyConfig {
    Organization organization = Organization::TicToc;
    bool dcd_enabled = false;
    bool pdm_enabled = false;
    BypassMode bypass = BypassMode::None;
    std::uint32_t metadata_cache_entries = 512;
    ChannelMode channel_mode = ChannelMode::Shared;
    std::uint64_t rng_seed = 1;

    CacheGeometry geometry{};
    std::uint64_t l3_lines = 131072;  // 8MB
    std::uint32_t l3_ways = 16;

    bool has_dram_cache() const { return organization != Organization::NoCache; }
    bool has_toc() const {
        return organization == Organization::Toc || organization == Organization::TicToc;
    }
    bool uses_hm_predictor() const {
        return organization == Organization::Tic || organization == Organization::Toc ||
               organization == Organization::TicToc;
    }
    bool uses_write_predictor() const {
        return organization == Organization::TicToc &&
               (pdm_enabled || bypass == BypassMode::PreemptiveWriteAllocate);
    }

    /// Throws ConfigError on an illegal combination.
    void validate() const;
};

/// Flat `key = value` config file, one key per line, `#` comments.
PolicyConfig parse_config_text(const std::string& text);
PolicyConfig load_config_file(const std::string& path);

}  // namespace hmsim
