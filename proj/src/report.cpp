#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hmsim/harness.hpp"

namespace hmsim {

namespace {

const char* verdict_name(OracleVerdict v) {
    switch (v) {
        case OracleVerdict::Pass: return "PASS";
        case OracleVerdict::Fail: return "FAIL";
        case OracleVerdict::NotChecked: return "NOT_CHECKED";
    }
    return "?";
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string report_csv(const std::vector<RunStats>& stats) {
    std::string out =
        "run_id,organization,dcd,pdm,bypass,channel_mode,mdc_entries,seed,"
        "accesses,l3_hits,l3_misses,"
        "xpoint_read,xpoint_write,cache_hit_read,cache_write,install,"
        "miss_probe,toc_access,toc_update,dirty_bit_update,total_transfers,"
        "rho,useful_fraction,makespan_ns,mean_latency_ns,swp_accuracy,oracle\n";
    for (const RunStats& s : stats) {
        out += s.run_id;
        out += ',';
        out += to_string(s.config.organization);
        out += ',';
        out += s.config.dcd_enabled ? '1' : '0';
        out += ',';
        out += s.config.pdm_enabled ? '1' : '0';
        out += ',';
        out += to_string(s.config.bypass);
        out += ',';
        out += to_string(s.config.channel_mode);
        out += ',';
        out += std::to_string(s.config.metadata_cache_entries);
        out += ',';
        out += std::to_string(s.config.rng_seed);
        out += ',';
        out += std::to_string(s.accesses);
        out += ',';
        out += std::to_string(s.l3_hits);
        out += ',';
        out += std::to_string(s.l3_misses);
        for (unsigned c = 0; c < kCategoryCount; ++c) {
            out += ',';
            out += std::to_string(s.ledger.counts[c]);
        }
        out += ',';
        out += std::to_string(s.ledger.total());
        out += ',';
        out += fixed6(s.rho);
        out += ',';
        out += fixed6(s.useful_fraction());
        out += ',';
        out += fixed6(s.channel.makespan_ns);
        out += ',';
        out += fixed6(s.channel.mean_latency_ns);
        out += ',';
        out += fixed6(s.swp_accuracy);
        out += ',';
        out += verdict_name(s.verdict);
        out += '\n';
    }
    return out;
}

std::string report_json(const std::vector<RunStats>& stats) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const RunStats& s : stats) {
        nlohmann::ordered_json j;
        j["run_id"] = s.run_id;
        j["organization"] = to_string(s.config.organization);
        j["dcd"] = s.config.dcd_enabled;
        j["pdm"] = s.config.pdm_enabled;
        j["bypass"] = to_string(s.config.bypass);
        j["channel_mode"] = to_string(s.config.channel_mode);
        j["mdc_entries"] = s.config.metadata_cache_entries;
        j["seed"] = s.config.rng_seed;
        j["accesses"] = s.accesses;
        j["l3_hits"] = s.l3_hits;
        j["l3_misses"] = s.l3_misses;
        nlohmann::ordered_json cats;
        for (unsigned c = 0; c < kCategoryCount; ++c)
            cats[to_string(static_cast<Category>(c))] = s.ledger.counts[c];
        j["transfers"] = cats;
        j["total_transfers"] = s.ledger.total();
        j["rho"] = fixed6(s.rho);
        j["useful_fraction"] = fixed6(s.useful_fraction());
        j["makespan_ns"] = fixed6(s.channel.makespan_ns);
        j["mean_latency_ns"] = fixed6(s.channel.mean_latency_ns);
        j["swp_accuracy"] = fixed6(s.swp_accuracy);
        j["oracle"] = verdict_name(s.verdict);
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

void emit_report(const std::vector<RunStats>& stats, const std::string& format,
                 const std::string& path) {
    std::string body;
    if (format == "csv")
        body = report_csv(stats);
    else if (format == "json")
        body = report_json(stats);
    else
        throw std::invalid_argument("report format must be csv or json");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write report file: " + path);
    f << body;
}

}  // namespace hmsim
