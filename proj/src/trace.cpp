#include "hmsim/trace.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hmsim/rng.hpp"

namespace hmsim {

namespace {

// Synthetic PC pools. Writer PCs only ever install lines that get written;
// reader PCs never do. That gives write prediction a known ground truth.
constexpr std::uint64_t kReaderPcBase = 0x1000;
constexpr std::uint64_t kWriterPcBase = 0x2000;
constexpr unsigned kPcsPerPool = 8;

struct LineClassifier {
    std::uint64_t class_salt;
    std::uint64_t pc_salt;
    std::uint64_t write_threshold;

    LineClassifier(const TraceSpec& spec)
        : class_salt(mix64(spec.seed ^ 0xc1a55u)),
          pc_salt(mix64(spec.seed ^ 0x9cu)),
          write_threshold(spec.write_fraction >= 1.0
                              ? UINT64_MAX
                              : static_cast<std::uint64_t>(spec.write_fraction *
                                                           18446744073709551616.0)) {}

    bool writes(LineAddr line) const {
        return write_threshold == UINT64_MAX || mix64(line ^ class_salt) < write_threshold;
    }
    std::uint64_t pc_of(LineAddr line) const {
        std::uint64_t base = writes(line) ? kWriterPcBase : kReaderPcBase;
        return base + 16 * (mix64(line ^ pc_salt) % kPcsPerPool);
    }
    MemAccess access(LineAddr line) const {
        return {pc_of(line), line, writes(line) ? AccessKind::Write : AccessKind::Read};
    }
};

std::uint64_t coprime_stride(std::uint64_t n, Rng& rng) {
    if (n <= 2) return 1;
    std::uint64_t s = static_cast<std::uint64_t>(0.618 * static_cast<double>(n));
    s |= 1;
    s += 2 * rng.below(std::min<std::uint64_t>(n / 4 + 1, 1024));
    s %= n;
    if (s == 0) s = 1;
    while (std::gcd(s, n) != 1) s = (s + 2) % n ? (s + 2) % n : 1;
    return s;
}

void gen_stream(const TraceSpec& spec, const LineClassifier& cls,
                std::vector<MemAccess>& out) {
    for (std::uint64_t i = 0; i < spec.access_count; ++i)
        out.push_back(cls.access(i % spec.footprint_lines));
}

void gen_page_local(const TraceSpec& spec, const LineClassifier& cls, Rng& rng,
                    std::vector<MemAccess>& out) {
    const std::uint64_t span = spec.locality_span;
    while (out.size() < spec.access_count) {
        std::uint64_t base = rng.below(spec.footprint_lines - span + 1) & ~63ull;
        for (std::uint64_t k = 0; k < span && out.size() < spec.access_count; ++k)
            out.push_back(cls.access(base + k));
    }
}

void gen_write_once(const TraceSpec& spec, const LineClassifier& cls, Rng& rng,
                    std::vector<MemAccess>& out) {
    if (spec.access_count > spec.footprint_lines)
        throw TraceError("write_once requires access_count <= footprint_lines");
    // Full-period permuted walk so evictions have poor spatial locality.
    const std::uint64_t n = spec.footprint_lines;
    const std::uint64_t stride = coprime_stride(n, rng);
    std::uint64_t line = rng.below(n);
    for (std::uint64_t i = 0; i < spec.access_count; ++i) {
        out.push_back(cls.access(line));
        line = (line + stride) % n;
    }
}

void gen_write_repeat(const TraceSpec& spec, const LineClassifier& cls, Rng& rng,
                      std::vector<MemAccess>& out) {
    // Hot lines live above the background footprint, one per metadata line,
    // so repeated dirtying cannot amortize in the metadata cache.
    const std::uint64_t hot_count = spec.locality_span;
    const std::uint64_t hot_base = (spec.footprint_lines + 63) & ~63ull;
    const std::uint64_t period =
        spec.write_fraction > 0.0
            ? std::max<std::uint64_t>(1, static_cast<std::uint64_t>(
                                             std::llround(1.0 / spec.write_fraction)))
            : spec.access_count + 1;
    std::uint64_t hot_i = 0, bg = 0;
    for (std::uint64_t i = 0; i < spec.access_count; ++i) {
        if ((i + 1) % period == 0) {
            LineAddr line = hot_base + 64 * (hot_i++ % hot_count);
            out.push_back({kWriterPcBase + 16 * (mix64(line) % kPcsPerPool), line,
                           AccessKind::Write});
        } else {
            LineAddr line = bg++ % spec.footprint_lines;
            out.push_back({kReaderPcBase + 16 * (mix64(line ^ cls.pc_salt) % kPcsPerPool),
                           line, AccessKind::Read});
        }
    }
}

void gen_pointer_chase(const TraceSpec& spec, const LineClassifier& cls, Rng& rng,
                       std::vector<MemAccess>& out) {
    for (std::uint64_t i = 0; i < spec.access_count; ++i)
        out.push_back(cls.access(rng.below(spec.footprint_lines)));
}

void gen_mix(const TraceSpec& spec, const LineClassifier& cls, Rng& rng,
             std::vector<MemAccess>& out) {
    const std::uint64_t span = spec.locality_span;
    std::uint64_t stream_ptr = 0;
    while (out.size() < spec.access_count) {
        std::uint64_t d = rng.below(10);
        if (d < 6) {
            std::uint64_t base = rng.below(spec.footprint_lines - span + 1) & ~63ull;
            for (std::uint64_t k = 0; k < span && out.size() < spec.access_count; ++k)
                out.push_back(cls.access(base + k));
        } else if (d < 8) {
            for (std::uint64_t k = 0; k < span && out.size() < spec.access_count; ++k)
                out.push_back(cls.access(stream_ptr++ % spec.footprint_lines));
        } else {
            for (std::uint64_t k = 0; k < span / 4 + 1 && out.size() < spec.access_count; ++k)
                out.push_back(cls.access(rng.below(spec.footprint_lines)));
        }
    }
}

}  // namespace

const char* to_string(TracePattern p) {
    switch (p) {
        case TracePattern::Stream: return "stream";
        case TracePattern::PageLocal: return "page_local";
        case TracePattern::WriteOnce: return "write_once";
        case TracePattern::WriteRepeat: return "write_repeat";
        case TracePattern::PointerChase: return "pointer_chase";
        case TracePattern::Mix: return "mix";
    }
    return "?";
}

TracePattern pattern_from_string(const std::string& s) {
    std::string v = s;
    std::transform(v.begin(), v.end(), v.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (v == "stream") return TracePattern::Stream;
    if (v == "page_local" || v == "pagelocal") return TracePattern::PageLocal;
    if (v == "write_once" || v == "writeonce") return TracePattern::WriteOnce;
    if (v == "write_repeat" || v == "writerepeat") return TracePattern::WriteRepeat;
    if (v == "pointer_chase" || v == "pointerchase") return TracePattern::PointerChase;
    if (v == "mix") return TracePattern::Mix;
    throw TraceError("unknown trace pattern '" + s + "'");
}

void TraceSpec::validate() const {
    if (write_fraction < 0.0 || write_fraction > 1.0)
        throw TraceError("write_fraction must be in [0,1]");
    if (locality_span < 1 || footprint_lines < locality_span)
        throw TraceError("need footprint_lines >= locality_span >= 1");
    if (access_count == 0) throw TraceError("access_count must be > 0");
    if (pattern == TracePattern::WriteOnce && access_count > footprint_lines)
        throw TraceError("write_once requires access_count <= footprint_lines");
}

bool pc_is_writer(std::uint64_t pc) {
    return pc >= kWriterPcBase && pc < kWriterPcBase + 16 * kPcsPerPool;
}

std::vector<MemAccess> generate(const TraceSpec& spec) {
    spec.validate();
    Rng rng(mix64(spec.seed));
    LineClassifier cls(spec);
    std::vector<MemAccess> out;
    out.reserve(spec.access_count);
    switch (spec.pattern) {
        case TracePattern::Stream: gen_stream(spec, cls, out); break;
        case TracePattern::PageLocal: gen_page_local(spec, cls, rng, out); break;
        case TracePattern::WriteOnce: gen_write_once(spec, cls, rng, out); break;
        case TracePattern::WriteRepeat: gen_write_repeat(spec, cls, rng, out); break;
        case TracePattern::PointerChase: gen_pointer_chase(spec, cls, rng, out); break;
        case TracePattern::Mix: gen_mix(spec, cls, rng, out); break;
    }
    return out;
}

void write_trace(const std::vector<MemAccess>& trace, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw TraceError("cannot open trace file for writing: " + path);
    for (const MemAccess& a : trace)
        std::fprintf(f, "%" PRIx64 " %" PRIx64 " %c\n", a.pc, a.addr,
                     a.is_write() ? 'W' : 'R');
    std::fclose(f);
}

std::vector<MemAccess> read_trace(const std::string& path, std::uint64_t memory_lines) {
    std::ifstream in(path);
    if (!in) throw TraceError("cannot open trace file: " + path);
    std::vector<MemAccess> out;
    std::string line;
    std::uint64_t record = 0;
    while (std::getline(in, line)) {
        ++record;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string pc_s, addr_s, kind_s;
        if (!(ss >> pc_s >> addr_s >> kind_s))
            throw TraceError("trace record " + std::to_string(record) + ": malformed");
        MemAccess a;
        auto parse_hex = [&](const std::string& tok, std::uint64_t& v) {
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, 16);
            if (ec != std::errc() || p != tok.data() + tok.size())
                throw TraceError("trace record " + std::to_string(record) +
                                 ": bad hex field '" + tok + "'");
        };
        parse_hex(pc_s, a.pc);
        parse_hex(addr_s, a.addr);
        if (kind_s == "R") a.kind = AccessKind::Read;
        else if (kind_s == "W") a.kind = AccessKind::Write;
        else
            throw TraceError("trace record " + std::to_string(record) +
                             ": kind must be R or W, got '" + kind_s + "'");
        if (a.addr >= memory_lines)
            throw TraceError("trace record " + std::to_string(record) +
                             ": address out of range");
        std::string rest;
        if (ss >> rest)
            throw TraceError("trace record " + std::to_string(record) + ": trailing junk");
        out.push_back(a);
    }
    return out;
}

TraceSpec parse_trace_spec_text(const std::string& text) {
    TraceSpec spec;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return std::string();
        auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw TraceError("trace spec line " + std::to_string(lineno) +
                             ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "pattern") spec.pattern = pattern_from_string(val);
            else if (key == "footprint_lines") spec.footprint_lines = std::stoull(val);
            else if (key == "access_count") spec.access_count = std::stoull(val);
            else if (key == "write_fraction") spec.write_fraction = std::stod(val);
            else if (key == "locality_span") spec.locality_span = std::stoull(val);
            else if (key == "seed") spec.seed = std::stoull(val);
            else
                throw TraceError("trace spec line " + std::to_string(lineno) +
                                 ": unknown key '" + key + "'");
        } catch (const TraceError&) {
            throw;
        } catch (const std::exception&) {
            throw TraceError("trace spec line " + std::to_string(lineno) +
                             ": bad value '" + val + "'");
        }
    }
    spec.validate();
    return spec;
}

TraceSpec load_trace_spec_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw TraceError("cannot open trace spec file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_trace_spec_text(ss.str());
}

}  // namespace hmsim
