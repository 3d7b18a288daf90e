#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "macsim/rng.hpp"
#include "macsim/types.hpp"

namespace macsim {

struct Trace {
    std::string name;
    uint64_t seed = 0;
    std::string generator_params;  // human-readable echo of the generator call
    std::vector<Access> accesses;
};

struct ParsedLine {
    enum class Kind : uint8_t { Record, Comment } kind = Kind::Comment;
    Access access;
};

struct TraceParseError : std::runtime_error {
    TraceParseError(size_t line_number, const std::string& what)
        : std::runtime_error("trace line " + std::to_string(line_number) + ": " + what),
          line_number(line_number) {}
    size_t line_number;
};

/// Grammar: optional whitespace, then either `# comment`, blank, or
/// `R|W <address>` with the address in hex (0x...) or decimal.
inline ParsedLine parse_trace_line(const std::string& text, size_t line_number = 0) {
    size_t i = text.find_first_not_of(" \t\r");
    if (i == std::string::npos || text[i] == '#') return {ParsedLine::Kind::Comment, {}};

    const char kind_char = text[i];
    AccessKind kind;
    if (kind_char == 'R' || kind_char == 'r') kind = AccessKind::Read;
    else if (kind_char == 'W' || kind_char == 'w') kind = AccessKind::Write;
    else throw TraceParseError(line_number, std::string("bad access kind '") + kind_char + "'");

    std::istringstream rest(text.substr(i + 1));
    std::string token;
    if (!(rest >> token)) throw TraceParseError(line_number, "missing address");
    uint64_t address = 0;
    size_t consumed = 0;
    try {
        address = std::stoull(token, &consumed, 0);  // base 0: 0x-prefix or decimal
    } catch (const std::exception&) {
        throw TraceParseError(line_number, "bad address '" + token + "'");
    }
    if (consumed != token.size())
        throw TraceParseError(line_number, "trailing junk in address '" + token + "'");
    std::string extra;
    if (rest >> extra) throw TraceParseError(line_number, "trailing junk '" + extra + "'");
    return {ParsedLine::Kind::Record, Access{kind, address}};
}

inline std::string format_access(const Access& a) {
    std::ostringstream out;
    out << (a.kind == AccessKind::Write ? 'W' : 'R') << " 0x" << std::hex << a.address;
    return out.str();
}

inline Trace read_trace(std::istream& in, const std::string& name = "") {
    Trace t;
    t.name = name;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        ParsedLine p = parse_trace_line(line, line_no);
        if (p.kind == ParsedLine::Kind::Record) t.accesses.push_back(p.access);
    }
    return t;
}

inline void write_trace(std::ostream& out, const Trace& t) {
    if (!t.name.empty()) out << "# " << t.name << "\n";
    if (!t.generator_params.empty()) out << "# " << t.generator_params << "\n";
    for (const auto& a : t.accesses) out << format_access(a) << "\n";
}

// --- Generators -----------------------------------------------------------
// All generators are pure functions of their parameters and seed.

/// Single-use streaming pattern; the adversarial case for recency-based
/// policies since nothing is ever re-referenced.
inline Trace gen_scan(uint64_t lines, uint64_t stride_bytes, AccessKind kind) {
    if (lines < 1) throw std::invalid_argument("gen_scan: lines must be >= 1");
    Trace t;
    t.name = "scan";
    std::ostringstream p;
    p << "lines=" << lines << " stride=" << stride_bytes
      << " kind=" << (kind == AccessKind::Write ? 'W' : 'R');
    t.generator_params = p.str();
    t.accesses.reserve(lines);
    for (uint64_t i = 0; i < lines; ++i) t.accesses.push_back({kind, i * stride_bytes});
    return t;
}

/// Hot working set revisited every iteration, polluted by a fresh batch of
/// single-use cold lines. offset_jitter_bytes spreads accesses inside the
/// line so sub-block dirtiness tracking sees distinct offsets.
inline Trace gen_loop_working_set(uint64_t hot_lines, uint64_t cold_lines, uint64_t iterations,
                                  double write_fraction, uint64_t seed,
                                  uint64_t line_bytes = 64, uint64_t offset_jitter_bytes = 0) {
    if (write_fraction < 0.0 || write_fraction > 1.0)
        throw std::invalid_argument("write_fraction must be in [0,1]");
    Trace t;
    t.name = "loop_working_set";
    t.seed = seed;
    std::ostringstream p;
    p << "hot=" << hot_lines << " cold=" << cold_lines << " iters=" << iterations
      << " wf=" << write_fraction << " seed=" << seed;
    t.generator_params = p.str();
    Rng rng(seed);
    uint64_t cold_base_line = hot_lines;  // cold region starts past the hot lines
    auto jitter = [&]() {
        return offset_jitter_bytes == 0 ? 0 : rng.next_below(offset_jitter_bytes);
    };
    for (uint64_t it = 0; it < iterations; ++it) {
        for (uint64_t h = 0; h < hot_lines; ++h) {
            const AccessKind k = rng.chance(write_fraction) ? AccessKind::Write : AccessKind::Read;
            t.accesses.push_back({k, h * line_bytes + jitter()});
        }
        for (uint64_t c = 0; c < cold_lines; ++c) {
            t.accesses.push_back({AccessKind::Read, (cold_base_line + c) * line_bytes + jitter()});
        }
        cold_base_line += cold_lines;
    }
    return t;
}

/// Zipf(s)-distributed line popularity; s = 0 degenerates to uniform.
inline Trace gen_zipf_mixed(uint64_t lines, uint64_t accesses, double zipf_s,
                            double write_fraction, uint64_t seed, uint64_t line_bytes = 64,
                            uint64_t offset_jitter_bytes = 0) {
    if (lines < 1) throw std::invalid_argument("gen_zipf_mixed: lines must be >= 1");
    if (zipf_s < 0.0) throw std::invalid_argument("gen_zipf_mixed: zipf_s must be >= 0");
    if (write_fraction < 0.0 || write_fraction > 1.0)
        throw std::invalid_argument("write_fraction must be in [0,1]");
    Trace t;
    t.name = "zipf_mixed";
    t.seed = seed;
    std::ostringstream p;
    p << "lines=" << lines << " accesses=" << accesses << " s=" << zipf_s
      << " wf=" << write_fraction << " seed=" << seed;
    t.generator_params = p.str();

    std::vector<double> cdf(lines);
    double sum = 0.0;
    for (uint64_t i = 0; i < lines; ++i) {
        sum += 1.0 / std::pow(static_cast<double>(i + 1), zipf_s);
        cdf[i] = sum;
    }
    for (auto& c : cdf) c /= sum;

    Rng rng(seed);
    t.accesses.reserve(accesses);
    for (uint64_t i = 0; i < accesses; ++i) {
        const double u = rng.next_unit();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const uint64_t line = static_cast<uint64_t>(it - cdf.begin());
        const AccessKind k = rng.chance(write_fraction) ? AccessKind::Write : AccessKind::Read;
        const uint64_t off = offset_jitter_bytes == 0 ? 0 : rng.next_below(offset_jitter_bytes);
        t.accesses.push_back({k, line * line_bytes + off});
    }
    return t;
}

// --- Statistics -----------------------------------------------------------

struct TraceStats {
    uint64_t total_accesses = 0;
    double write_fraction = 0.0;
    uint64_t unique_lines = 0;
    uint64_t working_set_lines = 0;  // lines ever touched
    /// Histogram of LRU stack distances, bucket i = distance i, capped; the
    /// final slot counts distances >= cap. Cold (first-touch) accesses are
    /// tracked separately.
    std::vector<uint64_t> reuse_distance_histogram;
    uint64_t cold_accesses = 0;
    uint64_t reuse_distance_cap = 0;
};

inline TraceStats trace_stats(const Trace& t, uint64_t line_bytes = 64,
                              uint64_t reuse_distance_cap = 256) {
    TraceStats s;
    s.total_accesses = t.accesses.size();
    s.reuse_distance_cap = reuse_distance_cap;
    s.reuse_distance_histogram.assign(reuse_distance_cap + 1, 0);

    uint64_t writes = 0;
    std::vector<uint64_t> stack;  // front = MRU
    std::unordered_map<uint64_t, size_t> seen;
    for (const auto& a : t.accesses) {
        if (a.kind == AccessKind::Write) ++writes;
        const uint64_t line = a.address / line_bytes;
        auto pos = std::find(stack.begin(), stack.end(), line);
        if (pos == stack.end()) {
            s.cold_accesses++;
            stack.insert(stack.begin(), line);
        } else {
            const uint64_t distance = static_cast<uint64_t>(pos - stack.begin());
            s.reuse_distance_histogram[std::min(distance, reuse_distance_cap)]++;
            stack.erase(pos);
            stack.insert(stack.begin(), line);
        }
        seen.try_emplace(line, seen.size());
    }
    s.unique_lines = seen.size();
    s.working_set_lines = seen.size();
    s.write_fraction =
        s.total_accesses == 0 ? 0.0 : static_cast<double>(writes) / s.total_accesses;
    return s;
}

}  // namespace macsim
