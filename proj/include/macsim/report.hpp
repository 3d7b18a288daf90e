#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "macsim/cache.hpp"
#include "macsim/trace.hpp"

namespace macsim {

inline constexpr const char* kToolVersion = "macsim 1.0.0";

struct ExperimentSpec {
    CacheConfig config;
    CostModel cost;
    uint64_t seed = 0;
    bool include_flush_in_writes = false;  // sensitivity knob, off by default
};

struct RunResult {
    Metrics metrics;
    std::vector<EvictionEvent> flush_events;
};

inline RunResult run_experiment(const ExperimentSpec& spec, const Trace& trace) {
    spec.config.validate();
    spec.cost.validate();
    Cache cache(spec.config, spec.seed);
    for (const auto& a : trace.accesses) cache.access(a);
    RunResult r;
    if (spec.config.flush_at_end) r.flush_events = cache.flush();
    r.metrics = cache.metrics();
    if (spec.include_flush_in_writes) r.metrics.pcm_writes += r.metrics.flush_writes;
    return r;
}

struct PolicyRow {
    PolicyId policy;
    Metrics metrics;
    NormalizedReport normalized;
    int64_t stall = 0;
};

struct ComparisonReport {
    std::vector<PolicyRow> rows;  // sorted by normalized writes, ascending
    TraceStats stats;
    CacheConfig config_echo;  // policy_id field is per-row, rest is shared
    CostModel cost;
    uint64_t seed = 0;
    std::string trace_name;
    std::string tool_version = kToolVersion;
};

/// Runs every requested policy on the same trace and normalizes to LRU.
/// LRU is run as baseline whether or not it is in the list. Per-policy runs
/// are independent; `parallel` only changes scheduling, never results.
inline ComparisonReport compare(const std::vector<PolicyId>& policies, const Trace& trace,
                                const ExperimentSpec& base_spec, bool parallel = false) {
    auto run_one = [&](PolicyId p) {
        ExperimentSpec spec = base_spec;
        spec.config.policy_id = p;
        return run_experiment(spec, trace);
    };

    ExperimentSpec lru_spec = base_spec;
    lru_spec.config.policy_id = PolicyId::LRU;
    const Metrics baseline = run_experiment(lru_spec, trace).metrics;

    std::vector<PolicyId> order = policies;
    if (std::find(order.begin(), order.end(), PolicyId::LRU) == order.end())
        order.insert(order.begin(), PolicyId::LRU);

    std::vector<Metrics> results(order.size());
    if (parallel) {
        std::vector<std::future<Metrics>> futures;
        futures.reserve(order.size());
        for (PolicyId p : order)
            futures.push_back(std::async(std::launch::async,
                                         [&, p] { return run_one(p).metrics; }));
        for (size_t i = 0; i < futures.size(); ++i) results[i] = futures[i].get();
    } else {
        for (size_t i = 0; i < order.size(); ++i) results[i] = run_one(order[i]).metrics;
    }

    ComparisonReport report;
    report.stats = trace_stats(trace, base_spec.config.line_size_bytes);
    report.config_echo = base_spec.config;
    report.cost = base_spec.cost;
    report.seed = base_spec.seed;
    report.trace_name = trace.name;
    for (size_t i = 0; i < order.size(); ++i) {
        PolicyRow row;
        row.policy = order[i];
        row.metrics = results[i];
        try {
            row.normalized = normalize(row.metrics, baseline, base_spec.cost);
        } catch (const std::domain_error& e) {
            throw std::domain_error(std::string(e.what()) + " (policy " +
                                    to_string(order[i]) + ")");
        }
        row.stall = stall_cycles(row.metrics, base_spec.cost);
        report.rows.push_back(row);
    }
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const PolicyRow& a, const PolicyRow& b) {
                         return a.normalized.writes < b.normalized.writes;
                     });
    return report;
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string emit_csv(const ComparisonReport& report) {
    std::ostringstream out;
    out << "policy,hits,misses,pcm_reads,pcm_writes,flush_writes,hit_ratio,stall_cycles,"
           "norm_writes,norm_hit_ratio,norm_cycles\n";
    for (const auto& row : report.rows) {
        out << to_string(row.policy) << ',' << row.metrics.hits << ',' << row.metrics.misses
            << ',' << row.metrics.pcm_reads << ',' << row.metrics.pcm_writes << ','
            << row.metrics.flush_writes << ',' << format_double(hit_ratio(row.metrics)) << ','
            << row.stall << ',' << format_double(row.normalized.writes) << ','
            << format_double(row.normalized.hit_ratio) << ','
            << format_double(row.normalized.stall_cycles) << '\n';
    }
    return out.str();
}

inline std::string emit_json(const ComparisonReport& report) {
    nlohmann::ordered_json j;
    j["tool_version"] = report.tool_version;
    j["trace"] = report.trace_name;
    j["seed"] = report.seed;
    j["config"] = {{"num_sets", report.config_echo.num_sets},
                   {"num_ways", report.config_echo.num_ways},
                   {"line_size_bytes", report.config_echo.line_size_bytes},
                   {"flush_at_end", report.config_echo.flush_at_end}};
    j["cost_model"] = {{"hit_cycles", report.cost.hit_cycles},
                       {"read_latency_cycles", report.cost.read_latency_cycles},
                       {"write_latency_cycles", report.cost.write_latency_cycles}};
    j["trace_stats"] = {{"total_accesses", report.stats.total_accesses},
                        {"write_fraction", report.stats.write_fraction},
                        {"unique_lines", report.stats.unique_lines},
                        {"cold_accesses", report.stats.cold_accesses}};
    j["policies"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        j["policies"].push_back({{"policy", to_string(row.policy)},
                                 {"hits", row.metrics.hits},
                                 {"misses", row.metrics.misses},
                                 {"pcm_reads", row.metrics.pcm_reads},
                                 {"pcm_writes", row.metrics.pcm_writes},
                                 {"flush_writes", row.metrics.flush_writes},
                                 {"hit_ratio", hit_ratio(row.metrics)},
                                 {"stall_cycles", row.stall},
                                 {"norm_writes", row.normalized.writes},
                                 {"norm_hit_ratio", row.normalized.hit_ratio},
                                 {"norm_cycles", row.normalized.stall_cycles}});
    }
    return j.dump(2) + "\n";
}

inline void write_report_file(const std::string& content, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace macsim
