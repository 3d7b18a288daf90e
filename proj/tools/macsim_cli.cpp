// Trace-driven LLC replacement-policy simulator front end.
//
// Subcommands:
//   gen      write a synthetic trace to a file
//   stats    print statistics of a trace file
//   run      replay one trace under one policy
//   compare  run several policies on one trace, normalized to LRU
//
// Exit codes: 0 ok, 1 usage error, 2 runtime error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "macsim/report.hpp"
#include "macsim/trace.hpp"

namespace {

struct GenOptions {
    std::string generator = "zipf";
    uint64_t lines = 4096;
    uint64_t stride = 64;
    std::string scan_kind = "R";
    uint64_t hot_lines = 1024;
    uint64_t cold_lines = 64;
    uint64_t iterations = 100;
    uint64_t accesses = 100000;
    double zipf_s = 0.8;
    double write_fraction = 0.3;
    uint64_t offset_jitter = 0;
};

void add_gen_flags(CLI::App* cmd, GenOptions& g) {
    cmd->add_option("--gen", g.generator, "Generator: scan, loop, zipf")
        ->check(CLI::IsMember({"scan", "loop", "zipf"}));
    cmd->add_option("--lines", g.lines, "scan/zipf: number of distinct lines");
    cmd->add_option("--stride", g.stride, "scan: stride in bytes");
    cmd->add_option("--scan-kind", g.scan_kind, "scan: R or W")
        ->check(CLI::IsMember({"R", "W"}));
    cmd->add_option("--hot-lines", g.hot_lines, "loop: hot working-set lines");
    cmd->add_option("--cold-lines", g.cold_lines, "loop: single-use lines per iteration");
    cmd->add_option("--iterations", g.iterations, "loop: iterations");
    cmd->add_option("--accesses", g.accesses, "zipf: total accesses");
    cmd->add_option("--zipf-s", g.zipf_s, "zipf: skew exponent (0 = uniform)");
    cmd->add_option("--write-fraction", g.write_fraction, "loop/zipf: probability of a write");
    cmd->add_option("--offset-jitter", g.offset_jitter,
                    "loop/zipf: random intra-line offset bound in bytes");
}

macsim::Trace generate(const GenOptions& g, uint64_t seed, uint64_t line_size) {
    using namespace macsim;
    if (g.generator == "scan") {
        return gen_scan(g.lines, g.stride,
                        g.scan_kind == "W" ? AccessKind::Write : AccessKind::Read);
    }
    if (g.generator == "loop") {
        return gen_loop_working_set(g.hot_lines, g.cold_lines, g.iterations, g.write_fraction,
                                    seed, line_size, g.offset_jitter);
    }
    return gen_zipf_mixed(g.lines, g.accesses, g.zipf_s, g.write_fraction, seed, line_size,
                          g.offset_jitter);
}

macsim::Trace load_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    return macsim::read_trace(in, path);
}

struct GeometryOptions {
    uint32_t ways = 16;
    uint32_t line_size = 64;
    uint32_t size_kb = 512;
    uint32_t sets = 0;  // 0 = derive from size_kb
};

void add_geometry_flags(CLI::App* cmd, GeometryOptions& geo) {
    cmd->add_option("--ways", geo.ways, "Associativity (default 16)");
    cmd->add_option("--line-size", geo.line_size, "Line size in bytes (default 64)");
    cmd->add_option("--size-kb", geo.size_kb, "Total capacity in KiB (default 512)");
    cmd->add_option("--sets", geo.sets, "Set count (overrides --size-kb)");
}

uint32_t resolve_sets(const GeometryOptions& geo) {
    if (geo.sets != 0) return geo.sets;
    const uint64_t bytes = uint64_t{geo.size_kb} * 1024;
    const uint64_t per_set = uint64_t{geo.ways} * geo.line_size;
    if (per_set == 0 || bytes % per_set != 0)
        throw std::runtime_error("capacity not divisible by ways * line size");
    return static_cast<uint32_t>(bytes / per_set);
}

struct PolicyParamOptions {
    int64_t rrpv_bits = 2;
    int64_t write_weight = 10;
    int64_t dueling_sets = 32;
    int64_t psel_bits = 10;
    int64_t subblock_bytes = 8;
    int64_t brrip_epsilon = 32;
};

void add_policy_param_flags(CLI::App* cmd, PolicyParamOptions& p) {
    cmd->add_option("--rrpv-bits", p.rrpv_bits, "RRIP counter width (default 2)");
    cmd->add_option("--write-weight", p.write_weight, "DRRIPW PSEL step per dirty eviction");
    cmd->add_option("--dueling-sets", p.dueling_sets, "DRRIPW dedicated sets per flavor");
    cmd->add_option("--psel-bits", p.psel_bits, "DRRIPW PSEL width");
    cmd->add_option("--subblock-size", p.subblock_bytes, "LDF sub-block size in bytes");
    cmd->add_option("--brrip-epsilon", p.brrip_epsilon, "BRRIP 1/epsilon denominator");
}

macsim::PolicyParams to_params(const PolicyParamOptions& p) {
    return {{"rrpv_bits", p.rrpv_bits},
            {"write_weight", p.write_weight},
            {"dueling_sets", p.dueling_sets},
            {"psel_bits", p.psel_bits},
            {"subblock_bytes", p.subblock_bytes},
            {"brrip_epsilon_denominator", p.brrip_epsilon}};
}

void write_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
    } else {
        macsim::write_report_file(content, out_path);
    }
}

std::string metrics_json(const macsim::RunResult& r, const macsim::CostModel& cost) {
    nlohmann::ordered_json j;
    j["hits"] = r.metrics.hits;
    j["misses"] = r.metrics.misses;
    j["pcm_reads"] = r.metrics.pcm_reads;
    j["pcm_writes"] = r.metrics.pcm_writes;
    j["flush_writes"] = r.metrics.flush_writes;
    j["accesses"] = r.metrics.accesses;
    j["hit_ratio"] = macsim::hit_ratio(r.metrics);
    j["stall_cycles"] = macsim::stall_cycles(r.metrics, cost);
    return j.dump(2) + "\n";
}

std::string metrics_csv(const macsim::RunResult& r, const macsim::CostModel& cost,
                        const std::string& policy) {
    std::ostringstream out;
    out << "policy,hits,misses,pcm_reads,pcm_writes,flush_writes,hit_ratio,stall_cycles\n";
    out << policy << ',' << r.metrics.hits << ',' << r.metrics.misses << ','
        << r.metrics.pcm_reads << ',' << r.metrics.pcm_writes << ',' << r.metrics.flush_writes
        << ',' << macsim::format_double(macsim::hit_ratio(r.metrics)) << ','
        << macsim::stall_cycles(r.metrics, cost) << '\n';
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace-driven LLC simulator for write-aware replacement policies"};
    app.require_subcommand(1);

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic trace");
    GenOptions gen_opts;
    uint64_t gen_seed = 1;
    uint64_t gen_line_size = 64;
    std::string gen_out = "-";
    add_gen_flags(gen_cmd, gen_opts);
    gen_cmd->add_option("--seed", gen_seed, "Random seed");
    gen_cmd->add_option("--line-size", gen_line_size, "Line size used for address layout");
    gen_cmd->add_option("--out", gen_out, "Output file (- for stdout)");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Print statistics of a trace file");
    std::string stats_trace;
    uint64_t stats_line_size = 64;
    stats_cmd->add_option("--trace", stats_trace, "Trace file")->required();
    stats_cmd->add_option("--line-size", stats_line_size, "Line size in bytes");

    // run
    auto* run_cmd = app.add_subcommand("run", "Replay one trace under one policy");
    std::string run_policy = "LRU";
    std::string run_trace;
    GenOptions run_gen;
    bool run_use_gen = false;
    GeometryOptions run_geo;
    PolicyParamOptions run_params;
    uint64_t run_seed = 1;
    std::string run_format = "json";
    std::string run_out = "-";
    bool run_flush = false;
    bool run_count_flush = false;
    run_cmd->add_option("--policy", run_policy, "LRU, SRRIP, BRRIP, DRRIPW, LDF, RWA, MAC");
    run_cmd->add_option("--trace", run_trace, "Trace file");
    add_gen_flags(run_cmd, run_gen);
    run_cmd->add_flag("--use-gen", run_use_gen, "Use the generator flags instead of --trace");
    add_geometry_flags(run_cmd, run_geo);
    add_policy_param_flags(run_cmd, run_params);
    run_cmd->add_option("--seed", run_seed, "Random seed");
    run_cmd->add_option("--format", run_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    run_cmd->add_option("--out", run_out, "Output file (- for stdout)");
    run_cmd->add_flag("--flush-at-end", run_flush, "Drain dirty lines when the trace ends");
    run_cmd->add_flag("--count-flush-writes", run_count_flush,
                      "Include flush writes in pcm_writes (sensitivity)");

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "Compare policies on one trace");
    std::vector<std::string> cmp_policies = {"LRU", "SRRIP", "BRRIP", "DRRIPW",
                                             "LDF", "RWA",   "MAC"};
    std::string cmp_trace;
    GenOptions cmp_gen;
    bool cmp_use_gen = false;
    GeometryOptions cmp_geo;
    PolicyParamOptions cmp_params;
    uint64_t cmp_seed = 1;
    std::string cmp_format = "csv";
    std::string cmp_out = "-";
    bool cmp_flush = false;
    bool cmp_count_flush = false;
    bool cmp_serial = false;
    cmp_cmd->add_option("--policies", cmp_policies, "Policies to compare")->delimiter(',');
    cmp_cmd->add_option("--trace", cmp_trace, "Trace file");
    add_gen_flags(cmp_cmd, cmp_gen);
    cmp_cmd->add_flag("--use-gen", cmp_use_gen, "Use the generator flags instead of --trace");
    add_geometry_flags(cmp_cmd, cmp_geo);
    add_policy_param_flags(cmp_cmd, cmp_params);
    cmp_cmd->add_option("--seed", cmp_seed, "Random seed");
    cmp_cmd->add_option("--format", cmp_format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmp_cmd->add_option("--out", cmp_out, "Output file (- for stdout)");
    cmp_cmd->add_flag("--flush-at-end", cmp_flush, "Drain dirty lines when the trace ends");
    cmp_cmd->add_flag("--count-flush-writes", cmp_count_flush,
                      "Include flush writes in pcm_writes (sensitivity)");
    cmp_cmd->add_flag("--serial", cmp_serial, "Run policies one at a time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen_cmd->parsed()) {
            macsim::Trace t = generate(gen_opts, gen_seed, gen_line_size);
            std::ostringstream buf;
            macsim::write_trace(buf, t);
            write_output(buf.str(), gen_out);
            return 0;
        }

        if (stats_cmd->parsed()) {
            macsim::Trace t = load_trace_file(stats_trace);
            macsim::TraceStats s = macsim::trace_stats(t, stats_line_size);
            nlohmann::ordered_json j;
            j["total_accesses"] = s.total_accesses;
            j["write_fraction"] = s.write_fraction;
            j["unique_lines"] = s.unique_lines;
            j["working_set_lines"] = s.working_set_lines;
            j["cold_accesses"] = s.cold_accesses;
            j["reuse_distance_cap"] = s.reuse_distance_cap;
            j["reuse_distance_histogram"] = s.reuse_distance_histogram;
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        if (run_cmd->parsed()) {
            if (run_trace.empty() == !run_use_gen)
                throw std::runtime_error("give exactly one trace source: --trace or --use-gen");
            auto policy = macsim::parse_policy_id(run_policy);
            if (!policy) throw std::runtime_error("unknown policy: " + run_policy);
            macsim::ExperimentSpec spec;
            spec.config.num_sets = resolve_sets(run_geo);
            spec.config.num_ways = run_geo.ways;
            spec.config.line_size_bytes = run_geo.line_size;
            spec.config.policy_id = *policy;
            spec.config.policy_params = to_params(run_params);
            spec.config.flush_at_end = run_flush;
            spec.include_flush_in_writes = run_count_flush;
            spec.seed = run_seed;
            macsim::Trace t = run_use_gen ? generate(run_gen, run_seed, run_geo.line_size)
                                          : load_trace_file(run_trace);
            macsim::RunResult r = macsim::run_experiment(spec, t);
            write_output(run_format == "csv" ? metrics_csv(r, spec.cost, run_policy)
                                             : metrics_json(r, spec.cost),
                         run_out);
            return 0;
        }

        // compare
        if (cmp_trace.empty() == !cmp_use_gen)
            throw std::runtime_error("give exactly one trace source: --trace or --use-gen");
        std::vector<macsim::PolicyId> ids;
        for (const auto& name : cmp_policies) {
            auto p = macsim::parse_policy_id(name);
            if (!p) throw std::runtime_error("unknown policy: " + name);
            ids.push_back(*p);
        }
        macsim::ExperimentSpec spec;
        spec.config.num_sets = resolve_sets(cmp_geo);
        spec.config.num_ways = cmp_geo.ways;
        spec.config.line_size_bytes = cmp_geo.line_size;
        spec.config.policy_params = to_params(cmp_params);
        spec.config.flush_at_end = cmp_flush;
        spec.include_flush_in_writes = cmp_count_flush;
        spec.seed = cmp_seed;
        macsim::Trace t = cmp_use_gen ? generate(cmp_gen, cmp_seed, cmp_geo.line_size)
                                      : load_trace_file(cmp_trace);
        macsim::ComparisonReport report = macsim::compare(ids, t, spec, !cmp_serial);
        write_output(cmp_format == "json" ? macsim::emit_json(report)
                                          : macsim::emit_csv(report),
                     cmp_out);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
