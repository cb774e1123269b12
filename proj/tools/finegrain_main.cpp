// finegrain CLI: estimators, scenario runs, record statistics, replay.
//
// Exit codes: 0 success, 1 runtime failure, 2 schema/config error,
// 3 numerical watchdog abort.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "finegrain/scenario.hpp"
#include "finegrain/stats.hpp"

namespace {

fg::PhysicalConstants resolve_constants(const std::string& cli_path) {
    if (!cli_path.empty()) return fg::load_constants(cli_path);
    if (const char* env = std::getenv("FINEGRAIN_CONSTANTS"); env && *env)
        return fg::load_constants(env);
    return {};
}

void print_report_table(const std::vector<fg::EstimateReport>& reports) {
    std::printf("%-26s %14s  %-12s %14s %10s  %s\n", "name", "value(log10)", "unit",
                "quoted(log10)", "gap", "flag/note");
    for (const auto& r : reports) {
        std::string quoted = "-", gap = "-";
        char buf[32];
        if (r.quoted_value) {
            std::snprintf(buf, sizeof(buf), "%.6g", r.quoted_value->log10());
            quoted = buf;
            std::snprintf(buf, sizeof(buf), "%.4g", *r.agreement_log10);
            gap = buf;
        }
        std::string tail = r.flagged ? "[flagged] " : "";
        tail += r.note;
        std::printf("%-26s %14.6g  %-12s %14s %10s  %s\n", r.name.c_str(), r.value.log10(),
                    fg::to_string(r.value.unit()).c_str(), quoted.c_str(), gap.c_str(),
                    tail.c_str());
    }
}

int run_estimate_command(const std::string& name,
                         const std::vector<std::string>& param_overrides,
                         const fg::PhysicalConstants& pc, const std::string& json_out) {
    std::map<std::string, double> overrides;
    for (const auto& kv : param_overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw fg::schema_error("estimate parameters take the form name=value: " + kv);
        overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }

    std::vector<fg::EstimateReport> reports;
    if (name == "all") {
        reports = fg::run_all_estimates(pc);
    } else {
        bool found = false;
        for (const auto& entry : fg::estimator_registry()) {
            if (entry.name != name) continue;
            auto params = entry.defaults;
            for (const auto& [k, v] : overrides) {
                if (!params.count(k))
                    throw fg::schema_error("estimate '" + name + "' has no parameter '" + k +
                                           "'");
                params[k] = v;
            }
            reports = entry.run(params, pc);
            found = true;
            break;
        }
        if (!found) {
            std::ostringstream known;
            for (const auto& entry : fg::estimator_registry()) known << "\n  " << entry.name;
            throw fg::schema_error("unknown estimate '" + name + "'; available:" + known.str());
        }
    }

    print_report_table(reports);
    if (!json_out.empty()) {
        fg::json arr = fg::json::array();
        for (const auto& r : reports) arr.push_back(fg::to_json(r));
        std::ofstream out(json_out);
        out << arr.dump(2) << '\n';
    }
    return 0;
}

int run_stats_command(const std::string& records_path, const std::vector<double>& expected,
                      const std::vector<int>& dims, int marginal_factor) {
    std::ifstream in(records_path);
    if (!in) throw fg::schema_error("cannot open records file: " + records_path);

    std::map<std::int64_t, std::int64_t> counts;
    std::map<std::int64_t, std::vector<double>> times_by_trajectory;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        fg::json j;
        try {
            j = fg::json::parse(line);
        } catch (const fg::json::exception& e) {
            throw fg::schema_error(std::string("bad record line: ") + e.what());
        }
        ++counts[j.value("outcome_index", std::int64_t{0})];
        times_by_trajectory[j.value("trajectory", std::int64_t{0})].push_back(
            j.value("time", 0.0));
    }

    std::int64_t total = 0;
    for (const auto& [label, c] : counts) total += c;
    std::printf("records: %lld transitions, %zu distinct outcomes\n",
                static_cast<long long>(total), counts.size());

    if (!expected.empty()) {
        std::vector<std::int64_t> observed(expected.size(), 0);
        for (const auto& [label, c] : counts) {
            std::int64_t digit = label;
            if (!dims.empty() && marginal_factor >= 0)
                digit = fg::unravel_index(dims, label).at(static_cast<std::size_t>(marginal_factor));
            if (digit >= 0 && digit < static_cast<std::int64_t>(expected.size()))
                observed[static_cast<std::size_t>(digit)] += c;
        }
        const auto chi = fg::born_chi_squared(observed, expected);
        std::printf("chi-squared: statistic=%.6f dof=%d p=%.6g\n", chi.statistic, chi.dof,
                    chi.p_value);
    }

    std::vector<std::vector<double>> times;
    times.reserve(times_by_trajectory.size());
    for (auto& [traj, ts] : times_by_trajectory) times.push_back(std::move(ts));
    const fg::Histogram h = fg::tau_u_histogram(times);
    if (h.n == 0) {
        std::printf("tau_u: no transitions\n");
    } else {
        std::printf("tau_u: n=%lld mean=%.6g variance=%.6g\n", static_cast<long long>(h.n),
                    h.mean, h.variance);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finegrain: resource-bounded quantum dynamics calculator and simulator"};
    app.require_subcommand(1);

    std::string constants_path;
    app.add_option("--constants", constants_path, "JSON constants table (or FINEGRAIN_CONSTANTS)");

    // estimate
    auto* est = app.add_subcommand("estimate", "run a named estimator (or 'all')");
    std::string est_name = "all";
    std::vector<std::string> est_params;
    std::string est_json;
    est->add_option("name", est_name, "estimator name or 'all'");
    est->add_option("--param", est_params, "override, e.g. --param mu=600")->take_all();
    est->add_option("--json", est_json, "also write reports to this JSON file");

    // scenario-backed subcommands share flags
    std::string scenario_path, out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "master seed override")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--threads", threads, "trajectory worker threads");
    };
    auto* sim = app.add_subcommand("simulate", "pure unitary evolution timeline");
    add_run_flags(sim);
    auto* lin = app.add_subcommand("lindblad", "open-system master-equation run");
    add_run_flags(lin);
    auto* lat = app.add_subcommand("lattice", "position-space decoherence run");
    add_run_flags(lat);
    auto* mea = app.add_subcommand("measure", "trajectory ensemble with transitions");
    add_run_flags(mea);

    // stats
    auto* sta = app.add_subcommand("stats", "chi-squared and tau_u stats over records");
    std::string records_path;
    std::vector<double> expected;
    std::vector<int> stat_dims;
    int marginal_factor = -1;
    sta->add_option("records", records_path, "records.jsonl from a measure run")->required();
    sta->add_option("--expected", expected, "expected outcome probabilities")->delimiter(',');
    sta->add_option("--dims", stat_dims, "subsystem dims for decoding outcome labels")
        ->delimiter(',');
    sta->add_option("--marginal-factor", marginal_factor, "group outcomes by this factor digit");

    // replay
    auto* rep = app.add_subcommand("replay", "re-run a manifest and verify digests");
    std::string manifest_path;
    rep->add_option("manifest", manifest_path, "manifest.json from a previous run")->required();
    rep->add_option("--out", out_dir, "output directory");
    rep->add_option("--threads", threads, "trajectory worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        const fg::PhysicalConstants pc = resolve_constants(constants_path);
        fg::RunOptions opts;
        opts.out_dir = out_dir;
        opts.constants = pc;
        opts.threads = threads;
        if (seed_set) opts.seed_override = seed;

        if (est->parsed()) return run_estimate_command(est_name, est_params, pc, est_json);
        if (sta->parsed())
            return run_stats_command(records_path, expected, stat_dims, marginal_factor);
        if (rep->parsed()) {
            const auto result = fg::replay(manifest_path, opts);
            if (result.digests_match) {
                std::printf("replay: all %zu output digests match\n",
                            result.manifest.output_digests.size());
                return 0;
            }
            std::printf("replay: DIGEST MISMATCH in:");
            for (const auto& f : result.mismatches) std::printf(" %s", f.c_str());
            std::printf("\n");
            return 1;
        }

        // simulate / lindblad / lattice / measure all run through the scenario
        // engine; the subcommand must match the file's mode.
        const fg::Scenario sc = fg::Scenario::load(scenario_path);
        const std::string want = app.get_subcommands().front()->get_name();
        if (fg::Scenario::mode_to_string(sc.mode) != want)
            throw fg::schema_error("scenario mode is '" + fg::Scenario::mode_to_string(sc.mode) +
                                   "' but the subcommand is '" + want + "'");
        const fg::RunManifest manifest = fg::run_scenario(scenario_path, opts);
        std::printf("run %s: %zu outputs under %s (seed %llu)\n", manifest.scenario_id.c_str(),
                    manifest.output_digests.size(), out_dir.c_str(),
                    static_cast<unsigned long long>(manifest.master_seed));
        return 0;
    } catch (const fg::schema_error& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return 2;
    } catch (const fg::watchdog_error& e) {
        std::fprintf(stderr, "numerical watchdog: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
