#include "finegrain/scenario.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "finegrain/stats.hpp"

namespace fg {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& bytes,
                RunManifest& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << bytes;
    manifest.output_digests[path.filename().string()] = fnv1a_hex(bytes);
}

PureState initial_state_from(const json& j, const std::vector<int>& dims) {
    if (!j.contains("initial") || j.at("initial").is_string()) {
        // default / named initial states
        const std::string name =
            j.contains("initial") ? j.at("initial").get<std::string>() : "zero";
        if (name == "zero")
            return PureState::basis_state(dims, std::vector<int>(dims.size(), 0));
        if (name == "uniform") {
            const std::int64_t d = total_dimension(dims);
            return PureState(dims, Vec::Constant(d, 1.0 / std::sqrt(double(d))));
        }
        throw schema_error("unknown named initial state: " + name);
    }
    PureState s = pure_state_from_json(j.at("initial"));
    if (s.dims() != dims) throw schema_error("initial state dims do not match the Hamiltonian");
    return s;
}

// -- mode runners ----------------------------------------------------------

void run_estimate(const Scenario& sc, const RunOptions& opts, RunManifest& manifest) {
    std::vector<EstimateReport> reports;
    if (!sc.raw.contains("names") || sc.raw.at("names").is_string()) {
        reports = run_all_estimates(opts.constants);
    } else {
        for (const auto& jn : sc.raw.at("names")) {
            const std::string name = jn.get<std::string>();
            bool found = false;
            for (const auto& entry : estimator_registry()) {
                if (entry.name != name) continue;
                auto params = entry.defaults;
                if (sc.raw.contains("params"))
                    for (const auto& [k, v] : sc.raw.at("params").items())
                        if (params.count(k)) params[k] = v.get<double>();
                auto rs = entry.run(params, opts.constants);
                reports.insert(reports.end(), rs.begin(), rs.end());
                found = true;
                break;
            }
            if (!found) throw schema_error("unknown estimate name: " + name);
        }
    }

    json out = json::array();
    for (const auto& r : reports) out.push_back(to_json(r));
    write_file(opts.out_dir / "estimates.json", out.dump(2) + "\n", manifest);

    std::ostringstream csv;
    csv << "# schema=estimates/1\n";
    csv << "name,value_log10,unit,quoted_log10,agreement_log10,flagged\n";
    for (const auto& r : reports) {
        csv << r.name << ',' << fmt_double(r.value.log10()) << ',' << to_string(r.value.unit())
            << ',' << (r.quoted_value ? fmt_double(r.quoted_value->log10()) : "") << ','
            << (r.agreement_log10 ? fmt_double(*r.agreement_log10) : "") << ','
            << (r.flagged ? "1" : "0") << '\n';
    }
    write_file(opts.out_dir / "estimates.csv", csv.str(), manifest);
}

void run_simulate(const Scenario& sc, const RunOptions& opts, RunManifest& manifest) {
    const HamiltonianSpec h = hamiltonian_from_json(sc.raw.at("hamiltonian"));
    const auto dims = h.dims();
    PureState state = initial_state_from(sc.raw, dims);
    const UnitaryPropagator prop(h, sc.units);
    std::vector<int> cut = sc.raw.value("entropy_cut", std::vector<int>{0});
    const double tol = sc.raw.value("separability_tol", 1e-10);

    std::ostringstream csv;
    csv << "# schema=timeline/1 units=" << sc.units.label << '\n';
    csv << "t,norm,entanglement_entropy_bits,largest_block\n";
    auto emit = [&](double t, const PureState& s) {
        const double entropy = dims.size() > 1 ? entanglement_entropy(s, cut) : 0.0;
        const auto blocks = factorize(s, tol);
        csv << fmt_double(t) << ',' << fmt_double(s.amps().norm()) << ',' << fmt_double(entropy)
            << ',' << blocks.largest_block() << '\n';
    };
    emit(0.0, state);
    double t = 0.0;
    while (t < sc.t_total - 1e-15 * sc.t_total) {
        const double step = std::min(sc.dt, sc.t_total - t);
        state = prop.evolve(state, step);
        t += step;
        emit(t, state);
    }
    write_file(opts.out_dir / "timeline.csv", csv.str(), manifest);
}

void run_lindblad(const Scenario& sc, const RunOptions& opts, RunManifest& manifest) {
    const LindbladSpec spec = lindblad_from_json(sc.raw.at("lindblad"));
    const auto dims = spec.h0.dims();
    DensityMatrix rho = [&] {
        if (sc.raw.contains("initial_rho")) {
            Mat m = Mat::Zero(total_dimension(dims), total_dimension(dims));
            const auto& jm = sc.raw.at("initial_rho");
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                for (Eigen::Index c = 0; c < m.cols(); ++c) {
                    const auto& cell = jm[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
                    m(r, c) = cxd(cell[0].get<double>(), cell[1].get<double>());
                }
            return DensityMatrix(dims, std::move(m));
        }
        return DensityMatrix::from_pure(initial_state_from(sc.raw, dims));
    }();

    const int snapshots = sc.raw.value("steps_per_row", 1);
    std::ostringstream csv;
    csv << "# schema=timeline/1 units=" << sc.units.label << '\n';
    csv << "t,trace,purity,max_offdiag\n";
    auto emit = [&](double t, const DensityMatrix& r) {
        double offdiag = 0.0;
        for (Eigen::Index i = 0; i < r.dim(); ++i)
            for (Eigen::Index j = 0; j < r.dim(); ++j)
                if (i != j) offdiag = std::max(offdiag, std::abs(r.mat()(i, j)));
        csv << fmt_double(t) << ',' << fmt_double(r.mat().trace().real()) << ','
            << fmt_double((r.mat() * r.mat()).trace().real()) << ',' << fmt_double(offdiag)
            << '\n';
    };
    emit(0.0, rho);
    double t = 0.0;
    while (t < sc.t_total - 1e-15 * sc.t_total) {
        const double step = std::min(sc.dt * snapshots, sc.t_total - t);
        rho = lindblad_evolve(rho, spec, step, sc.dt, sc.units);
        t += step;
        emit(t, rho);
    }
    write_file(opts.out_dir / "timeline.csv", csv.str(), manifest);
}

void run_lattice(const Scenario& sc, const RunOptions& opts, RunManifest& manifest) {
    const auto& jl = sc.raw.at("lattice");
    const Lattice lattice{jl.at("n").get<int>(), jl.at("dx").get<double>()};
    const double lambda = sc.raw.value("lambda", 0.0);
    const double mass = sc.raw.contains("mass") && sc.raw.at("mass").is_string()
                            ? std::numeric_limits<double>::infinity()
                            : sc.raw.value("mass", 1.0);
    const double sigma = sc.raw.value("sigma", 2.0 * lattice.dx);
    const int snapshots = sc.raw.value("snapshots", 4);

    // Gaussian packet, lattice-normalized.
    const auto x = lattice.positions();
    Vec psi(lattice.n);
    for (int i = 0; i < lattice.n; ++i)
        psi(i) = std::exp(-x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)] /
                          (2.0 * sigma * sigma));
    psi /= psi.norm() * std::sqrt(lattice.dx);
    LatticeState state{lattice, psi * psi.adjoint()};

    auto snapshot_csv = [&](const LatticeState& s) {
        std::ostringstream csv;
        csv << "# schema=lattice_snapshot/1 units=" << sc.units.label << '\n';
        csv << "x,xp,re,im\n";
        for (int i = 0; i < lattice.n; ++i)
            for (int j = 0; j < lattice.n; ++j)
                csv << fmt_double(x[static_cast<std::size_t>(i)]) << ','
                    << fmt_double(x[static_cast<std::size_t>(j)]) << ','
                    << fmt_double(s.rho(i, j).real()) << ',' << fmt_double(s.rho(i, j).imag())
                    << '\n';
        return csv.str();
    };

    write_file(opts.out_dir / "snapshot_0.csv", snapshot_csv(state), manifest);
    const double slice = sc.t_total / snapshots;
    for (int k = 1; k <= snapshots; ++k) {
        state = decohered_free_evolution(state, mass, lambda, slice, sc.dt, sc.units);
        write_file(opts.out_dir / ("snapshot_" + std::to_string(k) + ".csv"),
                   snapshot_csv(state), manifest);
    }
}

struct MeasureOutput {
    std::vector<std::vector<TransitionRecord>> per_trajectory;
};

void run_measure(const Scenario& sc, const RunOptions& opts, RunManifest& manifest) {
    manifest.trajectory_seeds = derive_trajectory_seeds(manifest.master_seed,
                                                        static_cast<std::size_t>(sc.trajectory_count));

    const bool single_shot = sc.raw.contains("chain");
    PureState initial = [&] {
        if (single_shot) {
            const ChainSpec chain = chain_from_json(sc.raw.at("chain"));
            PureState sys = sc.raw.contains("system_state")
                                ? pure_state_from_json(sc.raw.at("system_state"))
                                : PureState::basis_state({chain.system_dim}, {0});
            return premeasure(sys, chain);
        }
        const HamiltonianSpec h = hamiltonian_from_json(sc.raw.at("hamiltonian"));
        return initial_state_from(sc.raw, h.dims());
    }();
    TransitionConfig cfg = transition_config_from_json(
        sc.raw.contains("transition") ? sc.raw.at("transition") : json::object(),
        initial.dims());

    std::optional<HamiltonianSpec> h;
    if (!single_shot) h = hamiltonian_from_json(sc.raw.at("hamiltonian"));

    MeasureOutput out;
    out.per_trajectory.resize(static_cast<std::size_t>(sc.trajectory_count));

    auto run_one = [&](std::size_t idx) {
        Xoshiro256ss rng(manifest.trajectory_seeds[idx]);
        if (single_shot) {
            auto projected = information_transition(initial, cfg, 0.0, rng, opts.constants);
            out.per_trajectory[idx].push_back(std::move(projected.second));
        } else {
            auto result = run_trajectory(initial, *h, cfg, sc.t_total, sc.dt, rng, sc.units,
                                         opts.constants);
            out.per_trajectory[idx] = std::move(result.records);
        }
    };

    if (opts.threads > 1) {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int nthreads = std::min<int>(opts.threads, sc.trajectory_count);
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int w = 0; w < nthreads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < out.per_trajectory.size();
                     i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& th : pool) th.join();
    } else {
        for (std::size_t i = 0; i < out.per_trajectory.size(); ++i) run_one(i);
    }

    // Records, merged in trajectory order so the bytes are schedule-free.
    std::ostringstream jsonl;
    std::map<std::int64_t, std::int64_t> counts;
    for (std::size_t i = 0; i < out.per_trajectory.size(); ++i)
        for (const auto& rec : out.per_trajectory[i]) {
            json j = to_json(rec);
            j["trajectory"] = i;
            j["units"] = sc.units.label;
            jsonl << j.dump() << '\n';
            ++counts[rec.outcome_index];
        }
    write_file(opts.out_dir / "records.jsonl", jsonl.str(), manifest);

    std::int64_t total = 0;
    for (const auto& [label, c] : counts) total += c;
    std::ostringstream outcomes;
    outcomes << "# schema=outcomes/1 units=" << sc.units.label << '\n';
    outcomes << "outcome,count,frequency\n";
    for (const auto& [label, c] : counts)
        outcomes << label << ',' << c << ','
                 << fmt_double(static_cast<double>(c) / static_cast<double>(total)) << '\n';
    write_file(opts.out_dir / "outcomes.csv", outcomes.str(), manifest);

    std::vector<std::vector<double>> times(out.per_trajectory.size());
    for (std::size_t i = 0; i < out.per_trajectory.size(); ++i)
        for (const auto& rec : out.per_trajectory[i]) times[i].push_back(rec.time);
    const Histogram h_tau = tau_u_histogram(times);
    std::ostringstream tau_csv;
    tau_csv << "# schema=tau_u/1 units=" << sc.units.label << '\n';
    tau_csv << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b + 1 < h_tau.edges.size(); ++b)
        tau_csv << fmt_double(h_tau.edges[b]) << ',' << fmt_double(h_tau.edges[b + 1]) << ','
                << h_tau.counts[b] << '\n';
    write_file(opts.out_dir / "tau_u.csv", tau_csv.str(), manifest);

    json summary = {{"schema", "measure_summary/1"},
                    {"transitions", total},
                    {"tau_u_mean", h_tau.mean},
                    {"tau_u_variance", h_tau.variance},
                    {"tau_u_samples", h_tau.n},
                    {"units", sc.units.label}};
    if (sc.raw.contains("expected") && !counts.empty()) {
        const auto expected = sc.raw.at("expected").get<std::vector<double>>();
        std::vector<std::int64_t> observed(expected.size(), 0);
        if (sc.raw.contains("expected_marginal_factor")) {
            // Group outcome labels by one factor's digit (e.g. the measured
            // system), summing over the micro-outcomes.
            const int factor = sc.raw.at("expected_marginal_factor").get<int>();
            const auto& dims = initial.dims();
            for (const auto& [label, c] : counts) {
                const int digit = unravel_index(dims, label).at(static_cast<std::size_t>(factor));
                if (digit < static_cast<int>(expected.size()))
                    observed[static_cast<std::size_t>(digit)] += c;
            }
        } else {
            for (const auto& [label, c] : counts)
                if (label >= 0 && label < static_cast<std::int64_t>(expected.size()))
                    observed[static_cast<std::size_t>(label)] = c;
        }
        const auto chi = born_chi_squared(observed, expected);
        summary["chi_squared"] = chi.statistic;
        summary["p_value"] = chi.p_value;
        summary["dof"] = chi.dof;
    }
    write_file(opts.out_dir / "summary.json", summary.dump(2) + "\n", manifest);
}

} // namespace

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

Scenario::Mode Scenario::mode_from_string(const std::string& s) {
    if (s == "estimate") return Mode::estimate;
    if (s == "simulate") return Mode::simulate;
    if (s == "lindblad") return Mode::lindblad;
    if (s == "lattice") return Mode::lattice;
    if (s == "measure") return Mode::measure;
    throw schema_error("unknown scenario mode: " + s);
}

std::string Scenario::mode_to_string(Mode m) {
    switch (m) {
        case Mode::estimate: return "estimate";
        case Mode::simulate: return "simulate";
        case Mode::lindblad: return "lindblad";
        case Mode::lattice: return "lattice";
        case Mode::measure: return "measure";
    }
    return "?";
}

Scenario Scenario::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open scenario: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw schema_error(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (j.value("schema", "") != "scenario/1")
        throw schema_error("scenario schema must be \"scenario/1\"");

    Scenario sc;
    sc.raw = j;
    sc.source_path = path;
    sc.id = j.value("id", path.stem().string());
    sc.mode = mode_from_string(j.value("mode", ""));
    sc.master_seed = j.value("seed", std::uint64_t{1});
    sc.trajectory_count = j.value("trajectory_count", 1);
    if (sc.trajectory_count < 1) throw schema_error("trajectory_count must be >= 1");
    sc.t_total = j.value("t_total", 1.0);
    sc.dt = j.value("dt", 0.01);
    const std::string units = j.value("units", "si");
    if (units == "si")
        sc.units = Units::si();
    else if (units == "natural")
        sc.units = Units::natural();
    else
        throw schema_error("units must be \"si\" or \"natural\"");
    return sc;
}

json RunManifest::to_json() const {
    return {{"schema", "run_manifest/1"},
            {"scenario_id", scenario_id},
            {"scenario_path", scenario_path},
            {"tool_version", tool_version},
            {"constants_version", constants_version},
            {"units", units_label},
            {"master_seed", master_seed},
            {"trajectory_seeds", trajectory_seeds},
            {"started", started},
            {"finished", finished},
            {"outputs", output_digests}};
}

RunManifest RunManifest::from_json(const json& j) {
    RunManifest m;
    m.scenario_id = j.value("scenario_id", "");
    m.scenario_path = j.value("scenario_path", "");
    m.tool_version = j.value("tool_version", "");
    m.constants_version = j.value("constants_version", "");
    m.units_label = j.value("units", "si");
    m.master_seed = j.value("master_seed", std::uint64_t{1});
    m.trajectory_seeds = j.value("trajectory_seeds", std::vector<std::uint64_t>{});
    m.started = j.value("started", "");
    m.finished = j.value("finished", "");
    m.output_digests = j.value("outputs", std::map<std::string, std::string>{});
    return m;
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open manifest: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw schema_error(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (j.value("schema", "") != "run_manifest/1")
        throw schema_error("manifest schema must be \"run_manifest/1\"");
    return from_json(j);
}

RunManifest run_scenario(const std::filesystem::path& scenario_path, const RunOptions& opts) {
    const Scenario sc = Scenario::load(scenario_path);
    std::filesystem::create_directories(opts.out_dir);

    RunManifest manifest;
    manifest.scenario_id = sc.id;
    manifest.scenario_path = std::filesystem::absolute(scenario_path).string();
    manifest.constants_version = opts.constants.version;
    manifest.units_label = sc.units.label;
    manifest.master_seed = opts.seed_override.value_or(sc.master_seed);
    manifest.started = now_iso8601();

    switch (sc.mode) {
        case Scenario::Mode::estimate: run_estimate(sc, opts, manifest); break;
        case Scenario::Mode::simulate: run_simulate(sc, opts, manifest); break;
        case Scenario::Mode::lindblad: run_lindblad(sc, opts, manifest); break;
        case Scenario::Mode::lattice: run_lattice(sc, opts, manifest); break;
        case Scenario::Mode::measure: run_measure(sc, opts, manifest); break;
    }

    manifest.finished = now_iso8601();
    std::ofstream mout(opts.out_dir / "manifest.json");
    mout << manifest.to_json().dump(2) << '\n';
    return manifest;
}

ReplayResult replay(const std::filesystem::path& manifest_path, const RunOptions& opts) {
    const RunManifest original = RunManifest::load(manifest_path);
    RunOptions replay_opts = opts;
    replay_opts.seed_override = original.master_seed;

    ReplayResult result;
    result.manifest = run_scenario(original.scenario_path, replay_opts);
    result.digests_match = true;
    for (const auto& [file, digest] : original.output_digests) {
        const auto it = result.manifest.output_digests.find(file);
        if (it == result.manifest.output_digests.end() || it->second != digest) {
            result.digests_match = false;
            result.mismatches.push_back(file);
        }
    }
    return result;
}

} // namespace fg
