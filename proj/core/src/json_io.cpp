#include "finegrain/json_io.hpp"

#include <fstream>

namespace fg {

namespace {

json complex_to_json(const cxd& c) { return json::array({c.real(), c.imag()}); }

cxd complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw schema_error("complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw schema_error("matrix must be a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[r].size()) != cols)
            throw schema_error("matrix rows have inconsistent lengths");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

template <typename T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) throw schema_error(std::string("missing field: ") + key);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw schema_error(std::string("bad field '") + key + "': " + e.what());
    }
}

} // namespace

json to_json(const LogQuantity& q) {
    return {{"log10", q.log10()}, {"unit", to_string(q.unit())}};
}

LogQuantity log_quantity_from_json(const json& j) {
    return {require<double>(j, "log10"), unit_from_string(require<std::string>(j, "unit"))};
}

json to_json(const PureState& s) {
    json amps = json::array();
    for (Eigen::Index i = 0; i < s.amps().size(); ++i)
        amps.push_back(complex_to_json(s.amps()(i)));
    return {{"dims", s.dims()}, {"amps", std::move(amps)}};
}

PureState pure_state_from_json(const json& j) {
    const auto dims = require<std::vector<int>>(j, "dims");
    const auto& amps_json = j.at("amps");
    Vec amps(static_cast<Eigen::Index>(amps_json.size()));
    for (Eigen::Index i = 0; i < amps.size(); ++i)
        amps(i) = complex_from_json(amps_json[static_cast<std::size_t>(i)]);
    try {
        return PureState(dims, std::move(amps));
    } catch (const std::invalid_argument& e) {
        throw schema_error(std::string("bad state: ") + e.what());
    }
}

json to_json(const PhysicalConstants& pc) {
    return {{"hbar", pc.hbar}, {"h", pc.h},     {"t_P", pc.t_P}, {"c", pc.c},
            {"k_B", pc.k_B},   {"m_p", pc.m_p}, {"m_e", pc.m_e}, {"t_U", pc.t_U},
            {"version", pc.version}};
}

PhysicalConstants constants_from_json(const json& j) {
    PhysicalConstants pc;
    pc.hbar = j.value("hbar", pc.hbar);
    pc.h = j.value("h", pc.h);
    pc.t_P = j.value("t_P", pc.t_P);
    pc.c = j.value("c", pc.c);
    pc.k_B = j.value("k_B", pc.k_B);
    pc.m_p = j.value("m_p", pc.m_p);
    pc.m_e = j.value("m_e", pc.m_e);
    pc.t_U = j.value("t_U", pc.t_U);
    pc.version = j.value("version", std::string("custom"));
    return pc;
}

PhysicalConstants load_constants(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw schema_error("cannot open constants file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw schema_error(std::string("constants file is not valid JSON: ") + e.what());
    }
    return constants_from_json(j);
}

json to_json(const StabilityVerdict& v) {
    return {{"stable", v.stable},
            {"scenario", to_string(v.scenario)},
            {"required", to_json(v.required)},
            {"limit", to_json(v.limit)},
            {"margin_log10", v.margin_log10}};
}

json to_json(const HamiltonianSpec& h) {
    json j;
    if (const auto* d = std::get_if<HamiltonianSpec::Dense>(&h.kind)) {
        j["kind"] = "dense";
        j["dims"] = d->dims;
        j["matrix"] = matrix_to_json(d->matrix);
    } else if (const auto* q = std::get_if<HamiltonianSpec::QubitFlip>(&h.kind)) {
        j["kind"] = "qubit_flip";
        j["e0"] = q->e0;
        j["e1"] = q->e1;
    } else if (const auto* x = std::get_if<HamiltonianSpec::XChain>(&h.kind)) {
        j["kind"] = "x_chain";
        j["omegas"] = x->omegas;
    } else {
        const auto& fp = std::get<HamiltonianSpec::FreeParticle>(h.kind);
        j["kind"] = "free_particle";
        j["mass"] = fp.mass;
        j["lattice"] = {{"n", fp.lattice.n}, {"dx", fp.lattice.dx}};
    }
    return j;
}

HamiltonianSpec hamiltonian_from_json(const json& j) {
    const auto kind = require<std::string>(j, "kind");
    HamiltonianSpec h;
    if (kind == "dense") {
        h.kind = HamiltonianSpec::Dense{require<std::vector<int>>(j, "dims"),
                                        matrix_from_json(j.at("matrix"))};
    } else if (kind == "qubit_flip") {
        h.kind = HamiltonianSpec::QubitFlip{require<double>(j, "e0"), require<double>(j, "e1")};
    } else if (kind == "x_chain") {
        h.kind = HamiltonianSpec::XChain{require<std::vector<double>>(j, "omegas")};
    } else if (kind == "free_particle") {
        const auto& lat = j.at("lattice");
        h.kind = HamiltonianSpec::FreeParticle{
            require<double>(j, "mass"), Lattice{require<int>(lat, "n"), require<double>(lat, "dx")}};
    } else {
        throw schema_error("unknown hamiltonian kind: " + kind);
    }
    return h;
}

json to_json(const LindbladSpec& l) {
    json ops = json::array();
    for (const auto& op : l.collapse_ops) ops.push_back(matrix_to_json(op));
    return {{"h0", to_json(l.h0)}, {"collapse_ops", std::move(ops)}};
}

LindbladSpec lindblad_from_json(const json& j) {
    LindbladSpec l;
    l.h0 = hamiltonian_from_json(j.at("h0"));
    for (const auto& op : j.at("collapse_ops")) l.collapse_ops.push_back(matrix_from_json(op));
    return l;
}

json to_json(const ChainSpec& c) {
    json env_weights = json::array();
    for (const auto& w : c.environment.weights) env_weights.push_back(matrix_to_json(w));
    return {{"system_dim", c.system_dim},
            {"apparatus",
             {{"micro_dim", c.apparatus.micro_dim}, {"weights", matrix_to_json(c.apparatus.weights)}}},
            {"environment",
             {{"micro_dim", c.environment.micro_dim},
              {"weights", std::move(env_weights)},
              {"theta", c.environment.theta}}}};
}

ChainSpec chain_from_json(const json& j) {
    const int d = require<int>(j, "system_dim");
    const auto& app = j.at("apparatus");
    const auto& env = j.at("environment");
    const int m = require<int>(app, "micro_dim");
    const int q = require<int>(env, "micro_dim");
    const double theta = env.value("theta", 1.0);

    if (!app.contains("weights") && !env.contains("weights")) {
        ChainSpec c = ChainSpec::uniform(d, m, q, theta);
        return c;
    }
    ChainSpec c;
    c.system_dim = d;
    c.apparatus.micro_dim = m;
    c.apparatus.weights = app.contains("weights")
                              ? matrix_from_json(app.at("weights"))
                              : Mat::Constant(d, m, 1.0 / std::sqrt(double(m)));
    c.environment.micro_dim = q;
    c.environment.theta = theta;
    if (env.contains("weights")) {
        for (const auto& w : env.at("weights"))
            c.environment.weights.push_back(matrix_from_json(w));
    } else {
        c.environment.weights.assign(d, Mat::Constant(m, q, 1.0 / std::sqrt(double(q))));
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw schema_error(std::string("bad chain spec: ") + e.what());
    }
    return c;
}

json to_json(const TransitionBasis& b) {
    json factors = json::array();
    for (const auto& f : b.factors) {
        json jf = {{"measured", f.measured}};
        if (f.basis.size() != 0) jf["basis"] = matrix_to_json(f.basis);
        factors.push_back(std::move(jf));
    }
    return {{"id", b.id}, {"factors", std::move(factors)}};
}

TransitionBasis transition_basis_from_json(const json& j) {
    TransitionBasis b;
    b.id = require<std::string>(j, "id");
    for (const auto& jf : j.at("factors")) {
        TransitionBasis::Factor f;
        f.measured = jf.value("measured", true);
        if (jf.contains("basis")) f.basis = matrix_from_json(jf.at("basis"));
        b.factors.push_back(std::move(f));
    }
    return b;
}

json to_json(const TransitionConfig& c) {
    json j = {{"threshold_mode", c.threshold_mode == ThresholdMode::m1
                                     ? "m1"
                                     : (c.threshold_mode == ThresholdMode::m2 ? "m2" : "explicit")},
              {"mu", c.mu},
              {"rng_seed", c.rng_seed},
              {"separability_tol", c.separability_tol},
              {"force", c.force}};
    if (c.threshold_mode == ThresholdMode::explicit_bits)
        j["explicit_threshold_bits"] = c.explicit_threshold_bits;
    if (c.threshold_mode == ThresholdMode::m1) {
        j["energy_E"] = c.energy_E;
        j["coupling_J"] = c.coupling_J;
    }
    json bases = json::array();
    for (const auto& b : c.candidate_bases) bases.push_back(to_json(b));
    j["candidate_bases"] = std::move(bases);
    return j;
}

TransitionConfig transition_config_from_json(const json& j, const std::vector<int>& dims) {
    TransitionConfig c;
    const auto mode = j.value("threshold_mode", std::string("explicit"));
    if (mode == "m1")
        c.threshold_mode = ThresholdMode::m1;
    else if (mode == "m2")
        c.threshold_mode = ThresholdMode::m2;
    else if (mode == "explicit")
        c.threshold_mode = ThresholdMode::explicit_bits;
    else
        throw schema_error("unknown threshold_mode: " + mode);
    c.explicit_threshold_bits = j.value("explicit_threshold_bits", c.explicit_threshold_bits);
    c.mu = j.value("mu", c.mu);
    c.energy_E = j.value("energy_E", 0.0);
    c.coupling_J = j.value("coupling_J", 0.0);
    c.rng_seed = j.value("rng_seed", std::uint64_t{1});
    c.separability_tol = j.value("separability_tol", 1e-10);
    c.force = j.value("force", false);
    if (j.contains("candidate_bases")) {
        for (const auto& jb : j.at("candidate_bases"))
            c.candidate_bases.push_back(transition_basis_from_json(jb));
    } else {
        c.candidate_bases.push_back(TransitionBasis::computational(dims));
    }
    try {
        c.validate(dims);
    } catch (const std::invalid_argument& e) {
        throw schema_error(std::string("bad transition config: ") + e.what());
    }
    return c;
}

json to_json(const TransitionRecord& r) {
    return {{"schema", "transition_record/1"},
            {"time", r.time},
            {"trigger", to_json(r.trigger)},
            {"basis_id", r.basis_id},
            {"basis_index", r.basis_index},
            {"outcome_index", r.outcome_index},
            {"probability", r.probability},
            {"pre_M", to_json(r.pre_memory)},
            {"post_M", to_json(r.post_memory)},
            {"rng", Xoshiro256ss::name()},
            {"seed_state", r.seed_state}};
}

json to_json(const EstimateReport& r) {
    json inputs = json::object();
    for (const auto& [k, v] : r.inputs) inputs[k] = v;
    json j = {{"name", r.name},
              {"inputs", std::move(inputs)},
              {"formula", r.formula},
              {"value", to_json(r.value)},
              {"flagged", r.flagged}};
    if (r.quoted_value) {
        j["quoted_value"] = to_json(*r.quoted_value);
        j["agreement_log10"] = *r.agreement_log10;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

} // namespace fg
