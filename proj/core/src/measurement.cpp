#include "finegrain/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fg {

namespace {

constexpr double kWeightTol = 1e-12;
constexpr double kUnitaryTol = 1e-9;

void check_rows_normalized(const Mat& m, const char* what) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        if (std::fabs(m.row(r).squaredNorm() - 1.0) > 1e-9)
            throw std::invalid_argument(std::string(what) + ": weight rows must be unit norm");
}

Mat random_weight_rows(Xoshiro256ss& rng, int rows, int cols) {
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c)
            m(r, c) = cxd(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
        m.row(r).normalize();
    }
    return m;
}

Mat fourier_matrix(int d) {
    Mat f(d, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            const double phi = 2.0 * std::numbers::pi * r * c / d;
            f(r, c) = scale * cxd(std::cos(phi), std::sin(phi));
        }
    return f;
}

} // namespace

void ChainSpec::validate() const {
    if (system_dim < 2) throw std::invalid_argument("ChainSpec: system_dim must be >= 2");
    if (apparatus.micro_dim < 1 || environment.micro_dim < 1)
        throw std::invalid_argument("ChainSpec: micro dimensions must be >= 1");
    if (environment.theta < 0.0 || environment.theta > 1.0)
        throw std::invalid_argument("ChainSpec: theta must lie in [0, 1]");
    if (apparatus.weights.rows() != system_dim ||
        apparatus.weights.cols() != apparatus.micro_dim)
        throw std::invalid_argument("ChainSpec: apparatus weight shape mismatch");
    check_rows_normalized(apparatus.weights, "ChainSpec apparatus");
    if (static_cast<int>(environment.weights.size()) != system_dim)
        throw std::invalid_argument("ChainSpec: one environment weight block per sector");
    for (const auto& w : environment.weights) {
        if (w.rows() != apparatus.micro_dim || w.cols() != environment.micro_dim)
            throw std::invalid_argument("ChainSpec: environment weight shape mismatch");
        check_rows_normalized(w, "ChainSpec environment");
    }
    if (total_dimension(dims()) > kDeskDimCap)
        throw std::invalid_argument("ChainSpec: dimension exceeds the desk-scale cap");
}

ChainSpec ChainSpec::uniform(int system_dim, int apparatus_micro, int environment_micro,
                             double theta) {
    ChainSpec c;
    c.system_dim = system_dim;
    c.apparatus.micro_dim = apparatus_micro;
    c.apparatus.weights =
        Mat::Constant(system_dim, apparatus_micro, 1.0 / std::sqrt(double(apparatus_micro)));
    c.environment.micro_dim = environment_micro;
    c.environment.theta = theta;
    c.environment.weights.assign(
        system_dim, Mat::Constant(apparatus_micro, environment_micro,
                                  1.0 / std::sqrt(double(environment_micro))));
    c.validate();
    return c;
}

ChainSpec ChainSpec::random(Xoshiro256ss& rng, int system_dim, int apparatus_micro,
                            int environment_micro, double theta) {
    ChainSpec c;
    c.system_dim = system_dim;
    c.apparatus.micro_dim = apparatus_micro;
    c.apparatus.weights = random_weight_rows(rng, system_dim, apparatus_micro);
    c.environment.micro_dim = environment_micro;
    c.environment.theta = theta;
    for (int i = 0; i < system_dim; ++i)
        c.environment.weights.push_back(random_weight_rows(rng, apparatus_micro, environment_micro));
    c.validate();
    return c;
}

PureState premeasure(const PureState& system, const ChainSpec& chain) {
    chain.validate();
    if (system.dims() != std::vector<int>{chain.system_dim})
        throw std::invalid_argument("premeasure: system state does not match chain system_dim");
    const int d = chain.system_dim;
    const int m = chain.apparatus.micro_dim;
    const int q = chain.environment.micro_dim;
    const int dm = chain.m_dim();
    const int dq = chain.q_dim();
    const double theta = chain.environment.theta;
    const double ortho = std::sqrt(theta);
    const double shared = std::sqrt(1.0 - theta);
    const std::int64_t slack = std::int64_t{dq} - 1;

    Vec out = Vec::Zero(std::int64_t{d} * dm * dq);
    for (int i = 0; i < d; ++i)
        for (int xi = 0; xi < m; ++xi)
            for (int eta = 0; eta < q; ++eta) {
                const cxd c = system.amps()(i) * chain.apparatus.weights(i, xi) *
                              chain.environment.weights[static_cast<std::size_t>(i)](xi, eta);
                const std::int64_t im = std::int64_t{i} * m + xi;
                const std::int64_t base = (std::int64_t{i} * dm + im) * dq;
                out(base + im * q + eta) += c * ortho;
                out(base + slack) += c * shared;
            }
    return PureState::normalized(chain.dims(), std::move(out));
}

DensityMatrix Ensemble::density() const {
    if (members.empty()) throw std::invalid_argument("Ensemble: no members");
    const auto& dims = members.front().state.dims();
    Mat rho = Mat::Zero(members.front().state.dim(), members.front().state.dim());
    for (const auto& mem : members) {
        if (mem.state.dims() != dims)
            throw std::invalid_argument("Ensemble: members over different spaces");
        rho += mem.weight * (mem.state.amps() * mem.state.amps().adjoint());
    }
    return DensityMatrix(dims, std::move(rho));
}

void Ensemble::validate() const {
    double total = 0.0;
    for (const auto& mem : members) {
        if (mem.weight < -kWeightTol) throw std::invalid_argument("Ensemble: negative weight");
        total += mem.weight;
    }
    if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument("Ensemble: weights must sum to 1");
}

void TransitionBasis::validate(const std::vector<int>& dims) const {
    if (factors.size() != dims.size())
        throw std::invalid_argument("TransitionBasis '" + id +
                                    "': one factor entry per subsystem required "
                                    "(jointly entangled bases are not product bases)");
    bool any_measured = false;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        const auto& fac = factors[f];
        if (!fac.measured) continue;
        any_measured = true;
        if (fac.basis.size() == 0) continue; // computational
        if (fac.basis.rows() != dims[f] || fac.basis.cols() != dims[f])
            throw std::invalid_argument("TransitionBasis '" + id + "': factor " +
                                        std::to_string(f) +
                                        " basis does not match the factor dimension");
        const Mat gram = fac.basis.adjoint() * fac.basis;
        if ((gram - Mat::Identity(dims[f], dims[f])).cwiseAbs().maxCoeff() > kUnitaryTol)
            throw std::invalid_argument("TransitionBasis '" + id + "': factor " +
                                        std::to_string(f) + " basis is not orthonormal");
    }
    if (!any_measured)
        throw std::invalid_argument("TransitionBasis '" + id + "': no factor is measured");
}

TransitionBasis TransitionBasis::computational(const std::vector<int>& dims, std::string id) {
    TransitionBasis b;
    b.id = std::move(id);
    b.factors.assign(dims.size(), Factor{true, Mat()});
    return b;
}

TransitionBasis TransitionBasis::extended_pointer(const ChainSpec& chain) {
    return computational(chain.dims(), "extended-pointer");
}

TransitionBasis TransitionBasis::rotated_factor(const std::vector<int>& dims, int factor,
                                                std::string id) {
    if (factor < 0 || factor >= static_cast<int>(dims.size()))
        throw std::invalid_argument("rotated_factor: index out of range");
    TransitionBasis b;
    b.id = std::move(id);
    b.factors.assign(dims.size(), Factor{false, Mat()});
    b.factors[static_cast<std::size_t>(factor)] =
        Factor{true, fourier_matrix(dims[static_cast<std::size_t>(factor)])};
    return b;
}

void TransitionConfig::validate(const std::vector<int>& dims) const {
    if (mu < 4) throw std::invalid_argument("TransitionConfig: mu must be >= 4");
    if (threshold_mode == ThresholdMode::explicit_bits && explicit_threshold_bits <= 0)
        throw std::invalid_argument("TransitionConfig: explicit threshold must be positive");
    if (candidate_bases.empty())
        throw std::invalid_argument("TransitionConfig: candidate_bases must be nonempty");
    for (const auto& b : candidate_bases) b.validate(dims);
}

LogQuantity TransitionConfig::threshold(const PhysicalConstants& pc) const {
    switch (threshold_mode) {
        case ThresholdMode::m1:
            if (energy_E <= 0 || coupling_J <= 0)
                throw std::invalid_argument("m1 threshold needs energy_E and coupling_J");
            return memory_limit_chaos(energy_E, coupling_J, mu);
        case ThresholdMode::m2:
            return memory_limit_completeness(mu);
        case ThresholdMode::explicit_bits:
            return LogQuantity::from_linear(explicit_threshold_bits, Unit::bits);
    }
    throw std::logic_error("unreachable");
    (void)pc;
}

LogQuantity ensemble_state_information(const Ensemble& e, double mu) {
    if (e.members.empty()) throw std::invalid_argument("ensemble has no members");
    double max_dim = 0.0;
    for (const auto& mem : e.members)
        max_dim = std::max(max_dim, mnemonic_dimension(mem.factorization, mem.state.dims()));
    return {std::log10(mu) + std::log10(max_dim), Unit::bits};
}

LogQuantity ensemble_state_information_expected(const Ensemble& e, double mu) {
    if (e.members.empty()) throw std::invalid_argument("ensemble has no members");
    double acc = 0.0;
    for (const auto& mem : e.members)
        acc += mem.weight * mnemonic_dimension(mem.factorization, mem.state.dims());
    return {std::log10(mu) + std::log10(acc), Unit::bits};
}

Ensemble induced_ensemble(const PureState& state, const TransitionBasis& basis,
                          double separability_tol, double weight_floor) {
    basis.validate(state.dims());
    const auto& dims = state.dims();
    const int n = static_cast<int>(dims.size());

    std::vector<int> measured, unmeasured;
    for (int f = 0; f < n; ++f)
        (basis.factors[static_cast<std::size_t>(f)].measured ? measured : unmeasured).push_back(f);

    std::vector<int> mdims, udims;
    for (int f : measured) mdims.push_back(dims[static_cast<std::size_t>(f)]);
    for (int f : unmeasured) udims.push_back(dims[static_cast<std::size_t>(f)]);
    const std::int64_t outcomes = total_dimension(mdims);
    const std::int64_t ucount = unmeasured.empty() ? 1 : total_dimension(udims);
    const auto strides = strides_for(dims);

    // Digit and offset tables, computed once per candidate.
    const std::int64_t mcount = outcomes;
    const std::size_t nm = measured.size();
    std::vector<int> mdigit_table(static_cast<std::size_t>(mcount) * std::max<std::size_t>(nm, 1));
    std::vector<std::int64_t> moffset_table(static_cast<std::size_t>(mcount));
    for (std::int64_t md = 0; md < mcount; ++md) {
        const auto digits = unravel_index(mdims, md);
        std::int64_t off = 0;
        for (std::size_t j = 0; j < nm; ++j) {
            mdigit_table[static_cast<std::size_t>(md) * nm + j] = digits[j];
            off += std::int64_t{digits[j]} * strides[static_cast<std::size_t>(measured[j])];
        }
        moffset_table[static_cast<std::size_t>(md)] = off;
    }
    std::vector<std::int64_t> uoffset_table(static_cast<std::size_t>(ucount), 0);
    if (!unmeasured.empty())
        for (std::int64_t u = 0; u < ucount; ++u) {
            const auto digits = unravel_index(udims, u);
            std::int64_t off = 0;
            for (std::size_t j = 0; j < unmeasured.size(); ++j)
                off += std::int64_t{digits[j]} * strides[static_cast<std::size_t>(unmeasured[j])];
            uoffset_table[static_cast<std::size_t>(u)] = off;
        }

    auto projection_coef = [&](std::int64_t md, const std::vector<int>& kdigits, bool conjugate) {
        cxd coef = 1.0;
        for (std::size_t j = 0; j < nm; ++j) {
            const auto& fac = basis.factors[static_cast<std::size_t>(measured[j])];
            const int d = mdigit_table[static_cast<std::size_t>(md) * nm + j];
            if (fac.basis.size() == 0) {
                if (d != kdigits[j]) return cxd(0.0, 0.0);
            } else {
                const cxd b = fac.basis(d, kdigits[j]);
                coef *= conjugate ? std::conj(b) : b;
            }
        }
        return coef;
    };

    Ensemble ens;
    for (std::int64_t label = 0; label < outcomes; ++label) {
        const auto kdigits = unravel_index(mdims, label);

        // Conditional amplitudes on the unmeasured factors.
        Vec cond = Vec::Zero(ucount);
        for (std::int64_t md = 0; md < mcount; ++md) {
            const cxd proj = projection_coef(md, kdigits, true);
            if (proj == cxd(0.0, 0.0)) continue;
            const std::int64_t moffset = moffset_table[static_cast<std::size_t>(md)];
            for (std::int64_t u = 0; u < ucount; ++u)
                cond(u) += proj * state.amps()(moffset + uoffset_table[static_cast<std::size_t>(u)]);
        }

        const double weight = cond.squaredNorm();
        if (weight < weight_floor) continue;
        cond /= std::sqrt(weight);

        // Reassemble the full-space member: measured basis vectors tensor the
        // conditional state.
        Vec member = Vec::Zero(state.dim());
        for (std::int64_t md = 0; md < mcount; ++md) {
            const cxd coef = projection_coef(md, kdigits, false);
            if (coef == cxd(0.0, 0.0)) continue;
            const std::int64_t moffset = moffset_table[static_cast<std::size_t>(md)];
            for (std::int64_t u = 0; u < ucount; ++u)
                member(moffset + uoffset_table[static_cast<std::size_t>(u)]) += coef * cond(u);
        }

        Ensemble::Member mem{weight, PureState::normalized(dims, std::move(member)),
                             FactorizationStructure{}, label};
        for (int f : measured) mem.factorization.blocks.push_back({f});
        if (unmeasured.size() == 1) {
            mem.factorization.blocks.push_back({unmeasured.front()});
        } else if (!unmeasured.empty()) {
            const auto sub = factorize(PureState(udims, cond), separability_tol);
            for (const auto& block : sub.blocks) {
                std::vector<int> mapped;
                for (int idx : block) mapped.push_back(unmeasured[static_cast<std::size_t>(idx)]);
                mem.factorization.blocks.push_back(std::move(mapped));
            }
        }
        std::sort(mem.factorization.blocks.begin(), mem.factorization.blocks.end());
        ens.members.push_back(std::move(mem));
    }
    return ens;
}

int select_transition_basis(const PureState& state, const TransitionConfig& cfg,
                            std::vector<BasisCost>* diagnostics) {
    cfg.validate(state.dims());
    int best = -1;
    double best_cost = 0.0;
    if (diagnostics) diagnostics->clear();
    for (std::size_t i = 0; i < cfg.candidate_bases.size(); ++i) {
        const Ensemble ens =
            induced_ensemble(state, cfg.candidate_bases[i], cfg.separability_tol);
        const double cost = ensemble_state_information(ens, cfg.mu).log10();
        if (diagnostics)
            diagnostics->push_back({cfg.candidate_bases[i].id, cost,
                                    ensemble_state_information_expected(ens, cfg.mu).log10()});
        if (best < 0 || cost < best_cost - 1e-9) {
            best = static_cast<int>(i);
            best_cost = cost;
        }
    }
    return best;
}

StabilityVerdict state_stability(const PureState& state, const TransitionConfig& cfg,
                                 const PhysicalConstants& pc) {
    const auto f = factorize(state, cfg.separability_tol);
    // The entangled count is set by the largest irreducible block; separable
    // objects stand alone at n = 1 each.
    double max_block_dim = 1.0;
    for (const auto& block : f.blocks) {
        double prod = 1.0;
        for (int idx : block) prod *= state.dims()[static_cast<std::size_t>(idx)];
        max_block_dim = std::max(max_block_dim, prod);
    }
    StabilityVerdict v;
    v.scenario = cfg.threshold_mode == ThresholdMode::m1 ? StabilityScenario::chaos
                                                         : StabilityScenario::completeness;
    v.required = LogQuantity{std::log10(cfg.mu) + std::log10(max_block_dim), Unit::bits};
    v.limit = cfg.threshold(pc);
    v.margin_log10 = v.limit.log10() - v.required.log10();
    v.stable = v.margin_log10 >= -1e-9;
    return v;
}

std::pair<PureState, TransitionRecord> information_transition(const PureState& state,
                                                              const TransitionConfig& cfg,
                                                              double t, Xoshiro256ss& rng,
                                                              const PhysicalConstants& pc) {
    cfg.validate(state.dims());
    const auto pre_blocks = factorize(state, cfg.separability_tol);

    StabilityVerdict verdict;
    double max_block_dim = 1.0;
    for (const auto& block : pre_blocks.blocks) {
        double prod = 1.0;
        for (int idx : block) prod *= state.dims()[static_cast<std::size_t>(idx)];
        max_block_dim = std::max(max_block_dim, prod);
    }
    verdict.scenario = cfg.threshold_mode == ThresholdMode::m1 ? StabilityScenario::chaos
                                                               : StabilityScenario::completeness;
    verdict.required = LogQuantity{std::log10(cfg.mu) + std::log10(max_block_dim), Unit::bits};
    verdict.limit = cfg.threshold(pc);
    verdict.margin_log10 = verdict.limit.log10() - verdict.required.log10();
    verdict.stable = verdict.margin_log10 >= -1e-9;
    if (verdict.stable && !cfg.force)
        throw stability_error(
            "information_transition: system is computationally stable; pass force to project "
            "anyway");

    // Build each candidate's ensemble once; the winner's is reused for the
    // Born draw.
    int basis_index = -1;
    double best_cost = 0.0;
    Ensemble ens;
    for (std::size_t i = 0; i < cfg.candidate_bases.size(); ++i) {
        Ensemble candidate =
            induced_ensemble(state, cfg.candidate_bases[i], cfg.separability_tol);
        const double cost = ensemble_state_information(candidate, cfg.mu).log10();
        if (basis_index < 0 || cost < best_cost - 1e-9) {
            basis_index = static_cast<int>(i);
            best_cost = cost;
            ens = std::move(candidate);
        }
    }
    if (ens.members.empty())
        throw std::logic_error("information_transition: empty induced ensemble");
    const auto& basis = cfg.candidate_bases[static_cast<std::size_t>(basis_index)];

    TransitionRecord rec;
    rec.time = t;
    rec.trigger = verdict;
    rec.basis_id = basis.id;
    rec.basis_index = basis_index;
    rec.seed_state = rng.state();

    std::vector<double> weights;
    weights.reserve(ens.members.size());
    for (const auto& mem : ens.members) weights.push_back(mem.weight);
    const std::size_t pick = sample_discrete(rng, weights);
    const auto& chosen = ens.members[pick];

    rec.outcome_index = chosen.outcome_label;
    rec.probability = chosen.weight;
    rec.pre_memory = LogQuantity{
        std::log10(cfg.mu) + std::log10(mnemonic_dimension(pre_blocks, state.dims())),
        Unit::bits};
    rec.post_memory = LogQuantity{
        std::log10(cfg.mu) + std::log10(mnemonic_dimension(chosen.factorization, state.dims())),
        Unit::bits};
    return {chosen.state, rec};
}

Ensemble nonselective_transition(const PureState& state, const TransitionBasis& basis,
                                 double separability_tol) {
    Ensemble ens = induced_ensemble(state, basis, separability_tol);
    ens.proper = true;
    return ens;
}

double verify_reduced_invariance(const PureState& state, const TransitionBasis& basis,
                                 const std::vector<int>& discard) {
    std::vector<int> keep;
    for (int f = 0; f < state.subsystems(); ++f)
        if (std::find(discard.begin(), discard.end(), f) == discard.end()) keep.push_back(f);
    const DensityMatrix direct = partial_trace(DensityMatrix::from_pure(state), keep);
    const DensityMatrix transitioned =
        partial_trace(nonselective_transition(state, basis).density(), keep);
    return (direct.mat() - transitioned.mat()).cwiseAbs().maxCoeff();
}

TrajectoryResult run_trajectory(const PureState& initial, const HamiltonianSpec& h,
                                const TransitionConfig& cfg, double t_total, double dt,
                                Xoshiro256ss& rng, const Units& units,
                                const PhysicalConstants& pc) {
    if (dt <= 0) throw std::invalid_argument("run_trajectory: dt must be positive");
    cfg.validate(initial.dims());
    const UnitaryPropagator prop(h, units);

    TrajectoryResult result{{}, initial};
    double t = 0.0;
    while (t < t_total - 1e-15 * t_total) {
        const double step = std::min(dt, t_total - t);
        result.final_state = prop.evolve(result.final_state, step);
        t += step;
        const StabilityVerdict verdict = state_stability(result.final_state, cfg, pc);
        if (!verdict.stable) {
            auto [post, rec] = information_transition(result.final_state, cfg, t, rng, pc);
            result.final_state = post;
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

PureState cat_state(const ChainSpec& chain) {
    chain.validate();
    if (chain.system_dim != 2)
        throw std::invalid_argument("cat_state: exactly two macro sectors required");
    const int m = chain.apparatus.micro_dim;
    const int q = chain.environment.micro_dim;
    const int dq = chain.q_dim();
    const double theta = chain.environment.theta;
    const double ortho = std::sqrt(theta);
    const double shared = std::sqrt(1.0 - theta);
    const double half = 1.0 / std::sqrt(2.0);
    const std::int64_t slack = std::int64_t{dq} - 1;

    // dims: macro sector (2), cat microstate (m), environment (dq).
    Vec out = Vec::Zero(std::int64_t{2} * m * dq);
    for (int i = 0; i < 2; ++i)
        for (int xi = 0; xi < m; ++xi)
            for (int eta = 0; eta < q; ++eta) {
                const cxd c = half * chain.apparatus.weights(i, xi) *
                              chain.environment.weights[static_cast<std::size_t>(i)](xi, eta);
                const std::int64_t base = (std::int64_t{i} * m + xi) * dq;
                out(base + (std::int64_t{i} * m + xi) * q + eta) += c * ortho;
                out(base + slack) += c * shared;
            }
    return PureState::normalized({2, m, dq}, std::move(out));
}

Ensemble cat_mixture(const ChainSpec& chain) {
    chain.validate();
    if (chain.system_dim != 2)
        throw std::invalid_argument("cat_mixture: exactly two macro sectors required");
    const int m = chain.apparatus.micro_dim;

    Ensemble ens;
    ens.proper = true;
    for (int i = 0; i < 2; ++i)
        for (int xi = 0; xi < m; ++xi) {
            const double w = 0.5 * std::norm(chain.apparatus.weights(i, xi));
            if (w < kWeightTol) continue;
            Ensemble::Member mem{w, PureState::basis_state({2, m}, {i, xi}),
                                 FactorizationStructure{{{0}, {1}}},
                                 std::int64_t{i} * m + xi};
            ens.members.push_back(std::move(mem));
        }
    return ens;
}

} // namespace fg
