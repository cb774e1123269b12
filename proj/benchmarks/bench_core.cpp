#include <benchmark/benchmark.h>

#include "finegrain/dynamics.hpp"
#include "finegrain/measurement.hpp"
#include "finegrain/rng.hpp"

namespace {

fg::PureState random_state(fg::Xoshiro256ss& rng, const std::vector<int>& dims) {
    fg::Vec v(fg::total_dimension(dims));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = fg::cxd(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    return fg::PureState::normalized(dims, std::move(v));
}

void BM_EvolveUnitaryXChain(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<double> omegas(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) omegas[static_cast<std::size_t>(i)] = 1.0 / (i + 1);
    fg::HamiltonianSpec h{fg::HamiltonianSpec::XChain{omegas}};
    const fg::UnitaryPropagator prop(h, fg::Units::natural());
    const fg::PureState psi = fg::PureState::basis_state(std::vector<int>(n, 2),
                                                         std::vector<int>(n, 0));
    double t = 0.0;
    for (auto _ : state) {
        t += 0.05;
        auto out = prop.evolve(psi, t);
        benchmark::DoNotOptimize(out.amps().data());
    }
}
BENCHMARK(BM_EvolveUnitaryXChain)->Arg(6)->Arg(8)->Arg(10);

void BM_XChainClosedForm(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<double> omegas(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) omegas[static_cast<std::size_t>(i)] = 1.0 / (i + 1);
    double t = 0.0;
    for (auto _ : state) {
        t += 0.05;
        auto psi = fg::x_chain_closed_form(omegas, t);
        benchmark::DoNotOptimize(psi.amps().data());
    }
}
BENCHMARK(BM_XChainClosedForm)->Arg(6)->Arg(10)->Arg(12);

void BM_PartialTrace(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    fg::Xoshiro256ss rng(7);
    const auto psi = random_state(rng, std::vector<int>(n, 2));
    const auto rho = fg::DensityMatrix::from_pure(psi);
    for (auto _ : state) {
        auto reduced = fg::partial_trace(rho, {0, 1});
        benchmark::DoNotOptimize(reduced.mat().data());
    }
}
BENCHMARK(BM_PartialTrace)->Arg(6)->Arg(8);

void BM_Factorize(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    fg::Xoshiro256ss rng(11);
    // Product of Bell pairs: worst case still needs every cut checked.
    fg::PureState bell({2, 2}, (fg::Vec(4) << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0)).finished());
    fg::PureState psi = bell;
    for (int i = 2; i < n; i += 2) psi = fg::tensor(psi, bell);
    for (auto _ : state) {
        auto f = fg::factorize(psi, 1e-10);
        benchmark::DoNotOptimize(f.blocks.data());
    }
}
BENCHMARK(BM_Factorize)->Arg(4)->Arg(6)->Arg(8);

void BM_LindbladStep(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    fg::Lattice lat{dim, 0.5};
    auto spec = fg::lindblad_position_generator(0.05, lat, 1.0);
    fg::Vec psi = fg::Vec::Zero(dim);
    psi(dim / 2) = 1.0;
    fg::DensityMatrix rho({dim}, psi * psi.adjoint());
    for (auto _ : state) {
        rho = fg::lindblad_evolve(rho, spec, 0.01, 0.01, fg::Units::natural());
        benchmark::DoNotOptimize(rho.mat().data());
    }
}
BENCHMARK(BM_LindbladStep)->Arg(16)->Arg(32);

void BM_InformationTransition(benchmark::State& state) {
    fg::Xoshiro256ss chain_rng(3);
    const auto chain = fg::ChainSpec::random(chain_rng, 3, 2, 2);
    fg::Vec a(3);
    a << std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2);
    const auto psi = fg::premeasure(fg::PureState({3}, a), chain);
    fg::TransitionConfig cfg;
    cfg.force = true;
    cfg.mu = 64;
    cfg.candidate_bases = {fg::TransitionBasis::extended_pointer(chain)};
    fg::Xoshiro256ss rng(17);
    for (auto _ : state) {
        auto [post, rec] = fg::information_transition(psi, cfg, 0.0, rng);
        benchmark::DoNotOptimize(rec.probability);
    }
}
BENCHMARK(BM_InformationTransition);

} // namespace

BENCHMARK_MAIN();
