#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "finegrain/dynamics.hpp"
#include "finegrain/rng.hpp"

using namespace fg;

namespace {

const Units kNat = Units::natural();
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Mat random_hermitian(Xoshiro256ss& rng, int d) {
    Mat m(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            m(r, c) = cxd(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    return 0.5 * (m + m.adjoint().eval());
}

PureState random_state(Xoshiro256ss& rng, const std::vector<int>& dims) {
    Vec v(total_dimension(dims));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = cxd(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    return PureState::normalized(dims, std::move(v));
}

// Independent oracle: truncated exponential series exp(-iHt) psi.
Vec series_propagate(const Mat& h, const Vec& psi, double t, int terms = 60) {
    Vec acc = psi;
    Vec term = psi;
    const cxd factor = cxd(0.0, -1.0) * t;
    for (int k = 1; k <= terms; ++k) {
        term = (factor / double(k)) * (h * term).eval();
        acc += term;
    }
    return acc;
}

double fidelity(const PureState& a, const PureState& b) {
    return std::abs(a.amps().dot(b.amps()));
}

LatticeState gaussian_packet(const Lattice& lat, double sigma) {
    const auto x = lat.positions();
    Vec psi(lat.n);
    for (int i = 0; i < lat.n; ++i)
        psi(i) = std::exp(-x[std::size_t(i)] * x[std::size_t(i)] / (4.0 * sigma * sigma));
    psi /= psi.norm() * std::sqrt(lat.dx);
    return {lat, psi * psi.adjoint()};
}

double packet_width(const LatticeState& s) {
    const auto x = s.lattice.positions();
    double mean = 0.0, second = 0.0;
    for (int i = 0; i < s.lattice.n; ++i) {
        const double p = s.rho(i, i).real() * s.lattice.dx;
        mean += x[std::size_t(i)] * p;
        second += x[std::size_t(i)] * x[std::size_t(i)] * p;
    }
    return std::sqrt(second - mean * mean);
}

} // namespace

TEST_CASE("evolve_unitary: t = 0 is the identity") {
    Xoshiro256ss rng(1);
    const auto psi = random_state(rng, {2, 2});
    HamiltonianSpec h{HamiltonianSpec::XChain{{1.0, 2.0}}};
    const auto out = evolve_unitary(psi, h, 0.0, kNat);
    CHECK((out.amps() - psi.amps()).norm() < 1e-14);
}

TEST_CASE("qubit flip completes at t = pi hbar / (2 dE)") {
    const double e0 = 0.0, e1 = 2.0e-20;
    const double spread = 0.5 * (e1 - e0);
    HamiltonianSpec h{HamiltonianSpec::QubitFlip{e0, e1}};
    const Units si = Units::si();
    const auto zero = PureState::basis_state({2}, {0});
    const auto one = PureState::basis_state({2}, {1});

    const double t_flip = std::numbers::pi * si.hbar / (2.0 * spread);
    const auto flipped = evolve_unitary(zero, h, t_flip, si);
    CHECK(std::abs(flipped.amps()(1)) == doctest::Approx(1.0).epsilon(1e-12));
    // And back again.
    const auto back = evolve_unitary(one, h, t_flip, si);
    CHECK(std::abs(back.amps()(0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(flipped.amps().norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolve_unitary matches the series oracle") {
    Xoshiro256ss rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const Mat h = random_hermitian(rng, 3);
        const auto psi = random_state(rng, {3});
        const double t = 0.3 + rng.uniform();
        HamiltonianSpec spec{HamiltonianSpec::Dense{{3}, h}};
        const auto evolved = evolve_unitary(psi, spec, t, kNat);
        const Vec oracle = series_propagate(h, psi.amps(), t);
        CHECK(std::abs(evolved.amps().dot(oracle)) >= 1.0 - 1e-10);
        CHECK((evolved.amps() - oracle).norm() < 1e-9);
    }
}

TEST_CASE("evolve_unitary rejects non-Hermitian input") {
    Mat bad = Mat::Zero(2, 2);
    bad(0, 1) = 1.0;
    HamiltonianSpec spec{HamiltonianSpec::Dense{{2}, bad}};
    const auto psi = PureState::basis_state({2}, {0});
    CHECK_THROWS_AS(evolve_unitary(psi, spec, 1.0, kNat), std::invalid_argument);
}

TEST_CASE("unitary evolution preserves norm, overlaps, and local entropy") {
    Xoshiro256ss rng(23);
    const Mat ha = random_hermitian(rng, 2);
    const Mat hb = random_hermitian(rng, 2);
    // Strictly local Hamiltonian on two qubits: A x I + I x B.
    Mat local = Mat::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap)
            for (int b = 0; b < 2; ++b)
                for (int bp = 0; bp < 2; ++bp) {
                    cxd v = 0.0;
                    if (b == bp) v += ha(a, ap);
                    if (a == ap) v += hb(b, bp);
                    local(a * 2 + b, ap * 2 + bp) = v;
                }
    HamiltonianSpec spec{HamiltonianSpec::Dense{{2, 2}, local}};

    const auto s1 = random_state(rng, {2, 2});
    const auto s2 = random_state(rng, {2, 2});
    const double overlap_before = std::abs(s1.amps().dot(s2.amps()));
    const double entropy_before = entanglement_entropy(s1, {0});

    const auto e1 = evolve_unitary(s1, spec, 1.7, kNat);
    const auto e2 = evolve_unitary(s2, spec, 1.7, kNat);
    CHECK(e1.amps().norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(e1.amps().dot(e2.amps())) == doctest::Approx(overlap_before).epsilon(1e-10));
    CHECK(entanglement_entropy(e1, {0}) == doctest::Approx(entropy_before).epsilon(1e-9));
}

TEST_CASE("x_chain closed form: single qubit reduces to rotation phases") {
    const double w = 1.3, t = 0.47;
    const auto psi = x_chain_closed_form({w}, t);
    CHECK(psi.amps()(0).real() == doctest::Approx(std::cos(w * t)).epsilon(1e-12));
    CHECK(psi.amps()(0).imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(psi.amps()(1).real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(psi.amps()(1).imag() == doctest::Approx(-std::sin(w * t)).epsilon(1e-12));
}

TEST_CASE("x_chain closed form matches the dense propagator for n <= 6") {
    Xoshiro256ss rng(31);
    for (int n = 2; n <= 6; ++n) {
        std::vector<double> omegas(static_cast<std::size_t>(n));
        for (auto& w : omegas) w = 0.2 + rng.uniform();
        const double t = 0.9;
        const auto closed = x_chain_closed_form(omegas, t);
        HamiltonianSpec spec{HamiltonianSpec::XChain{omegas}};
        const auto zero = PureState::basis_state(std::vector<int>(std::size_t(n), 2),
                                                 std::vector<int>(std::size_t(n), 0));
        const auto dense = evolve_unitary(zero, spec, t, kNat);
        CHECK(fidelity(closed, dense) >= 1.0 - 1e-10);
    }
    CHECK_THROWS_AS(x_chain_closed_form(std::vector<double>(13, 1.0), 0.1),
                    std::invalid_argument);
}

TEST_CASE("x_chain entangles a product start") {
    const std::vector<double> omegas{1.0, 0.7};
    const auto at0 = x_chain_closed_form(omegas, 0.0);
    CHECK(entanglement_entropy(at0, {0}) == doctest::Approx(0.0).epsilon(1e-10));
    const auto later = x_chain_closed_form(omegas, 0.6);
    CHECK(entanglement_entropy(later, {0}) > 0.05);
}

TEST_CASE("lindblad with no collapse operators matches unitary evolution") {
    Xoshiro256ss rng(41);
    const Mat h = random_hermitian(rng, 3);
    const auto psi = random_state(rng, {3});
    LindbladSpec spec{HamiltonianSpec{HamiltonianSpec::Dense{{3}, h}}, {}};
    const auto rho_t = lindblad_evolve(DensityMatrix::from_pure(psi), spec, 1.0, 1e-3, kNat);
    const auto psi_t = evolve_unitary(psi, spec.h0, 1.0, kNat);
    const Mat expect = psi_t.amps() * psi_t.amps().adjoint();
    CHECK((rho_t.mat() - expect).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("lindblad dephasing matches the analytic elementwise solution") {
    Xoshiro256ss rng(43);
    Mat l = Mat::Zero(3, 3);
    l(0, 0) = 0.3;
    l(1, 1) = 1.1;
    l(2, 2) = -0.4;
    LindbladSpec spec{HamiltonianSpec{HamiltonianSpec::Dense{{3}, Mat::Zero(3, 3)}}, {l}};
    const auto psi = random_state(rng, {3});
    const auto rho0 = DensityMatrix::from_pure(psi);
    const double t = 1.4;
    const auto rho_t = lindblad_evolve(rho0, spec, t, 1e-3, kNat);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double li = l(i, i).real(), lj = l(j, j).real();
            const cxd expect = rho0.mat()(i, j) * std::exp(-(li - lj) * (li - lj) * t / 2.0);
            CHECK(std::abs(rho_t.mat()(i, j) - expect) < 1e-6);
        }
    // Trace drift stays below 1e-8 per unit time.
    CHECK(std::fabs(rho_t.mat().trace().real() - 1.0) < 1e-8 * t);
}

TEST_CASE("lindblad amplitude damping matches the analytic solution") {
    const double gamma = 0.8;
    Mat lower = Mat::Zero(2, 2);
    lower(0, 1) = std::sqrt(gamma);
    LindbladSpec spec{HamiltonianSpec{HamiltonianSpec::Dense{{2}, Mat::Zero(2, 2)}}, {lower}};

    Vec v(2);
    v << std::sqrt(0.3), std::sqrt(0.7);
    const auto rho0 = DensityMatrix::from_pure(PureState({2}, v));
    const double t = 0.9;
    const auto rho_t = lindblad_evolve(rho0, spec, t, 1e-3, kNat);

    const double p1 = 0.7 * std::exp(-gamma * t);
    CHECK(std::fabs(rho_t.mat()(1, 1).real() - p1) < 1e-6);
    CHECK(std::fabs(rho_t.mat()(0, 0).real() - (1.0 - p1)) < 1e-6);
    const cxd coh = rho0.mat()(0, 1) * std::exp(-gamma * t / 2.0);
    CHECK(std::abs(rho_t.mat()(0, 1) - coh) < 1e-6);
    // Positivity heals to within tolerance.
    CHECK(rho_t.min_eigenvalue() > -1e-6);
}

TEST_CASE("scattering damping") {
    const Lattice lat{8, 0.5};
    Xoshiro256ss rng(47);
    auto state = gaussian_packet(lat, 0.8);

    SUBCASE("diagonal invariant, off-diagonals never grow") {
        const auto damped = scattering_damping(state, 2.0, 1.5);
        for (int i = 0; i < lat.n; ++i) {
            CHECK(std::abs(damped.rho(i, i) - state.rho(i, i)) < 1e-15);
            for (int j = 0; j < lat.n; ++j)
                CHECK(std::abs(damped.rho(i, j)) <= std::abs(state.rho(i, j)) + 1e-15);
        }
    }

    SUBCASE("Lambda t (x - x')^2 = ln 2 halves an element") {
        const double sep = lat.dx; // adjacent sites
        const double lambda = 1.3;
        const double t = std::numbers::ln2 / (lambda * sep * sep);
        const auto damped = scattering_damping(state, lambda, t);
        CHECK(std::abs(damped.rho(3, 4)) ==
              doctest::Approx(0.5 * std::abs(state.rho(3, 4))).epsilon(1e-12));
    }

    SUBCASE("composition in time") {
        const auto two_step = scattering_damping(scattering_damping(state, 0.7, 0.4), 0.7, 0.9);
        const auto one_step = scattering_damping(state, 0.7, 1.3);
        CHECK((two_step.rho - one_step.rho).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("decohered free evolution: free Gaussian width oracle") {
    const Lattice lat{48, 0.25};
    const double sigma0 = 0.8;
    auto state = gaussian_packet(lat, sigma0);
    CHECK(packet_width(state) == doctest::Approx(sigma0).epsilon(0.01));

    const double t = 1.0;
    const auto evolved = decohered_free_evolution(state, 1.0, 0.0, t, 0.005, kNat);
    // Minimal 1-D Gaussian: width(t) = sigma0 sqrt(1 + (t / (2 m sigma0^2))^2).
    const double expect = sigma0 * std::sqrt(1.0 + std::pow(t / (2.0 * sigma0 * sigma0), 2.0));
    const double growth = packet_width(evolved) - sigma0;
    CHECK(std::fabs(growth - (expect - sigma0)) < 0.1 * (expect - sigma0));
    // Lambda = 0 preserves the trace.
    CHECK(evolved.rho.trace().real() * lat.dx == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("decohered free evolution: infinite mass equals pure damping") {
    const Lattice lat{16, 0.5};
    auto state = gaussian_packet(lat, 1.2);
    const double lambda = 0.05, t = 0.5;
    const auto integrated = decohered_free_evolution(
        state, std::numeric_limits<double>::infinity(), lambda, t, 0.005, kNat);
    const auto exact = scattering_damping(state, lambda, t);
    CHECK((integrated.rho - exact.rho).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("decohered free evolution: coherence length shrinks under strong damping") {
    const Lattice lat{24, 0.4};
    auto state = gaussian_packet(lat, 1.5);
    const int i = 8, j = 15; // fixed off-diagonal separation
    double prev = std::abs(state.rho(i, j));
    for (int step = 0; step < 4; ++step) {
        state = decohered_free_evolution(state, 1.0, 1.0, 0.2, 0.002, kNat);
        const double now = std::abs(state.rho(i, j));
        CHECK(now < prev);
        prev = now;
    }
}

TEST_CASE("decohered free evolution: step bound watchdog") {
    const Lattice lat{16, 0.1};
    auto state = gaussian_packet(lat, 0.3);
    // dt far beyond the kinetic stability bound.
    CHECK_THROWS_AS(decohered_free_evolution(state, 1e-3, 0.0, 1.0, 0.5, kNat), watchdog_error);
}

TEST_CASE("position generator: double commutator identity") {
    const Lattice lat{6, 0.7};
    const auto spec = lindblad_position_generator(0.9, lat, 1.0);
    const Mat& l = spec.collapse_ops.front();
    Xoshiro256ss rng(53);
    Mat rho = random_hermitian(rng, 6);
    const Mat lhs = l * (l * rho - rho * l) - (l * rho - rho * l) * l;
    const Mat rhs = l * l * rho + rho * l * l - 2.0 * l * rho * l;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("position generator: Lambda = 0 is pure free evolution") {
    const Lattice lat{12, 0.5};
    auto state = gaussian_packet(lat, 1.0);
    const auto spec = lindblad_position_generator(0.0, lat, 1.0);
    const auto via_lindblad =
        lindblad_evolve(lattice_to_density(state), spec, 0.4, 0.002, kNat);
    HamiltonianSpec free_h{HamiltonianSpec::FreeParticle{1.0, lat}};
    // The packet is pure, so unitary evolution of its vector is the oracle.
    Eigen::SelfAdjointEigenSolver<Mat> es(state.rho);
    Vec psi = es.eigenvectors().col(lat.n - 1); // the single nonzero mode
    psi.normalize();
    const auto psi_t = evolve_unitary(PureState({lat.n}, psi), free_h, 0.4, kNat);
    const Mat expect = psi_t.amps() * psi_t.amps().adjoint();
    CHECK((via_lindblad.mat() - expect).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("position generator reproduces decohered free evolution, 8 and 16 points") {
    for (int n : {8, 16}) {
        const Lattice lat{n, 0.5};
        auto state = gaussian_packet(lat, 1.1);
        const double lambda = 0.05, t = 0.5, mass = 1.0;
        const auto spec = lindblad_position_generator(lambda, lat, mass);
        const auto via_lindblad = lindblad_evolve(lattice_to_density(state), spec, t, 0.004, kNat);
        const auto via_lattice = decohered_free_evolution(state, mass, lambda, t, 0.002, kNat);
        const Mat diff = via_lindblad.mat() / lat.dx - via_lattice.rho;
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("lindblad watchdog rejects runaway steps") {
    Mat l = Mat::Zero(2, 2);
    l(0, 1) = 40.0; // strong damping; dt = 0.5 is far out of range
    LindbladSpec spec{HamiltonianSpec{HamiltonianSpec::Dense{{2}, Mat::Zero(2, 2)}}, {l}};
    const auto rho = DensityMatrix::from_pure(PureState::basis_state({2}, {1}));
    CHECK_THROWS_AS(lindblad_evolve(rho, spec, 2.0, 0.5, kNat), watchdog_error);
}
