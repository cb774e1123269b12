#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "finegrain/hilbert.hpp"
#include "finegrain/rng.hpp"

using namespace fg;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PureState bell_state() {
    Vec v(4);
    v << kInvSqrt2, 0.0, 0.0, kInvSqrt2;
    return PureState({2, 2}, v);
}

PureState ghz3() {
    Vec v = Vec::Zero(8);
    v(0) = kInvSqrt2;
    v(7) = kInvSqrt2;
    return PureState({2, 2, 2}, v);
}

PureState random_state(Xoshiro256ss& rng, const std::vector<int>& dims) {
    Vec v(total_dimension(dims));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = cxd(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    return PureState::normalized(dims, std::move(v));
}

Mat random_unitary(Xoshiro256ss& rng, int d) {
    Mat m(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            m(r, c) = cxd(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
    const Eigen::HouseholderQR<Mat> qr(m);
    return qr.householderQ();
}

} // namespace

TEST_CASE("fine-graining invariants") {
    CHECK_THROWS_AS(FineGraining(3), std::invalid_argument);
    CHECK_THROWS_AS(FineGraining(2), std::invalid_argument);
    const FineGraining g(8);
    CHECK(g.half() == 4);
    CHECK(g.min_resolvable_angle() == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("quantize: basis states are grid points") {
    const auto s = PureState::basis_state({2, 2}, {1, 0});
    for (int mu : {4, 8, 16, 64}) {
        const auto q = quantize(s, FineGraining(mu));
        CHECK((q.amps() - s.amps()).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("quantize: direct rounding oracle at mu = 8") {
    // Oracle: round(x * 16) / 16 per real component, then renormalize.
    Vec v(2);
    v << kInvSqrt2, kInvSqrt2;
    const PureState s({2}, v);
    QuantizeDiag diag;
    const auto q = quantize(s, FineGraining(8), &diag);
    // round(0.7071 * 16) = 11 -> 0.6875 per component, norm 0.6875 sqrt(2)
    CHECK(diag.pre_renorm_norm == doctest::Approx(0.6875 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(diag.max_component_error == doctest::Approx(kInvSqrt2 - 0.6875).epsilon(1e-12));
    // Renormalization restores the symmetric state exactly.
    CHECK((q.amps() - s.amps()).norm() < 1e-12);

    Vec w(2);
    w << 0.6, 0.8;
    const auto qw = quantize(PureState({2}, w), FineGraining(8));
    const double n = std::hypot(0.625, 0.8125);
    CHECK(qw.amps()(0).real() == doctest::Approx(0.625 / n).epsilon(1e-12));
    CHECK(qw.amps()(1).real() == doctest::Approx(0.8125 / n).epsilon(1e-12));
}

TEST_CASE("quantize: pre-renormalization error bound and idempotence") {
    Xoshiro256ss rng(123);
    for (int mu : {8, 16, 32}) {
        const FineGraining g(mu);
        for (int i = 0; i < 100; ++i) {
            const auto s = random_state(rng, {2, 2, 2});
            QuantizeDiag diag;
            const auto q = quantize(s, g, &diag);
            CHECK(diag.max_component_error <= std::exp2(-mu / 2.0 - 1.0) + 1e-15);
            QuantizeDiag diag2;
            const auto q2 = quantize(q, g, &diag2);
            CHECK((q2.amps() - q.amps()).norm() < 1e-12);
        }
    }
}

TEST_CASE("quantize: fubini-study displacement stays inside the resolution ball") {
    Xoshiro256ss rng(5);
    for (int mu : {8, 16}) {
        const FineGraining g(mu);
        for (int i = 0; i < 50; ++i) {
            const auto s = random_state(rng, {2, 3});
            const auto q = quantize(s, g);
            const double bound = std::asin(std::min(1.0, std::sqrt(6.0) * std::exp2(-mu / 2.0)));
            CHECK(fubini_study_angle(s, q) <= bound + 1e-12);
        }
    }
}

TEST_CASE("quantize: unresolvable state reports a domain error") {
    // Uniform over 2^12 states at mu = 4: every component rounds to zero.
    const std::vector<int> dims(12, 2);
    const std::int64_t d = total_dimension(dims);
    const PureState s(dims, Vec::Constant(d, 1.0 / std::sqrt(double(d))));
    CHECK_THROWS_AS(quantize(s, FineGraining(4)), std::domain_error);
}

TEST_CASE("fubini-study angle") {
    const auto zero = PureState::basis_state({2}, {0});
    const auto one = PureState::basis_state({2}, {1});
    CHECK(fubini_study_angle(zero, zero) == doctest::Approx(0.0));
    CHECK(fubini_study_angle(zero, one) == doctest::Approx(std::numbers::pi / 2));
    Vec tilted(2);
    tilted << std::cos(0.3), std::sin(0.3);
    CHECK(fubini_study_angle(zero, PureState({2}, tilted)) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(fubini_study_angle(zero, bell_state()), std::invalid_argument);
}

TEST_CASE("tensor and partial trace") {
    const auto a = PureState::basis_state({2}, {1});
    Vec plus(2);
    plus << kInvSqrt2, kInvSqrt2;
    const auto b = PureState({2}, plus);

    SUBCASE("product state reduces to its factor") {
        const auto ab = tensor(a, b);
        const auto rho = DensityMatrix::from_pure(ab);
        const auto ra = partial_trace(rho, {0});
        const Mat expect_a = a.amps() * a.amps().adjoint();
        CHECK((ra.mat() - expect_a).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("Bell state reduces to maximal mixture") {
        const auto r = partial_trace(DensityMatrix::from_pure(bell_state()), {0});
        CHECK((r.mat() - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("GHZ keep {0,1}: index-contraction oracle") {
        const auto r = partial_trace(DensityMatrix::from_pure(ghz3()), {0, 1});
        Mat expect = Mat::Zero(4, 4);
        expect(0, 0) = 0.5; // |00><00|
        expect(3, 3) = 0.5; // |11><11|
        CHECK((r.mat() - expect).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(r.mat().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("invalid keep set") {
        const auto rho = DensityMatrix::from_pure(bell_state());
        CHECK_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
        CHECK_THROWS_AS(partial_trace(rho, {2}), std::invalid_argument);
    }
}

TEST_CASE("entanglement entropy") {
    CHECK(entanglement_entropy(bell_state(), {0}) == doctest::Approx(1.0).epsilon(1e-12));

    const auto product = tensor(PureState::basis_state({2}, {0}), PureState::basis_state({2}, {1}));
    CHECK(entanglement_entropy(product, {0}) == doctest::Approx(0.0));

    // theta1 = pi/3, theta2 = -theta3 = pi/4: the amplitude-matrix rows are
    // orthogonal, so the Schmidt weights are exactly (cos^2, sin^2)(pi/3).
    const double t1 = std::numbers::pi / 3, t2 = std::numbers::pi / 4, t3 = -t2;
    Vec v(4);
    v << std::cos(t1) * std::cos(t2), std::cos(t1) * std::sin(t2), std::sin(t1) * std::cos(t3),
        std::sin(t1) * std::sin(t3);
    const PureState skewed({2, 2}, v);
    const double w0 = 0.25, w1 = 0.75;
    const double oracle = -w0 * std::log2(w0) - w1 * std::log2(w1);
    CHECK(oracle == doctest::Approx(0.8112781244591328).epsilon(1e-12));
    CHECK(entanglement_entropy(skewed, {0}) == doctest::Approx(oracle).epsilon(1e-10));
    // Either side of the cut gives the same value.
    CHECK(entanglement_entropy(skewed, {1}) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("entanglement entropy invariant under local unitaries") {
    Xoshiro256ss rng(31);
    for (int i = 0; i < 20; ++i) {
        const auto s = random_state(rng, {2, 3});
        const Mat ua = random_unitary(rng, 2);
        const Mat ub = random_unitary(rng, 3);
        Vec rotated(6);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 3; ++b) {
                cxd acc = 0.0;
                for (int ap = 0; ap < 2; ++ap)
                    for (int bp = 0; bp < 3; ++bp)
                        acc += ua(a, ap) * ub(b, bp) * s.amps()(ap * 3 + bp);
                rotated(a * 3 + b) = acc;
            }
        const PureState rs({2, 3}, rotated);
        CHECK(entanglement_entropy(rs, {0}) ==
              doctest::Approx(entanglement_entropy(s, {0})).epsilon(1e-9));
    }
}

TEST_CASE("partial trace unaffected by operations on discarded subsystems") {
    // The algebraic core of the reduced-dynamics invariance claim.
    Xoshiro256ss rng(77);
    for (int i = 0; i < 20; ++i) {
        const auto s = random_state(rng, {2, 2, 3});
        const Mat u = random_unitary(rng, 3);
        Vec rotated(12);
        for (int ab = 0; ab < 4; ++ab)
            for (int c = 0; c < 3; ++c) {
                cxd acc = 0.0;
                for (int cp = 0; cp < 3; ++cp) acc += u(c, cp) * s.amps()(ab * 3 + cp);
                rotated(ab * 3 + c) = acc;
            }
        const auto before = partial_trace(DensityMatrix::from_pure(s), {0, 1});
        const auto after = partial_trace(DensityMatrix::from_pure(PureState({2, 2, 3}, rotated)),
                                         {0, 1});
        CHECK((before.mat() - after.mat()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("factorize: named examples") {
    Vec plus(2);
    plus << kInvSqrt2, kInvSqrt2;

    SUBCASE("three singles") {
        const auto s = tensor(tensor(PureState::basis_state({2}, {0}), PureState({2}, plus)),
                              PureState::basis_state({2}, {1}));
        const auto f = factorize(s, 1e-10);
        CHECK(f.blocks == std::vector<std::vector<int>>{{0}, {1}, {2}});
        CHECK(f.all_singletons());
    }

    SUBCASE("Bell pair times a single") {
        const auto s = tensor(bell_state(), PureState::basis_state({2}, {0}));
        const auto f = factorize(s, 1e-10);
        CHECK(f.blocks == std::vector<std::vector<int>>{{0, 1}, {2}});
    }

    SUBCASE("GHZ is one block") {
        const auto f = factorize(ghz3(), 1e-10);
        CHECK(f.blocks == std::vector<std::vector<int>>{{0, 1, 2}});
        CHECK(f.largest_block() == 3);
    }
}

TEST_CASE("factorize recovers the block structure of random product states") {
    Xoshiro256ss rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        // Random product of a 2-subsystem entangled block, a single, and a
        // 2-subsystem entangled block over mixed dims.
        const auto blockA = random_state(rng, {2, 3});
        const auto single = random_state(rng, {2});
        const auto blockB = random_state(rng, {3, 2});
        const auto s = tensor(tensor(blockA, single), blockB);
        const auto f = factorize(s, 1e-10);
        // blockA = {0,1} (generic states are entangled), single = {2}, blockB = {3,4}
        REQUIRE(f.blocks.size() == 3);
        CHECK(f.blocks[0] == std::vector<int>{0, 1});
        CHECK(f.blocks[1] == std::vector<int>{2});
        CHECK(f.blocks[2] == std::vector<int>{3, 4});
    }
}

TEST_CASE("shannon state information") {
    CHECK(shannon_state_information(2, 16) == doctest::Approx(16.0));
    CHECK(shannon_state_information(4, 64) == doctest::Approx(192.0));
    CHECK(shannon_state_information(1, 64) == doctest::Approx(0.0));
    CHECK_THROWS_AS(shannon_state_information(0, 8), std::invalid_argument);
}

TEST_CASE("mnemonic dimension of a factorization") {
    FactorizationStructure f{{{0, 1}, {2}}};
    CHECK(f.block_dimension_products({2, 3, 5}) == std::vector<std::int64_t>{6, 5});
    CHECK(mnemonic_dimension(f, {2, 2, 2}) == doctest::Approx(6.0)); // 4 + 2
    FactorizationStructure singles{{{0}, {1}, {2}}};
    CHECK(mnemonic_dimension(singles, {2, 2, 2}) == doctest::Approx(6.0));
    FactorizationStructure whole{{{0, 1, 2}}};
    CHECK(mnemonic_dimension(whole, {2, 2, 2}) == doctest::Approx(8.0));
}

TEST_CASE("state validation") {
    Vec bad(3);
    bad << 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(PureState({2, 2}, bad), std::invalid_argument);
    Vec unnorm(2);
    unnorm << 0.9, 0.1;
    CHECK_THROWS_AS(PureState({2}, unnorm), std::invalid_argument);
    CHECK_NOTHROW(PureState::normalized({2}, unnorm));

    Mat m = Mat::Zero(2, 2);
    m(0, 1) = cxd(0.0, 0.5);
    m(1, 0) = cxd(0.0, 0.5); // not Hermitian: should be -0.5i
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
    CHECK_THROWS_AS(DensityMatrix({2}, m), std::invalid_argument);
}

TEST_CASE("random product states factor as generated, n <= 6") {
    Xoshiro256ss rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 5); // 2..6
        PureState s = random_state(rng, {2});
        std::vector<std::vector<int>> expect{{0}};
        for (int i = 1; i < n; ++i) {
            s = tensor(s, random_state(rng, {2}));
            expect.push_back({i});
        }
        const auto f = factorize(s, 1e-10);
        CHECK(f.blocks == expect);
    }
}
