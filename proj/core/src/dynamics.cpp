#include "finegrain/dynamics.hpp"

#include <cmath>

namespace fg {

namespace {

constexpr double kHermTol = 1e-10;
const cxd kI{0.0, 1.0};

int parity_prefix(std::uint64_t bits, int j, int n) {
    // Parity of the first j digits (most significant first).
    int p = 0;
    for (int b = 0; b < j; ++b) p ^= static_cast<int>((bits >> (n - 1 - b)) & 1u);
    return p;
}

Mat second_difference(const Lattice& lat) {
    Mat d2 = Mat::Zero(lat.n, lat.n);
    const double inv = 1.0 / (lat.dx * lat.dx);
    for (int i = 0; i < lat.n; ++i) {
        d2(i, i) = -2.0 * inv;
        if (i > 0) d2(i, i - 1) = inv;
        if (i + 1 < lat.n) d2(i, i + 1) = inv;
    }
    return d2;
}

} // namespace

std::vector<int> HamiltonianSpec::dims() const {
    if (const auto* d = std::get_if<Dense>(&kind)) return d->dims;
    if (std::holds_alternative<QubitFlip>(kind)) return {2};
    if (const auto* x = std::get_if<XChain>(&kind))
        return std::vector<int>(x->omegas.size(), 2);
    const auto& fp = std::get<FreeParticle>(kind);
    return {fp.lattice.n};
}

Mat HamiltonianSpec::materialize(const Units& units) const {
    Mat h;
    if (const auto* d = std::get_if<Dense>(&kind)) {
        h = d->matrix;
    } else if (const auto* q = std::get_if<QubitFlip>(&kind)) {
        const double s = 0.5 * (q->e0 + q->e1);
        const double dlt = 0.5 * (q->e0 - q->e1);
        h = Mat(2, 2);
        h << s, dlt, dlt, s;
    } else if (const auto* x = std::get_if<XChain>(&kind)) {
        const int n = static_cast<int>(x->omegas.size());
        if (n < 1 || n > 12) throw std::invalid_argument("x_chain supports 1..12 qubits");
        const std::int64_t dim = std::int64_t{1} << n;
        h = Mat::Zero(dim, dim);
        // X_1...X_j flips the first j bits.
        for (int j = 1; j <= n; ++j) {
            std::uint64_t flip = 0;
            for (int b = 0; b < j; ++b) flip |= std::uint64_t{1} << (n - 1 - b);
            for (std::int64_t k = 0; k < dim; ++k)
                h(static_cast<std::int64_t>(k ^ static_cast<std::int64_t>(flip)), k) +=
                    units.hbar * x->omegas[static_cast<std::size_t>(j - 1)];
        }
    } else {
        const auto& fp = std::get<FreeParticle>(kind);
        h = -(units.hbar * units.hbar / (2.0 * fp.mass)) * second_difference(fp.lattice);
    }
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
        throw std::invalid_argument("Hamiltonian is not Hermitian");
    return h;
}

void LatticeState::validate() const {
    if (rho.rows() != lattice.n || rho.cols() != lattice.n)
        throw std::invalid_argument("LatticeState: matrix shape does not match lattice");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
        throw std::invalid_argument("LatticeState: rho is not Hermitian");
    if (std::fabs(rho.trace().real() * lattice.dx - 1.0) > 1e-8)
        throw std::invalid_argument("LatticeState: sum(diag) * dx must be 1");
}

UnitaryPropagator::UnitaryPropagator(const HamiltonianSpec& h, const Units& units)
    : hbar_(units.hbar) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h.materialize(units));
    vectors_ = es.eigenvectors();
    energies_ = es.eigenvalues();
}

PureState UnitaryPropagator::evolve(const PureState& state, double t) const {
    if (state.dim() != vectors_.rows())
        throw std::invalid_argument("evolve_unitary: dimension mismatch");
    Vec coeffs = vectors_.adjoint() * state.amps();
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
        coeffs(i) *= std::exp(-kI * (energies_(i) * t / hbar_));
    return PureState(state.dims(), vectors_ * coeffs);
}

PureState evolve_unitary(const PureState& state, const HamiltonianSpec& h, double t,
                         const Units& units) {
    return UnitaryPropagator(h, units).evolve(state, t);
}

PureState x_chain_closed_form(const std::vector<double>& omegas, double t) {
    const int n = static_cast<int>(omegas.size());
    if (n < 1 || n > 12) throw std::invalid_argument("x_chain supports 1..12 qubits");
    const std::int64_t dim = std::int64_t{1} << n;

    // Amplitudes in the X-product eigenbasis; eigenvalue of X_1...X_j on the
    // label s is 1 - 2 * parity(first j bits of s).
    Vec coeff(dim);
    const double scale = std::pow(2.0, -0.5 * n);
    for (std::int64_t s = 0; s < dim; ++s) {
        double phase = 0.0;
        for (int j = 1; j <= n; ++j)
            phase += omegas[static_cast<std::size_t>(j - 1)] *
                     (1 - 2 * parity_prefix(static_cast<std::uint64_t>(s), j, n));
        coeff(s) = scale * std::exp(-kI * (phase * t));
    }

    // Back to the computational basis with an in-place Walsh-Hadamard pass.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::int64_t len = 1; len < dim; len <<= 1)
        for (std::int64_t i = 0; i < dim; i += len << 1)
            for (std::int64_t k = i; k < i + len; ++k) {
                const cxd a = coeff(k), b = coeff(k + len);
                coeff(k) = (a + b) * inv_sqrt2;
                coeff(k + len) = (a - b) * inv_sqrt2;
            }

    return PureState(std::vector<int>(n, 2), std::move(coeff));
}

namespace {

Mat lindblad_rhs(const Mat& rho, const Mat& h, const std::vector<Mat>& ls,
                 const std::vector<Mat>& lthl, double hbar) {
    Mat out = -kI / hbar * (h * rho - rho * h);
    for (std::size_t k = 0; k < ls.size(); ++k) {
        out -= 0.5 / hbar *
               (lthl[k] * rho + rho * lthl[k] - 2.0 * ls[k] * rho * ls[k].adjoint());
    }
    return out;
}

} // namespace

DensityMatrix lindblad_evolve(const DensityMatrix& rho0, const LindbladSpec& spec, double t,
                              double dt, const Units& units) {
    if (dt <= 0 || t < 0) throw std::invalid_argument("lindblad_evolve: bad time step");
    if (dt > t && t > 0) dt = t;
    const Mat h = spec.h0.materialize(units);
    if (h.rows() != rho0.dim())
        throw std::invalid_argument("lindblad_evolve: Hamiltonian dimension mismatch");
    std::vector<Mat> lthl;
    for (const auto& l : spec.collapse_ops) {
        if (l.rows() != rho0.dim() || l.cols() != rho0.dim())
            throw std::invalid_argument("lindblad_evolve: collapse operator shape mismatch");
        lthl.push_back(l.adjoint() * l);
    }

    Mat rho = rho0.mat();
    double remaining = t;
    while (remaining > 1e-15 * (t + 1.0)) {
        const double step = std::min(dt, remaining);
        const Mat k1 = lindblad_rhs(rho, h, spec.collapse_ops, lthl, units.hbar);
        const Mat k2 = lindblad_rhs(rho + 0.5 * step * k1, h, spec.collapse_ops, lthl, units.hbar);
        const Mat k3 = lindblad_rhs(rho + 0.5 * step * k2, h, spec.collapse_ops, lthl, units.hbar);
        const Mat k4 = lindblad_rhs(rho + step * k3, h, spec.collapse_ops, lthl, units.hbar);
        rho += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint().eval());
        const double drift = std::fabs(rho.trace().real() - 1.0);
        if (drift > 1e-6)
            throw watchdog_error("lindblad_evolve: trace drift " + std::to_string(drift) +
                                 " exceeded 1e-6; reduce dt");
        remaining -= step;
    }
    return DensityMatrix(rho0.dims(), std::move(rho));
}

LatticeState scattering_damping(const LatticeState& state, double lambda, double t) {
    state.validate();
    const auto x = state.lattice.positions();
    Mat out = state.rho;
    for (int i = 0; i < state.lattice.n; ++i)
        for (int j = 0; j < state.lattice.n; ++j) {
            const double sep = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
            out(i, j) *= std::exp(-lambda * t * sep * sep);
        }
    return {state.lattice, std::move(out)};
}

LatticeState decohered_free_evolution(const LatticeState& state, double mass, double lambda,
                                      double t, double dt, const Units& units) {
    state.validate();
    if (dt <= 0 || t < 0) throw std::invalid_argument("decohered_free_evolution: bad time step");
    const int n = state.lattice.n;
    const double dx = state.lattice.dx;
    const bool kinetic = std::isfinite(mass);

    // Explicit 4th-order stepping is stable for |lambda_max| dt < 2.8; the
    // kinetic spectrum tops out near 2 hbar / (m dx^2) and the damping term
    // at Lambda span^2.
    double rate = 0.0;
    if (kinetic) rate += 2.0 * units.hbar / (mass * dx * dx);
    const double span = (n - 1) * dx;
    rate += lambda * span * span;
    if (rate * dt > 2.8)
        throw watchdog_error("decohered_free_evolution: dt violates the stability bound");

    const auto x = state.lattice.positions();
    Mat damp(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double sep = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
            damp(i, j) = -lambda * sep * sep;
        }
    const Mat d2 = second_difference(state.lattice);

    auto rhs = [&](const Mat& rho) {
        Mat out = damp.cwiseProduct(rho);
        if (kinetic) out += kI * units.hbar / (2.0 * mass) * (d2 * rho - rho * d2);
        return out;
    };

    Mat rho = state.rho;
    double remaining = t;
    while (remaining > 1e-15 * (t + 1.0)) {
        const double step = std::min(dt, remaining);
        const Mat k1 = rhs(rho);
        const Mat k2 = rhs(rho + 0.5 * step * k1);
        const Mat k3 = rhs(rho + 0.5 * step * k2);
        const Mat k4 = rhs(rho + step * k3);
        rho += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint().eval());
        remaining -= step;
    }
    return {state.lattice, std::move(rho)};
}

LindbladSpec lindblad_position_generator(double lambda, const Lattice& lattice, double mass) {
    LindbladSpec spec;
    spec.h0.kind = HamiltonianSpec::FreeParticle{mass, lattice};
    Mat l = Mat::Zero(lattice.n, lattice.n);
    const auto x = lattice.positions();
    for (int i = 0; i < lattice.n; ++i) l(i, i) = std::sqrt(2.0 * lambda) * x[static_cast<std::size_t>(i)];
    spec.collapse_ops.push_back(std::move(l));
    return spec;
}

DensityMatrix lattice_to_density(const LatticeState& state) {
    state.validate();
    return DensityMatrix({state.lattice.n}, state.rho * state.lattice.dx);
}

LatticeState density_to_lattice(const DensityMatrix& rho, const Lattice& lattice) {
    if (rho.dim() != lattice.n)
        throw std::invalid_argument("density_to_lattice: dimension mismatch");
    return {lattice, rho.mat() / lattice.dx};
}

} // namespace fg
