#pragma once

#include <variant>
#include <vector>

#include "finegrain/constants.hpp"
#include "finegrain/hilbert.hpp"

namespace fg {

/// 1-D hard-wall lattice for position-space density matrices.
struct Lattice {
    int n = 16;
    double dx = 1.0; ///< meters (or natural length units)

    std::vector<double> positions() const {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = (i - 0.5 * (n - 1)) * dx;
        return x;
    }
};

/// Hamiltonian described either as an explicit Hermitian matrix or as one of
/// the model families used throughout: the two-level flip potential, the
/// entangling x-product chain, and the free particle on a lattice.
struct HamiltonianSpec {
    struct Dense {
        std::vector<int> dims;
        Mat matrix;
    };
    /// H = E0 |E0><E0| + E1 |E1><E1| with |E0/1> = (|0> +/- |1>)/sqrt(2).
    struct QubitFlip {
        double e0 = 0.0;
        double e1 = 1.0;
    };
    /// H = sum_j hbar w_j X_1 X_2 ... X_j acting on the first j qubits.
    struct XChain {
        std::vector<double> omegas;
    };
    /// H = p^2 / 2m with a central-difference Laplacian, hard walls.
    struct FreeParticle {
        double mass = 1.0;
        Lattice lattice;
    };

    std::variant<Dense, QubitFlip, XChain, FreeParticle> kind;

    std::vector<int> dims() const;
    /// Dense Hermitian matrix; throws if the dense form fails the 1e-10
    /// Hermiticity check.
    Mat materialize(const Units& units = Units::si()) const;
};

struct LindbladSpec {
    HamiltonianSpec h0;
    std::vector<Mat> collapse_ops;
};

/// Position-space density matrix rho(x, x') on a lattice; unit trace means
/// sum(diag) * dx = 1.
struct LatticeState {
    Lattice lattice;
    Mat rho;

    void validate() const;
};

/// exp(-i H t / hbar) |psi> via spectral decomposition.
PureState evolve_unitary(const PureState& state, const HamiltonianSpec& h, double t,
                         const Units& units = Units::si());

/// Pre-diagonalized propagator for stepping the same Hamiltonian many times.
class UnitaryPropagator {
  public:
    UnitaryPropagator(const HamiltonianSpec& h, const Units& units = Units::si());

    PureState evolve(const PureState& state, double t) const;

  private:
    Mat vectors_;
    Eigen::VectorXd energies_;
    double hbar_;
};

/// Closed form for the x-product chain on |0...0>: phases are the partial
/// parities of the X-eigenbasis label, transformed back to the computational
/// basis. Rejects n > 12.
PureState x_chain_closed_form(const std::vector<double>& omegas, double t);

/// Fixed-step 4th-order integration of
///   d rho/dt = -(i/hbar)[H0, rho]
///              - (1/2 hbar) sum_k (Lk+ Lk rho + rho Lk+ Lk - 2 Lk rho Lk+),
/// with per-step symmetrization. Throws watchdog_error if the running trace
/// drifts more than 1e-6 from 1.
DensityMatrix lindblad_evolve(const DensityMatrix& rho, const LindbladSpec& spec, double t,
                              double dt, const Units& units = Units::si());

/// rho(x, x', t) = rho(x, x', 0) exp(-Lambda t (x - x')^2); diagonal invariant.
LatticeState scattering_damping(const LatticeState& state, double lambda, double t);

/// Integrates d rho/dt = (i hbar / 2m)(d^2/dx^2 - d^2/dx'^2) rho
///                       - Lambda (x - x')^2 rho
/// with central differences; mass = infinity switches the kinetic term off.
/// Throws watchdog_error when dt violates the explicit-step stability bound.
LatticeState decohered_free_evolution(const LatticeState& state, double mass, double lambda,
                                      double t, double dt, const Units& units = Units::si());

/// LindbladSpec with H0 = p^2/2m on the lattice and L = sqrt(2 Lambda) x.
LindbladSpec lindblad_position_generator(double lambda, const Lattice& lattice, double mass);

/// Convert between the lattice normalization (sum diag * dx = 1) and the
/// operator normalization (trace = 1).
DensityMatrix lattice_to_density(const LatticeState& state);
LatticeState density_to_lattice(const DensityMatrix& rho, const Lattice& lattice);

} // namespace fg
