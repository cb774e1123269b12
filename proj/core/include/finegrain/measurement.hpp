#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finegrain/dynamics.hpp"
#include "finegrain/hilbert.hpp"
#include "finegrain/resources.hpp"
#include "finegrain/rng.hpp"

namespace fg {

/// Pre-measurement chain: system S (dimension D), apparatus M with D macro
/// pointer sectors of micro_dim microstates each, environment Q with a
/// microstate per (sector, apparatus-microstate) pair.
///
/// theta controls how decohered the environment records are: 1 means the
/// correlated environment states are exactly orthogonal, below 1 they share a
/// common component so that distinct records overlap by 1 - theta. The
/// environment factor carries one extra slack axis to host that component.
struct ChainSpec {
    int system_dim = 2;

    struct Apparatus {
        int micro_dim = 1;
        Mat weights; ///< system_dim x micro_dim, rows L2-normalized
    } apparatus;

    struct Environment {
        int micro_dim = 1;
        std::vector<Mat> weights; ///< per sector: micro_dim(M) x micro_dim(Q), L2-normalized
        double theta = 1.0;
    } environment;

    void validate() const;
    int m_dim() const { return system_dim * apparatus.micro_dim; }
    int q_dim() const { return system_dim * apparatus.micro_dim * environment.micro_dim + 1; }
    std::vector<int> dims() const { return {system_dim, m_dim(), q_dim()}; }

    /// Uniform weight profiles.
    static ChainSpec uniform(int system_dim, int apparatus_micro, int environment_micro,
                             double theta = 1.0);
    /// Random weight profiles (Born-normalized rows) from the given generator.
    static ChainSpec random(Xoshiro256ss& rng, int system_dim, int apparatus_micro,
                            int environment_micro, double theta = 1.0);
};

/// Weighted list of pure states; proper marks a genuine statistical mixture
/// as opposed to a reduced operator read as one.
struct Ensemble {
    struct Member {
        double weight;
        PureState state;
        FactorizationStructure factorization;
        std::int64_t outcome_label = 0; ///< raveled index over the measured factors
    };
    std::vector<Member> members;
    bool proper = false;

    DensityMatrix density() const;
    void validate() const;
};

/// One candidate transition basis: a complete product basis of the full
/// space given factor by factor. A measured factor carries an orthonormal
/// basis (empty matrix = computational); an unmeasured factor keeps its
/// conditional state. Jointly entangled bases cannot be expressed and are
/// rejected at validation.
struct TransitionBasis {
    struct Factor {
        bool measured = true;
        Mat basis; ///< columns are basis vectors; empty = identity
    };
    std::string id;
    std::vector<Factor> factors;

    void validate(const std::vector<int>& dims) const;

    static TransitionBasis computational(const std::vector<int>& dims, std::string id = "computational");
    /// Computational bases on every factor of a premeasurement chain; the
    /// chain encoding makes this the extended pointer basis.
    static TransitionBasis extended_pointer(const ChainSpec& chain);
    /// Measure only the given factor, in a Fourier-rotated basis; everything
    /// else stays conditional.
    static TransitionBasis rotated_factor(const std::vector<int>& dims, int factor,
                                          std::string id = "rotated-environment");
};

enum class ThresholdMode { m1, m2, explicit_bits };

/// Transition engine configuration: threshold scenario, fine-graining,
/// seeded randomness and the declared candidate bases.
struct TransitionConfig {
    ThresholdMode threshold_mode = ThresholdMode::explicit_bits;
    double explicit_threshold_bits = 1e12;
    double mu = 64;
    double energy_E = 0.0;   ///< J, needed for the m1 mode
    double coupling_J = 0.0; ///< J, needed for the m1 mode
    std::uint64_t rng_seed = 1;
    double separability_tol = 1e-10;
    std::vector<TransitionBasis> candidate_bases;
    bool force = false; ///< allow transitions on stable systems

    void validate(const std::vector<int>& dims) const;
    LogQuantity threshold(const PhysicalConstants& pc = {}) const;
};

/// One information-transition event, with enough generator state to replay
/// the trajectory bit-exactly.
struct TransitionRecord {
    double time = 0.0;
    StabilityVerdict trigger;
    std::string basis_id;
    int basis_index = 0;
    std::int64_t outcome_index = 0;
    double probability = 0.0;
    LogQuantity pre_memory{0.0, Unit::bits};
    LogQuantity post_memory{0.0, Unit::bits};
    Xoshiro256ss::state_type seed_state{};
};

/// Entangle S with the apparatus and environment microstates:
/// sum_i a_i eps^M_{i,xi} eps^Q_{i,xi,eta} |i> |i,xi> |i,xi,eta>, with
/// environment records orthogonal for theta = 1 and overlapping by
/// 1 - theta otherwise.
PureState premeasure(const PureState& system, const ChainSpec& chain);

/// mu * sum_blocks prod(D) per member; the ensemble value is the maximum
/// over members (it must be supportable whichever member is real).
LogQuantity ensemble_state_information(const Ensemble& e, double mu);

/// Expectation-weighted variant, reported alongside the maximum in
/// selection diagnostics.
LogQuantity ensemble_state_information_expected(const Ensemble& e, double mu);

/// Project the state onto a candidate basis: one member per outcome of the
/// measured factors, unmeasured factors left in their renormalized
/// conditional state. Members below the weight floor are dropped.
Ensemble induced_ensemble(const PureState& state, const TransitionBasis& basis,
                          double separability_tol = 1e-10, double weight_floor = 1e-12);

struct BasisCost {
    std::string id;
    double cost_max_log10;
    double cost_expected_log10;
};

/// Mnemonic minimization: pick the candidate whose induced ensemble needs
/// the least state information; ties break toward the lowest index.
int select_transition_basis(const PureState& state, const TransitionConfig& cfg,
                            std::vector<BasisCost>* diagnostics = nullptr);

/// Stability of a state under the config's threshold. The effective
/// entangled count comes from the largest irreducible factor block; a
/// separable system is n = 1 per object.
StabilityVerdict state_stability(const PureState& state, const TransitionConfig& cfg,
                                 const PhysicalConstants& pc = {});

/// Born-rule projection of an unstable state into a member of the selected
/// basis's ensemble. Throws stability_error when called on a stable system
/// without the force flag.
std::pair<PureState, TransitionRecord> information_transition(const PureState& state,
                                                              const TransitionConfig& cfg,
                                                              double t, Xoshiro256ss& rng,
                                                              const PhysicalConstants& pc = {});

/// Full projection ensemble in the given basis; proper by construction.
Ensemble nonselective_transition(const PureState& state, const TransitionBasis& basis,
                                 double separability_tol = 1e-10);

/// Max elementwise deviation between Tr_discard(|psi><psi|) and the reduced
/// nonselective-transition density: zero (to round-off) whenever the basis
/// leaves the kept factors unmeasured or the state is decohered.
double verify_reduced_invariance(const PureState& state, const TransitionBasis& basis,
                                 const std::vector<int>& discard);

struct TrajectoryResult {
    std::vector<TransitionRecord> records;
    PureState final_state;
};

/// Alternate unitary steps with stability checks; every instability fires an
/// information transition at that step's timestamp. Deterministic given the
/// generator state.
TrajectoryResult run_trajectory(const PureState& initial, const HamiltonianSpec& h,
                                const TransitionConfig& cfg, double t_total, double dt,
                                Xoshiro256ss& rng, const Units& units = Units::si(),
                                const PhysicalConstants& pc = {});

/// Two-macro-sector chain (here/there) built per the decohered-cat
/// construction; returns the proper mixture over the cat factor with weights
/// sum_eta |alpha_{xi,eta}|^2 / 2 per microstate.
Ensemble cat_mixture(const ChainSpec& chain);

/// The premeasured cat+environment state the mixture derives from.
PureState cat_state(const ChainSpec& chain);

} // namespace fg
