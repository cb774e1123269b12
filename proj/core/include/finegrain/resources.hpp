#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finegrain/constants.hpp"
#include "finegrain/log_quantity.hpp"

namespace fg {

/// Input to every resource formula. Per-object dimensions are stored as
/// base-10 logarithms because a single elementary particle already has
/// D ~ 10^182; desk-scale specs just carry small exponents.
struct SystemSpec {
    double n = 1;                    ///< count of elementary objects
    std::vector<double> dim_log10;   ///< per-object log10(D); size 1 = identical objects
    double energy_E = 0.0;           ///< J, mean per object
    double coupling_J = 0.0;         ///< J
    double mu = 4;                   ///< bits per amplitude
    bool separable = false;

    static SystemSpec uniform(double n, double D, double mu);

    void validate() const;
    /// Sum of per-object log10(D), i.e. log10 of the joint dimension.
    double joint_dim_log10() const;
    /// log10 of the sum of per-object dimensions (separable register size).
    double separable_dim_log10() const;
};

enum class StabilityScenario { chaos, completeness };

std::string to_string(StabilityScenario s);
StabilityScenario stability_scenario_from_string(const std::string& s);

/// Outcome of a memory-threshold comparison, both sides kept in log space.
struct StabilityVerdict {
    bool stable = true;
    StabilityScenario scenario = StabilityScenario::completeness;
    LogQuantity required{0.0, Unit::bits};
    LogQuantity limit{0.0, Unit::bits};
    double margin_log10 = 0.0; ///< limit - required; >= 0 iff stable
};

/// Memory to register the state information: mu * prod(D_i) bits entangled,
/// mu * sum(D_i) bits when the objects stay separable.
LogQuantity state_information(const SystemSpec& spec);

/// 2E / (pi hbar) op/s: the rate of classical (orthogonal-state) logic.
double classical_op_rate(double energy_joules, const PhysicalConstants& pc = {});

/// 2^(mu/2) * prod(D_i) * n * E / hbar op/s: the rate at which amplitudes are
/// effectively computed during evolution.
LogQuantity quantum_op_rate(const SystemSpec& spec, const PhysicalConstants& pc = {});

/// Computational speed per supporting bit: 2^(mu/2) n E / (mu hbar).
LogQuantity clock_rate(const SystemSpec& spec, const PhysicalConstants& pc = {});

/// hbar / (n J) seconds before chaos sets in among n coupled objects.
double chaos_timescale(double n, double coupling_joules, const PhysicalConstants& pc = {});

/// M1 = 2^(mu/2) E/J bits: the chaos-scenario memory ceiling.
LogQuantity memory_limit_chaos(double energy_joules, double coupling_joules, double mu);

/// M2 = mu 2^(mu/2) bits: the completeness-scenario memory ceiling.
LogQuantity memory_limit_completeness(double mu);

/// Compare the system's memory demand against the scenario's ceiling.
/// The chaos scenario defaults omega_chi to nJ/hbar; the error-correction
/// code-rate exponent is fixed at 1 (override only for exploration).
StabilityVerdict stability_check(const SystemSpec& spec, StabilityScenario scenario,
                                 const PhysicalConstants& pc = {},
                                 std::optional<double> omega_chi = std::nullopt,
                                 double code_rate_exponent = 1.0);

/// n_max = floor(mu / (2 log2 D)): the most D-dimensional objects that can be
/// entangled without violating completeness.
long long max_entangled_objects(double mu, double D);

/// Solve mu * D^n = M for n (real-valued).
double max_objects_for_memory(const LogQuantity& memory_bits, double mu, double D);

/// lambda_u = [mu m_p / (1274 ln10 rho)]^(1/3) meters.
double info_length_scale(double mu, double rho_kg_m3, const PhysicalConstants& pc = {});

/// lambda_u from the blackbody-entropy chain, given M2.
double info_length_scale_thermo(const LogQuantity& m2_bits, double mu, double rho_kg_m3,
                                const PhysicalConstants& pc = {});

/// tau_u = lambda_u / c_s seconds.
double unitary_phase_duration(double lambda_u_m, double c_s_m_per_s);

/// Delta x(t) = Delta x0 + h t / (m Delta x0) meters.
double wavepacket_spread(double dx0_m, double mass_kg, double t_s,
                         const PhysicalConstants& pc = {});

} // namespace fg
