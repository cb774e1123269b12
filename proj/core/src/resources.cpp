#include "finegrain/resources.hpp"

#include <cmath>
#include <numbers>

namespace fg {

namespace {
constexpr double kLog10Of2 = 0.30102999566398119521;
constexpr double kCmpTol = 1e-9;
} // namespace

SystemSpec SystemSpec::uniform(double n, double D, double mu) {
    SystemSpec s;
    s.n = n;
    s.dim_log10 = {std::log10(D)};
    s.mu = mu;
    return s;
}

void SystemSpec::validate() const {
    if (n < 1) throw std::invalid_argument("SystemSpec: n must be >= 1");
    if (mu < 4 || (mu < 1e15 && std::fmod(mu, 2.0) != 0.0))
        throw std::invalid_argument("SystemSpec: mu must be even and >= 4");
    if (dim_log10.empty()) throw std::invalid_argument("SystemSpec: dims missing");
    if (dim_log10.size() > 1 && static_cast<double>(dim_log10.size()) != n)
        throw std::invalid_argument("SystemSpec: per-object dims must match n");
}

double SystemSpec::joint_dim_log10() const {
    if (dim_log10.size() == 1) return n * dim_log10[0];
    double sum = 0.0;
    for (double d : dim_log10) sum += d;
    return sum;
}

double SystemSpec::separable_dim_log10() const {
    if (dim_log10.size() == 1) return std::log10(n) + dim_log10[0];
    LogQuantity acc{dim_log10[0], Unit::count};
    for (std::size_t i = 1; i < dim_log10.size(); ++i)
        acc = acc.add({dim_log10[i], Unit::count});
    return acc.log10();
}

std::string to_string(StabilityScenario s) {
    return s == StabilityScenario::chaos ? "chaos" : "completeness";
}

StabilityScenario stability_scenario_from_string(const std::string& s) {
    if (s == "chaos") return StabilityScenario::chaos;
    if (s == "completeness") return StabilityScenario::completeness;
    throw schema_error("unknown stability scenario: " + s);
}

LogQuantity state_information(const SystemSpec& spec) {
    spec.validate();
    const double dim_log10 = spec.separable ? spec.separable_dim_log10() : spec.joint_dim_log10();
    return {std::log10(spec.mu) + dim_log10, Unit::bits};
}

double classical_op_rate(double energy_joules, const PhysicalConstants& pc) {
    if (energy_joules <= 0) throw std::invalid_argument("energy must be positive");
    return 2.0 * energy_joules / (std::numbers::pi * pc.hbar);
}

LogQuantity quantum_op_rate(const SystemSpec& spec, const PhysicalConstants& pc) {
    spec.validate();
    const double log10 = spec.mu / 2.0 * kLog10Of2 + spec.joint_dim_log10() +
                         std::log10(spec.n * spec.energy_E / pc.hbar);
    return {log10, Unit::ops_per_sec};
}

LogQuantity clock_rate(const SystemSpec& spec, const PhysicalConstants& pc) {
    spec.validate();
    const double log10 =
        spec.mu / 2.0 * kLog10Of2 + std::log10(spec.n * spec.energy_E / (spec.mu * pc.hbar));
    return {log10, Unit::ops_per_sec};
}

double chaos_timescale(double n, double coupling_joules, const PhysicalConstants& pc) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (coupling_joules <= 0) throw std::invalid_argument("coupling must be positive");
    return pc.hbar / (n * coupling_joules);
}

LogQuantity memory_limit_chaos(double energy_joules, double coupling_joules, double mu) {
    return {mu / 2.0 * kLog10Of2 + std::log10(energy_joules / coupling_joules), Unit::bits};
}

LogQuantity memory_limit_completeness(double mu) {
    return {std::log10(mu) + mu / 2.0 * kLog10Of2, Unit::bits};
}

StabilityVerdict stability_check(const SystemSpec& spec, StabilityScenario scenario,
                                 const PhysicalConstants& pc, std::optional<double> omega_chi,
                                 double code_rate_exponent) {
    spec.validate();
    StabilityVerdict v;
    v.scenario = scenario;
    if (scenario == StabilityScenario::chaos) {
        if (spec.coupling_J <= 0 && !omega_chi)
            throw std::invalid_argument("chaos scenario needs coupling_J or omega_chi");
        const double w = omega_chi ? *omega_chi : spec.n * spec.coupling_J / pc.hbar;
        // Error-correction demand scales as D^(n x); x = 1 is code rate 1/2.
        // 2^(mu/2) n E >= hbar w mu D^(nx)  <=>  mu D^(nx) <= 2^(mu/2) n E / (hbar w)
        v.required = LogQuantity{
            std::log10(spec.mu) + code_rate_exponent * spec.joint_dim_log10(), Unit::bits};
        v.limit = LogQuantity{spec.mu / 2.0 * kLog10Of2 +
                                  std::log10(spec.n * spec.energy_E / (pc.hbar * w)),
                              Unit::bits};
    } else {
        // mu >= 2 n log2 D  <=>  mu D^n <= mu 2^(mu/2)
        v.required = LogQuantity{std::log10(spec.mu) + spec.joint_dim_log10(), Unit::bits};
        v.limit = memory_limit_completeness(spec.mu);
    }
    v.margin_log10 = v.limit.log10() - v.required.log10();
    v.stable = v.margin_log10 >= -kCmpTol;
    return v;
}

long long max_entangled_objects(double mu, double D) {
    if (D < 2) throw std::invalid_argument("D must be >= 2");
    return static_cast<long long>(std::floor(mu / (2.0 * std::log2(D)) + kCmpTol));
}

double max_objects_for_memory(const LogQuantity& memory_bits, double mu, double D) {
    if (memory_bits.unit() != Unit::bits)
        throw unit_error("max_objects_for_memory expects a bit count");
    return (memory_bits.log10() - std::log10(mu)) / std::log10(D);
}

double info_length_scale(double mu, double rho_kg_m3, const PhysicalConstants& pc) {
    if (rho_kg_m3 <= 0) throw std::invalid_argument("density must be positive");
    // 1274 = 182 * 7 degrees of freedom per unit atomic number.
    return std::cbrt(mu * pc.m_p / (1274.0 * std::numbers::ln10 * rho_kg_m3));
}

double info_length_scale_thermo(const LogQuantity& m2_bits, double mu, double rho_kg_m3,
                                const PhysicalConstants& pc) {
    if (rho_kg_m3 <= 0) throw std::invalid_argument("density must be positive");
    const double ln_states = (m2_bits.log10() - std::log10(mu)) * std::numbers::ln10;
    const double geometric = std::pow(15.0 / (std::numbers::pi * std::numbers::pi), 0.25);
    return std::cbrt(geometric * 3.0 * ln_states / 4.0) *
           std::pow(pc.hbar / (rho_kg_m3 * pc.c), 0.25);
}

double unitary_phase_duration(double lambda_u_m, double c_s_m_per_s) {
    if (c_s_m_per_s <= 0) throw std::invalid_argument("transport speed must be positive");
    return lambda_u_m / c_s_m_per_s;
}

double wavepacket_spread(double dx0_m, double mass_kg, double t_s, const PhysicalConstants& pc) {
    if (dx0_m <= 0 || mass_kg <= 0) throw std::invalid_argument("spread inputs must be positive");
    return dx0_m + pc.h * t_s / (mass_kg * dx0_m);
}

} // namespace fg
