#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finegrain/constants.hpp"
#include "finegrain/log_quantity.hpp"

namespace fg {

/// One named, auditable estimate: inputs, formula, value, and - when a
/// published figure exists - the quoted value plus the log10 gap.
/// Known arithmetic gaps in the published figures are flagged, never
/// silently matched.
struct EstimateReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> inputs; ///< name -> rendered value
    std::string formula;
    LogQuantity value;
    std::optional<LogQuantity> quoted_value;
    std::optional<double> agreement_log10;
    bool flagged = false;
    std::string note;

    EstimateReport& with_quote(double log10_value);
    EstimateReport& flag(std::string why);
    EstimateReport& input(const std::string& key, double v, const std::string& unit = "");

    /// Gap within one order of magnitude, or the ratio of exponents within a
    /// factor of 2 for superastronomical values.
    bool agrees() const;
};

// The worked estimates. Defaults reproduce the canonical parameter choices.

/// (4 pi / 3) (c t_U / l_P)^3 Planck-cell count of the observable universe.
EstimateReport planck_cells(const PhysicalConstants& pc = {});

/// State information of a free electron resolved over Planck cells: 2N mu.
EstimateReport electron_state_info(double mu, const PhysicalConstants& pc = {});

/// Smallest mu able to represent the electron's uniform superposition.
EstimateReport electron_min_mu(const PhysicalConstants& pc = {});

/// Photon count when a mass in a volume is converted to blackbody radiation.
EstimateReport blackbody_photon_count(double mass_kg, double volume_m3,
                                      const PhysicalConstants& pc = {});

/// Photon count for the matter content of the observable universe.
EstimateReport universe_photon_count(const PhysicalConstants& pc = {});

/// State information of an everyday object from its elementary degrees of
/// freedom; dof_per_atom = 0 uses 7 * mean_atomic_number.
EstimateReport object_state_info(double mass_kg, double mean_atomic_number, double mu,
                                 double dof_per_atom = 0.0, const PhysicalConstants& pc = {});

/// The 1 kg hydrogen laptop: 4 elementary particles per baryon.
EstimateReport laptop_state_info(double mu = 64, const PhysicalConstants& pc = {});

/// The 1.4 kg cat, following the quoted figure's per-atom accounting.
EstimateReport cat_state_info(double mu = 64, const PhysicalConstants& pc = {});

/// Largest atom count that can stay coherent at fine-graining mu.
EstimateReport largest_coherent_object(double mu, double dof_per_atom,
                                       const PhysicalConstants& pc = {});

/// Fine-graining implied by the largest observed coherent object.
EstimateReport mu_from_coherent_object(double atoms, double dof_per_atom,
                                       const PhysicalConstants& pc = {});

struct UniverseBudget {
    EstimateReport ops;
    EstimateReport bits;
};

/// Total operations (t_U/t_P)^3 and registrable bits (c t_U / l_P)^2.
UniverseBudget universe_budget(const PhysicalConstants& pc = {});

/// Condensate memory: one coherent object regardless of particle count.
EstimateReport condensate_state_info(double mu, const PhysicalConstants& pc = {});

/// lambda_u report with the coefficient conventions spelled out.
EstimateReport info_length_report(double mu, double rho_kg_m3, const PhysicalConstants& pc = {});

/// tau_u = lambda_u / c report.
EstimateReport unitary_phase_report(double mu, double rho_kg_m3,
                                    const PhysicalConstants& pc = {});

/// Thermal-electron wavepacket growth over one unitary phase.
EstimateReport wavepacket_spread_report(double temperature_K, double tau_s,
                                        const PhysicalConstants& pc = {});

/// Qubit capacity of a memory budget: solve mu D^n = M for n.
EstimateReport qubit_capacity_report(double memory_log10_bits, double mu,
                                     const PhysicalConstants& pc = {});

/// Classical op rate of a rest-mass electron.
EstimateReport electron_op_rate_report(const PhysicalConstants& pc = {});

/// Named registry for the CLI: estimate <name> [--param=value].
struct EstimatorEntry {
    std::string name;
    std::string description;
    std::map<std::string, double> defaults;
    std::function<std::vector<EstimateReport>(const std::map<std::string, double>&,
                                              const PhysicalConstants&)>
        run;
};

const std::vector<EstimatorEntry>& estimator_registry();

/// Run every registry entry at its defaults.
std::vector<EstimateReport> run_all_estimates(const PhysicalConstants& pc = {});

} // namespace fg
