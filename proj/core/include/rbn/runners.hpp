#pragma once

#include <string>

#include "rbn/config.hpp"

namespace rbn {

// One function per CLI subcommand; each returns the complete CSV document
// (metadata lines, header row, data rows). Outputs are bit-identical for
// identical config + seed, for any worker count.
std::string run_simulate_ou(const ExperimentConfig& cfg);
std::string run_lattice_stats(const ExperimentConfig& cfg);
std::string run_validate_drift(const ExperimentConfig& cfg);
std::string run_phi_estimate(const ExperimentConfig& cfg);
std::string run_sigma_scan(const ExperimentConfig& cfg);
std::string run_rho_scan(const ExperimentConfig& cfg);
std::string run_euler_chain(const ExperimentConfig& cfg);
std::string run_bdg_check(const ExperimentConfig& cfg);
std::string run_exp_moment(const ExperimentConfig& cfg);
std::string run_gronwall(const ExperimentConfig& cfg);
std::string run_solve(const ExperimentConfig& cfg);
std::string run_uniqueness(const ExperimentConfig& cfg);

/// Dispatch by subcommand name; throws std::invalid_argument for unknown names.
std::string run_subcommand(const std::string& name, const ExperimentConfig& cfg);

extern const char* const kSubcommands[12];

} // namespace rbn
