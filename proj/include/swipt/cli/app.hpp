#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "swipt/cli/run_config.hpp"
#include "swipt/experiments.hpp"

namespace swipt::cli {

// CSV writers. Energies are written in microwatts of harvested power.
void write_region_csv(std::ostream& os, const RunConfig& rc, const exp::RegionCurve& curve);
void write_convergence_csv(std::ostream& os, const std::vector<exp::TraceRow>& rows);
void write_ber_csv(std::ostream& os, const exp::BerResult& r);

/// Runs rc.experiment, writing its CSV files and manifest.txt into outDir.
/// Returns the paths written. Library errors propagate.
std::vector<std::filesystem::path> run_experiment(const RunConfig& rc,
                                                  const std::filesystem::path& outDir,
                                                  int workers);

/// Full command line (args[0] is the program name). Exit status 0 on
/// success, 1 for configuration errors, 2 for solver errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swipt::cli
