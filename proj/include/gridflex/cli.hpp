#pragma once

#include "gridflex/dispatch.hpp"

#include <iosfwd>
#include <string>

namespace gridflex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitOracleMismatch = 4;

/// Entry point of the `gridflex` tool. Subcommands: catalog, scenario, run,
/// compare, oracle-check. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Columns: minute,net_pu,power_MW,status,offset_MW,offset_pu,soc_MWh.
/// soc_MWh is left empty when SoC is not tracked.
std::string trajectory_csv(const Trajectory& trajectory);

} // namespace gridflex::cli
