#pragma once

#include "gridflex/catalog.hpp"

namespace gridflex {

/// Signed power window [lo, hi] in MW; lo <= 0 <= hi.
struct PowerLimits {
    double lo = 0.0;
    double hi = 0.0;
};

/// State of charge after holding signed power `p` (MW, positive discharging)
/// for `dt_minutes`. Discharge draws p/discharge_eff from the store, charge
/// adds |p|*charge_eff. Not clamped.
double apply_soc(double soc, double p, int dt_minutes, const ResourceSpec& spec);

/// Single-interval limits: the most that can be discharged without going
/// below empty and charged without going above full, capped at p_max.
PowerLimits soc_power_limits(double soc, const ResourceSpec& spec, int dt_minutes);

/// Limits used by the dispatchers when SoC is enforced. A power is admitted
/// only if, after holding it, the unit can still ramp back to its deadband
/// and shut down without leaving [0, energy_cap]. This keeps every later
/// interval feasible under the ramp constraints. Always inside
/// soc_power_limits. A side is reported as 0 when not even p_min fits.
PowerLimits soc_dispatch_limits(double soc, const ResourceSpec& spec, int dt_minutes);

/// Energy drawn from the store (MWh) if the unit discharges at `p` now and
/// then winds down at full ramp to p_min and shuts off.
double wind_down_discharge_energy(double p, const ResourceSpec& spec, int dt_minutes);

/// Energy added to the store (MWh) for the mirror-image charging wind-down
/// starting at -|p|.
double wind_down_charge_energy(double p, const ResourceSpec& spec, int dt_minutes);

/// Uniform grid of `levels` SoC values on [0, energy_cap] used by the
/// day-ahead solver.
class SocGrid {
public:
    SocGrid(const ResourceSpec& spec, int levels);

    int size() const { return levels_; }
    double value(int index) const;
    /// Nearest grid index (ties to the lower index).
    int snap(double soc) const;

private:
    double cap_;
    int levels_;
};

} // namespace gridflex
