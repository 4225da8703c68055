#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridflex {

enum class ResourceRole { Generator, Load, Storage };

std::string_view to_string(ResourceRole role);
ResourceRole parse_role(std::string_view text);

/// Storage-only parameters. Present iff the role is Storage.
struct StorageParams {
    double charge_eff = 1.0;
    double discharge_eff = 1.0;
    double energy_cap = 0.0; // MWh
};

/// Physical envelope of one flexible resource. All powers in MW, ramp in
/// MW/min. For loads the power is consumption; for storage it is signed
/// (positive discharging) and p_min is a deadband half-width.
struct ResourceSpec {
    ResourceRole role = ResourceRole::Generator;
    std::string name;
    double p_min = 0.0;
    double p_max = 0.0;
    double ramp = 0.0;
    int startup_minutes = 0;
    std::optional<StorageParams> storage;
    // Availability-limited generation (solar, wind): can only curtail from
    // its scheduled output, so its default baseline is p_max.
    bool variable_renewable = false;
    std::string metadata;

    double rated_power() const { return p_max; }
    bool is_storage() const { return role == ResourceRole::Storage; }
};

/// The 14 resources with numeric parameters: five generators, five loads
/// (converted from kW) and four storage systems.
const std::vector<ResourceSpec>& builtin_catalog();

/// Exact name match first, then case-insensitive. Throws ValidationError
/// naming the resource when nothing matches.
const ResourceSpec& find_resource(std::string_view name);
const ResourceSpec& find_resource(const std::vector<ResourceSpec>& catalog,
                                  std::string_view name);

/// One human-readable entry per violated invariant; empty when valid.
std::vector<std::string> validate_spec(const ResourceSpec& spec);

/// Throws ValidationError listing every violation.
void require_valid(const ResourceSpec& spec);

/// Multiplies every MW/MWh quantity by `factor`.
ResourceSpec scaled(const ResourceSpec& spec, double factor);

// Catalog file: CSV, one record per resource, units in the header.
std::string catalog_to_csv(const std::vector<ResourceSpec>& catalog);
std::vector<ResourceSpec> catalog_from_csv(std::string_view text);
std::vector<ResourceSpec> load_catalog_file(const std::string& path);

} // namespace gridflex
