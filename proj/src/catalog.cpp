#include "gridflex/catalog.hpp"

#include "gridflex/error.hpp"
#include "csv_util.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

namespace gridflex {

namespace detail {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError(fmt::format("cannot open file '{}'", path));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace detail

std::string_view to_string(ResourceRole role) {
    switch (role) {
    case ResourceRole::Generator: return "generator";
    case ResourceRole::Load: return "load";
    case ResourceRole::Storage: return "storage";
    }
    return "unknown";
}

ResourceRole parse_role(std::string_view text) {
    std::string lower;
    for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "generator") return ResourceRole::Generator;
    if (lower == "load") return ResourceRole::Load;
    if (lower == "storage") return ResourceRole::Storage;
    throw ValidationError(fmt::format("unknown resource role '{}'", text));
}

namespace {

ResourceSpec generator(std::string name, double p_min, double p_max, double ramp, int startup,
                       bool variable, std::string meta) {
    ResourceSpec s;
    s.role = ResourceRole::Generator;
    s.name = std::move(name);
    s.p_min = p_min;
    s.p_max = p_max;
    s.ramp = ramp;
    s.startup_minutes = startup;
    s.variable_renewable = variable;
    s.metadata = std::move(meta);
    return s;
}

// Table values are in kW; the model works in MW.
ResourceSpec load_kw(std::string name, double p_min_kw, double p_max_kw, double ramp_kw,
                     int response, std::string meta) {
    ResourceSpec s;
    s.role = ResourceRole::Load;
    s.name = std::move(name);
    s.p_min = p_min_kw / 1000.0;
    s.p_max = p_max_kw / 1000.0;
    s.ramp = ramp_kw / 1000.0;
    s.startup_minutes = response;
    s.metadata = std::move(meta);
    return s;
}

ResourceSpec storage(std::string name, double p_min, double p_max, double cap, double eta_c,
                     double eta_d, double ramp, int startup, std::string meta) {
    ResourceSpec s;
    s.role = ResourceRole::Storage;
    s.name = std::move(name);
    s.p_min = p_min;
    s.p_max = p_max;
    s.ramp = ramp;
    s.startup_minutes = startup;
    s.storage = StorageParams{eta_c, eta_d, cap};
    s.metadata = std::move(meta);
    return s;
}

std::vector<ResourceSpec> make_catalog() {
    return {
        generator("CCGT", 240, 800, 24, 180, false, "thermal generation; efficiency=0.5"),
        generator("ICE", 1.8, 18, 3.6, 5, false, "thermal generation; efficiency=0.48"),
        generator("Hydropower", 60, 1900, 50, 1, false, "renewable generation; efficiency=0.9"),
        generator("Solar PV", 0, 1.3, 1000, 1, true, "renewable generation; efficiency=0.198; curtailment only"),
        generator("Wind Turbine", 0.0086, 1.3, 2.6, 1, true, "renewable generation; efficiency=0.1626; curtailment only"),
        load_kw("Refrigeration", 180, 360, 180, 10, "TCL; energy intensity=31596.66 kWh/degC"),
        load_kw("HVAC", 4.5, 7.2, 7.2, 1, "TCL; energy intensity=2.5 kWh/degC"),
        load_kw("Cement Production", 138, 2370, 27.18, 10, "industrial process; energy intensity=3.58 kWh/ton"),
        load_kw("Oil Refinement", 25000, 35000, 83.33, 240, "industrial process; energy intensity=0.025 kWh/kg"),
        load_kw("Data Center", 1250, 5000, 333.33, 15, "IT industry; energy intensity=5.29e-13 Wh/CPU cycle"),
        storage("Battery", 0.1, 100, 400, 0.9, 0.97, 6000, 0, "electrochemical"),
        storage("Pumped Hydro", 100, 5000, 8000, 0.7, 0.85, 50, 1, "mechanical"),
        storage("Flywheel", 0, 1.0, 0.25, 0.98, 0.98, 15, 0, "mechanical"),
        storage("Latent Heat", 0.1, 300, 2500, 0.75, 0.90, 0.48, 60, "thermal"),
    };
}

std::string lowercase(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

} // namespace

const std::vector<ResourceSpec>& builtin_catalog() {
    static const std::vector<ResourceSpec> catalog = make_catalog();
    return catalog;
}

const ResourceSpec& find_resource(const std::vector<ResourceSpec>& catalog, std::string_view name) {
    for (const auto& s : catalog) {
        if (s.name == name) return s;
    }
    auto wanted = lowercase(name);
    for (const auto& s : catalog) {
        if (lowercase(s.name) == wanted) return s;
    }
    throw ValidationError(fmt::format("unknown resource '{}'", name));
}

const ResourceSpec& find_resource(std::string_view name) {
    return find_resource(builtin_catalog(), name);
}

std::vector<std::string> validate_spec(const ResourceSpec& spec) {
    std::vector<std::string> report;
    auto finite = [](double v) { return std::isfinite(v); };
    if (spec.name.empty()) report.emplace_back("name must be non-empty");
    if (!finite(spec.p_min) || !finite(spec.p_max) || !finite(spec.ramp)) {
        report.emplace_back("power and ramp values must be finite");
    }
    if (spec.p_min < 0.0) report.emplace_back("0 <= p_min violated");
    if (spec.p_min > spec.p_max) report.emplace_back("p_min <= p_max violated");
    if (!(spec.p_max > 0.0)) report.emplace_back("p_max > 0 violated");
    if (!(spec.ramp > 0.0)) report.emplace_back("ramp > 0 violated");
    if (spec.startup_minutes < 0) report.emplace_back("startup_minutes >= 0 violated");
    if (spec.is_storage()) {
        if (!spec.storage) {
            report.emplace_back("role/field mismatch: storage role requires storage parameters");
        } else {
            const auto& st = *spec.storage;
            if (!(st.energy_cap > 0.0) || !finite(st.energy_cap)) {
                report.emplace_back("energy_cap > 0 violated");
            }
            if (!(st.charge_eff > 0.0 && st.charge_eff <= 1.0)) {
                report.emplace_back("charge_eff in (0,1] violated");
            }
            if (!(st.discharge_eff > 0.0 && st.discharge_eff <= 1.0)) {
                report.emplace_back("discharge_eff in (0,1] violated");
            }
        }
    } else if (spec.storage) {
        report.emplace_back(fmt::format(
            "role/field mismatch: {} must not carry storage parameters (energy_cap, efficiencies)",
            to_string(spec.role)));
    }
    if (spec.variable_renewable && spec.role != ResourceRole::Generator) {
        report.emplace_back("role/field mismatch: variable_renewable applies to generators only");
    }
    return report;
}

void require_valid(const ResourceSpec& spec) {
    auto report = validate_spec(spec);
    if (report.empty()) return;
    std::string msg = fmt::format("invalid resource '{}':", spec.name);
    for (const auto& r : report) msg += "\n  - " + r;
    throw ValidationError(msg);
}

ResourceSpec scaled(const ResourceSpec& spec, double factor) {
    ResourceSpec s = spec;
    s.p_min *= factor;
    s.p_max *= factor;
    s.ramp *= factor;
    if (s.storage) s.storage->energy_cap *= factor;
    return s;
}

namespace {

constexpr std::string_view kCatalogHeader =
    "name,role,p_min_MW,p_max_MW,ramp_MW_per_min,startup_min,charge_eff,discharge_eff,"
    "energy_cap_MWh,variable_renewable,metadata";

double parse_number(std::string_view cell, std::size_t row, std::string_view column) {
    cell = detail::trim(cell);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
        throw ValidationError(
            fmt::format("catalog row {}, column '{}': '{}' is not a number", row, column, cell));
    }
    return v;
}

} // namespace

std::string catalog_to_csv(const std::vector<ResourceSpec>& catalog) {
    std::string out(kCatalogHeader);
    out.push_back('\n');
    for (const auto& s : catalog) {
        std::string ce, de, cap;
        if (s.storage) {
            ce = fmt::format("{:.17g}", s.storage->charge_eff);
            de = fmt::format("{:.17g}", s.storage->discharge_eff);
            cap = fmt::format("{:.17g}", s.storage->energy_cap);
        }
        out += fmt::format("{},{},{:.17g},{:.17g},{:.17g},{},{},{},{},{},{}\n",
                           detail::quote_csv(s.name), to_string(s.role), s.p_min, s.p_max, s.ramp,
                           s.startup_minutes, ce, de, cap, s.variable_renewable ? 1 : 0,
                           detail::quote_csv(s.metadata));
    }
    return out;
}

std::vector<ResourceSpec> catalog_from_csv(std::string_view text) {
    auto lines = detail::split_lines(text);
    if (lines.empty()) throw ValidationError("catalog file is empty");
    auto header = detail::split_csv_line(lines.front());
    auto expected = detail::split_csv_line(kCatalogHeader);
    if (header.size() != expected.size()) {
        throw ValidationError(fmt::format("catalog header must be: {}", kCatalogHeader));
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (detail::trim(header[i]) != expected[i]) {
            throw ValidationError(fmt::format("catalog header column {} must be '{}', got '{}'",
                                              i + 1, expected[i], header[i]));
        }
    }
    std::vector<ResourceSpec> out;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (detail::trim(lines[li]).empty()) continue;
        std::size_t row = li;
        auto cells = detail::split_csv_line(lines[li]);
        if (cells.size() != expected.size()) {
            throw ValidationError(fmt::format("catalog row {}: expected {} columns, got {}", row,
                                              expected.size(), cells.size()));
        }
        ResourceSpec s;
        s.name = std::string(detail::trim(cells[0]));
        s.role = parse_role(detail::trim(cells[1]));
        s.p_min = parse_number(cells[2], row, expected[2]);
        s.p_max = parse_number(cells[3], row, expected[3]);
        s.ramp = parse_number(cells[4], row, expected[4]);
        double su = parse_number(cells[5], row, expected[5]);
        if (su != std::floor(su)) {
            throw ValidationError(fmt::format("catalog row {}: startup_min must be an integer", row));
        }
        s.startup_minutes = static_cast<int>(su);
        bool has_storage = !detail::trim(cells[6]).empty() || !detail::trim(cells[7]).empty() ||
                           !detail::trim(cells[8]).empty();
        if (has_storage) {
            s.storage = StorageParams{parse_number(cells[6], row, expected[6]),
                                      parse_number(cells[7], row, expected[7]),
                                      parse_number(cells[8], row, expected[8])};
        }
        auto vr = detail::trim(cells[9]);
        s.variable_renewable = !(vr.empty() || vr == "0");
        s.metadata = cells[10];
        require_valid(s);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<ResourceSpec> load_catalog_file(const std::string& path) {
    return catalog_from_csv(detail::read_file(path));
}

} // namespace gridflex
