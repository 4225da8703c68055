#include "gridflex/metrics.hpp"

#include "gridflex/error.hpp"
#include "csv_util.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace gridflex {

DeficitStats compute_stats(std::span<const double> offsets_pu, int dt_minutes) {
    if (offsets_pu.empty()) throw ValidationError("cannot compute statistics of an empty trajectory");
    if (dt_minutes <= 0) throw ValidationError("dt must be positive");
    const double hours = dt_minutes / 60.0;
    double sum_abs = 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double o : offsets_pu) {
        sum_abs += std::abs(o);
        sum += o;
        sum_sq += o * o;
    }
    const double n = static_cast<double>(offsets_pu.size());
    DeficitStats s;
    s.avg_abs = sum_abs / n;
    s.net_energy_signed = sum * hours;
    s.net_energy_abs = sum_abs * hours;
    s.rms = std::sqrt(sum_sq / n);
    return s;
}

std::vector<RankedEntry> rank_resources(std::vector<RankedEntry> entries) {
    if (entries.size() < 2) {
        throw ValidationError(fmt::format("ranking needs at least 2 resources, got {}", entries.size()));
    }
    std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.stats.rms != b.stats.rms) return a.stats.rms < b.stats.rms;
        if (a.stats.net_energy_abs != b.stats.net_energy_abs) {
            return a.stats.net_energy_abs < b.stats.net_energy_abs;
        }
        return a.name < b.name;
    });
    return entries;
}

std::string stats_table_csv(const std::vector<RankedEntry>& rows) {
    std::string out = "resource,avg_abs_pu,net_energy_abs_puh,net_energy_signed_puh,rms_pu\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", detail::quote_csv(r.name), r.stats.avg_abs,
                           r.stats.net_energy_abs, r.stats.net_energy_signed, r.stats.rms);
    }
    return out;
}

std::string stats_table_text(const std::string& title, const std::vector<RankedEntry>& rows) {
    std::size_t name_w = 8;
    for (const auto& r : rows) name_w = std::max(name_w, r.name.size());
    std::string out = title + "\n";
    out += fmt::format("{:<{}}  {:>12}  {:>12}  {:>12}  {:>12}\n", "Resource", name_w,
                       "Avg |Def|", "Net E (abs)", "Net E (sgn)", "RMS Def");
    out += std::string(name_w + 4 * 14, '-') + "\n";
    for (const auto& r : rows) {
        out += fmt::format("{:<{}}  {:>12.4g}  {:>12.4g}  {:>12.4g}  {:>12.4g}\n", r.name, name_w,
                           r.stats.avg_abs, r.stats.net_energy_abs, r.stats.net_energy_signed,
                           r.stats.rms);
    }
    return out;
}

} // namespace gridflex
