#include "gridflex/scenario.hpp"

#include "gridflex/error.hpp"
#include "csv_util.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/core.h>

namespace gridflex {

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::Intermittency: return "intermittency";
    case ScenarioKind::PeakShaving: return "peak-shaving";
    case ScenarioKind::EnergyReserve: return "energy-reserve";
    case ScenarioKind::Custom: return "custom";
    }
    return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
    if (text == "intermittency") return ScenarioKind::Intermittency;
    if (text == "peak-shaving") return ScenarioKind::PeakShaving;
    if (text == "energy-reserve") return ScenarioKind::EnergyReserve;
    throw ValidationError(fmt::format(
        "unknown scenario '{}' (expected intermittency, peak-shaving or energy-reserve)", text));
}

namespace {

void require_divides(int dt, int horizon, std::string_view what) {
    if (dt <= 0) {
        throw ValidationError(fmt::format("dt must be positive, got {}", dt));
    }
    if (horizon % dt != 0) {
        throw ValidationError(
            fmt::format("dt={} min does not divide the {} horizon of {} min", dt, what, horizon));
    }
}

// 53 random bits mapped to [0, 1); std distributions are not portable
// across standard libraries, the raw engine output is.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

int intermittency_block_minutes(int dt_minutes) {
    return std::lcm(5, dt_minutes);
}

NetLoadProfile gen_intermittency(std::uint64_t seed, int dt_minutes) {
    require_divides(dt_minutes, kIntermittencyHorizon, "intermittency");
    const int block = intermittency_block_minutes(dt_minutes);
    if (kIntermittencyHorizon % block != 0 || kIntermittencyHorizon / block < 2) {
        throw ValidationError(fmt::format(
            "dt={} min leaves fewer than two alternating blocks in the intermittency horizon",
            dt_minutes));
    }
    const int n_blocks = kIntermittencyHorizon / block;

    std::mt19937_64 rng(seed);
    const double first_sign = (rng() & 1U) ? 1.0 : -1.0;
    std::vector<double> blocks(n_blocks);
    for (int k = 0; k < n_blocks; ++k) {
        double sign = (k % 2 == 0) ? first_sign : -first_sign;
        blocks[k] = sign * kScenarioMagnitude * unit_uniform(rng);
    }
    // Plant the two extremes: one positive-signed block and one negative-signed
    // block, each picked uniformly among blocks of that sign.
    const int pos_parity = first_sign > 0 ? 0 : 1;
    const int neg_parity = 1 - pos_parity;
    auto count_parity = [&](int parity) { return (n_blocks - parity + 1) / 2; };
    int pos_slot = static_cast<int>(rng() % static_cast<std::uint64_t>(count_parity(pos_parity)));
    int neg_slot = static_cast<int>(rng() % static_cast<std::uint64_t>(count_parity(neg_parity)));
    blocks[pos_parity + 2 * pos_slot] = kScenarioMagnitude;
    blocks[neg_parity + 2 * neg_slot] = -kScenarioMagnitude;

    NetLoadProfile p;
    p.kind = ScenarioKind::Intermittency;
    p.dt_minutes = dt_minutes;
    const int steps = kIntermittencyHorizon / dt_minutes;
    p.values.resize(steps);
    for (int i = 0; i < steps; ++i) {
        p.values[i] = blocks[(i * dt_minutes) / block];
    }
    return p;
}

namespace duck {
constexpr double kTroughCentre = 12.0 * 60.0;
constexpr double kTroughWidth = 8.0 * 60.0;
constexpr double kPeakCentre = 19.0 * 60.0;
constexpr double kPeakWidth = 6.0 * 60.0;
} // namespace duck

namespace {

double raised_cosine(double minute, double centre, double width, double amplitude) {
    double x = minute - centre;
    if (std::abs(x) > width / 2.0) return 0.0;
    return amplitude * 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * x / width));
}

} // namespace

double peak_shaving_value(double minute) {
    // Exact peaks: cos(0) = 1 gives amplitude * 0.5 * 2 = amplitude.
    return raised_cosine(minute, duck::kTroughCentre, duck::kTroughWidth, -kScenarioMagnitude) +
           raised_cosine(minute, duck::kPeakCentre, duck::kPeakWidth, kScenarioMagnitude);
}

NetLoadProfile gen_peak_shaving(int dt_minutes) {
    require_divides(dt_minutes, kPeakShavingHorizon, "peak-shaving");
    if (60 % dt_minutes != 0) {
        throw ValidationError(fmt::format(
            "dt={} min must divide 60 so the 12:00 and 19:00 peaks fall on interval starts",
            dt_minutes));
    }
    NetLoadProfile p;
    p.kind = ScenarioKind::PeakShaving;
    p.dt_minutes = dt_minutes;
    const int steps = kPeakShavingHorizon / dt_minutes;
    p.values.resize(steps);
    for (int i = 0; i < steps; ++i) {
        p.values[i] = peak_shaving_value(static_cast<double>(i * dt_minutes));
    }
    return p;
}

NetLoadProfile gen_energy_reserve(int dt_minutes) {
    require_divides(dt_minutes, kEnergyReserveHorizon, "energy-reserve");
    if (120 % dt_minutes != 0) {
        throw ValidationError(fmt::format(
            "dt={} min must divide 120 so the 6 h / 12 h / 18 h step changes fall on interval "
            "boundaries",
            dt_minutes));
    }
    NetLoadProfile p;
    p.kind = ScenarioKind::EnergyReserve;
    p.dt_minutes = dt_minutes;
    const int steps = kEnergyReserveHorizon / dt_minutes;
    p.values.resize(steps);
    for (int i = 0; i < steps; ++i) {
        int minute = i * dt_minutes;
        double v = 0.0;
        if (minute < 360) {
            v = kScenarioMagnitude;
        } else if (minute < 720) {
            v = 0.0;
        } else if (minute < 1080) {
            v = -kScenarioMagnitude;
        }
        p.values[i] = v;
    }
    return p;
}

NetLoadProfile make_scenario(ScenarioKind kind, int dt_minutes, std::uint64_t seed) {
    switch (kind) {
    case ScenarioKind::Intermittency: return gen_intermittency(seed, dt_minutes);
    case ScenarioKind::PeakShaving: return gen_peak_shaving(dt_minutes);
    case ScenarioKind::EnergyReserve: return gen_energy_reserve(dt_minutes);
    case ScenarioKind::Custom: break;
    }
    throw ValidationError("custom profiles must be loaded from a file");
}

std::string profile_to_csv(const NetLoadProfile& profile) {
    std::string out = "minute,net_pu\n";
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        out += fmt::format("{},{:.17g}\n", static_cast<long long>(i) * profile.dt_minutes,
                           profile.values[i]);
    }
    return out;
}

void save_profile_csv(const NetLoadProfile& profile, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError(fmt::format("cannot write '{}'", path));
    out << profile_to_csv(profile);
}

namespace {

double parse_cell(std::string_view cell, std::size_t row, int column) {
    cell = detail::trim(cell);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw ValidationError(
            fmt::format("profile row {}, column {}: '{}' is not a finite number", row, column, cell));
    }
    return v;
}

} // namespace

NetLoadProfile profile_from_csv(std::string_view text) {
    auto lines = detail::split_lines(text);
    if (lines.size() < 2) {
        throw ValidationError("profile file is empty (need a header row and at least one data row)");
    }
    std::vector<double> minutes;
    NetLoadProfile p;
    p.kind = ScenarioKind::Custom;
    // Rows are numbered from 1 at the first data row; the header is row 0.
    for (std::size_t li = 1; li < lines.size(); ++li) {
        std::size_t row = li;
        auto cells = detail::split_csv_line(lines[li]);
        if (cells.size() != 2) {
            throw ValidationError(
                fmt::format("profile row {}: expected 2 columns, got {}", row, cells.size()));
        }
        minutes.push_back(parse_cell(cells[0], row, 1));
        p.values.push_back(parse_cell(cells[1], row, 2));
    }
    if (minutes.size() == 1) {
        p.dt_minutes = 1;
        return p;
    }
    double spacing = minutes[1] - minutes[0];
    if (!(spacing > 0.0) || spacing != std::floor(spacing)) {
        throw ValidationError(fmt::format(
            "profile row 2, column 1: minute spacing {} is not a positive integer", spacing));
    }
    for (std::size_t i = 2; i < minutes.size(); ++i) {
        if (minutes[i] - minutes[i - 1] != spacing) {
            throw ValidationError(fmt::format(
                "profile row {}, column 1: non-uniform spacing ({} after {}, expected {})", i + 1,
                minutes[i] - minutes[i - 1], minutes[i - 1], spacing));
        }
    }
    p.dt_minutes = static_cast<int>(spacing);
    return p;
}

NetLoadProfile load_profile_csv(const std::string& path) {
    return profile_from_csv(detail::read_file(path));
}

void require_valid(const NetLoadProfile& profile) {
    if (profile.dt_minutes <= 0) {
        throw ValidationError(fmt::format("profile dt must be positive, got {}", profile.dt_minutes));
    }
    if (profile.values.empty()) throw ValidationError("profile has no values");
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        if (!std::isfinite(profile.values[i])) {
            throw ValidationError(fmt::format("profile value at step {} is not finite", i));
        }
    }
}

} // namespace gridflex
