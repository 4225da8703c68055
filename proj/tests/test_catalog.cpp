#include "doctest.h"

#include "gridflex/catalog.hpp"
#include "gridflex/error.hpp"

#include <algorithm>

using namespace gridflex;

namespace {

struct Row {
    const char* name;
    ResourceRole role;
    double p_min, p_max, ramp;
    int startup;
};

// Parameter tables as published (loads in kW, converted below).
constexpr Row kGenerators[] = {
    {"CCGT", ResourceRole::Generator, 240, 800, 24, 180},
    {"ICE", ResourceRole::Generator, 1.8, 18, 3.6, 5},
    {"Hydropower", ResourceRole::Generator, 60, 1900, 50, 1},
    {"Solar PV", ResourceRole::Generator, 0, 1.3, 1000, 1},
    {"Wind Turbine", ResourceRole::Generator, 0.0086, 1.3, 2.6, 1},
};
constexpr Row kLoadsKw[] = {
    {"Refrigeration", ResourceRole::Load, 180, 360, 180, 10},
    {"HVAC", ResourceRole::Load, 4.5, 7.2, 7.2, 1},
    {"Cement Production", ResourceRole::Load, 138, 2370, 27.18, 10},
    {"Oil Refinement", ResourceRole::Load, 25000, 35000, 83.33, 240},
    {"Data Center", ResourceRole::Load, 1250, 5000, 333.33, 15},
};

} // namespace

TEST_CASE("builtin catalog holds the 14 parameterised resources") {
    const auto& cat = builtin_catalog();
    CHECK(cat.size() == 14);
    auto count = [&](ResourceRole r) {
        return std::count_if(cat.begin(), cat.end(), [&](const auto& s) { return s.role == r; });
    };
    CHECK(count(ResourceRole::Generator) == 5);
    CHECK(count(ResourceRole::Load) == 5);
    CHECK(count(ResourceRole::Storage) == 4);
}

TEST_CASE("generator parameters match the published table") {
    for (const auto& row : kGenerators) {
        CAPTURE(row.name);
        const auto& s = find_resource(row.name);
        CHECK(s.role == row.role);
        CHECK(s.p_min == row.p_min);
        CHECK(s.p_max == row.p_max);
        CHECK(s.ramp == row.ramp);
        CHECK(s.startup_minutes == row.startup);
        CHECK_FALSE(s.storage.has_value());
    }
}

TEST_CASE("load parameters are the kW table divided by exactly 1000") {
    for (const auto& row : kLoadsKw) {
        CAPTURE(row.name);
        const auto& s = find_resource(row.name);
        CHECK(s.role == ResourceRole::Load);
        CHECK(s.p_min == row.p_min / 1000.0);
        CHECK(s.p_max == row.p_max / 1000.0);
        CHECK(s.ramp == row.ramp / 1000.0);
        CHECK(s.startup_minutes == row.startup);
    }
}

TEST_CASE("Data Center converted from kW") {
    const auto& s = find_resource("Data Center");
    CHECK(s.p_min == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(s.p_max == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(s.ramp == doctest::Approx(0.33333).epsilon(1e-15));
    CHECK(s.startup_minutes == 15);
}

TEST_CASE("storage parameters match the published table") {
    struct S {
        const char* name;
        double p_min, p_max, cap, eta_c, eta_d, ramp;
        int startup;
    };
    const S rows[] = {
        {"Battery", 0.1, 100, 400, 0.9, 0.97, 6000, 0},
        {"Pumped Hydro", 100, 5000, 8000, 0.7, 0.85, 50, 1},
        {"Flywheel", 0, 1.0, 0.25, 0.98, 0.98, 15, 0},
        {"Latent Heat", 0.1, 300, 2500, 0.75, 0.90, 0.48, 60},
    };
    for (const auto& r : rows) {
        CAPTURE(r.name);
        const auto& s = find_resource(r.name);
        REQUIRE(s.storage.has_value());
        CHECK(s.role == ResourceRole::Storage);
        CHECK(s.p_min == r.p_min);
        CHECK(s.p_max == r.p_max);
        CHECK(s.ramp == r.ramp);
        CHECK(s.startup_minutes == r.startup);
        CHECK(s.storage->energy_cap == r.cap);
        CHECK(s.storage->charge_eff == r.eta_c);
        CHECK(s.storage->discharge_eff == r.eta_d);
    }
}

TEST_CASE("every builtin spec validates and is rated at p_max") {
    for (const auto& s : builtin_catalog()) {
        CAPTURE(s.name);
        CHECK(validate_spec(s).empty());
        CHECK(s.rated_power() == s.p_max);
    }
}

TEST_CASE("only solar and wind are variable renewables") {
    for (const auto& s : builtin_catalog()) {
        CAPTURE(s.name);
        CHECK(s.variable_renewable == (s.name == "Solar PV" || s.name == "Wind Turbine"));
    }
}

TEST_CASE("validate_spec reports each violated invariant") {
    ResourceSpec s = find_resource("ICE");
    CHECK(validate_spec(s).empty());

    SUBCASE("p_min above p_max") {
        s.p_min = 10;
        s.p_max = 5;
        auto r = validate_spec(s);
        REQUIRE(r.size() == 1);
        CHECK(r[0].find("p_min <= p_max") != std::string::npos);
    }
    SUBCASE("generator carrying storage fields") {
        s.storage = StorageParams{0.9, 0.9, 10.0};
        auto r = validate_spec(s);
        REQUIRE(r.size() == 1);
        CHECK(r[0].find("role/field mismatch") != std::string::npos);
    }
    SUBCASE("storage without storage fields") {
        s.role = ResourceRole::Storage;
        auto r = validate_spec(s);
        REQUIRE(r.size() == 1);
        CHECK(r[0].find("role/field mismatch") != std::string::npos);
    }
    SUBCASE("several violations give several entries") {
        s.ramp = 0;
        s.startup_minutes = -1;
        s.p_min = -1;
        CHECK(validate_spec(s).size() == 3);
    }
    SUBCASE("efficiency out of range") {
        ResourceSpec b = find_resource("Battery");
        b.storage->charge_eff = 1.5;
        b.storage->discharge_eff = 0.0;
        CHECK(validate_spec(b).size() == 2);
        CHECK_THROWS_AS(require_valid(b), ValidationError);
    }
}

TEST_CASE("find_resource") {
    CHECK(find_resource("ice").name == "ICE");
    CHECK(find_resource("pumped hydro").name == "Pumped Hydro");
    try {
        find_resource("Nonexistent");
        FAIL("expected an exception");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("Nonexistent") != std::string::npos);
    }
}

TEST_CASE("scaled multiplies every MW and MWh quantity") {
    const auto& b = find_resource("Latent Heat");
    const auto s = scaled(b, 2.0);
    CHECK(s.p_min == 2 * b.p_min);
    CHECK(s.p_max == 2 * b.p_max);
    CHECK(s.ramp == 2 * b.ramp);
    CHECK(s.storage->energy_cap == 2 * b.storage->energy_cap);
    CHECK(s.storage->charge_eff == b.storage->charge_eff);
    CHECK(s.startup_minutes == b.startup_minutes);
}

TEST_CASE("catalog CSV round trip is exact") {
    const auto& cat = builtin_catalog();
    const std::string csv = catalog_to_csv(cat);
    CHECK(csv.rfind("name,role,p_min_MW,p_max_MW,ramp_MW_per_min,startup_min,", 0) == 0);
    const auto back = catalog_from_csv(csv);
    REQUIRE(back.size() == cat.size());
    for (std::size_t i = 0; i < cat.size(); ++i) {
        CAPTURE(cat[i].name);
        CHECK(back[i].name == cat[i].name);
        CHECK(back[i].role == cat[i].role);
        CHECK(back[i].p_min == cat[i].p_min);
        CHECK(back[i].p_max == cat[i].p_max);
        CHECK(back[i].ramp == cat[i].ramp);
        CHECK(back[i].startup_minutes == cat[i].startup_minutes);
        CHECK(back[i].variable_renewable == cat[i].variable_renewable);
        CHECK(back[i].metadata == cat[i].metadata);
        CHECK(back[i].storage.has_value() == cat[i].storage.has_value());
        if (cat[i].storage) {
            CHECK(back[i].storage->energy_cap == cat[i].storage->energy_cap);
            CHECK(back[i].storage->charge_eff == cat[i].storage->charge_eff);
            CHECK(back[i].storage->discharge_eff == cat[i].storage->discharge_eff);
        }
    }
    CHECK(catalog_to_csv(back) == csv);
}

TEST_CASE("catalog CSV rejects malformed input") {
    CHECK_THROWS_AS(catalog_from_csv(""), ValidationError);
    CHECK_THROWS_AS(catalog_from_csv("name,role\nICE,generator\n"), ValidationError);
    std::string csv = catalog_to_csv({find_resource("ICE")});
    std::string bad = csv.substr(0, csv.find('\n') + 1) + "X,generator,1,2,3,abc,,,,0,\n";
    CHECK_THROWS_AS(catalog_from_csv(bad), ValidationError);
    std::string invalid = csv.substr(0, csv.find('\n') + 1) + "X,generator,5,2,3,1,,,,0,\n";
    CHECK_THROWS_AS(catalog_from_csv(invalid), ValidationError);
}
