#include "doctest.h"

#include "gridflex/campaign.hpp"
#include "gridflex/error.hpp"

using namespace gridflex;

TEST_CASE("random instances respect the caps and cover every role") {
    CampaignCaps caps;
    int roles[3] = {0, 0, 0};
    for (int i = 0; i < 200; ++i) {
        const auto p = random_instance(caps, i);
        CAPTURE(i);
        CHECK(p.steps() >= 1);
        CHECK(p.steps() <= 8);
        CHECK(p.power_levels >= 2);
        CHECK(p.power_levels <= 7);
        CHECK(p.spec.startup_minutes <= 3);
        CHECK_NOTHROW(validate(p));
        ++roles[static_cast<int>(p.spec.role)];
    }
    CHECK(roles[0] > 0);
    CHECK(roles[1] > 0);
    CHECK(roles[2] > 0);
}

TEST_CASE("instances are a pure function of seed and index") {
    CampaignCaps caps;
    const auto a = problem_to_json(random_instance(caps, 17));
    const auto b = problem_to_json(random_instance(caps, 17));
    CHECK(a == b);
    caps.seed = 43;
    CHECK_FALSE(problem_to_json(random_instance(caps, 17)) == a);
}

TEST_CASE("instance serialization round-trips exactly") {
    CampaignCaps caps;
    for (int i = 0; i < 60; ++i) {
        const auto p = random_instance(caps, i);
        const auto j = problem_to_json(p);
        const auto q = problem_from_json(nlohmann::json::parse(j.dump()));
        CHECK(problem_to_json(q) == j);
        CHECK(q.profile.values == p.profile.values);
        CHECK(q.baseline == p.baseline);
        CHECK(q.spec.p_max == p.spec.p_max);
        CHECK(q.initial.has_value() == p.initial.has_value());
    }
    CHECK_THROWS_AS(problem_from_json(nlohmann::json::object()), ValidationError);
}

TEST_CASE("default campaign passes, the injected fault does not") {
    CampaignCaps caps;
    const auto ok = run_campaign(caps);
    CHECK(ok.instances == 100);
    CHECK(ok.mismatches == 0);
    CHECK(ok.worst_discrepancy == 0.0);
    CHECK(ok.ok());

    caps.inject_fault = true;
    const auto bad = run_campaign(caps);
    CHECK(bad.mismatches > 0);
    CHECK_FALSE(bad.ok());
    CHECK(bad.failing_instances.size() == static_cast<std::size_t>(bad.mismatches));
    // A failing instance replays to the same failure.
    const auto replay = problem_from_json(bad.failing_instances.front());
    CHECK_FALSE(check_instance(replay, 0, true).ok());
    CHECK(check_instance(replay, 0, false).ok());
}

TEST_CASE("campaign caps are validated") {
    CampaignCaps caps;
    caps.max_steps = 0;
    CHECK_THROWS_AS(run_campaign(caps), ValidationError);
    caps = {};
    caps.max_steps = 11;
    CHECK_THROWS_AS(validate(caps), ValidationError);
    caps = {};
    caps.max_levels = 1;
    CHECK_THROWS_AS(validate(caps), ValidationError);
    caps = {};
    caps.instances = 0;
    CHECK_THROWS_AS(validate(caps), ValidationError);
    caps = {};
    caps.max_startup = -1;
    CHECK_THROWS_AS(validate(caps), ValidationError);
}
