#pragma once

// Randomised cross-check of the day-ahead solver against the brute-force
// enumerator, plus the real-time optimality audit on the same instances.

#include "gridflex/dayahead.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gridflex {

struct CampaignCaps {
    int instances = 100;
    int max_steps = 8;
    int max_levels = 7;
    int max_startup = 3;
    std::uint64_t seed = 42;
    bool inject_fault = false;
};

/// Throws ValidationError on caps the oracle cannot handle (T < 1, N < 2,
/// beyond the oracle limits, negative start-up, no instances).
void validate(const CampaignCaps& caps);

/// Instance `index` of the campaign, a pure function of (caps, index).
ScheduleProblem random_instance(const CampaignCaps& caps, int index);

nlohmann::json problem_to_json(const ScheduleProblem& problem);
ScheduleProblem problem_from_json(const nlohmann::json& json);

struct InstanceResult {
    int index = 0;
    double dp_objective = 0.0;
    double oracle_objective = 0.0;
    bool objectives_equal = true;
    bool serial_parallel_equal = true;
    std::vector<std::string> audit_violations;
    bool ok() const { return objectives_equal && serial_parallel_equal && audit_violations.empty(); }
};

/// Solves one instance with the DP (serial and parallel) and the oracle and
/// audits every feasible trajectory, including a real-time run over the same
/// profile.
InstanceResult check_instance(const ScheduleProblem& problem, int index, bool inject_fault);

struct CampaignReport {
    int instances = 0;
    int infeasible = 0;
    int mismatches = 0;
    double worst_discrepancy = 0.0; // |dp - oracle| over instances where both are finite
    std::vector<InstanceResult> failures;
    std::vector<nlohmann::json> failing_instances;
    bool ok() const { return mismatches == 0; }
};

CampaignReport run_campaign(const CampaignCaps& caps);

} // namespace gridflex
