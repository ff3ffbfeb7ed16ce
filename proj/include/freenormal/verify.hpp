#pragma once

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace freenormal {

/// fast uses the stated sample sizes; full uses denser samples and grids.
enum class Profile { Fast, Full };

std::optional<Profile> parse_profile(std::string_view name);
std::string_view to_string(Profile profile) noexcept;

struct CriterionResult {
    int id = 0;
    std::string name;
    /// The numerical check held and the run finished within the time limit.
    bool passed = false;
    bool within_time = true;
    double seconds = 0.0;
    double time_limit = 0.0;
    nlohmann::json measured;
    std::string message;
};

struct VerifyReport {
    Profile profile = Profile::Fast;
    std::vector<CriterionResult> criteria;

    bool all_passed() const;
    nlohmann::json to_json() const;
};

/// Number of acceptance criteria; ids run from 1 to this value.
constexpr int kCriterionCount = 12;

std::string_view criterion_name(int id);

/// Runs one criterion; library errors are caught and reported as failures.
CriterionResult run_criterion(int id, Profile profile);

using CriterionCallback = std::function<void(const CriterionResult&)>;

/// Runs every criterion in order, calling on_result after each one.
VerifyReport run_acceptance(Profile profile, const CriterionCallback& on_result = {});

}  // namespace freenormal
