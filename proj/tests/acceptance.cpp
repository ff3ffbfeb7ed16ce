#include "freenormal/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main() {
    const char* env = std::getenv("FREENORMAL_PROFILE");
    const auto profile = freenormal::parse_profile(env != nullptr && *env != '\0' ? env : "fast");
    if (!profile) {
        std::fprintf(stderr, "unknown profile\n");
        return 2;
    }
    int failures = 0;
    freenormal::run_acceptance(*profile, [&](const freenormal::CriterionResult& r) {
        if (!r.passed) ++failures;
        std::printf("%s  %2d %-26s %8.3f s (limit %g s)%s%s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.seconds, r.time_limit, r.message.empty() ? "" : "  ", r.message.c_str());
        std::fflush(stdout);
    });
    std::printf("%d of %d criteria passed\n", freenormal::kCriterionCount - failures, freenormal::kCriterionCount);
    return failures == 0 ? 0 : 1;
}
