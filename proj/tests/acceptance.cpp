// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.

#include <cstdio>

#include "navsim/verify.hpp"

int main() {
    const std::vector<navsim::CheckResult> results = navsim::run_acceptance_suite(true);
    int failures = 0;
    for (const navsim::CheckResult& r : results) failures += r.pass ? 0 : 1;
    std::printf("%d/%d criteria passed\n", static_cast<int>(results.size()) - failures,
                static_cast<int>(results.size()));
    return failures == 0 ? 0 : 1;
}
