#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nilmult::verify {

// quick: every property at the scale the library guarantees in its
// documented time budgets. full: the same properties at larger sweeps.
enum class Level { quick, full };

// One named property suite. A suite fails iff `failures` is nonempty; each
// entry is a one-line description of a violated check. Failure lists are
// truncated (the counts are not), so `checks` always reflects work done.
struct SuiteResult {
    std::string name;
    std::uint64_t checks = 0;
    std::uint64_t millis = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

using LogFn = std::function<void(const std::string&)>;

// Runs every suite at the given level, in a fixed order, with fixed seeds.
// Needs no files, no network and no environment. The log callback (may be
// empty) receives one line per finished suite.
std::vector<SuiteResult> run_all(Level level, const LogFn& log = {});

// Total failed checks across all suites.
std::size_t failure_count(const std::vector<SuiteResult>& results);

}  // namespace nilmult::verify
