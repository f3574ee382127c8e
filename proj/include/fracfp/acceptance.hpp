#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fracfp::acceptance {

enum class Level { quick, full };

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    bool skipped = false;
    double seconds = 0.0;
    std::string detail;
};

struct Report {
    std::vector<CriterionResult> results;
    bool all_pass() const {
        for (const auto& r : results)
            if (!r.skipped && !r.pass) return false;
        return true;
    }
};

/// Run the acceptance criteria at the requested scale, printing one pass/fail
/// line per criterion. quick covers the identity/oracle criteria (1-8); full
/// adds the desk-scale particle runs (9-10).
Report run(Level level, std::ostream& log);

}  // namespace fracfp::acceptance
