#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "prodesc/json_io.hpp"

namespace prodesc {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string details;
};

struct VerifyReport {
    std::vector<CriterionResult> criteria;

    bool all_pass() const {
        for (const auto& c : criteria)
            if (!c.pass) return false;
        return true;
    }
};

// Runs the full verification suite; progress lines (one per criterion, with
// timing) go to `progress` when given. The returned report is deterministic.
VerifyReport verify_paper(std::ostream* progress = nullptr);

// machine-readable form; contains no timing, so consecutive runs byte-match
Json to_json(const VerifyReport& r);

}  // namespace prodesc
