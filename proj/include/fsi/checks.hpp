#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fsi {

// One verification outcome. `measured` is the headline number the check
// compares against `limit`; the comparison direction is stated in `detail`.
struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double limit = 0.0;
    std::string detail;
    double seconds = 0.0;
};

struct CheckSpec {
    const char* name;
    const char* summary;
    CheckResult (*fn)();
};

// the fixed verification suite, in report order
const std::vector<CheckSpec>& check_registry();

// Runs every check whose name contains `filter` (all when empty), printing
// one PASS/FAIL line per check plus a closing summary; returns the number of
// failures. Unknown filters count as one failure so typos cannot pass.
int run_checks(const std::string& filter, std::ostream& out);

}  // namespace fsi
