#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace tows::acceptance {

struct Options {
    std::string data_dir;       // holds core_t1.core, core_t2.core, core_t3.core
    std::uint64_t seed = 0;     // criterion k draws from seed + k
    std::set<int> only;         // empty runs every criterion
};

struct Result {
    int id = 0;
    std::string name;
    bool property_holds = false;
    double seconds = 0;
    double budget = 0;          // seconds
    std::string detail;

    bool pass() const { return property_holds && seconds < budget; }
    std::string line() const;   // "[PASS] 7 pipeline ... (12.3 s / 60 s) detail"
};

std::vector<Result> run(const Options& opt);

// One JSON object per criterion plus totals.
std::string summary_json(const std::vector<Result>& results);

}  // namespace tows::acceptance
