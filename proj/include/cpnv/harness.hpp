// Check-result aggregation: named verification suites producing deterministic
// lists of pass/fail records, run on a small worker pool.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cpnv/fd.hpp"

namespace cpnv {

struct CheckResult {
    enum class Kind { Exact, Fd, Mc };

    std::string id;
    Kind kind = Kind::Exact;
    bool pass = false;
    double observed = 0;                // error magnitude (exact checks: 0 or 1)
    std::optional<double> tolerance;    // absent for exact checks
    std::string details;
    std::optional<uint64_t> seed;       // present for Monte Carlo checks
};

std::string kind_name(CheckResult::Kind k);

struct SuiteParams {
    std::optional<long> m;  // absent: symbolic-only checks
    long samples = 100000;
    uint64_t seed = 7;
    FDConfig fd;
    int mc_workers = 4;
    int pool_workers = 2;
};

class UnknownSuiteError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

std::vector<std::string> suite_names();

// Runs one suite; checks execute on a worker pool, each owning an RNG stream
// derived from (seed, check id), and results are sorted by id.
std::vector<CheckResult> run_suite(const std::string& name, const SuiteParams& params);

// All suites concatenated, each id prefixed by its suite name.
std::vector<CheckResult> run_all(const SuiteParams& params);

// Helpers used by suites and the acceptance runner -----------------------------

CheckResult exact_check(std::string id, bool pass, std::string details = "");
CheckResult fd_check(std::string id, double observed, double tolerance, std::string details = "");
CheckResult mc_check(std::string id, double observed, double tolerance, uint64_t seed,
                     std::string details = "");

// Least-squares recovery of all 25 operator-matrix entries from the finite-
// difference images of the basis fields at sample points; returns the largest
// entrywise deviation from the exact matrix.
double l_matrix_entry_recovery_error(long m0, int points, uint64_t seed, double step);

}  // namespace cpnv
