// Machine-readable reports for the command-line driver.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "cpnv/harness.hpp"

namespace cpnv {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

struct Report {
    std::string suite;
    std::string m_param;  // decimal integer or "sym"
    long n2 = 1;
    long samples = 0;
    uint64_t seed = 0;
    double fd_step = 0;
    std::string format;
    std::vector<CheckResult> results;
    std::map<std::string, std::string> closed_forms;
    long pass_count = 0;
    long fail_count = 0;
};

Report make_report(const std::string& suite, const std::string& m_param, long n2,
                   const SuiteParams& params, const std::string& format,
                   std::vector<CheckResult> results);

// Closed forms of the headline exact objects, at symbolic or integer m.
std::map<std::string, std::string> closed_forms(const std::string& m_param, long n2);

std::string to_json(const Report& r);
std::string to_csv(const Report& r);
std::string to_text(const Report& r);

}  // namespace cpnv
