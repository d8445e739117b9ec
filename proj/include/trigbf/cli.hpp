#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "trigbf/bench.hpp"

namespace trigbf::cli {

enum class Subcommand { Filter, Compare, Bench, Kernel };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitOrdering = 3;  // compare: trig error exceeded poly error

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    Subcommand subcommand = Subcommand::Filter;
    std::string input;
    std::string output;
    std::string csv;
    double sigma_s = 15.0;
    double sigma_r = 80.0;
    double T = 255.0;
    EngineKind engine = EngineKind::Trig;
    SpatialKind spatial = SpatialKind::GaussianRecursive;
    std::optional<int> degree;
    std::optional<int> terms;
    int repetitions = 5;
    unsigned threads = 0;
    bool sigma_s_given = false;
    bool sigma_r_given = false;
    bool spatial_given = false;
};

// Throws UsageError.
void validate(const RunConfig& cfg);

int cmd_filter(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_kernel(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses argv, validates and dispatches. Exit codes: 0 success, 1 usage
// error, 2 I/O or parse error, 3 failed error-ordering check in compare.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trigbf::cli
