#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twopoint/common.hpp"
#include "twopoint/expr.hpp"

namespace twopoint::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2, kVerificationFailed = 3 };

/// Bad flags or flag values; maps to exit code 1.
class UsageError : public Error {
public:
    using Error::Error;
};

struct RunConfig {
    std::string subcommand;  // expand | laurent | taylor-laurent | region | eval | verify | confluence
    std::string function_text;
    Complex z1{-1.0, 0.0};
    Complex z2{1.0, 0.0};
    Complex z0{0.0, 0.0};
    int order = 8;
    std::vector<Complex> eval_points;
    std::vector<Complex> inner_poles;
    /// Replaces pole detection when non-empty.
    std::vector<Pole> pole_override;
    std::optional<int> m1, m2, m;
    double tol = 1e-10;
    std::string format = "json";
    std::uint64_t seed = 0;
    bool verify = false;
    std::string out_path;
    int count = 256;
    bool count_given = false;
    int points = 20;
    std::string family;  // empty: chosen from the pole structure
};

/// "a", "bi", "a+bi", "a-bi", "i", "-i"; no whitespace. Throws UsageError.
Complex parse_complex(std::string_view text);

/// "location[:order]", e.g. "1+2i:2". Throws UsageError.
Pole parse_pole(std::string_view text);

/// %.17g, with ".0" appended to integral values; non-finite values print as null.
std::string format_number(double x);

/// Parses argv-style arguments (without the program name). Help requests
/// print usage to `out` and return std::nullopt.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out);

/// Executes a parsed configuration; returns the process exit code.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + execute, mapping every failure to its exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twopoint::cli
