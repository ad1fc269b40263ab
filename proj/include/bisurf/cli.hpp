#pragma once

// Job files, JSON reports and the command driver behind the `bisurf` tool.
//
// Input:   {"m": 2, "n": 2, "a": ["...", "...", "...", "..."],
//           "seed": 0, "assert_one_to_one": true}
// Reports: {"schema": 1, "command": "...", ...}; everything except the
//          "timings" member is a deterministic function of input and flags.

#include "bisurf/conditions.hpp"
#include "bisurf/implicitize.hpp"

#include "json.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace bisurf {

inline constexpr int kReportSchema = 1;

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitInput = 2 };

class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct JobSpec {
  int m = 0, n = 0;
  std::array<std::string, 4> a;
  std::optional<std::uint64_t> seed;
  bool assert_one_to_one = true;
};

JobSpec parse_job(const nlohmann::json& j);
JobSpec read_job(const std::string& path);
/// Throws InputError carrying the parse position for malformed polynomials.
Parametrization to_parametrization(const JobSpec& job);

nlohmann::json to_json(const ConditionReport& report);
nlohmann::json to_json(const Verification& v);
nlohmann::json to_json(const ImplicitResult& result);
nlohmann::json to_json(const Matrix4& t);

struct CommandOptions {
  std::string command;  // check | implicitize | verify | hilbert
  std::string input;
  bool json = false;
  std::optional<std::uint64_t> seed;
  std::string det_backend = "auto";
  int sat_bound = 0;
  int window = 3;
  std::size_t samples = 100;
  bool force = false;
  std::string output;
  // verify
  std::string equation;  // optional polynomial in x0..x3 to check instead of computing one
  // hilbert
  std::optional<BiDegree> from, to;
  int power = 1;  // 1: R/I, 2: R/I^2
};

/// Runs one command; the report goes to `out` (or to options.output),
/// diagnostics to `err`. Returns the process exit code.
int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Builds the report for a command without printing; exposed for tests.
/// `exit_code` receives the code run_command would return.
nlohmann::json build_report(const CommandOptions& options, int& exit_code);

}  // namespace bisurf
