#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "esslab/report.hpp"

namespace esslab::cli {

enum class ExitCode : int { ok = 0, error = 1, negative = 2 };

struct RunConfig {
  std::string subcommand;
  std::string model_path;

  std::vector<double> lambdas{1.0};
  int p = 1;
  double eps = 0.05;
  double mu = 10.0;
  std::optional<std::vector<double>> params;  // R,x,y or b,l,a

  // ode
  std::string delta = "inv-sq:1";
  double r_max = 1e3;
  double tol = 1e-2;

  // volume
  std::string check = "growth";
  double R1 = 10.0;
  std::vector<double> radii;
  std::vector<double> x_values;

  // oracle
  double cap = 4.0;
  std::vector<double> L_list{50.0, 100.0, 200.0};
  std::size_t N = 4000;
  std::string bc = "both";

  std::string out;             // empty: stdout
  std::string format = "csv";  // csv | json
  unsigned threads = 1;
  std::uint64_t seed = 1;
};

/// "0,0.5,1" or "start:stop:count" (inclusive, evenly spaced).
std::vector<double> parse_number_list(const std::string& text);

/// Throws InvalidInput when a parameter violates the target operation's preconditions.
void validate(const RunConfig& config);

struct RunResult {
  ExitCode code = ExitCode::ok;
  Table table;
};

/// Runs a validated config; the caller decides where the table goes.
RunResult execute(const RunConfig& config);

/// Validate, execute, and write the table to config.out (or `out`). Errors are reported
/// on `err` and map to ExitCode::error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parse argv (unknown options are rejected) and run.
int main(int argc, char** argv);

}  // namespace esslab::cli
