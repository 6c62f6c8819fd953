#pragma once

// Command-line layer: configuration, command execution and output files.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "peakon/experiments.hpp"

namespace peakon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Invalid or missing configuration; the message lists every problem.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// --help was given; what() is the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { Simulate, Spectrum, Stability, Monotonicity, Asymptotics, IdentityCheck, Approximate };

std::string to_string(Command c);

struct RunConfig {
  Command command = Command::Simulate;

  // Peakon state (simulate, spectrum, asymptotics, identity-check).
  std::vector<double> p;
  std::vector<double> q;

  // Trains (stability, monotonicity).
  std::vector<double> speeds;
  double spacing = 0.0;               // L
  std::vector<double> epsilon;        // one run per value
  std::optional<double> scale;        // K
  std::size_t micro = 2;
  std::optional<std::uint64_t> seed;

  // Integration and sampling.
  double t_end = 0.0;                 // also the asymptotic horizon T
  double tol = kDefaultTol;
  std::size_t samples = 200;
  bool record_spectrum = false;

  // identity-check.
  double center = 0.0;
  double h = 1e-4;

  // approximate.
  MixtureDensity mixture;
  std::optional<GridDensity> grid;
  std::size_t count = 0;              // N

  // Output.
  std::string output = "peakon_lab";  // path prefix
  std::vector<std::string> formats = {"csv", "json"};
  std::size_t jobs = 1;
};

/// Parses argv (argv[0] is the program name). A `--config` JSON file is read
/// first; flags given on the command line override it. Throws UsageError.
RunConfig parse_config(const std::vector<std::string>& args);

/// Reads a JSON config object into `config`, rejecting unknown keys.
void apply_json(const nlohmann::json& j, RunConfig& config);

/// Checks the preconditions of the selected command; throws UsageError
/// listing every violation.
void validate(const RunConfig& config);

/// The numbers a command produced, in every output format.
struct Outputs {
  nlohmann::ordered_json json;
  std::string csv;
  std::string svg;
  bool checks_ok = true;
  std::vector<std::string> failed_checks;
};

/// Runs the command. Library exceptions propagate.
Outputs execute(const RunConfig& config);

/// Writes <output>.<format> for each requested format. Throws IoError.
void emit(const Outputs& out, const std::string& prefix, const std::vector<std::string>& formats);

/// Full program: parse, validate, execute, emit. Returns the exit code and
/// writes diagnostics to stderr.
int run_main(const std::vector<std::string>& args);

// ---------------------------------------------------------------------------
// Formats.

/// %.17g with '.' as decimal separator regardless of locale.
std::string format_number(double x);

/// RFC 4180 table with CRLF line ends. Fields are quoted when needed.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Self-contained SVG line chart, one polyline per series.
std::string svg_plot(const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<PlotSeries>& series);

// ---------------------------------------------------------------------------
// JSON documents.

nlohmann::ordered_json to_json(const TrainSpec& spec);
TrainSpec train_spec_from_json(const nlohmann::json& j);

/// Stability document {"spec", "series", "summary"}. `a_fit` scales the
/// envelope a_fit (sqrt(eps) + L^{-1/8}); `sweep_constant` is the maximum of
/// sup d / sqrt(eps) over the sweep the run belongs to.
nlohmann::ordered_json to_json(const StabilityReport& report, const StabilityOptions& options,
                               double a_fit, double sweep_constant);
StabilityReport stability_from_json(const nlohmann::json& j);

bool same_fields(const StabilityReport& a, const StabilityReport& b);

}  // namespace peakon::cli
