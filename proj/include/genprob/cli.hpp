#pragma once

// Experiment configuration, CSV schemas, plot scripts and the command driver
// behind the genprob executable.

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "genprob/algdata.hpp"
#include "genprob/estimate.hpp"

namespace genprob {

/// Invalid flags, config keys or combinations; maps to exit code 3.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by parse_args for --help; carries the text to print.
struct HelpRequested {
  std::string text;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // also: audit-table1 found a mismatch
inline constexpr int kExitOverflow = 2;
inline constexpr int kExitInvalid = 3;

inline constexpr const char* kSeedEnvVar = "GENPROB_SEED";

enum class Command { Exact, Estimate, Sweep, TraceField, ScottCheck, Decay, AuditTable1 };

std::string_view command_name(Command c);
Command parse_command(std::string_view text);

struct ExperimentConfig {
  Command command = Command::Estimate;
  std::string family = "SL2";
  std::vector<u64> qs;
  std::optional<u64> r, s;
  std::vector<std::string> reps;  // class representatives, C then D
  bool whole_group = false;
  bool exact = false;  // sweep: exact rows instead of Monte Carlo
  std::string name = "sweep";
  u64 trials = 10'000;
  u64 seed = 0;
  u64 closure_cap = 1'000'000;
  u64 enum_cap = 10'000'000;
  u64 word_budget = u64{1} << 20;
  int threads = 0;  // 0: OpenMP default
  std::vector<std::string> gens;  // trace-field generators
  std::string group;              // scott-check
  std::vector<int> dims;
  std::optional<int> delta;
  u64 p = 2;
  std::vector<int> degrees;
  std::string word = "xyXY";
  std::string output;  // empty: standard output
  std::string plot;    // gnuplot script path, optional

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Flat key=value text, one key per line, every field written (defaults
/// included). List keys use commas; rep and gen repeat the key per entry.
std::string serialize_config(const ExperimentConfig& cfg);

/// Inverse of serialize_config. Keys not present keep their defaults;
/// `seed_given` is set when the text carries a seed key.
ExperimentConfig parse_config(std::string_view text, bool* seed_given = nullptr);

/// Command line (without argv[0]) to config. Precedence: flags, then
/// --config file, then the seed environment value, then defaults.
ExperimentConfig parse_args(std::span<const std::string> args, std::optional<std::string> env_seed = std::nullopt);

std::string usage();

// ------------------------------------------------------------------ CSV

inline constexpr std::string_view kReportHeader =
    "family,q,mode,r,s,classC,classD,trials,generates,proper_reducible,proper_subfield,proper_other,"
    "inconclusive,point,lo95,hi95,seed";
inline constexpr std::string_view kDecayHeader = "p,a,q,word,trials,proper_subfield_fraction,scaled_fraction";
inline constexpr std::string_view kAuditHeader = "group,case,order,label,semisimple,tabulated_dim,recomputed_dim,match";

/// Family column: "PSp4", "SL2", ...
std::string family_label(const GroupSpec& spec);

std::string emit_csv(std::span<const EstimateReport> reports);
std::vector<EstimateReport> parse_csv(std::string_view text);

/// Decay rows carry hits implicitly: hits = round(fraction * trials).
std::string emit_decay_csv(std::span<const DecayRow> rows);
std::vector<DecayRow> parse_decay_csv(std::string_view text);

std::string emit_audit_csv(std::span<const AuditRow> rows);

/// Splits one CSV line, honoring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

/// gnuplot script plotting the CSV at csv_path.
std::string plot_script(Command command, const std::string& csv_path);

// --------------------------------------------------------------- driver

/// Executes a config; primary output goes to `out` (or the output file),
/// diagnostics to `err`. Returns the process exit code.
int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// Full entry point: argument parsing, environment, error mapping.
int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace genprob
