#include "genprob/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace genprob {

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::Exact, "exact"},           {Command::Estimate, "estimate"},       {Command::Sweep, "sweep"},
    {Command::TraceField, "trace-field"}, {Command::ScottCheck, "scott-check"}, {Command::Decay, "decay"},
    {Command::AuditTable1, "audit-table1"},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("bad value for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

template <class T>
std::vector<T> parse_list(std::string_view text, std::string_view what) {
  std::vector<T> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(parse_number<T>(text.substr(pos, end - pos), what));
    pos = end + 1;
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(xs[i]);
  }
  return s;
}

bool parse_bool(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("bad boolean for " + std::string(what) + ": '" + std::string(text) + "'");
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("bad number in CSV: '" + std::string(text) + "'");
  }
  return v;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    pos = end + 1;
  }
  return lines;
}

void expect_header(const std::vector<std::string_view>& lines, std::string_view header) {
  if (lines.empty() || lines.front() != header) throw std::invalid_argument("CSV header mismatch");
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "";
}

Command parse_command(std::string_view text) {
  for (const auto& [cmd, name] : kCommands)
    if (name == text) return cmd;
  throw ConfigError("unknown command '" + std::string(text) + "'");
}

// --------------------------------------------------------------- config

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  auto opt = [](const auto& o) { return o ? std::to_string(*o) : std::string(); };
  os << "command=" << command_name(c.command) << '\n'
     << "family=" << c.family << '\n'
     << "q=" << join(c.qs) << '\n'
     << "r=" << opt(c.r) << '\n'
     << "s=" << opt(c.s) << '\n';
  for (const auto& rep : c.reps) os << "rep=" << rep << '\n';
  os << "whole-group=" << (c.whole_group ? "true" : "false") << '\n'
     << "exact=" << (c.exact ? "true" : "false") << '\n'
     << "name=" << c.name << '\n'
     << "trials=" << c.trials << '\n'
     << "seed=" << c.seed << '\n'
     << "closure-cap=" << c.closure_cap << '\n'
     << "enum-cap=" << c.enum_cap << '\n'
     << "word-budget=" << c.word_budget << '\n'
     << "threads=" << c.threads << '\n';
  for (const auto& g : c.gens) os << "gen=" << g << '\n';
  os << "group=" << c.group << '\n'
     << "dims=" << join(c.dims) << '\n'
     << "delta=" << opt(c.delta) << '\n'
     << "p=" << c.p << '\n'
     << "degrees=" << join(c.degrees) << '\n'
     << "word=" << c.word << '\n'
     << "output=" << c.output << '\n'
     << "plot=" << c.plot << '\n';
  return os.str();
}

ExperimentConfig parse_config(std::string_view text, bool* seed_given) {
  ExperimentConfig c;
  if (seed_given) *seed_given = false;
  bool reps_seen = false, gens_seen = false;
  for (std::string_view line : lines_of(text)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("config line without '=': '" + std::string(line) + "'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    auto opt_u64 = [&]() -> std::optional<u64> {
      if (value.empty()) return std::nullopt;
      return parse_number<u64>(value, key);
    };
    if (key == "command") c.command = parse_command(value);
    else if (key == "family") c.family = value;
    else if (key == "q") c.qs = parse_list<u64>(value, key);
    else if (key == "r") c.r = opt_u64();
    else if (key == "s") c.s = opt_u64();
    else if (key == "rep") {
      if (!reps_seen) c.reps.clear();
      reps_seen = true;
      c.reps.emplace_back(value);
    } else if (key == "whole-group") c.whole_group = parse_bool(value, key);
    else if (key == "exact") c.exact = parse_bool(value, key);
    else if (key == "name") c.name = value;
    else if (key == "trials") c.trials = parse_number<u64>(value, key);
    else if (key == "seed") {
      c.seed = parse_number<u64>(value, key);
      if (seed_given) *seed_given = true;
    } else if (key == "closure-cap") c.closure_cap = parse_number<u64>(value, key);
    else if (key == "enum-cap") c.enum_cap = parse_number<u64>(value, key);
    else if (key == "word-budget") c.word_budget = parse_number<u64>(value, key);
    else if (key == "threads") c.threads = parse_number<int>(value, key);
    else if (key == "gen") {
      if (!gens_seen) c.gens.clear();
      gens_seen = true;
      c.gens.emplace_back(value);
    } else if (key == "group") c.group = value;
    else if (key == "dims") c.dims = parse_list<int>(value, key);
    else if (key == "delta") c.delta = value.empty() ? std::nullopt : std::optional<int>(parse_number<int>(value, key));
    else if (key == "p") c.p = parse_number<u64>(value, key);
    else if (key == "degrees") c.degrees = parse_list<int>(value, key);
    else if (key == "word") c.word = value;
    else if (key == "output") c.output = value;
    else if (key == "plot") c.plot = value;
    else throw ConfigError("unknown config key '" + key + "'");
  }
  return c;
}

std::string usage() {
  return "usage: genprob <command> [options]\n"
         "commands: exact, estimate, sweep, trace-field, scott-check, decay, audit-table1\n"
         "run 'genprob <command> --help' for the options of a command\n";
}

ExperimentConfig parse_args(std::span<const std::string> args, std::optional<std::string> env_seed) {
  if (args.empty()) throw ConfigError("missing command");
  if (args[0] == "--help" || args[0] == "-h") throw HelpRequested(usage());
  ExperimentConfig cfg;
  cfg.command = parse_command(args[0]);

  // A config file provides the base values; flags given alongside override it.
  bool seed_in_file = false;
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    else continue;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = parse_config(ss.str(), &seed_in_file);
    if (cfg.command != parse_command(args[0])) throw ConfigError("config file is for a different command");
  }

  CLI::App app{"genprob " + args[0]};
  std::string config_path;
  app.add_option("--config", config_path, "key=value file with base settings");
  const Command cmd = cfg.command;
  const bool group_cmd = cmd == Command::Exact || cmd == Command::Estimate || cmd == Command::Sweep;
  std::optional<u64> r, s;
  std::optional<int> delta;
  CLI::Option* seed_opt = nullptr;
  if (group_cmd || cmd == Command::TraceField) {
    app.add_option("--family", cfg.family, "SL2, SL3, Sp4, PSL2, PSL3 or PSp4");
    app.add_option("--q", cfg.qs, "field order(s), comma separated")->delimiter(',');
  }
  if (group_cmd) {
    app.add_option("--r", r, "order of the first element");
    app.add_option("--s", s, "order of the second element");
    app.add_flag("--whole-group", cfg.whole_group, "draw both elements from the whole group");
    app.add_option("--enum-cap", cfg.enum_cap, "largest group enumerated exactly");
  }
  if (cmd == Command::Exact || cmd == Command::Estimate) {
    app.add_option("--rep", cfg.reps, "class representative (C, then D), rows ';', entries ' ', coefficients ','");
  }
  if (cmd == Command::Estimate || cmd == Command::Sweep || cmd == Command::Decay) {
    app.add_option("--trials", cfg.trials, "Monte Carlo trials");
    seed_opt = app.add_option("--seed", cfg.seed, std::string("master seed (else ") + kSeedEnvVar + ")");
    app.add_option("--threads", cfg.threads, "worker threads, 0 for the OpenMP default");
  }
  if (cmd == Command::Estimate || cmd == Command::Sweep) {
    app.add_option("--closure-cap", cfg.closure_cap, "largest group order decided by closure");
  }
  if (cmd == Command::Sweep) {
    app.add_flag("--exact", cfg.exact, "exact rows instead of Monte Carlo");
    app.add_option("--name", cfg.name, "experiment name, part of the per-q seed");
  }
  if (cmd == Command::TraceField) {
    app.add_option("--gen", cfg.gens, "generator matrix (repeatable)");
  }
  if (cmd == Command::Estimate || cmd == Command::Sweep || cmd == Command::TraceField) {
    app.add_option("--word-budget", cfg.word_budget, "largest word ball enumerated for trace fields");
  }
  if (cmd == Command::ScottCheck) {
    app.add_option("--group", cfg.group, "exceptional or classical type, e.g. E8");
    app.add_option("--dims", cfg.dims, "two class dimensions")->delimiter(',');
    app.add_option("--delta", delta, "evaluate dimC + dimD >= dim G + rank - delta instead");
  }
  if (cmd == Command::Decay) {
    app.add_option("--p", cfg.p, "characteristic");
    app.add_option("--degrees", cfg.degrees, "extension degrees a >= 2")->delimiter(',');
    app.add_option("--word", cfg.word, "word in x, y, X = x^-1, Y = y^-1");
  }
  if (cmd != Command::TraceField && cmd != Command::ScottCheck) {
    app.add_option("--output", cfg.output, "CSV path (default: standard output)");
    app.add_option("--plot", cfg.plot, "write a gnuplot script for the CSV");
  }

  std::vector<std::string> rest(args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string(e.what()) + "\n" + app.help());
  }
  if (r) cfg.r = r;
  if (s) cfg.s = s;
  if (delta) cfg.delta = delta;
  const bool seed_flag = seed_opt && seed_opt->count() > 0;
  if (!seed_flag && !seed_in_file && env_seed && !env_seed->empty()) {
    cfg.seed = parse_number<u64>(*env_seed, kSeedEnvVar);
  }
  return cfg;
}

// ------------------------------------------------------------------ CSV

std::string family_label(const GroupSpec& spec) {
  const std::string n = spec.name();
  return n.substr(0, n.find('('));
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote in CSV line");
  out.push_back(std::move(cur));
  return out;
}

std::string emit_csv(std::span<const EstimateReport> reports) {
  std::ostringstream os;
  os << kReportHeader << '\n';
  auto opt = [](const auto& o) { return o ? std::to_string(*o) : std::string(); };
  for (const auto& r : reports) {
    const Tally& t = r.tally;
    os << family_label(r.spec) << ',' << r.spec.q() << ',' << (r.mode == Mode::Exact ? "exact" : "mc") << ','
       << opt(r.r) << ',' << opt(r.s) << ',' << csv_field(r.class_c) << ',' << csv_field(r.class_d) << ','
       << r.trials << ',' << t.generates << ',' << t.proper_reducible << ',' << t.proper_subfield << ','
       << t.proper_other << ',' << t.inconclusive << ',' << format_double(r.point) << ','
       << (r.wilson95 ? format_double(r.wilson95->lo) : "") << ','
       << (r.wilson95 ? format_double(r.wilson95->hi) : "") << ',' << opt(r.seed) << '\n';
  }
  return os.str();
}

std::vector<EstimateReport> parse_csv(std::string_view text) {
  const auto lines = lines_of(text);
  expect_header(lines, kReportHeader);
  std::vector<EstimateReport> out;
  auto num = [](const std::string& f) { return parse_number<u64>(f, "CSV field"); };
  auto opt = [&](const std::string& f) { return f.empty() ? std::nullopt : std::optional<u64>(num(f)); };
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 17) throw std::invalid_argument("CSV row with " + std::to_string(f.size()) + " fields");
    EstimateReport r(GroupSpec::parse(f[0], num(f[1])));
    if (f[2] == "exact") r.mode = Mode::Exact;
    else if (f[2] == "mc") r.mode = Mode::MonteCarlo;
    else throw std::invalid_argument("unknown mode '" + f[2] + "'");
    r.r = opt(f[3]);
    r.s = opt(f[4]);
    r.class_c = f[5];
    r.class_d = f[6];
    r.trials = num(f[7]);
    r.tally = {num(f[8]), num(f[9]), num(f[10]), num(f[11]), num(f[12])};
    r.point = parse_double(f[13]);
    if (!f[14].empty() || !f[15].empty()) r.wilson95 = Interval{parse_double(f[14]), parse_double(f[15])};
    r.seed = opt(f[16]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string emit_decay_csv(std::span<const DecayRow> rows) {
  std::ostringstream os;
  os << kDecayHeader << '\n';
  for (const auto& r : rows) {
    os << r.p << ',' << r.a << ',' << r.q << ',' << csv_field(r.word) << ',' << r.trials << ','
       << format_double(r.fraction) << ',' << format_double(r.scaled) << '\n';
  }
  return os.str();
}

std::vector<DecayRow> parse_decay_csv(std::string_view text) {
  const auto lines = lines_of(text);
  expect_header(lines, kDecayHeader);
  std::vector<DecayRow> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 7) throw std::invalid_argument("decay row with " + std::to_string(f.size()) + " fields");
    DecayRow r;
    r.p = parse_number<u64>(f[0], "p");
    r.a = parse_number<int>(f[1], "a");
    r.q = parse_number<u64>(f[2], "q");
    r.word = f[3];
    r.trials = parse_number<u64>(f[4], "trials");
    r.fraction = parse_double(f[5]);
    r.scaled = parse_double(f[6]);
    r.hits = static_cast<u64>(std::llround(r.fraction * static_cast<double>(r.trials)));
    out.push_back(std::move(r));
  }
  return out;
}

std::string emit_audit_csv(std::span<const AuditRow> rows) {
  std::ostringstream os;
  os << kAuditHeader << '\n';
  for (const auto& row : rows) {
    const ClassInfo& c = row.info;
    os << c.group.label() << ',' << char_case_label(c.characteristic_case) << ',' << c.order << ','
       << csv_field(c.label) << ',' << (c.semisimple ? "true" : "false") << ',' << c.dim << ','
       << (row.recomputed ? std::to_string(row.recomputed_dim) : "") << ',' << (row.match ? "true" : "false")
       << '\n';
  }
  return os.str();
}

std::string plot_script(Command command, const std::string& csv_path) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key top left\n"
     << "set logscale x\n";
  if (command == Command::Decay) {
    os << "set xlabel 'q'\n"
       << "set ylabel 'fraction'\n"
       << "plot '" << csv_path << "' skip 1 using 3:6 with linespoints title 'proper-subfield fraction', \\\n"
       << "     '' skip 1 using 3:7 with linespoints title 'fraction * sqrt(q)'\n";
  } else {
    os << "set xlabel 'q'\n"
       << "set ylabel 'generation probability'\n"
       << "set yrange [0:1]\n"
       << "plot '" << csv_path << "' skip 1 using 2:14 with linespoints title 'point', \\\n"
       << "     '' skip 1 using 2:14:15:16 with yerrorbars title 'Wilson 95%'\n";
  }
  os << "pause mouse close\n";
  return os.str();
}

// --------------------------------------------------------------- driver

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

Budget budget_of(const ExperimentConfig& c) { return Budget{c.closure_cap, c.word_budget}; }

std::vector<ClassSpec> class_reps(const ExperimentConfig& c, const GroupSpec& spec) {
  std::vector<ClassSpec> out;
  for (const auto& text : c.reps) {
    const Matrix m = Matrix::parse(spec.field(), text);
    out.push_back(make_class(spec, m, m.format()));
  }
  return out;
}

// Which pair population the config names; exactly one must be given.
void check_population(const ExperimentConfig& c, bool allow_reps) {
  const int given = (c.whole_group ? 1 : 0) + ((c.r || c.s) ? 1 : 0) + (c.reps.empty() ? 0 : 1);
  require(given == 1, allow_reps ? "give exactly one of --whole-group, --r/--s, or two --rep"
                                 : "give exactly one of --whole-group or --r/--s");
  if (c.r || c.s) require(c.r && c.s && *c.r > 0 && *c.s > 0, "--r and --s must both be positive");
  if (!c.reps.empty()) {
    require(allow_reps, "class representatives are not accepted here");
    require(c.reps.size() == 2, "give exactly two --rep values (C, then D)");
    require(c.qs.size() == 1, "class representatives need a single --q");
  }
}

std::vector<EstimateReport> run_exact(const ExperimentConfig& c) {
  check_population(c, true);
  require(!c.qs.empty(), "--q is required");
  std::vector<EstimateReport> out;
  for (u64 q : c.qs) {
    const GroupSpec spec = GroupSpec::parse(c.family, q);
    if (!c.reps.empty()) {
      const auto cls = class_reps(c, spec);
      out.push_back(exact_P_classes(spec, cls[0], cls[1], c.enum_cap).to_report());
    } else if (c.whole_group) {
      out.push_back(exact_P_group(spec, c.enum_cap).to_report());
    } else {
      out.push_back(exact_P(spec, *c.r, *c.s, c.enum_cap).to_report());
    }
  }
  return out;
}

std::vector<EstimateReport> run_estimate(const ExperimentConfig& c) {
  check_population(c, true);
  require(c.qs.size() == 1, "estimate takes a single --q (use sweep for lists)");
  require(c.trials > 0, "--trials must be at least 1");
  const GroupSpec spec = GroupSpec::parse(c.family, c.qs[0]);
  Population pop = Population::whole_group();
  if (!c.reps.empty()) {
    auto cls = class_reps(c, spec);
    pop = Population::classes(std::move(cls[0]), std::move(cls[1]));
  } else if (!c.whole_group) {
    pop = Population::orders(*c.r, *c.s);
  }
  return {monte_carlo_P(spec, pop, c.trials, c.seed, budget_of(c), c.threads)};
}

std::vector<EstimateReport> run_sweep(const ExperimentConfig& c) {
  check_population(c, false);
  require(!c.qs.empty(), "--q is required");
  require(c.exact || c.trials > 0, "--trials must be at least 1");
  SweepSpec sw;
  sw.name = c.name;
  sw.family = c.family;
  sw.qs = c.qs;
  sw.exact = c.exact;
  sw.whole_group = c.whole_group;
  if (c.r) sw.r = *c.r;
  if (c.s) sw.s = *c.s;
  sw.trials = c.trials;
  sw.seed = c.seed;
  sw.cap = c.enum_cap;
  sw.budget = budget_of(c);
  sw.threads = c.threads;
  return sweep(sw);
}

void write_artifacts(const ExperimentConfig& c, const std::string& csv, std::ostream& out) {
  if (c.output.empty()) {
    out << csv;
  } else {
    std::ofstream f(c.output);
    if (!f) throw ConfigError("cannot write '" + c.output + "'");
    f << csv;
  }
  if (!c.plot.empty()) {
    std::ofstream f(c.plot);
    if (!f) throw ConfigError("cannot write '" + c.plot + "'");
    f << plot_script(c.command, c.output);
  }
}

int dispatch(const ExperimentConfig& c, std::ostream& out) {
  require(c.plot.empty() || !c.output.empty(), "--plot needs --output (the script reads the CSV file)");
  switch (c.command) {
    case Command::Exact: write_artifacts(c, emit_csv(run_exact(c)), out); return kExitOk;
    case Command::Estimate: write_artifacts(c, emit_csv(run_estimate(c)), out); return kExitOk;
    case Command::Sweep: write_artifacts(c, emit_csv(run_sweep(c)), out); return kExitOk;
    case Command::Decay: {
      require(!c.degrees.empty(), "--degrees is required");
      require(c.trials > 0, "--trials must be at least 1");
      write_artifacts(c, emit_decay_csv(subfield_trace_decay(c.p, c.degrees, c.word, c.trials, c.seed, c.threads)),
                      out);
      return kExitOk;
    }
    case Command::AuditTable1: {
      const auto rows = audit_table1();
      write_artifacts(c, emit_audit_csv(rows), out);
      for (const auto& row : rows)
        if (!row.match) return kExitFailure;
      return kExitOk;
    }
    case Command::ScottCheck: {
      require(!c.group.empty(), "--group is required");
      require(c.dims.size() == 2, "--dims takes two class dimensions");
      const AlgGroupType g = AlgGroupType::parse(c.group);
      const bool ok = c.delta ? scott_inequality(g, c.dims[0], c.dims[1], *c.delta)
                              : scott_precondition(g, c.dims[0], c.dims[1]);
      out << (ok ? "true" : "false") << '\n';
      return kExitOk;
    }
    case Command::TraceField: {
      require(c.qs.size() == 1, "trace-field takes a single --q");
      require(!c.gens.empty(), "give at least one --gen");
      const GroupSpec spec = GroupSpec::parse(c.family, c.qs[0]);
      std::vector<Matrix> gens;
      for (const auto& g : c.gens) {
        gens.push_back(Matrix::parse(spec.field(), g));
        require(gens.back().dim() == spec.dim(), "generator dimension does not match " + spec.name());
      }
      out << trace_field(gens, c.word_budget) << '\n';
      return kExitOk;
    }
  }
  return kExitFailure;
}

}  // namespace

int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(cfg, out);
  } catch (const OverflowError& e) {
    err << "overflow: " << e.what() << '\n';
    return kExitOverflow;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    const char* env = std::getenv(kSeedEnvVar);
    cfg = parse_args(args, env ? std::optional<std::string>(env) : std::nullopt);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    if (args.empty()) err << usage();
    return kExitInvalid;
  }
  return run(cfg, out, err);
}

}  // namespace genprob
