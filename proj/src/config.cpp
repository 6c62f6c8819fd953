#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "peakon/cli.hpp"

namespace peakon::cli {

namespace {

using json = nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "command", "p",       "q",       "speeds", "L",      "eps",  "K",       "micro",
    "seed",    "t_end",   "tol",     "samples", "spectrum", "center", "h",  "boxes",
    "gaussians", "grid",  "N",       "output", "formats", "jobs"};

std::vector<double> parse_list(const std::string& text, const std::string& name) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("--" + name + ": '" + item + "' is not a number");
    }
    if (used != item.size()) throw UsageError("--" + name + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--" + name + ": empty list");
  return out;
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> number_list(const json& v, const std::string& key) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw UsageError("config key '" + key + "' must be a number list");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw UsageError("config key '" + key + "' must be a number list");
    out.push_back(x.get<double>());
  }
  return out;
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw UsageError("config key '" + key + "' must be a number");
  return v.get<double>();
}

std::size_t count_value(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw UsageError("config key '" + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

std::optional<Command> command_from(const std::string& name) {
  for (Command c : {Command::Simulate, Command::Spectrum, Command::Stability, Command::Monotonicity,
                    Command::Asymptotics, Command::IdentityCheck, Command::Approximate}) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

Box box_from(const json& v) {
  if (v.is_array() && v.size() == 3) return {number(v[0], "boxes"), number(v[1], "boxes"), number(v[2], "boxes")};
  if (v.is_object()) return {number(v.at("lo"), "boxes"), number(v.at("hi"), "boxes"), number(v.at("height"), "boxes")};
  throw UsageError("config key 'boxes' entries must be [lo, hi, height]");
}

Gaussian gaussian_from(const json& v) {
  if (v.is_array() && v.size() == 3) {
    return {number(v[0], "gaussians"), number(v[1], "gaussians"), number(v[2], "gaussians")};
  }
  if (v.is_object()) {
    return {number(v.at("mean"), "gaussians"), number(v.at("sigma"), "gaussians"), number(v.at("mass"), "gaussians")};
  }
  throw UsageError("config key 'gaussians' entries must be [mean, sigma, mass]");
}

std::size_t default_jobs() {
  if (const char* env = std::getenv("PEAKON_LAB_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  return 1;
}

bool finite_all(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void check_state(const RunConfig& c, std::vector<std::string>& errors) {
  if (c.p.empty()) errors.push_back("p must be given");
  if (c.p.size() != c.q.size()) errors.push_back("p and q must have the same length");
  if (!finite_all(c.p) || !finite_all(c.q)) errors.push_back("p and q must be finite");
  for (double x : c.p) {
    if (!(x > 0.0)) {
      errors.push_back("p must be positive");
      break;
    }
  }
  for (std::size_t i = 1; i < c.q.size(); ++i) {
    if (!(c.q[i] > c.q[i - 1])) {
      errors.push_back("q must be strictly increasing");
      break;
    }
  }
}

void check_train(const RunConfig& c, std::vector<std::string>& errors) {
  if (c.speeds.empty()) errors.push_back("speeds must be given");
  for (double x : c.speeds) {
    if (!(x > 0.0)) {
      errors.push_back("speeds must be positive");
      break;
    }
  }
  for (std::size_t i = 1; i < c.speeds.size(); ++i) {
    if (!(c.speeds[i] > c.speeds[i - 1])) {
      errors.push_back("speeds must be increasing");
      break;
    }
  }
  if (!(c.spacing > 0.0) || !std::isfinite(c.spacing)) errors.push_back("L must be positive");
  if (c.epsilon.empty()) errors.push_back("eps must be given");
  bool random = false;
  for (double e : c.epsilon) {
    if (!(e >= 0.0) || !std::isfinite(e)) errors.push_back("eps must be nonnegative");
    if (e > 0.0) random = true;
  }
  if (random && !c.seed) errors.push_back("--seed is required for randomized perturbations");
  if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) errors.push_back("t_end must be positive");
}

void check_integration(const RunConfig& c, std::vector<std::string>& errors) {
  if (!(c.tol >= 1e-13 && c.tol <= 1e-6)) errors.push_back("tol must lie in [1e-13, 1e-6]");
  if (c.samples < 2) errors.push_back("samples must be at least 2");
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::Spectrum: return "spectrum";
    case Command::Stability: return "stability";
    case Command::Monotonicity: return "monotonicity";
    case Command::Asymptotics: return "asymptotics";
    case Command::IdentityCheck: return "identity-check";
    case Command::Approximate: return "approximate";
  }
  return "?";
}

void apply_json(const json& j, RunConfig& c) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  std::vector<std::string> unknown;
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.count(key)) unknown.push_back(key);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw UsageError(msg);
  }
  try {
    if (j.contains("command")) {
      const auto cmd = command_from(j["command"].get<std::string>());
      if (!cmd) throw UsageError("config: unknown command");
      c.command = *cmd;
    }
    if (j.contains("p")) c.p = number_list(j["p"], "p");
    if (j.contains("q")) c.q = number_list(j["q"], "q");
    if (j.contains("speeds")) c.speeds = number_list(j["speeds"], "speeds");
    if (j.contains("L")) c.spacing = number(j["L"], "L");
    if (j.contains("eps")) c.epsilon = number_list(j["eps"], "eps");
    if (j.contains("K")) c.scale = number(j["K"], "K");
    if (j.contains("micro")) c.micro = count_value(j["micro"], "micro");
    if (j.contains("seed")) {
      if (!j["seed"].is_number_integer() || (j["seed"].is_number_integer() && !j["seed"].is_number_unsigned() && j["seed"].get<long long>() < 0)) {
        throw UsageError("config key 'seed' must be a nonnegative integer");
      }
      c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("t_end")) c.t_end = number(j["t_end"], "t_end");
    if (j.contains("tol")) c.tol = number(j["tol"], "tol");
    if (j.contains("samples")) c.samples = count_value(j["samples"], "samples");
    if (j.contains("spectrum")) c.record_spectrum = j["spectrum"].get<bool>();
    if (j.contains("center")) c.center = number(j["center"], "center");
    if (j.contains("h")) c.h = number(j["h"], "h");
    if (j.contains("boxes")) {
      c.mixture.boxes.clear();
      for (const json& b : j["boxes"]) c.mixture.boxes.push_back(box_from(b));
    }
    if (j.contains("gaussians")) {
      c.mixture.gaussians.clear();
      for (const json& g : j["gaussians"]) c.mixture.gaussians.push_back(gaussian_from(g));
    }
    if (j.contains("grid")) {
      const json& g = j["grid"];
      c.grid = GridDensity{number(g.at("x0"), "grid.x0"), number(g.at("dx"), "grid.dx"),
                           number_list(g.at("values"), "grid.values")};
    }
    if (j.contains("N")) c.count = count_value(j["N"], "N");
    if (j.contains("output")) c.output = j["output"].get<std::string>();
    if (j.contains("formats")) c.formats = j["formats"].get<std::vector<std::string>>();
    if (j.contains("jobs")) c.jobs = count_value(j["jobs"], "jobs");
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Camassa-Holm multipeakon experiments", "peakon_lab"};
  app.require_subcommand(1);
  // -h is taken by the finite-difference step.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_help_all_flag("--help-all");

  std::string config_path, p, q, speeds, eps, formats, output;
  std::vector<std::string> boxes, gaussians;
  double spacing = 0, scale = 0, t_end = 0, tol = 0, center = 0, h = 0;
  std::size_t micro = 0, samples = 0, count = 0, jobs = 0;
  std::uint64_t seed = 0;
  bool spectrum = false;

  struct Sub {
    Command cmd;
    const char* help;
  };
  const std::vector<Sub> subs = {
      {Command::Simulate, "Integrate a multipeakon state"},
      {Command::Spectrum, "Eigenvalues of the isospectral matrix"},
      {Command::Stability, "Train stability over an epsilon sweep"},
      {Command::Monotonicity, "Almost monotonicity of the weighted energy"},
      {Command::Asymptotics, "Asymptotic speeds against the spectrum"},
      {Command::IdentityCheck, "Weighted energy identity by finite differences"},
      {Command::Approximate, "Peakon approximation of a momentum density"}};

  std::vector<std::pair<Command, CLI::App*>> apps;
  std::map<std::string, CLI::Option*> opts;
  for (const Sub& s : subs) {
    CLI::App* a = app.add_subcommand(to_string(s.cmd), s.help);
    apps.emplace_back(s.cmd, a);
    const std::string prefix = to_string(s.cmd) + "/";
    auto add = [&](const std::string& name, auto& target, const std::string& help) {
      opts[prefix + name] = a->add_option("--" + name, target, help);
    };
    add("config", config_path, "JSON config file");
    add("output", output, "Output path prefix");
    add("format", formats, "Comma list of csv, json, svg");
    add("tol", tol, "Integrator tolerance");
    add("samples", samples, "Number of samples");
    switch (s.cmd) {
      case Command::Simulate:
      case Command::Spectrum:
      case Command::Asymptotics:
      case Command::IdentityCheck:
        add("p", p, "Momenta, comma separated");
        add("q", q, "Positions, comma separated");
        break;
      default: break;
    }
    if (s.cmd == Command::Simulate) {
      add("t-end", t_end, "Final time");
      opts[prefix + "spectrum"] = a->add_flag("--spectrum", spectrum, "Record eigenvalues");
    }
    if (s.cmd == Command::Asymptotics) add("T", t_end, "Horizon");
    if (s.cmd == Command::Stability || s.cmd == Command::Monotonicity) {
      add("speeds", speeds, "Speeds c_1 < ... < c_N");
      add("L", spacing, "Spacing");
      add("eps", eps, "Epsilon value(s)");
      add("K", scale, "Weight scale");
      add("micro", micro, "Number of micro peakons");
      add("seed", seed, "Random seed");
      add("t-end", t_end, "Final time");
      add("jobs", jobs, "Worker threads (default PEAKON_LAB_JOBS or 1)");
    }
    if (s.cmd == Command::IdentityCheck) {
      add("K", scale, "Weight scale");
      add("center", center, "Weight centre");
      add("h", h, "Finite-difference step");
    }
    if (s.cmd == Command::Approximate) {
      opts[prefix + "box"] = a->add_option("--box", boxes, "lo,hi,height (repeatable)");
      opts[prefix + "gaussian"] = a->add_option("--gaussian", gaussians, "mean,sigma,mass (repeatable)");
      add("N", count, "Number of peakons");
    }
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    for (const auto& [cmd, a] : apps) {
      if (a->parsed()) throw HelpRequested(a->help());
    }
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig c;
  c.jobs = default_jobs();
  std::string prefix;
  for (const auto& [cmd, a] : apps) {
    if (a->parsed()) {
      c.command = cmd;
      prefix = to_string(cmd) + "/";
    }
  }
  // Horizons used by the reference experiments; simulate needs --t-end.
  switch (c.command) {
    case Command::Stability: c.t_end = 200.0; break;
    case Command::Monotonicity: c.t_end = 100.0; break;
    case Command::Asymptotics: c.t_end = 80.0; break;
    default: break;
  }
  auto given = [&](const std::string& name) {
    const auto it = opts.find(prefix + name);
    return it != opts.end() && it->second != nullptr && it->second->count() > 0;
  };

  if (given("config")) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot read config file " + config_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw UsageError("config file is not valid JSON: " + std::string(e.what()));
    }
    const Command chosen = c.command;
    apply_json(j, c);
    if (c.command != chosen) throw UsageError("config command differs from the subcommand");
  }
  if (given("p")) c.p = parse_list(p, "p");
  if (given("q")) c.q = parse_list(q, "q");
  if (given("speeds")) c.speeds = parse_list(speeds, "speeds");
  if (given("eps")) c.epsilon = parse_list(eps, "eps");
  if (given("L")) c.spacing = spacing;
  if (given("K")) c.scale = scale;
  if (given("micro")) c.micro = micro;
  if (given("seed")) c.seed = seed;
  if (given("t-end") || given("T")) c.t_end = t_end;
  if (given("tol")) c.tol = tol;
  if (given("samples")) c.samples = samples;
  if (given("spectrum")) c.record_spectrum = spectrum;
  if (given("center")) c.center = center;
  if (given("h")) c.h = h;
  if (given("N")) c.count = count;
  if (given("jobs")) c.jobs = jobs;
  if (given("output")) c.output = output;
  if (given("format")) c.formats = split_words(formats);
  if (given("box")) {
    c.mixture.boxes.clear();
    for (const auto& b : boxes) {
      const auto v = parse_list(b, "box");
      if (v.size() != 3) throw UsageError("--box takes lo,hi,height");
      c.mixture.boxes.push_back({v[0], v[1], v[2]});
    }
  }
  if (given("gaussian")) {
    c.mixture.gaussians.clear();
    for (const auto& g : gaussians) {
      const auto v = parse_list(g, "gaussian");
      if (v.size() != 3) throw UsageError("--gaussian takes mean,sigma,mass");
      c.mixture.gaussians.push_back({v[0], v[1], v[2]});
    }
  }
  return c;
}

void validate(const RunConfig& c) {
  std::vector<std::string> errors;
  for (const std::string& f : c.formats) {
    if (f != "csv" && f != "json" && f != "svg") errors.push_back("unknown format '" + f + "'");
  }
  if (c.formats.empty()) errors.push_back("at least one output format is required");
  if (c.output.empty()) errors.push_back("output prefix must not be empty");
  if (c.jobs < 1) errors.push_back("jobs must be at least 1");

  switch (c.command) {
    case Command::Simulate:
      check_state(c, errors);
      check_integration(c, errors);
      if (!std::isfinite(c.t_end)) errors.push_back("t_end must be finite");
      break;
    case Command::Spectrum:
      check_state(c, errors);
      break;
    case Command::Stability:
      check_train(c, errors);
      check_integration(c, errors);
      if (c.scale && !(*c.scale >= 4.0)) errors.push_back("K must be >= 4");
      break;
    case Command::Monotonicity: {
      check_train(c, errors);
      check_integration(c, errors);
      if (c.epsilon.size() > 1) errors.push_back("monotonicity takes a single eps");
      const double k = c.scale.value_or(default_scale(c.spacing));
      if (!(k >= 4.0)) errors.push_back("K must be >= 4");
      if (c.spacing > 0.0 && !(k <= std::sqrt(c.spacing))) errors.push_back("K must be <= sqrt(L)");
      break;
    }
    case Command::Asymptotics:
      check_state(c, errors);
      check_integration(c, errors);
      if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) errors.push_back("T must be positive");
      break;
    case Command::IdentityCheck:
      check_state(c, errors);
      if (c.scale && !(*c.scale >= 4.0)) errors.push_back("K must be >= 4");
      if (!(c.h >= 1e-5 && c.h <= 1e-2)) errors.push_back("h must lie in [1e-5, 1e-2]");
      if (!std::isfinite(c.center)) errors.push_back("center must be finite");
      break;
    case Command::Approximate:
      if (c.count < 1) errors.push_back("N must be at least 1");
      if (c.grid && (!c.mixture.boxes.empty() || !c.mixture.gaussians.empty())) {
        errors.push_back("give either a grid or boxes/gaussians, not both");
      }
      if (!c.grid && c.mixture.boxes.empty() && c.mixture.gaussians.empty()) {
        errors.push_back("a density (boxes, gaussians or grid) is required");
      }
      for (const Box& b : c.mixture.boxes) {
        if (!(b.hi > b.lo) || !(b.height >= 0.0)) {
          errors.push_back("boxes need lo < hi and height >= 0");
          break;
        }
      }
      for (const Gaussian& g : c.mixture.gaussians) {
        if (!(g.sigma > 0.0) || !(g.mass >= 0.0)) {
          errors.push_back("gaussians need sigma > 0 and mass >= 0");
          break;
        }
      }
      if (c.grid) {
        if (!(c.grid->dx > 0.0)) errors.push_back("grid dx must be positive");
        for (double v : c.grid->values) {
          if (!(v >= 0.0)) {
            errors.push_back("grid values must be nonnegative");
            break;
          }
        }
      }
      break;
  }
  if (!errors.empty()) {
    std::string msg;
    for (std::size_t i = 0; i < errors.size(); ++i) msg += (i ? "\n" : "") + errors[i];
    throw UsageError(msg);
  }
}

}  // namespace peakon::cli
