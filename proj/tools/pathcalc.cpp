// pathcalc command-line front end. Everything goes through the C API.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathcalc/pathcalc.h"

namespace {

enum class Kind { Text, Real, Integer, Flag };

struct Flag {
  std::string name;  // without leading dashes
  Kind kind;
  std::string fallback;  // empty: omitted unless given
  std::string help;
};

const std::vector<Flag> common_flags = {
    {"out", Kind::Text, "", "write the JSON report here instead of stdout"},
    {"csv", Kind::Text, "", "write path-valued outputs as CSV"},
    {"time-column", Kind::Text, "time", "name of the time column in inputs"},
};

const std::vector<Flag> model_flags = {
    {"model", Kind::Text, "", "brownian | gbm | correlated_gbm | deterministic | brownian_skeleton"},
    {"horizon", Kind::Real, "", "time horizon"},
    {"steps", Kind::Integer, "", "grid steps"},
    {"seed", Kind::Integer, "0", "generator seed"},
    {"sigma", Kind::Real, "", "volatility of brownian, gbm and skeleton models"},
    {"x0", Kind::Real, "", "start value (default 0, or 1 for gbm)"},
    {"sigma-s", Kind::Real, "", "stock volatility (correlated_gbm, default 0.2)"},
    {"sigma-i", Kind::Real, "", "index volatility (correlated_gbm, default 0.3)"},
    {"rho", Kind::Real, "", "driver correlation (correlated_gbm)"},
    {"s0", Kind::Real, "", "stock start (correlated_gbm, default 1)"},
    {"i0", Kind::Real, "", "index start (correlated_gbm, default 1)"},
    {"shape", Kind::Text, "", "constant | line | tent | sine | exp_line (deterministic, default line)"},
    {"slope", Kind::Real, "", "slope of deterministic shapes (default 1)"},
    {"amplitude", Kind::Real, "", "amplitude of deterministic shapes (default 1)"},
    {"skeleton-level", Kind::Integer, "", "skeleton resolution m (default 8)"},
    {"skeleton-eps0", Kind::Real, "", "skeleton base width (default 0.5)"},
    {"columns", Kind::Integer, "", "independent columns (brownian, gbm, skeleton; default 1)"},
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Flag> flags;
  bool model = false;
};

std::vector<Command> commands() {
  return {
      {"ingest",
       "Validate a CSV price file and rewrite it canonically",
       {{"input", Kind::Text, "", "CSV file to read (required)"},
        {"columns", Kind::Text, "", "comma-separated value columns (default: all)"},
        {"traded", Kind::Integer, "0", "number of traded columns (0 = all)"},
        {"time-column", Kind::Text, "time", "name of the time column"},
        {"csv", Kind::Text, "", "write the canonical CSV here"},
        {"out", Kind::Text, "", "write the JSON summary here instead of stdout"}}},
      {"integrate",
       "Ito integral of one path against another along Lebesgue partitions",
       {{"integrand", Kind::Text, "", "FILE[:COLUMN] (required)"},
        {"integrator", Kind::Text, "", "FILE[:COLUMN] (required)"},
        {"extra", Kind::Text, "", "FILE[:COLUMN] monitored in addition"},
        {"levels", Kind::Text, "4:10", "level range n_min:n_max"},
        {"eps0", Kind::Real, "0.5", "thresholds are eps0 * 2^-n"},
        {"tol", Kind::Real, "", "sup-norm tolerance (default 2^-6 times the integrator's range)"}}},
      {"qv",
       "Quadratic variation or covariation across levels",
       {{"x", Kind::Text, "", "FILE[:COLUMN] (required)"},
        {"y", Kind::Text, "", "FILE[:COLUMN] for the covariation with x"},
        {"levels", Kind::Text, "4:10", "level range n_min:n_max"},
        {"eps0", Kind::Real, "0.5", "thresholds are eps0 * 2^-n"}}},
      {"byparts",
       "Integration-by-parts and polarization residuals",
       {{"x", Kind::Text, "", "FILE[:COLUMN] (required)"},
        {"y", Kind::Text, "", "FILE[:COLUMN] (required)"},
        {"levels", Kind::Text, "4:9", "level range n_min:n_max"},
        {"eps0", Kind::Real, "0.5", "thresholds are eps0 * 2^-n"},
        {"rel-tol", Kind::Real, "1e-8", "relative residual gate"}}},
      {"ito",
       "Ito formula residual for a built-in function",
       {{"function", Kind::Text, "square", "square | cube | product | exp_martingale"},
        {"x", Kind::Text, "", "FILE[:COLUMN] (required)"},
        {"y", Kind::Text, "", "FILE[:COLUMN], second argument of two-variable functions"},
        {"levels", Kind::Text, "4:9", "level range n_min:n_max"},
        {"eps0", Kind::Real, "0.5", "thresholds are eps0 * 2^-n"},
        {"final-tol", Kind::Real, "0.01", "gate on the range-scaled residual at the last level"}}},
      {"doleans",
       "Doleans exponential and logarithm round trips",
       {{"x", Kind::Text, "", "FILE[:COLUMN] (required)"},
        {"level", Kind::Integer, "9", "partition level"},
        {"eps0", Kind::Real, "0.5", "thresholds are eps0 * 2^-n"}}},
      {"girsanov",
       "Numeraire change of a martingale, on a path and/or a simulated ensemble",
       {{"m", Kind::Text, "", "FILE[:COLUMN] martingale path"},
        {"i", Kind::Text, "", "FILE[:COLUMN] positive numeraire path"},
        {"level", Kind::Integer, "8", "partition level"},
        {"eps0", Kind::Real, "0.5", "thresholds for the path inputs"},
        {"paths", Kind::Integer, "0", "ensemble size (0 = no ensemble)"},
        {"ensemble-eps0", Kind::Real, "16", "log-partition base width for the ensemble"}},
       true},
      {"dubins",
       "Time change by quadratic variation and the Brownian law test",
       {{"x", Kind::Text, "", "FILE[:COLUMN] path to time-change"},
        {"level", Kind::Integer, "8", "partition level"},
        {"eps0", Kind::Real, "0.5", "thresholds are eps0 * 2^-n"},
        {"qv-steps", Kind::Integer, "64", "unit-QV steps per path"},
        {"paths", Kind::Integer, "200", "skeleton ensemble size (0 = none)"},
        {"numeraire-paths", Kind::Integer, "2000", "ensemble size for the F = 1 estimate"}},
       true},
      {"capm",
       "Relative growth, CAPM deviation and the CLT bound",
       {{"stock", Kind::Text, "", "FILE[:COLUMN] stock path"},
        {"index", Kind::Text, "", "FILE[:COLUMN] index path"},
        {"delta", Kind::Real, "0.05", "two-sided significance level"},
        {"qv-budget", Kind::Real, "0.04", "Sigma^S budget T"},
        {"level", Kind::Integer, "8", "partition level"},
        {"eps0", Kind::Real, "0.5", "log-threshold base width for the path inputs"},
        {"paths", Kind::Integer, "0", "ensemble size (0 = no ensemble)"},
        {"ensemble-eps0", Kind::Real, "16", "log-partition base width for the ensemble"}},
       true},
      {"selfcheck",
       "Run the deterministic invariant suite",
       {{"seed", Kind::Integer, "42", "generator seed"},
        {"out", Kind::Text, "", "write the JSON report here instead of stdout"}}},
  };
}

std::string json_key(std::string name) {
  for (char& c : name)
    if (c == '-') c = '_';
  return name;
}

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw CLI::FileError::Missing(file);
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ParseError(file + ":" + std::to_string(number) + ": expected key=value", 2);
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

int fail_status(pc_status s) {
  std::cerr << "pathcalc: " << pc_status_name(s) << ": " << pc_last_error() << "\n";
  return 2;
}

int write_report(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    std::cout.flush();
    return std::cout ? 0 : 2;
  }
  std::ofstream f(out, std::ios::binary);
  if (f) f << text;
  if (!f) {
    std::cerr << "pathcalc: IOError: cannot write '" << out << "'\n";
    return 2;
  }
  return 0;
}

struct Values {
  std::map<std::string, std::string> text;
  std::map<std::string, bool> flags;
};

void add_flags(CLI::App* sub, const std::vector<Flag>& flags, Values& v) {
  for (const auto& f : flags) {
    if (f.kind == Kind::Flag) {
      sub->add_flag("--" + f.name, v.flags[f.name], f.help);
      continue;
    }
    std::string& slot = v.text[f.name];
    slot = f.fallback;
    auto* opt = sub->add_option("--" + f.name, slot, f.help);
    if (!f.fallback.empty()) opt->default_str(f.fallback);
    if (f.kind == Kind::Real) opt->check(CLI::Number)->type_name("REAL");
    if (f.kind == Kind::Integer) opt->check(CLI::NonNegativeNumber)->type_name("UINT");
  }
}

nlohmann::json to_options(const std::vector<Flag>& flags, const Values& v, const std::map<std::string, bool>& given) {
  nlohmann::json o = nlohmann::json::object();
  for (const auto& f : flags) {
    if (f.kind == Kind::Flag) continue;
    const std::string& s = v.text.at(f.name);
    if (s.empty() && !given.count(f.name)) continue;
    const std::string key = json_key(f.name);
    switch (f.kind) {
      case Kind::Text: o[key] = s; break;
      case Kind::Real: o[key] = std::stod(s); break;
      case Kind::Integer: o[key] = static_cast<std::uint64_t>(std::stoull(s)); break;
      case Kind::Flag: break;
    }
  }
  return o;
}

int run_gen(const Values& v) {
  pc_model_params p;
  pc_model_params_default(&p);
  auto has = [&](const char* k) { return !v.text.at(k).empty(); };
  auto real = [&](const char* k) { return std::stod(v.text.at(k)); };
  auto integer = [&](const char* k) { return static_cast<std::uint64_t>(std::stoull(v.text.at(k))); };
  if (has("model")) {
    pc_status s = pc_model_from_name(v.text.at("model").c_str(), &p.model);
    if (s != PC_OK) return fail_status(s);
  }
  if (p.model == PC_MODEL_GBM) p.x0 = 1.0;
  if (has("horizon")) p.horizon = real("horizon");
  if (has("steps")) p.steps = integer("steps");
  p.seed = integer("seed");
  if (has("sigma")) p.sigma = real("sigma");
  if (has("x0")) p.x0 = real("x0");
  if (has("sigma-s")) p.sigma_s = real("sigma-s");
  if (has("sigma-i")) p.sigma_i = real("sigma-i");
  if (has("rho")) p.rho = real("rho");
  if (has("s0")) p.s0 = real("s0");
  if (has("i0")) p.i0 = real("i0");
  if (has("shape")) p.shape = v.text.at("shape").c_str();
  if (has("slope")) p.slope = real("slope");
  if (has("amplitude")) p.amplitude = real("amplitude");
  if (has("skeleton-level")) p.skeleton_level = static_cast<int>(integer("skeleton-level"));
  if (has("skeleton-eps0")) p.skeleton_eps0 = real("skeleton-eps0");
  if (has("columns")) p.columns = integer("columns");

  pc_frame* frame = nullptr;
  pc_status s = pc_generate(&p, integer("stream"), &frame);
  if (s != PC_OK) return fail_status(s);
  s = pc_write_csv(frame, v.text.at("out").c_str());
  pc_frame_free(frame);
  return s == PC_OK ? 0 : fail_status(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pathcalc: pathwise stochastic calculus on sampled price paths"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pc_version());

  Values gen_values;
  auto gen_flags = model_flags;
  gen_flags.push_back({"stream", Kind::Integer, "0", "member of the seeded family to emit"});
  gen_flags.push_back({"out", Kind::Text, "", "CSV file to write (required)"});
  auto* gen = app.add_subcommand("gen", "Generate a sample path file");
  add_flags(gen, gen_flags, gen_values);
  gen->get_option("--out")->required();
  std::string gen_config;
  gen->add_option("--config", gen_config, "key=value file presetting flags");

  struct Registered {
    Command cmd;
    std::vector<Flag> flags;
    CLI::App* app;
    Values values;
    bool strict = false;
    std::string config;
  };
  std::vector<Registered> registered;
  registered.reserve(16);
  for (auto& c : commands()) {
    Registered r{c, {}, nullptr, {}, false, {}};
    r.flags = c.flags;
    if (c.name != "selfcheck" && c.name != "ingest")
      r.flags.insert(r.flags.end(), common_flags.begin(), common_flags.end());
    if (c.model)
      for (const auto& f : model_flags)
        if (f.name != "seed") r.flags.push_back(f);
    if (c.model || c.name == "dubins") {
      bool has_seed = false;
      for (auto& f : r.flags) has_seed = has_seed || f.name == "seed";
      if (!has_seed) r.flags.push_back({"seed", Kind::Integer, "0", "generator seed"});
    }
    registered.push_back(std::move(r));
  }
  for (auto& r : registered) {
    r.app = app.add_subcommand(r.cmd.name, r.cmd.help);
    add_flags(r.app, r.flags, r.values);
    r.app->add_flag("--strict", r.strict, "exit 1 when the report's ok flag is false");
    r.app->add_option("--config", r.config, "key=value file presetting flags");
  }

  // Config values are applied as if given before the command-line flags,
  // so anything on the command line takes precedence.
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t k = 0; k + 1 < args.size(); ++k) {
    if (args[k] != "--config") continue;
    std::map<std::string, std::string> cfg;
    try {
      cfg = read_config(args[k + 1]);
    } catch (const CLI::Error& e) {
      std::cerr << "pathcalc: " << e.what() << "\n";
      return 2;
    }
    std::vector<std::string> injected;
    for (auto& [key, value] : cfg) {
      bool present = false;
      for (auto& a : args) present = present || a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
      if (present) continue;
      if (key == "strict") {
        if (value == "true" || value == "1") injected.push_back("--strict");
        continue;
      }
      injected.push_back("--" + key);
      injected.push_back(value);
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(k), injected.begin(), injected.end());
    break;
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (gen->parsed()) return run_gen(gen_values);

  for (auto& r : registered) {
    if (!r.app->parsed()) continue;
    std::map<std::string, bool> given;
    for (auto& f : r.flags)
      if (f.kind != Kind::Flag && r.app->count("--" + f.name) > 0) given[f.name] = true;
    nlohmann::json options;
    try {
      options = to_options(r.flags, r.values, given);
    } catch (const std::exception&) {
      std::cerr << "pathcalc: bad numeric flag value\n";
      return 2;
    }
    std::string out = options.value("out", std::string());
    options.erase("out");

    char* text = nullptr;
    int ok = 0;
    pc_status s = pc_run_analysis(r.cmd.name.c_str(), options.dump().c_str(), &text, &ok);
    if (s != PC_OK) return fail_status(s);
    int code = write_report(text, out);
    pc_string_free(text);
    if (code != 0) return code;
    return (r.strict && !ok) ? 1 : 0;
  }
  return 2;
}
