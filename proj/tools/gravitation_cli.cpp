/* Copyright 2026 The gravitation Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: kernel, stationary, simulate, sweep, inequality, figures.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage or validation error,
// 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <gravitation/gravitation.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace gravitation::cli {

enum ExitCode : int { kOk = 0, kIo = 1, kUsage = 2, kNumerical = 3 };

/// Registers options on a subcommand and remembers how to fill each one
/// from a JSON config file. Command-line values win over the file.
class Options {
public:
  explicit Options(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "JSON file with values for any of the flags below");
  }

  template <class T>
  CLI::Option* add(const std::string& flag, T& target, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + flag, target, help)->capture_default_str();
    std::string key = flag;
    std::replace(key.begin(), key.end(), '-', '_');
    entries_[key] = Entry{opt, [&target](const json& j) { target = j.get<T>(); }};
    return opt;
  }

  void alias(const std::string& key, const std::string& existing) { entries_[key] = entries_.at(existing); }

  bool given(const std::string& flag) const {
    std::string key = flag;
    std::replace(key.begin(), key.end(), '-', '_');
    const auto it = entries_.find(key);
    return (it != entries_.end() && it->second.option->count() > 0) || from_config_.contains(key);
  }

  void apply_config() {
    if (config_path_.empty()) return;
    json j;
    try {
      j = json::parse(read_text_file(config_path_));
    } catch (const json::parse_error& e) {
      throw ValidationError("config '" + config_path_ + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      const auto it = entries_.find(key);
      if (it == entries_.end()) throw ValidationError("unknown config key '" + key + "'");
      if (it->second.option->count() > 0) continue;
      try {
        it->second.assign(value);
      } catch (const json::exception& e) {
        throw ValidationError("bad config value for '" + key + "': " + e.what());
      }
      from_config_.insert(key);
    }
  }

private:
  struct Entry {
    CLI::Option* option;
    std::function<void(const json&)> assign;
  };
  CLI::App* app_;
  std::string config_path_;
  std::map<std::string, Entry> entries_;
  std::set<std::string> from_config_;
};

struct ModelFlags {
  std::int64_t n = 100;
  double temperature = 1.0;
  double payoff_short = 1.0;
  double payoff_long = 0.0;
  std::string half_rule = "half";

  void add(Options& o, bool with_temperature = true) {
    o.add("n", n, "number of producers N");
    o.alias("n_producers", "n");
    if (with_temperature) o.add("temperature", temperature, "behavior scale T (> 0)");
    o.add("payoff-short", payoff_short, "payoff on the short side");
    o.add("payoff-long", payoff_long, "payoff on the long side");
    o.add("half-rule", half_rule, "choice rule at the balanced state: half, low or high")
        ->check(CLI::IsMember({"half", "low", "high"}));
  }

  ModelParams params() const { return validate_params(ModelParams{n, temperature, payoff_short, payoff_long}); }
  HalfRule rule() const { return parse_half_rule(half_rule); }
};

void emit(const std::string& out, const std::string& content) {
  if (out == "-") {
    std::cout << content;
  } else {
    write_text_file(out, content);
  }
}

unsigned resolve_threads(int flag) { return flag > 0 ? static_cast<unsigned>(flag) : default_thread_count(); }

std::string sibling_json(const std::string& path) { return fs::path(path).replace_extension(".json").string(); }

// --- kernel ---------------------------------------------------------------

struct KernelCmd {
  ModelFlags model;
  std::string out = "-";

  void setup(CLI::App* sub, Options& o) {
    sub->description("Write the (N+1)x(N+1) transition kernel as CSV");
    model.add(o);
    o.add("out", out, "output CSV path, '-' for stdout");
  }

  int run() const {
    const auto kernel = build_kernel(model.params(), model.rule());
    std::ostringstream os;
    write_kernel_csv(os, kernel);
    emit(out, os.str());
    return kOk;
  }
};

// --- stationary -----------------------------------------------------------

struct StationaryCmd {
  ModelFlags model;
  std::string method = "analytic";
  double tol = 1e-13;
  std::int64_t max_iters = 100000;
  std::string out = "-";
  std::string summary;

  void setup(CLI::App* sub, Options& o) {
    sub->description("Solve for the stationary distribution over corn-producer counts");
    model.add(o);
    o.add("method", method, "solver: power, eigen or analytic")
        ->check(CLI::IsMember({"power", "eigen", "analytic"}));
    o.add("tol", tol, "power iteration residual tolerance");
    o.add("max-iters", max_iters, "power iteration limit");
    o.add("out", out, "output CSV path, '-' for stdout");
    o.add("summary", summary, "summary JSON path (default: next to --out)");
  }

  int run() const {
    const auto params = model.params();
    const auto m = parse_solver_method(method);
    const auto dist = solve_stationary(params, m, model.rule(), tol, max_iters);

    json s{{"n_producers", params.n_producers},
           {"temperature", params.temperature},
           {"method", method},
           {"half_rule", model.half_rule},
           {"mean_corn_fraction", stationary_mean(dist)}};
    if (params.n_producers <= kMaxKernelProducers) {
      s["residual"] = fixed_point_residual(build_kernel(params, model.rule()), dist);
    } else {
      s["residual"] = nullptr;
    }

    std::ostringstream os;
    write_distribution_csv(os, dist);
    emit(out, os.str());

    const std::string summary_path = !summary.empty() ? summary : (out == "-" ? "" : sibling_json(out));
    if (!summary_path.empty()) write_text_file(summary_path, s.dump(2) + "\n");
    (out == "-" ? std::cerr : std::cout) << s.dump() << '\n';
    return kOk;
  }
};

// --- simulate -------------------------------------------------------------

struct SimulateCmd {
  ModelFlags model;
  std::int64_t periods = 100000;
  std::int64_t burn_in = 1000;
  std::uint64_t seed = 42;
  std::int64_t initial = -1;
  std::string mode = "aggregate";
  std::string out = "trajectory.csv";
  std::string metadata;
  Options* opts = nullptr;

  void setup(CLI::App* sub, Options& o) {
    sub->description("Monte Carlo run of the producer chain; reports TV distance to the exact stationary law");
    opts = &o;
    model.add(o);
    o.add("periods", periods, "recorded periods, including the initial state");
    o.add("burn-in", burn_in, "periods discarded before histogramming (default 1000, capped below --periods)");
    o.add("seed", seed, "64-bit RNG seed");
    o.add("initial", initial, "initial corn count (default N/2)");
    o.add("mode", mode, "aggregate (binomial draw) or producers (N coin flips)")
        ->check(CLI::IsMember({"aggregate", "producers"}));
    o.add("out", out, "trajectory CSV path");
    o.add("metadata", metadata, "metadata JSON path (default: next to --out)");
  }

  int run() const {
    const auto params = model.params();
    std::int64_t burn = burn_in;
    if (!opts->given("burn-in") && periods > 0) burn = std::min<std::int64_t>(burn_in, periods - 1);
    const std::int64_t start = initial >= 0 ? initial : params.n_producers / 2;
    const auto traj = gravitation::run(params, MarketState(start, params.n_producers), periods, burn, seed,
                                       mode == "producers" ? StepMode::Producers : StepMode::Aggregate,
                                       model.rule());

    std::ostringstream os;
    write_trajectory_csv(os, traj);
    emit(out, os.str());
    const std::string meta_path = !metadata.empty() ? metadata : (out == "-" ? "" : sibling_json(out));
    if (!meta_path.empty()) write_text_file(meta_path, trajectory_metadata(traj).dump(2) + "\n");

    const auto empirical = empirical_distribution(traj);
    const auto exact = stationary_analytic(params, model.rule());
    const json report{{"tv_to_exact", tv_distance(empirical, exact)},
                      {"empirical_mean_corn_fraction", stationary_mean(empirical)},
                      {"exact_mean_corn_fraction", stationary_mean(exact)},
                      {"periods", periods},
                      {"burn_in", burn},
                      {"seed", seed}};
    (out == "-" ? std::cerr : std::cout) << report.dump() << '\n';
    return kOk;
  }
};

// --- sweep ----------------------------------------------------------------

struct SweepCmd {
  ModelFlags model;
  std::vector<double> temperatures;
  double t_min = 0.05;
  double t_max = 20.0;
  std::size_t t_count = 40;
  std::vector<std::string> outputs{"stationary", "mean", "choice", "gini"};
  std::string method = "analytic";
  std::string out_dir = "sweep";
  int threads = 0;

  void setup(CLI::App* sub, Options& o) {
    sub->description("Exact parameter sweep over T with CSV outputs and a hashed manifest");
    model.add(o, false);
    o.add("temperatures", temperatures, "explicit strictly increasing T grid")->delimiter(',');
    o.add("t-min", t_min, "log-spaced grid start (when --temperatures is absent)");
    o.add("t-max", t_max, "log-spaced grid end");
    o.add("t-count", t_count, "log-spaced grid size");
    o.add("outputs", outputs, "any of stationary, mean, choice, gini")->delimiter(',');
    o.add("method", method, "solver: power, eigen or analytic")
        ->check(CLI::IsMember({"power", "eigen", "analytic"}));
    o.add("out-dir", out_dir, "output directory");
    o.add("threads", threads, "worker threads (default: GRAVITATION_THREADS or core count)");
  }

  int run() const {
    SweepSpec spec;
    spec.n_producers = model.n;
    spec.temperatures = temperatures.empty() ? log_spaced(t_min, t_max, t_count) : temperatures;
    for (const auto& s : outputs) spec.outputs.insert(parse_output_kind(s));
    spec.method = parse_solver_method(method);
    spec.output_dir = out_dir;
    spec.half_rule = model.rule();
    spec.payoff_short = model.payoff_short;
    spec.payoff_long = model.payoff_long;
    spec.threads = resolve_threads(threads);
    const auto m = sweep(spec);
    std::cout << "wrote " << m.artifacts.size() << " artifacts to " << out_dir << '/' << kManifestName << '\n';
    for (const auto& f : m.failures) std::cerr << "cell T=" << format_double(f.temperature) << " failed: " << f.message << '\n';
    return m.failures.empty() ? kOk : kNumerical;
  }
};

// --- inequality -----------------------------------------------------------

struct InequalityCmd {
  ModelFlags model;
  std::string method = "analytic";
  std::string out = "-";
  std::string lorenz_out;

  void setup(CLI::App* sub, Options& o) {
    sub->description("Lorenz curve and Gini coefficient of single-period income under the stationary law");
    model.add(o);
    o.add("method", method, "solver: power, eigen or analytic")
        ->check(CLI::IsMember({"power", "eigen", "analytic"}));
    o.add("out", out, "summary JSON path, '-' for stdout");
    o.add("lorenz-out", lorenz_out, "Lorenz curve CSV path");
  }

  int run() const {
    const auto params = model.params();
    const auto dist = solve_stationary(params, parse_solver_method(method), model.rule());
    const auto law = income_distribution(params, dist);
    const auto lg = lorenz_gini(law);
    emit(out, inequality_summary(law.p_win, lg).dump(2) + "\n");
    if (!lorenz_out.empty() && lg) {
      std::ostringstream os;
      write_lorenz_csv(os, *lg);
      write_text_file(lorenz_out, os.str());
    }
    return kOk;
  }
};

// --- figures --------------------------------------------------------------

struct FiguresCmd {
  std::string out_dir = "figures";
  int threads = 0;

  void setup(CLI::App* sub, Options& o) {
    sub->description("Staffing curve, ergodic distributions and Lorenz curve as SVG + CSV");
    o.add("out-dir", out_dir, "output directory");
    o.add("threads", threads, "worker threads (default: GRAVITATION_THREADS or core count)");
  }

  int run() const {
    FigureConfig cfg;
    cfg.threads = resolve_threads(threads);
    const auto m = reproduce_figures(out_dir, cfg);
    std::cout << "wrote " << m.artifacts.size() << " artifacts to " << out_dir << '/' << kManifestName << '\n';
    return m.failures.empty() ? kOk : kNumerical;
  }
};

int main(int argc, char** argv) {
  CLI::App app{"Statistical-equilibrium model of producers migrating between two lines of production"};
  app.require_subcommand(1);

  KernelCmd kernel;
  StationaryCmd stationary;
  SimulateCmd simulate;
  SweepCmd sweep_cmd;
  InequalityCmd inequality;
  FiguresCmd figures;

  std::vector<std::pair<CLI::App*, std::function<int()>>> commands;
  std::vector<std::unique_ptr<Options>> options;
  auto add = [&](const char* name, auto& cmd) {
    CLI::App* sub = app.add_subcommand(name);
    options.push_back(std::make_unique<Options>(sub));
    cmd.setup(sub, *options.back());
    Options* o = options.back().get();
    commands.emplace_back(sub, [o, &cmd] {
      o->apply_config();
      return cmd.run();
    });
  };
  add("kernel", kernel);
  add("stationary", stationary);
  add("simulate", simulate);
  add("sweep", sweep_cmd);
  add("inequality", inequality);
  add("figures", figures);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (auto& [sub, fn] : commands) {
      if (sub->parsed()) return fn();
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}

}  // namespace gravitation::cli

int main(int argc, char** argv) { return gravitation::cli::main(argc, argv); }
