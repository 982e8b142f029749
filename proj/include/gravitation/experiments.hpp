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

#ifndef GRAVITATION_EXPERIMENTS_HPP
#define GRAVITATION_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "choice.hpp"
#include "core.hpp"
#include "format.hpp"
#include "inequality.hpp"
#include "sha256.hpp"
#include "stationary.hpp"
#include "svg.hpp"

namespace gravitation {

enum class OutputKind { Stationary, Mean, ChoiceFrequencies, Gini };

inline std::string_view to_string(OutputKind k) {
  switch (k) {
    case OutputKind::Stationary: return "stationary";
    case OutputKind::Mean: return "mean";
    case OutputKind::ChoiceFrequencies: return "choice";
    case OutputKind::Gini: return "gini";
  }
  return "?";
}

inline OutputKind parse_output_kind(std::string_view s) {
  if (s == "stationary") return OutputKind::Stationary;
  if (s == "mean") return OutputKind::Mean;
  if (s == "choice" || s == "choice_frequencies") return OutputKind::ChoiceFrequencies;
  if (s == "gini") return OutputKind::Gini;
  throw ValidationError("unknown output kind '" + std::string(s) + "' (stationary, mean, choice, gini)");
}

struct SweepSpec {
  std::int64_t n_producers = 100;
  std::vector<double> temperatures;
  std::set<OutputKind> outputs;
  SolverMethod method = SolverMethod::Analytic;
  std::filesystem::path output_dir;
  HalfRule half_rule = HalfRule::Half;
  double payoff_short = 1.0;
  double payoff_long = 0.0;
  /// 0 means "use default_thread_count()".
  unsigned threads = 0;

  ModelParams params_at(double temperature) const {
    return ModelParams{n_producers, temperature, payoff_short, payoff_long};
  }
};

inline void validate_spec(const SweepSpec& spec) {
  if (spec.temperatures.empty()) throw ValidationError("sweep needs at least one temperature");
  for (std::size_t i = 0; i < spec.temperatures.size(); ++i) {
    const double t = spec.temperatures[i];
    if (!std::isfinite(t) || !(t > 0.0)) throw ValidationError("temperature must be positive");
    if (i > 0 && !(t > spec.temperatures[i - 1])) {
      throw ValidationError("temperatures must be strictly increasing");
    }
  }
  if (spec.outputs.empty()) throw ValidationError("sweep needs at least one output kind");
  validate_params(spec.params_at(spec.temperatures.front()));
}

/// `count` points from lo to hi, equally spaced in log T; endpoints exact.
inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw ValidationError("bad log-spaced grid");
  std::vector<double> t(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    t[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  t.front() = lo;
  t.back() = hi;
  return t;
}

/// GRAVITATION_THREADS if set and positive, else hardware concurrency.
inline unsigned default_thread_count() {
  if (const char* env = std::getenv("GRAVITATION_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct Artifact {
  std::string path;  // relative to the manifest's directory
  std::string kind;
  std::string sha256;
};

struct CellFailure {
  double temperature;
  std::string message;
};

struct Manifest {
  nlohmann::json spec;
  std::vector<Artifact> artifacts;
  std::vector<CellFailure> failures;

  nlohmann::json to_json() const {
    nlohmann::json arts = nlohmann::json::array();
    for (const auto& a : artifacts) arts.push_back({{"path", a.path}, {"kind", a.kind}, {"sha256", a.sha256}});
    nlohmann::json fails = nlohmann::json::array();
    for (const auto& f : failures) fails.push_back({{"temperature", f.temperature}, {"error", f.message}});
    return {{"spec", spec}, {"artifacts", arts}, {"failures", fails}};
  }
};

inline constexpr const char* kManifestName = "manifest.json";

namespace detail {

struct CellResult {
  double temperature = 0.0;
  std::optional<StateDistribution> stationary;
  double mean = 0.0;
  double f_short = 0.0;
  double f_long = 0.0;
  double p_win = 0.0;
  std::optional<double> gini;
  std::string error;
  bool io_failure = false;
};

// Runs fn(i) for i in [0, count) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

class ArtifactWriter {
public:
  explicit ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {}

  Artifact write(const std::string& relative, const std::string& kind, const std::string& content) const {
    const auto full = root_ / relative;
    if (full.has_parent_path()) ensure_directory(full.parent_path());
    write_text_file(full, content);
    return Artifact{relative, kind, sha256_hex(content)};
  }

  const std::filesystem::path& root() const { return root_; }

private:
  std::filesystem::path root_;
};

inline nlohmann::json spec_json(const SweepSpec& spec) {
  nlohmann::json outs = nlohmann::json::array();
  for (auto k : spec.outputs) outs.push_back(std::string(to_string(k)));
  return {{"n_producers", spec.n_producers},
          {"temperatures", spec.temperatures},
          {"outputs", outs},
          {"method", std::string(to_string(spec.method))},
          {"half_rule", std::string(to_string(spec.half_rule))},
          {"payoff_short", spec.payoff_short},
          {"payoff_long", spec.payoff_long}};
}

// Computes every cell and writes per-cell and aggregate CSVs under
// writer.root()/prefix. Cell failures are collected, not thrown.
inline std::vector<CellResult> run_cells(const SweepSpec& spec, const ArtifactWriter& writer,
                                         const std::string& prefix, std::vector<Artifact>& artifacts,
                                         std::vector<CellFailure>& failures) {
  validate_spec(spec);
  const bool need_stationary = spec.outputs.contains(OutputKind::Stationary) ||
                               spec.outputs.contains(OutputKind::Mean) ||
                               spec.outputs.contains(OutputKind::Gini);
  const std::size_t n = spec.temperatures.size();
  std::vector<CellResult> cells(n);
  std::vector<std::optional<Artifact>> cell_files(n);

  parallel_for(n, spec.threads ? spec.threads : default_thread_count(), [&](std::size_t i) {
    CellResult& c = cells[i];
    c.temperature = spec.temperatures[i];
    try {
      const ModelParams params = spec.params_at(c.temperature);
      c.f_short = logit_response(params.payoff_short, params.payoff_long, c.temperature);
      c.f_long = logit_response(params.payoff_long, params.payoff_short, c.temperature);
      if (need_stationary) {
        c.stationary = solve_stationary(params, spec.method, spec.half_rule);
        c.mean = stationary_mean(*c.stationary);
        const IncomeLaw law = income_distribution(params, *c.stationary);
        c.p_win = law.p_win;
        if (auto lg = lorenz_gini(law)) c.gini = lg->gini;
      }
      if (spec.outputs.contains(OutputKind::Stationary)) {
        char name[64];
        std::snprintf(name, sizeof name, "stationary_%03zu_T%s.csv", i, format_short(c.temperature).c_str());
        std::ostringstream os;
        write_distribution_csv(os, *c.stationary);
        cell_files[i] = writer.write(prefix + name, "stationary", os.str());
      }
    } catch (const IoError& e) {
      c.error = e.what();
      c.io_failure = true;
    } catch (const Error& e) {
      c.error = e.what();
    }
  });

  for (const auto& c : cells) {
    if (c.io_failure) throw IoError(c.error);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!cells[i].error.empty()) failures.push_back({cells[i].temperature, cells[i].error});
    if (cell_files[i]) artifacts.push_back(*cell_files[i]);
  }

  auto aggregate = [&](OutputKind kind, const std::string& file, const std::string& header, auto&& row) {
    if (!spec.outputs.contains(kind)) return;
    std::ostringstream os;
    os << header << '\n';
    for (const auto& c : cells) {
      if (c.error.empty()) os << format_double(c.temperature) << ',' << row(c) << '\n';
    }
    artifacts.push_back(writer.write(prefix + file, std::string(to_string(kind)), os.str()));
  };
  aggregate(OutputKind::Mean, "mean.csv", "temperature,mean_corn_fraction",
            [](const CellResult& c) { return format_double(c.mean); });
  aggregate(OutputKind::ChoiceFrequencies, "choice_frequencies.csv",
            "temperature,f_corn_shortside,f_corn_longside",
            [](const CellResult& c) { return format_double(c.f_short) + ',' + format_double(c.f_long); });
  aggregate(OutputKind::Gini, "gini.csv", "temperature,p_win,gini", [](const CellResult& c) {
    return format_double(c.p_win) + ',' + (c.gini ? format_double(*c.gini) : std::string("undefined"));
  });
  return cells;
}

inline void write_manifest(const ArtifactWriter& writer, const Manifest& m) {
  write_text_file(writer.root() / kManifestName, m.to_json().dump(2) + "\n");
}

}  // namespace detail

/// Computes the requested outputs for every temperature with an exact solver
/// and writes CSVs plus manifest.json into spec.output_dir.
inline Manifest sweep(const SweepSpec& spec) {
  validate_spec(spec);
  ensure_directory(spec.output_dir);
  const detail::ArtifactWriter writer(spec.output_dir);
  Manifest m;
  m.spec = detail::spec_json(spec);
  detail::run_cells(spec, writer, "", m.artifacts, m.failures);
  detail::write_manifest(writer, m);
  return m;
}

/// Default grids for the three figure pipelines.
struct FigureConfig {
  std::int64_t n_producers = 100;
  std::vector<double> ergodic_temperatures{0.05, 0.1, 0.25, 0.5, 1, 2, 5, 10};
  std::vector<double> staffing_temperatures = log_spaced(0.05, 20.0, 60);
  double lorenz_temperature = 10.0;
  unsigned threads = 0;
};

/// Writes the staffing-vs-T chart, the ergodic small multiples and the
/// Lorenz curve (SVG + CSV each) and a single manifest.json.
inline Manifest reproduce_figures(const std::filesystem::path& output_dir, const FigureConfig& cfg = {}) {
  ensure_directory(output_dir);
  const detail::ArtifactWriter writer(output_dir);
  Manifest m;

  SweepSpec staffing{cfg.n_producers, cfg.staffing_temperatures,
                     {OutputKind::Mean, OutputKind::ChoiceFrequencies, OutputKind::Gini},
                     SolverMethod::Analytic, output_dir};
  staffing.threads = cfg.threads;
  SweepSpec ergodic{cfg.n_producers, cfg.ergodic_temperatures, {OutputKind::Stationary},
                    SolverMethod::Analytic, output_dir};
  ergodic.threads = cfg.threads;

  m.spec = {{"staffing", detail::spec_json(staffing)},
            {"ergodic", detail::spec_json(ergodic)},
            {"lorenz", {{"n_producers", cfg.n_producers}, {"temperature", cfg.lorenz_temperature}}}};

  // Staffing curve: choice frequencies and mean corn fraction against T.
  const auto s_cells = detail::run_cells(staffing, writer, "staffing/", m.artifacts, m.failures);
  {
    svg::Series f_short{"corn share, corn short side", {}, {}, "#d62728"};
    svg::Series f_long{"corn share, sugar short side", {}, {}, "#1f77b4"};
    svg::Series mean{"mean corn fraction", {}, {}, "black", true};
    for (const auto& c : s_cells) {
      if (!c.error.empty()) continue;
      f_short.x.push_back(c.temperature);
      f_short.y.push_back(c.f_short);
      f_long.x.push_back(c.temperature);
      f_long.y.push_back(c.f_long);
      mean.x.push_back(c.temperature);
      mean.y.push_back(c.mean);
    }
    m.artifacts.push_back(writer.write(
        "staffing.svg", "svg",
        svg::line_chart("Corn choice frequency vs behavior scale (N = " + std::to_string(cfg.n_producers) + ")",
                        {f_short, f_long, mean}, "T", "frequency", true, 0.0, 1.0)));
  }

  // Ergodic distributions across T.
  const auto e_cells = detail::run_cells(ergodic, writer, "ergodic/", m.artifacts, m.failures);
  {
    std::vector<svg::BarPanel> panels;
    for (const auto& c : e_cells) {
      if (!c.stationary) continue;
      const auto p = c.stationary->probabilities();
      panels.push_back({"T = " + format_short(c.temperature), std::vector<double>(p.begin(), p.end())});
    }
    if (!panels.empty()) {
      m.artifacts.push_back(writer.write("ergodic.svg", "svg",
                                         svg::bar_panels("Ergodic distribution of corn producers", panels, 4,
                                                         "corn producers")));
    }
  }

  // Lorenz curve at the pinned temperature.
  try {
    const ModelParams params{cfg.n_producers, cfg.lorenz_temperature, 1.0, 0.0};
    const auto law = income_distribution(params, stationary_analytic(params));
    const auto lg = lorenz_gini(law);
    m.artifacts.push_back(writer.write("lorenz/summary.json", "gini_summary",
                                       inequality_summary(law.p_win, lg).dump(2) + "\n"));
    if (lg) {
      std::ostringstream os;
      write_lorenz_csv(os, *lg);
      m.artifacts.push_back(writer.write("lorenz/lorenz.csv", "lorenz", os.str()));
      svg::Series curve{"Lorenz curve", {}, {}, "#1f77b4"};
      for (const auto& p : lg->lorenz_points) {
        curve.x.push_back(p.cumulative_population);
        curve.y.push_back(p.cumulative_income);
      }
      const svg::Series diagonal{"equality", {0.0, 1.0}, {0.0, 1.0}, "#d62728"};
      char title[96];
      std::snprintf(title, sizeof title, "Lorenz curve, N = %lld, T = %s, Gini = %.4f",
                    static_cast<long long>(cfg.n_producers), format_short(cfg.lorenz_temperature).c_str(),
                    lg->gini);
      m.artifacts.push_back(writer.write("lorenz.svg", "svg",
                                         svg::line_chart(title, {curve, diagonal}, "cumulative population",
                                                         "cumulative income", false, 0.0, 1.0)));
    }
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    m.failures.push_back({cfg.lorenz_temperature, e.what()});
  }

  detail::write_manifest(writer, m);
  return m;
}

/// Problems found re-hashing the files a manifest lists: missing files, hash
/// mismatches, and files in the directory the manifest does not list.
inline std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const auto j = nlohmann::json::parse(read_text_file(dir / kManifestName));
  std::vector<std::string> problems;
  std::set<std::string> listed;
  for (const auto& a : j.at("artifacts")) {
    const auto rel = a.at("path").get<std::string>();
    listed.insert(rel);
    if (!fs::exists(dir / rel)) {
      problems.push_back("missing: " + rel);
      continue;
    }
    if (sha256_hex(read_text_file(dir / rel)) != a.at("sha256").get<std::string>()) {
      problems.push_back("hash mismatch: " + rel);
    }
  }
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir).generic_string();
    if (rel != kManifestName && !listed.contains(rel)) problems.push_back("unlisted: " + rel);
  }
  return problems;
}

}  // namespace gravitation

#endif  // GRAVITATION_EXPERIMENTS_HPP
