#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <random>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qna/market.hpp"
#include "qna/probability_map.hpp"
#include "qna/random.hpp"
#include "qna/statistics.hpp"

namespace qna::run {

using json = nlohmann::ordered_json;

enum class Mode { kSimulate, kProbMap, kSweep };
enum class Format { kCsv, kJson };
enum class MapVariant { kSigned, kLiteral };

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct RunSpec {
  Mode mode = Mode::kSimulate;
  MarketConfig market;
  std::vector<SweepAxis> sweep;
  std::filesystem::path output_path;
  Format format = Format::kCsv;
  MapVariant variant = MapVariant::kSigned;
  int replicates = 1;
  int threads = 1;
};

inline bool is_sweep_parameter(std::string_view name) {
  return name == "v0" || name == "sin2phi" || name == "n_components" || name == "noise_beta";
}

inline void validate(const RunSpec& spec) {
  spec.market.validate();
  if (spec.output_path.empty()) throw std::invalid_argument("an output path is required");
  if (spec.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (spec.threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (spec.mode == Mode::kSweep && spec.sweep.empty()) {
    throw std::invalid_argument("sweep mode needs at least one --sweep axis");
  }
  if (spec.mode != Mode::kSweep && !spec.sweep.empty()) {
    throw std::invalid_argument("--sweep is only valid in sweep mode");
  }
  for (const auto& axis : spec.sweep) {
    if (!is_sweep_parameter(axis.name)) throw std::invalid_argument("unknown sweep parameter '" + axis.name + "'");
    if (axis.values.empty()) throw std::invalid_argument("sweep axis '" + axis.name + "' has no values");
    if (std::count_if(spec.sweep.begin(), spec.sweep.end(), [&](const SweepAxis& a) { return a.name == axis.name; }) >
        1) {
      throw std::invalid_argument("sweep parameter '" + axis.name + "' given twice");
    }
  }
}

inline double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return value;
}

/// Parses "name=v1,v2,...".
inline SweepAxis parse_sweep_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw std::invalid_argument("sweep axis must look like name=v1,v2,...: '" + std::string(text) + "'");
  }
  SweepAxis axis;
  axis.name = std::string(text.substr(0, eq));
  std::string_view rest = text.substr(eq + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    axis.values.push_back(parse_double(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
    if (rest.empty()) throw std::invalid_argument("trailing comma in sweep axis '" + axis.name + "'");
  }
  if (!is_sweep_parameter(axis.name)) throw std::invalid_argument("unknown sweep parameter '" + axis.name + "'");
  if (axis.values.empty()) throw std::invalid_argument("sweep axis '" + axis.name + "' has no values");
  return axis;
}

inline void apply_parameter(MarketConfig& cfg, std::string_view name, double value) {
  if (name == "v0") {
    cfg.v0 = value;
  } else if (name == "sin2phi") {
    cfg.sin2phi = value;
  } else if (name == "n_components") {
    if (value != std::floor(value)) throw std::invalid_argument("n_components must be an integer");
    cfg.n_components = static_cast<int>(value);
  } else if (name == "noise_beta") {
    cfg.noise_beta = value;
  } else {
    throw std::invalid_argument("unknown sweep parameter '" + std::string(name) + "'");
  }
}

/// 17 significant digits, so re-reading a value yields the same double.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::logic_error("format_double: buffer too small");
  return std::string(buf, ptr);
}

/// Shortest representation that parses back to the same double.
inline std::string format_shortest(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::logic_error("format_shortest: buffer too small");
  return std::string(buf, ptr);
}

inline json config_json(const MarketConfig& cfg) {
  json j;
  j["components"] = cfg.n_components;
  j["sin2phi"] = cfg.sin2phi;
  j["v0"] = cfg.v0;
  j["lambda"] = cfg.lambda;
  j["steps"] = cfg.steps;
  j["transient"] = cfg.transient;
  j["seed"] = cfg.seed;
  j["beta"] = cfg.noise_beta ? json(*cfg.noise_beta) : json(nullptr);
  return j;
}

inline json summary_json(const stats::SeriesSummary& s) {
  json j;
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["skewness"] = s.skewness;
  j["fisher_kurtosis"] = s.fisher_kurtosis;
  j["jb_statistic"] = s.jb_statistic;
  j["jb_p_value"] = s.jb_p_value;
  return j;
}

inline stats::SeriesSummary summary_from_json(const json& j) {
  stats::SeriesSummary s;
  s.n = j.at("n").get<std::size_t>();
  s.mean = j.at("mean").get<double>();
  s.variance = j.at("variance").get<double>();
  s.skewness = j.at("skewness").get<double>();
  s.fisher_kurtosis = j.at("fisher_kurtosis").get<double>();
  s.jb_statistic = j.at("jb_statistic").get<double>();
  s.jb_p_value = j.at("jb_p_value").get<double>();
  return s;
}

// ---------------------------------------------------------------- simulate

/// Rows carry the absolute round number, starting after the transient.
inline void write_series_csv(std::ostream& os, const ReturnsSeries& series, int first_round) {
  os << "round,return,log_price\n";
  for (std::size_t i = 0; i < series.returns.size(); ++i) {
    os << first_round + static_cast<int>(i) << ',' << format_double(series.returns[i]) << ','
       << format_double(series.log_prices[i]) << '\n';
  }
}

inline ReturnsSeries read_series_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "round,return,log_price") {
    throw std::invalid_argument("series CSV: missing or unexpected header");
  }
  ReturnsSeries series;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw std::invalid_argument("series CSV: bad row");
    const std::string_view view(line);
    series.returns.push_back(parse_double(view.substr(c1 + 1, c2 - c1 - 1)));
    series.log_prices.push_back(parse_double(view.substr(c2 + 1)));
  }
  series.rounds = static_cast<int>(series.returns.size());
  return series;
}

// ----------------------------------------------------------------- probmap

struct ProbMapRun {
  std::vector<ProbMapState> trajectory;  // index 0 is the initial state
  double max_deviation = 0.0;            // against the quantum trajectory
  std::optional<int> first_divergence;   // first step exceeding 1e-10
  std::optional<int> first_sign_flip;    // first step with a negative Re ψ or Im ψ
  double max_normalization_drift = 0.0;
};

/// Iterates the chosen map from a Haar-random product state alongside the
/// quantum evolution and records the deviation between the two.
inline ProbMapRun run_probmap(const MarketConfig& cfg, MapVariant variant) {
  cfg.validate();
  auto init_engine = derive_stream(cfg.seed, StreamPurpose::kProbMap, 0, 0);
  NetworkState quantum = random_product_state(init_engine);

  ProbMapRun out;
  SignedMapState signed_state = signed_from_quantum(quantum);
  ProbMapState literal_state = from_quantum(quantum);
  out.trajectory.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  out.trajectory.push_back(literal_state);
  if (!signed_state.all_nonnegative()) out.first_sign_flip = 0;

  const double fixed_phi = phi_from_sin2(cfg.sin2phi);
  for (int t = 1; t <= cfg.steps; ++t) {
    double phi = fixed_phi;
    double z = 0.0;
    if (cfg.noise_beta) {
      auto engine = derive_stream(cfg.seed, StreamPurpose::kProbMap, 1, static_cast<std::uint64_t>(t));
      std::normal_distribution<double> normal;
      z = normal(engine);
      phi = sample_phi(*cfg.noise_beta, z);
    }
    quantum = step_net(quantum, std::sin(phi), std::cos(phi));

    ProbMapState current;
    if (variant == MapVariant::kSigned) {
      signed_state = step_signed(signed_state, phi);
      current = signed_state.squared();
    } else {
      literal_state = cfg.noise_beta ? step_map_noisy(literal_state, *cfg.noise_beta, z) : step_map(literal_state, phi);
      current = literal_state;
    }
    if (!out.first_sign_flip && !signed_from_quantum(quantum).all_nonnegative()) out.first_sign_flip = t;

    const ProbMapState reference = from_quantum(quantum);
    double deviation = 0.0;
    for (std::size_t s = 0; s < 8; ++s) {
      deviation = std::max({deviation, std::abs(current.A[s] - reference.A[s]), std::abs(current.B[s] - reference.B[s])});
    }
    out.max_deviation = std::max(out.max_deviation, deviation);
    if (!out.first_divergence && deviation > 1e-10) out.first_divergence = t;
    out.max_normalization_drift = std::max(out.max_normalization_drift, std::abs(current.total() - 1.0));
    out.trajectory.push_back(current);
  }
  return out;
}

inline const char* basis_label(std::size_t s) {
  static constexpr const char* kLabels[8] = {"000", "001", "010", "011", "100", "101", "110", "111"};
  return kLabels[s];
}

inline void write_probmap_csv(std::ostream& os, const ProbMapRun& run, int first_round) {
  os << "round";
  for (std::size_t s = 0; s < 8; ++s) os << ",A_" << basis_label(s);
  for (std::size_t s = 0; s < 8; ++s) os << ",B_" << basis_label(s);
  os << '\n';
  for (std::size_t t = static_cast<std::size_t>(first_round); t < run.trajectory.size(); ++t) {
    os << t;
    for (double a : run.trajectory[t].A) os << ',' << format_double(a);
    for (double b : run.trajectory[t].B) os << ',' << format_double(b);
    os << '\n';
  }
}

inline json probmap_json(const ProbMapRun& run, MapVariant variant) {
  json j;
  j["variant"] = variant == MapVariant::kSigned ? "signed" : "literal";
  j["max_deviation_vs_quantum"] = run.max_deviation;
  j["first_divergence_round"] = run.first_divergence ? json(*run.first_divergence) : json(nullptr);
  j["first_sign_flip_round"] = run.first_sign_flip ? json(*run.first_sign_flip) : json(nullptr);
  j["max_normalization_drift"] = run.max_normalization_drift;
  return j;
}

// ------------------------------------------------------------------- sweep

struct SweepCell {
  std::vector<double> parameters;  // one value per axis, in axis order
  int replicate = 0;
  MarketConfig config;
};

struct SweepRow {
  SweepCell cell;
  stats::SeriesSummary summary;
};

/// Cartesian product of the axes (first axis outermost), replicates innermost.
/// Replicate r runs with seed + r.
inline std::vector<SweepCell> expand_grid(const RunSpec& spec) {
  std::vector<SweepCell> cells{SweepCell{{}, 0, spec.market}};
  for (const auto& axis : spec.sweep) {
    std::vector<SweepCell> next;
    next.reserve(cells.size() * axis.values.size());
    for (const auto& cell : cells) {
      for (double v : axis.values) {
        SweepCell c = cell;
        c.parameters.push_back(v);
        apply_parameter(c.config, axis.name, v);
        next.push_back(std::move(c));
      }
    }
    cells = std::move(next);
  }
  std::vector<SweepCell> out;
  out.reserve(cells.size() * static_cast<std::size_t>(spec.replicates));
  for (const auto& cell : cells) {
    for (int r = 0; r < spec.replicates; ++r) {
      SweepCell c = cell;
      c.replicate = r;
      c.config.seed = spec.market.seed + static_cast<std::uint64_t>(r);
      c.config.validate();
      out.push_back(std::move(c));
    }
  }
  return out;
}

/// Runs `count` independent jobs on up to `threads` workers. Results are
/// written by index, so the output does not depend on scheduling.
template <class Job>
void parallel_for(std::size_t count, int threads, Job&& job) {
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
          try {
            job(i);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

inline std::vector<SweepRow> run_sweep(const RunSpec& spec) {
  const std::vector<SweepCell> cells = expand_grid(spec);
  std::vector<SweepRow> rows(cells.size());
  parallel_for(cells.size(), spec.threads, [&](std::size_t i) {
    const ReturnsSeries series = simulate(cells[i].config);
    rows[i] = SweepRow{cells[i], stats::summarize(series.returns)};
  });
  return rows;
}

inline void write_sweep_csv(std::ostream& os, const RunSpec& spec, const std::vector<SweepRow>& rows) {
  for (const auto& axis : spec.sweep) os << axis.name << ',';
  os << "replicate,seed,n,mean,variance,skewness,fisher_kurtosis,jb_statistic,jb_p_value\n";
  for (const auto& row : rows) {
    for (double p : row.cell.parameters) os << format_shortest(p) << ',';
    const auto& s = row.summary;
    os << row.cell.replicate << ',' << row.cell.config.seed << ',' << s.n << ',' << format_double(s.mean) << ','
       << format_double(s.variance) << ',' << format_double(s.skewness) << ',' << format_double(s.fisher_kurtosis)
       << ',' << format_double(s.jb_statistic) << ',' << format_double(s.jb_p_value) << '\n';
  }
}

inline json sweep_json(const RunSpec& spec, const std::vector<SweepRow>& rows) {
  json j;
  j["config"] = config_json(spec.market);
  json axes = json::array();
  for (const auto& axis : spec.sweep) axes.push_back({{"name", axis.name}, {"values", axis.values}});
  j["axes"] = std::move(axes);
  json out_rows = json::array();
  for (const auto& row : rows) {
    json r;
    for (std::size_t a = 0; a < spec.sweep.size(); ++a) r[spec.sweep[a].name] = row.cell.parameters[a];
    r["replicate"] = row.cell.replicate;
    r["seed"] = row.cell.config.seed;
    r["summary"] = summary_json(row.summary);
    out_rows.push_back(std::move(r));
  }
  j["rows"] = std::move(out_rows);
  return j;
}

// -------------------------------------------------------------------- run

/// Sidecar path for the JSON summary written next to a CSV output.
inline std::filesystem::path summary_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  return p.replace_extension(".summary.json");
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  writer(os);
  os.flush();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  write_file(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

inline void run_simulate(const RunSpec& spec) {
  const MarketConfig& cfg = spec.market;
  const ReturnsSeries series = simulate(cfg);
  const stats::SeriesSummary summary = stats::summarize(series.returns);
  const int first_round = cfg.transient + 1;
  if (spec.format == Format::kCsv) {
    write_file(spec.output_path, [&](std::ostream& os) { write_series_csv(os, series, first_round); });
    json j;
    j["config"] = config_json(cfg);
    j["summary"] = summary_json(summary);
    write_json_file(summary_path(spec.output_path), j);
  } else {
    json j;
    j["config"] = config_json(cfg);
    j["summary"] = summary_json(summary);
    json rounds = json::array();
    for (std::size_t i = 0; i < series.returns.size(); ++i) rounds.push_back(first_round + static_cast<int>(i));
    j["series"] = {{"round", std::move(rounds)}, {"return", series.returns}, {"log_price", series.log_prices}};
    write_json_file(spec.output_path, j);
  }
}

inline void run_probmap_mode(const RunSpec& spec) {
  const MarketConfig& cfg = spec.market;
  const ProbMapRun result = run_probmap(cfg, spec.variant);
  json j;
  j["config"] = config_json(cfg);
  j["probmap"] = probmap_json(result, spec.variant);
  if (spec.format == Format::kCsv) {
    write_file(spec.output_path, [&](std::ostream& os) { write_probmap_csv(os, result, cfg.transient + 1); });
    write_json_file(summary_path(spec.output_path), j);
  } else {
    json traj = json::array();
    for (std::size_t t = static_cast<std::size_t>(cfg.transient) + 1; t < result.trajectory.size(); ++t) {
      traj.push_back({{"round", t}, {"A", result.trajectory[t].A}, {"B", result.trajectory[t].B}});
    }
    j["trajectory"] = std::move(traj);
    write_json_file(spec.output_path, j);
  }
}

inline void run_sweep_mode(const RunSpec& spec) {
  const std::vector<SweepRow> rows = run_sweep(spec);
  if (spec.format == Format::kCsv) {
    write_file(spec.output_path, [&](std::ostream& os) { write_sweep_csv(os, spec, rows); });
  } else {
    write_json_file(spec.output_path, sweep_json(spec, rows));
  }
}

/// Executes a run and maps failures onto exit codes: invalid configuration is
/// a usage error, anything raised while computing or writing is a runtime error.
inline int run(const RunSpec& spec, std::ostream& err) {
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    switch (spec.mode) {
      case Mode::kSimulate:
        run_simulate(spec);
        break;
      case Mode::kProbMap:
        run_probmap_mode(spec);
        break;
      case Mode::kSweep:
        run_sweep_mode(spec);
        break;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace qna::run
