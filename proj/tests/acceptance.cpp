// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "paper_tables.hpp"
#include "qna/qna.hpp"
#include "qna/run.hpp"

namespace {

using namespace qna;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

struct Verdict {
  bool pass = true;
  std::string detail;
};

int hardware_threads() { return static_cast<int>(std::max(1U, std::thread::hardware_concurrency())); }

NetworkState random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  NetworkState s;
  double norm = 0.0;
  for (auto& a : s.amplitudes) {
    a = Complex{normal(rng), normal(rng)};
    norm += std::norm(a);
  }
  for (auto& a : s.amplitudes) a /= std::sqrt(norm);
  return s;
}

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

/// Returns series of one simulation with the table protocol: 5100 rounds,
/// first 100 dropped, λ = 1000.
MarketConfig table_config(double v0, double sin2phi, int components, std::uint64_t seed) {
  MarketConfig cfg;
  cfg.v0 = v0;
  cfg.sin2phi = sin2phi;
  cfg.n_components = components;
  cfg.lambda = 1000.0;
  cfg.steps = 5100;
  cfg.transient = 100;
  cfg.seed = seed;
  return cfg;
}

std::vector<stats::SeriesSummary> summaries_over_seeds(const std::vector<MarketConfig>& cfgs) {
  std::vector<stats::SeriesSummary> out(cfgs.size());
  run::parallel_for(cfgs.size(), hardware_threads(),
                    [&](std::size_t i) { out[i] = stats::summarize(simulate(cfgs[i]).returns); });
  return out;
}

constexpr int kSeeds = 10;

std::vector<double> seed_kurtoses(double v0, double sin2phi, int components, std::optional<double> beta = {}) {
  std::vector<MarketConfig> cfgs;
  for (int s = 0; s < kSeeds; ++s) {
    cfgs.push_back(table_config(v0, sin2phi, components, static_cast<std::uint64_t>(s)));
    cfgs.back().noise_beta = beta;
  }
  std::vector<double> k;
  for (const auto& s : summaries_over_seeds(cfgs)) k.push_back(s.fisher_kurtosis);
  return k;
}

// 1. Exact structure of the neural-links operators.
Verdict exact_structure() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> angle(0.0, kPi / 2);
  double worst_unitary = 0.0;
  double worst_table1 = 0.0;
  double worst_table2 = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double phi = angle(rng);
    const Matrix8 net = l_net(phi);
    for (const Matrix8& m : {l1(phi), l2(), l3(), net}) worst_unitary = std::max(worst_unitary, unitarity_error(m));
    for (const auto& row : testing::kNetworkAction) {
      for (std::size_t out = 0; out < 8; ++out) {
        Complex expected{};
        if (out == row.sin_target) expected += std::sin(phi);
        if (out == row.cos_target) expected += kI * std::cos(phi);
        worst_table1 = std::max(worst_table1, std::abs(net(out, row.input) - expected));
      }
    }
    for (const auto& rule : testing::kAmplitudeUpdate) {
      for (std::size_t in = 0; in < 8; ++in) {
        Complex expected{};
        if (in == rule.sin_source) expected += std::sin(phi);
        if (in == rule.cos_source) expected += kI * std::cos(phi);
        worst_table2 = std::max(worst_table2, std::abs(net(rule.output, in) - expected));
      }
    }
  }
  Verdict v;
  v.pass = worst_unitary < 1e-12 && worst_table1 < 1e-12 && worst_table2 < 1e-12;
  v.detail = fmt("max unitarity err %.2e, action table err %.2e, update table err %.2e (tol 1e-12)", worst_unitary,
                 worst_table1, worst_table2);
  return v;
}

// 2. Signed map vs quantum evolution; normalization drift of both maps.
Verdict oracle_equivalence() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> angle(0.0, kPi / 2);
  constexpr int kStates = 1000;
  constexpr int kSteps = 1000;
  std::vector<double> deviation(kStates, 0.0);
  std::vector<NetworkState> starts;
  std::vector<double> phis;
  for (int i = 0; i < kStates; ++i) {
    starts.push_back(random_state(rng));
    phis.push_back(angle(rng));
  }
  run::parallel_for(kStates, hardware_threads(), [&](std::size_t i) {
    NetworkState quantum = starts[i];
    SignedMapState mapped = signed_from_quantum(quantum);
    const Matrix8 g = l_net(phis[i]);
    for (int t = 0; t < kSteps; ++t) {
      quantum = step_unchecked(quantum, g);
      mapped = step_signed(mapped, phis[i]);
      const ProbMapState a = mapped.squared();
      const ProbMapState b = from_quantum(quantum);
      for (std::size_t s = 0; s < 8; ++s)
        deviation[i] = std::max({deviation[i], std::abs(a.A[s] - b.A[s]), std::abs(a.B[s] - b.B[s])});
    }
  });
  const double worst = *std::max_element(deviation.begin(), deviation.end());

  const double phi = phi_from_sin2(0.6);
  const NetworkState start = random_state(rng);
  ProbMapState literal = from_quantum(start);
  SignedMapState signed_state = signed_from_quantum(start);
  double drift = 0.0;
  for (int t = 0; t < 10000; ++t) {
    literal = step_map(literal, phi);
    signed_state = step_signed(signed_state, phi);
    drift = std::max({drift, std::abs(literal.total() - 1.0), std::abs(signed_state.total() - 1.0)});
  }
  Verdict v;
  v.pass = worst < 1e-10 && drift < 1e-8;
  v.detail = fmt("max entry deviation %.2e (tol 1e-10), normalization drift over 1e4 steps %.2e (tol 1e-8)", worst,
                 drift);
  return v;
}

// 3. Interference terms sum to the post-step probability.
Verdict interference() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> angle(0.0, kPi / 2);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ProbMapState p = from_quantum(random_state(rng));
    const double phi = angle(rng);
    const ProbMapState next = step_map(p, phi);
    for (std::size_t s = 0; s < 8; ++s)
      worst = std::max(worst, std::abs(interference_decomposition(p, phi, s).sum() - probability(next, s)));
  }
  Verdict v;
  v.pass = worst < 1e-12;
  v.detail = fmt("max |sum of terms - probability| %.2e over 1000 states x 8 strings (tol 1e-12)", worst);
  return v;
}

// 4. Kurtosis bands across the (v0, sin²φ) grid.
Verdict turbulence_band() {
  Verdict v;
  std::ostringstream detail;
  for (double v0 : {0.4, 0.5, 0.6, 0.7, 0.9}) {
    detail << "v0=" << v0 << ":";
    for (double s2 : {0.4, 0.5, 0.6}) {
      const double med = median(seed_kurtoses(v0, s2, 20));
      bool ok = false;
      if (v0 <= 0.6) ok = med > 50.0;
      if (v0 == 0.7) ok = med >= 10.0 && med <= 500.0;
      if (v0 == 0.9) ok = med < 0.0;
      v.pass = v.pass && ok;
      detail << fmt(" %.2f", med) << (ok ? "" : "!");
    }
    detail << "; ";
  }
  v.detail = "median kurtosis over 10 seeds, sin2phi=0.4/0.5/0.6 -- " + detail.str() +
             "bands: >50 (v0<=0.6), [10,500] (v0=0.7), <0 (v0=0.9)";
  return v;
}

// 5. Jarque-Bera around the Gaussian-like region.
Verdict gaussian_transition() {
  auto p_values = [](double v0) {
    std::vector<MarketConfig> cfgs;
    for (int s = 0; s < kSeeds; ++s) cfgs.push_back(table_config(v0, 0.6, 20, static_cast<std::uint64_t>(s)));
    std::vector<double> p;
    for (const auto& s : summaries_over_seeds(cfgs)) p.push_back(s.jb_p_value);
    return p;
  };
  const auto p85 = p_values(0.85);
  const auto p87 = p_values(0.87);
  const auto rejected85 = std::count_if(p85.begin(), p85.end(), [](double p) { return p < 0.01; });
  const auto accepted87 = std::count_if(p87.begin(), p87.end(), [](double p) { return p > 0.01; });
  Verdict v;
  v.pass = rejected85 >= 9 && accepted87 >= 1;
  v.detail = fmt("v0=0.85 rejected at 1%% in %ld/10 seeds (need >=9); v0=0.87 p>0.01 in %ld/10 seeds (need >=1)",
                 static_cast<long>(rejected85), static_cast<long>(accepted87));
  return v;
}

// 6. Component count drives the kurtosis under noisy gates.
Verdict component_count() {
  std::vector<double> medians;
  std::ostringstream detail;
  for (int n : {10, 20, 30, 40, 50}) {
    medians.push_back(median(seed_kurtoses(0.88, 0.6, n, 2.0)));
    detail << fmt(" N+1=%d: %.3f;", n, medians.back());
  }
  const bool monotone = std::is_sorted(medians.begin(), medians.end());
  Verdict v;
  v.pass = medians.front() < 0.0 && medians.back() > 3.0 && monotone;
  v.detail = "median kurtosis, v0=0.88, beta=2, 10 seeds --" + detail.str() +
             " need N+1=10 < 0, N+1=50 > 3, monotone increasing";
  return v;
}

// 7. Published (statistic, p-value) pairs.
Verdict jb_consistency() {
  const std::vector<std::pair<double, double>> pairs{{46.5669, 7.7289e-11}, {3.8794, 0.1437}, {4.8697, 0.0876}};
  double worst = 0.0;
  for (auto [jb, p] : pairs) worst = std::max(worst, std::abs(stats::chi2_2dof_survival(jb) - p) / p);
  Verdict v;
  v.pass = worst < 1e-3;
  v.detail = fmt("max relative error of exp(-JB/2) %.2e (tol 1e-3)", worst);
  return v;
}

// 8. v0 = 1: two-valued returns, kurtosis tied to the polarization marginal.
Verdict degenerate_limit() {
  Verdict v;
  bool exact = true;
  double worst_identity = 0.0;
  double best_asymmetry = 1.0;
  double kurtosis_at_best = 0.0;
  for (int seed = 0; seed < kSeeds; ++seed) {
    for (double s2 : {0.4, 0.5, 0.6}) {
      MarketConfig cfg = table_config(1.0, s2, 20, static_cast<std::uint64_t>(seed));
      const auto series = simulate(cfg);
      std::size_t ups = 0;
      for (double r : series.returns) {
        exact = exact && std::abs(r) == 1.0 / cfg.lambda;
        ups += r > 0;
      }
      const double p = static_cast<double>(ups) / static_cast<double>(series.returns.size());
      const double k = stats::fisher_kurtosis(series.returns);
      // Two-point law: K = 1/(p(1−p)) − 6, which reaches −2 at p = 1/2.
      worst_identity = std::max(worst_identity, std::abs(k - (1.0 / (p * (1.0 - p)) - 6.0)));
      if (std::abs(p - 0.5) < best_asymmetry) {
        best_asymmetry = std::abs(p - 0.5);
        kurtosis_at_best = k;
      }
    }
  }
  // With |p − 1/2| = d the two-point kurtosis is −2 + 16d²/(1 − 4d²).
  const double bound = 16.0 * best_asymmetry * best_asymmetry / (1.0 - 4.0 * best_asymmetry * best_asymmetry);
  v.pass = exact && worst_identity < 1e-9 && kurtosis_at_best + 2.0 <= bound + 1e-9 && kurtosis_at_best < -1.9;
  v.detail = fmt("|R| == 1/lambda exactly: %s; max |K - (1/(pq) - 6)| %.2e; most symmetric run |p-1/2|=%.4f -> K=%.4f",
                 exact ? "yes" : "no", worst_identity, best_asymmetry, kurtosis_at_best);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// 9. Byte-identical outputs across repeated and parallel runs.
Verdict determinism() {
  const fs::path dir = fs::temp_directory_path() / "qna_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream err;
  bool ok = true;

  run::RunSpec sim;
  sim.market.seed = 77;
  sim.market.noise_beta = 1.0;
  sim.output_path = dir / "a.csv";
  ok = ok && run::run(sim, err) == 0;
  sim.output_path = dir / "b.csv";
  ok = ok && run::run(sim, err) == 0;
  const bool sim_same = slurp(dir / "a.csv") == slurp(dir / "b.csv") &&
                        slurp(dir / "a.summary.json") == slurp(dir / "b.summary.json");

  run::RunSpec map;
  map.mode = run::Mode::kProbMap;
  map.variant = run::MapVariant::kLiteral;
  map.output_path = dir / "m1.json";
  map.format = run::Format::kJson;
  ok = ok && run::run(map, err) == 0;
  map.output_path = dir / "m2.json";
  ok = ok && run::run(map, err) == 0;
  const bool map_same = slurp(dir / "m1.json") == slurp(dir / "m2.json");

  run::RunSpec sweep;
  sweep.mode = run::Mode::kSweep;
  sweep.market.steps = 1100;
  sweep.replicates = 3;
  sweep.sweep = {run::parse_sweep_axis("v0=0.6,0.8,0.9"), run::parse_sweep_axis("noise_beta=0.01,2")};
  sweep.threads = 1;
  sweep.output_path = dir / "serial.csv";
  ok = ok && run::run(sweep, err) == 0;
  sweep.threads = std::max(4, hardware_threads());
  sweep.output_path = dir / "parallel.csv";
  ok = ok && run::run(sweep, err) == 0;
  const bool sweep_same = slurp(dir / "serial.csv") == slurp(dir / "parallel.csv");
  fs::remove_all(dir);

  Verdict v;
  v.pass = ok && sim_same && map_same && sweep_same;
  v.detail = fmt("simulate csv+json identical: %s; probmap identical: %s; sweep serial vs %d threads identical: %s%s",
                 sim_same ? "yes" : "no", map_same ? "yes" : "no", sweep.threads, sweep_same ? "yes" : "no",
                 ok ? "" : " (a run failed)");
  return v;
}

struct Criterion {
  const char* name;
  std::function<Verdict()> check;
  double time_limit_s;  // <= 0: no limit
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"1 exact-structure", exact_structure, 1.0},
      {"2 oracle-equivalence", oracle_equivalence, 30.0},
      {"3 interference-decomposition", interference, 0.0},
      {"4 turbulence-band", turbulence_band, 120.0},
      {"5 gaussian-transition", gaussian_transition, 0.0},
      {"6 component-count", component_count, 0.0},
      {"7 jb-consistency", jb_consistency, 0.0},
      {"8 degenerate-limit", degenerate_limit, 0.0},
      {"9 determinism", determinism, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && elapsed >= c.time_limit_s) {
      v.pass = false;
      v.detail += fmt(" [time limit %.0fs exceeded]", c.time_limit_s);
    }
    failures += v.pass ? 0 : 1;
    std::printf("[%s] %-30s %6.2fs  %s\n", v.pass ? "PASS" : "FAIL", c.name, elapsed, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
