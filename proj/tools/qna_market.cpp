// Command-line driver: single simulations, probability-map runs and
// parameter sweeps. See README.md for the flag reference.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qna/run.hpp"

int main(int argc, char** argv) {
  using namespace qna::run;

  CLI::App app{"Quantum neural automaton market simulator"};
  RunSpec spec;
  std::optional<double> beta;
  std::vector<std::string> sweep_axes;
  std::string output;
  std::string mode = "simulate";
  std::string format = "csv";
  std::string variant = "signed";

  const std::map<std::string, Mode> modes{{"simulate", Mode::kSimulate}, {"probmap", Mode::kProbMap}, {"sweep", Mode::kSweep}};
  const std::map<std::string, Format> formats{{"csv", Format::kCsv}, {"json", Format::kJson}};
  const std::map<std::string, MapVariant> variants{{"signed", MapVariant::kSigned}, {"literal", MapVariant::kLiteral}};

  app.add_option("--mode", mode, "Run mode")->check(CLI::IsMember(modes))->capture_default_str();
  app.add_option("--components", spec.market.n_components, "Number of market components (N+1)")->capture_default_str();
  app.add_option("--v0", spec.market.v0, "Low volatility factor v0 in (0, 1]")->capture_default_str();
  app.add_option("--sin2phi", spec.market.sin2phi, "Gate parameter sin^2(phi) in [0, 1]")->capture_default_str();
  app.add_option("--lambda", spec.market.lambda, "Market depth")->capture_default_str();
  app.add_option("--steps", spec.market.steps, "Trading rounds to simulate")->capture_default_str();
  app.add_option("--transient", spec.market.transient, "Leading rounds to discard")->capture_default_str();
  app.add_option("--seed", spec.market.seed, "Master seed")->capture_default_str();
  app.add_option("--beta", beta, "Enable noisy gates with this beta");
  app.add_option("--sweep", sweep_axes, "Sweep axis name=v1,v2,... (v0, sin2phi, n_components, noise_beta)")
      ->take_all()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--replicates", spec.replicates, "Seeds per sweep cell (seed, seed+1, ...)")->capture_default_str();
  app.add_option("--threads", spec.threads, "Worker threads for sweeps")->capture_default_str();
  app.add_option("--variant", variant, "Probability map variant")
      ->check(CLI::IsMember(variants))
      ->capture_default_str();
  app.add_option("--out", output, "Output file")->required();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  spec.mode = modes.at(mode);
  spec.format = formats.at(format);
  spec.variant = variants.at(variant);
  spec.market.noise_beta = beta;
  spec.output_path = output;
  try {
    for (const auto& axis : sweep_axes) spec.sweep.push_back(parse_sweep_axis(axis));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return run(spec, std::cerr);
}
