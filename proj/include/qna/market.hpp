#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qna/gates.hpp"
#include "qna/network.hpp"
#include "qna/random.hpp"

namespace qna {

/// Simulation parameters. The last of the `n_components` networks is the
/// polarization component; the others are volatility components.
struct MarketConfig {
  int n_components = 20;
  double sin2phi = 0.6;
  double v0 = 0.7;
  double lambda = 1000.0;
  int steps = 2100;
  int transient = 100;
  std::uint64_t seed = 0;
  std::optional<double> noise_beta;

  void validate() const {
    if (n_components < 1) throw std::invalid_argument("n_components must be >= 1");
    if (!(sin2phi >= 0.0 && sin2phi <= 1.0)) throw std::invalid_argument("sin2phi must lie in [0, 1]");
    if (!(v0 > 0.0 && v0 <= 1.0)) throw std::invalid_argument("v0 must lie in (0, 1]");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
    if (steps <= 0) throw std::invalid_argument("steps must be positive");
    if (transient < 0 || transient >= steps) throw std::invalid_argument("transient must lie in [0, steps)");
    if (noise_beta && !(*noise_beta >= 0.0 && std::isfinite(*noise_beta))) {
      throw std::invalid_argument("noise beta must be a finite value >= 0");
    }
  }
};

/// Product state of the lattice, stored one network per component.
struct MarketState {
  std::vector<NetworkState> components;
  int round = 0;

  friend bool operator==(const MarketState&, const MarketState&) = default;
};

struct ReturnsSeries {
  std::vector<double> returns;
  std::vector<double> log_prices;
  int rounds = 0;
};

constexpr double volatility_eigenvalue(unsigned s3, double v0) { return s3 ? 2.0 - v0 : v0; }

constexpr double polarization_eigenvalue(unsigned s3) { return s3 ? 1.0 : -1.0; }

/// R = (1/λ)·∏ v(s₃ of volatility components)·σ(s₃ of polarization component).
inline double returns_eigenvalue(std::span<const std::uint8_t> bits, const MarketConfig& cfg) {
  if (bits.size() != static_cast<std::size_t>(cfg.n_components)) {
    throw std::invalid_argument("returns_eigenvalue: expected " + std::to_string(cfg.n_components) +
                                " bits, got " + std::to_string(bits.size()));
  }
  double product = 1.0;
  for (std::size_t k = 0; k + 1 < bits.size(); ++k) product *= volatility_eigenvalue(bits[k], cfg.v0);
  return product * polarization_eigenvalue(bits.back()) / cfg.lambda;
}

/// Network state (U_a ⊗ U_b ⊗ U_c)|000⟩ for independent Haar draws.
template <class Engine>
NetworkState random_product_state(Engine& engine) {
  std::array<Matrix2, 3> gates{haar_random_u2(engine), haar_random_u2(engine), haar_random_u2(engine)};
  NetworkState state;
  for (std::size_t s = 0; s < 8; ++s) {
    state.amplitudes[s] =
        gates[0](neuron_bit(s, 1), 0) * gates[1](neuron_bit(s, 2), 0) * gates[2](neuron_bit(s, 3), 0);
  }
  return state;
}

inline MarketState init_market(const MarketConfig& cfg) {
  cfg.validate();
  MarketState state;
  state.components.reserve(static_cast<std::size_t>(cfg.n_components));
  for (int k = 0; k < cfg.n_components; ++k) {
    auto engine = derive_stream(cfg.seed, StreamPurpose::kInit, static_cast<std::uint64_t>(k), 0);
    state.components.push_back(random_product_state(engine));
  }
  return state;
}

/// Noisy-gate angle, φ = arcsin(1/√(1+e^{−2βz})), i.e. tan φ = e^{βz}.
inline double sample_phi(double beta, double z) {
  if (!(beta >= 0.0)) throw std::invalid_argument("sample_phi: beta must be >= 0");
  return std::atan(std::exp(beta * z));
}

/// Applies one round of network updates to every component. Noisy gates draw
/// z_k(t) ~ N(0,1) independently per component and round.
inline MarketState evolve_market(const MarketState& state, const MarketConfig& cfg) {
  MarketState next;
  next.round = state.round + 1;
  next.components.resize(state.components.size());
  const double fixed_phi = phi_from_sin2(cfg.sin2phi);
  for (std::size_t k = 0; k < state.components.size(); ++k) {
    double phi = fixed_phi;
    if (cfg.noise_beta) {
      auto engine = derive_stream(cfg.seed, StreamPurpose::kNoise, k, static_cast<std::uint64_t>(next.round));
      std::normal_distribution<double> normal;
      phi = sample_phi(*cfg.noise_beta, normal(engine));
    }
    next.components[k] = step_net(state.components[k], std::sin(phi), std::cos(phi));
  }
  return next;
}

/// Draws the third-neuron outcome of every component from its squared
/// amplitudes. The state itself is left untouched.
inline std::vector<std::uint8_t> sample_third_neurons(const MarketState& state, std::uint64_t sampling_seed) {
  std::vector<std::uint8_t> bits(state.components.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    auto engine = derive_stream(sampling_seed, StreamPurpose::kSampling, k, static_cast<std::uint64_t>(state.round));
    bits[k] = uniform01(engine) < state.components[k].third_neuron_firing() ? 1 : 0;
  }
  return bits;
}

/// ⟨R⟩ over the product state. Components are independent, so the sum over
/// all joint strings factorizes into per-component means.
inline double expected_return(const MarketState& state, const MarketConfig& cfg) {
  if (state.components.size() != static_cast<std::size_t>(cfg.n_components)) {
    throw std::invalid_argument("expected_return: component count mismatch");
  }
  double product = 1.0 / cfg.lambda;
  for (std::size_t k = 0; k + 1 < state.components.size(); ++k) {
    const double p = state.components[k].third_neuron_firing();
    product *= (1.0 - p) * volatility_eigenvalue(0, cfg.v0) + p * volatility_eigenvalue(1, cfg.v0);
  }
  const double p = state.components.back().third_neuron_firing();
  return product * ((1.0 - p) * polarization_eigenvalue(0) + p * polarization_eigenvalue(1));
}

struct RoundOutcome {
  MarketState state;
  double market_return = 0.0;
  std::vector<std::uint8_t> bits;
};

/// One trading round: evolve every component, then sample the return from the
/// evolved amplitudes without reducing the state. `sampling_seed` selects the
/// outcome stream independently of the noise stream.
inline RoundOutcome advance_round(const MarketState& state, const MarketConfig& cfg, std::uint64_t sampling_seed) {
  RoundOutcome out;
  out.state = evolve_market(state, cfg);
  out.bits = sample_third_neurons(out.state, sampling_seed);
  out.market_return = returns_eigenvalue(out.bits, cfg);
  return out;
}

inline RoundOutcome advance_round(const MarketState& state, const MarketConfig& cfg) {
  return advance_round(state, cfg, cfg.seed);
}

/// Runs `cfg.steps` rounds, drops the first `cfg.transient` returns and
/// accumulates log prices from log S(0) = 0.
inline ReturnsSeries simulate(const MarketConfig& cfg) {
  cfg.validate();
  MarketState state = init_market(cfg);
  ReturnsSeries series;
  const auto kept = static_cast<std::size_t>(cfg.steps - cfg.transient);
  series.returns.reserve(kept);
  series.log_prices.reserve(kept);
  double log_price = 0.0;
  for (int t = 1; t <= cfg.steps; ++t) {
    RoundOutcome outcome = advance_round(state, cfg);
    state = std::move(outcome.state);
    if (t <= cfg.transient) continue;
    log_price += outcome.market_return;
    series.returns.push_back(outcome.market_return);
    series.log_prices.push_back(log_price);
  }
  series.rounds = static_cast<int>(kept);
  return series;
}

}  // namespace qna
