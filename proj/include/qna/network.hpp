#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "qna/gates.hpp"
#include "qna/linalg.hpp"

namespace qna {

using Amplitudes = std::array<Complex, 8>;

inline constexpr double kNormTolerance = 1e-10;

constexpr std::size_t basis_index(unsigned s1, unsigned s2, unsigned s3) { return 4U * s1 + 2U * s2 + s3; }

/// Amplitudes of one market component's three-neuron network.
struct NetworkState {
  Amplitudes amplitudes{};

  static NetworkState basis(std::size_t index) {
    if (index >= 8) throw std::invalid_argument("NetworkState::basis: index out of range");
    NetworkState s;
    s.amplitudes[index] = 1.0;
    return s;
  }

  double norm_squared() const {
    double acc = 0.0;
    for (const auto& a : amplitudes) acc += std::norm(a);
    return acc;
  }

  /// Probability that the third neuron fires.
  double third_neuron_firing() const {
    double p = 0.0;
    for (std::size_t s = 1; s < 8; s += 2) p += std::norm(amplitudes[s]);
    return p;
  }

  friend bool operator==(const NetworkState&, const NetworkState&) = default;
};

/// Observable diagonal in the neural basis.
struct Observable8 {
  std::array<double, 8> diagonal{};
};

/// φ = arcsin(√sin²φ), restricted to [0, π/2].
inline double phi_from_sin2(double sin2phi) {
  if (!(sin2phi >= 0.0 && sin2phi <= 1.0)) throw std::invalid_argument("sin^2(phi) must lie in [0, 1]");
  return std::asin(std::sqrt(sin2phi));
}

// Neuron 1 is rotated about σ₁ conditioned on neuron 3: the quiescent branch
// gives sin φ·I + i cos φ·σ₁, the firing branch i cos φ·I + sin φ·σ₁.
inline Matrix8 l1(double phi) {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  ConditionalGateSpec spec;
  spec.target = 1;
  spec.controls = {3};
  spec.gate_map[0] = gate_from_hamiltonian({std::numbers::pi, phi + kHalfPi, {1.0, 0.0, 0.0}});
  spec.gate_map[1] = gate_from_hamiltonian({kHalfPi, phi, {1.0, 0.0, 0.0}});
  return build_conditional_gate(spec);
}

/// Flips neuron 2 iff neurons 1 and 3 disagree.
inline Matrix8 l2() {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  const Matrix2 keep = gate_from_hamiltonian({0.0, 0.0, {1.0, 0.0, 0.0}});
  const Matrix2 flip = gate_from_hamiltonian({kHalfPi, kHalfPi, {1.0, 0.0, 0.0}});
  ConditionalGateSpec spec;
  spec.target = 2;
  spec.controls = {1, 3};
  spec.gate_map = {{0b00, keep}, {0b01, flip}, {0b10, flip}, {0b11, keep}};
  return build_conditional_gate(spec);
}

/// Flips neuron 3 iff neuron 2 fires.
inline Matrix8 l3() {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  ConditionalGateSpec spec;
  spec.target = 3;
  spec.controls = {2};
  spec.gate_map[0] = gate_from_hamiltonian({0.0, 0.0, {1.0, 0.0, 0.0}});
  spec.gate_map[1] = gate_from_hamiltonian({kHalfPi, kHalfPi, {1.0, 0.0, 0.0}});
  return build_conditional_gate(spec);
}

/// One full network update, L₃·L₂·L₁.
inline Matrix8 l_net(double phi) {
  static const Matrix8 l3_l2 = l3() * l2();
  return l3_l2 * l1(phi);
}

/// Row s of L_Net(φ) holds exactly two entries: sin φ in column `sin_source`
/// and i·cos φ in column `cos_source`, so
///   ψ(s, t) = sin φ·ψ(sin_source, t−1) + i cos φ·ψ(cos_source, t−1).
struct AmplitudeRoute {
  std::size_t sin_source = 0;
  std::size_t cos_source = 0;
};

using RoutingTable = std::array<AmplitudeRoute, 8>;

namespace detail {

inline std::size_t sole_nonzero_column(const Matrix8& m, std::size_t row, Complex expected) {
  std::size_t found = 8;
  for (std::size_t col = 0; col < 8; ++col) {
    const Complex v = m(row, col);
    if (std::abs(v) < 1e-12) continue;
    if (found != 8 || std::abs(v - expected) > 1e-12) {
      throw std::logic_error("L_Net does not have the two-entry row structure");
    }
    found = col;
  }
  if (found == 8) throw std::logic_error("L_Net row has no entry");
  return found;
}

inline RoutingTable derive_routes() {
  // Every entry of L₁ is linear in (sin φ, cos φ) and L₃L₂ is constant, hence
  // L_Net(φ) = sin φ·L_Net(π/2) + cos φ·L_Net(0).
  const Matrix8 sin_part = l_net(std::numbers::pi / 2.0);
  const Matrix8 cos_part = l_net(0.0);
  RoutingTable routes{};
  for (std::size_t s = 0; s < 8; ++s) {
    routes[s].sin_source = sole_nonzero_column(sin_part, s, Complex{1.0, 0.0});
    routes[s].cos_source = sole_nonzero_column(cos_part, s, Complex{0.0, 1.0});
  }
  return routes;
}

}  // namespace detail

/// Routing table read off the constructed L_Net matrix.
inline const RoutingTable& amplitude_routes() {
  static const RoutingTable routes = detail::derive_routes();
  return routes;
}

/// Sparse application of L_Net given sin φ and cos φ directly.
inline NetworkState step_net(const NetworkState& state, double sin_phi, double cos_phi) {
  const auto& routes = amplitude_routes();
  NetworkState out;
  for (std::size_t s = 0; s < 8; ++s) {
    const Complex& a = state.amplitudes[routes[s].sin_source];
    const Complex& b = state.amplitudes[routes[s].cos_source];
    // sin φ·a + i·cos φ·b
    out.amplitudes[s] = Complex{sin_phi * a.real() - cos_phi * b.imag(), sin_phi * a.imag() + cos_phi * b.real()};
  }
  return out;
}

inline NetworkState step(const NetworkState& state, const Matrix8& op) {
  if (!is_unitary(op)) throw std::invalid_argument("step: operator is not unitary");
  return NetworkState{op.apply(state.amplitudes)};
}

/// step() without the unitarity check, for operators already known to be unitary.
inline NetworkState step_unchecked(const NetworkState& state, const Matrix8& op) {
  return NetworkState{op.apply(state.amplitudes)};
}

inline double expectation(const NetworkState& state, const Observable8& obs) {
  double acc = 0.0;
  for (std::size_t s = 0; s < 8; ++s) acc += obs.diagonal[s] * std::norm(state.amplitudes[s]);
  return acc;
}

/// ‖P_s ψ‖² = |ψ(s)|²
inline double projection_weight(const NetworkState& state, std::size_t s) {
  if (s >= 8) throw std::invalid_argument("projection_weight: basis index out of range");
  return std::norm(state.amplitudes[s]);
}

/// Equal-weight mixture of pure network states.
struct EnsembleState {
  std::vector<NetworkState> members;
};

inline double ensemble_expectation(const EnsembleState& ens, const Observable8& obs) {
  if (ens.members.empty()) throw std::invalid_argument("ensemble_expectation: empty ensemble");
  double acc = 0.0;
  for (const auto& m : ens.members) acc += expectation(m, obs);
  return acc / static_cast<double>(ens.members.size());
}

// Both observables read only the third neuron.
inline Observable8 volatility_observable(double v0) {
  Observable8 o;
  for (std::size_t s = 0; s < 8; ++s) o.diagonal[s] = (s & 1U) ? 2.0 - v0 : v0;
  return o;
}

inline Observable8 polarization_observable() {
  Observable8 o;
  for (std::size_t s = 0; s < 8; ++s) o.diagonal[s] = (s & 1U) ? 1.0 : -1.0;
  return o;
}

}  // namespace qna
