#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qna/linalg.hpp"
#include "qna/random.hpp"

namespace qna {

inline Matrix2 pauli(int j) {
  Matrix2 m;
  switch (j) {
    case 1:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 2:
      m(0, 1) = Complex{0.0, -1.0};
      m(1, 0) = Complex{0.0, 1.0};
      break;
    case 3:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      throw std::invalid_argument("pauli: index must be 1, 2 or 3, got " + std::to_string(j));
  }
  return m;
}

/// Single-neuron Hamiltonian, stored through the dimensionless products
/// ω·Δt/2 and θ·Δt/2 together with the rotation axis u.
struct HamiltonianParams {
  double omega_half = 0.0;
  double theta_half = 0.0;
  std::array<double, 3> u{1.0, 0.0, 0.0};
};

/// exp(i·ω/2)·[cos(θ/2)·I − i·sin(θ/2)·(u·σ)]
inline Matrix2 gate_from_hamiltonian(const HamiltonianParams& p) {
  const double norm = std::sqrt(p.u[0] * p.u[0] + p.u[1] * p.u[1] + p.u[2] * p.u[2]);
  if (!(std::abs(norm - 1.0) <= 1e-12)) {
    throw std::invalid_argument("gate_from_hamiltonian: rotation axis must be a unit vector");
  }
  Matrix2 axis;
  for (int j = 1; j <= 3; ++j) axis = axis + Complex{p.u[j - 1], 0.0} * pauli(j);

  const Complex phase = std::polar(1.0, p.omega_half);
  const Matrix2 rotation =
      Complex{std::cos(p.theta_half), 0.0} * Matrix2::identity() + Complex{0.0, -std::sin(p.theta_half)} * axis;
  return phase * rotation;
}

/// Haar-distributed U(2) element:
///   e^{iα}·[[e^{iψ}cos θ, e^{iχ}sin θ], [−e^{−iχ}sin θ, e^{−iψ}cos θ]]
/// with α, ψ, χ uniform on [0, 2π) and cos²θ uniform on [0, 1).
template <class Engine>
Matrix2 haar_random_u2(Engine& engine) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double alpha = kTwoPi * uniform01(engine);
  const double psi = kTwoPi * uniform01(engine);
  const double chi = kTwoPi * uniform01(engine);
  const double cos_sq = uniform01(engine);
  const double c = std::sqrt(cos_sq);
  const double s = std::sqrt(1.0 - cos_sq);

  const Complex global = std::polar(1.0, alpha);
  Matrix2 u;
  u(0, 0) = global * std::polar(c, psi);
  u(0, 1) = global * std::polar(s, chi);
  u(1, 0) = -global * std::polar(s, -chi);
  u(1, 1) = global * std::polar(c, -psi);
  return u;
}

/// Neuron indices are 1-based; neuron 1 is the most significant bit of the
/// basis index 4·s₁ + 2·s₂ + s₃.
inline constexpr int kNeurons = 3;

constexpr std::size_t neuron_bit_position(int neuron) { return static_cast<std::size_t>(kNeurons - neuron); }

constexpr unsigned neuron_bit(std::size_t basis, int neuron) {
  return static_cast<unsigned>((basis >> neuron_bit_position(neuron)) & 1U);
}

/// Conditional neural-links gate: `gate_map` assigns a single-neuron unitary to
/// every firing pattern of the control neurons. Patterns are encoded with the
/// first listed control as the most significant bit.
struct ConditionalGateSpec {
  int target = 1;
  std::vector<int> controls;
  std::map<unsigned, Matrix2> gate_map;
};

inline unsigned control_pattern(std::size_t basis, const std::vector<int>& controls) {
  unsigned pattern = 0;
  for (int c : controls) pattern = (pattern << 1) | neuron_bit(basis, c);
  return pattern;
}

inline void validate(const ConditionalGateSpec& spec) {
  auto in_range = [](int n) { return n >= 1 && n <= kNeurons; };
  if (!in_range(spec.target)) throw std::invalid_argument("conditional gate: target neuron out of range");
  unsigned seen = 0;
  for (int c : spec.controls) {
    if (!in_range(c)) throw std::invalid_argument("conditional gate: control neuron out of range");
    if (c == spec.target) throw std::invalid_argument("conditional gate: target listed as a control");
    const unsigned bit = 1U << c;
    if (seen & bit) throw std::invalid_argument("conditional gate: duplicate control neuron");
    seen |= bit;
  }
  const unsigned patterns = 1U << spec.controls.size();
  for (unsigned p = 0; p < patterns; ++p) {
    auto it = spec.gate_map.find(p);
    if (it == spec.gate_map.end()) {
      throw std::invalid_argument("conditional gate: no gate for control pattern " + std::to_string(p));
    }
    if (!is_unitary(it->second)) {
      throw std::invalid_argument("conditional gate: gate for pattern " + std::to_string(p) + " is not unitary");
    }
  }
  if (spec.gate_map.size() != patterns) {
    throw std::invalid_argument("conditional gate: gate map has patterns beyond the control count");
  }
}

/// Σ_pattern |pattern⟩⟨pattern|_controls ⊗ G(pattern)_target, identity on the
/// remaining neuron.
inline Matrix8 build_conditional_gate(const ConditionalGateSpec& spec) {
  validate(spec);
  const std::size_t target_mask = std::size_t{1} << neuron_bit_position(spec.target);
  Matrix8 out;
  for (std::size_t col = 0; col < 8; ++col) {
    const Matrix2& gate = spec.gate_map.at(control_pattern(col, spec.controls));
    const unsigned in_bit = neuron_bit(col, spec.target);
    for (unsigned out_bit = 0; out_bit < 2; ++out_bit) {
      const std::size_t row = out_bit ? (col | target_mask) : (col & ~target_mask);
      out(row, col) += gate(out_bit, in_bit);
    }
  }
  return out;
}

}  // namespace qna
