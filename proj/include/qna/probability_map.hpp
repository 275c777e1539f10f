#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "qna/network.hpp"

namespace qna {

/// Squared real and imaginary parts of the eight amplitudes:
/// A(s) = (Re ψ(s))², B(s) = (Im ψ(s))².
struct ProbMapState {
  std::array<double, 8> A{};
  std::array<double, 8> B{};

  double total() const {
    double acc = 0.0;
    for (std::size_t s = 0; s < 8; ++s) acc += A[s] + B[s];
    return acc;
  }
};

/// Sign-carrying counterpart: a(s) = Re ψ(s), b(s) = Im ψ(s).
struct SignedMapState {
  std::array<double, 8> a{};
  std::array<double, 8> b{};

  double total() const {
    double acc = 0.0;
    for (std::size_t s = 0; s < 8; ++s) acc += a[s] * a[s] + b[s] * b[s];
    return acc;
  }

  /// Squares of the entries; equals from_quantum() of the same amplitudes.
  ProbMapState squared() const {
    ProbMapState p;
    for (std::size_t s = 0; s < 8; ++s) {
      p.A[s] = a[s] * a[s];
      p.B[s] = b[s] * b[s];
    }
    return p;
  }

  bool all_nonnegative() const {
    return std::all_of(a.begin(), a.end(), [](double x) { return x >= 0.0; }) &&
           std::all_of(b.begin(), b.end(), [](double x) { return x >= 0.0; });
  }
};

inline ProbMapState from_quantum(const NetworkState& state) {
  ProbMapState p;
  for (std::size_t s = 0; s < 8; ++s) {
    p.A[s] = state.amplitudes[s].real() * state.amplitudes[s].real();
    p.B[s] = state.amplitudes[s].imag() * state.amplitudes[s].imag();
  }
  return p;
}

inline SignedMapState signed_from_quantum(const NetworkState& state) {
  SignedMapState p;
  for (std::size_t s = 0; s < 8; ++s) {
    p.a[s] = state.amplitudes[s].real();
    p.b[s] = state.amplitudes[s].imag();
  }
  return p;
}

inline NetworkState to_quantum(const SignedMapState& state) {
  NetworkState q;
  for (std::size_t s = 0; s < 8; ++s) q.amplitudes[s] = Complex{state.a[s], state.b[s]};
  return q;
}

namespace detail {

inline constexpr double kMapInputTolerance = 1e-6;

inline void require_normalized(double total, const char* where) {
  if (!(std::abs(total - 1.0) <= kMapInputTolerance)) {
    throw std::invalid_argument(std::string(where) + ": state violates the A + B normalization");
  }
}

}  // namespace detail

// Literal square-root form:
//   A(s,t) = [√A(s′)·sin φ − √B(s″)·cos φ]²
//   B(s,t) = [√B(s′)·sin φ + √A(s″)·cos φ]²
// The square roots drop the signs of Re ψ and Im ψ, so this only tracks the
// unitary evolution while every real and imaginary part stays non-negative.
inline ProbMapState step_map(const ProbMapState& state, double phi) {
  detail::require_normalized(state.total(), "step_map");
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  const auto& routes = amplitude_routes();
  ProbMapState next;
  for (std::size_t s = 0; s < 8; ++s) {
    const std::size_t s1 = routes[s].sin_source;
    const std::size_t s2 = routes[s].cos_source;
    const double re = std::sqrt(state.A[s1]) * sp - std::sqrt(state.B[s2]) * cp;
    const double im = std::sqrt(state.B[s1]) * sp + std::sqrt(state.A[s2]) * cp;
    next.A[s] = re * re;
    next.B[s] = im * im;
  }
  return next;
}

/// Signed form; identical to applying L_Net to the amplitudes.
inline SignedMapState step_signed(const SignedMapState& state, double phi) {
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  const auto& routes = amplitude_routes();
  SignedMapState next;
  for (std::size_t s = 0; s < 8; ++s) {
    const std::size_t s1 = routes[s].sin_source;
    const std::size_t s2 = routes[s].cos_source;
    next.a[s] = state.a[s1] * sp - state.b[s2] * cp;
    next.b[s] = state.b[s1] * sp + state.a[s2] * cp;
  }
  return next;
}

inline double probability(const ProbMapState& state, std::size_t s) {
  if (s >= 8) throw std::invalid_argument("probability: basis index out of range");
  return state.A[s] + state.B[s];
}

/// Expansion of the post-step probability of one string into its classical
/// transfer terms and the two sin 2φ interference terms.
struct InterferenceTerms {
  double from_sin_source = 0.0;   // Prob[s′]·sin²φ
  double from_cos_source = 0.0;   // Prob[s″]·cos²φ
  double interference_gain = 0.0; // +√(B(s′)A(s″))·sin 2φ
  double interference_loss = 0.0; // −√(A(s′)B(s″))·sin 2φ

  double sum() const { return from_sin_source + from_cos_source + interference_gain + interference_loss; }
};

inline InterferenceTerms interference_decomposition(const ProbMapState& prev, double phi, std::size_t s) {
  if (s >= 8) throw std::invalid_argument("interference_decomposition: basis index out of range");
  const auto& route = amplitude_routes()[s];
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  const double sin2 = std::sin(2.0 * phi);
  InterferenceTerms t;
  t.from_sin_source = probability(prev, route.sin_source) * sp * sp;
  t.from_cos_source = probability(prev, route.cos_source) * cp * cp;
  t.interference_gain = std::sqrt(prev.B[route.sin_source] * prev.A[route.cos_source]) * sin2;
  t.interference_loss = -std::sqrt(prev.A[route.sin_source] * prev.B[route.cos_source]) * sin2;
  return t;
}

/// Literal map with the noisy-gate angle, written in logistic weights:
/// sin²φ = 1/(1+e^{−2βz}), cos²φ = e^{−2βz}/(1+e^{−2βz}), sin 2φ = 1/cosh(βz).
inline ProbMapState step_map_noisy(const ProbMapState& state, double beta, double z) {
  if (!(beta >= 0.0)) throw std::invalid_argument("step_map_noisy: beta must be >= 0");
  detail::require_normalized(state.total(), "step_map_noisy");
  const double x = beta * z;
  const double w_sin = 1.0 / (1.0 + std::exp(-2.0 * x));
  const double w_cos = 1.0 / (1.0 + std::exp(2.0 * x));
  const double w_cross = 1.0 / std::cosh(x);
  const auto& routes = amplitude_routes();
  ProbMapState next;
  for (std::size_t s = 0; s < 8; ++s) {
    const std::size_t s1 = routes[s].sin_source;
    const std::size_t s2 = routes[s].cos_source;
    const double a = state.A[s1] * w_sin + state.B[s2] * w_cos - std::sqrt(state.A[s1] * state.B[s2]) * w_cross;
    const double b = state.B[s1] * w_sin + state.A[s2] * w_cos + std::sqrt(state.B[s1] * state.A[s2]) * w_cross;
    next.A[s] = std::max(a, 0.0);
    next.B[s] = std::max(b, 0.0);
  }
  return next;
}

}  // namespace qna
