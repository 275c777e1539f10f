#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace qna {

using Complex = std::complex<double>;

inline constexpr double kUnitarityTolerance = 1e-12;

// Dense N×N complex matrix stored row-major. Only N = 2 (one neuron) and
// N = 8 (one 3-neuron network) are used.
template <std::size_t N>
class SquareMatrix {
 public:
  static constexpr std::size_t kDim = N;

  constexpr SquareMatrix() = default;

  static SquareMatrix identity() {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * N + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const { return data_[row * N + col]; }

  SquareMatrix adjoint() const {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
  }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < N; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }

  friend SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) {
    for (std::size_t i = 0; i < N * N; ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend SquareMatrix operator*(Complex s, SquareMatrix a) {
    for (auto& z : a.data_) z *= s;
    return a;
  }

  std::array<Complex, N> apply(const std::array<Complex, N>& v) const {
    std::array<Complex, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      Complex acc{};
      for (std::size_t j = 0; j < N; ++j) acc += (*this)(i, j) * v[j];
      out[i] = acc;
    }
    return out;
  }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::array<Complex, N * N> data_{};
};

using Matrix2 = SquareMatrix<2>;
using Matrix8 = SquareMatrix<8>;

template <std::size_t N>
double max_abs_difference(const SquareMatrix<N>& a, const SquareMatrix<N>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

/// ‖U†U − I‖_max
template <std::size_t N>
double unitarity_error(const SquareMatrix<N>& u) {
  return max_abs_difference(u.adjoint() * u, SquareMatrix<N>::identity());
}

template <std::size_t N>
bool is_unitary(const SquareMatrix<N>& u, double tol = kUnitarityTolerance) {
  return unitarity_error(u) < tol;
}

inline Complex determinant(const Matrix2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

}  // namespace qna
