#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace qna::stats {

/// Thrown when a moment ratio is undefined, e.g. for a constant series.
class UndefinedStatistic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Uncorrected central moments m_j = (1/n)·Σ(x_i − x̄)^j.
struct CentralMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
};

inline CentralMoments central_moments(std::span<const double> x) {
  if (x.size() < 4) {
    throw std::invalid_argument("at least 4 observations required, got " + std::to_string(x.size()));
  }
  CentralMoments m;
  m.n = x.size();
  const double n = static_cast<double>(m.n);
  double sum = 0.0;
  for (double v : x) sum += v;
  m.mean = sum / n;
  for (double v : x) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m.m2 += d2;
    m.m3 += d2 * d;
    m.m4 += d2 * d2;
  }
  m.m2 /= n;
  m.m3 /= n;
  m.m4 /= n;
  if (!(m.m2 > 0.0)) throw UndefinedStatistic("series has zero variance");
  return m;
}

inline double skewness(const CentralMoments& m) { return m.m3 / std::pow(m.m2, 1.5); }
inline double fisher_kurtosis(const CentralMoments& m) { return m.m4 / (m.m2 * m.m2) - 3.0; }

inline double skewness(std::span<const double> x) { return skewness(central_moments(x)); }

/// Excess kurtosis m₄/m₂² − 3; zero for a Gaussian.
inline double fisher_kurtosis(std::span<const double> x) { return fisher_kurtosis(central_moments(x)); }

inline constexpr double kPValueFloor = 1e-300;

/// Survival function of χ² with two degrees of freedom, exp(−x/2). Values
/// below 1e-300 are reported as 0.
inline double chi2_2dof_survival(double statistic) {
  const double p = std::exp(-0.5 * statistic);
  return p < kPValueFloor ? 0.0 : p;
}

struct JarqueBeraResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

inline double jarque_bera_statistic(std::size_t n, double skew, double excess_kurtosis) {
  return static_cast<double>(n) / 6.0 * (skew * skew + 0.25 * excess_kurtosis * excess_kurtosis);
}

inline JarqueBeraResult jarque_bera(const CentralMoments& m) {
  JarqueBeraResult r;
  r.statistic = jarque_bera_statistic(m.n, skewness(m), fisher_kurtosis(m));
  r.p_value = chi2_2dof_survival(r.statistic);
  return r;
}

inline JarqueBeraResult jarque_bera(std::span<const double> x) { return jarque_bera(central_moments(x)); }

struct SeriesSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double fisher_kurtosis = 0.0;
  double jb_statistic = 0.0;
  double jb_p_value = 1.0;
};

inline SeriesSummary summarize(std::span<const double> x) {
  const CentralMoments m = central_moments(x);
  const JarqueBeraResult jb = jarque_bera(m);
  return SeriesSummary{m.n, m.mean, m.m2, skewness(m), fisher_kurtosis(m), jb.statistic, jb.p_value};
}

}  // namespace qna::stats
