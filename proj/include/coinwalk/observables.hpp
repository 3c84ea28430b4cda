#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coinwalk/walker.hpp"

namespace coinwalk {

enum class Basis { Momentum, Position };

/// Reduced state of the walker, M x M.
struct ReducedDensity {
  DenseMatrix matrix;
  Basis basis = Basis::Momentum;

  std::size_t ring_size() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// rho_P(k,k') = <sector_k' | sector_k>, momentum basis.
ReducedDensity reduced_density(const SystemState& state);

/// W rho W^dagger with W(x,k) = exp(+2 pi i x k / M) / sqrt(M).
ReducedDensity to_position_basis(const ReducedDensity& rho);

/// Reduced state of the coin, D x D, from walker amplitudes in any orthonormal walker
/// basis (one row per walker basis state). Rows with weight below 1e-28 are skipped.
DenseMatrix coin_density(const SectorMatrix& walker_rows);

/// Hermiticity, unit trace and eigenvalues >= -1e-9. Throws InvalidArgument otherwise.
void check_density(const DenseMatrix& rho, double tol = 1e-10);

double purity(const DenseMatrix& rho);

/// -log2 Tr[rho^2].
double linear_entropy(const DenseMatrix& rho);
double linear_entropy(const ReducedDensity& rho);

/// -sum lambda log2 lambda over eigenvalues above 1e-12. Throws GuardViolation if the
/// eigensolver fails.
double von_neumann_entropy(const DenseMatrix& rho);
double von_neumann_entropy(const ReducedDensity& rho);

/// Same values as the walker-side functions, computed from the (smaller) coin side.
/// The total state is pure so both reduced states share their nonzero spectrum.
double linear_entropy(const SystemState& state);
double von_neumann_entropy(const SystemState& state);

/// p(x) for x = 0..M-1.
std::vector<double> position_distribution(const SystemState& state);
std::vector<double> position_distribution(const SectorMatrix& position_amplitudes);
std::vector<double> position_distribution(const ReducedDensity& rho);

/// Signed position of ring index i: i for i < ceil(M/2), i - M otherwise.
long signed_position(std::size_t index, std::size_t ring_size);

/// sigma^2 = <x^2> - <x>^2 with signed positions. Throws GuardViolation when more than
/// 1e-8 probability sits beyond distance M/2 - 1 from the origin (the walk has wrapped).
double position_variance(std::span<const double> dist);

// --- Time series -----------------------------------------------------------

enum class Observable { LinearEntropy, VonNeumann, Variance, StdDev, WignerDistance };

std::string_view observable_name(Observable o);
Observable parse_observable(std::string_view name);

struct ObservableSeries {
  Observable label = Observable::LinearEntropy;
  std::vector<long> times;
  std::vector<double> values;

  /// Throws InvalidArgument unless t is larger than every recorded time.
  void append(long t, double value);
  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

/// Inclusive time window.
struct TimeWindow {
  long begin = 0;
  long end = 0;
};

/// Least-squares slope of the values against t over the window. Needs >= 10 samples.
double sd_slope(const ObservableSeries& series, TimeWindow window);

/// Least-squares slope of log(value) against log(t): the power-law growth exponent.
double growth_exponent(const ObservableSeries& series, TimeWindow window);

struct Saturation {
  double level = 0.0;
  std::optional<double> period;  // empty when the series does not oscillate
};

/// Mean over the window, plus the dominant oscillation period: the first positive
/// local maximum of the autocorrelation of (value - mean) past its first zero crossing,
/// refined by a parabola through the neighbouring lags.
Saturation entropy_saturation(const ObservableSeries& series, TimeWindow window,
                              std::size_t min_samples = 3);

/// Collapse check for regular-environment entropy curves: compares S_a(u N_a)/S0_a with
/// S_b(u N_b)/S0_b at every integer u >= u_min sampled by both series and returns the
/// largest absolute difference. Throws if no common point exists.
double max_rescaled_gap(const ObservableSeries& a, double level_a, int period_a,
                        const ObservableSeries& b, double level_b, int period_b, long u_min);

}  // namespace coinwalk
