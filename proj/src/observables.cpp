#include "coinwalk/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace coinwalk {
namespace {

constexpr double kEigenFloor = 1e-12;
constexpr double kSkipRowWeight = 1e-28;
constexpr double kWrapProbability = 1e-8;

DenseMatrix momentum_to_position(std::size_t ring) {
  const auto m = static_cast<Eigen::Index>(ring);
  DenseMatrix w(m, m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(ring));
  for (Eigen::Index x = 0; x < m; ++x) {
    for (Eigen::Index k = 0; k < m; ++k) {
      // x*k mod M keeps the argument small for large rings.
      const auto xk = static_cast<double>((x * k) % m);
      w(x, k) = std::polar(scale, 2.0 * kPi * xk / static_cast<double>(ring));
    }
  }
  return w;
}

std::vector<std::size_t> window_indices(const ObservableSeries& s, TimeWindow w) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    if (s.times[i] >= w.begin && s.times[i] <= w.end) idx.push_back(i);
  }
  return idx;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw InvalidArgument("slope fit: all abscissae coincide");
  return sxy / sxx;
}

}  // namespace

ReducedDensity reduced_density(const SystemState& state) {
  ReducedDensity rho;
  rho.matrix = state.sectors * state.sectors.adjoint();
  rho.basis = Basis::Momentum;
  return rho;
}

ReducedDensity to_position_basis(const ReducedDensity& rho) {
  if (rho.basis == Basis::Position) return rho;
  const DenseMatrix w = momentum_to_position(rho.ring_size());
  return ReducedDensity{w * rho.matrix * w.adjoint(), Basis::Position};
}

DenseMatrix coin_density(const SectorMatrix& walker_rows) {
  const Eigen::Index d = walker_rows.cols();
  std::vector<Eigen::Index> kept;
  kept.reserve(static_cast<std::size_t>(walker_rows.rows()));
  for (Eigen::Index r = 0; r < walker_rows.rows(); ++r) {
    if (walker_rows.row(r).squaredNorm() >= kSkipRowWeight) kept.push_back(r);
  }
  SectorMatrix rows(static_cast<Eigen::Index>(kept.size()), d);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    rows.row(static_cast<Eigen::Index>(i)) = walker_rows.row(kept[i]);
  }
  // rho(c,c') = sum_x psi_x(c) conj(psi_x(c'))
  DenseMatrix rho = DenseMatrix::Zero(d, d);
  rho.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose());
  rho.triangularView<Eigen::StrictlyUpper>() = rho.adjoint();
  return rho;
}

void check_density(const DenseMatrix& rho, double tol) {
  if (rho.rows() != rho.cols()) throw InvalidArgument("density matrix is not square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw InvalidArgument("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > tol) {
    throw InvalidArgument("density matrix trace " + std::to_string(rho.trace().real()) + " != 1");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw GuardViolation("eigensolver failed on density matrix");
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw InvalidArgument("density matrix has a negative eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
  }
}

double purity(const DenseMatrix& rho) { return rho.cwiseAbs2().sum(); }

double linear_entropy(const DenseMatrix& rho) { return -std::log2(purity(rho)); }

double linear_entropy(const ReducedDensity& rho) { return linear_entropy(rho.matrix); }

double von_neumann_entropy(const DenseMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw GuardViolation("eigensolver failed while computing the von Neumann entropy");
  }
  double s = 0.0;
  for (double lambda : es.eigenvalues()) {
    if (lambda > kEigenFloor) s -= lambda * std::log2(lambda);
  }
  return s;
}

double von_neumann_entropy(const ReducedDensity& rho) { return von_neumann_entropy(rho.matrix); }

double linear_entropy(const SystemState& state) {
  return linear_entropy(coin_density(position_amplitudes(state)));
}

double von_neumann_entropy(const SystemState& state) {
  return von_neumann_entropy(coin_density(position_amplitudes(state)));
}

std::vector<double> position_distribution(const SectorMatrix& position_amplitudes) {
  std::vector<double> p(static_cast<std::size_t>(position_amplitudes.rows()));
  for (Eigen::Index x = 0; x < position_amplitudes.rows(); ++x) {
    p[static_cast<std::size_t>(x)] = position_amplitudes.row(x).squaredNorm();
  }
  return p;
}

std::vector<double> position_distribution(const SystemState& state) {
  return position_distribution(position_amplitudes(state));
}

std::vector<double> position_distribution(const ReducedDensity& rho) {
  const ReducedDensity pos = to_position_basis(rho);
  std::vector<double> p(pos.ring_size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    p[x] = pos.matrix(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)).real();
  }
  return p;
}

long signed_position(std::size_t index, std::size_t ring_size) {
  const std::size_t upper = (ring_size + 1) / 2;
  return index < upper ? static_cast<long>(index)
                       : static_cast<long>(index) - static_cast<long>(ring_size);
}

double position_variance(std::span<const double> dist) {
  const std::size_t ring = dist.size();
  if (ring == 0) throw InvalidArgument("variance of an empty distribution");
  const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-8) {
    throw InvalidArgument("distribution is not normalized (sum " + std::to_string(total) + ")");
  }
  // Sites up to M/2 - 1 are reachable without wrapping when M >= 2t + 2.
  const double edge = static_cast<double>(ring) / 2.0 - 1.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < ring; ++i) {
    const auto x = static_cast<double>(signed_position(i, ring));
    if (std::abs(x) > edge && dist[i] > kWrapProbability) {
      throw GuardViolation("wrap-around: probability " + std::to_string(dist[i]) +
                           " at position " + std::to_string(static_cast<long>(x)) +
                           " on a ring of " + std::to_string(ring) + " sites (need M >= 2t+2)");
    }
    m1 += x * dist[i];
    m2 += x * x * dist[i];
  }
  return m2 - m1 * m1;
}

// ---------------------------------------------------------------------------

std::string_view observable_name(Observable o) {
  switch (o) {
    case Observable::LinearEntropy: return "linear_entropy_bits";
    case Observable::VonNeumann: return "von_neumann_bits";
    case Observable::Variance: return "variance";
    case Observable::StdDev: return "std_dev";
    case Observable::WignerDistance: return "wigner_distance";
  }
  return "unknown";
}

Observable parse_observable(std::string_view name) {
  for (auto o : {Observable::LinearEntropy, Observable::VonNeumann, Observable::Variance,
                 Observable::StdDev, Observable::WignerDistance}) {
    if (observable_name(o) == name) return o;
  }
  throw InvalidArgument("unknown observable '" + std::string(name) + "'");
}

void ObservableSeries::append(long t, double value) {
  if (!times.empty() && t <= times.back()) {
    throw InvalidArgument("series times must be strictly increasing");
  }
  times.push_back(t);
  values.push_back(value);
}

double sd_slope(const ObservableSeries& series, TimeWindow window) {
  const auto idx = window_indices(series, window);
  if (idx.size() < 10) {
    throw InvalidArgument("sd_slope: " + std::to_string(idx.size()) +
                          " samples in window, need at least 10");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (auto i : idx) {
    x.push_back(static_cast<double>(series.times[i]));
    y.push_back(series.values[i]);
  }
  return fit_slope(x, y);
}

double growth_exponent(const ObservableSeries& series, TimeWindow window) {
  std::vector<double> x;
  std::vector<double> y;
  for (auto i : window_indices(series, window)) {
    if (series.times[i] <= 0 || series.values[i] <= 0.0) {
      throw InvalidArgument("growth exponent: log-log fit needs positive times and values");
    }
    x.push_back(std::log(static_cast<double>(series.times[i])));
    y.push_back(std::log(series.values[i]));
  }
  if (x.size() < 2) throw InvalidArgument("growth exponent: need at least 2 samples");
  return fit_slope(x, y);
}

Saturation entropy_saturation(const ObservableSeries& series, TimeWindow window,
                              std::size_t min_samples) {
  const auto idx = window_indices(series, window);
  if (idx.size() < std::max<std::size_t>(min_samples, 1)) {
    throw InvalidArgument("entropy_saturation: " + std::to_string(idx.size()) +
                          " samples in window, need at least " + std::to_string(min_samples));
  }
  Saturation out;
  double sum = 0.0;
  for (auto i : idx) sum += series.values[i];
  out.level = sum / static_cast<double>(idx.size());

  // Autocorrelation over the leading uniformly spaced part of the window.
  std::size_t len = std::min<std::size_t>(idx.size(), 2);
  const long spacing = idx.size() >= 2 ? series.times[idx[1]] - series.times[idx[0]] : 1;
  while (len < idx.size() && series.times[idx[len]] - series.times[idx[len - 1]] == spacing) ++len;
  if (len < 4) return out;

  std::vector<double> x(len);
  double mean = 0.0;
  for (std::size_t i = 0; i < len; ++i) mean += series.values[idx[i]];
  mean /= static_cast<double>(len);
  double energy = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    x[i] = series.values[idx[i]] - mean;
    energy += x[i] * x[i];
  }
  if (energy <= 1e-24 * static_cast<double>(len)) return out;

  const std::size_t max_lag = len / 2;
  std::vector<double> r(max_lag + 2, 0.0);
  for (std::size_t lag = 0; lag < r.size() && lag < len; ++lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < len; ++i) acc += x[i] * x[i + lag];
    r[lag] = acc / energy;
  }
  std::size_t lag = 1;
  while (lag <= max_lag && r[lag] >= 0.0) ++lag;
  for (; lag <= max_lag; ++lag) {
    if (r[lag] > 0.0 && r[lag] >= r[lag - 1] && r[lag] > r[lag + 1]) {
      const double denom = r[lag - 1] - 2.0 * r[lag] + r[lag + 1];
      const double shift = denom != 0.0 ? 0.5 * (r[lag - 1] - r[lag + 1]) / denom : 0.0;
      out.period = (static_cast<double>(lag) + shift) * static_cast<double>(spacing);
      break;
    }
  }
  return out;
}

double max_rescaled_gap(const ObservableSeries& a, double level_a, int period_a,
                        const ObservableSeries& b, double level_b, int period_b, long u_min) {
  if (period_a < 1 || period_b < 1) throw InvalidArgument("rescaling periods must be positive");
  if (level_a <= 0.0 || level_b <= 0.0) throw InvalidArgument("saturation levels must be positive");
  std::map<long, double> by_u_a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.times[i] % period_a == 0) by_u_a[a.times[i] / period_a] = a.values[i] / level_a;
  }
  double gap = -1.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.times[i] % period_b != 0) continue;
    const long u = b.times[i] / period_b;
    if (u < u_min) continue;
    const auto it = by_u_a.find(u);
    if (it == by_u_a.end()) continue;
    gap = std::max(gap, std::abs(it->second - b.values[i] / level_b));
  }
  if (gap < 0.0) throw InvalidArgument("rescaled curves share no sample points");
  return gap;
}

}  // namespace coinwalk
