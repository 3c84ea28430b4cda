#include "coinwalk/wigner.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace coinwalk {
namespace {

// exp(i pi a / M) with a reduced mod 2M.
cplx half_root(long a, std::size_t ring) {
  const long two_m = 2 * static_cast<long>(ring);
  const long r = ((a % two_m) + two_m) % two_m;
  return std::polar(1.0, kPi * static_cast<double>(r) / static_cast<double>(ring));
}

}  // namespace

DenseMatrix phase_point_operator(int q, int p, std::size_t ring_size) {
  const auto m = static_cast<long>(ring_size);
  if (ring_size < 1 || q < 0 || p < 0 || q >= 2 * m || p >= 2 * m) {
    throw InvalidArgument("phase-point operator: (q,p) = (" + std::to_string(q) + "," +
                          std::to_string(p) + ") outside [0, 2M)");
  }
  // A|n> = exp(i pi p q / M) exp(-2 pi i p n / M) |q - n>
  DenseMatrix a = DenseMatrix::Zero(m, m);
  for (long n = 0; n < m; ++n) {
    const long row = (((q - n) % m) + m) % m;
    a(row, n) = half_root(static_cast<long>(p) * q - 2L * p * n, ring_size);
  }
  return a;
}

WignerGrid wigner_from_density(const ReducedDensity& rho) {
  if (rho.basis != Basis::Position) {
    throw InvalidArgument("Wigner function needs the density in the position basis");
  }
  const DenseMatrix& r = rho.matrix;
  if (r.rows() != r.cols() || r.rows() == 0) throw InvalidArgument("density must be square");
  if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidArgument("Wigner function: density matrix is not Hermitian");
  }
  const std::size_t ring = rho.ring_size();
  const auto m = static_cast<long>(ring);
  WignerGrid grid;
  grid.ring_size = ring;
  grid.values.resize(2 * m, 2 * m);

  // Tr[rho A(q,p)] = exp(i pi p q/M) sum_n rho(n, q-n) exp(-2 pi i p n / M); the sum is an
  // M-periodic DFT in p.
  const Dft dft(ring);
  std::vector<cplx> diag(ring);
  for (long q = 0; q < 2 * m; ++q) {
    for (long n = 0; n < m; ++n) diag[static_cast<std::size_t>(n)] = r(n, (((q - n) % m) + m) % m);
    dft.forward(diag);
    for (long p = 0; p < 2 * m; ++p) {
      const cplx w = half_root(p * q, ring) * diag[static_cast<std::size_t>(p % m)] /
                     static_cast<double>(m);
      grid.values(q, p) = w.real();
      grid.imag_residue = std::max(grid.imag_residue, std::abs(w.imag()));
    }
  }
  return grid;
}

std::vector<double> position_marginal(const WignerGrid& grid) {
  std::vector<double> out(grid.ring_size);
  for (std::size_t x = 0; x < grid.ring_size; ++x) {
    out[x] = grid.values.row(static_cast<Eigen::Index>(2 * x)).sum();
  }
  return out;
}

std::vector<double> momentum_marginal(const WignerGrid& grid) {
  std::vector<double> out(grid.ring_size);
  for (std::size_t k = 0; k < grid.ring_size; ++k) {
    out[k] = grid.values.col(static_cast<Eigen::Index>(2 * k)).sum();
  }
  return out;
}

ClassicalWalkDistribution classical_walk_distribution(std::size_t ring_size, long t) {
  if (ring_size < 1) throw InvalidArgument("ring size must be positive");
  if (t < 0) throw InvalidArgument("classical walk: time must be nonnegative");
  ClassicalWalkDistribution d;
  d.time = t;
  d.probs.assign(ring_size, 0.0);
  const auto m = static_cast<long>(ring_size);
  // log-space binomial weights stay finite for large t.
  const double log_norm = static_cast<double>(t) * std::log(2.0);
  for (long right = 0; right <= t; ++right) {
    const long x = 2 * right - t;
    const double log_w = std::lgamma(static_cast<double>(t) + 1.0) -
                         std::lgamma(static_cast<double>(right) + 1.0) -
                         std::lgamma(static_cast<double>(t - right) + 1.0) - log_norm;
    d.probs[static_cast<std::size_t>(((x % m) + m) % m)] += std::exp(log_w);
  }
  return d;
}

WignerGrid classical_phase_grid(const ClassicalWalkDistribution& dist) {
  const std::size_t ring = dist.probs.size();
  if (ring == 0) throw InvalidArgument("classical grid needs a nonempty distribution");
  const auto m = static_cast<Eigen::Index>(ring);
  WignerGrid grid;
  grid.ring_size = ring;
  grid.time = dist.time;
  grid.label = "classical";
  grid.values = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  // Each even row sums to 2 p(x), matching the quantum position marginal.
  for (Eigen::Index x = 0; x < m; ++x) {
    grid.values.row(2 * x).setConstant(dist.probs[static_cast<std::size_t>(x)] /
                                       static_cast<double>(ring));
  }
  return grid;
}

double distance(const WignerGrid& a, const WignerGrid& b) {
  if (a.ring_size != b.ring_size || a.values.rows() != b.values.rows() ||
      a.values.cols() != b.values.cols()) {
    throw InvalidArgument("distance: grids have different sizes");
  }
  return (a.values - b.values).squaredNorm();
}

void write_grid(std::ostream& out, const WignerGrid& grid) {
  out << grid.ring_size << ' ' << grid.time << ' ' << (grid.label.empty() ? "-" : grid.label)
      << '\n';
  char buf[40];
  for (Eigen::Index q = 0; q < grid.values.rows(); ++q) {
    for (Eigen::Index p = 0; p < grid.values.cols(); ++p) {
      std::snprintf(buf, sizeof buf, "%.15g", grid.values(q, p));
      if (p) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

WignerGrid read_grid(std::istream& in) {
  WignerGrid grid;
  std::string header;
  if (!std::getline(in, header)) throw InvalidArgument("grid: missing header line");
  std::istringstream hs(header);
  if (!(hs >> grid.ring_size >> grid.time >> grid.label) || grid.ring_size == 0) {
    throw InvalidArgument("grid: malformed header '" + header + "'");
  }
  const auto n = static_cast<Eigen::Index>(2 * grid.ring_size);
  grid.values.resize(n, n);
  for (Eigen::Index q = 0; q < n; ++q) {
    for (Eigen::Index p = 0; p < n; ++p) {
      if (!(in >> grid.values(q, p))) throw InvalidArgument("grid: truncated values");
    }
  }
  return grid;
}

}  // namespace coinwalk
