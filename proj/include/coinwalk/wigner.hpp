#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "coinwalk/observables.hpp"

namespace coinwalk {

/// Sum of a discrete Wigner grid over all 2M x 2M cells for any unit-trace density.
inline constexpr double kWignerGridTotal = 2.0;

/// Discrete phase-space function on the 2M x 2M grid, values(q, p).
struct WignerGrid {
  std::size_t ring_size = 0;
  long time = 0;
  std::string label;
  Eigen::MatrixXd values;
  /// Largest |Im Tr[rho A(q,p)]| / M met while evaluating; zero for classical grids.
  double imag_residue = 0.0;

  double total() const { return values.sum(); }
};

/// A(q,p) = U^q R V^{-p} exp(i pi p q / M) in the position basis, with U|n> = |n+1>,
/// V|n> = exp(2 pi i n / M)|n> and R|n> = |-n>. Hermitian and unitary.
DenseMatrix phase_point_operator(int q, int p, std::size_t ring_size);

/// W(q,p) = Tr[rho A(q,p)] / M. `rho` must be in the position basis and Hermitian.
WignerGrid wigner_from_density(const ReducedDensity& rho);

/// Sums over p at even q: twice the position probability of site q/2.
std::vector<double> position_marginal(const WignerGrid& grid);
/// Sums over q at even p: twice the momentum probability of momentum p/2.
std::vector<double> momentum_marginal(const WignerGrid& grid);

struct ClassicalWalkDistribution {
  std::vector<double> probs;
  long time = 0;
};

/// Binomial law of the symmetric classical random walk after t steps, wrapped onto the ring.
ClassicalWalkDistribution classical_walk_distribution(std::size_t ring_size, long t);

/// Position law at even q, zero at odd q, flat in p; normalized like the quantum grids.
WignerGrid classical_phase_grid(const ClassicalWalkDistribution& dist);

/// Sum of squared cell differences.
double distance(const WignerGrid& a, const WignerGrid& b);

/// Header line "M t label", then 2M rows of 2M space-separated values.
void write_grid(std::ostream& out, const WignerGrid& grid);
WignerGrid read_grid(std::istream& in);

}  // namespace coinwalk
