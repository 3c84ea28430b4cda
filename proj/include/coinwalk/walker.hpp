#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "coinwalk/baker.hpp"

namespace coinwalk {

/// Single-qubit pure state a|0> + b|1>.
struct QubitState {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};

  static QubitState zero() { return {}; }
  /// (|0> + i|1>)/sqrt(2)
  static QubitState plus_i();
  /// (|0> + e^{i 3pi/4}|1>)/sqrt(2)
  static QubitState plus_3pi4();
};

/// Initial environment state: either a product of per-qubit states or an arbitrary
/// normalized vector.
///
/// A product spec can be expanded onto any dimension D: basis index j gets the
/// amplitude prod_bits (bit ? b : a) over ceil(log2 D) bits, renormalized over j < D.
/// For D = 2^N this is the tensor product itself.
class InitialCoinSpec {
 public:
  static InitialCoinSpec product(QubitState each);
  static InitialCoinSpec product(std::vector<QubitState> per_qubit);
  static InitialCoinSpec custom(CoinVector v);

  CoinVector vector(std::size_t dim) const;

 private:
  std::vector<QubitState> qubits_;
  bool uniform_ = false;
  CoinVector custom_;
};

/// The walker (x) coin pure state, stored as one coin vector per walker momentum k.
///
/// Sector k holds <k|Psi> where |k> = M^{-1/2} sum_x exp(+2 pi i x k / M) |x>, the
/// eigenvector of the position shift with eigenvalue exp(-2 pi i k / M).
struct SystemState {
  std::size_t ring_size = 0;
  long time = 0;
  SectorMatrix sectors;

  std::size_t dim() const { return static_cast<std::size_t>(sectors.cols()); }
  std::span<cplx> sector(std::size_t k) {
    return {sectors.row(static_cast<Eigen::Index>(k)).data(), dim()};
  }
  std::span<const cplx> sector(std::size_t k) const {
    return {sectors.row(static_cast<Eigen::Index>(k)).data(), dim()};
  }
  double norm_squared() const { return sectors.squaredNorm(); }
};

/// Walker localized at x = 0, coin in `coin` (must have unit norm within 1e-12).
SystemState init_state(std::size_t ring_size, const CoinVector& coin);
SystemState init_state(std::size_t ring_size, const InitialCoinSpec& coin, std::size_t dim);

/// One step of M_k = diag(e^{-i phi_k} on j < D/2, e^{+i phi_k} on j >= D/2) B, phi_k = 2 pi k / M.
void sector_step(std::span<cplx> sector, std::size_t k, std::size_t ring_size, const BakerMap& map);
/// Exact inverse of sector_step.
void sector_step_inverse(std::span<cplx> sector, std::size_t k, std::size_t ring_size,
                         const BakerMap& map);

/// Runs fn(begin, end) over a fixed partition of [0, count) on up to `threads` workers.
/// The partition does not depend on timing, so results are reproducible.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

/// Advances every sector `steps` times. Negative steps run the inverse evolution.
void evolve_in_place(SystemState& state, long steps, const BakerMap& map, int threads = 1);
SystemState evolve(SystemState state, long steps, const BakerMap& map, int threads = 1);

/// Walker position amplitudes: row x is the coin vector at site x.
SectorMatrix position_amplitudes(const SystemState& state);

/// Full position (x) coin vector, index x * D + c.
Eigen::VectorXcd position_vector(const SystemState& state);

// --- Dense full-space oracle ------------------------------------------------

inline constexpr std::size_t kMaxDenseSystemDim = 4096;

/// U|x> = |x+1 mod M>.
DenseMatrix position_shift_matrix(std::size_t ring_size);

/// (U (x) P0 + U^dagger (x) P1)(I (x) B) in the position (x) coin basis, index x * D + c.
DenseMatrix dense_walk_operator(std::size_t ring_size, const BakerMap& map);

/// Evolves |0> (x) coin with the dense walk operator. Throws GuardViolation if M*D > 4096.
Eigen::VectorXcd dense_oracle_evolve(std::size_t ring_size, const CoinVector& coin,
                                     const BakerSpec& spec, long steps);

}  // namespace coinwalk
