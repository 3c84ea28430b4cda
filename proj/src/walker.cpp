#include "coinwalk/walker.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

namespace coinwalk {
namespace {

// Sectors are handed out in fixed-size blocks so the floating-point work done for a
// sector never depends on the thread count.
constexpr std::size_t kSectorBlock = 64;

cplx phase_minus(std::size_t k, std::size_t ring_size) {
  return std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(ring_size));
}

void apply_msq_phases(std::span<cplx> v, cplx lower, cplx upper) {
  const std::size_t half = v.size() / 2;
  for (std::size_t j = 0; j < half; ++j) v[j] *= lower;
  for (std::size_t j = half; j < v.size(); ++j) v[j] *= upper;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void check_even(std::size_t dim) {
  if (dim % 2 != 0) {
    throw InvalidArgument("sector step: coin dimension " + std::to_string(dim) +
                          " is odd, MSQ halves are undefined");
  }
}

}  // namespace

QubitState QubitState::plus_i() {
  const double r = 1.0 / std::sqrt(2.0);
  return {cplx{r, 0.0}, cplx{0.0, r}};
}

QubitState QubitState::plus_3pi4() {
  const double r = 1.0 / std::sqrt(2.0);
  return {cplx{r, 0.0}, std::polar(r, 3.0 * kPi / 4.0)};
}

InitialCoinSpec InitialCoinSpec::product(QubitState each) {
  InitialCoinSpec spec;
  spec.qubits_ = {each};
  spec.uniform_ = true;
  return spec;
}

InitialCoinSpec InitialCoinSpec::product(std::vector<QubitState> per_qubit) {
  if (per_qubit.empty()) throw InvalidArgument("product coin needs at least one qubit state");
  InitialCoinSpec spec;
  spec.qubits_ = std::move(per_qubit);
  return spec;
}

InitialCoinSpec InitialCoinSpec::custom(CoinVector v) {
  InitialCoinSpec spec;
  spec.custom_ = std::move(v);
  return spec;
}

CoinVector InitialCoinSpec::vector(std::size_t dim) const {
  if (dim == 0) throw InvalidArgument("coin dimension must be positive");
  if (qubits_.empty()) {
    if (static_cast<std::size_t>(custom_.size()) != dim) {
      throw InvalidArgument("custom coin has dimension " + std::to_string(custom_.size()) +
                            ", expected " + std::to_string(dim));
    }
    if (std::abs(custom_.norm() - 1.0) > 1e-12) {
      throw InvalidArgument("custom coin is not normalized (norm " +
                            std::to_string(custom_.norm()) + ")");
    }
    return custom_;
  }
  for (const auto& q : qubits_) {
    if (std::abs(std::norm(q.a) + std::norm(q.b) - 1.0) > 1e-12) {
      throw InvalidArgument("qubit state is not normalized");
    }
  }
  const int bits = std::max(1, static_cast<int>(std::bit_width(dim - 1)));
  if (!uniform_ && static_cast<int>(qubits_.size()) != bits) {
    throw InvalidArgument("product coin lists " + std::to_string(qubits_.size()) +
                          " qubit states for a register of " + std::to_string(bits) + " qubits");
  }
  CoinVector v(static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    cplx amp{1.0, 0.0};
    for (int i = 0; i < bits; ++i) {
      // Qubit i (0-based from the most significant) reads bit bits-1-i of j.
      const auto& q = uniform_ ? qubits_.front() : qubits_[static_cast<std::size_t>(i)];
      amp *= ((j >> (bits - 1 - i)) & 1u) ? q.b : q.a;
    }
    v(static_cast<Eigen::Index>(j)) = amp;
  }
  const double norm = v.norm();
  if (norm == 0.0) throw InvalidArgument("product coin has no weight on the first D basis states");
  return v / norm;
}

// ---------------------------------------------------------------------------

SystemState init_state(std::size_t ring_size, const CoinVector& coin) {
  if (ring_size < 2) throw InvalidArgument("ring size must be >= 2");
  if (coin.size() == 0) throw InvalidArgument("coin vector is empty");
  if (std::abs(coin.norm() - 1.0) > 1e-12) {
    throw InvalidArgument("initial coin is not normalized (norm " + std::to_string(coin.norm()) +
                          ")");
  }
  SystemState state;
  state.ring_size = ring_size;
  state.time = 0;
  state.sectors.resize(static_cast<Eigen::Index>(ring_size), coin.size());
  const double w = 1.0 / std::sqrt(static_cast<double>(ring_size));
  for (Eigen::Index k = 0; k < state.sectors.rows(); ++k) state.sectors.row(k) = w * coin.transpose();
  return state;
}

SystemState init_state(std::size_t ring_size, const InitialCoinSpec& coin, std::size_t dim) {
  return init_state(ring_size, coin.vector(dim));
}

void sector_step(std::span<cplx> sector, std::size_t k, std::size_t ring_size, const BakerMap& map) {
  check_even(sector.size());
  map.apply(sector);
  const cplx lower = phase_minus(k, ring_size);
  apply_msq_phases(sector, lower, std::conj(lower));
}

void sector_step_inverse(std::span<cplx> sector, std::size_t k, std::size_t ring_size,
                         const BakerMap& map) {
  check_even(sector.size());
  const cplx lower = phase_minus(k, ring_size);
  apply_msq_phases(sector, std::conj(lower), lower);
  map.apply_inverse(sector);
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  const std::size_t blocks = (count + kSectorBlock - 1) / kSectorBlock;
  const auto workers =
      static_cast<std::size_t>(std::clamp<long>(threads, 1, static_cast<long>(std::max<std::size_t>(blocks, 1))));
  auto run = [&](std::size_t worker) {
    for (std::size_t b = worker; b < blocks; b += workers) {
      fn(b * kSectorBlock, std::min(count, (b + 1) * kSectorBlock));
    }
  };
  if (workers == 1) {
    run(0);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          run(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void evolve_in_place(SystemState& state, long steps, const BakerMap& map, int threads) {
  if (steps == 0) return;
  if (state.dim() != map.dim()) {
    throw InvalidArgument("evolve: state coin dimension " + std::to_string(state.dim()) +
                          " does not match map dimension " + std::to_string(map.dim()));
  }
  check_even(state.dim());
  const std::size_t ring = state.ring_size;
  const long count = std::labs(steps);
  const bool forward = steps > 0;
  const bool dense = std::holds_alternative<GeneralEven>(map.spec().variant);

  parallel_for(ring, threads, [&](std::size_t begin, std::size_t end) {
    if (!dense) {
      for (std::size_t k = begin; k < end; ++k) {
        auto sector = state.sector(k);
        for (long t = 0; t < count; ++t) {
          if (forward) {
            sector_step(sector, k, ring, map);
          } else {
            sector_step_inverse(sector, k, ring, map);
          }
        }
      }
      return;
    }
    // Dense maps: one matrix product per step for the whole block.
    const auto b = static_cast<Eigen::Index>(begin);
    const auto n = static_cast<Eigen::Index>(end - begin);
    SectorMatrix block = state.sectors.middleRows(b, n);
    const std::size_t dim = state.dim();
    for (long t = 0; t < count; ++t) {
      if (!forward) {
        for (Eigen::Index r = 0; r < n; ++r) {
          const cplx lower = phase_minus(begin + static_cast<std::size_t>(r), ring);
          apply_msq_phases({block.row(r).data(), dim}, std::conj(lower), lower);
        }
      }
      map.apply_rows(block, forward ? Direction::Forward : Direction::Inverse);
      if (forward) {
        for (Eigen::Index r = 0; r < n; ++r) {
          const cplx lower = phase_minus(begin + static_cast<std::size_t>(r), ring);
          apply_msq_phases({block.row(r).data(), dim}, lower, std::conj(lower));
        }
      }
    }
    state.sectors.middleRows(b, n) = block;
  });
  state.time += steps;
}

SystemState evolve(SystemState state, long steps, const BakerMap& map, int threads) {
  evolve_in_place(state, steps, map, threads);
  return state;
}

SectorMatrix position_amplitudes(const SystemState& state) {
  const std::size_t ring = state.ring_size;
  const std::size_t dim = state.dim();
  SectorMatrix out(static_cast<Eigen::Index>(ring), static_cast<Eigen::Index>(dim));
  const Dft dft(ring);
  std::vector<cplx> column(ring);
  const double scale = 1.0 / std::sqrt(static_cast<double>(ring));
  for (std::size_t c = 0; c < dim; ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    for (std::size_t k = 0; k < ring; ++k) column[k] = state.sectors(static_cast<Eigen::Index>(k), ci);
    // psi(x) = M^{-1/2} sum_k exp(+2 pi i x k / M) sector_k
    dft.backward(column);
    for (std::size_t x = 0; x < ring; ++x) out(static_cast<Eigen::Index>(x), ci) = column[x] * scale;
  }
  return out;
}

Eigen::VectorXcd position_vector(const SystemState& state) {
  const SectorMatrix amps = position_amplitudes(state);
  return Eigen::Map<const Eigen::VectorXcd>(amps.data(), amps.size());
}

// ---------------------------------------------------------------------------

DenseMatrix position_shift_matrix(std::size_t ring_size) {
  const auto m = static_cast<Eigen::Index>(ring_size);
  DenseMatrix u = DenseMatrix::Zero(m, m);
  for (Eigen::Index x = 0; x < m; ++x) u((x + 1) % m, x) = 1.0;
  return u;
}

DenseMatrix dense_walk_operator(std::size_t ring_size, const BakerMap& map) {
  const std::size_t dim = map.dim();
  check_even(dim);
  if (ring_size * dim > kMaxDenseSystemDim) {
    throw GuardViolation("dense oracle: M*D = " + std::to_string(ring_size * dim) +
                         " exceeds the cap " + std::to_string(kMaxDenseSystemDim));
  }
  const auto m = static_cast<Eigen::Index>(ring_size);
  const auto d = static_cast<Eigen::Index>(dim);
  const DenseMatrix u = position_shift_matrix(ring_size);
  DenseMatrix p0 = DenseMatrix::Zero(d, d);
  DenseMatrix p1 = DenseMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) (j < d / 2 ? p0 : p1)(j, j) = 1.0;
  const DenseMatrix shift = kron(u, p0) + kron(u.adjoint(), p1);
  const DenseMatrix coin = kron(DenseMatrix::Identity(m, m), map.dense());
  return shift * coin;
}

Eigen::VectorXcd dense_oracle_evolve(std::size_t ring_size, const CoinVector& coin,
                                     const BakerSpec& spec, long steps) {
  if (steps < 0) throw InvalidArgument("dense oracle: steps must be nonnegative");
  const BakerMap map(spec);
  if (static_cast<std::size_t>(coin.size()) != map.dim()) {
    throw InvalidArgument("dense oracle: coin dimension does not match the baker map");
  }
  const DenseMatrix op = dense_walk_operator(ring_size, map);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(op.rows());
  psi.head(coin.size()) = coin;
  for (long t = 0; t < steps; ++t) psi = (op * psi).eval();
  return psi;
}

}  // namespace coinwalk
