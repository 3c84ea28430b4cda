#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "coinwalk/types.hpp"

namespace coinwalk {

/// Phase offsets of the discrete Fourier transform. (0,0) is the ordinary DFT,
/// (0.5,0.5) the antiperiodic one.
struct FloquetAngles {
  double eta = 0.0;
  double kappa = 0.0;

  friend bool operator==(const FloquetAngles&, const FloquetAngles&) = default;
};

enum class Direction { Forward, Inverse };

/// An N-qubit register. Qubit 1 is the most significant bit of the basis index:
/// j = sum_i x_i 2^(N-i).
struct RegisterShape {
  int num_qubits = 0;

  std::size_t dim() const { return std::size_t{1} << num_qubits; }
  static RegisterShape for_dim(std::size_t dim);
};

/// Unnormalized DFT of arbitrary length, forward kernel exp(-2 pi i jk/n).
/// Powers of two use an iterative radix-2 transform; other lengths go through
/// Bluestein's chirp-z convolution on a power-of-two grid.
class Dft {
 public:
  explicit Dft(std::size_t n);

  std::size_t size() const { return n_; }

  void forward(std::span<cplx> data) const;
  void backward(std::span<cplx> data) const;

 private:
  void radix2(std::span<cplx> data) const;
  void bluestein(std::span<cplx> data) const;

  std::size_t n_;
  bool pow2_;
  std::vector<cplx> twiddles_;
  std::vector<std::uint32_t> bitrev_;
  // Bluestein state.
  std::vector<cplx> chirp_;
  std::vector<cplx> kernel_fft_;
  std::shared_ptr<const Dft> inner_;
};

/// The unitary F_D^{eta,kappa}, entry (k,j) = exp(-2 pi i (j+eta)(k+kappa)/D) / sqrt(D),
/// applied as phase * DFT * phase.
class FourierTransform {
 public:
  FourierTransform(std::size_t dim, FloquetAngles angles);

  std::size_t dim() const { return dft_.size(); }
  FloquetAngles angles() const { return angles_; }

  void apply(std::span<cplx> v, Direction dir = Direction::Forward) const;

 private:
  FloquetAngles angles_;
  Dft dft_;
  std::vector<cplx> pre_;   // exp(-2 pi i j kappa / D)
  std::vector<cplx> post_;  // exp(-2 pi i eta (k + kappa) / D) / sqrt(D)
};

/// G_n = I_{2^n} (x) F_{2^(N-n)}: the transform acts on the N-n least significant
/// qubits for every fixed value of the first n.
class PartialFourier {
 public:
  PartialFourier(RegisterShape shape, int fixed_qubits, FloquetAngles angles);

  std::size_t dim() const { return shape_.dim(); }
  int fixed_qubits() const { return fixed_; }

  void apply(std::span<cplx> v, Direction dir = Direction::Forward) const;

 private:
  RegisterShape shape_;
  int fixed_;
  FourierTransform block_;
};

/// Destination index of every basis state under the cyclic left shift of the first
/// n qubit labels: |x1 x2..xn rest> -> |x2..xn x1 rest>.
std::vector<std::uint32_t> qubit_shift_destinations(RegisterShape shape, int n);

DenseMatrix fourier_matrix(std::size_t dim, FloquetAngles angles);

CoinVector apply_fourier(const CoinVector& v, FloquetAngles angles,
                         Direction dir = Direction::Forward);

CoinVector partial_fourier(const CoinVector& v, RegisterShape shape, int n, FloquetAngles angles,
                           Direction dir = Direction::Forward);

CoinVector qubit_shift(const CoinVector& v, RegisterShape shape, int n);

/// max |U^dagger U - I| over all entries.
double unitarity_defect(const DenseMatrix& u);

}  // namespace coinwalk
