#include "coinwalk/hilbert.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace coinwalk {
namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<cplx>& scratch(std::size_t n) {
  thread_local std::vector<cplx> buf;
  if (buf.size() < n) buf.resize(n);
  return buf;
}

void require_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (expected " +
                          std::to_string(expected) + ", got " + std::to_string(got) + ")");
  }
}

}  // namespace

RegisterShape RegisterShape::for_dim(std::size_t dim) {
  if (!is_pow2(dim)) {
    throw InvalidArgument("register dimension " + std::to_string(dim) + " is not a power of two");
  }
  return RegisterShape{std::countr_zero(dim)};
}

// ---------------------------------------------------------------------------
// Dft

Dft::Dft(std::size_t n) : n_(n), pow2_(is_pow2(n)) {
  if (n == 0) throw InvalidArgument("invalid dimension: DFT length must be positive");
  if (pow2_) {
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      twiddles_[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
    }
    const int bits = std::countr_zero(n);
    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t r = 0;
      for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
      bitrev_[i] = r;
    }
    return;
  }
  const std::size_t m = std::bit_ceil(2 * n - 1);
  chirp_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    // j^2 mod 2n keeps the phase argument small.
    const auto sq = static_cast<double>((j * j) % (2 * n));
    chirp_[j] = std::polar(1.0, -kPi * sq / static_cast<double>(n));
  }
  kernel_fft_.assign(m, cplx{});
  kernel_fft_[0] = std::conj(chirp_[0]);
  for (std::size_t j = 1; j < n; ++j) {
    kernel_fft_[j] = std::conj(chirp_[j]);
    kernel_fft_[m - j] = std::conj(chirp_[j]);
  }
  inner_ = std::make_shared<const Dft>(m);
  inner_->forward(kernel_fft_);
}

void Dft::forward(std::span<cplx> data) const {
  require_dim(n_, data.size(), "Dft");
  if (n_ == 1) return;
  if (pow2_) {
    radix2(data);
  } else {
    bluestein(data);
  }
}

void Dft::backward(std::span<cplx> data) const {
  for (auto& x : data) x = std::conj(x);
  forward(data);
  for (auto& x : data) x = std::conj(x);
}

void Dft::radix2(std::span<cplx> a) const {
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + half] * twiddles_[k * step];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

void Dft::bluestein(std::span<cplx> data) const {
  const std::size_t m = inner_->size();
  // The inner transform is radix-2 and does not touch the scratch buffer.
  std::vector<cplx>& buf = scratch(m);
  std::span<cplx> work(buf.data(), m);
  for (std::size_t j = 0; j < n_; ++j) work[j] = data[j] * chirp_[j];
  for (std::size_t j = n_; j < m; ++j) work[j] = cplx{};
  inner_->forward(work);
  for (std::size_t j = 0; j < m; ++j) work[j] *= kernel_fft_[j];
  inner_->backward(work);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n_; ++k) data[k] = work[k] * chirp_[k] * inv_m;
}

// ---------------------------------------------------------------------------
// FourierTransform

FourierTransform::FourierTransform(std::size_t dim, FloquetAngles angles)
    : angles_(angles), dft_(dim), pre_(dim), post_(dim) {
  const double d = static_cast<double>(dim);
  const double scale = 1.0 / std::sqrt(d);
  for (std::size_t j = 0; j < dim; ++j) {
    const double jd = static_cast<double>(j);
    pre_[j] = std::polar(1.0, -2.0 * kPi * jd * angles.kappa / d);
    post_[j] = std::polar(scale, -2.0 * kPi * angles.eta * (jd + angles.kappa) / d);
  }
}

void FourierTransform::apply(std::span<cplx> v, Direction dir) const {
  require_dim(dim(), v.size(), "FourierTransform");
  const std::size_t n = v.size();
  if (dir == Direction::Forward) {
    for (std::size_t j = 0; j < n; ++j) v[j] *= pre_[j];
    dft_.forward(v);
    for (std::size_t k = 0; k < n; ++k) v[k] *= post_[k];
  } else {
    for (std::size_t k = 0; k < n; ++k) v[k] *= std::conj(post_[k]);
    dft_.backward(v);
    for (std::size_t j = 0; j < n; ++j) v[j] *= std::conj(pre_[j]);
  }
}

// ---------------------------------------------------------------------------
// PartialFourier

PartialFourier::PartialFourier(RegisterShape shape, int fixed_qubits, FloquetAngles angles)
    : shape_(shape),
      fixed_(fixed_qubits),
      block_((fixed_qubits >= 0 && fixed_qubits <= shape.num_qubits)
                 ? std::size_t{1} << (shape.num_qubits - fixed_qubits)
                 : throw InvalidArgument("partial Fourier: n=" + std::to_string(fixed_qubits) +
                                         " outside [0, " + std::to_string(shape.num_qubits) + "]"),
             angles) {}

void PartialFourier::apply(std::span<cplx> v, Direction dir) const {
  require_dim(dim(), v.size(), "PartialFourier");
  const std::size_t block = block_.dim();
  for (std::size_t offset = 0; offset < v.size(); offset += block) {
    block_.apply(v.subspan(offset, block), dir);
  }
}

// ---------------------------------------------------------------------------

std::vector<std::uint32_t> qubit_shift_destinations(RegisterShape shape, int n) {
  const int nq = shape.num_qubits;
  if (n < 1 || n > nq) {
    throw InvalidArgument("qubit shift: n=" + std::to_string(n) + " outside [1, " +
                          std::to_string(nq) + "]");
  }
  const int low_bits = nq - n;
  const std::uint32_t low_mask = (std::uint32_t{1} << low_bits) - 1;
  const std::uint32_t top_mask = (std::uint32_t{1} << n) - 1;
  std::vector<std::uint32_t> dest(shape.dim());
  for (std::uint32_t j = 0; j < dest.size(); ++j) {
    const std::uint32_t top = j >> low_bits;
    // x1 is the top bit of `top`; rotating left moves it to the bottom of the n-bit field.
    const std::uint32_t rotated = ((top << 1) & top_mask) | (top >> (n - 1));
    dest[j] = (rotated << low_bits) | (j & low_mask);
  }
  return dest;
}

DenseMatrix fourier_matrix(std::size_t dim, FloquetAngles angles) {
  if (dim == 0) throw InvalidArgument("invalid dimension: Fourier matrix needs D >= 1");
  const double d = static_cast<double>(dim);
  DenseMatrix f(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double phase = -2.0 * kPi * (static_cast<double>(j) + angles.eta) *
                           (static_cast<double>(k) + angles.kappa) / d;
      f(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          std::polar(1.0 / std::sqrt(d), phase);
    }
  }
  return f;
}

CoinVector apply_fourier(const CoinVector& v, FloquetAngles angles, Direction dir) {
  CoinVector out = v;
  FourierTransform(static_cast<std::size_t>(v.size()), angles)
      .apply(std::span<cplx>(out.data(), static_cast<std::size_t>(out.size())), dir);
  return out;
}

CoinVector partial_fourier(const CoinVector& v, RegisterShape shape, int n, FloquetAngles angles,
                           Direction dir) {
  require_dim(shape.dim(), static_cast<std::size_t>(v.size()), "partial_fourier");
  CoinVector out = v;
  PartialFourier(shape, n, angles)
      .apply(std::span<cplx>(out.data(), static_cast<std::size_t>(out.size())), dir);
  return out;
}

CoinVector qubit_shift(const CoinVector& v, RegisterShape shape, int n) {
  require_dim(shape.dim(), static_cast<std::size_t>(v.size()), "qubit_shift");
  const auto dest = qubit_shift_destinations(shape, n);
  CoinVector out(v.size());
  for (std::size_t j = 0; j < dest.size(); ++j) out(dest[j]) = v(static_cast<Eigen::Index>(j));
  return out;
}

double unitarity_defect(const DenseMatrix& u) {
  if (u.rows() != u.cols()) throw InvalidArgument("unitarity check needs a square matrix");
  const DenseMatrix gram = u.adjoint() * u;
  return (gram - DenseMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace coinwalk
