#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "coinwalk/hilbert.hpp"

using namespace coinwalk;

namespace {

CoinVector random_unit(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CoinVector v(static_cast<Eigen::Index>(d));
  for (auto& x : v) x = {g(rng), g(rng)};
  return v.normalized();
}

double max_abs(const CoinVector& a, const CoinVector& b) { return (a - b).cwiseAbs().maxCoeff(); }

DenseMatrix kron_identity(std::size_t left, const DenseMatrix& right) {
  const auto r = right.rows();
  DenseMatrix out = DenseMatrix::Zero(static_cast<Eigen::Index>(left) * r,
                                      static_cast<Eigen::Index>(left) * r);
  for (std::size_t b = 0; b < left; ++b) {
    out.block(static_cast<Eigen::Index>(b) * r, static_cast<Eigen::Index>(b) * r, r, r) = right;
  }
  return out;
}

DenseMatrix shift_matrix(RegisterShape shape, int n) {
  const auto d = static_cast<Eigen::Index>(shape.dim());
  DenseMatrix s(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    CoinVector e = CoinVector::Unit(d, j);
    s.col(j) = qubit_shift(e, shape, n);
  }
  return s;
}

}  // namespace

TEST_CASE("fourier_matrix small cases") {
  const double r = 1.0 / std::sqrt(2.0);
  const DenseMatrix h = fourier_matrix(2, {0.0, 0.0});
  CHECK(std::abs(h(0, 0) - r) < 1e-15);
  CHECK(std::abs(h(0, 1) - r) < 1e-15);
  CHECK(std::abs(h(1, 0) - r) < 1e-15);
  CHECK(std::abs(h(1, 1) + r) < 1e-15);

  const FloquetAngles a{0.3, 0.7};
  const DenseMatrix one = fourier_matrix(1, a);
  CHECK(std::abs(one(0, 0) - std::polar(1.0, -2.0 * kPi * 0.3 * 0.7)) < 1e-15);

  CHECK(unitarity_defect(fourier_matrix(6, {0.5, 0.5})) < 1e-12);
  CHECK_THROWS_AS(fourier_matrix(0, {}), InvalidArgument);
}

TEST_CASE("fourier_matrix is unitary for every dimension") {
  for (std::size_t d = 1; d <= 40; ++d) {
    for (FloquetAngles a : {FloquetAngles{0, 0}, FloquetAngles{0.5, 0.5}, FloquetAngles{0.2, 0.9}}) {
      CHECK(unitarity_defect(fourier_matrix(d, a)) < 1e-10);
    }
  }
  CHECK(unitarity_defect(fourier_matrix(130, {0.5, 0.5})) < 1e-10);
}

TEST_CASE("apply_fourier matches the dense matrix") {
  std::mt19937_64 rng(7);
  for (std::size_t d = 1; d <= 32; ++d) {
    for (FloquetAngles a : {FloquetAngles{0, 0}, FloquetAngles{0.5, 0.5}}) {
      const DenseMatrix f = fourier_matrix(d, a);
      double worst = 0.0;
      for (int trial = 0; trial < 100; ++trial) {
        const CoinVector v = random_unit(d, rng);
        worst = std::max(worst, max_abs(apply_fourier(v, a), f * v));
        worst = std::max(worst, max_abs(apply_fourier(v, a, Direction::Inverse), f.adjoint() * v));
      }
      CAPTURE(d);
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("apply_fourier on non-power-of-two lengths used by the ring") {
  std::mt19937_64 rng(11);
  for (std::size_t d : {130u, 802u, 1000u}) {
    const CoinVector v = random_unit(d, rng);
    const DenseMatrix f = fourier_matrix(d, {0.5, 0.5});
    CHECK(max_abs(apply_fourier(v, {0.5, 0.5}), f * v) < 1e-12);
  }
}

TEST_CASE("apply_fourier round trip and Hadamard column") {
  std::mt19937_64 rng(3);
  for (std::size_t d : {2u, 5u, 8u, 12u, 64u}) {
    const CoinVector v = random_unit(d, rng);
    const FloquetAngles a{0.5, 0.5};
    CHECK(max_abs(apply_fourier(apply_fourier(v, a), a, Direction::Inverse), v) < 1e-10);
  }
  CoinVector e(2);
  e << 1.0, 0.0;
  const CoinVector h = apply_fourier(e, {});
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(h(0) - r) < 1e-15);
  CHECK(std::abs(h(1) - r) < 1e-15);
}

TEST_CASE("FourierTransform rejects a mismatched vector") {
  const FourierTransform f(8, {});
  std::vector<cplx> v(6);
  CHECK_THROWS_AS(f.apply(v), InvalidArgument);
}

TEST_CASE("partial_fourier") {
  std::mt19937_64 rng(5);
  const FloquetAngles a{0.5, 0.5};

  SUBCASE("n = 0 is the full transform") {
    const RegisterShape s{4};
    const CoinVector v = random_unit(16, rng);
    CHECK(max_abs(partial_fourier(v, s, 0, a), apply_fourier(v, a)) < 1e-12);
  }
  SUBCASE("N = 3, n = 1 is I_2 (x) F_4") {
    const RegisterShape s{3};
    const DenseMatrix oracle = kron_identity(2, fourier_matrix(4, a));
    for (int trial = 0; trial < 10; ++trial) {
      const CoinVector v = random_unit(8, rng);
      CHECK(max_abs(partial_fourier(v, s, 1, a), oracle * v) < 1e-12);
      CHECK(max_abs(partial_fourier(v, s, 1, a, Direction::Inverse), oracle.adjoint() * v) < 1e-12);
    }
  }
  SUBCASE("n = N with zero angles is the identity") {
    const RegisterShape s{3};
    const CoinVector v = random_unit(8, rng);
    CHECK(max_abs(partial_fourier(v, s, 3, {}), v) < 1e-15);
  }
  SUBCASE("n out of range") {
    const RegisterShape s{3};
    const CoinVector v = random_unit(8, rng);
    CHECK_THROWS_AS(partial_fourier(v, s, 4, a), InvalidArgument);
    CHECK_THROWS_AS(partial_fourier(v, s, -1, a), InvalidArgument);
  }
}

TEST_CASE("qubit_shift") {
  std::mt19937_64 rng(9);
  const CoinVector v = random_unit(8, rng);
  CHECK(max_abs(qubit_shift(v, RegisterShape{3}, 1), v) == 0.0);

  CoinVector e1 = CoinVector::Unit(4, 1);  // |01>
  const CoinVector moved = qubit_shift(e1, RegisterShape{2}, 2);
  CHECK(moved(2) == cplx(1.0, 0.0));
  CHECK(moved.squaredNorm() == 1.0);

  CoinVector w = v;
  for (int i = 0; i < 3; ++i) w = qubit_shift(w, RegisterShape{3}, 3);
  CHECK(max_abs(w, v) == 0.0);

  // |x1 x2 x3> -> |x2 x3 x1> for n = 3: index 4 = |100> goes to |001> = 1.
  CHECK(qubit_shift(CoinVector::Unit(8, 4), RegisterShape{3}, 3)(1) == cplx(1.0, 0.0));
  CHECK(qubit_shift(v, RegisterShape{3}, 2).norm() == doctest::Approx(v.norm()).epsilon(1e-15));
  CHECK_THROWS_AS(qubit_shift(v, RegisterShape{3}, 0), InvalidArgument);
  CHECK_THROWS_AS(qubit_shift(v, RegisterShape{3}, 4), InvalidArgument);
}

TEST_CASE("partial transform commutes with shifts on the fixed labels") {
  for (int nq = 1; nq <= 4; ++nq) {
    const RegisterShape s{nq};
    for (int n = 1; n <= nq; ++n) {
      for (FloquetAngles a : {FloquetAngles{0, 0}, FloquetAngles{0.5, 0.5}}) {
        const DenseMatrix g = kron_identity(std::size_t{1} << n, fourier_matrix(s.dim() >> n, a));
        for (int m = 1; m <= n; ++m) {
          const DenseMatrix sh = shift_matrix(s, m);
          CAPTURE(nq);
          CAPTURE(n);
          CAPTURE(m);
          CHECK((g * sh - sh * g).cwiseAbs().maxCoeff() < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("RegisterShape::for_dim") {
  CHECK(RegisterShape::for_dim(128).num_qubits == 7);
  CHECK(RegisterShape::for_dim(1).num_qubits == 0);
  CHECK_THROWS_AS(RegisterShape::for_dim(130), InvalidArgument);
}
