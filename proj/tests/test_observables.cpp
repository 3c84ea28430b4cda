#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "coinwalk/observables.hpp"
#include "coinwalk/walker.hpp"
#include "coinwalk/wigner.hpp"

using namespace coinwalk;

namespace {

DenseMatrix random_density(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  DenseMatrix a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = {g(rng), g(rng)};
  DenseMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

ObservableSeries series_of(long t0, long t1, const std::function<double(long)>& f) {
  ObservableSeries s;
  for (long t = t0; t <= t1; ++t) s.append(t, f(t));
  return s;
}

}  // namespace

TEST_CASE("reduced density at t = 0") {
  const std::size_t m = 6;
  const SystemState s =
      init_state(m, InitialCoinSpec::product(QubitState::plus_i()).vector(8));
  const ReducedDensity rho = reduced_density(s);
  CHECK(rho.basis == Basis::Momentum);
  CHECK((rho.matrix.array() - cplx(1.0 / m)).abs().maxCoeff() < 1e-14);
  CHECK(std::abs(purity(rho.matrix) - 1.0) < 1e-12);
  CHECK(std::abs(linear_entropy(rho)) < 1e-12);
  CHECK(std::abs(von_neumann_entropy(rho)) < 1e-9);
  CHECK(std::abs(linear_entropy(s)) < 1e-12);
}

TEST_CASE("entropies of standard states") {
  const DenseMatrix mixed = DenseMatrix::Identity(4, 4) / 4.0;
  CHECK(linear_entropy(mixed) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(mixed) == doctest::Approx(2.0).epsilon(1e-12));
  DenseMatrix pure = DenseMatrix::Zero(4, 4);
  pure(1, 1) = 1.0;
  CHECK(std::abs(linear_entropy(pure)) < 1e-15);
  CHECK(std::abs(von_neumann_entropy(pure)) < 1e-12);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const DenseMatrix rho = random_density(4, rng);
    check_density(rho);
    CHECK(von_neumann_entropy(rho) >= linear_entropy(rho) - 1e-9);
  }
  DenseMatrix not_hermitian = mixed;
  not_hermitian(0, 1) = 0.3;
  CHECK_THROWS_AS(check_density(not_hermitian), InvalidArgument);
}

TEST_CASE("walker-side and coin-side entropies agree") {
  const BakerMap map(BakerSpec::qubit(3, 1, {0.5, 0.5}));
  SystemState s = init_state(10, InitialCoinSpec::product(QubitState::plus_i()).vector(8));
  evolve_in_place(s, 4, map);
  const ReducedDensity walker = reduced_density(s);
  check_density(walker.matrix);
  CHECK(std::abs(linear_entropy(walker) - linear_entropy(s)) < 1e-10);
  CHECK(std::abs(von_neumann_entropy(walker) - von_neumann_entropy(s)) < 1e-8);
}

TEST_CASE("entropy bounds along a run") {
  for (const auto& spec : {BakerSpec::qubit(4, 2, {0.5, 0.5}), BakerSpec::qubit(4, 4, {}),
                           BakerSpec::even(10, {0.5, 0.5})}) {
    const BakerMap map(spec);
    SystemState s = init_state(64, InitialCoinSpec::product(QubitState::plus_3pi4()).vector(map.dim()));
    const double cap = std::log2(double(map.dim()));
    for (int t = 0; t < 30; ++t) {
      const double sl = linear_entropy(s);
      const double sv = von_neumann_entropy(s);
      CHECK(sl >= -1e-12);
      CHECK(sl <= cap + 1e-9);
      CHECK(sl <= sv + 1e-9);
      const auto p = position_distribution(s);
      double total = 0.0;
      for (double x : p) {
        CHECK(x >= -1e-10);
        total += x;
      }
      CHECK(std::abs(total - 1.0) < 1e-10);
      evolve_in_place(s, 1, map);
    }
  }
}

TEST_CASE("position distribution from the walker density") {
  const BakerMap map(BakerSpec::qubit(2, 1, {0.5, 0.5}));
  SystemState s = init_state(12, InitialCoinSpec::product(QubitState::plus_i()).vector(4));
  evolve_in_place(s, 5, map);
  const auto direct = position_distribution(s);
  const auto via_rho = position_distribution(reduced_density(s));
  for (std::size_t x = 0; x < direct.size(); ++x) CHECK(std::abs(direct[x] - via_rho[x]) < 1e-12);
}

TEST_CASE("position_variance") {
  std::vector<double> delta(16, 0.0);
  delta[0] = 1.0;
  CHECK(position_variance(delta) == 0.0);

  std::vector<double> pm(16, 0.0);
  pm[1] = 0.5;
  pm[15] = 0.5;
  CHECK(position_variance(pm) == doctest::Approx(1.0).epsilon(1e-15));

  const auto binom = classical_walk_distribution(402, 100);
  CHECK(std::abs(position_variance(binom.probs) - 100.0) < 1e-6);

  // Distance M/2 - 1 is the farthest a walk on M >= 2t + 2 sites reaches; beyond it has wrapped.
  std::vector<double> edge(16, 0.0);
  edge[0] = 0.9;
  edge[7] = 0.1;
  CHECK(position_variance(edge) == doctest::Approx(0.9 * 0.0 + 0.1 * 49.0 - 0.49));
  std::vector<double> wrapped(16, 0.0);
  wrapped[0] = 0.9;
  wrapped[8] = 0.1;
  CHECK_THROWS_AS(position_variance(wrapped), GuardViolation);
  std::vector<double> odd(15, 0.0);
  odd[0] = 0.5;
  odd[8] = 0.5;  // signed -7, beyond 15/2 - 1
  CHECK_THROWS_AS(position_variance(odd), GuardViolation);

  CHECK(signed_position(0, 5) == 0);
  CHECK(signed_position(2, 5) == 2);
  CHECK(signed_position(3, 5) == -2);
  CHECK(signed_position(3, 6) == -3);
}

TEST_CASE("sd_slope and growth_exponent") {
  const auto linear = series_of(0, 50, [](long t) { return 0.3 * double(t); });
  CHECK(std::abs(sd_slope(linear, {10, 50}) - 0.3) < 1e-12);
  const auto flat = series_of(0, 50, [](long) { return 1.7; });
  CHECK(std::abs(sd_slope(flat, {0, 50})) < 1e-12);
  CHECK_THROWS_AS(sd_slope(flat, {0, 5}), InvalidArgument);

  const auto root = series_of(1, 20, [](long t) { return 2.0 * std::sqrt(double(t)); });
  CHECK(std::abs(growth_exponent(root, {2, 7}) - 0.5) < 1e-12);
}

TEST_CASE("Hadamard walk spreading rate") {
  const BakerMap map(BakerSpec::qubit(1, 1, {}));
  SystemState s = init_state(512, InitialCoinSpec::product(QubitState::zero()).vector(2));
  ObservableSeries sd{Observable::StdDev, {}, {}};
  for (long t = 0; t <= 200; ++t) {
    sd.append(t, std::sqrt(position_variance(position_distribution(s))));
    evolve_in_place(s, 1, map);
  }
  const double slope = sd_slope(sd, {100, 200});
  const double expected = (3.0 - 2.0 * std::sqrt(2.0) + 1.0) / (4.0 * std::sqrt(2.0));
  CHECK(std::abs(slope * slope - expected) < 0.1 * expected);
  CHECK(growth_exponent(sd, {2, 7}) > 0.4);
}

TEST_CASE("entropy_saturation") {
  const auto flat = series_of(0, 100, [](long) { return 2.5; });
  const Saturation a = entropy_saturation(flat, {20, 100});
  CHECK(a.level == doctest::Approx(2.5));
  CHECK_FALSE(a.period.has_value());

  const auto wave = series_of(0, 400, [](long t) { return 2.0 + 0.1 * std::cos(2.0 * kPi * t / 7.0); });
  const Saturation b = entropy_saturation(wave, {50, 400});
  REQUIRE(b.period.has_value());
  CHECK(std::abs(*b.period - 7.0) < 0.5);
  CHECK(std::abs(b.level - 2.0) < 0.01);

  CHECK_THROWS_AS(entropy_saturation(wave, {50, 51}), InvalidArgument);
  CHECK_THROWS_AS(entropy_saturation(wave, {50, 60}, 20), InvalidArgument);
}

TEST_CASE("max_rescaled_gap") {
  // Identical shapes in the rescaled variable collapse exactly.
  auto shape = [](double u) { return 1.0 - std::exp(-u); };
  const auto a = series_of(0, 40, [&](long t) { return 2.0 * shape(t / 4.0); });
  const auto b = series_of(0, 50, [&](long t) { return 3.0 * shape(t / 5.0); });
  CHECK(max_rescaled_gap(a, 2.0, 4, b, 3.0, 5, 2) < 1e-12);
  const auto c = series_of(0, 50, [&](long t) { return 3.0 * shape(t / 2.5); });
  CHECK(max_rescaled_gap(a, 2.0, 4, c, 3.0, 5, 2) > 0.1);
}

TEST_CASE("series bookkeeping") {
  ObservableSeries s;
  s.append(0, 1.0);
  s.append(3, 1.0);
  CHECK_THROWS_AS(s.append(3, 1.0), InvalidArgument);
  for (auto o : {Observable::LinearEntropy, Observable::VonNeumann, Observable::Variance,
                 Observable::StdDev, Observable::WignerDistance}) {
    CHECK(parse_observable(observable_name(o)) == o);
  }
  CHECK_THROWS_AS(parse_observable("entropy"), InvalidArgument);
}
