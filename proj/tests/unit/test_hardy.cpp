#include "hardy.hpp"
#include "harness.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace sparsedom;

namespace {

/// sup_Q (avg w)(avg w^-1/(p-1))^(p-1) with exact rationals at p = 2.
oracle::Rational exact_a2(const std::vector<oracle::Rational>& w, int J) {
  oracle::Rational best = 0;
  for (const auto& I : oracle::all_intervals(J)) {
    oracle::Rational s = 0, t = 0;
    for (std::size_t c = oracle::first(I, J); c < oracle::first(I, J) + oracle::count(I, J); ++c) {
      s += w[c];
      t += 1 / w[c];
    }
    const oracle::Rational n(oracle::count(I, J));
    best = std::max(best, oracle::Rational((s / n) * (t / n)));
  }
  return best;
}

} // namespace

TEST_CASE("A_p characteristics") {
  CHECK(ap_characteristic(Weight(3, std::vector<double>(8, 5.0)), 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ap_characteristic(Weight(1, {1.0, 4.0}), 2.0) == 25.0 / 16.0);
  CHECK(ap_characteristic(generate_weight({WeightKind::Type::TwoLevel, 4.0}, 1, 0), 2.0) == 25.0 / 16.0);

  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> pick(1, 40);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> v(32);
    std::vector<oracle::Rational> e(32);
    for (std::size_t k = 0; k < 32; ++k) {
      const int n = pick(rng);
      v[k] = n / 4.0;
      e[k] = oracle::Rational(n, 4);
    }
    CHECK(ap_characteristic(Weight(5, v), 2.0) == doctest::Approx(exact_a2(e, 5).convert_to<double>()).epsilon(1e-13));
    // duality [w^(1-p')]_{A_p'} = [w]_{A_p}^(p'-1)
    for (double p : {1.5, 3.0}) {
      const double pp = p / (p - 1);
      std::vector<double> sigma(32);
      for (std::size_t k = 0; k < 32; ++k) sigma[k] = std::pow(v[k], 1 - pp);
      CHECK(ap_characteristic(Weight(5, sigma), pp) ==
            doctest::Approx(std::pow(ap_characteristic(Weight(5, v), p), pp - 1)).epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(ap_characteristic(Weight::uniform(2), 1.0), Error);
}

TEST_CASE("reverse Holder characteristics") {
  CHECK(rh_characteristic(Weight(3, std::vector<double>(8, 2.0)), 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  // (avg w^2)^(1/2) / avg w at the root of {1, 4}: sqrt(17/2) / (5/2)
  CHECK(rh_characteristic(Weight(1, {1.0, 4.0}), 2.0) == doctest::Approx(std::sqrt(8.5) / 2.5).epsilon(1e-15));
  const Weight w = generate_weight({WeightKind::Type::PowerLike, 0.7}, 8, 0);
  double prev = 1e300;
  for (double q = 4.0; q > 1.05; q -= 0.25) {
    const double v = rh_characteristic(w, q);
    CHECK(v <= prev * (1 + 1e-12));
    prev = v;
  }
}

TEST_CASE("Hardy and CMO norms") {
  const int J = 6;
  const Weight one = Weight::uniform(J);
  CHECK(hardy_norm(Signal::constant(J, 3.0), 1.0, one) == 0.0);
  CHECK(hardy_norm(tilde_haar(Interval::root(), J), 1.0, one) == doctest::Approx(1.0).epsilon(1e-15));
  const Signal f(J, oracle::gaussian(J, 4));
  Signal f3 = f;
  for (double& x : f3.data()) x *= -3.0;
  const Weight w = generate_weight({WeightKind::Type::TwoLevel, 7.0}, J, 0);
  CHECK(hardy_norm(f3, 0.5, w) == doctest::Approx(3.0 * hardy_norm(f, 0.5, w)).epsilon(1e-12));
  CHECK(cmo_norm(Signal::constant(J, 2.0), 1.0, one) == 0.0);
  CHECK(cmo_norm(tilde_haar(Interval::root(), J), 1.0, one) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cmo_norm(f3, 1.0, w) == doctest::Approx(3.0 * cmo_norm(f, 1.0, w)).epsilon(1e-12));
}

TEST_CASE("Haar multipliers contract the square function") {
  const int J = 9;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto T = random_multiplier(J, s, 0.7);
    const Signal f(J, oracle::gaussian(J, 60 + s));
    CHECK(square_function_contracts(T, haar_transform(f)));
    const Weight w = random_weight(J, s, 100.0);
    for (double p : {0.5, 1.0})
      CHECK(hardy_norm(apply_multiplier(T, f), p, w) <= hardy_norm(f, p, w) * (1 + 1e-12));
  }
}

TEST_CASE("atomic decomposition of a single mode") {
  const int J = 8;
  const Signal f = tilde_haar(Interval{1, 0}, J);
  const auto d = atomic_decompose(f, 1.0, 0.5);
  REQUIRE(d.atoms.size() == 1);
  CHECK(d.atoms[0].Q == Interval{1, 0});
  CHECK(d.atoms[0].c_Q == 0.5);
  double norm = 0.0;
  for (double x : d.atoms[0].values.values()) norm += x * x * f.cell_measure();
  CHECK(std::sqrt(norm) == std::sqrt(2.0));
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(d.atoms[0].values[k] == 2.0 * f[k]);
  CHECK(atomic_decompose(Signal::zeros(J), 1.0, 0.5).atoms.empty());
}

TEST_CASE("atomic decomposition of random signals") {
  const int J = 9;
  for (double p : {0.5, 1.0}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Signal f = generate_signal(SignalKind::parse(s % 2 ? "gaussian_noise" : "sparse_haar:12"), J, s);
      const auto d = atomic_decompose(f, p, p / 2);
      const auto chk = check_atoms(d, f);
      CHECK(chk.reconstruction_error < 1e-12);
      CHECK(chk.max_norm_ratio <= 1 + 1e-12);
      CHECK(chk.max_mean < 1e-12);
      CHECK(chk.support_ok);
      CHECK(chk.budget_ok);
      CHECK(d.budget_constant < 64.0);
      // independent reconstruction
      std::vector<double> sum(f.size(), d.removed_mean);
      for (const auto& a : d.atoms)
        for (std::size_t k = 0; k < f.size(); ++k) sum[k] += a.c_Q * a.values[k];
      for (std::size_t k = 0; k < f.size(); ++k) CHECK(std::abs(sum[k] - f[k]) < 1e-12);
    }
  }
}
