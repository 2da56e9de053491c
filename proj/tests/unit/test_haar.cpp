#include "haar.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace sparsedom;

TEST_CASE("haar transform of constants and single modes") {
  const auto a = haar_transform(Signal::constant(5, 3.0));
  for (double x : a.dense()) CHECK(x == 0.0);
  CHECK(a.mean() == 3.0);

  const auto h = haar_transform(tilde_haar(Interval::root(), 5));
  CHECK(h[Interval::root()] == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t id = 1; id < h.dense().size(); ++id) CHECK(std::abs(h.by_id(id)) < 1e-15);
  CHECK(h.support().size() == 1);
}

TEST_CASE("haar coefficients agree with the definition") {
  const int J = 7;
  const auto v = oracle::gaussian(J, 13);
  const auto a = haar_transform(Signal(J, v));
  for (const auto& I : oracle::all_intervals(J - 1))
    CHECK(a[Interval{I.depth, I.index}] == doctest::Approx(oracle::haar_coefficient(v, J, I)).epsilon(1e-12));
}

TEST_CASE("inverse transform recovers the signal") {
  const Signal f(9, oracle::gaussian(9, 1));
  const Signal g = inverse_haar(haar_transform(f));
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(g[k] == doctest::Approx(f[k]).epsilon(1e-12));
  // Parseval: sum a_I^2 = ||f - mean||_2^2
  const auto a = haar_transform(f);
  double energy = 0.0, var = 0.0;
  for (double x : a.dense()) energy += x * x;
  for (double x : f.values()) var += (x - a.mean()) * (x - a.mean()) * f.cell_measure();
  CHECK(energy == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("multipliers") {
  const int J = 6;
  const Signal f(J, oracle::gaussian(J, 2)), g(J, oracle::gaussian(J, 3));
  const Signal Tf = apply_multiplier(HaarMultiplier::uniform(J, 1.0), f);
  for (std::size_t k = 0; k < f.size(); ++k) CHECK(Tf[k] == doctest::Approx(f[k] - f.integral()).epsilon(1e-12));
  const Signal zero = apply_multiplier(HaarMultiplier::uniform(J, 0.0), f);
  for (double x : zero.values()) CHECK(x == 0.0);

  const std::pair<Interval, double> one[] = {{Interval::root(), 1.0}};
  const HaarMultiplier top(J, one);
  const Signal h = tilde_haar(Interval::root(), J);
  const Signal Th = apply_multiplier(top, h);
  for (std::size_t k = 0; k < h.size(); ++k) CHECK(Th[k] == doctest::Approx(h[k]).epsilon(1e-15));

  double ip = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) ip += f[k] * g[k] * f.cell_measure();
  CHECK(bilinear_form(HaarMultiplier::uniform(J, 1.0), f, g) ==
        doctest::Approx(ip - f.integral() * g.integral()).epsilon(1e-12));

  const std::pair<Interval, double> left[] = {{Interval{1, 0}, 1.0}};
  const Signal hl = tilde_haar(Interval{1, 0}, J);
  CHECK(bilinear_form(HaarMultiplier(J, left), hl, hl) == doctest::Approx(0.5).epsilon(1e-15));

  const std::pair<Interval, double> bad[] = {{Interval{1, 0}, 1.5}};
  CHECK_THROWS_AS(HaarMultiplier(J, bad), Error);
  const std::pair<Interval, double> too_deep[] = {{Interval{J, 0}, 0.5}};
  CHECK_THROWS_AS(HaarMultiplier(J, too_deep), Error);
}

TEST_CASE("bilinear form is symmetric and linear in the family") {
  const int J = 8;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::pair<Interval, double>> e;
  for (std::size_t id = 0; id < 255; ++id) e.emplace_back(Interval::from_heap_id(id), u(rng));
  const HaarMultiplier T(J, e);
  const Signal f(J, oracle::gaussian(J, 5)), g(J, oracle::gaussian(J, 6));
  CHECK(bilinear_form(T, f, g) == doctest::Approx(bilinear_form(T, g, f)).epsilon(1e-12));
  const auto a = haar_transform(f), b = haar_transform(g);
  const auto members = T.family().members();
  const std::vector<Interval> lo(members.begin(), members.begin() + 100), hi(members.begin() + 100, members.end());
  CHECK(bilinear_form(T, a, b, lo) + bilinear_form(T, a, b, hi) ==
        doctest::Approx(bilinear_form(T, a, b)).epsilon(1e-12));
}

TEST_CASE("square function") {
  const int J = 6;
  const Signal S0 = square_function(haar_transform(Signal::constant(J, 2.0)));
  for (double x : S0.values()) CHECK(x == 0.0);
  const Signal h = tilde_haar(Interval{1, 0}, J);
  const Signal S = localized_square_function(haar_transform(h), Interval{1, 0});
  for (std::size_t k = 0; k < S.size(); ++k) CHECK(S[k] == doctest::Approx(k < 32 ? 1.0 : 0.0).epsilon(1e-15));

  const Signal f(J, oracle::gaussian(J, 8));
  const auto a = haar_transform(f);
  const Signal Sf = localized_square_function(a, Interval{2, 1});
  double lhs = 0.0;
  for (double x : Sf.values()) lhs += x * x * f.cell_measure();
  double rhs = 0.0;
  const double m = average(f, Interval{2, 1});
  for (std::size_t k = 16; k < 32; ++k) rhs += (f[k] - m) * (f[k] - m) * f.cell_measure();
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("size") {
  CHECK(size(Signal::constant(5, 1.0), Interval::root()) == 0.0);
  CHECK(size(tilde_haar(Interval{2, 3}, 6), Interval{2, 3}) == doctest::Approx(1.0).epsilon(1e-15));
  const Signal f(6, oracle::gaussian(6, 9));
  CHECK(size(f, Interval::root()) >= size(f, Interval{1, 1}));
  // brute force
  const auto a = haar_transform(f);
  double best = 0.0;
  for (const auto& I : oracle::all_intervals(5)) {
    double s = 0.0;
    for (const auto& P : oracle::all_intervals(5))
      if (oracle::inside(P, I)) s += a[Interval{P.depth, P.index}] * a[Interval{P.depth, P.index}];
    best = std::max(best, std::sqrt(s / std::ldexp(1.0, -I.depth)));
  }
  CHECK(size(a, Interval::root()) == doctest::Approx(best).epsilon(1e-13));
}

TEST_CASE("localized averages") {
  const int J = 6;
  const Signal one = Signal::constant(J, 1.0);
  const Interval I{2, 1};
  CHECK(localized_average(one, I, 8) >= 1.0);
  Signal far = Signal::zeros(J);
  far.data()[63] = 1.0;
  double prev = localized_average(far, Interval{3, 0}, 1);
  for (int M = 2; M < 10; ++M) {
    const double v = localized_average(far, Interval{3, 0}, M);
    CHECK(v < prev);
    prev = v;
  }
  const Signal f(J, oracle::gaussian(J, 10));
  const LocalizedAverages table(f, 8);
  for (const auto& P : oracle::all_intervals(J)) {
    const Interval Q{P.depth, P.index};
    double direct = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c)
      direct += std::abs(f[c]) * localization_weight(Q, c, J, 8) * f.cell_measure();
    direct /= Q.length();
    CHECK(table(Q) == doctest::Approx(direct).epsilon(1e-11));
    CHECK(localized_average(f, Q, 8) == doctest::Approx(direct).epsilon(1e-11));
  }
  Signal half = Signal::zeros(J);
  for (std::size_t k = 0; k < 32; ++k) half.data()[k] = 1.0;
  const Interval fam[] = {Interval{1, 0}};
  CHECK(tilde_size(half, fam, 8) >= 1.0);
  CHECK_THROWS_AS(tilde_size(half, std::span<const Interval>{}, 8), Error);
}

TEST_CASE("energy and John-Nirenberg pairs") {
  const int J = 8;
  for (std::uint64_t s = 0; s < 10; ++s) {
    Signal f(J, oracle::gaussian(J, 100 + s));
    const auto e = energy_check(f, Interval{2, s % 4}, 6);
    CHECK(e.lhs <= e.rhs * (1 + 1e-12));
    const auto jn = john_nirenberg(f, Interval::root());
    CHECK(jn.l1 <= jn.l2 * (1 + 1e-12));
  }
  const auto e0 = energy_check(Signal::constant(J, 4.0), Interval::root(), 6);
  CHECK(e0.lhs == 0.0);
}
