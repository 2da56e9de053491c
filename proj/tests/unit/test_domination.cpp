#include "domination.hpp"
#include "harness.hpp"
#include "maximal.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace sparsedom;

namespace {

HaarMultiplier random_T(int J, std::uint64_t seed) { return random_multiplier(J, seed); }

Signal gaussian(int J, std::uint64_t seed) { return Signal(J, oracle::gaussian(J, seed)); }

Signal centered(Signal f) {
  const double m = f.integral();
  for (double& x : f.data()) x -= m;
  return f;
}

/// Exact partition check done independently of verify().
bool partitions(const DominationCertificate& c, const HaarMultiplier& T) {
  std::vector<int> seen(interval_count(c.depth), 0);
  for (const auto& e : c.per_Q)
    for (const auto& I : e.family) {
      if (!e.Q.contains(I)) return false;
      ++seen[I.heap_id()];
    }
  for (std::size_t id = 0; id + 1 < (std::size_t(1) << c.depth); ++id)
    if (seen[id] != (T.family().contains_id(id) ? 1 : 0)) return false;
  return true;
}

double child_budget(const CertificateEntry& e) {
  double s = 0.0;
  for (const auto& P : e.children) s += P.length();
  return s / e.Q.length();
}

} // namespace

TEST_CASE("average mode on trivial inputs") {
  const int J = 6;
  const auto T = HaarMultiplier::uniform(J, 1.0);
  const auto c = dominate_avg(T, Signal::constant(J, 1.0), Signal::constant(J, 1.0), 8);
  CHECK(c.lhs == 0.0);
  CHECK(verify(c, T, Signal::constant(J, 1.0), Signal::constant(J, 1.0)).ok());

  const std::pair<Interval, double> one[] = {{Interval::root(), -0.75}};
  const HaarMultiplier T1(J, one);
  const Signal h = tilde_haar(Interval::root(), J);
  const auto d = dominate_avg(T1, h, h, 8);
  REQUIRE(d.per_Q.size() == 1);
  CHECK(d.per_Q[0].Q == Interval::root());
  CHECK(d.lhs == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(d.rhs >= 1.0);
  CHECK(d.realized_constant <= 0.75 * (1 + 1e-12));
}

TEST_CASE("average mode on random inputs") {
  const int J = 8;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto T = random_T(J, s);
    const Signal f = gaussian(J, 2 * s + 1000), g = gaussian(J, 2 * s + 1001);
    const auto c = dominate_avg(T, f, g, 8);
    const auto v = verify(c, T, f, g);
    CHECK_MESSAGE(v.ok(), v.detail);
    CHECK(partitions(c, T));
    for (const auto& e : c.per_Q) CHECK(child_budget(e) <= 0.5);
    CHECK(c.carleson <= 2.0);
    CHECK(c.lambda_total == doctest::Approx(bilinear_form(T, f, g)).epsilon(1e-10));
    CHECK(c.lhs <= c.realized_constant * c.rhs * (1 + 1e-9));
  }
}

TEST_CASE("square mode") {
  const int J = 8;
  for (auto [p, q] : {std::pair{2.0, 2.0}, {1.0, 1.0}, {0.5, 0.5}, {2.0, 1.0}}) {
    for (std::uint64_t s = 0; s < 8; ++s) {
      const auto T = random_T(J, 50 + s);
      const Signal f = gaussian(J, 3 * s + 7), g = gaussian(J, 3 * s + 8);
      const auto c = dominate_square(T, f, g, p, q);
      const auto v = verify(c, T, f, g);
      CHECK_MESSAGE(v.ok(), v.detail);
      CHECK(partitions(c, T));
      if (p == 2.0 && q == 2.0)
        for (const auto& e : c.per_Q) CHECK(e.local_constant <= T.max_abs_eps() * (1 + 1e-9));
    }
  }
  // single Haar mode: one stopping interval
  const Signal h = tilde_haar(Interval{2, 1}, J);
  const auto T = HaarMultiplier::uniform(J, 1.0);
  const auto c = dominate_square(T, h, h, 2, 2);
  CHECK(c.lhs == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(verify(c, T, h, h).ok());
}

TEST_CASE("weighted mode") {
  const int J = 7;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto T = random_T(J, 70 + s);
    const Signal f = gaussian(J, 5 * s + 1), g = gaussian(J, 5 * s + 2);
    const Weight w = random_weight(J, s, 100.0);
    const auto c = dominate_weighted(T, f, g, 1.0, 0.5, w);
    const auto v = verify(c, T, f, g, &w);
    CHECK_MESSAGE(v.ok(), v.detail);
    CHECK(partitions(c, T));
    CHECK(c.pairing_constant == doctest::Approx(c.lhs / (c.hardy_norm_f * c.cmo_norm_g)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(dominate_weighted(HaarMultiplier::uniform(J, 1.0), gaussian(J, 1), gaussian(J, 2), 1.0, 1.5,
                                    Weight::uniform(J)),
                  Error);
}

TEST_CASE("oscillation mode") {
  const int J = 8;
  const Signal h = tilde_haar(Interval::root(), J);
  const auto T1 = HaarMultiplier::uniform(J, 1.0);
  const auto c1 = dominate_oscillation(T1, h, h);
  CHECK(c1.lhs == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c1.realized_constant <= 1.0 + 1e-12);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto T = random_T(J, 90 + s);
    const Signal f = centered(gaussian(J, 11 * s)), g = centered(gaussian(J, 11 * s + 1));
    const auto c = dominate_oscillation(T, f, g);
    const auto v = verify(c, T, f, g);
    CHECK_MESSAGE(v.ok(), v.detail);
    CHECK(partitions(c, T));
  }
  const auto z = dominate_oscillation(T1, Signal::constant(J, 2.0), Signal::constant(J, 2.0));
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK(verify(z).ok());
}

TEST_CASE("polarized Fefferman-Stein cross-check") {
  const int J = 8;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Signal f = centered(gaussian(J, 400 + s)), g = centered(gaussian(J, 500 + s));
    const Signal mf = maximal(f, MaximalKind::sharp()), mg = maximal(g, MaximalKind::sharp());
    double fg = 0.0, sharp = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      fg += f[k] * g[k] * f.cell_measure();
      sharp += mf[k] * mg[k] * f.cell_measure();
    }
    const auto c = dominate_oscillation(HaarMultiplier::uniform(J, 1.0), f, g);
    CHECK(c.lambda_total == doctest::Approx(fg).epsilon(1e-10));
    CHECK(sharp > 0.0);
    CHECK(std::abs(fg) <= 4.0 * sharp);
  }
}

TEST_CASE("certificates survive a JSON round trip and tampering is caught") {
  const int J = 7;
  const auto T = random_T(J, 3);
  const Signal f = gaussian(J, 1), g = gaussian(J, 2);
  const auto c = dominate_square(T, f, g, 1, 1);
  const auto back = certificate_from_json(Json::parse(to_json(c).dump()));
  CHECK(verify(back).ok());
  CHECK(back.per_Q.size() == c.per_Q.size());
  CHECK(back.rhs == c.rhs);

  auto bad = c;
  bad.per_Q[0].lambda_Q += 1.0;
  CHECK(!verify(bad, T, f, g).ok());
  if (c.per_Q.size() > 1) {
    auto dup = c;
    dup.per_Q[1].family.push_back(dup.per_Q[0].family.front());
    CHECK(!verify(dup, T, f, g).ok());
  }
  auto over = c;
  over.realized_constant *= 0.5;
  if (c.lhs > 0) CHECK(!verify(over).inequality);
}

TEST_CASE("principal intervals") {
  const int J = 10;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto S = principal_intervals(gaussian(J, 700 + s), Interval::root());
    for (std::size_t k = 0; k < S.size(); ++k) {
      double m = 0.0;
      for (const auto& P : S.children_at(k)) m += P.length();
      CHECK(m <= 0.5 * S.intervals()[k].length());
    }
    CHECK(carleson_constant(S) <= 2.0);
  }
}

TEST_CASE("stopping time on restricted square functions") {
  const int J = 8;
  const Signal f = gaussian(J, 9);
  const auto a = haar_transform(f);
  const auto run = detail::lr_stopping(a, IntervalSet::haar_intervals(J), 0.5, nullptr, {});
  CHECK(run.ok);
  std::size_t covered = 0;
  for (const auto& st : run.steps) {
    covered += st.family.size();
    CHECK(st.budget <= 0.5);
  }
  CHECK(covered == IntervalSet::haar_intervals(J).size());
}

TEST_CASE("Lerner decomposition") {
  const int J = 10;
  const auto z = lerner_decompose(Signal::constant(J, 3.0), Interval::root(), 0.125);
  CHECK(z.bound_holds);
  for (double w : z.omega) CHECK(w == 0.0);

  const Signal h = tilde_haar(Interval::root(), 6);
  const auto d = lerner_decompose(h, Interval::root(), 0.125);
  CHECK(d.bound_holds);
  REQUIRE(d.collection.size() >= 1);
  std::vector<oracle::Rational> exact(64);
  for (std::size_t k = 0; k < 64; ++k) exact[k] = h[k];
  CHECK(d.omega[0] == oracle::local_oscillation(exact, 6, {0, 0}, oracle::Rational(1, 8)).convert_to<double>());

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(-256, 256);
  for (int t = 0; t < 10; ++t) {
    const int Js = 6;
    std::vector<double> v(64);
    std::vector<oracle::Rational> e(64);
    for (std::size_t k = 0; k < 64; ++k) {
      const int n = pick(rng);
      v[k] = n / 64.0;
      e[k] = oracle::Rational(n, 64);
    }
    const auto L = lerner_decompose(Signal(Js, v), Interval::root(), 0.125);
    CHECK(L.bound_holds);
    CHECK(L.realized_K <= 3.0 * (1 + 1e-12));
    for (std::size_t k = 0; k < L.collection.size(); ++k) {
      const Interval Q = L.collection.intervals()[k];
      CHECK(L.omega[k] ==
            oracle::local_oscillation(e, Js, {Q.depth, Q.index}, oracle::Rational(1, 8)).convert_to<double>());
    }
  }
  CHECK_THROWS_AS(lerner_decompose(h, Interval::root(), 0.5), Error);
}
