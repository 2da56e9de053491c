#pragma once

// Independent reference computations for the unit tests. Everything here
// works from raw cell vectors, exact rationals or brute-force scans and never
// calls into the library under test.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

struct Iv {
  int depth;
  std::uint64_t index;
};

inline std::size_t first(Iv I, int J) { return std::size_t(I.index) << (J - I.depth); }
inline std::size_t count(Iv I, int J) { return std::size_t(1) << (J - I.depth); }

inline std::vector<Iv> all_intervals(int max_depth) {
  std::vector<Iv> out;
  for (int d = 0; d <= max_depth; ++d)
    for (std::uint64_t i = 0; i < (std::uint64_t(1) << d); ++i) out.push_back({d, i});
  return out;
}

inline bool inside(Iv P, Iv Q) { return P.depth >= Q.depth && (P.index >> (P.depth - Q.depth)) == Q.index; }

inline double avg(const std::vector<double>& f, int J, Iv I) {
  double s = 0.0;
  for (std::size_t c = first(I, J); c < first(I, J) + count(I, J); ++c) s += f[c];
  return s / double(count(I, J));
}

inline double avg_abs(const std::vector<double>& f, int J, Iv I) {
  double s = 0.0;
  for (std::size_t c = first(I, J); c < first(I, J) + count(I, J); ++c) s += std::abs(f[c]);
  return s / double(count(I, J));
}

inline Rational avg_exact(const std::vector<Rational>& f, int J, Iv I) {
  Rational s = 0;
  for (std::size_t c = first(I, J); c < first(I, J) + count(I, J); ++c) s += f[c];
  return s / Rational(count(I, J));
}

/// <f, h_I> straight from the definition h_I = |I|^-1/2 (1_left - 1_right).
inline double haar_coefficient(const std::vector<double>& f, int J, Iv I) {
  const std::size_t n = count(I, J), a = first(I, J);
  double l = 0.0, r = 0.0;
  for (std::size_t c = 0; c < n / 2; ++c) l += f[a + c];
  for (std::size_t c = n / 2; c < n; ++c) r += f[a + c];
  const double cell = std::ldexp(1.0, -J), len = std::ldexp(1.0, -I.depth);
  return (l - r) * cell / std::sqrt(len);
}

/// ((f - c) 1_I)^*(lambda |I|) with the right-continuous convention.
inline Rational rearrangement_at(const std::vector<Rational>& f, int J, Iv I, const Rational& c,
                                 const Rational& lambda) {
  std::vector<Rational> d;
  for (std::size_t k = first(I, J); k < first(I, J) + count(I, J); ++k) d.push_back(abs(f[k] - c));
  std::sort(d.begin(), d.end(), [](const Rational& x, const Rational& y) { return x > y; });
  // Cell k covers [k, k+1) in units of one cell; t = lambda * n cells.
  const Rational t = lambda * Rational(d.size());
  for (std::size_t k = 0; k < d.size(); ++k)
    if (t < Rational(k + 1)) return d[k];
  return 0;
}

/// inf_c by scanning every data value and every pairwise midpoint.
inline Rational local_oscillation(const std::vector<Rational>& f, int J, Iv I, const Rational& lambda) {
  std::vector<Rational> vals(f.begin() + first(I, J), f.begin() + first(I, J) + count(I, J));
  std::vector<Rational> cands = vals;
  for (std::size_t a = 0; a < vals.size(); ++a)
    for (std::size_t b = a + 1; b < vals.size(); ++b) cands.push_back((vals[a] + vals[b]) / 2);
  Rational best = -1;
  for (const auto& c : cands) {
    const Rational v = rearrangement_at(f, J, I, c, lambda);
    if (best < 0 || v < best) best = v;
  }
  return best;
}

inline std::vector<double> gaussian(int J, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(std::size_t(1) << J);
  for (double& x : v) x = g(rng);
  return v;
}

} // namespace oracle
