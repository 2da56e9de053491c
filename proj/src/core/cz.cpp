#include "cz.hpp"

#include "maximal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace sparsedom {

double CZDecomposition::bad_measure() const {
  double m = 0.0;
  for (const auto& Q : bad_cubes) m += Q.length();
  return m;
}

CZDecomposition cz_decompose(const Signal& f, double alpha) {
  if (!(alpha > 0.0)) fail(Error::Code::InvalidArgument, "cz_decompose: alpha must be positive");
  const int J = f.depth();
  std::vector<double> absf(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) absf[c] = std::abs(f[c]);
  const auto sums = interval_sums(absf, J);

  CZDecomposition d;
  d.alpha = alpha;
  std::vector<double> good = absf;
  std::vector<Interval> todo{Interval::root()};
  while (!todo.empty()) {
    const Interval Q = todo.back();
    todo.pop_back();
    const double avg = sums[Q.heap_id()] / double(Q.cell_count(J));
    if (avg > alpha) {
      d.bad_cubes.push_back(Q);
      std::vector<double> b(f.size(), 0.0);
      const std::size_t first = Q.first_cell(J);
      for (std::size_t k = 0; k < Q.cell_count(J); ++k) {
        b[first + k] = absf[first + k] - avg;
        good[first + k] = avg;
      }
      d.bad_parts.emplace_back(J, std::move(b));
    } else if (Q.depth < J) {
      todo.push_back(Q.child(1));
      todo.push_back(Q.child(0));
    }
  }
  d.good = Signal(J, std::move(good));
  return d;
}

bool CZCheck::ok(double alpha) const {
  const double tol = 1e-12;
  return supports_ok && maximal_ok && reconstruction_error <= tol * std::max(1.0, good_sup) &&
         max_bad_mean <= tol * std::max(1.0, f_l1) && (root_is_bad || good_sup <= 2 * alpha * (1 + tol)) &&
         good_l1 <= f_l1 * (1 + tol) && bad_measure <= f_l1 / alpha * (1 + tol);
}

CZCheck check_cz(const CZDecomposition& d, const Signal& f) {
  const int J = f.depth();
  const double h = f.cell_measure();
  CZCheck out;
  std::vector<double> absf(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) absf[c] = std::abs(f[c]);
  const auto sums = interval_sums(absf, J);
  auto avg = [&](const Interval& I) { return sums[I.heap_id()] / double(I.cell_count(J)); };

  std::vector<double> rest(f.size());
  std::vector<std::uint8_t> covered(f.size(), 0);
  for (std::size_t c = 0; c < f.size(); ++c) rest[c] = absf[c] - d.good[c];
  for (std::size_t i = 0; i < d.bad_cubes.size(); ++i) {
    const Interval& Q = d.bad_cubes[i];
    const Signal& b = d.bad_parts[i];
    const std::size_t first = Q.first_cell(J), last = first + Q.cell_count(J);
    double mean = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c) {
      if ((c < first || c >= last) && b[c] != 0.0) out.supports_ok = false;
      rest[c] -= b[c];
      mean += b[c];
    }
    out.max_bad_mean = std::max(out.max_bad_mean, std::abs(mean * h));
    for (std::size_t c = first; c < last; ++c) {
      if (covered[c]) out.maximal_ok = false;
      covered[c] = 1;
    }
    if (!(avg(Q) > d.alpha)) out.maximal_ok = false;
    if (Q.depth > 0 && avg(Q.parent()) > d.alpha) out.maximal_ok = false;
    if (Q.depth == 0) out.root_is_bad = true;
  }
  const Signal M = maximal(f, MaximalKind::hl());
  for (std::size_t c = 0; c < f.size(); ++c) {
    if (!covered[c] && M[c] > d.alpha) out.maximal_ok = false;
    out.reconstruction_error = std::max(out.reconstruction_error, std::abs(rest[c]));
    out.good_sup = std::max(out.good_sup, std::abs(d.good[c]));
    out.good_l1 += std::abs(d.good[c]) * h;
    out.f_l1 += absf[c] * h;
  }
  out.bad_measure = d.bad_measure();
  return out;
}

std::string WeakOperator::name() const {
  switch (kind_) {
  case Kind::Identity: return "identity";
  case Kind::Sparse: return "sparse";
  case Kind::Multiplier: return "multiplier";
  }
  return "?";
}

Signal WeakOperator::apply(const Signal& f) const {
  switch (kind_) {
  case Kind::Identity: return f;
  case Kind::Sparse: return sparse_operator(*S_, f);
  case Kind::Multiplier: return apply_multiplier(*T_, f);
  }
  return f;
}

Weak11Report weak11_certify(const WeakOperator& op, const Signal& f, double K, std::uint64_t seed, int random_sets) {
  if (!(K > 0.0)) fail(Error::Code::InvalidArgument, "weak11_certify: K must be positive");
  const int J = f.depth();
  const std::size_t n = f.size();
  const double h = f.cell_measure();
  Weak11Report rep;
  rep.op = op.name();
  rep.K = K;
  const double norm = lp_norm(f, 1.0);
  if (norm == 0.0) return rep;

  std::vector<double> scaled(f.values().begin(), f.values().end());
  for (double& x : scaled) x /= norm;
  const Signal fn(J, std::move(scaled));
  const Signal F = op.apply(fn);
  const Signal Mf = maximal(fn, MaximalKind::hl());
  std::vector<double> absF(n);
  for (std::size_t c = 0; c < n; ++c) absF[c] = std::abs(F[c]);

  rep.exact_weak = weak_l1_quasinorm(F);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return absF[x] > absF[y]; });
  // Level sets {|F| >= a} are prefixes of `order` ending before a value change.
  std::vector<std::size_t> prefix_ends;
  for (std::size_t k = 0; k < n; ++k) {
    if (absF[order[k]] == 0.0) break;
    if (k + 1 == n || absF[order[k + 1]] != absF[order[k]]) {
      prefix_ends.push_back(k + 1);
      rep.alpha_levels.push_back(absF[order[k]]);
      rep.weak_constants.push_back(absF[order[k]] * double(k + 1) * h);
    }
  }

  auto consider = [&](double measure, double integral, std::size_t inside, std::size_t kept, auto&& label) {
    ++rep.sets_tested;
    rep.min_major_ratio = std::min(rep.min_major_ratio, double(kept) / double(inside));
    if (integral > rep.proxy) {
      rep.proxy = integral;
      rep.worst_E = label();
      rep.worst_E_measure = measure;
    }
  };

  // Dyadic intervals, one pass per depth with prefix sums.
  std::vector<double> pint(n + 1);
  std::vector<std::size_t> pcnt(n + 1);
  for (int d = 0; d <= J; ++d) {
    const double measure = std::ldexp(1.0, -d);
    const double t = K / measure;
    for (std::size_t c = 0; c < n; ++c) {
      const bool keep = Mf[c] < t;
      pint[c + 1] = pint[c] + (keep ? absF[c] : 0.0);
      pcnt[c + 1] = pcnt[c] + (keep ? 1 : 0);
    }
    const std::size_t width = std::size_t(1) << (J - d);
    for (std::uint64_t i = 0; i < (std::uint64_t(1) << d); ++i) {
      const std::size_t a = std::size_t(i) * width, b = a + width;
      consider(measure, (pint[b] - pint[a]) * h, width, pcnt[b] - pcnt[a],
               [&] { return "interval " + to_string(Interval{d, i}); });
    }
  }

  // Level sets: the one realizing the weak norm plus a spread of others.
  std::vector<std::size_t> picks;
  if (!prefix_ends.empty()) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < rep.weak_constants.size(); ++k)
      if (rep.weak_constants[k] > rep.weak_constants[best]) best = k;
    picks.push_back(best);
    const std::size_t step = std::max<std::size_t>(1, prefix_ends.size() / 64);
    for (std::size_t k = 0; k < prefix_ends.size(); k += step) picks.push_back(k);
  }
  for (std::size_t k : picks) {
    const std::size_t m = prefix_ends[k];
    const double measure = double(m) * h, t = K / measure;
    double integral = 0.0;
    std::size_t kept = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (Mf[order[j]] < t) {
        integral += absF[order[j]];
        ++kept;
      }
    consider(measure, integral * h, m, kept,
             [&] { return "level set |op f| >= " + std::to_string(rep.alpha_levels[k]); });
  }

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (int s = 0; s < random_sets; ++s) {
    std::vector<std::size_t> cells;
    for (std::size_t c = 0; c < n; ++c)
      if (coin(rng)) cells.push_back(c);
    if (cells.empty()) continue;
    const double measure = double(cells.size()) * h, t = K / measure;
    double integral = 0.0;
    std::size_t kept = 0;
    std::vector<double> hfun(n, 0.0);
    for (std::size_t c : cells)
      if (Mf[c] < t) {
        integral += absF[c];
        ++kept;
        hfun[c] = F[c] > 0 ? 1.0 : F[c] < 0 ? -1.0 : 0.0;
      }
    consider(measure, integral * h, cells.size(), kept, [&] { return "random set #" + std::to_string(s); });
    if (op.collection()) {
      // h lives on E', which avoids every CZ cube of f at level K/|E|.
      const auto cz = cz_decompose(fn, t);
      if (annihilation_sum(cz, *op.collection(), Signal(J, std::move(hfun))) != 0.0) rep.annihilation_ok = false;
    }
  }
  return rep;
}

double annihilation_sum(const CZDecomposition& d, const SparseCollection& S, const Signal& h) {
  const int J = h.depth();
  std::vector<double> absh(h.size());
  for (std::size_t c = 0; c < h.size(); ++c) absh[c] = std::abs(h[c]);
  const auto hs = interval_sums(absh, J);
  double total = 0.0;
  for (std::size_t i = 0; i < d.bad_cubes.size(); ++i) {
    const auto bs = interval_sums(d.bad_parts[i].values(), J);
    for (const auto& Q : S.intervals()) {
      if (!d.bad_cubes[i].contains(Q)) continue;
      const double n = double(Q.cell_count(J));
      total += (bs[Q.heap_id()] / n) * (hs[Q.heap_id()] / n) * Q.length();
    }
  }
  return total;
}

} // namespace sparsedom
