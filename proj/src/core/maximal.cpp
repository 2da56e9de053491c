#include "maximal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace sparsedom {

namespace {

void check_kind(const Signal& f, const MaximalKind& kind) {
  using T = MaximalKind::Type;
  if ((kind.type == T::Lp || kind.type == T::WeightedLr) && !(kind.exponent > 0.0))
    fail(Error::Code::InvalidArgument, "maximal: exponent must be positive");
  if (kind.type == T::Weighted || kind.type == T::WeightedLr) {
    if (!kind.weight) fail(Error::Code::InvalidArgument, "maximal: weighted kind needs a weight");
    require_same_depth(f.depth(), kind.weight->depth(), "maximal");
  }
}

double power(double a, double p) { return p == 1.0 ? a : p == 2.0 ? a * a : std::pow(a, p); }

} // namespace

std::vector<double> local_functional(const Signal& f, const MaximalKind& kind) {
  check_kind(f, kind);
  using T = MaximalKind::Type;
  const int J = f.depth();
  const std::size_t n = f.size();
  const double h = f.cell_measure();
  std::vector<double> out(interval_count(J));

  switch (kind.type) {
  case T::HL:
  case T::Lp: {
    const double p = kind.type == T::HL ? 1.0 : kind.exponent;
    std::vector<double> cells(n);
    for (std::size_t c = 0; c < n; ++c) cells[c] = power(std::abs(f[c]), p);
    const auto sums = interval_sums(cells, J);
    for (std::size_t id = 0; id < sums.size(); ++id) {
      const double avg = sums[id] * h / Interval::from_heap_id(id).length();
      out[id] = p == 1.0 ? avg : std::pow(avg, 1.0 / p);
    }
    break;
  }
  case T::Weighted:
  case T::WeightedLr: {
    const double r = kind.exponent;
    const Weight& w = *kind.weight;
    std::vector<double> cells(n);
    for (std::size_t c = 0; c < n; ++c) cells[c] = power(std::abs(f[c]), r) * w[c];
    const auto sums = interval_sums(cells, J);
    for (std::size_t id = 0; id < sums.size(); ++id) {
      const double avg = sums[id] * h / w.mass(Interval::from_heap_id(id));
      out[id] = r == 1.0 ? avg : std::pow(avg, 1.0 / r);
    }
    break;
  }
  case T::Weak: {
    for (std::size_t id = 0; id < out.size(); ++id) {
      const Interval I = Interval::from_heap_id(id);
      out[id] = weak_l1_quasinorm(f.on(I), h) / I.length();
    }
    break;
  }
  case T::Sharp: {
    for (std::size_t id = 0; id < out.size(); ++id) out[id] = oscillation(f, Interval::from_heap_id(id));
    break;
  }
  }
  return out;
}

Signal sup_over_ancestors(std::span<const double> per_interval, int J) {
  std::vector<double> best(per_interval.begin(), per_interval.end());
  for (std::size_t id = 1; id < best.size(); ++id) best[id] = std::max(best[id], best[(id - 1) / 2]);
  const std::size_t leaf0 = (std::size_t(1) << J) - 1;
  return Signal(J, std::vector<double>(best.begin() + std::ptrdiff_t(leaf0), best.end()));
}

Signal maximal(const Signal& f, const MaximalKind& kind) {
  return sup_over_ancestors(local_functional(f, kind), f.depth());
}

OscillationFit local_mean_oscillation_fit(const Signal& f, const Interval& I, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) fail(Error::Code::InvalidArgument, "local_mean_oscillation: lambda must lie in (0,1)");
  const auto v = f.on(I);
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  // The rearrangement at lambda|I| is the (k+1)-th largest |f - c|, so at
  // most k cells may sit outside [c - w, c + w].
  const auto k = std::size_t(std::floor(lambda * double(n)));
  if (k >= n) return {0.0, s.front(), s.front(), s.front()};
  const std::size_t keep = n - k;
  OscillationFit best{std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i + keep <= n; ++i) {
    const double half = (s[i + keep - 1] - s[i]) / 2;
    if (half < best.value) best = {half, s[i] + half, s[i], s[i + keep - 1]};
  }
  return best;
}

double local_mean_oscillation(const Signal& f, const Interval& I, double lambda) {
  return local_mean_oscillation_fit(f, I, lambda).value;
}

double median(const Signal& f, const Interval& I) {
  const auto v = f.on(I);
  std::vector<double> s(v.begin(), v.end());
  const auto mid = s.begin() + std::ptrdiff_t((s.size() - 1) / 2);
  std::nth_element(s.begin(), mid, s.end());
  return *mid;
}

} // namespace sparsedom
