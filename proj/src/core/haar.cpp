#include "haar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sparsedom {

IntervalSet::IntervalSet(int J, std::span<const Interval> members) : IntervalSet(J) {
  for (const auto& I : members) insert(I);
}

IntervalSet IntervalSet::haar_intervals(int J) {
  IntervalSet s(J);
  std::fill(s.in_.begin(), s.in_.begin() + std::ptrdiff_t((std::size_t(1) << J) - 1), std::uint8_t(1));
  return s;
}

void IntervalSet::insert(const Interval& I) {
  require_interval(I, depth_);
  in_[I.heap_id()] = 1;
}

std::size_t IntervalSet::size() const {
  return std::size_t(std::count(in_.begin(), in_.end(), std::uint8_t(1)));
}

std::vector<Interval> IntervalSet::members() const {
  std::vector<Interval> out;
  for (std::size_t id = 0; id < in_.size(); ++id)
    if (in_[id]) out.push_back(Interval::from_heap_id(id));
  return out;
}

std::vector<Interval> IntervalSet::members_within(const Interval& I0) const {
  std::vector<Interval> out;
  for (int d = I0.depth; d <= depth_; ++d) {
    const std::uint64_t lo = I0.index << (d - I0.depth);
    const std::uint64_t hi = (I0.index + 1) << (d - I0.depth);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const Interval I{d, i};
      if (in_[I.heap_id()]) out.push_back(I);
    }
  }
  return out;
}

IntervalSet HaarCoefficients::support() const {
  IntervalSet s(depth_);
  for (std::size_t id = 0; id < coef_.size(); ++id)
    if (coef_[id] != 0.0) s.insert(Interval::from_heap_id(id));
  return s;
}

double haar_height(const Interval& I) { return std::sqrt(std::ldexp(1.0, I.depth)); }

HaarCoefficients haar_transform(const Signal& f) {
  const int J = f.depth();
  HaarCoefficients a(J);
  const auto sums = interval_sums(f.values(), J);
  const double h = f.cell_measure();
  for (std::size_t id = 0; id + 1 < (std::size_t(1) << J); ++id) {
    const Interval I = Interval::from_heap_id(id);
    a.dense()[id] = (sums[2 * id + 1] - sums[2 * id + 2]) * h * haar_height(I);
  }
  a.set_mean(sums[0] * h);
  return a;
}

Signal inverse_haar(const HaarCoefficients& a) {
  const int J = a.depth();
  // Averages level by level: children of I get avg(I) +- a_I |I|^-1/2.
  std::vector<double> cur{a.mean()}, next;
  for (int d = 0; d < J; ++d) {
    next.resize(cur.size() * 2);
    const std::size_t base = (std::size_t(1) << d) - 1;
    const double height = std::sqrt(std::ldexp(1.0, d));
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const double step = a.by_id(base + i) * height;
      next[2 * i] = cur[i] + step;
      next[2 * i + 1] = cur[i] - step;
    }
    cur.swap(next);
  }
  return Signal(J, std::move(cur));
}

Signal tilde_haar(const Interval& I, int J) {
  if (I.depth >= J) fail(Error::Code::DepthMismatch, "tilde_haar: interval must have depth < J");
  require_interval(I, J);
  Signal s = Signal::zeros(J);
  const std::size_t first = I.first_cell(J), half = I.cell_count(J) / 2;
  for (std::size_t k = 0; k < half; ++k) {
    s.data()[first + k] = 1.0;
    s.data()[first + half + k] = -1.0;
  }
  return s;
}

HaarMultiplier::HaarMultiplier(int J, std::span<const std::pair<Interval, double>> entries)
    : depth_(J), family_(J), eps_(interval_count(J), 0.0) {
  for (const auto& [I, e] : entries) {
    if (!I.valid() || I.depth >= J)
      fail(Error::Code::DepthMismatch, "multiplier interval " + to_string(I) + " must have depth < " +
                                           std::to_string(J));
    if (!(std::abs(e) <= 1.0)) fail(Error::Code::InvalidArgument, "multiplier coefficient must satisfy |eps| <= 1");
    if (family_.contains(I)) fail(Error::Code::InvalidArgument, "duplicate multiplier interval " + to_string(I));
    family_.insert(I);
    eps_[I.heap_id()] = e;
  }
}

HaarMultiplier HaarMultiplier::uniform(int J, double eps) {
  std::vector<std::pair<Interval, double>> e;
  for (std::size_t id = 0; id + 1 < (std::size_t(1) << J); ++id) e.emplace_back(Interval::from_heap_id(id), eps);
  return HaarMultiplier(J, e);
}

double HaarMultiplier::max_abs_eps() const {
  double m = 0.0;
  for (double e : eps_) m = std::max(m, std::abs(e));
  return m;
}

std::vector<std::pair<Interval, double>> HaarMultiplier::entries() const {
  std::vector<std::pair<Interval, double>> out;
  for (const auto& I : family_.members()) out.emplace_back(I, eps_[I.heap_id()]);
  return out;
}

HaarCoefficients multiplier_coefficients(const HaarMultiplier& T, const HaarCoefficients& a) {
  require_same_depth(T.depth(), a.depth(), "multiplier_coefficients");
  HaarCoefficients out(a.depth());
  for (std::size_t id = 0; id < a.dense().size(); ++id)
    if (T.family().contains_id(id)) out.dense()[id] = T.eps(Interval::from_heap_id(id)) * a.by_id(id);
  return out;
}

Signal apply_multiplier(const HaarMultiplier& T, const Signal& f) {
  return inverse_haar(multiplier_coefficients(T, haar_transform(f)));
}

double bilinear_form(const HaarMultiplier& T, const HaarCoefficients& a, const HaarCoefficients& b) {
  require_same_depth(T.depth(), a.depth(), "bilinear_form");
  require_same_depth(a.depth(), b.depth(), "bilinear_form");
  double s = 0.0;
  for (std::size_t id = 0; id < a.dense().size(); ++id)
    if (T.family().contains_id(id)) s += T.eps(Interval::from_heap_id(id)) * a.by_id(id) * b.by_id(id);
  return s;
}

double bilinear_form(const HaarMultiplier& T, const Signal& f, const Signal& g) {
  return bilinear_form(T, haar_transform(f), haar_transform(g));
}

double bilinear_form(const HaarMultiplier& T, const HaarCoefficients& a, const HaarCoefficients& b,
                     std::span<const Interval> sub) {
  double s = 0.0;
  for (const auto& I : sub) s += T.eps(I) * a[I] * b[I];
  return s;
}

Signal localized_square_function(const HaarCoefficients& a, const Interval& I0, const IntervalSet* restrict) {
  const int J = a.depth();
  require_interval(I0, J);
  Signal out = Signal::zeros(J);
  if (I0.depth == J) return out;
  std::vector<double> cur{0.0}, next;
  for (int d = I0.depth; d < J; ++d) {
    const std::uint64_t first = I0.index << (d - I0.depth);
    const double inv_len = std::ldexp(1.0, d);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const Interval I{d, first + i};
      if (!restrict || restrict->contains(I)) {
        const double c = a[I];
        cur[i] += c * c * inv_len;
      }
    }
    next.resize(cur.size() * 2);
    for (std::size_t i = 0; i < cur.size(); ++i) next[2 * i] = next[2 * i + 1] = cur[i];
    cur.swap(next);
  }
  const std::size_t first = I0.first_cell(J);
  for (std::size_t k = 0; k < cur.size(); ++k) out.data()[first + k] = std::sqrt(cur[k]);
  return out;
}

Signal square_function(const HaarCoefficients& a) { return localized_square_function(a, Interval::root()); }

double size(const HaarCoefficients& a, const Interval& I0) {
  const int J = a.depth();
  require_interval(I0, J);
  // energy[id] = sum of |a_J|^2 over J inside the interval, bottom-up.
  std::vector<double> energy(interval_count(J), 0.0);
  for (std::size_t id = (std::size_t(1) << J) - 1; id-- > 0;) {
    const double c = a.by_id(id);
    energy[id] = c * c + energy[2 * id + 1] + energy[2 * id + 2];
  }
  double best = 0.0;
  for (int d = I0.depth; d < J; ++d) {
    const std::uint64_t lo = I0.index << (d - I0.depth), hi = (I0.index + 1) << (d - I0.depth);
    const double inv_len = std::ldexp(1.0, d);
    for (std::uint64_t i = lo; i < hi; ++i) best = std::max(best, energy[Interval{d, i}.heap_id()] * inv_len);
  }
  return std::sqrt(best);
}

double size(const Signal& f, const Interval& I0) { return size(haar_transform(f), I0); }

double localized_average(const Signal& f, const Interval& I, int M) {
  require_interval(I, f.depth());
  double s = 0.0;
  for (std::size_t c = 0; c < f.size(); ++c) s += std::abs(f[c]) * localization_weight(I, c, f.depth(), M);
  return s * f.cell_measure() / I.length();
}

LocalizedAverages::LocalizedAverages(const Signal& f, int M) : M_(M), value_(interval_count(f.depth())) {
  if (M < 1) fail(Error::Code::InvalidArgument, "localization power M must be >= 1");
  const int J = f.depth();
  const std::size_t n = f.size();
  std::vector<double> absf(n);
  for (std::size_t c = 0; c < n; ++c) absf[c] = std::abs(f[c]);
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t c = 0; c < n; ++c) prefix[c + 1] = prefix[c] + absf[c];

  std::vector<double> decay(n);
  for (int d = 0; d <= J; ++d) {
    const std::size_t width = std::size_t(1) << (J - d);
    // Gap of j whole cells between a cell center and the interval edge is
    // (j + 1/2) cell lengths.
    for (std::size_t j = 0; j < n; ++j) decay[j] = std::pow(1.0 + (double(j) + 0.5) / double(width), -double(M));
    for (std::uint64_t i = 0; i < (std::uint64_t(1) << d); ++i) {
      const std::size_t first = std::size_t(i) * width, last = first + width;
      double s = prefix[last] - prefix[first];
      for (std::size_t c = 0; c < first; ++c) s += absf[c] * decay[first - 1 - c];
      for (std::size_t c = last; c < n; ++c) s += absf[c] * decay[c - last];
      value_[Interval{d, i}.heap_id()] = s / double(width);
    }
  }
}

double tilde_size(const LocalizedAverages& avg, std::span<const Interval> family) {
  if (family.empty()) fail(Error::Code::InvalidArgument, "tilde_size: empty family");
  double best = 0.0;
  for (const auto& I : family) best = std::max(best, avg(I));
  return best;
}

double tilde_size(const Signal& f, std::span<const Interval> family, int M) {
  if (family.empty()) fail(Error::Code::InvalidArgument, "tilde_size: empty family");
  double best = 0.0;
  for (const auto& I : family) best = std::max(best, localized_average(f, I, M));
  return best;
}

EnergyCheck energy_check(const Signal& f, const Interval& I0, int M) {
  const auto a = haar_transform(f);
  EnergyCheck e;
  const int J = f.depth();
  require_interval(I0, J);
  for (int d = I0.depth; d < J; ++d) {
    const std::uint64_t lo = I0.index << (d - I0.depth), hi = (I0.index + 1) << (d - I0.depth);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const double c = a[Interval{d, i}];
      e.lhs += c * c;
    }
  }
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double w = localization_weight(I0, c, J, M);
    e.rhs += f[c] * f[c] * w * w;
  }
  e.rhs *= f.cell_measure();
  return e;
}

JohnNirenbergPair john_nirenberg(const Signal& f, const Interval& I0) {
  const int J = f.depth();
  require_interval(I0, J);
  JohnNirenbergPair out;
  for (int d = I0.depth; d <= J; ++d) {
    const std::uint64_t lo = I0.index << (d - I0.depth), hi = (I0.index + 1) << (d - I0.depth);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const Interval I{d, i};
      const auto v = f.on(I);
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
      double l1 = 0.0, l2 = 0.0;
      for (double x : v) {
        l1 += std::abs(x - mean);
        l2 += (x - mean) * (x - mean);
      }
      out.l1 = std::max(out.l1, l1 / double(v.size()));
      out.l2 = std::max(out.l2, std::sqrt(l2 / double(v.size())));
    }
  }
  return out;
}

} // namespace sparsedom
