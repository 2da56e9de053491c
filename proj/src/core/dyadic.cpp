#include "dyadic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace sparsedom {

void fail(Error::Code code, const std::string& what) { throw Error(code, what); }

double Interval::length() const { return std::ldexp(1.0, -depth); }
double Interval::left() const { return std::ldexp(double(index), -depth); }
double Interval::right() const { return std::ldexp(double(index + 1), -depth); }

Interval Interval::from_heap_id(std::size_t id) {
  const int d = std::bit_width(id + 1) - 1;
  return {d, std::uint64_t(id + 1 - (std::size_t(1) << d))};
}

std::string to_string(const Interval& I) {
  return "[" + std::to_string(I.depth) + "," + std::to_string(I.index) + "]";
}

ShiftedCube shifted_cube(Shift shift, int k, long long m) {
  const double alpha = shift == Shift::Zero ? 0.0 : 1.0 / 3.0;
  const double s = (k % 2 == 0) ? alpha : -alpha;
  const double len = std::ldexp(1.0, -k);
  return {shift, k, m, len * (double(m) + s), len * (double(m) + s + 1.0)};
}

ShiftedCube covering_cube(double a, double b) {
  if (!(b > a)) fail(Error::Code::InvalidArgument, "covering_cube: empty interval");
  ShiftedCube best;
  best.right = best.left + std::numeric_limits<double>::infinity();
  for (Shift shift : {Shift::Zero, Shift::Third}) {
    const double alpha = shift == Shift::Zero ? 0.0 : 1.0 / 3.0;
    for (int k = -4; k < 60; ++k) {
      const double s = (k % 2 == 0) ? alpha : -alpha;
      const long long m = (long long)std::floor(std::ldexp(a, k) - s);
      ShiftedCube c = shifted_cube(shift, k, m);
      if (c.left <= a && b <= c.right && c.length() < best.length()) best = c;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

Signal::Signal(int depth, std::vector<double> values) : depth_(depth), values_(std::move(values)) {
  if (depth < 0 || depth > 30) fail(Error::Code::InvalidArgument, "signal depth out of range");
  if (values_.size() != (std::size_t(1) << depth))
    fail(Error::Code::DepthMismatch, "signal has " + std::to_string(values_.size()) +
                                         " values, expected 2^" + std::to_string(depth));
}

Signal Signal::zeros(int depth) { return constant(depth, 0.0); }
Signal Signal::constant(int depth, double c) {
  return Signal(depth, std::vector<double>(std::size_t(1) << depth, c));
}

double Signal::cell_measure() const { return std::ldexp(1.0, -depth_); }

std::span<const double> Signal::on(const Interval& I) const {
  require_interval(I, depth_);
  return std::span<const double>(values_).subspan(I.first_cell(depth_), I.cell_count(depth_));
}

double Signal::integral(const Interval& I) const {
  const auto v = on(I);
  return std::accumulate(v.begin(), v.end(), 0.0) * cell_measure();
}

Weight::Weight(int depth, std::vector<double> values) : depth_(depth), values_(std::move(values)) {
  if (values_.size() != (std::size_t(1) << depth))
    fail(Error::Code::DepthMismatch, "weight size does not match depth");
  for (double v : values_)
    if (!(v > 0.0) || !std::isfinite(v))
      fail(Error::Code::InvalidArgument, "weight values must be strictly positive and finite");
  mass_ = interval_sums(values_, depth_);
  const double h = std::ldexp(1.0, -depth_);
  for (double& m : mass_) m *= h;
}

CellSet CellSet::of(const Interval& I, int depth) {
  require_interval(I, depth);
  CellSet s(depth);
  std::fill_n(s.in_.begin() + std::ptrdiff_t(I.first_cell(depth)), I.cell_count(depth), std::uint8_t(1));
  return s;
}

CellSet CellSet::all(int depth) { return of(Interval::root(), depth); }

std::size_t CellSet::count() const { return std::size_t(std::count(in_.begin(), in_.end(), std::uint8_t(1))); }
double CellSet::measure() const { return std::ldexp(double(count()), -depth_); }

std::vector<double> interval_sums(std::span<const double> cells, int J) {
  std::vector<double> s(interval_count(J));
  const std::size_t leaf0 = (std::size_t(1) << J) - 1;
  std::copy(cells.begin(), cells.end(), s.begin() + std::ptrdiff_t(leaf0));
  for (std::size_t id = leaf0; id-- > 0;) s[id] = s[2 * id + 1] + s[2 * id + 2];
  return s;
}

void require_same_depth(int a, int b, const char* what) {
  if (a != b)
    fail(Error::Code::DepthMismatch, std::string(what) + ": depth mismatch (" + std::to_string(a) +
                                         " vs " + std::to_string(b) + ")");
}

void require_interval(const Interval& I, int J) {
  if (!I.valid() || I.depth > J)
    fail(Error::Code::DepthMismatch, "interval " + to_string(I) + " is not in the depth-" +
                                         std::to_string(J) + " grid");
}

double average(const Signal& f, const Interval& I) {
  const auto v = f.on(I);
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double oscillation(const Signal& f, const Interval& I) {
  const auto v = f.on(I);
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
  double dev = 0.0;
  for (double x : v) dev += std::abs(x - mean);
  return dev / double(v.size());
}

double localization_weight(const Interval& I, std::size_t cell, int J, int M) {
  if (M < 1) fail(Error::Code::InvalidArgument, "localization power M must be >= 1");
  require_interval(I, J);
  const double x = (double(cell) + 0.5) * std::ldexp(1.0, -J);
  const double dist = std::max({0.0, I.left() - x, x - I.right()});
  return std::pow(1.0 + dist / I.length(), -double(M));
}

double StepFunction::operator()(double t) const {
  if (t < 0.0) t = 0.0;
  const double k = std::floor(t / cell_measure);
  if (k >= double(values.size())) return 0.0;
  return values[std::size_t(k)];
}

StepFunction decreasing_rearrangement(const Signal& f, const Interval& I) {
  const auto v = f.on(I);
  StepFunction r{{}, f.cell_measure()};
  r.values.reserve(v.size());
  for (double x : v) r.values.push_back(std::abs(x));
  std::sort(r.values.begin(), r.values.end(), std::greater<>());
  return r;
}

double weak_l1_quasinorm(std::span<const double> values, double cell_measure) {
  std::vector<double> a;
  a.reserve(values.size());
  for (double x : values) a.push_back(std::abs(x));
  std::sort(a.begin(), a.end(), std::greater<>());
  double best = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) best = std::max(best, a[k] * double(k + 1));
  return best * cell_measure;
}

double weak_l1_quasinorm(const Signal& f, const CellSet& E) {
  require_same_depth(f.depth(), E.depth(), "weak_l1_quasinorm");
  std::vector<double> v;
  for (std::size_t c = 0; c < f.size(); ++c)
    if (E.contains(c)) v.push_back(f[c]);
  return weak_l1_quasinorm(v, f.cell_measure());
}

double weak_l1_quasinorm(const Signal& f) { return weak_l1_quasinorm(f.values(), f.cell_measure()); }

double lp_norm(const Signal& f, double p, const Interval& I, const Weight* w) {
  if (!(p > 0.0)) fail(Error::Code::InvalidArgument, "lp_norm: p must be positive");
  if (w) require_same_depth(f.depth(), w->depth(), "lp_norm");
  const auto v = f.on(I);
  const std::size_t first = I.first_cell(f.depth());
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double a = std::abs(v[k]);
    const double ap = p == 1.0 ? a : p == 2.0 ? a * a : std::pow(a, p);
    s += w ? ap * (*w)[first + k] : ap;
  }
  s *= f.cell_measure();
  return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

double lp_norm(const Signal& f, double p, const Weight* w) { return lp_norm(f, p, Interval::root(), w); }

} // namespace sparsedom
