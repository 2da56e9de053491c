#pragma once

// Finite dyadic geometry on [0,1) and exact integration of signals that are
// piecewise constant on the depth-J cells.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsedom {

class Error : public std::runtime_error {
public:
  enum class Code { InvalidArgument, DepthMismatch, Io, Parse, Invariant };

  Error(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const noexcept { return code_; }

private:
  Code code_;
};

[[noreturn]] void fail(Error::Code code, const std::string& what);

/// Node of the standard dyadic grid restricted to [0,1):
/// [index * 2^-depth, (index + 1) * 2^-depth).
struct Interval {
  int depth = 0;
  std::uint64_t index = 0;

  static constexpr Interval root() { return {0, 0}; }

  double length() const;
  double left() const;
  double right() const;

  Interval parent() const { return {depth - 1, index >> 1}; }
  Interval child(int side) const { return {depth + 1, (index << 1) | std::uint64_t(side & 1)}; }
  Interval ancestor(int at_depth) const { return {at_depth, index >> (depth - at_depth)}; }

  bool contains(const Interval& o) const {
    return o.depth >= depth && (o.index >> (o.depth - depth)) == index;
  }
  bool strictly_contains(const Interval& o) const { return o.depth > depth && contains(o); }
  bool disjoint(const Interval& o) const { return !contains(o) && !o.contains(*this); }

  /// Breadth-first numbering: root is 0, children of n are 2n+1 and 2n+2.
  std::size_t heap_id() const { return (std::size_t(1) << depth) - 1 + std::size_t(index); }
  static Interval from_heap_id(std::size_t id);

  /// First cell index and cell count of this interval at resolution J.
  std::size_t first_cell(int J) const { return std::size_t(index) << (J - depth); }
  std::size_t cell_count(int J) const { return std::size_t(1) << (J - depth); }

  bool valid() const { return depth >= 0 && depth < 63 && index < (std::uint64_t(1) << depth); }

  auto operator<=>(const Interval&) const = default;
};

std::string to_string(const Interval& I);

/// Number of intervals of depth 0..J.
inline std::size_t interval_count(int J) { return (std::size_t(1) << (J + 1)) - 1; }

enum class Shift { Zero, Third };

struct DyadicGrid {
  int depth = 1;
  Shift shift = Shift::Zero;

  std::size_t cell_count() const { return std::size_t(1) << depth; }
  bool holds(const Interval& I) const { return I.valid() && I.depth <= depth; }
};

/// A cube 2^-k([0,1) + m + (-1)^k alpha) of the translated grid, alpha in {0, 1/3}.
struct ShiftedCube {
  Shift shift = Shift::Zero;
  int k = 0;
  long long m = 0;
  double left = 0.0;
  double right = 0.0;

  double length() const { return right - left; }
};

ShiftedCube shifted_cube(Shift shift, int k, long long m);

/// Smallest cube among both translated grids containing [a,b). The length is
/// at most 6(b - a).
ShiftedCube covering_cube(double a, double b);

class Signal {
public:
  Signal() = default;
  Signal(int depth, std::vector<double> values);

  static Signal zeros(int depth);
  static Signal constant(int depth, double c);

  int depth() const { return depth_; }
  std::size_t size() const { return values_.size(); }
  double cell_measure() const;
  double cell_center(std::size_t cell) const { return (double(cell) + 0.5) * cell_measure(); }

  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }
  double operator[](std::size_t cell) const { return values_[cell]; }

  /// Cell values restricted to I.
  std::span<const double> on(const Interval& I) const;

  double integral(const Interval& I) const;
  double integral() const { return integral(Interval::root()); }

private:
  int depth_ = 0;
  std::vector<double> values_;
};

/// Strictly positive density on the depth-J cells; omega(I) is cached for every
/// dyadic interval.
class Weight {
public:
  Weight() = default;
  Weight(int depth, std::vector<double> values);
  explicit Weight(const Signal& s) : Weight(s.depth(), std::vector<double>(s.values().begin(), s.values().end())) {}

  static Weight uniform(int depth) { return Weight(depth, std::vector<double>(std::size_t(1) << depth, 1.0)); }

  int depth() const { return depth_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t cell) const { return values_[cell]; }

  /// omega(I) = integral of the density over I.
  double mass(const Interval& I) const { return mass_[I.heap_id()]; }

  Signal as_signal() const { return Signal(depth_, values_); }

private:
  int depth_ = 0;
  std::vector<double> values_;
  std::vector<double> mass_;
};

/// Subset of the depth-J cells.
class CellSet {
public:
  CellSet() = default;
  explicit CellSet(int depth) : depth_(depth), in_(std::size_t(1) << depth, 0) {}

  static CellSet of(const Interval& I, int depth);
  static CellSet all(int depth);

  int depth() const { return depth_; }
  std::size_t size() const { return in_.size(); }
  bool contains(std::size_t cell) const { return in_[cell] != 0; }
  void insert(std::size_t cell) { in_[cell] = 1; }
  void erase(std::size_t cell) { in_[cell] = 0; }
  std::size_t count() const;
  double measure() const;

private:
  int depth_ = 0;
  std::vector<std::uint8_t> in_;
};

/// Heap-indexed sums of cell values over every dyadic interval of depth <= J
/// (unscaled: multiply by the cell measure to integrate).
std::vector<double> interval_sums(std::span<const double> cells, int J);

void require_same_depth(int a, int b, const char* what);
void require_interval(const Interval& I, int J);

double average(const Signal& f, const Interval& I);
double oscillation(const Signal& f, const Interval& I);

/// chi_I(x)^M at the center of `cell`, chi_I(x) = (1 + d(x,I)/l(I))^-1.
double localization_weight(const Interval& I, std::size_t cell, int J, int M);

/// Distribution of |f| on I sorted decreasingly; each value carries one cell
/// of measure.
struct StepFunction {
  std::vector<double> values;
  double cell_measure = 0.0;

  double total_measure() const { return cell_measure * double(values.size()); }
  /// Right-continuous evaluation; zero past the total measure.
  double operator()(double t) const;
};

StepFunction decreasing_rearrangement(const Signal& f, const Interval& I);

/// sup_lambda lambda |{|v| > lambda}| for a step function with equal cells.
double weak_l1_quasinorm(std::span<const double> values, double cell_measure);
double weak_l1_quasinorm(const Signal& f, const CellSet& E);
double weak_l1_quasinorm(const Signal& f);

double lp_norm(const Signal& f, double p, const Interval& I, const Weight* w = nullptr);
double lp_norm(const Signal& f, double p, const Weight* w = nullptr);

} // namespace sparsedom
