#pragma once

// L2-normalized Haar system on the standard dyadic grid, Haar multipliers and
// the square-function quantities built from Haar coefficients.

#include "dyadic.hpp"

#include <optional>
#include <utility>

namespace sparsedom {

/// Membership set over the dyadic intervals of depth <= J, heap indexed.
class IntervalSet {
public:
  IntervalSet() = default;
  explicit IntervalSet(int J) : depth_(J), in_(interval_count(J), 0) {}
  IntervalSet(int J, std::span<const Interval> members);

  /// Every interval of depth < J (the support of the Haar system).
  static IntervalSet haar_intervals(int J);

  int depth() const { return depth_; }
  bool contains(const Interval& I) const { return I.depth <= depth_ && in_[I.heap_id()] != 0; }
  bool contains_id(std::size_t id) const { return in_[id] != 0; }
  void insert(const Interval& I);
  void erase(const Interval& I) { in_[I.heap_id()] = 0; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  /// Members in breadth-first (coarse to fine) order.
  std::vector<Interval> members() const;
  /// Members contained in I0.
  std::vector<Interval> members_within(const Interval& I0) const;

private:
  int depth_ = 0;
  std::vector<std::uint8_t> in_;
};

/// <f, h_I> for every interval of depth < J, plus the integral of f (the
/// constant mode). Storage is dense and heap indexed.
class HaarCoefficients {
public:
  HaarCoefficients() = default;
  explicit HaarCoefficients(int J) : depth_(J), coef_((std::size_t(1) << J) - 1, 0.0) {}

  int depth() const { return depth_; }
  double mean() const { return mean_; }
  void set_mean(double m) { mean_ = m; }

  double operator[](const Interval& I) const { return coef_[I.heap_id()]; }
  double& operator[](const Interval& I) { return coef_[I.heap_id()]; }
  double by_id(std::size_t id) const { return coef_[id]; }
  std::span<const double> dense() const { return coef_; }
  std::span<double> dense() { return coef_; }

  /// Intervals with a nonzero coefficient.
  IntervalSet support() const;

private:
  int depth_ = 0;
  double mean_ = 0.0;
  std::vector<double> coef_;
};

/// Value of h_I on the left half of I; minus this on the right half.
double haar_height(const Interval& I);

HaarCoefficients haar_transform(const Signal& f);
Signal inverse_haar(const HaarCoefficients& a);

/// L-infinity normalized Haar function 1_{left(I)} - 1_{right(I)} at depth J.
Signal tilde_haar(const Interval& I, int J);

class HaarMultiplier {
public:
  HaarMultiplier() = default;
  HaarMultiplier(int J, std::span<const std::pair<Interval, double>> entries);

  /// Every interval of depth < J with the same coefficient.
  static HaarMultiplier uniform(int J, double eps);

  int depth() const { return depth_; }
  const IntervalSet& family() const { return family_; }
  double eps(const Interval& I) const { return eps_[I.heap_id()]; }
  double max_abs_eps() const;
  std::vector<std::pair<Interval, double>> entries() const;

private:
  int depth_ = 0;
  IntervalSet family_;
  std::vector<double> eps_;
};

/// Coefficients of Tf: eps_I <f,h_I> on the family, zero elsewhere.
HaarCoefficients multiplier_coefficients(const HaarMultiplier& T, const HaarCoefficients& a);
Signal apply_multiplier(const HaarMultiplier& T, const Signal& f);

double bilinear_form(const HaarMultiplier& T, const HaarCoefficients& a, const HaarCoefficients& b);
double bilinear_form(const HaarMultiplier& T, const Signal& f, const Signal& g);
/// Form restricted to the intervals of `sub` (which should lie in T's family).
double bilinear_form(const HaarMultiplier& T, const HaarCoefficients& a, const HaarCoefficients& b,
                     std::span<const Interval> sub);

/// (sum_{I subset I0, I in restrict} |a_I|^2 1_I / |I|)^(1/2) on every cell.
/// Cells outside I0 are zero.
Signal localized_square_function(const HaarCoefficients& a, const Interval& I0,
                                 const IntervalSet* restrict = nullptr);
Signal square_function(const HaarCoefficients& a);

/// sup_{I subset I0} (|I|^-1 sum_{J subset I} |a_J|^2)^(1/2).
double size(const HaarCoefficients& a, const Interval& I0);
double size(const Signal& f, const Interval& I0);

/// |I|^-1 integral |f| chi_I^M, evaluated directly.
double localized_average(const Signal& f, const Interval& I, int M);

/// localized_average for every interval of depth <= J.
class LocalizedAverages {
public:
  LocalizedAverages() = default;
  LocalizedAverages(const Signal& f, int M);

  int chi_power() const { return M_; }
  double operator()(const Interval& I) const { return value_[I.heap_id()]; }

private:
  int M_ = 0;
  std::vector<double> value_;
};

/// sup over J in family of |J|^-1 integral |f| chi_J^M.
double tilde_size(const Signal& f, std::span<const Interval> family, int M);
double tilde_size(const LocalizedAverages& avg, std::span<const Interval> family);

struct EnergyCheck {
  double lhs = 0.0; ///< sum_{I subset I0} |a_I|^2
  double rhs = 0.0; ///< ||f chi_{I0}^M||_2^2
};
EnergyCheck energy_check(const Signal& f, const Interval& I0, int M);

struct JohnNirenbergPair {
  double l2 = 0.0; ///< sup_{I subset I0} |I|^-1/2 ||(f - avg_I f) 1_I||_2
  double l1 = 0.0; ///< sup_{I subset I0} |I|^-1 ||(f - avg_I f) 1_I||_1
};
JohnNirenbergPair john_nirenberg(const Signal& f, const Interval& I0);

} // namespace sparsedom
