#pragma once

// Dyadic maximal operators: every supremum runs over the intervals of the
// standard grid that contain the cell (the cell itself included).

#include "dyadic.hpp"

namespace sparsedom {

struct MaximalKind {
  enum class Type { HL, Lp, Weighted, WeightedLr, Weak, Sharp };

  Type type = Type::HL;
  double exponent = 1.0;          ///< p for Lp, r for WeightedLr
  const Weight* weight = nullptr; ///< Weighted and WeightedLr

  static MaximalKind hl() { return {}; }
  static MaximalKind lp(double p) { return {Type::Lp, p, nullptr}; }
  static MaximalKind weighted(const Weight& w) { return {Type::Weighted, 1.0, &w}; }
  static MaximalKind weighted_lr(double r, const Weight& w) { return {Type::WeightedLr, r, &w}; }
  static MaximalKind weak() { return {Type::Weak, 1.0, nullptr}; }
  static MaximalKind sharp() { return {Type::Sharp, 1.0, nullptr}; }
};

/// Value of the kind's local functional on every interval of depth <= J,
/// heap indexed.
std::vector<double> local_functional(const Signal& f, const MaximalKind& kind);

Signal maximal(const Signal& f, const MaximalKind& kind);

/// Pointwise sup over ancestors of heap-indexed interval values.
Signal sup_over_ancestors(std::span<const double> per_interval, int J);

struct OscillationFit {
  double value = 0.0;  ///< omega_lambda(f; I)
  double center = 0.0; ///< a constant c attaining the infimum
  double lo = 0.0;     ///< window of cell values within value of center
  double hi = 0.0;
};

/// inf_c ((f - c) 1_I)^*(lambda |I|), exact.
OscillationFit local_mean_oscillation_fit(const Signal& f, const Interval& I, double lambda);
double local_mean_oscillation(const Signal& f, const Interval& I, double lambda);

/// Lower median of the cell values on I.
double median(const Signal& f, const Interval& I);

} // namespace sparsedom
