#pragma once

// Calderon-Zygmund decomposition of |f| and the weak (1,1) check built on
// major subsets.

#include "haar.hpp"
#include "sparse.hpp"

#include <cstdint>

namespace sparsedom {

struct CZDecomposition {
  double alpha = 0.0;
  Signal good;
  std::vector<Interval> bad_cubes;
  std::vector<Signal> bad_parts; ///< aligned with bad_cubes

  double bad_measure() const;
};

/// Stopping intervals are the maximal dyadic Q with avg_Q |f| > alpha.
CZDecomposition cz_decompose(const Signal& f, double alpha);

struct CZCheck {
  double reconstruction_error = 0.0; ///< max | |f| - good - sum b_i |
  double max_bad_mean = 0.0;         ///< max |integral b_i|
  bool supports_ok = true;
  bool maximal_ok = true;            ///< bad cubes are the maximal intervals above alpha
  double good_sup = 0.0;
  double good_l1 = 0.0;
  double f_l1 = 0.0;
  double bad_measure = 0.0;
  bool root_is_bad = false;

  /// All invariants with relative tolerance 1e-12 on the floating sums.
  bool ok(double alpha) const;
};

CZCheck check_cz(const CZDecomposition& d, const Signal& f);

class WeakOperator {
public:
  enum class Kind { Identity, Sparse, Multiplier };

  static WeakOperator identity() { return WeakOperator(Kind::Identity, nullptr, nullptr); }
  static WeakOperator sparse(const SparseCollection& S) { return WeakOperator(Kind::Sparse, &S, nullptr); }
  /// Haar multipliers are self-adjoint, so this is also the adjoint.
  static WeakOperator multiplier(const HaarMultiplier& T) { return WeakOperator(Kind::Multiplier, nullptr, &T); }

  Kind kind() const { return kind_; }
  const SparseCollection* collection() const { return S_; }
  std::string name() const;
  Signal apply(const Signal& f) const;

private:
  WeakOperator(Kind k, const SparseCollection* S, const HaarMultiplier* T) : kind_(k), S_(S), T_(T) {}
  Kind kind_;
  const SparseCollection* S_;
  const HaarMultiplier* T_;
};

struct Weak11Report {
  std::string op;
  double K = 4.0;
  std::vector<double> alpha_levels;    ///< distinct values of |op f|
  std::vector<double> weak_constants;  ///< a |{|op f| >= a}| at each level, with ||f||_1 = 1
  double exact_weak = 0.0;             ///< ||op f||_{1,infty} / ||f||_1
  double proxy = 0.0;                  ///< sup_E integral_{E'} |op f|
  double worst_E_measure = 0.0;
  std::string worst_E;
  double min_major_ratio = 1.0;        ///< min |E'| / |E|
  std::size_t sets_tested = 0;
  bool annihilation_ok = true;

  bool major_ok() const { return min_major_ratio >= 0.5; }
  bool consistent() const { return exact_weak <= 2.0 * proxy * (1 + 1e-9) + 1e-15; }
};

/// f is normalized to ||f||_1 = 1 internally. E ranges over every dyadic
/// interval, the level sets of |op f| and `random_sets` random cell unions.
Weak11Report weak11_certify(const WeakOperator& op, const Signal& f, double K, std::uint64_t seed,
                            int random_sets = 32);

/// sum_{Q in S, Q subset Q_i} (avg_Q b_i)(avg_Q |h|)|Q| over every bad cube.
double annihilation_sum(const CZDecomposition& d, const SparseCollection& S, const Signal& h);

} // namespace sparsedom
