#pragma once

// Dyadic Muckenhoupt and reverse Holder characteristics, weighted Hardy and
// CMO norms, and the sparse atomic decomposition.

#include "haar.hpp"
#include "sparse.hpp"

namespace sparsedom {

/// sup_Q (avg_Q w)(avg_Q w^(-1/(p-1)))^(p-1) over the dyadic intervals.
double ap_characteristic(const Weight& w, double p);
/// sup_Q (avg_Q w^q)^(1/q) / avg_Q w.
double rh_characteristic(const Weight& w, double q);

/// ||S f||_{L^p(w)} with the full dyadic square function.
double hardy_norm(const HaarCoefficients& a, double p, const Weight& w);
double hardy_norm(const Signal& f, double p, const Weight& w);

/// sup_{I0} w(I0)^(-1/p) (w(I0) sum_{I subset I0} |a_I|^2 |I| / w(I))^(1/2).
double cmo_norm(const HaarCoefficients& a, double p, const Weight& w);
double cmo_norm(const Signal& g, double p, const Weight& w);

/// S(Tf) <= S(f) on every cell, with S(Tf) built from eps_I a_I directly.
bool square_function_contracts(const HaarMultiplier& T, const HaarCoefficients& a);

struct Atom {
  Interval Q;
  double c_Q = 0.0;
  std::vector<Interval> family;
  Signal values;
};

struct AtomicDecomposition {
  int depth = 0;
  double p = 1.0, r = 0.5, C = 4.0;
  int retries = 0;
  double removed_mean = 0.0;
  std::vector<Atom> atoms;
  double lp_budget = 0.0;       ///< sum c_Q^p
  double hardy_norm_p = 0.0;    ///< ||S f||_p^p
  double budget_constant = 0.0; ///< lp_budget / hardy_norm_p
  double child_budget_max = 0.0;

  SparseCollection collection() const;
};

AtomicDecomposition atomic_decompose(const Signal& f, double p, double r, double C = 4.0, int max_retries = 8);

struct AtomCheck {
  double reconstruction_error = 0.0; ///< max |f - mean - sum c_Q a_Q|
  double max_norm_ratio = 0.0;       ///< max ||a_Q||_2 / |Q|^(1/2 - 1/p)
  double max_mean = 0.0;             ///< max |integral a_Q|
  bool support_ok = true;
  bool budget_ok = true;             ///< children occupy at most half of Q
};

AtomCheck check_atoms(const AtomicDecomposition& d, const Signal& f);

} // namespace sparsedom
