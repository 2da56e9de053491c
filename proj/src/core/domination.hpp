#pragma once

// Stopping-time constructions producing sparse families that dominate the
// bilinear form of a Haar multiplier, and the Lerner-type oscillation
// decomposition.

#include "haar.hpp"
#include "sparse.hpp"

namespace sparsedom {

enum class DominationMode { Avg, Square, Weighted, Oscillation };

std::string to_string(DominationMode m);
DominationMode parse_domination_mode(const std::string& s);

struct CertificateEntry {
  Interval Q;
  std::vector<Interval> children;
  std::vector<Interval> family; ///< the sub-family I_Q
  double lambda_Q = 0.0;        ///< Lambda restricted to I_Q (signed)
  double term_Q = 0.0;          ///< contribution of Q to the right-hand side
  double budget = 0.0;          ///< children measure over |Q| (omega measure in weighted mode)
  double local_constant = 0.0;  ///< |lambda_Q| over the mode's local size bound
};

struct DominationCertificate {
  DominationMode mode = DominationMode::Avg;
  int depth = 0;
  double C = 4.0;
  int retries = 0;
  double eta = 0.5;
  double carleson = 0.0;
  double lambda_total = 0.0; ///< Lambda_I(f,g), signed
  double lhs = 0.0;          ///< |Lambda_I(f,g)|
  double rhs = 0.0;
  double realized_constant = 0.0;
  std::size_t n_intervals = 0;
  double p = 1.0, q = 1.0, r = 0.5;
  int M = 8;
  /// Weighted mode: ||f||_{H^p_w}, ||g||_{CMO^p_w} and |Lambda| over their product.
  double hardy_norm_f = 0.0, cmo_norm_g = 0.0, pairing_constant = 0.0;
  std::vector<CertificateEntry> per_Q;

  SparseCollection collection() const;
};

struct StoppingOptions {
  double C = 4.0;
  int max_retries = 8;
};

DominationCertificate dominate_avg(const HaarMultiplier& T, const Signal& f, const Signal& g, int M,
                                   StoppingOptions opt = {});
DominationCertificate dominate_square(const HaarMultiplier& T, const Signal& f, const Signal& g, double p, double q,
                                      StoppingOptions opt = {});
DominationCertificate dominate_weighted(const HaarMultiplier& T, const Signal& f, const Signal& g, double p, double r,
                                        const Weight& w, StoppingOptions opt = {});
DominationCertificate dominate_oscillation(const HaarMultiplier& T, const Signal& f, const Signal& g,
                                           StoppingOptions opt = {});

struct Verification {
  bool partition = true;
  bool budget = true;
  bool reconstruction = true;
  bool inequality = true;
  std::string detail;

  bool ok() const { return partition && budget && reconstruction && inequality; }
};

/// Internal consistency of a certificate on its own (e.g. after reload).
Verification verify(const DominationCertificate& cert);
/// Also recomputes every lambda_Q from the inputs and checks that the
/// sub-families partition the multiplier's family.
Verification verify(const DominationCertificate& cert, const HaarMultiplier& T, const Signal& f, const Signal& g,
                    const Weight* w = nullptr);

/// Principal intervals of |f| below Q0: children of Q are the maximal P
/// strictly inside Q with avg_P |f| > factor * avg_Q |f|.
SparseCollection principal_intervals(const Signal& f, const Interval& Q0, double factor = 2.0);

struct LernerDecomposition {
  SparseCollection collection;
  std::vector<double> omega;  ///< omega_lambda(phi; Q), aligned with the collection
  std::vector<double> center; ///< optimal constant for each Q
  double lambda = 0.125;
  double median = 0.0;         ///< m(Q0)
  double realized_K = 0.0;     ///< max over cells of |phi - m| / sum omega 1_Q
  double budget_max = 0.0;
  bool bound_holds = true;     ///< pointwise bound with K = 3
};

LernerDecomposition lerner_decompose(const Signal& phi, const Interval& Q0, double lambda);

namespace detail {

/// integral_P (S_{F(P)} f)^r dmu for every P in the subtree of Q at depths
/// Q.depth..J-1, where F(P) = family members inside P and mu is omega dx
/// (or dx). Indexed by position relative to Q: (2^(d - dQ) - 1) + offset.
std::vector<double> restricted_square_integrals(const HaarCoefficients& a, const IntervalSet& family,
                                                const Interval& Q, double r, const Weight* w);

std::size_t local_id(const Interval& Q, const Interval& P);

struct StoppingStep {
  Interval Q;
  std::vector<Interval> family;
  std::vector<Interval> children;
  bool own_fail = false;
  double budget = 0.0;
};

struct StoppingRun {
  std::vector<StoppingStep> steps;
  double C = 0.0;
  int retries = 0;
  bool ok = false;
};

/// Single-function stopping time on L^r(mu) averages of restricted square
/// functions (mu = w dx, or dx when w is null).
StoppingRun lr_stopping(const HaarCoefficients& a, const IntervalSet& family, double r, const Weight* w,
                        StoppingOptions opt);

} // namespace detail

} // namespace sparsedom
