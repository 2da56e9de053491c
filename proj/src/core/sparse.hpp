#pragma once

// Sparse and Carleson families of dyadic intervals, sparse operators and
// forms, and the BMO function built from a family.

#include "dyadic.hpp"

#include <optional>
#include <unordered_map>
#include <utility>

namespace sparsedom {

class SparseCollection {
public:
  SparseCollection() = default;
  /// Duplicates are dropped; intervals must lie in the depth-J grid.
  SparseCollection(int J, std::vector<Interval> intervals);

  int depth() const { return depth_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  /// Coarse to fine (heap order).
  const std::vector<Interval>& intervals() const { return intervals_; }
  bool contains(const Interval& I) const { return position_.count(I.heap_id()) != 0; }
  std::size_t position(const Interval& I) const;

  /// Maximal members strictly inside Q.
  const std::vector<Interval>& children(const Interval& Q) const { return children_[position(Q)]; }
  const std::vector<Interval>& children_at(std::size_t pos) const { return children_[pos]; }
  /// Members with no strict ancestor in the collection.
  std::vector<Interval> roots() const;
  /// Nearest strict ancestor in the collection, if any.
  std::optional<Interval> parent_of(const Interval& I) const;

  std::optional<double> eta;
  std::optional<double> carleson;
  /// E_Q aligned with intervals(), when constructed.
  std::vector<CellSet> major_subsets;

private:
  int depth_ = 0;
  std::vector<Interval> intervals_;
  std::unordered_map<std::size_t, std::size_t> position_;
  std::vector<std::vector<Interval>> children_;
};

/// max_{Q in S} |Q|^-1 sum_{P in S, P subset Q} |P|; 0 for an empty family.
double carleson_constant(const SparseCollection& S);
/// Same packing measured with w: max_{Q in S} w(Q)^-1 sum_{P in S, P subset Q} w(P).
double carleson_constant(const SparseCollection& S, const Weight& w);

/// 1 - sum_{P in ch(Q)} |P| / |Q| for every member, aligned with intervals().
std::vector<double> child_complement_ratios(const SparseCollection& S);

struct SparseCertification {
  bool ok = false;
  double min_ratio = 1.0; ///< min over Q of |E_Q| / |Q|
};

/// Sets E_Q = Q minus its children and checks |E_Q| >= eta |Q|. On success
/// the major subsets and eta are stored in S.
SparseCertification certify_sparse(SparseCollection& S, double eta);

/// Largest eta admitting pairwise disjoint fractional major subsets, via
/// max-flow and bisection. Only for families of depth <= 8.
double fractional_sparsity(const SparseCollection& S);

struct SparseReport {
  double carleson = 0.0;
  double eta_child = 0.0;              ///< child-complement construction
  std::optional<double> eta_fractional; ///< max-flow oracle
  double eta = 0.0;                    ///< best certified value
  std::string method;
  bool gap = false; ///< child-complement falls short of the oracle
  double product() const { return eta * carleson; }
};

SparseReport sparse_vs_carleson(const SparseCollection& S);

/// sum_Q (avg_Q f) 1_Q
Signal sparse_operator(const SparseCollection& S, const Signal& f);

/// sum_Q <|f|^p>_Q^(1/p) <|g|^q>_Q^(1/q) |Q|; with M set, chi_Q^M weighted L1
/// averages replace both plain averages.
double sparse_form(const SparseCollection& S, const Signal& f, const Signal& g, double p, double q,
                   std::optional<int> M = std::nullopt);

/// sum eps_I (1_{left(I)} - 1_{right(I)}) at depth J.
Signal bmo_function(std::span<const std::pair<Interval, double>> signs, int J);
/// Dyadic BMO norm sup_Q avg_Q |phi - avg_Q phi| of bmo_function(signs, J).
double bmo_norm(std::span<const std::pair<Interval, double>> signs, int J);
/// sup over every dyadic Q (member or not) of |Q|^-1 sum_{I subset Q} |I|.
double packing_norm(std::span<const Interval> family, int J);

} // namespace sparsedom
