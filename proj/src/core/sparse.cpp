#include "sparse.hpp"

#include "maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace sparsedom {

SparseCollection::SparseCollection(int J, std::vector<Interval> intervals) : depth_(J) {
  for (const auto& I : intervals) require_interval(I, J);
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.heap_id() < b.heap_id(); });
  intervals.erase(std::unique(intervals.begin(), intervals.end()), intervals.end());
  intervals_ = std::move(intervals);
  for (std::size_t k = 0; k < intervals_.size(); ++k) position_[intervals_[k].heap_id()] = k;
  children_.resize(intervals_.size());
  for (const auto& I : intervals_)
    if (auto p = parent_of(I)) children_[position(*p)].push_back(I);
}

std::size_t SparseCollection::position(const Interval& I) const {
  auto it = position_.find(I.heap_id());
  if (it == position_.end()) fail(Error::Code::InvalidArgument, "interval " + to_string(I) + " is not in the collection");
  return it->second;
}

std::vector<Interval> SparseCollection::roots() const {
  std::vector<Interval> out;
  for (const auto& I : intervals_)
    if (!parent_of(I)) out.push_back(I);
  return out;
}

std::optional<Interval> SparseCollection::parent_of(const Interval& I) const {
  for (int d = I.depth - 1; d >= 0; --d) {
    const Interval A = I.ancestor(d);
    if (contains(A)) return A;
  }
  return std::nullopt;
}

double carleson_constant(const SparseCollection& S) {
  if (S.empty()) return 0.0;
  std::vector<double> packed(S.size(), 0.0);
  for (const auto& P : S.intervals()) {
    packed[S.position(P)] += P.length();
    for (auto A = S.parent_of(P); A; A = S.parent_of(*A)) packed[S.position(*A)] += P.length();
  }
  double best = 0.0;
  for (std::size_t k = 0; k < S.size(); ++k) best = std::max(best, packed[k] / S.intervals()[k].length());
  return best;
}

double carleson_constant(const SparseCollection& S, const Weight& w) {
  if (S.empty()) return 0.0;
  require_same_depth(S.depth(), w.depth(), "carleson_constant");
  std::vector<double> packed(S.size(), 0.0);
  for (const auto& P : S.intervals()) {
    packed[S.position(P)] += w.mass(P);
    for (auto A = S.parent_of(P); A; A = S.parent_of(*A)) packed[S.position(*A)] += w.mass(P);
  }
  double best = 0.0;
  for (std::size_t k = 0; k < S.size(); ++k) best = std::max(best, packed[k] / w.mass(S.intervals()[k]));
  return best;
}

std::vector<double> child_complement_ratios(const SparseCollection& S) {
  std::vector<double> out(S.size());
  for (std::size_t k = 0; k < S.size(); ++k) {
    const Interval& Q = S.intervals()[k];
    double covered = 0.0;
    for (const auto& P : S.children_at(k)) covered += std::ldexp(1.0, Q.depth - P.depth);
    out[k] = 1.0 - covered;
  }
  return out;
}

SparseCertification certify_sparse(SparseCollection& S, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) fail(Error::Code::InvalidArgument, "certify_sparse: eta must lie in (0,1]");
  SparseCertification cert;
  cert.ok = true;
  const auto ratios = child_complement_ratios(S);
  for (double r : ratios) {
    cert.min_ratio = std::min(cert.min_ratio, r);
    if (r < eta) cert.ok = false;
  }
  if (cert.ok) {
    S.major_subsets.clear();
    for (std::size_t k = 0; k < S.size(); ++k) {
      CellSet E = CellSet::of(S.intervals()[k], S.depth());
      for (const auto& P : S.children_at(k)) {
        const std::size_t first = P.first_cell(S.depth());
        for (std::size_t c = 0; c < P.cell_count(S.depth()); ++c) E.erase(first + c);
      }
      S.major_subsets.push_back(std::move(E));
    }
    S.eta = eta;
  }
  return cert;
}

namespace {

class MaxFlow {
public:
  explicit MaxFlow(std::size_t n) : adj_(n), level_(n), it_(n) {}

  void add_edge(std::size_t u, std::size_t v, double cap) {
    adj_[u].push_back({v, adj_[v].size(), cap});
    adj_[v].push_back({u, adj_[u].size() - 1, 0.0});
  }

  double run(std::size_t s, std::size_t t) {
    double total = 0.0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (double pushed = dfs(s, t, std::numeric_limits<double>::infinity())) total += pushed;
    }
    return total;
  }

private:
  struct Edge {
    std::size_t to, rev;
    double cap;
  };
  static constexpr double kEps = 1e-13;

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (const auto& e : adj_[u])
        if (e.cap > kEps && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          q.push(e.to);
        }
    }
    return level_[t] >= 0;
  }

  double dfs(std::size_t u, std::size_t t, double f) {
    if (u == t) return f;
    for (auto& i = it_[u]; i < adj_[u].size(); ++i) {
      Edge& e = adj_[u][i];
      if (e.cap > kEps && level_[e.to] == level_[u] + 1) {
        const double d = dfs(e.to, t, std::min(f, e.cap));
        if (d > 0.0) {
          e.cap -= d;
          adj_[e.to][e.rev].cap += d;
          return d;
        }
      }
    }
    return 0.0;
  }

  std::vector<std::vector<Edge>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

} // namespace

double fractional_sparsity(const SparseCollection& S) {
  if (S.empty()) return 1.0;
  int D = 0;
  for (const auto& I : S.intervals()) D = std::max(D, I.depth);
  if (D > 8) fail(Error::Code::InvalidArgument, "fractional_sparsity: family deeper than 8");
  const std::size_t cells = std::size_t(1) << D, N = S.size();
  const std::size_t source = N + cells, sink = source + 1;
  double demand_units = 0.0;
  for (const auto& I : S.intervals()) demand_units += double(I.cell_count(D));

  auto feasible = [&](double eta) {
    MaxFlow g(N + cells + 2);
    for (std::size_t k = 0; k < N; ++k) {
      const Interval& Q = S.intervals()[k];
      g.add_edge(source, k, eta * double(Q.cell_count(D)));
      for (std::size_t c = 0; c < Q.cell_count(D); ++c) g.add_edge(k, N + Q.first_cell(D) + c, 1.0);
    }
    for (std::size_t c = 0; c < cells; ++c) g.add_edge(N + c, sink, 1.0);
    return g.run(source, sink) >= eta * demand_units * (1.0 - 1e-12);
  };

  double lo = 0.0, hi = 1.0;
  if (feasible(1.0)) return 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = (lo + hi) / 2;
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

SparseReport sparse_vs_carleson(const SparseCollection& S) {
  SparseReport r;
  r.carleson = carleson_constant(S);
  const auto ratios = child_complement_ratios(S);
  r.eta_child = ratios.empty() ? 1.0 : std::max(0.0, *std::min_element(ratios.begin(), ratios.end()));
  int D = 0;
  for (const auto& I : S.intervals()) D = std::max(D, I.depth);
  r.eta = r.eta_child;
  r.method = "child-complement";
  if (D <= 8) {
    r.eta_fractional = fractional_sparsity(S);
    r.gap = *r.eta_fractional > r.eta_child + 1e-9;
    if (*r.eta_fractional > r.eta) {
      r.eta = *r.eta_fractional;
      r.method = "max-flow";
    }
  }
  return r;
}

Signal sparse_operator(const SparseCollection& S, const Signal& f) {
  require_same_depth(S.depth(), f.depth(), "sparse_operator");
  const int J = f.depth();
  const auto sums = interval_sums(f.values(), J);
  std::vector<double> acc(interval_count(J), 0.0);
  for (const auto& Q : S.intervals()) acc[Q.heap_id()] += sums[Q.heap_id()] / double(Q.cell_count(J));
  for (std::size_t id = 1; id < acc.size(); ++id) acc[id] += acc[(id - 1) / 2];
  const std::size_t leaf0 = (std::size_t(1) << J) - 1;
  return Signal(J, std::vector<double>(acc.begin() + std::ptrdiff_t(leaf0), acc.end()));
}

double sparse_form(const SparseCollection& S, const Signal& f, const Signal& g, double p, double q,
                   std::optional<int> M) {
  if (!(p > 0.0) || !(q > 0.0)) fail(Error::Code::InvalidArgument, "sparse_form: exponents must be positive");
  require_same_depth(f.depth(), g.depth(), "sparse_form");
  require_same_depth(S.depth(), f.depth(), "sparse_form");
  double total = 0.0;
  for (const auto& Q : S.intervals()) {
    double af, ag;
    if (M) {
      double sf = 0.0, sg = 0.0;
      for (std::size_t c = 0; c < f.size(); ++c) {
        const double w = localization_weight(Q, c, f.depth(), *M);
        sf += std::abs(f[c]) * w;
        sg += std::abs(g[c]) * w;
      }
      af = sf * f.cell_measure() / Q.length();
      ag = sg * g.cell_measure() / Q.length();
    } else {
      af = lp_norm(f, p, Q) * std::pow(Q.length(), -1.0 / p);
      ag = lp_norm(g, q, Q) * std::pow(Q.length(), -1.0 / q);
    }
    total += af * ag * Q.length();
  }
  return total;
}

Signal bmo_function(std::span<const std::pair<Interval, double>> signs, int J) {
  Signal phi = Signal::zeros(J);
  for (const auto& [I, e] : signs) {
    if (I.depth >= J)
      fail(Error::Code::DepthMismatch, "bmo_function: interval " + to_string(I) + " is too deep for depth " +
                                           std::to_string(J));
    require_interval(I, J);
    const std::size_t first = I.first_cell(J), half = I.cell_count(J) / 2;
    for (std::size_t k = 0; k < half; ++k) {
      phi.data()[first + k] += e;
      phi.data()[first + half + k] -= e;
    }
  }
  return phi;
}

double bmo_norm(std::span<const std::pair<Interval, double>> signs, int J) {
  const auto osc = local_functional(bmo_function(signs, J), MaximalKind::sharp());
  return *std::max_element(osc.begin(), osc.end());
}

double packing_norm(std::span<const Interval> family, int J) {
  std::vector<double> mass(interval_count(J), 0.0);
  for (const auto& I : family) {
    require_interval(I, J);
    mass[I.heap_id()] += I.length();
  }
  for (std::size_t id = (std::size_t(1) << J) - 1; id-- > 0;) mass[id] += mass[2 * id + 1] + mass[2 * id + 2];
  double best = 0.0;
  for (std::size_t id = 0; id < mass.size(); ++id)
    best = std::max(best, mass[id] / Interval::from_heap_id(id).length());
  return best;
}

} // namespace sparsedom
