#include "domination.hpp"

#include "hardy.hpp"
#include "maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <unordered_set>

namespace sparsedom {

std::string to_string(DominationMode m) {
  switch (m) {
  case DominationMode::Avg: return "avg";
  case DominationMode::Square: return "square";
  case DominationMode::Weighted: return "weighted";
  case DominationMode::Oscillation: return "osc";
  }
  return "?";
}

DominationMode parse_domination_mode(const std::string& s) {
  if (s == "avg") return DominationMode::Avg;
  if (s == "square") return DominationMode::Square;
  if (s == "weighted") return DominationMode::Weighted;
  if (s == "osc" || s == "oscillation") return DominationMode::Oscillation;
  fail(Error::Code::InvalidArgument, "unknown domination mode '" + s + "'");
}

SparseCollection DominationCertificate::collection() const {
  std::vector<Interval> qs;
  for (const auto& e : per_Q) qs.push_back(e.Q);
  SparseCollection S(depth, std::move(qs));
  S.eta = eta;
  S.carleson = carleson;
  return S;
}

namespace detail {

std::size_t local_id(const Interval& Q, const Interval& P) {
  const int k = P.depth - Q.depth;
  return ((std::size_t(1) << k) - 1) + std::size_t(P.index - (Q.index << k));
}

std::vector<double> restricted_square_integrals(const HaarCoefficients& a, const IntervalSet& family,
                                                const Interval& Q, double r, const Weight* w) {
  const int J = a.depth();
  const int levels = J - Q.depth;
  std::vector<double> out(levels > 0 ? (std::size_t(1) << levels) - 1 : 0, 0.0);
  if (levels <= 0) return out;
  const std::size_t nq = Q.cell_count(J), first = Q.first_cell(J);
  const double h = std::ldexp(1.0, -J);
  std::vector<double> cum(nq, 0.0);
  for (int d = J - 1; d >= Q.depth; --d) {
    const std::size_t width = std::size_t(1) << (J - d);
    const std::size_t count = std::size_t(1) << (d - Q.depth);
    const std::size_t base = count - 1;
    const std::uint64_t first_index = Q.index << (d - Q.depth);
    const double inv_len = std::ldexp(1.0, d);
    for (std::size_t i = 0; i < count; ++i) {
      const Interval I{d, first_index + i};
      if (family.contains(I)) {
        const double c = a[I];
        const double add = c * c * inv_len;
        for (std::size_t k = i * width; k < (i + 1) * width; ++k) cum[k] += add;
      }
      double s = 0.0;
      for (std::size_t k = i * width; k < (i + 1) * width; ++k) {
        const double v = cum[k];
        const double t = r == 2.0 ? v : r == 1.0 ? std::sqrt(v) : (v == 0.0 ? 0.0 : std::pow(v, r / 2));
        s += w ? t * (*w)[first + k] : t;
      }
      out[base + i] = s * h;
    }
  }
  return out;
}

namespace {

/// ||S_{F(P)} f 1_P||_{1,infty} for every P in the subtree of Q, as above.
std::vector<double> restricted_square_weak(const HaarCoefficients& a, const IntervalSet& family, const Interval& Q) {
  const int J = a.depth();
  const int levels = J - Q.depth;
  std::vector<double> out(levels > 0 ? (std::size_t(1) << levels) - 1 : 0, 0.0);
  if (levels <= 0) return out;
  const std::size_t nq = Q.cell_count(J);
  const double h = std::ldexp(1.0, -J);
  std::vector<double> cum(nq, 0.0), scratch;
  for (int d = J - 1; d >= Q.depth; --d) {
    const std::size_t width = std::size_t(1) << (J - d);
    const std::size_t count = std::size_t(1) << (d - Q.depth);
    const std::uint64_t first_index = Q.index << (d - Q.depth);
    const double inv_len = std::ldexp(1.0, d);
    for (std::size_t i = 0; i < count; ++i) {
      const Interval I{d, first_index + i};
      if (family.contains(I)) {
        const double c = a[I];
        const double add = c * c * inv_len;
        for (std::size_t k = i * width; k < (i + 1) * width; ++k) cum[k] += add;
      }
      scratch.assign(cum.begin() + std::ptrdiff_t(i * width), cum.begin() + std::ptrdiff_t((i + 1) * width));
      std::sort(scratch.begin(), scratch.end(), std::greater<>());
      double best = 0.0;
      for (std::size_t k = 0; k < scratch.size(); ++k) best = std::max(best, std::sqrt(scratch[k]) * double(k + 1));
      out[count - 1 + i] = best * h;
    }
  }
  return out;
}

class Stock {
public:
  explicit Stock(const IntervalSet& family) : set_(family), count_(interval_count(family.depth()), 0) {
    for (const auto& I : family.members())
      for (int d = I.depth; d >= 0; --d) ++count_[I.ancestor(d).heap_id()];
  }

  const IntervalSet& set() const { return set_; }
  bool has(const Interval& I) const { return set_.contains(I); }
  bool any_within(const Interval& I) const { return count_[I.heap_id()] > 0; }
  int depth() const { return set_.depth(); }

  void remove(const Interval& I) {
    set_.erase(I);
    for (int d = I.depth; d >= 0; --d) --count_[I.ancestor(d).heap_id()];
  }

  std::vector<Interval> within(const Interval& Q) const {
    std::vector<Interval> out;
    walk(Q, [&](const Interval& P) {
      if (has(P)) out.push_back(P);
      return true;
    });
    return out;
  }

  /// Maximal members inside Q, Q itself excluded when `strict`.
  std::vector<Interval> maximal_within(const Interval& Q, bool strict) const {
    std::vector<Interval> out;
    walk(Q, [&](const Interval& P) {
      if (has(P) && !(strict && P == Q)) {
        out.push_back(P);
        return false;
      }
      return true;
    });
    return out;
  }

private:
  template <class Visit> void walk(const Interval& Q, Visit&& visit) const {
    std::vector<Interval> todo{Q};
    while (!todo.empty()) {
      const Interval P = todo.back();
      todo.pop_back();
      if (!any_within(P)) continue;
      if (!visit(P) || P.depth >= depth()) continue;
      todo.push_back(P.child(1));
      todo.push_back(P.child(0));
    }
  }

  IntervalSet set_;
  std::vector<int> count_;
};

/// Stopping rule interface: prepare(Q, stock) evaluates the local functionals
/// for the subtree of Q, ok(Q, P) tells whether P passes against Q.
template <class Rule>
std::vector<StoppingStep> run_engine(const IntervalSet& family, Rule& rule, bool stock_children,
                                     const std::function<double(const Interval&, const std::vector<Interval>&)>& budget) {
  Stock stock(family);
  std::vector<StoppingStep> steps;
  std::deque<Interval> queue;
  for (const auto& Q : stock.maximal_within(Interval::root(), false)) queue.push_back(Q);
  while (!queue.empty()) {
    const Interval Q = queue.front();
    queue.pop_front();
    rule.prepare(Q, stock);
    StoppingStep step;
    step.Q = Q;
    for (const auto& P : stock.within(Q))
      if (rule.ok(Q, P)) step.family.push_back(P);
    step.own_fail = stock.has(Q) && !rule.ok(Q, Q);
    for (const auto& P : step.family) stock.remove(P);
    if (stock_children) {
      step.children = stock.maximal_within(Q, true);
    } else {
      std::vector<Interval> todo;
      if (Q.depth < stock.depth()) todo = {Q.child(1), Q.child(0)};
      while (!todo.empty()) {
        const Interval P = todo.back();
        todo.pop_back();
        if (!stock.any_within(P)) continue;
        if (!rule.ok(Q, P)) {
          step.children.push_back(P);
        } else if (P.depth < stock.depth()) {
          todo.push_back(P.child(1));
          todo.push_back(P.child(0));
        }
      }
    }
    std::sort(step.family.begin(), step.family.end(),
              [](const Interval& x, const Interval& y) { return x.heap_id() < y.heap_id(); });
    std::sort(step.children.begin(), step.children.end(),
              [](const Interval& x, const Interval& y) { return x.heap_id() < y.heap_id(); });
    step.budget = budget(Q, step.children);
    for (const auto& P : step.children) queue.push_back(P);
    steps.push_back(std::move(step));
  }
  return steps;
}

double lebesgue_budget(const Interval& Q, const std::vector<Interval>& children) {
  double s = 0.0;
  for (const auto& P : children) s += std::ldexp(1.0, Q.depth - P.depth);
  return s;
}

bool run_ok(const std::vector<StoppingStep>& steps) {
  for (const auto& s : steps)
    if (s.own_fail || s.budget > 0.5) return false;
  return true;
}

template <class MakeRule>
StoppingRun run_with_retries(const IntervalSet& family, MakeRule&& make, bool stock_children,
                             const std::function<double(const Interval&, const std::vector<Interval>&)>& budget,
                             StoppingOptions opt) {
  if (!(opt.C >= 1.0)) fail(Error::Code::InvalidArgument, "stopping constant C must be >= 1");
  StoppingRun run;
  run.C = opt.C;
  for (int attempt = 0;; ++attempt) {
    auto rule = make(run.C);
    run.steps = run_engine(family, rule, stock_children, budget);
    run.retries = attempt;
    run.ok = run_ok(run.steps);
    if (run.ok || attempt >= opt.max_retries) break;
    run.C *= 2;
  }
  return run;
}

/// L^r(mu) averages of restricted square functions of one or two functions.
class LrRule {
public:
  LrRule(const HaarCoefficients* a, double ra, const HaarCoefficients* b, double rb, const Weight* w, double C)
      : a_(a), b_(b), ra_(ra), rb_(rb), w_(w), ca_(std::pow(C, ra)), cb_(b ? std::pow(C, rb) : 0.0) {}

  void prepare(const Interval& Q, const Stock& stock) {
    ia_ = restricted_square_integrals(*a_, stock.set(), Q, ra_, w_);
    if (b_) ib_ = restricted_square_integrals(*b_, stock.set(), Q, rb_, w_);
  }

  bool ok(const Interval& Q, const Interval& P) const {
    const std::size_t k = local_id(Q, P);
    const double mq = measure(Q), mp = measure(P);
    // avg_P <= C^r avg_Q, cross-multiplied.
    if (ia_[k] * mq > ca_ * ia_[0] * mp) return false;
    if (b_ && ib_[k] * mq > cb_ * ib_[0] * mp) return false;
    return true;
  }

private:
  double measure(const Interval& I) const { return w_ ? w_->mass(I) : I.length(); }

  const HaarCoefficients* a_;
  const HaarCoefficients* b_;
  double ra_, rb_;
  const Weight* w_;
  double ca_, cb_;
  std::vector<double> ia_, ib_;
};

} // namespace

StoppingRun lr_stopping(const HaarCoefficients& a, const IntervalSet& family, double r, const Weight* w,
                        StoppingOptions opt) {
  auto budget = [w](const Interval& Q, const std::vector<Interval>& ch) {
    if (!w) return lebesgue_budget(Q, ch);
    double s = 0.0;
    for (const auto& P : ch) s += w->mass(P);
    return s / w->mass(Q);
  };
  return run_with_retries(
      family, [&](double C) { return LrRule(&a, r, nullptr, 0.0, w, C); }, true, budget, opt);
}

} // namespace detail

namespace {

using detail::StoppingRun;

struct Inputs {
  HaarCoefficients a, b;
  double lambda_total = 0.0;
};

Inputs prepare_inputs(const HaarMultiplier& T, const Signal& f, const Signal& g) {
  require_same_depth(f.depth(), g.depth(), "dominate");
  require_same_depth(T.depth(), f.depth(), "dominate");
  Inputs in{haar_transform(f), haar_transform(g), 0.0};
  in.lambda_total = bilinear_form(T, in.a, in.b);
  return in;
}

DominationCertificate assemble(DominationMode mode, const HaarMultiplier& T, const Inputs& in, const StoppingRun& run,
                               const std::function<double(const detail::StoppingStep&)>& term,
                               const std::function<double(const detail::StoppingStep&, double)>& local) {
  DominationCertificate cert;
  cert.mode = mode;
  cert.depth = T.depth();
  cert.C = run.C;
  cert.retries = run.retries;
  cert.n_intervals = T.family().size();
  cert.lambda_total = in.lambda_total;
  cert.lhs = std::abs(in.lambda_total);
  for (const auto& s : run.steps) {
    CertificateEntry e;
    e.Q = s.Q;
    e.children = s.children;
    e.family = s.family;
    e.lambda_Q = bilinear_form(T, in.a, in.b, s.family);
    e.term_Q = term(s);
    e.budget = s.budget;
    e.local_constant = local(s, e.lambda_Q);
    cert.rhs += e.term_Q;
    cert.per_Q.push_back(std::move(e));
  }
  if (cert.rhs > 0.0)
    cert.realized_constant = cert.lhs / cert.rhs;
  else
    cert.realized_constant = cert.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  cert.carleson = carleson_constant(cert.collection());
  return cert;
}

double ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

class AvgRule {
public:
  AvgRule(const LocalizedAverages* lf, const LocalizedAverages* lg, double C) : lf_(lf), lg_(lg), C_(C) {}
  void prepare(const Interval&, const auto&) {}
  bool ok(const Interval& Q, const Interval& P) const {
    return (*lf_)(P) <= C_ * (*lf_)(Q) && (*lg_)(P) <= C_ * (*lg_)(Q);
  }

private:
  const LocalizedAverages *lf_, *lg_;
  double C_;
};

class OscRule {
public:
  OscRule(const HaarCoefficients* a, const HaarCoefficients* b, const Signal* f, const Signal* g, double C)
      : a_(a), b_(b), f_(f), g_(g), C_(C) {}

  void prepare(const Interval& Q, const auto& stock) {
    wa_ = detail::restricted_square_weak(*a_, stock.set(), Q);
    wb_ = detail::restricted_square_weak(*b_, stock.set(), Q);
    of_ = oscillation(*f_, Q);
    og_ = oscillation(*g_, Q);
  }

  bool ok(const Interval& Q, const Interval& P) const {
    const std::size_t k = detail::local_id(Q, P);
    return wa_[k] <= C_ * of_ * P.length() && wb_[k] <= C_ * og_ * P.length();
  }

private:
  const HaarCoefficients *a_, *b_;
  const Signal *f_, *g_;
  double C_;
  std::vector<double> wa_, wb_;
  double of_ = 0.0, og_ = 0.0;
};

} // namespace

DominationCertificate dominate_avg(const HaarMultiplier& T, const Signal& f, const Signal& g, int M,
                                   StoppingOptions opt) {
  const Inputs in = prepare_inputs(T, f, g);
  const LocalizedAverages lf(f, M), lg(g, M);
  auto run = detail::run_with_retries(
      T.family(), [&](double C) { return AvgRule(&lf, &lg, C); }, false, detail::lebesgue_budget, opt);
  auto cert = assemble(
      DominationMode::Avg, T, in, run, [&](const detail::StoppingStep& s) { return lf(s.Q) * lg(s.Q) * s.Q.length(); },
      [&](const detail::StoppingStep& s, double lam) {
        if (s.family.empty()) return 0.0;
        return ratio(std::abs(lam), tilde_size(lf, s.family) * tilde_size(lg, s.family) * s.Q.length());
      });
  cert.M = M;
  return cert;
}

DominationCertificate dominate_square(const HaarMultiplier& T, const Signal& f, const Signal& g, double p, double q,
                                      StoppingOptions opt) {
  if (!(p > 0.0) || !(q > 0.0)) fail(Error::Code::InvalidArgument, "dominate_square: exponents must be positive");
  const Inputs in = prepare_inputs(T, f, g);
  auto run = detail::run_with_retries(
      T.family(), [&](double C) { return detail::LrRule(&in.a, p, &in.b, q, nullptr, C); }, true,
      detail::lebesgue_budget, opt);
  // Right-hand side uses every member of the family inside Q.
  auto term = [&](const detail::StoppingStep& s) {
    const double len = s.Q.length();
    const double A = std::pow(detail::restricted_square_integrals(in.a, T.family(), s.Q, p, nullptr)[0] / len, 1 / p);
    const double B = std::pow(detail::restricted_square_integrals(in.b, T.family(), s.Q, q, nullptr)[0] / len, 1 / q);
    return A * B * len;
  };
  auto cert = assemble(DominationMode::Square, T, in, run, term,
                       [&](const detail::StoppingStep& s, double lam) { return ratio(std::abs(lam), term(s)); });
  cert.p = p;
  cert.q = q;
  return cert;
}

DominationCertificate dominate_weighted(const HaarMultiplier& T, const Signal& f, const Signal& g, double p, double r,
                                        const Weight& w, StoppingOptions opt) {
  if (!(p > 0.0 && p <= 1.0)) fail(Error::Code::InvalidArgument, "dominate_weighted: p must lie in (0,1]");
  if (!(r > 0.0 && r < p)) fail(Error::Code::InvalidArgument, "dominate_weighted: r must lie in (0,p)");
  require_same_depth(f.depth(), w.depth(), "dominate_weighted");
  const Inputs in = prepare_inputs(T, f, g);
  auto run = detail::lr_stopping(in.a, T.family(), r, &w, opt);
  const double cmo = cmo_norm(in.b, p, w);
  auto local_norm = [&](const detail::StoppingStep& s) {
    const IntervalSet sub(T.depth(), s.family);
    return std::pow(detail::restricted_square_integrals(in.a, sub, s.Q, r, &w)[0], 1 / r);
  };
  auto cert = assemble(
      DominationMode::Weighted, T, in, run,
      [&](const detail::StoppingStep& s) {
        const double m = w.mass(s.Q);
        return std::pow(m, 1 / p - 1 / r) * local_norm(s) * cmo;
      },
      [&](const detail::StoppingStep& s, double lam) {
        const double m = w.mass(s.Q);
        return ratio(std::abs(lam), std::pow(m, 1 / p - 1 / r) * local_norm(s) * cmo);
      });
  cert.p = p;
  cert.q = p;
  cert.r = r;
  cert.hardy_norm_f = hardy_norm(in.a, p, w);
  cert.cmo_norm_g = cmo;
  cert.carleson = carleson_constant(cert.collection(), w);
  cert.pairing_constant = ratio(cert.lhs, cert.hardy_norm_f * cert.cmo_norm_g);
  return cert;
}

DominationCertificate dominate_oscillation(const HaarMultiplier& T, const Signal& f, const Signal& g,
                                           StoppingOptions opt) {
  const Inputs in = prepare_inputs(T, f, g);
  auto run = detail::run_with_retries(
      T.family(), [&](double C) { return OscRule(&in.a, &in.b, &f, &g, C); }, true, detail::lebesgue_budget, opt);
  auto term = [&](const detail::StoppingStep& s) {
    return oscillation(f, s.Q) * oscillation(g, s.Q) * s.Q.length();
  };
  return assemble(DominationMode::Oscillation, T, in, run, term,
                  [&](const detail::StoppingStep& s, double lam) { return ratio(std::abs(lam), term(s)); });
}

namespace {

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * std::max(1.0, scale); }

} // namespace

Verification verify(const DominationCertificate& cert) {
  Verification v;
  auto note = [&](const std::string& s) {
    if (!v.detail.empty()) v.detail += "; ";
    v.detail += s;
  };
  std::unordered_set<std::size_t> seen, qs;
  std::size_t total = 0;
  for (const auto& e : cert.per_Q) {
    if (!qs.insert(e.Q.heap_id()).second) {
      v.partition = false;
      note("interval " + to_string(e.Q) + " appears twice in the collection");
    }
    for (const auto& I : e.family) {
      ++total;
      if (!e.Q.contains(I)) {
        v.partition = false;
        note(to_string(I) + " assigned to " + to_string(e.Q) + " but not contained in it");
      }
      if (!seen.insert(I.heap_id()).second) {
        v.partition = false;
        note(to_string(I) + " assigned twice");
      }
    }
  }
  if (total != cert.n_intervals) {
    v.partition = false;
    note("sub-families hold " + std::to_string(total) + " intervals, expected " + std::to_string(cert.n_intervals));
  }

  double abs_sum = 0.0, sum = 0.0, rhs = 0.0;
  for (const auto& e : cert.per_Q) {
    double covered = 0.0;
    for (std::size_t i = 0; i < e.children.size(); ++i) {
      const auto& P = e.children[i];
      if (!e.Q.strictly_contains(P)) {
        v.budget = false;
        note("child " + to_string(P) + " not strictly inside " + to_string(e.Q));
      }
      for (std::size_t j = 0; j < i; ++j)
        if (!P.disjoint(e.children[j])) {
          v.budget = false;
          note("children of " + to_string(e.Q) + " overlap");
        }
      if (!qs.count(P.heap_id())) {
        v.budget = false;
        note("child " + to_string(P) + " missing from the collection");
      }
      covered += std::ldexp(1.0, e.Q.depth - P.depth);
    }
    const double b = cert.mode == DominationMode::Weighted ? e.budget : covered;
    if (b > 0.5) {
      v.budget = false;
      note("children of " + to_string(e.Q) + " occupy " + std::to_string(b) + " of it");
    }
    sum += e.lambda_Q;
    abs_sum += std::abs(e.lambda_Q);
    rhs += e.term_Q;
  }
  if (!cert.per_Q.empty() && cert.carleson > 2.0 * (1 + 1e-12)) {
    v.budget = false;
    note("Carleson constant " + std::to_string(cert.carleson) + " exceeds 2");
  }

  if (!close(sum, cert.lambda_total, abs_sum) || !close(std::abs(cert.lambda_total), cert.lhs, abs_sum)) {
    v.reconstruction = false;
    note("sub-family forms do not add up to the full form");
  }
  if (!close(rhs, cert.rhs, rhs)) {
    v.inequality = false;
    note("right-hand side does not match the per-interval terms");
  }
  if (!std::isfinite(cert.realized_constant) || cert.lhs > cert.realized_constant * cert.rhs * (1 + 1e-9) + 1e-300) {
    v.inequality = false;
    note("domination inequality fails with the recorded constant");
  }
  return v;
}

Verification verify(const DominationCertificate& cert, const HaarMultiplier& T, const Signal& f, const Signal& g,
                    const Weight* w) {
  Verification v = verify(cert);
  const Inputs in = prepare_inputs(T, f, g);
  IntervalSet assigned(T.depth());
  for (const auto& e : cert.per_Q) {
    for (const auto& I : e.family) {
      if (!T.family().contains(I)) {
        v.partition = false;
        v.detail += "; " + to_string(I) + " is not in the multiplier family";
      } else {
        assigned.insert(I);
      }
    }
    const double lam = bilinear_form(T, in.a, in.b, e.family);
    if (!close(lam, e.lambda_Q, std::abs(lam))) {
      v.reconstruction = false;
      v.detail += "; lambda_Q mismatch at " + to_string(e.Q);
    }
    if (cert.mode == DominationMode::Weighted && w) {
      double s = 0.0;
      for (const auto& P : e.children) s += w->mass(P);
      if (s > 0.5 * w->mass(e.Q)) {
        v.budget = false;
        v.detail += "; weighted child budget fails at " + to_string(e.Q);
      }
    }
  }
  if (cert.mode == DominationMode::Weighted && w && !cert.per_Q.empty() &&
      carleson_constant(cert.collection(), *w) > 2.0 * (1 + 1e-12)) {
    v.budget = false;
    v.detail += "; weighted Carleson constant exceeds 2";
  }
  if (assigned.size() != T.family().size()) {
    v.partition = false;
    v.detail += "; some multiplier intervals are unassigned";
  }
  if (!close(in.lambda_total, cert.lambda_total, std::abs(in.lambda_total))) {
    v.reconstruction = false;
    v.detail += "; full form mismatch";
  }
  return v;
}

SparseCollection principal_intervals(const Signal& f, const Interval& Q0, double factor) {
  const int J = f.depth();
  require_interval(Q0, J);
  std::vector<double> absf(f.size());
  for (std::size_t c = 0; c < f.size(); ++c) absf[c] = std::abs(f[c]);
  const auto sums = interval_sums(absf, J);
  auto avg = [&](const Interval& I) { return sums[I.heap_id()] / double(I.cell_count(J)); };
  std::vector<Interval> out;
  std::deque<Interval> queue{Q0};
  while (!queue.empty()) {
    const Interval Q = queue.front();
    queue.pop_front();
    out.push_back(Q);
    const double threshold = factor * avg(Q);
    std::vector<Interval> todo;
    if (Q.depth < J) todo = {Q.child(1), Q.child(0)};
    while (!todo.empty()) {
      const Interval P = todo.back();
      todo.pop_back();
      if (avg(P) > threshold) {
        queue.push_back(P);
      } else if (P.depth < J) {
        todo.push_back(P.child(1));
        todo.push_back(P.child(0));
      }
    }
  }
  return SparseCollection(J, std::move(out));
}

LernerDecomposition lerner_decompose(const Signal& phi, const Interval& Q0, double lambda) {
  if (!(lambda > 0.0 && lambda < 0.5)) fail(Error::Code::InvalidArgument, "lerner_decompose: lambda must lie in (0,1/2)");
  const int J = phi.depth();
  require_interval(Q0, J);
  const double delta = lambda < 0.2 ? 2 * lambda : (1 - lambda) / 3;

  LernerDecomposition out;
  out.lambda = lambda;
  out.median = median(phi, Q0);
  std::vector<Interval> qs;
  std::vector<OscillationFit> fits;
  std::deque<Interval> queue{Q0};
  std::vector<int> bad(interval_count(J));
  while (!queue.empty()) {
    const Interval Q = queue.front();
    queue.pop_front();
    const OscillationFit fit = local_mean_oscillation_fit(phi, Q, lambda);
    qs.push_back(Q);
    fits.push_back(fit);
    // bad[] counts cells of E_Q = {phi outside the optimal window} per node.
    const std::size_t first = Q.first_cell(J);
    for (std::size_t k = 0; k < Q.cell_count(J); ++k) {
      const double x = phi[first + k];
      bad[Interval{J, first + k}.heap_id()] = (x < fit.lo || x > fit.hi) ? 1 : 0;
    }
    for (int d = J - 1; d >= Q.depth; --d) {
      const std::uint64_t lo = Q.index << (d - Q.depth), hi = (Q.index + 1) << (d - Q.depth);
      for (std::uint64_t i = lo; i < hi; ++i) {
        const std::size_t id = Interval{d, i}.heap_id();
        bad[id] = bad[2 * id + 1] + bad[2 * id + 2];
      }
    }
    std::vector<Interval> todo;
    if (Q.depth < J) todo = {Q.child(1), Q.child(0)};
    double covered = 0.0;
    while (!todo.empty()) {
      const Interval P = todo.back();
      todo.pop_back();
      if (double(bad[P.heap_id()]) > delta * double(P.cell_count(J))) {
        queue.push_back(P);
        covered += std::ldexp(1.0, Q.depth - P.depth);
      } else if (P.depth < J && bad[P.heap_id()] > 0) {
        todo.push_back(P.child(1));
        todo.push_back(P.child(0));
      }
    }
    out.budget_max = std::max(out.budget_max, covered);
  }

  out.collection = SparseCollection(J, qs);
  out.omega.resize(qs.size());
  out.center.resize(qs.size());
  std::vector<double> acc(interval_count(J), 0.0);
  for (std::size_t k = 0; k < qs.size(); ++k) {
    const std::size_t pos = out.collection.position(qs[k]);
    out.omega[pos] = fits[k].value;
    out.center[pos] = fits[k].center;
    acc[qs[k].heap_id()] += fits[k].value;
  }
  for (std::size_t id = 1; id < acc.size(); ++id) acc[id] += acc[(id - 1) / 2];
  const std::size_t leaf0 = (std::size_t(1) << J) - 1, first = Q0.first_cell(J);
  for (std::size_t k = 0; k < Q0.cell_count(J); ++k) {
    const double dev = std::abs(phi[first + k] - out.median);
    const double bound = acc[leaf0 + first + k];
    out.realized_K = std::max(out.realized_K, ratio(dev, bound));
    if (dev > 3.0 * bound * (1 + 1e-12)) out.bound_holds = false;
  }
  return out;
}

} // namespace sparsedom
