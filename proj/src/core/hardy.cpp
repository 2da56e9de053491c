#include "hardy.hpp"

#include "domination.hpp"

#include <algorithm>
#include <cmath>

namespace sparsedom {

double ap_characteristic(const Weight& w, double p) {
  if (!(p > 1.0)) fail(Error::Code::InvalidArgument, "ap_characteristic: p must exceed 1");
  const int J = w.depth();
  std::vector<double> dual(w.size());
  for (std::size_t c = 0; c < w.size(); ++c) dual[c] = std::pow(w[c], -1.0 / (p - 1.0));
  const auto sw = interval_sums(w.values(), J);
  const auto sd = interval_sums(dual, J);
  double best = 0.0;
  for (std::size_t id = 0; id < sw.size(); ++id) {
    const double n = double(Interval::from_heap_id(id).cell_count(J));
    best = std::max(best, (sw[id] / n) * std::pow(sd[id] / n, p - 1.0));
  }
  return best;
}

double rh_characteristic(const Weight& w, double q) {
  if (!(q > 1.0)) fail(Error::Code::InvalidArgument, "rh_characteristic: q must exceed 1");
  const int J = w.depth();
  std::vector<double> wq(w.size());
  for (std::size_t c = 0; c < w.size(); ++c) wq[c] = std::pow(w[c], q);
  const auto sw = interval_sums(w.values(), J);
  const auto sq = interval_sums(wq, J);
  double best = 0.0;
  for (std::size_t id = 0; id < sw.size(); ++id) {
    const double n = double(Interval::from_heap_id(id).cell_count(J));
    best = std::max(best, std::pow(sq[id] / n, 1.0 / q) / (sw[id] / n));
  }
  return best;
}

namespace {

void check_hardy_exponent(double p) {
  if (!(p > 0.0 && p <= 1.0)) fail(Error::Code::InvalidArgument, "Hardy exponent p must lie in (0,1]");
}

} // namespace

double hardy_norm(const HaarCoefficients& a, double p, const Weight& w) {
  check_hardy_exponent(p);
  require_same_depth(a.depth(), w.depth(), "hardy_norm");
  return lp_norm(square_function(a), p, &w);
}

double hardy_norm(const Signal& f, double p, const Weight& w) { return hardy_norm(haar_transform(f), p, w); }

double cmo_norm(const HaarCoefficients& a, double p, const Weight& w) {
  check_hardy_exponent(p);
  require_same_depth(a.depth(), w.depth(), "cmo_norm");
  const int J = a.depth();
  const std::size_t inner = (std::size_t(1) << J) - 1;
  std::vector<double> e(interval_count(J), 0.0);
  for (std::size_t id = inner; id-- > 0;) {
    const Interval I = Interval::from_heap_id(id);
    const double c = a.by_id(id);
    e[id] = c * c * I.length() / w.mass(I) + e[2 * id + 1] + e[2 * id + 2];
  }
  double best = 0.0;
  for (std::size_t id = 0; id < inner; ++id) {
    const double m = w.mass(Interval::from_heap_id(id));
    best = std::max(best, std::pow(m, -1.0 / p) * std::sqrt(m * e[id]));
  }
  return best;
}

double cmo_norm(const Signal& g, double p, const Weight& w) { return cmo_norm(haar_transform(g), p, w); }

bool square_function_contracts(const HaarMultiplier& T, const HaarCoefficients& a) {
  const Signal Sf = square_function(a);
  const Signal STf = square_function(multiplier_coefficients(T, a));
  for (std::size_t c = 0; c < Sf.size(); ++c)
    if (STf[c] > Sf[c]) return false;
  return true;
}

SparseCollection AtomicDecomposition::collection() const {
  std::vector<Interval> qs;
  for (const auto& a : atoms) qs.push_back(a.Q);
  return SparseCollection(depth, std::move(qs));
}

namespace {

/// sum_I t_I (1_left(I) - 1_right(I)) from heap-indexed t.
Signal tilde_synthesis(const std::vector<double>& t, int J) {
  std::vector<double> cur{0.0}, next;
  for (int d = 0; d < J; ++d) {
    next.resize(cur.size() * 2);
    const std::size_t base = (std::size_t(1) << d) - 1;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[2 * i] = cur[i] + t[base + i];
      next[2 * i + 1] = cur[i] - t[base + i];
    }
    cur.swap(next);
  }
  return Signal(J, std::move(cur));
}

} // namespace

AtomicDecomposition atomic_decompose(const Signal& f, double p, double r, double C, int max_retries) {
  check_hardy_exponent(p);
  if (!(r > 0.0 && r < p)) fail(Error::Code::InvalidArgument, "atomic_decompose: r must lie in (0,p)");
  const int J = f.depth();
  const HaarCoefficients a = haar_transform(f);
  AtomicDecomposition out;
  out.depth = J;
  out.p = p;
  out.r = r;
  out.removed_mean = a.mean();

  const IntervalSet family = a.support();
  const auto run = detail::lr_stopping(a, family, r, nullptr, {C, max_retries});
  out.C = run.C;
  out.retries = run.retries;
  // Coefficients against 1_left - 1_right: half the difference of the child
  // averages. Exact for dyadic data, unlike a_I.
  const auto sums = interval_sums(f.values(), J);
  auto tilde = [&](const Interval& I) {
    const std::size_t id = I.heap_id();
    return std::ldexp(sums[2 * id + 1] - sums[2 * id + 2], -(J - I.depth));
  };
  for (const auto& s : run.steps) {
    out.child_budget_max = std::max(out.child_budget_max, s.budget);
    double energy = 0.0;
    for (const auto& I : s.family) energy += I.length() * tilde(I) * tilde(I);
    if (energy == 0.0) continue;
    Atom atom;
    atom.Q = s.Q;
    atom.family = s.family;
    atom.c_Q = std::sqrt(std::pow(s.Q.length(), 2.0 / p - 1.0) * energy);
    std::vector<double> step(a.dense().size(), 0.0);
    for (const auto& I : s.family) step[I.heap_id()] = tilde(I) / atom.c_Q;
    atom.values = tilde_synthesis(step, J);
    out.lp_budget += std::pow(atom.c_Q, p);
    out.atoms.push_back(std::move(atom));
  }
  out.hardy_norm_p = std::pow(lp_norm(square_function(a), p), p);
  out.budget_constant = out.hardy_norm_p > 0.0 ? out.lp_budget / out.hardy_norm_p : 0.0;
  return out;
}

AtomCheck check_atoms(const AtomicDecomposition& d, const Signal& f) {
  require_same_depth(d.depth, f.depth(), "check_atoms");
  AtomCheck out;
  std::vector<double> rebuilt(f.size(), 0.0);
  const double h = f.cell_measure();
  for (const auto& atom : d.atoms) {
    const std::size_t first = atom.Q.first_cell(d.depth), last = first + atom.Q.cell_count(d.depth);
    double sum = 0.0, sq = 0.0;
    for (std::size_t c = 0; c < f.size(); ++c) {
      const double v = atom.values[c];
      if ((c < first || c >= last) && v != 0.0) out.support_ok = false;
      sum += v;
      sq += v * v;
      rebuilt[c] += atom.c_Q * v;
    }
    out.max_mean = std::max(out.max_mean, std::abs(sum * h));
    const double bound = std::pow(atom.Q.length(), 0.5 - 1.0 / d.p);
    out.max_norm_ratio = std::max(out.max_norm_ratio, std::sqrt(sq * h) / bound);
  }
  for (std::size_t c = 0; c < f.size(); ++c)
    out.reconstruction_error = std::max(out.reconstruction_error, std::abs(f[c] - d.removed_mean - rebuilt[c]));
  const auto S = d.collection();
  for (double ratio : child_complement_ratios(S))
    if (ratio < 0.5) out.budget_ok = false;
  return out;
}

} // namespace sparsedom
