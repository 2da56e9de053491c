// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// quantities and runtime. Exit status is non-zero if any criterion fails.

#include "harness.hpp"
#include "maximal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace sparsedom;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

Signal signal_for(int trial, int J, std::uint64_t seed) {
  static const char* kinds[] = {"gaussian_noise", "sparse_haar:24", "step", "sparse_haar:3"};
  return generate_signal(SignalKind::parse(kinds[trial % 4]), J, seed);
}

Signal centered(Signal f) {
  const double m = f.integral();
  for (double& x : f.data()) x -= m;
  return f;
}

double child_budget(const CertificateEntry& e) {
  double s = 0.0;
  for (const auto& P : e.children) s += P.length();
  return s / e.Q.length();
}

/// Every interval of T's family sits in exactly one I_Q, inside Q.
bool exact_partition(const DominationCertificate& c, const HaarMultiplier& T) {
  std::vector<int> seen(interval_count(c.depth), 0);
  for (const auto& e : c.per_Q)
    for (const auto& I : e.family) {
      if (!e.Q.contains(I)) return false;
      ++seen[I.heap_id()];
    }
  for (std::size_t id = 0; id + 1 < (std::size_t(1) << c.depth); ++id)
    if (seen[id] != (T.family().contains_id(id) ? 1 : 0)) return false;
  return true;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome out;
  const auto t0 = Clock::now();
  int budget_ok = 0, carleson_fail = 0;
  double max_lambda = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t seed = trial_seed(101, t);
    // half from principal intervals, half from the square-function stopping time
    SparseCollection S;
    if (t % 2 == 0) {
      S = random_sparse_collection(10, seed);
    } else {
      const auto a = haar_transform(signal_for(t, 10, seed));
      const auto run = detail::lr_stopping(a, a.support(), 0.5, nullptr, {});
      std::vector<Interval> v;
      for (const auto& st : run.steps) v.push_back(st.Q);
      S = SparseCollection(10, v);
    }
    const auto ratios = child_complement_ratios(S);
    if (ratios.empty() || *std::min_element(ratios.begin(), ratios.end()) < 0.5) continue;
    ++budget_ok;
    const double lam = carleson_constant(S);
    max_lambda = std::max(max_lambda, lam);
    if (lam > 2.0) ++carleson_fail;
  }
  double lo = 1e300, hi = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t seed = trial_seed(102, t);
    const SparseCollection S = random_sparse_collection(6, seed);
    const double prod = fractional_sparsity(S) * carleson_constant(S);
    lo = std::min(lo, prod);
    hi = std::max(hi, prod);
  }
  const double secs = seconds_since(t0);
  out.pass = budget_ok == 200 && carleson_fail == 0 && lo >= 0.25 && hi <= 4.0 && secs < 10.0;
  out.detail = "collections with eta=1/2: " + std::to_string(budget_ok) + "/200, max Lambda " + fmt(max_lambda) +
               ", LP eta*Lambda in [" + fmt(lo) + ", " + fmt(hi) + "], " + fmt(secs) + " s (limit 10 s)";
  return out;
}

struct DomStats {
  int trials = 0, partition_fail = 0, budget_fail = 0, verify_fail = 0, local_fail = 0;
  double max_K = 0.0;
  std::vector<std::pair<double, double>> lhs_rhs;
  std::string first_failure;
};

void record(DomStats& s, const DominationCertificate& c, const HaarMultiplier& T, const Signal& f, const Signal& g) {
  ++s.trials;
  if (!exact_partition(c, T)) ++s.partition_fail;
  for (const auto& e : c.per_Q)
    if (child_budget(e) > 0.5) {
      ++s.budget_fail;
      break;
    }
  const auto v = verify(c, T, f, g);
  if (!v.ok()) {
    ++s.verify_fail;
    if (s.first_failure.empty()) s.first_failure = v.detail;
  }
  if (std::isfinite(c.realized_constant)) s.max_K = std::max(s.max_K, c.realized_constant);
  else s.max_K = c.realized_constant;
  s.lhs_rhs.emplace_back(c.lhs, c.rhs);
}

/// |Lambda| <= K_max * RHS on every trial with relative slack 1e-9.
bool inequality_holds(const DomStats& s) {
  if (!std::isfinite(s.max_K)) return false;
  for (auto [l, r] : s.lhs_rhs)
    if (l > s.max_K * r * (1 + 1e-9)) return false;
  return true;
}

std::string describe(const DomStats& s) {
  std::string d = std::to_string(s.trials) + " trials, partition failures " + std::to_string(s.partition_fail) +
                  ", budget failures " + std::to_string(s.budget_fail) + ", verify failures " +
                  std::to_string(s.verify_fail) + ", max K " + fmt(s.max_K);
  if (!s.first_failure.empty()) d += " (" + s.first_failure + ")";
  return d;
}

bool clean(const DomStats& s) {
  return s.partition_fail == 0 && s.budget_fail == 0 && s.verify_fail == 0 && s.local_fail == 0 &&
         inequality_holds(s);
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  DomStats s;
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t seed = trial_seed(201, t);
    const auto T = random_multiplier(10, splitmix64(seed + 3), t % 3 == 0 ? 0.5 : 1.0);
    const Signal f = signal_for(t, 10, splitmix64(seed + 1)), g = signal_for(t + 1, 10, splitmix64(seed + 2));
    record(s, dominate_avg(T, f, g, 8), T, f, g);
  }
  const double secs = seconds_since(t0);
  return {clean(s) && secs < 30.0, describe(s) + ", " + fmt(secs) + " s (limit 30 s)"};
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  Outcome out;
  for (auto [p, q] : {std::pair{2.0, 2.0}, {1.0, 1.0}, {0.5, 0.5}}) {
    DomStats s;
    for (int t = 0; t < 200; ++t) {
      const std::uint64_t seed = trial_seed(301, t);
      const auto T = random_multiplier(10, splitmix64(seed + 3), t % 3 == 0 ? 0.5 : 1.0);
      const Signal f = signal_for(t, 10, splitmix64(seed + 1)), g = signal_for(t + 1, 10, splitmix64(seed + 2));
      const auto c = dominate_square(T, f, g, p, q);
      record(s, c, T, f, g);
      if (p == 2.0)
        for (const auto& e : c.per_Q)
          if (e.local_constant > T.max_abs_eps() * (1 + 1e-9)) {
            ++s.local_fail;
            break;
          }
    }
    out.pass = out.pass && clean(s);
    out.detail += "(p,q)=(" + fmt(p) + "," + fmt(q) + "): " + describe(s);
    if (p == 2.0) out.detail += ", local-constant failures " + std::to_string(s.local_fail);
    out.detail += "; ";
  }
  out.detail += fmt(seconds_since(t0)) + " s";
  return out;
}

Outcome criterion4() {
  const auto t0 = Clock::now();
  Outcome out;
  double worst_recon = 0.0, worst_ratio = 0.0, worst_mean = 0.0;
  int support_fail = 0;
  for (double p : {0.5, 1.0}) {
    double max_K = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Signal f = signal_for(t, 10, trial_seed(401, t));
      const auto d = atomic_decompose(f, p, p / 2);
      const auto chk = check_atoms(d, f);
      worst_recon = std::max(worst_recon, chk.reconstruction_error);
      worst_ratio = std::max(worst_ratio, chk.max_norm_ratio);
      // cancellation relative to the atom's sup norm
      for (const auto& a : d.atoms) {
        double sup = 0.0, sum = 0.0;
        for (double x : a.values.values()) {
          sup = std::max(sup, std::abs(x));
          sum += x;
        }
        worst_mean = std::max(worst_mean, std::abs(sum * f.cell_measure()) / sup);
      }
      if (!chk.support_ok || !chk.budget_ok) ++support_fail;
      max_K = std::max(max_K, d.budget_constant);
    }
    out.detail += "p=" + fmt(p) + ": max sum c^p / ||Sf||_p^p = " + fmt(max_K) + "; ";
    out.pass = out.pass && std::isfinite(max_K);
  }
  // closed form: f = tilde h on [0,1/2), p = 1
  const Signal h = tilde_haar(Interval{1, 0}, 10);
  const auto d = atomic_decompose(h, 1.0, 0.5);
  bool closed = d.atoms.size() == 1 && d.atoms[0].Q == Interval{1, 0} && d.atoms[0].c_Q == 0.5;
  if (closed) {
    double sq = 0.0;
    for (double x : d.atoms[0].values.values()) sq += x * x * h.cell_measure();
    closed = std::sqrt(sq) == std::sqrt(2.0);
  }
  out.pass = out.pass && worst_recon < 1e-12 && worst_ratio <= 1 + 1e-12 && worst_mean <= 1e-12 &&
             support_fail == 0 && closed;
  out.detail += "max reconstruction error " + fmt(worst_recon) + ", max norm ratio " + fmt(worst_ratio) +
                ", max relative mean " + fmt(worst_mean) + ", support/budget failures " +
                std::to_string(support_fail) + ", single-mode closed form " + (closed ? "exact" : "WRONG") + ", " +
                fmt(seconds_since(t0)) + " s";
  return out;
}

Outcome criterion5() {
  const auto t0 = Clock::now();
  const int J = 10;
  std::vector<Weight> weights;
  std::vector<double> a2s;
  const WeightKind::Type kinds[] = {WeightKind::Type::TwoLevel, WeightKind::Type::DyadicDoubling,
                                    WeightKind::Type::PowerLike};
  for (int k = 0; k < 50; ++k) {
    const double target = std::pow(100.0, k / 49.0);
    Weight w = weight_with_a2(kinds[k % 3], J, trial_seed(501, k), target);
    a2s.push_back(ap_characteristic(w, 2.0));
    weights.push_back(std::move(w));
  }
  const double a2_min = *std::min_element(a2s.begin(), a2s.end()),
               a2_max = *std::max_element(a2s.begin(), a2s.end());

  std::vector<Signal> fs;
  std::vector<HaarMultiplier> Ts;
  for (int t = 0; t < 50; ++t) {
    fs.push_back(signal_for(t, J, trial_seed(502, t)));
    Ts.push_back(random_multiplier(J, trial_seed(503, t), t % 2 ? 1.0 : 0.6));
  }
  int contract_fail = 0, hardy_fail = 0;
  for (int t = 0; t < 50; ++t) {
    const auto a = haar_transform(fs[t]);
    const auto Ta = multiplier_coefficients(Ts[t], a);
    if (!square_function_contracts(Ts[t], a)) ++contract_fail;
    for (const auto& w : weights)
      for (double p : {0.5, 1.0})
        if (hardy_norm(Ta, p, w) > hardy_norm(a, p, w)) ++hardy_fail;
  }

  // Per weight: largest pairing constant over pairs (f, g = T f).
  std::vector<double> consts;
  int cert_fail = 0;
  for (const auto& w : weights) {
    double best = 0.0;
    for (int t = 0; t < 8; ++t) {
      const Signal g = apply_multiplier(Ts[t], fs[t]);
      const auto c = dominate_weighted(Ts[t], fs[t], g, 1.0, 0.5, w);
      if (!verify(c, Ts[t], fs[t], g, &w).ok()) ++cert_fail;
      best = std::max(best, c.pairing_constant);
    }
    consts.push_back(best);
  }
  const double cmin = *std::min_element(consts.begin(), consts.end()),
               cmax = *std::max_element(consts.begin(), consts.end());
  const double spread = cmax / cmin;
  Outcome out;
  out.pass = contract_fail == 0 && hardy_fail == 0 && cert_fail == 0 && a2_min >= 1.0 && a2_max <= 100.0 &&
             spread <= 10.0;
  out.detail = "A2 range [" + fmt(a2_min) + ", " + fmt(a2_max) + "], S(Tf)<=S(f) failures " +
               std::to_string(contract_fail) + ", Hardy-norm failures " + std::to_string(hardy_fail) +
               " of 5000, certificate failures " + std::to_string(cert_fail) + ", pairing constant in [" +
               fmt(cmin) + ", " + fmt(cmax) + "] spread " + fmt(spread) + (spread > 10.0 ? " FLAGGED (>10)" : "") +
               ", " + fmt(seconds_since(t0)) + " s";
  return out;
}

Outcome criterion6() {
  const auto t0 = Clock::now();
  Outcome out;
  std::vector<double> Ks;
  int cz_fail = 0, weak_fail = 0, skipped = 0;
  for (int J : {8, 10, 12}) {
    double K = 0.0;
    for (int t = 0; t < 100; ++t) {
      const std::uint64_t seed = trial_seed(601, t);
      const SparseCollection S = random_sparse_collection(J, splitmix64(seed + 1));
      if (carleson_constant(S) > 2.0) {
        ++skipped;
        continue;
      }
      const Signal f = signal_for(t, J, splitmix64(seed + 2));
      const auto rep = weak11_certify(WeakOperator::sparse(S), f, 4.0, splitmix64(seed + 3), J == 12 ? 8 : 32);
      if (!rep.consistent() || !rep.major_ok() || !rep.annihilation_ok) ++weak_fail;
      K = std::max(K, rep.exact_weak);
      const double base = lp_norm(f, 1.0);
      for (double factor : {1.0, 2.0, 8.0}) {
        if (base == 0.0) break;
        const auto d = cz_decompose(f, factor * base);
        if (!check_cz(d, f).ok(factor * base)) ++cz_fail;
      }
    }
    Ks.push_back(K);
  }
  const double ref = Ks[1];
  bool stable = true;
  for (double K : Ks) stable = stable && std::abs(K - ref) <= 0.2 * ref;
  out.pass = cz_fail == 0 && weak_fail == 0 && skipped == 0 && stable;
  out.detail = "max weak ratio K at J=8,10,12: " + fmt(Ks[0]) + ", " + fmt(Ks[1]) + ", " + fmt(Ks[2]) +
               (stable ? " (within 20% of J=10)" : " (NOT within 20% of J=10)") + ", CZ failures " +
               std::to_string(cz_fail) + ", weak-type report failures " + std::to_string(weak_fail) +
               ", collections above Carleson 2: " + std::to_string(skipped) + ", " + fmt(seconds_since(t0)) + " s";
  return out;
}

Outcome criterion7() {
  const auto t0 = Clock::now();
  const int J = 10;
  double K = 0.0;
  int cert_fail = 0;
  std::string first;
  const auto T = HaarMultiplier::uniform(J, 1.0);
  for (int t = 0; t < 100; ++t) {
    const std::uint64_t seed = trial_seed(701, t);
    const Signal f = centered(signal_for(t, J, splitmix64(seed + 1)));
    // every fourth pair is f with itself
    const Signal g = t % 4 == 3 ? f : centered(signal_for(t + 2, J, splitmix64(seed + 2)));
    const Signal mf = maximal(f, MaximalKind::sharp()), mg = maximal(g, MaximalKind::sharp());
    double fg = 0.0, sharp = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      fg += f[k] * g[k] * f.cell_measure();
      sharp += mf[k] * mg[k] * f.cell_measure();
    }
    if (sharp > 0.0) K = std::max(K, fg / sharp);
    const auto c = dominate_oscillation(T, f, g);
    const auto v = verify(c, T, f, g);
    if (!v.ok()) {
      ++cert_fail;
      if (first.empty()) first = v.detail;
    }
  }
  Outcome out;
  out.pass = cert_fail == 0 && std::isfinite(K);
  out.detail = "max of integral fg / integral M#f M#g = " + fmt(K) + ", oscillation certificate failures " +
               std::to_string(cert_fail) + (first.empty() ? "" : " (" + first + ")") + ", " +
               fmt(seconds_since(t0)) + " s";
  return out;
}

/// inf_c ((phi - c) 1_Q)^*(lambda |Q|) by scanning every value and pairwise
/// midpoint of the distinct values on Q. Values are multiples of 1/16, so
/// every difference is exact in double precision.
double brute_oscillation(const Signal& phi, const Interval& Q, double lambda) {
  const auto on = phi.on(Q);
  std::vector<double> distinct(on.begin(), on.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<double> cands = distinct;
  for (std::size_t a = 0; a < distinct.size(); ++a)
    for (std::size_t b = a + 1; b < distinct.size(); ++b) cands.push_back((distinct[a] + distinct[b]) / 2);
  const std::size_t k = std::size_t(std::floor(lambda * double(on.size())));
  std::vector<double> dev(on.size());
  double best = INFINITY;
  for (double c : cands) {
    for (std::size_t i = 0; i < on.size(); ++i) dev[i] = std::abs(on[i] - c);
    if (k >= dev.size()) return 0.0;
    std::nth_element(dev.begin(), dev.begin() + std::ptrdiff_t(k), dev.end(), std::greater<double>());
    best = std::min(best, dev[k]);
  }
  return best;
}

Outcome criterion8() {
  const auto t0 = Clock::now();
  const int J = 10;
  const double lambda = 0.125;
  int bound_fail = 0, omega_mismatch = 0;
  std::size_t compared = 0;
  double K = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::mt19937_64 rng(trial_seed(801, t));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Signal base = signal_for(t, J, rng());
    std::vector<double> v(base.size());
    for (std::size_t k = 0; k < v.size(); ++k)
      v[k] = std::clamp(std::round(8.0 * (base[k] + 0.3 * gauss(rng))), -40.0, 40.0) / 16.0;
    const Signal phi(J, v);
    const auto L = lerner_decompose(phi, Interval::root(), lambda);
    if (!L.bound_holds) ++bound_fail;
    K = std::max(K, L.realized_K);
    for (std::size_t q = 0; q < L.collection.size(); ++q) {
      ++compared;
      if (L.omega[q] != brute_oscillation(phi, L.collection.intervals()[q], lambda)) ++omega_mismatch;
    }
  }
  Outcome out;
  out.pass = bound_fail == 0 && omega_mismatch == 0;
  out.detail = "pointwise bound with K=3 failed on " + std::to_string(bound_fail) + "/100, realized K max " +
               fmt(K) + ", omega mismatches " + std::to_string(omega_mismatch) + " of " + std::to_string(compared) +
               ", " + fmt(seconds_since(t0)) + " s";
  return out;
}

} // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 sparse/Carleson equivalence", criterion1}, {"2 average-mode domination", criterion2},
      {"3 square-function domination", criterion3},  {"4 atomic decomposition", criterion4},
      {"5 weighted uniformity", criterion5},         {"6 weak (1,1)", criterion6},
      {"7 oscillation and Fefferman-Stein", criterion7}, {"8 Lerner decomposition", criterion8},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of 8 criteria passed\n", 8 - failed);
  return failed ? 1 : 0;
}
