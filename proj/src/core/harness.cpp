#include "harness.hpp"

#include "maximal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace sparsedom {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t i) { return splitmix64(master ^ splitmix64(i)); }

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) out.push_back(part);
  return out;
}

double parse_param(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(Error::Code::InvalidArgument, "bad parameter '" + s + "' in " + what);
}

} // namespace

SignalKind SignalKind::parse(const std::string& s) {
  const auto parts = split(s, ':');
  SignalKind k;
  if (parts.empty()) fail(Error::Code::InvalidArgument, "empty signal kind");
  if (parts[0] == "gaussian_noise" && parts.size() == 1) return k;
  if (parts[0] == "step" && parts.size() == 1) {
    k.type = Type::Step;
    return k;
  }
  if (parts[0] == "sparse_haar" && parts.size() == 2) {
    k.type = Type::SparseHaar;
    k.modes = int(parse_param(parts[1], s));
    if (k.modes < 1) fail(Error::Code::InvalidArgument, "sparse_haar needs at least one mode");
    return k;
  }
  if (parts[0] == "single_mode" && parts.size() == 3) {
    k.type = Type::SingleMode;
    const double d = parse_param(parts[1], s), i = parse_param(parts[2], s);
    if (d < 0 || i < 0) fail(Error::Code::InvalidArgument, "single_mode needs a nonnegative depth and index");
    k.interval = {int(d), std::uint64_t(i)};
    if (!k.interval.valid()) fail(Error::Code::InvalidArgument, "single_mode interval out of range");
    return k;
  }
  fail(Error::Code::InvalidArgument, "unknown signal kind '" + s + "'");
}

std::string SignalKind::str() const {
  switch (type) {
  case Type::GaussianNoise: return "gaussian_noise";
  case Type::SparseHaar: return "sparse_haar:" + std::to_string(modes);
  case Type::Step: return "step";
  case Type::SingleMode: return "single_mode:" + std::to_string(interval.depth) + ":" + std::to_string(interval.index);
  }
  return "?";
}

Signal generate_signal(const SignalKind& kind, int J, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = std::size_t(1) << J;
  switch (kind.type) {
  case SignalKind::Type::GaussianNoise: {
    std::vector<double> v(n);
    for (double& x : v) x = gauss(rng);
    return Signal(J, std::move(v));
  }
  case SignalKind::Type::SparseHaar: {
    if (J < 1) fail(Error::Code::InvalidArgument, "sparse_haar needs depth >= 1");
    Signal s = Signal::zeros(J);
    std::uniform_int_distribution<std::size_t> pick(0, n - 2);
    for (int m = 0; m < kind.modes; ++m) {
      const Interval I = Interval::from_heap_id(pick(rng));
      const double c = gauss(rng);
      const Signal h = tilde_haar(I, J);
      for (std::size_t k = 0; k < n; ++k) s.data()[k] += c * h[k];
    }
    return s;
  }
  case SignalKind::Type::Step: {
    std::uniform_int_distribution<std::size_t> cut(1, n - 1);
    std::vector<std::size_t> cuts{0, n};
    for (int k = 0; k < 4; ++k) cuts.push_back(cut(rng));
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> v(n);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double level = gauss(rng);
      for (std::size_t c = cuts[k]; c < cuts[k + 1]; ++c) v[c] = level;
    }
    return Signal(J, std::move(v));
  }
  case SignalKind::Type::SingleMode: return tilde_haar(kind.interval, J);
  }
  return Signal::zeros(J);
}

WeightKind WeightKind::parse(const std::string& s) {
  const auto parts = split(s, ':');
  WeightKind k;
  if (parts.empty()) fail(Error::Code::InvalidArgument, "empty weight kind");
  if (parts[0] == "constant" && parts.size() <= 2) {
    k.param = parts.size() == 2 ? parse_param(parts[1], s) : 1.0;
  } else if (parts[0] == "two_level" && parts.size() == 2) {
    k.type = Type::TwoLevel;
    k.param = parse_param(parts[1], s);
  } else if (parts[0] == "dyadic_doubling" && parts.size() == 2) {
    k.type = Type::DyadicDoubling;
    k.param = parse_param(parts[1], s);
  } else if (parts[0] == "power_like" && parts.size() == 2) {
    k.type = Type::PowerLike;
    k.param = parse_param(parts[1], s);
    return k;
  } else {
    fail(Error::Code::InvalidArgument, "unknown weight kind '" + s + "'");
  }
  if (!(k.param > 0.0)) fail(Error::Code::InvalidArgument, "weight parameter must be positive in '" + s + "'");
  return k;
}

std::string WeightKind::str() const {
  std::ostringstream out;
  switch (type) {
  case Type::Constant: out << "constant:" << param; break;
  case Type::TwoLevel: out << "two_level:" << param; break;
  case Type::DyadicDoubling: out << "dyadic_doubling:" << param; break;
  case Type::PowerLike: out << "power_like:" << param; break;
  }
  return out.str();
}

Weight generate_weight(const WeightKind& kind, int J, std::uint64_t seed) {
  const std::size_t n = std::size_t(1) << J;
  std::vector<double> v(n);
  switch (kind.type) {
  case WeightKind::Type::Constant:
    if (!(kind.param > 0.0)) fail(Error::Code::InvalidArgument, "constant weight must be positive");
    std::fill(v.begin(), v.end(), kind.param);
    break;
  case WeightKind::Type::TwoLevel:
    if (!(kind.param > 0.0)) fail(Error::Code::InvalidArgument, "two_level parameter must be positive");
    for (std::size_t c = 0; c < n; ++c) v[c] = c < n / 2 ? 1.0 : kind.param;
    if (J == 0) v[0] = 1.0;
    break;
  case WeightKind::Type::DyadicDoubling: {
    const double delta = kind.param;
    if (!(delta > 0.0)) fail(Error::Code::InvalidArgument, "dyadic_doubling parameter must be positive");
    // Each interval hands 1/(1+delta) of its mass to a random child.
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::vector<double> mass{1.0}, next;
    for (int d = 0; d < J; ++d) {
      next.resize(mass.size() * 2);
      for (std::size_t i = 0; i < mass.size(); ++i) {
        const double big = mass[i] / (1.0 + delta), small = mass[i] - big;
        const bool left_big = coin(rng);
        next[2 * i] = left_big ? big : small;
        next[2 * i + 1] = left_big ? small : big;
      }
      mass.swap(next);
    }
    for (std::size_t c = 0; c < n; ++c) v[c] = mass[c] * double(n);
    break;
  }
  case WeightKind::Type::PowerLike:
    for (std::size_t c = 0; c < n; ++c) v[c] = std::pow((double(c) + 0.5) / double(n), kind.param);
    break;
  }
  return Weight(J, std::move(v));
}

Weight random_weight(int J, std::uint64_t seed, double max_a2, WeightKind* chosen) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    WeightKind k;
    const double x = u(rng);
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: k = {WeightKind::Type::TwoLevel, std::exp(6.0 * x)}; break;
    case 1: k = {WeightKind::Type::DyadicDoubling, 0.1 + 0.9 * x}; break;
    case 2: k = {WeightKind::Type::PowerLike, -0.95 + 1.9 * x}; break;
    default: k = {WeightKind::Type::Constant, 0.5 + x}; break;
    }
    Weight w = generate_weight(k, J, rng());
    if (ap_characteristic(w, 2.0) <= max_a2) {
      if (chosen) *chosen = k;
      return w;
    }
  }
  if (chosen) *chosen = {WeightKind::Type::Constant, 1.0};
  return Weight::uniform(J);
}

Weight weight_with_a2(WeightKind::Type type, int J, std::uint64_t seed, double target, WeightKind* chosen) {
  if (!(target >= 1.0)) fail(Error::Code::InvalidArgument, "target A_2 characteristic must be >= 1");
  WeightKind k{type, 1.0};
  auto a2 = [&](double param) { return ap_characteristic(generate_weight({type, param}, J, seed), 2.0); };
  switch (type) {
  case WeightKind::Type::Constant: break;
  case WeightKind::Type::TwoLevel:
    // (1 + t)^2 / 4t = target at the root, and 1 on every smaller interval
    k.param = 2 * target - 1 + 2 * std::sqrt(target * target - target);
    break;
  case WeightKind::Type::DyadicDoubling:
  case WeightKind::Type::PowerLike: {
    // characteristic grows as delta decreases and as a increases
    const bool doubling = type == WeightKind::Type::DyadicDoubling;
    double lo = doubling ? std::log(1e-4) : 0.0, hi = doubling ? 0.0 : 0.9999;
    for (int it = 0; it < 50; ++it) {
      const double mid = (lo + hi) / 2;
      const double v = a2(doubling ? std::exp(mid) : mid);
      if ((v > target) == doubling) lo = mid;
      else hi = mid;
    }
    k.param = doubling ? std::exp((lo + hi) / 2) : (lo + hi) / 2;
    break;
  }
  }
  if (chosen) *chosen = k;
  return generate_weight(k, J, seed);
}

HaarMultiplier random_multiplier(int J, std::uint64_t seed, double density) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> eps(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  std::vector<std::pair<Interval, double>> entries;
  for (std::size_t id = 0; id + 1 < (std::size_t(1) << J); ++id)
    if (keep(rng)) entries.emplace_back(Interval::from_heap_id(id), eps(rng));
  return HaarMultiplier(J, entries);
}

SparseCollection random_sparse_collection(int J, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(std::size_t(1) << J);
  const double spread = 1.0 + 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (double& x : v) x = std::exp(spread * gauss(rng));
  return principal_intervals(Signal(J, std::move(v)), Interval::root(), 2.0);
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& CampaignConfig::known_modes() {
  static const std::vector<std::string> modes{"avg", "square", "weighted", "osc", "atoms", "cz", "weak11", "spmodel"};
  return modes;
}

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  fail(Error::Code::InvalidArgument, "config field '" + field + "': " + why);
}

template <class T> T field(const Json& j, const char* name, T fallback) {
  if (!j.contains(name)) return fallback;
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    bad_field(name, "wrong type");
  }
}

} // namespace

CampaignConfig parse_campaign_config(const Json& j) {
  if (!j.is_object()) fail(Error::Code::Parse, "campaign config must be a JSON object");
  CampaignConfig c;
  c.depth = field(j, "depth_J", c.depth);
  c.trials = field(j, "trials", c.trials);
  c.seed = field<std::uint64_t>(j, "seed", c.seed);
  c.modes = field(j, "modes", std::vector<std::string>{"avg"});
  c.signal = field(j, "signal", c.signal);
  c.threads = field(j, "threads", c.threads);
  const Json params = j.value("parameters", Json::object());
  c.p = field(params, "p", c.p);
  c.q = field(params, "q", c.q);
  c.r = field(params, "r", c.p / 2);
  c.M = field(params, "M", c.M);
  c.C = field(params, "C", c.C);
  c.lambda = field(params, "lambda", c.lambda);
  c.K = field(params, "K", c.K);
  const Json outputs = j.value("outputs", Json::object());
  c.certificates_path = field(outputs, "certificates", std::string());
  c.summary_path = field(outputs, "summary", std::string());
  c.series_path = field(outputs, "series", std::string());

  if (c.depth < 3 || c.depth > 16) bad_field("depth_J", "must lie in [3, 16]");
  if (c.trials < 1) bad_field("trials", "must be >= 1");
  if (c.modes.empty()) bad_field("modes", "must name at least one mode");
  for (const auto& m : c.modes)
    if (std::find(CampaignConfig::known_modes().begin(), CampaignConfig::known_modes().end(), m) == CampaignConfig::known_modes().end())
      bad_field("modes", "unknown mode '" + m + "'");
  if (!(c.p > 0.0)) bad_field("parameters.p", "must be positive");
  if (!(c.q > 0.0)) bad_field("parameters.q", "must be positive");
  if (!(c.r > 0.0 && c.r < c.p)) bad_field("parameters.r", "must lie in (0, p)");
  const bool hardy = std::count(c.modes.begin(), c.modes.end(), "weighted") ||
                     std::count(c.modes.begin(), c.modes.end(), "atoms");
  if (hardy && c.p > 1.0) bad_field("parameters.p", "must lie in (0, 1] for weighted and atoms modes");
  if (c.M < 1) bad_field("parameters.M", "must be >= 1");
  if (!(c.C >= 1.0)) bad_field("parameters.C", "must be >= 1");
  if (!(c.lambda > 0.0 && c.lambda < 0.5)) bad_field("parameters.lambda", "must lie in (0, 1/2)");
  if (!(c.K > 0.0)) bad_field("parameters.K", "must be positive");
  if (c.threads < 0) bad_field("threads", "must be >= 0");
  try {
    SignalKind::parse(c.signal);
  } catch (const Error& e) {
    bad_field("signal", e.what());
  }
  return c;
}

namespace {

struct TrialOutcome {
  Json line;
  double value = 0.0;
  bool ok = true;
  std::string failure;
  std::optional<std::pair<double, double>> point;
};

Signal mean_zero(Signal f) {
  const double m = f.integral();
  for (double& x : f.data()) x -= m;
  return f;
}

TrialOutcome certificate_outcome(const DominationCertificate& cert, const HaarMultiplier& T, const Signal& f,
                                 const Signal& g, const Weight* w) {
  TrialOutcome out;
  const Verification v = verify(cert, T, f, g, w);
  const Json j = to_json(cert);
  const Verification reloaded = verify(certificate_from_json(Json::parse(j.dump())));
  out.ok = v.ok() && reloaded.ok();
  if (!v.ok()) out.failure = v.detail;
  else if (!reloaded.ok()) out.failure = "reloaded certificate fails: " + reloaded.detail;
  double local = 0.0;
  for (const auto& e : cert.per_Q) local = std::max(local, e.local_constant);
  out.value = cert.realized_constant;
  out.line["realized_constant"] = number(cert.realized_constant);
  out.line["max_local_constant"] = number(local);
  out.line["C"] = cert.C;
  out.line["retries"] = cert.retries;
  out.line["certificate"] = j;
  return out;
}

TrialOutcome run_trial(const CampaignConfig& cfg, const std::string& mode, std::uint64_t seed) {
  const int J = cfg.depth;
  const SignalKind kind = SignalKind::parse(cfg.signal);
  const std::uint64_t s1 = splitmix64(seed + 1), s2 = splitmix64(seed + 2), s3 = splitmix64(seed + 3),
                      s4 = splitmix64(seed + 4);
  const StoppingOptions opt{cfg.C, 8};

  if (mode == "avg" || mode == "square" || mode == "osc" || mode == "weighted") {
    Signal f = generate_signal(kind, J, s1), g = generate_signal(kind, J, s2);
    if (mode == "osc") {
      f = mean_zero(std::move(f));
      g = mean_zero(std::move(g));
    }
    const HaarMultiplier T = random_multiplier(J, s3);
    if (mode == "avg") return certificate_outcome(dominate_avg(T, f, g, cfg.M, opt), T, f, g, nullptr);
    if (mode == "square") return certificate_outcome(dominate_square(T, f, g, cfg.p, cfg.q, opt), T, f, g, nullptr);
    if (mode == "osc") {
      auto out = certificate_outcome(dominate_oscillation(T, f, g, opt), T, f, g, nullptr);
      const Signal mf = maximal(f, MaximalKind::sharp()), mg = maximal(g, MaximalKind::sharp());
      double fg = 0.0, sharp = 0.0;
      for (std::size_t c = 0; c < f.size(); ++c) {
        fg += f[c] * g[c];
        sharp += mf[c] * mg[c];
      }
      out.line["fefferman_stein_ratio"] = number(sharp > 0.0 ? std::abs(fg) / sharp : 0.0);
      return out;
    }
    WeightKind wk;
    const Weight w = random_weight(J, s4, 100.0, &wk);
    const double a2 = ap_characteristic(w, 2.0);
    auto cert = dominate_weighted(T, f, g, cfg.p, cfg.r, w, opt);
    auto out = certificate_outcome(cert, T, f, g, &w);
    const bool contracts = square_function_contracts(T, haar_transform(f));
    if (!contracts) {
      out.ok = false;
      out.failure = "S(Tf) exceeds S(f) somewhere";
    }
    out.value = cert.pairing_constant;
    out.line["weight"] = wk.str();
    out.line["a2"] = a2;
    out.line["pairing_constant"] = number(cert.pairing_constant);
    out.line["square_function_contracts"] = contracts;
    out.point = std::make_pair(a2, cert.pairing_constant);
    return out;
  }

  if (mode == "atoms") {
    const Signal f = generate_signal(kind, J, s1);
    const auto d = atomic_decompose(f, cfg.p, cfg.r, cfg.C);
    const auto chk = check_atoms(d, f);
    double scale = 1.0;
    for (double x : f.values()) scale = std::max(scale, std::abs(x));
    TrialOutcome out;
    out.ok = chk.support_ok && chk.budget_ok && chk.reconstruction_error < 1e-12 * scale &&
             chk.max_norm_ratio <= 1 + 1e-12 && chk.max_mean <= 1e-12 * scale;
    if (!out.ok) out.failure = "atomic decomposition invariant failed";
    out.value = d.budget_constant;
    out.line["atoms"] = d.atoms.size();
    out.line["lp_budget"] = d.lp_budget;
    out.line["hardy_norm_p"] = d.hardy_norm_p;
    out.line["budget_constant"] = d.budget_constant;
    out.line["reconstruction_error"] = chk.reconstruction_error;
    out.line["max_norm_ratio"] = chk.max_norm_ratio;
    out.line["C"] = d.C;
    out.line["decomposition"] = to_json(d, false);
    return out;
  }

  if (mode == "cz") {
    const Signal f = generate_signal(kind, J, s1);
    const double avg = lp_norm(f, 1.0);
    TrialOutcome out;
    Json levels = Json::array();
    for (double factor : {1.0, 2.0, 4.0, 16.0}) {
      if (avg == 0.0) break;
      const double alpha = factor * avg;
      const auto d = cz_decompose(f, alpha);
      const auto chk = check_cz(d, f);
      if (!chk.ok(alpha)) {
        out.ok = false;
        out.failure = "CZ invariant failed at alpha = " + std::to_string(alpha);
      }
      out.value = std::max(out.value, chk.bad_measure * alpha / chk.f_l1);
      levels.push_back(to_json(d, chk));
    }
    out.line["levels"] = std::move(levels);
    return out;
  }

  if (mode == "weak11") {
    const Signal f = generate_signal(kind, J, s1);
    const SparseCollection S = random_sparse_collection(J, s2);
    const auto rep = weak11_certify(WeakOperator::sparse(S), f, cfg.K, s3);
    TrialOutcome out;
    out.ok = rep.major_ok() && rep.consistent() && rep.annihilation_ok;
    if (!out.ok) out.failure = "weak (1,1) certification failed";
    out.value = rep.exact_weak;
    out.line["carleson"] = carleson_constant(S);
    out.line["report"] = to_json(rep);
    return out;
  }

  // spmodel
  const SparseCollection S = random_sparse_collection(J, s1);
  const SparseReport rep = sparse_vs_carleson(S);
  TrialOutcome out;
  out.ok = rep.eta_child >= 0.5 && rep.carleson <= 2.0 * (1 + 1e-12);
  if (!out.ok) out.failure = "stopping-time collection is not 1/2-sparse with Carleson constant <= 2";
  out.value = rep.carleson;
  out.line["intervals"] = S.size();
  out.line["report"] = to_json(rep);
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

} // namespace

CampaignResult run_campaign(const CampaignConfig& cfg) {
  struct Job {
    std::size_t mode_index;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t m = 0; m < cfg.modes.size(); ++m)
    for (int t = 0; t < cfg.trials; ++t) jobs.push_back({m, t});
  std::vector<TrialOutcome> outcomes(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
      const auto& job = jobs[k];
      const std::string& mode = cfg.modes[job.mode_index];
      const std::uint64_t seed = trial_seed(cfg.seed + 0x1000 * job.mode_index, std::uint64_t(job.trial));
      try {
        outcomes[k] = run_trial(cfg, mode, seed);
      } catch (const std::exception& e) {
        outcomes[k].ok = false;
        outcomes[k].failure = std::string("exception: ") + e.what();
      }
      auto& line = outcomes[k].line;
      Json head;
      head["mode"] = mode;
      head["trial"] = job.trial;
      head["seed"] = seed;
      head["ok"] = outcomes[k].ok;
      if (!outcomes[k].ok) head["failure"] = outcomes[k].failure;
      head.update(line);
      line = std::move(head);
    }
  };
  unsigned n_threads = cfg.threads > 0 ? unsigned(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, unsigned(jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  CampaignResult res;
  for (std::size_t m = 0; m < cfg.modes.size(); ++m) {
    ModeSummary s;
    s.mode = cfg.modes[m];
    std::vector<double> values;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (jobs[k].mode_index != m) continue;
      const auto& o = outcomes[k];
      ++s.trials;
      if (!o.ok) {
        ++s.failures;
        res.failures.push_back(s.mode + " trial " + std::to_string(jobs[k].trial) + ": " + o.failure);
      }
      values.push_back(o.value);
      if (o.point) {
        std::ostringstream row;
        row.precision(17);
        row << s.mode << ',' << o.point->first << ',' << o.point->second;
        res.series.push_back(row.str());
      }
    }
    s.max_constant = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
    s.median_constant = median_of(values);
    res.summary.push_back(s);
  }
  for (auto& o : outcomes) res.lines.push_back(o.line.dump());
  return res;
}

std::string CampaignResult::summary_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "mode,trials,failures,max_constant,median_constant\n";
  for (const auto& s : summary)
    out << s.mode << ',' << s.trials << ',' << s.failures << ',' << s.max_constant << ',' << s.median_constant << '\n';
  return out.str();
}

std::string CampaignResult::series_csv() const {
  std::string out = "mode,x,y\n";
  for (const auto& r : series) out += r + "\n";
  return out;
}

Json CampaignResult::summary_json() const {
  Json j;
  Json modes = Json::array();
  for (const auto& s : summary)
    modes.push_back({{"mode", s.mode},
                     {"trials", s.trials},
                     {"failures", s.failures},
                     {"max_constant", number(s.max_constant)},
                     {"median_constant", number(s.median_constant)}});
  j["modes"] = std::move(modes);
  j["hard_failure"] = hard_failure();
  j["failures"] = failures;
  return j;
}

void write_campaign_outputs(const CampaignConfig& cfg, const CampaignResult& res) {
  if (!cfg.certificates_path.empty()) {
    std::string all;
    for (const auto& l : res.lines) all += l + "\n";
    write_file(cfg.certificates_path, all);
  }
  if (!cfg.summary_path.empty()) write_file(cfg.summary_path, res.summary_csv());
  if (!cfg.series_path.empty()) write_file(cfg.series_path, res.series_csv());
}

} // namespace sparsedom
