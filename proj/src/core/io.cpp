#include "io.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace sparsedom {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool parse_int(const std::string& s, long long& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtoll(s.c_str(), &end, 10);
  return end == s.c_str() + s.size();
}

/// Non-empty, non-comment lines split on commas.
std::vector<std::vector<std::string>> rows(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(split_fields(line));
  }
  return out;
}

} // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Error::Code::Io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Error::Code::Io, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(Error::Code::Io, "write to '" + path + "' failed");
}

Signal parse_signal(const std::string& text) {
  std::vector<double> values;
  std::size_t line_no = 0;
  for (const auto& row : rows(text)) {
    ++line_no;
    for (const auto& field : row) {
      if (field.empty()) continue;
      double v;
      if (!parse_double(field, v) || !std::isfinite(v))
        fail(Error::Code::Parse, "signal row " + std::to_string(line_no) + ": '" + field + "' is not a finite number");
      values.push_back(v);
    }
  }
  if (values.empty() || !std::has_single_bit(values.size()))
    fail(Error::Code::DepthMismatch, "signal has " + std::to_string(values.size()) +
                                         " values; the count must be a power of two");
  const int J = std::countr_zero(values.size());
  return Signal(J, std::move(values));
}

Signal read_signal(const std::string& path) { return parse_signal(read_file(path)); }

std::string format_signal(const Signal& f) {
  std::ostringstream out;
  out.precision(17);
  for (double v : f.values()) out << v << '\n';
  return out.str();
}

HaarMultiplier parse_multiplier(const std::string& text, int J) {
  std::vector<std::pair<Interval, double>> entries;
  bool first = true;
  for (const auto& row : rows(text)) {
    long long d, i;
    double e;
    const bool numeric = row.size() == 3 && parse_int(row[0], d) && parse_int(row[1], i) && parse_double(row[2], e);
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      fail(Error::Code::Parse, "multiplier rows must read depth,index,eps");
    }
    first = false;
    if (d < 0 || d > 62 || i < 0) fail(Error::Code::Parse, "multiplier row has a negative depth or index");
    entries.emplace_back(Interval{int(d), std::uint64_t(i)}, e);
  }
  return HaarMultiplier(J, entries);
}

HaarMultiplier read_multiplier(const std::string& path, int J) { return parse_multiplier(read_file(path), J); }

SparseCollection parse_collection(const std::string& text, int J) {
  std::vector<Interval> members;
  bool first = true;
  int deepest = 0;
  for (const auto& row : rows(text)) {
    long long d, i;
    const bool numeric = row.size() == 2 && parse_int(row[0], d) && parse_int(row[1], i);
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      fail(Error::Code::Parse, "collection rows must read depth,index");
    }
    first = false;
    if (d < 0 || d > 30 || i < 0) fail(Error::Code::Parse, "collection row out of range");
    members.push_back({int(d), std::uint64_t(i)});
    deepest = std::max(deepest, int(d));
  }
  return SparseCollection(J < 0 ? deepest : J, std::move(members));
}

SparseCollection read_collection(const std::string& path, int J) { return parse_collection(read_file(path), J); }

Json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

namespace {

double number_from(const Json& j, const char* key, double fallback = 0.0) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  return v.get<double>();
}

Json intervals_json(const std::vector<Interval>& v) {
  Json a = Json::array();
  for (const auto& I : v) a.push_back(to_json(I));
  return a;
}

std::vector<Interval> intervals_from(const Json& j) {
  std::vector<Interval> out;
  for (const auto& x : j) out.push_back(interval_from_json(x));
  return out;
}

} // namespace

Json to_json(const Interval& I) { return Json::array({I.depth, I.index}); }

Interval interval_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) fail(Error::Code::Parse, "interval must be [depth, index]");
  const Interval I{j[0].get<int>(), j[1].get<std::uint64_t>()};
  if (!I.valid()) fail(Error::Code::Parse, "invalid interval " + to_string(I));
  return I;
}

Json to_json(const DominationCertificate& c) {
  Json j;
  j["mode"] = to_string(c.mode);
  j["C"] = c.C;
  j["eta"] = c.eta;
  j["carleson"] = c.carleson;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["realized_constant"] = number(c.realized_constant);
  j["n_intervals"] = c.n_intervals;
  j["depth"] = c.depth;
  j["retries"] = c.retries;
  j["lambda_total"] = c.lambda_total;
  j["p"] = c.p;
  j["q"] = c.q;
  j["r"] = c.r;
  j["M"] = c.M;
  if (c.mode == DominationMode::Weighted) {
    j["hardy_norm_f"] = c.hardy_norm_f;
    j["cmo_norm_g"] = c.cmo_norm_g;
    j["pairing_constant"] = number(c.pairing_constant);
  }
  Json per = Json::array();
  for (const auto& e : c.per_Q) {
    Json x;
    x["Q"] = to_json(e.Q);
    x["children"] = intervals_json(e.children);
    x["family"] = intervals_json(e.family);
    x["lambda_Q"] = e.lambda_Q;
    x["term_Q"] = e.term_Q;
    x["budget"] = e.budget;
    x["local_constant"] = number(e.local_constant);
    per.push_back(std::move(x));
  }
  j["per_Q"] = std::move(per);
  return j;
}

DominationCertificate certificate_from_json(const Json& j) {
  try {
    DominationCertificate c;
    c.mode = parse_domination_mode(j.at("mode").get<std::string>());
    c.C = j.at("C").get<double>();
    c.eta = j.at("eta").get<double>();
    c.carleson = j.at("carleson").get<double>();
    c.lhs = j.at("lhs").get<double>();
    c.rhs = j.at("rhs").get<double>();
    c.realized_constant = number_from(j, "realized_constant");
    c.n_intervals = j.at("n_intervals").get<std::size_t>();
    c.depth = j.at("depth").get<int>();
    c.retries = j.value("retries", 0);
    c.lambda_total = j.at("lambda_total").get<double>();
    c.p = j.value("p", 1.0);
    c.q = j.value("q", 1.0);
    c.r = j.value("r", 0.5);
    c.M = j.value("M", 8);
    c.hardy_norm_f = number_from(j, "hardy_norm_f");
    c.cmo_norm_g = number_from(j, "cmo_norm_g");
    c.pairing_constant = number_from(j, "pairing_constant");
    for (const auto& x : j.at("per_Q")) {
      CertificateEntry e;
      e.Q = interval_from_json(x.at("Q"));
      e.children = intervals_from(x.at("children"));
      e.family = intervals_from(x.at("family"));
      e.lambda_Q = x.at("lambda_Q").get<double>();
      e.term_Q = x.at("term_Q").get<double>();
      e.budget = x.value("budget", 0.0);
      e.local_constant = number_from(x, "local_constant");
      c.per_Q.push_back(std::move(e));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail(Error::Code::Parse, std::string("certificate JSON: ") + e.what());
  }
}

Json to_json(const SparseReport& r) {
  Json j;
  j["eta"] = r.eta;
  j["carleson"] = r.carleson;
  j["method"] = r.method;
  j["eta_child"] = r.eta_child;
  j["eta_fractional"] = r.eta_fractional ? Json(*r.eta_fractional) : Json(nullptr);
  j["gap"] = r.gap;
  j["eta_times_carleson"] = r.product();
  return j;
}

Json to_json(const AtomicDecomposition& d, bool with_values) {
  Json atoms = Json::array();
  for (const auto& a : d.atoms) {
    Json x;
    x["Q"] = to_json(a.Q);
    x["c_Q"] = a.c_Q;
    if (with_values) x["atom_values"] = Json(std::vector<double>(a.values.values().begin(), a.values.values().end()));
    atoms.push_back(std::move(x));
  }
  return atoms;
}

Json to_json(const Weak11Report& r) {
  Json j;
  j["op"] = r.op;
  j["K"] = r.K;
  j["alpha_levels"] = r.alpha_levels;
  j["weak_constants"] = r.weak_constants;
  j["exact_weak"] = r.exact_weak;
  j["proxy"] = r.proxy;
  j["worst_E"] = {{"label", r.worst_E}, {"measure", r.worst_E_measure}};
  j["min_major_ratio"] = r.min_major_ratio;
  j["sets_tested"] = r.sets_tested;
  j["annihilation_ok"] = r.annihilation_ok;
  j["consistent"] = r.consistent();
  return j;
}

Json to_json(const CZDecomposition& d, const CZCheck& check) {
  Json j;
  j["alpha"] = d.alpha;
  j["bad_cubes"] = intervals_json(d.bad_cubes);
  j["bad_measure"] = check.bad_measure;
  j["good_sup"] = check.good_sup;
  j["good_l1"] = check.good_l1;
  j["f_l1"] = check.f_l1;
  j["reconstruction_error"] = check.reconstruction_error;
  j["max_bad_mean"] = check.max_bad_mean;
  j["root_is_bad"] = check.root_is_bad;
  j["ok"] = check.ok(d.alpha);
  return j;
}

Json to_json(const LernerDecomposition& d) {
  Json j;
  j["lambda"] = d.lambda;
  j["median"] = d.median;
  j["realized_K"] = number(d.realized_K);
  j["bound_holds"] = d.bound_holds;
  j["budget_max"] = d.budget_max;
  Json per = Json::array();
  for (std::size_t k = 0; k < d.collection.size(); ++k)
    per.push_back({{"Q", to_json(d.collection.intervals()[k])}, {"omega", d.omega[k]}, {"center", d.center[k]}});
  j["per_Q"] = std::move(per);
  return j;
}

Json haar_json(const HaarCoefficients& a) {
  Json j;
  j["depth"] = a.depth();
  j["mean"] = a.mean();
  Json coeffs = Json::array();
  for (std::size_t id = 0; id < a.dense().size(); ++id) {
    const Interval I = Interval::from_heap_id(id);
    coeffs.push_back({{"I", to_json(I)}, {"a", a.by_id(id)}});
  }
  j["coefficients"] = std::move(coeffs);
  return j;
}

} // namespace sparsedom
