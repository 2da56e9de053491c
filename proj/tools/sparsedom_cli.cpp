// Command-line front end over the C interface.

#include <sparsedom/sparsedom.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

using Json = nlohmann::ordered_json;

namespace {

struct Failure {
  sd_status status;
  std::string message;
};

void check(sd_status s) {
  if (s != SD_OK) throw Failure{s, sd_last_error()};
}

template <class T, void (*Free)(T*)> struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using SignalPtr = std::unique_ptr<sd_signal, Deleter<sd_signal, sd_signal_free>>;
using WeightPtr = std::unique_ptr<sd_weight, Deleter<sd_weight, sd_weight_free>>;
using MultiplierPtr = std::unique_ptr<sd_multiplier, Deleter<sd_multiplier, sd_multiplier_free>>;
using CollectionPtr = std::unique_ptr<sd_collection, Deleter<sd_collection, sd_collection_free>>;
using CertificatePtr = std::unique_ptr<sd_certificate, Deleter<sd_certificate, sd_certificate_free>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  sd_string_free(s);
  return out;
}

struct Options {
  int depth = 10;
  std::optional<std::uint64_t> seed;
  sd_params params = sd_params_default();
  std::string format = "json";
  std::string out;
  std::string f = "gaussian_noise";
  std::string g = "gaussian_noise";
  std::string multiplier = "random";
  std::string weight = "constant";

  std::uint64_t master_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("SPARSEDOM_SEED")) {
      try {
        return std::stoull(env);
      } catch (const std::exception&) {
        throw Failure{SD_ERR_INVALID_ARGUMENT, "SPARSEDOM_SEED is not an unsigned integer"};
      }
    }
    return 1;
  }
};

bool is_file(const std::string& s) { return std::filesystem::is_regular_file(s); }

/// A file path, or a generator kind seeded from the master seed.
SignalPtr load_signal(const Options& o, const std::string& spec, std::uint64_t salt) {
  sd_signal* s = nullptr;
  if (is_file(spec)) check(sd_signal_load(spec.c_str(), &s));
  else check(sd_signal_generate(spec.c_str(), o.depth, o.master_seed() + salt, &s));
  return SignalPtr(s);
}

MultiplierPtr load_multiplier(const Options& o, int depth) {
  sd_multiplier* T = nullptr;
  const std::string& m = o.multiplier;
  if (is_file(m)) {
    check(sd_multiplier_load(m.c_str(), depth, &T));
  } else if (m.rfind("uniform:", 0) == 0) {
    check(sd_multiplier_uniform(depth, std::stod(m.substr(8)), &T));
  } else if (m == "random" || m.rfind("random:", 0) == 0) {
    const double density = m == "random" ? 1.0 : std::stod(m.substr(7));
    check(sd_multiplier_random(depth, o.master_seed() + 3, density, &T));
  } else {
    throw Failure{SD_ERR_INVALID_ARGUMENT, "multiplier must be a file, 'random[:density]' or 'uniform:eps'"};
  }
  return MultiplierPtr(T);
}

WeightPtr load_weight(const Options& o, int depth) {
  sd_weight* w = nullptr;
  if (is_file(o.weight)) {
    sd_signal* s = nullptr;
    check(sd_signal_load(o.weight.c_str(), &s));
    SignalPtr sig(s);
    std::vector<double> v(sd_signal_size(s));
    check(sd_signal_values(s, v.data(), v.size()));
    check(sd_weight_create(sd_signal_depth(s), v.data(), &w));
  } else {
    check(sd_weight_generate(o.weight.c_str(), depth, o.master_seed() + 4, &w));
  }
  return WeightPtr(w);
}

std::string csv_value(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer()) return v[0].dump() + ":" + v[1].dump();
  return v.dump();
}

/// Rows of an array of flat objects; the header is the first row's keys.
std::string csv_table(const Json& rows) {
  std::ostringstream out;
  if (!rows.is_array() || rows.empty()) return out.str();
  bool first = true;
  for (const auto& [k, v] : rows[0].items()) {
    out << (first ? "" : ",") << k;
    first = false;
  }
  out << '\n';
  for (const auto& r : rows) {
    first = true;
    for (const auto& [k, v] : r.items()) {
      out << (first ? "" : ",") << csv_value(v);
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

/// Scalars of an object as key,value rows.
std::string csv_scalars(const Json& j) {
  std::ostringstream out;
  out << "key,value\n";
  for (const auto& [k, v] : j.items())
    if (!v.is_array() && !v.is_object()) out << k << ',' << csv_value(v) << '\n';
  return out.str();
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Failure{SD_ERR_IO, "cannot open '" + o.out + "' for writing"};
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

void emit_json(const Options& o, const Json& j, const char* table_key) {
  if (o.format == "json") {
    emit(o, j.dump(2));
  } else if (table_key && j.contains(table_key)) {
    emit(o, csv_table(j.at(table_key)));
  } else if (j.is_array()) {
    emit(o, csv_table(j));
  } else {
    emit(o, csv_scalars(j));
  }
}

int cmd_haar(const Options& o) {
  const SignalPtr f = load_signal(o, o.f, 1);
  char* s = nullptr;
  check(sd_haar_json(f.get(), &s));
  Json j = Json::parse(take(s));
  for (auto& c : j["coefficients"]) {
    const Json I = c["I"];
    c = Json{{"depth", I[0]}, {"index", I[1]}, {"a", c["a"]}};
  }
  emit_json(o, j, "coefficients");
  return 0;
}

int cmd_sparse_check(const Options& o, const std::string& path) {
  sd_collection* S = nullptr;
  check(sd_collection_load(path.c_str(), -1, &S));
  CollectionPtr owned(S);
  char* s = nullptr;
  check(sd_collection_report_json(S, &s));
  emit_json(o, Json::parse(take(s)), nullptr);
  return 0;
}

int cmd_dominate(const Options& o, const std::string& mode) {
  const SignalPtr f = load_signal(o, o.f, 1), g = load_signal(o, o.g, 2);
  const int depth = sd_signal_depth(f.get());
  const MultiplierPtr T = load_multiplier(o, depth);
  WeightPtr w;
  if (mode == "weighted") w = load_weight(o, depth);
  sd_certificate* c = nullptr;
  check(sd_dominate(mode.c_str(), T.get(), f.get(), g.get(), w.get(), &o.params, &c));
  CertificatePtr cert(c);
  int ok = 0;
  char* detail = nullptr;
  check(sd_certificate_verify(c, &ok, &detail));
  const std::string why = take(detail);
  char* s = nullptr;
  check(sd_certificate_json(c, &s));
  Json j = Json::parse(take(s));
  j["verified"] = ok == 1;
  if (o.format == "csv") {
    Json rows = Json::array();
    for (const auto& e : j["per_Q"])
      rows.push_back({{"Q", e["Q"]},
                      {"children", e["children"].size()},
                      {"family", e["family"].size()},
                      {"lambda_Q", e["lambda_Q"]},
                      {"term_Q", e["term_Q"]},
                      {"budget", e["budget"]},
                      {"local_constant", e["local_constant"]}});
    emit(o, csv_table(rows));
  } else {
    emit(o, j.dump(2));
  }
  if (!ok) {
    std::cerr << "sparsedom: certificate failed verification: " << why << '\n';
    return 1;
  }
  return 0;
}

int cmd_atoms(const Options& o) {
  const SignalPtr f = load_signal(o, o.f, 1);
  char* s = nullptr;
  check(sd_atoms_json(f.get(), &o.params, &s));
  Json j = Json::parse(take(s));
  if (o.format == "csv")
    for (auto& a : j["atoms"]) a.erase("atom_values");
  emit_json(o, j, "atoms");
  return j["support_ok"].get<bool>() && j["budget_ok"].get<bool>() ? 0 : 1;
}

int cmd_cz(const Options& o, std::optional<double> alpha) {
  const SignalPtr f = load_signal(o, o.f, 1);
  if (!alpha) {
    std::vector<double> v(sd_signal_size(f.get()));
    check(sd_signal_values(f.get(), v.data(), v.size()));
    double mean = 0.0;
    for (double x : v) mean += std::abs(x);
    alpha = 2.0 * mean / double(v.size());
    if (*alpha == 0.0) alpha = 1.0;
  }
  char* s = nullptr;
  check(sd_cz_json(f.get(), *alpha, &s));
  Json j = Json::parse(take(s));
  if (o.format == "csv") {
    Json rows = Json::array();
    for (const auto& I : j["bad_cubes"]) rows.push_back({{"depth", I[0]}, {"index", I[1]}});
    emit(o, rows.empty() ? std::string("depth,index\n") : csv_table(rows));
  } else {
    emit(o, j.dump(2));
  }
  return j["ok"].get<bool>() ? 0 : 1;
}

int cmd_weak11(const Options& o, const std::string& collection) {
  const SignalPtr f = load_signal(o, o.f, 1);
  CollectionPtr S;
  sd_collection* raw = nullptr;
  if (collection == "identity") {
  } else if (collection == "random") {
    check(sd_collection_random(sd_signal_depth(f.get()), o.master_seed() + 2, &raw));
  } else {
    check(sd_collection_load(collection.c_str(), sd_signal_depth(f.get()), &raw));
  }
  S.reset(raw);
  char* s = nullptr;
  check(sd_weak11_json(S.get(), f.get(), &o.params, o.master_seed() + 3, &s));
  const Json j = Json::parse(take(s));
  if (o.format == "csv") {
    Json rows = Json::array();
    for (std::size_t k = 0; k < j["alpha_levels"].size(); ++k)
      rows.push_back({{"alpha", j["alpha_levels"][k]}, {"weak_constant", j["weak_constants"][k]}});
    emit(o, csv_table(rows));
  } else {
    emit(o, j.dump(2));
  }
  return j["consistent"].get<bool>() && j["annihilation_ok"].get<bool>() ? 0 : 1;
}

int cmd_lerner(const Options& o) {
  const SignalPtr phi = load_signal(o, o.f, 1);
  char* s = nullptr;
  check(sd_lerner_json(phi.get(), &o.params, &s));
  const Json j = Json::parse(take(s));
  emit_json(o, j, "per_Q");
  return j["bound_holds"].get<bool>() ? 0 : 1;
}

int cmd_campaign(const Options& o, const std::string& path, const std::string& overrides_seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{SD_ERR_IO, "cannot open '" + path + "' for reading"};
  std::stringstream ss;
  ss << in.rdbuf();
  Json cfg;
  try {
    cfg = Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw Failure{SD_ERR_PARSE, std::string("campaign config: ") + e.what()};
  }
  if (!overrides_seed.empty() || !cfg.contains("seed")) cfg["seed"] = o.master_seed();
  char* s = nullptr;
  const sd_status st = sd_campaign_run(cfg.dump().c_str(), &s);
  if (st != SD_OK && st != SD_ERR_INVARIANT) throw Failure{st, sd_last_error()};
  const Json summary = Json::parse(take(s));
  if (o.format == "csv") emit(o, csv_table(summary["modes"]));
  else emit(o, summary.dump(2));
  if (st == SD_ERR_INVARIANT) {
    for (const auto& f : summary["failures"]) std::cerr << "sparsedom: hard failure: " << f.get<std::string>() << '\n';
    return 1;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic sparse domination toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (falls back to SPARSEDOM_SEED, then 1)");
  app.add_option("--depth", o.depth, "Grid depth J")->check(CLI::Range(0, 24));
  app.add_option("--p", o.params.p, "Exponent p");
  app.add_option("--q", o.params.q, "Exponent q");
  app.add_option("--r", o.params.r, "Stopping exponent r < p");
  app.add_option("--chi-M", o.params.chi_M, "Decay exponent of localized averages");
  app.add_option("--stop-C", o.params.stop_C, "Initial stopping threshold");
  app.add_option("--lambda", o.params.lambda, "Oscillation quantile");
  app.add_option("--K", o.params.K, "Weak (1,1) constant");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out, "Write output to this path");
  app.add_option("--f,--signal", o.f, "Signal file or generator kind");
  app.add_option("--g", o.g, "Second signal file or generator kind");
  app.add_option("--multiplier", o.multiplier, "Multiplier file, random[:density] or uniform:eps");
  app.add_option("--weight", o.weight, "Weight file or generator kind");

  auto* haar = app.add_subcommand("haar", "Haar coefficients of a signal");
  std::string collection_path;
  auto* sparse_check = app.add_subcommand("sparse-check", "Sparsity and Carleson report for a collection");
  sparse_check->add_option("collection", collection_path, "CSV of depth,index rows")->required();
  std::string mode = "avg";
  auto* dominate = app.add_subcommand("dominate", "Sparse domination certificate");
  dominate->add_option("--mode", mode, "Domination mode")->check(CLI::IsMember({"avg", "square", "weighted", "osc"}));
  auto* atoms = app.add_subcommand("atoms", "Atomic decomposition");
  std::optional<double> alpha;
  auto* cz = app.add_subcommand("cz", "Calderon-Zygmund decomposition");
  cz->add_option("--alpha", alpha, "Height (default twice the mean of |f|)");
  std::string weak_collection = "random";
  auto* weak11 = app.add_subcommand("weak11", "Weak (1,1) check of a sparse operator");
  weak11->add_option("--collection", weak_collection, "Collection file, 'random' or 'identity'");
  auto* lerner = app.add_subcommand("lerner", "Oscillation decomposition of a signal");
  std::string config;
  auto* campaign = app.add_subcommand("campaign", "Batch experiment campaign");
  campaign->add_option("--config", config, "JSON configuration")->required();

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) o.seed = seed;

  try {
    if (*haar) return cmd_haar(o);
    if (*sparse_check) return cmd_sparse_check(o, collection_path);
    if (*dominate) return cmd_dominate(o, mode);
    if (*atoms) return cmd_atoms(o);
    if (*cz) return cmd_cz(o, alpha);
    if (*weak11) return cmd_weak11(o, weak_collection);
    if (*lerner) return cmd_lerner(o);
    if (*campaign) return cmd_campaign(o, config, *seed_opt ? "seed" : "");
  } catch (const Failure& e) {
    std::cerr << "sparsedom: " << sd_status_name(e.status) << ": " << e.message << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sparsedom: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
