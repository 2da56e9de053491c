#include "sparsedom/sparsedom.h"

#include "harness.hpp"

#include <cstring>
#include <new>

using namespace sparsedom;

struct sd_signal {
  Signal v;
};
struct sd_weight {
  Weight v;
};
struct sd_multiplier {
  HaarMultiplier v;
};
struct sd_collection {
  SparseCollection v;
};
struct sd_certificate {
  DominationCertificate v;
};

namespace {

thread_local std::string last_error;

sd_status status_of(Error::Code c) {
  switch (c) {
  case Error::Code::InvalidArgument: return SD_ERR_INVALID_ARGUMENT;
  case Error::Code::DepthMismatch: return SD_ERR_DEPTH_MISMATCH;
  case Error::Code::Io: return SD_ERR_IO;
  case Error::Code::Parse: return SD_ERR_PARSE;
  case Error::Code::Invariant: return SD_ERR_INVARIANT;
  }
  return SD_ERR_INTERNAL;
}

template <class F> sd_status guard(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return SD_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SD_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) fail(Error::Code::InvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sd_status emit(const Json& j, char** out) {
  need(out, "output pointer");
  *out = dup(j.dump());
  return SD_OK;
}

sd_params params_or_default(const sd_params* p) { return p ? *p : sd_params_default(); }

std::vector<std::pair<Interval, double>> rows(size_t n, const int* depths, const uint64_t* indices,
                                              const double* eps) {
  if (n) {
    need(depths, "depths");
    need(indices, "indices");
  }
  std::vector<std::pair<Interval, double>> out;
  for (size_t k = 0; k < n; ++k) {
    if (depths[k] < 0) fail(Error::Code::InvalidArgument, "negative depth");
    out.emplace_back(Interval{depths[k], indices[k]}, eps ? eps[k] : 0.0);
  }
  return out;
}

} // namespace

extern "C" {

const char* sd_last_error(void) { return last_error.c_str(); }

const char* sd_status_name(sd_status s) {
  switch (s) {
  case SD_OK: return "ok";
  case SD_ERR_INVALID_ARGUMENT: return "invalid argument";
  case SD_ERR_DEPTH_MISMATCH: return "depth mismatch";
  case SD_ERR_IO: return "i/o error";
  case SD_ERR_PARSE: return "parse error";
  case SD_ERR_INVARIANT: return "invariant violated";
  case SD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void sd_string_free(char* s) { std::free(s); }

sd_params sd_params_default(void) { return sd_params{1.0, 1.0, 0.5, 8, 4.0, 0.125, 4.0}; }

sd_status sd_signal_create(int depth, const double* values, sd_signal** out) {
  return guard([&] {
    need(values, "values");
    need(out, "output pointer");
    if (depth < 0 || depth > 30) fail(Error::Code::InvalidArgument, "depth out of range");
    std::vector<double> v(values, values + (size_t(1) << depth));
    *out = new sd_signal{Signal(depth, std::move(v))};
    return SD_OK;
  });
}

sd_status sd_signal_load(const char* path, sd_signal** out) {
  return guard([&] {
    need(path, "path");
    need(out, "output pointer");
    *out = new sd_signal{read_signal(path)};
    return SD_OK;
  });
}

sd_status sd_signal_generate(const char* kind, int depth, uint64_t seed, sd_signal** out) {
  return guard([&] {
    need(kind, "kind");
    need(out, "output pointer");
    if (depth < 0 || depth > 30) fail(Error::Code::InvalidArgument, "depth out of range");
    *out = new sd_signal{generate_signal(SignalKind::parse(kind), depth, seed)};
    return SD_OK;
  });
}

int sd_signal_depth(const sd_signal* f) { return f ? f->v.depth() : -1; }
size_t sd_signal_size(const sd_signal* f) { return f ? f->v.size() : 0; }

sd_status sd_signal_values(const sd_signal* f, double* out, size_t n) {
  return guard([&] {
    need(f, "signal");
    need(out, "output buffer");
    if (n < f->v.size()) fail(Error::Code::InvalidArgument, "output buffer too small");
    std::copy(f->v.values().begin(), f->v.values().end(), out);
    return SD_OK;
  });
}

void sd_signal_free(sd_signal* f) { delete f; }

sd_status sd_weight_create(int depth, const double* values, sd_weight** out) {
  return guard([&] {
    need(values, "values");
    need(out, "output pointer");
    if (depth < 0 || depth > 30) fail(Error::Code::InvalidArgument, "depth out of range");
    std::vector<double> v(values, values + (size_t(1) << depth));
    *out = new sd_weight{Weight(depth, std::move(v))};
    return SD_OK;
  });
}

sd_status sd_weight_generate(const char* kind, int depth, uint64_t seed, sd_weight** out) {
  return guard([&] {
    need(kind, "kind");
    need(out, "output pointer");
    if (depth < 0 || depth > 30) fail(Error::Code::InvalidArgument, "depth out of range");
    *out = new sd_weight{generate_weight(WeightKind::parse(kind), depth, seed)};
    return SD_OK;
  });
}

sd_status sd_weight_ap(const sd_weight* w, double p, double* out) {
  return guard([&] {
    need(w, "weight");
    need(out, "output pointer");
    *out = ap_characteristic(w->v, p);
    return SD_OK;
  });
}

void sd_weight_free(sd_weight* w) { delete w; }

sd_status sd_multiplier_create(int depth, size_t n, const int* depths, const uint64_t* indices, const double* eps,
                               sd_multiplier** out) {
  return guard([&] {
    need(out, "output pointer");
    if (n) need(eps, "eps");
    const auto entries = rows(n, depths, indices, eps);
    *out = new sd_multiplier{HaarMultiplier(depth, entries)};
    return SD_OK;
  });
}

sd_status sd_multiplier_uniform(int depth, double eps, sd_multiplier** out) {
  return guard([&] {
    need(out, "output pointer");
    *out = new sd_multiplier{HaarMultiplier::uniform(depth, eps)};
    return SD_OK;
  });
}

sd_status sd_multiplier_load(const char* path, int depth, sd_multiplier** out) {
  return guard([&] {
    need(path, "path");
    need(out, "output pointer");
    *out = new sd_multiplier{read_multiplier(path, depth)};
    return SD_OK;
  });
}

sd_status sd_multiplier_random(int depth, uint64_t seed, double density, sd_multiplier** out) {
  return guard([&] {
    need(out, "output pointer");
    if (!(density >= 0.0 && density <= 1.0)) fail(Error::Code::InvalidArgument, "density must lie in [0, 1]");
    *out = new sd_multiplier{random_multiplier(depth, seed, density)};
    return SD_OK;
  });
}

sd_status sd_multiplier_apply(const sd_multiplier* T, const sd_signal* f, sd_signal** out) {
  return guard([&] {
    need(T, "multiplier");
    need(f, "signal");
    need(out, "output pointer");
    *out = new sd_signal{apply_multiplier(T->v, f->v)};
    return SD_OK;
  });
}

void sd_multiplier_free(sd_multiplier* T) { delete T; }

sd_status sd_collection_create(int depth, size_t n, const int* depths, const uint64_t* indices, sd_collection** out) {
  return guard([&] {
    need(out, "output pointer");
    std::vector<Interval> members;
    int deepest = 0;
    for (const auto& [I, e] : rows(n, depths, indices, nullptr)) {
      members.push_back(I);
      deepest = std::max(deepest, I.depth);
    }
    *out = new sd_collection{SparseCollection(depth < 0 ? deepest : depth, std::move(members))};
    return SD_OK;
  });
}

sd_status sd_collection_load(const char* path, int depth, sd_collection** out) {
  return guard([&] {
    need(path, "path");
    need(out, "output pointer");
    *out = new sd_collection{read_collection(path, depth)};
    return SD_OK;
  });
}

sd_status sd_collection_random(int depth, uint64_t seed, sd_collection** out) {
  return guard([&] {
    need(out, "output pointer");
    if (depth < 0 || depth > 30) fail(Error::Code::InvalidArgument, "depth out of range");
    *out = new sd_collection{random_sparse_collection(depth, seed)};
    return SD_OK;
  });
}

size_t sd_collection_size(const sd_collection* S) { return S ? S->v.size() : 0; }

sd_status sd_collection_carleson(const sd_collection* S, double* out) {
  return guard([&] {
    need(S, "collection");
    need(out, "output pointer");
    *out = carleson_constant(S->v);
    return SD_OK;
  });
}

sd_status sd_collection_report_json(const sd_collection* S, char** json) {
  return guard([&] {
    need(S, "collection");
    Json j = to_json(sparse_vs_carleson(S->v));
    j["intervals"] = S->v.size();
    return emit(j, json);
  });
}

void sd_collection_free(sd_collection* S) { delete S; }

sd_status sd_haar_json(const sd_signal* f, char** json) {
  return guard([&] {
    need(f, "signal");
    return emit(haar_json(haar_transform(f->v)), json);
  });
}

sd_status sd_dominate(const char* mode, const sd_multiplier* T, const sd_signal* f, const sd_signal* g,
                      const sd_weight* w, const sd_params* params, sd_certificate** out) {
  return guard([&] {
    need(mode, "mode");
    need(T, "multiplier");
    need(f, "f");
    need(g, "g");
    need(out, "output pointer");
    const sd_params p = params_or_default(params);
    const StoppingOptions opt{p.stop_C, 8};
    DominationCertificate c;
    switch (parse_domination_mode(mode)) {
    case DominationMode::Avg: c = dominate_avg(T->v, f->v, g->v, p.chi_M, opt); break;
    case DominationMode::Square: c = dominate_square(T->v, f->v, g->v, p.p, p.q, opt); break;
    case DominationMode::Weighted:
      need(w, "weight");
      c = dominate_weighted(T->v, f->v, g->v, p.p, p.r, w->v, opt);
      break;
    case DominationMode::Oscillation: c = dominate_oscillation(T->v, f->v, g->v, opt); break;
    }
    *out = new sd_certificate{std::move(c)};
    return SD_OK;
  });
}

sd_status sd_certificate_from_json(const char* json, sd_certificate** out) {
  return guard([&] {
    need(json, "json");
    need(out, "output pointer");
    *out = new sd_certificate{certificate_from_json(Json::parse(json))};
    return SD_OK;
  });
}

sd_status sd_certificate_json(const sd_certificate* c, char** json) {
  return guard([&] {
    need(c, "certificate");
    return emit(to_json(c->v), json);
  });
}

sd_status sd_certificate_verify(const sd_certificate* c, int* ok, char** detail) {
  return guard([&] {
    need(c, "certificate");
    need(ok, "output pointer");
    const Verification v = verify(c->v);
    *ok = v.ok() ? 1 : 0;
    if (detail) *detail = dup(v.detail);
    return SD_OK;
  });
}

double sd_certificate_realized_constant(const sd_certificate* c) { return c ? c->v.realized_constant : 0.0; }
size_t sd_certificate_intervals(const sd_certificate* c) { return c ? c->v.n_intervals : 0; }
void sd_certificate_free(sd_certificate* c) { delete c; }

sd_status sd_atoms_json(const sd_signal* f, const sd_params* params, char** json) {
  return guard([&] {
    need(f, "signal");
    const sd_params p = params_or_default(params);
    const auto d = atomic_decompose(f->v, p.p, p.r, p.stop_C);
    const auto chk = check_atoms(d, f->v);
    Json j;
    j["p"] = d.p;
    j["r"] = d.r;
    j["C"] = d.C;
    j["retries"] = d.retries;
    j["removed_mean"] = d.removed_mean;
    j["lp_budget"] = d.lp_budget;
    j["hardy_norm_p"] = d.hardy_norm_p;
    j["budget_constant"] = number(d.budget_constant);
    j["child_budget_max"] = d.child_budget_max;
    j["reconstruction_error"] = chk.reconstruction_error;
    j["max_norm_ratio"] = chk.max_norm_ratio;
    j["max_mean"] = chk.max_mean;
    j["support_ok"] = chk.support_ok;
    j["budget_ok"] = chk.budget_ok;
    j["atoms"] = to_json(d, true);
    return emit(j, json);
  });
}

sd_status sd_cz_json(const sd_signal* f, double alpha, char** json) {
  return guard([&] {
    need(f, "signal");
    const auto d = cz_decompose(f->v, alpha);
    return emit(to_json(d, check_cz(d, f->v)), json);
  });
}

sd_status sd_weak11_json(const sd_collection* S, const sd_signal* f, const sd_params* params, uint64_t seed,
                         char** json) {
  return guard([&] {
    need(f, "signal");
    const sd_params p = params_or_default(params);
    const WeakOperator op = S ? WeakOperator::sparse(S->v) : WeakOperator::identity();
    const auto rep = weak11_certify(op, f->v, p.K, seed);
    Json j = to_json(rep);
    if (S) j["carleson"] = carleson_constant(S->v);
    return emit(j, json);
  });
}

sd_status sd_lerner_json(const sd_signal* phi, const sd_params* params, char** json) {
  return guard([&] {
    need(phi, "signal");
    const sd_params p = params_or_default(params);
    return emit(to_json(lerner_decompose(phi->v, Interval::root(), p.lambda)), json);
  });
}

sd_status sd_campaign_run(const char* config_json, char** summary_json) {
  return guard([&] {
    need(config_json, "config");
    need(summary_json, "output pointer");
    const CampaignConfig cfg = parse_campaign_config(Json::parse(config_json));
    const CampaignResult res = run_campaign(cfg);
    write_campaign_outputs(cfg, res);
    *summary_json = dup(res.summary_json().dump());
    if (res.hard_failure()) {
      last_error = res.failures.front();
      return SD_ERR_INVARIANT;
    }
    return SD_OK;
  });
}

} // extern "C"
