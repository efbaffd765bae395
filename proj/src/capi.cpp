#include "rjdbase/rjdbase.h"

#include "rjdbase/error.hpp"
#include "rjdbase/eval.hpp"
#include "rjdbase/experiment.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

struct rjd_dataset {
  rjdbase::experiment::Dataset data;
};

struct rjd_result {
  rjdbase::experiment::RunOutput output;
};

namespace {

using rjdbase::Error;
using rjdbase::ErrorCode;

thread_local std::string last_error;

rjd_status fail(rjd_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename Fn>
rjd_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return RJD_OK;
  } catch (const Error& e) {
    return fail(static_cast<rjd_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(RJD_PARSE, std::string("Parse: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(RJD_INTERNAL, "Internal: out of memory");
  } catch (const std::exception& e) {
    return fail(RJD_INTERNAL, std::string("Internal: ") + e.what());
  } catch (...) {
    return fail(RJD_INTERNAL, "Internal: unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse_json(const char* text) {
  if (!text || !*text) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

void copy_labels(const rjdbase::ClusterLabels& l, int* labels, size_t capacity, size_t* count) {
  if (count) *count = l.size();
  if (!labels) return;
  require(capacity >= l.size(), "label buffer too small");
  std::memcpy(labels, l.assignments().data(), l.size() * sizeof(int));
}

}  // namespace

extern "C" {

const char* rjd_version(void) { return "1.0.0"; }

const char* rjd_status_name(rjd_status status) {
  if (status == RJD_OK) return "Ok";
  if (status < RJD_INVALID_ARGUMENT || status > RJD_INTERNAL) return "Unknown";
  static thread_local std::string name;
  name = rjdbase::error_code_name(static_cast<ErrorCode>(status));
  return name.c_str();
}

int rjd_status_exit_code(rjd_status status) {
  switch (status) {
    case RJD_OK:
      return 0;
    case RJD_INVALID_ARGUMENT:
    case RJD_COUNT_EXCEEDS_DIM:
    case RJD_NON_POSITIVE_SIGMA:
    case RJD_UNKNOWN_RECIPE:
    case RJD_K_EXCEEDS_N:
    case RJD_NON_ORTHOGONAL_INIT:
      return 2;
    case RJD_NON_FINITE:
    case RJD_DIMENSION_MISMATCH:
    case RJD_DEGENERATE_BANDWIDTH:
    case RJD_ISOLATED_NODE:
    case RJD_EMPTY_CLUSTER:
    case RJD_ZERO_NORM_ROW:
    case RJD_LENGTH_MISMATCH:
    case RJD_IO:
    case RJD_PARSE:
      return 3;
    default:
      return 4;
  }
}

const char* rjd_last_error_message(void) { return last_error.c_str(); }

void rjd_string_free(char* s) { std::free(s); }

rjd_status rjd_dataset_synth(const char* config_json, rjd_dataset** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    const auto j = parse_json(config_json);
    rjdbase::sbm::SbmConfig cfg;
    rjdbase::sbm::from_json(j, cfg);
    auto d = std::make_unique<rjd_dataset>();
    d->data = rjdbase::experiment::synthesize(cfg);
    *out = d.release();
  });
}

rjd_status rjd_dataset_load(const char* dir, int nn_index, rjd_dataset** out) {
  return guarded([&] {
    require(out != nullptr && dir != nullptr, "null argument");
    *out = nullptr;
    require(nn_index >= 1, "nearest-neighbour index must be positive");
    auto d = std::make_unique<rjd_dataset>();
    d->data = rjdbase::experiment::load_dataset(dir, nn_index);
    *out = d.release();
  });
}

rjd_status rjd_dataset_save(const rjd_dataset* data, const char* dir) {
  return guarded([&] {
    require(data != nullptr && dir != nullptr, "null argument");
    rjdbase::experiment::save_dataset(data->data, dir);
  });
}

rjd_status rjd_dataset_info_json(const rjd_dataset* data, char** out_json) {
  return guarded([&] {
    require(data != nullptr && out_json != nullptr, "null argument");
    *out_json = dup_string(rjdbase::experiment::dataset_info(data->data).dump(2));
  });
}

rjd_status rjd_dataset_shape(const rjd_dataset* data, size_t* nodes, size_t* modalities) {
  return guarded([&] {
    require(data != nullptr, "null dataset");
    if (nodes) *nodes = static_cast<size_t>(data->data.stack.nodes());
    if (modalities) *modalities = data->data.stack.modalities();
  });
}

rjd_status rjd_dataset_labels(const rjd_dataset* data, int* labels, size_t capacity,
                              size_t* count) {
  return guarded([&] {
    require(data != nullptr, "null dataset");
    require(data->data.labels.has_value(), "dataset has no ground-truth labels");
    copy_labels(*data->data.labels, labels, capacity, count);
  });
}

void rjd_dataset_free(rjd_dataset* data) { delete data; }

rjd_status rjd_run(const rjd_dataset* data, const char* method_json, rjd_result** out) {
  return guarded([&] {
    require(data != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    rjdbase::experiment::MethodConfig cfg;
    rjdbase::experiment::from_json(parse_json(method_json), cfg);
    auto r = std::make_unique<rjd_result>();
    r->output = rjdbase::experiment::run_method(data->data, cfg);
    *out = r.release();
  });
}

rjd_status rjd_sweep(const rjd_dataset* data, const char* sweep_json, rjd_result** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = nullptr;
    rjdbase::experiment::SweepConfig cfg;
    rjdbase::experiment::from_json(parse_json(sweep_json), cfg);
    auto r = std::make_unique<rjd_result>();
    r->output = rjdbase::experiment::run_sweep(data ? &data->data : nullptr, cfg);
    *out = r.release();
  });
}

rjd_status rjd_result_report_json(const rjd_result* result, char** out_json) {
  return guarded([&] {
    require(result != nullptr && out_json != nullptr, "null argument");
    *out_json = dup_string(result->output.report.dump(2));
  });
}

rjd_status rjd_result_labels(const rjd_result* result, int* labels, size_t capacity,
                             size_t* count) {
  return guarded([&] {
    require(result != nullptr, "null result");
    require(result->output.predicted.has_value(), "result carries no labels");
    copy_labels(*result->output.predicted, labels, capacity, count);
  });
}

rjd_status rjd_result_write(const rjd_result* result, const char* dir) {
  return guarded([&] {
    require(result != nullptr && dir != nullptr, "null argument");
    rjdbase::experiment::write_artifacts(result->output, dir);
    const auto path = std::filesystem::path(dir) / "report.json";
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
    f << result->output.report.dump(2) << '\n';
  });
}

void rjd_result_free(rjd_result* result) { delete result; }

rjd_status rjd_nmi(const int* a, const int* b, size_t n, double* out) {
  return guarded([&] {
    require(a != nullptr && b != nullptr && out != nullptr, "null argument");
    if (n == 0) throw Error(ErrorCode::LengthMismatch, "empty label vectors");
    *out = rjdbase::nmi(rjdbase::ClusterLabels(std::vector<int>(a, a + n)),
                        rjdbase::ClusterLabels(std::vector<int>(b, b + n)));
  });
}

rjd_status rjd_project_simplex(const double* v, size_t m, double* out) {
  return guarded([&] {
    require(v != nullptr && out != nullptr && m > 0, "null or empty argument");
    const auto p = rjdbase::project_simplex(std::span<const double>(v, m));
    for (size_t i = 0; i < m; ++i) out[i] = p[i];
  });
}

}  // extern "C"
