#pragma once

#include "rjdbase/baselines.hpp"
#include "rjdbase/graph.hpp"
#include "rjdbase/labels.hpp"
#include "rjdbase/linalg.hpp"
#include "rjdbase/rjd.hpp"
#include "rjdbase/sbm.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rjdbase::experiment {

/// Everything a method needs: the Laplacian stack plus whatever the dataset
/// came with (affinities always, raw features and ground truth when known).
struct Dataset {
  LaplacianStack stack;
  std::vector<AffinityMatrix> affinities;
  std::vector<FeatureMatrix> features;
  std::optional<ClusterLabels> labels;
  nlohmann::json provenance;
};

Dataset from_sbm(const sbm::MultimodalDataset& data);
Dataset synthesize(const sbm::SbmConfig& config);

/// Loads a dataset directory. Recognized files:
///   affinity_<i>.bin              precomputed affinities (preferred)
///   features_<i>.csv | .bin       feature matrices, turned into affinities
///                                 with the self-tuning kernel
///   labels.csv                    optional ground truth
///   provenance.json               optional, echoed into reports
Dataset load_dataset(const std::filesystem::path& dir, int nn_index = kDefaultNearestNeighbor);

/// Writes labels.csv (if known), affinity_<i>.bin and provenance.json.
void save_dataset(const Dataset& data, const std::filesystem::path& dir);

/// Shape, connectivity and spectral checks for every modality.
nlohmann::json dataset_info(const Dataset& data);

enum class Method {
  RjdBase,
  PgaSingle,
  PgaBase,
  Mvsc,
  Coreg,
  MvKmeans,
  MvSphKmeans,
  JdRefine,
  SingleLaplacian,
};

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct MethodConfig {
  Method method = Method::RjdBase;
  int k = 6;
  int trials = 200;         // T
  int coupling_rounds = 5;  // J for MVSC / CoReg-MVSC
  double lambda = 0.5;
  int iterations = 30;  // projected gradient ascent
  double step_size = 0.5;
  int max_halvings = 20;
  int sweeps = 200;
  double jd_tol = 1e-12;
  std::string init = "rjd-base";  // jd-refine: rjd-base | identity
  int modality = 0;
  std::array<int, 2> views{0, 1};
  int max_iters = 100;  // co-EM k-means
  std::uint64_t seed = 0;
  std::uint64_t eval_seed = 20240917;
  int restarts = 10;
  int threads = 1;
  WeightSampler sampler = WeightSampler::NormalizedUniform;
  baselines::CoregSign coreg_sign = baselines::CoregSign::Reward;
};

void to_json(nlohmann::json& j, const MethodConfig& c);
void from_json(const nlohmann::json& j, MethodConfig& c);

/// Checks every parameter the chosen method uses against the dataset.
void validate(const MethodConfig& c, const Dataset& data);

struct Artifact {
  std::string filename;
  std::string contents;
};

struct RunOutput {
  nlohmann::json report;
  std::optional<ClusterLabels> predicted;
  std::vector<Artifact> artifacts;
};

RunOutput run_method(const Dataset& data, const MethodConfig& config);

enum class SweepVary { Method, Dataset, Both };

struct SweepConfig {
  MethodConfig method;
  std::vector<std::uint64_t> seeds;
  SweepVary vary = SweepVary::Method;
  std::optional<sbm::SbmConfig> synth;  // required when the dataset varies
  int threads = 1;
};

void to_json(nlohmann::json& j, const SweepConfig& c);
void from_json(const nlohmann::json& j, SweepConfig& c);

/// Repeats a method across seeds. `fixed` may be null when the dataset is
/// regenerated per seed. Produces sweep.csv with one row per seed.
RunOutput run_sweep(const Dataset* fixed, const SweepConfig& config);

void write_artifacts(const RunOutput& out, const std::filesystem::path& dir);

}  // namespace rjdbase::experiment
