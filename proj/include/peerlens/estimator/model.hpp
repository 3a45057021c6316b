#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "peerlens/estimator/features.hpp"
#include "peerlens/estimator/forest.hpp"
#include "peerlens/estimator/linear.hpp"
#include "peerlens/estimator/matrix.hpp"
#include "peerlens/estimator/mlp.hpp"
#include "peerlens/estimator/standardizer.hpp"
#include "peerlens/version.hpp"

namespace peerlens::estimator {

enum class ModelKind { kLinear, kForest, kMlp };

std::string_view kind_name(ModelKind kind);
/// Throws InvalidArgument for unknown names.
ModelKind parse_kind(std::string_view name);

struct TrainingMeta {
  std::uint64_t seed = 0;
  std::map<std::string, std::string> hyperparameters;
  std::string corpus_fingerprint;

  bool operator==(const TrainingMeta&) const = default;
};

/// The MLP is trained on mean-centred targets; predictions add the mean back.
struct MlpModel {
  MlpParams params;
  double target_mean = 0.0;
  bool operator==(const MlpModel&) const = default;
};

struct TrainedModel {
  ModelKind kind = ModelKind::kLinear;
  std::string schema_version{kFeatureSchemaVersion};
  Standardization standardization;
  std::variant<LinearParams, ForestParams, MlpModel> params;
  TrainingMeta meta;
  std::vector<double> loss_history;  // MLP only; not persisted

  bool operator==(const TrainedModel& o) const {
    return kind == o.kind && schema_version == o.schema_version && standardization == o.standardization &&
           params == o.params && meta == o.meta;
  }
};

struct TrainOptions {
  double ridge = kDefaultRidge;
  ForestConfig forest;
  MlpConfig mlp;
  std::uint64_t seed = 0;  // overrides forest.seed and mlp.seed
  std::string corpus_fingerprint;
  Exec exec = Exec::kParallel;
};

TrainedModel fit_linear(const Matrix& x, std::span<const double> y, double ridge = kDefaultRidge);
TrainedModel fit_mlp(const Matrix& x, std::span<const double> y, MlpConfig config, Exec exec = Exec::kParallel);
TrainedModel fit_forest(const Matrix& x, std::span<const double> y, const ForestConfig& config,
                        Exec exec = Exec::kParallel);
TrainedModel fit_model(ModelKind kind, const Matrix& x, std::span<const double> y, const TrainOptions& options);

/// Applies the stored standardization, then the model.
double predict_row(const TrainedModel& model, std::span<const double> raw_features);

/// Throws SchemaMismatch when the vector's schema or width differs from the model's.
double predict(const TrainedModel& model, const FeatureVector& features);

std::string serialize_model(const TrainedModel& model);
/// Throws CorruptModel on parse/checksum failures and FormatVersionMismatch
/// on unknown format or schema versions.
TrainedModel deserialize_model(std::string_view content,
                               std::string_view expected_schema = kFeatureSchemaVersion);

/// Throws IoError on filesystem failures.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path,
                        std::string_view expected_schema = kFeatureSchemaVersion);

}  // namespace peerlens::estimator
