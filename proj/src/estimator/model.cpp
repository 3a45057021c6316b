#include "peerlens/estimator/model.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "peerlens/hash.hpp"

namespace peerlens::estimator {
namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Matrix standardized(const Standardization& s, const Matrix& x) { return s.apply(x); }

json standardization_json(const Standardization& s) {
  json constant = json::array();
  for (bool c : s.constant) constant.push_back(c);
  return {{"mean", s.mean}, {"scale", s.scale}, {"constant", constant}};
}

Standardization standardization_from(const json& j) {
  Standardization s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.scale = j.at("scale").get<std::vector<double>>();
  for (const auto& c : j.at("constant")) s.constant.push_back(c.get<bool>());
  if (s.scale.size() != s.mean.size() || s.constant.size() != s.mean.size()) {
    throw Error(ErrorCode::kCorruptModel, "standardization arrays differ in length");
  }
  return s;
}

json params_json(const TrainedModel& m) {
  switch (m.kind) {
    case ModelKind::kLinear: {
      const auto& p = std::get<LinearParams>(m.params);
      return {{"weights", p.weights}, {"intercept", p.intercept}, {"ridge", p.ridge}};
    }
    case ModelKind::kForest: {
      json trees = json::array();
      for (const auto& t : std::get<ForestParams>(m.params).trees) {
        json nodes = json::array();
        for (const auto& n : t.nodes) nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right, n.value}));
        trees.push_back(std::move(nodes));
      }
      return {{"trees", trees}};
    }
    case ModelKind::kMlp: {
      const auto& mm = std::get<MlpModel>(m.params);
      const auto& p = mm.params;
      return {{"inputs", p.inputs},
              {"hidden", p.hidden},
              {"activation", p.activation == Activation::kRelu ? "relu" : "tanh"},
              {"w1", p.w1},
              {"b1", p.b1},
              {"w2", p.w2},
              {"b2", p.b2},
              {"target_mean", mm.target_mean}};
    }
  }
  return {};
}

void params_from(TrainedModel& m, const json& j) {
  switch (m.kind) {
    case ModelKind::kLinear: {
      LinearParams p;
      p.weights = j.at("weights").get<std::vector<double>>();
      p.intercept = j.at("intercept").get<double>();
      p.ridge = j.at("ridge").get<double>();
      if (p.weights.size() != m.standardization.size()) throw Error(ErrorCode::kCorruptModel, "weight count mismatch");
      m.params = std::move(p);
      return;
    }
    case ModelKind::kForest: {
      ForestParams f;
      for (const auto& tj : j.at("trees")) {
        RegressionTree t;
        for (const auto& nj : tj) {
          TreeNode n;
          n.feature = nj.at(0).get<int>();
          n.threshold = nj.at(1).get<double>();
          n.left = nj.at(2).get<int>();
          n.right = nj.at(3).get<int>();
          n.value = nj.at(4).get<double>();
          t.nodes.push_back(n);
        }
        const auto count = static_cast<int>(t.nodes.size());
        if (count == 0) throw Error(ErrorCode::kCorruptModel, "empty tree");
        for (int i = 0; i < count; ++i) {
          const auto& n = t.nodes[static_cast<std::size_t>(i)];
          if (n.is_leaf()) continue;
          if (n.feature >= static_cast<int>(m.standardization.size()) || n.left <= i || n.right <= i ||
              n.left >= count || n.right >= count) {
            throw Error(ErrorCode::kCorruptModel, "tree node references out of range");
          }
        }
        f.trees.push_back(std::move(t));
      }
      m.params = std::move(f);
      return;
    }
    case ModelKind::kMlp: {
      MlpModel mm;
      auto& p = mm.params;
      p.inputs = j.at("inputs").get<std::size_t>();
      p.hidden = j.at("hidden").get<std::size_t>();
      const auto act = j.at("activation").get<std::string>();
      if (act != "relu" && act != "tanh") throw Error(ErrorCode::kCorruptModel, "unknown activation " + act);
      p.activation = act == "relu" ? Activation::kRelu : Activation::kTanh;
      p.w1 = j.at("w1").get<std::vector<double>>();
      p.b1 = j.at("b1").get<std::vector<double>>();
      p.w2 = j.at("w2").get<std::vector<double>>();
      p.b2 = j.at("b2").get<double>();
      mm.target_mean = j.at("target_mean").get<double>();
      if (p.inputs != m.standardization.size() || p.w1.size() != p.inputs * p.hidden || p.b1.size() != p.hidden ||
          p.w2.size() != p.hidden) {
        throw Error(ErrorCode::kCorruptModel, "MLP parameter shapes are inconsistent");
      }
      m.params = std::move(mm);
      return;
    }
  }
}

}  // namespace

std::string_view kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLinear: return "linear";
    case ModelKind::kForest: return "forest";
    case ModelKind::kMlp: return "mlp";
  }
  return "linear";
}

ModelKind parse_kind(std::string_view name) {
  if (name == "linear") return ModelKind::kLinear;
  if (name == "forest") return ModelKind::kForest;
  if (name == "mlp") return ModelKind::kMlp;
  throw Error(ErrorCode::kInvalidArgument, "unknown model kind '" + std::string(name) + "'");
}

TrainedModel fit_linear(const Matrix& x, std::span<const double> y, double ridge) {
  check_training_shape(x, y);
  TrainedModel m;
  m.kind = ModelKind::kLinear;
  m.standardization = Standardization::fit(x);
  m.params = fit_linear_params(standardized(m.standardization, x), y, ridge);
  m.meta.hyperparameters = {{"ridge", fmt_double(ridge)}};
  return m;
}

TrainedModel fit_mlp(const Matrix& x, std::span<const double> y, MlpConfig config, Exec exec) {
  check_training_shape(x, y);
  TrainedModel m;
  m.kind = ModelKind::kMlp;
  m.standardization = Standardization::fit(x);

  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  std::vector<double> centred(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) centred[i] = y[i] - mean;

  MlpFit fit = fit_mlp_params(standardized(m.standardization, x), centred, config, exec);
  m.params = MlpModel{std::move(fit.params), mean};
  m.loss_history = std::move(fit.loss_history);
  m.meta.seed = config.seed;
  m.meta.hyperparameters = {{"hidden", std::to_string(config.hidden)},
                            {"activation", config.activation == Activation::kRelu ? "relu" : "tanh"},
                            {"learning_rate", fmt_double(config.learning_rate)},
                            {"epochs", std::to_string(config.epochs)}};
  return m;
}

TrainedModel fit_forest(const Matrix& x, std::span<const double> y, const ForestConfig& config, Exec exec) {
  check_training_shape(x, y);
  TrainedModel m;
  m.kind = ModelKind::kForest;
  m.standardization = Standardization::fit(x);
  m.params = fit_forest_params(standardized(m.standardization, x), y, config, exec);
  m.meta.seed = config.seed;
  m.meta.hyperparameters = {{"trees", std::to_string(config.trees)},
                            {"max_depth", std::to_string(config.max_depth)},
                            {"min_leaf", std::to_string(config.min_leaf)},
                            {"feature_fraction", fmt_double(config.feature_fraction)},
                            {"bootstrap", config.bootstrap ? "true" : "false"}};
  return m;
}

TrainedModel fit_model(ModelKind kind, const Matrix& x, std::span<const double> y, const TrainOptions& options) {
  TrainedModel m;
  switch (kind) {
    case ModelKind::kLinear:
      m = fit_linear(x, y, options.ridge);
      break;
    case ModelKind::kForest: {
      ForestConfig cfg = options.forest;
      cfg.seed = options.seed;
      m = fit_forest(x, y, cfg, options.exec);
      break;
    }
    case ModelKind::kMlp: {
      MlpConfig cfg = options.mlp;
      cfg.seed = options.seed;
      m = fit_mlp(x, y, cfg, options.exec);
      break;
    }
  }
  m.meta.seed = options.seed;
  m.meta.corpus_fingerprint = options.corpus_fingerprint;
  return m;
}

double predict_row(const TrainedModel& model, std::span<const double> raw) {
  if (raw.size() != model.standardization.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "feature width " + std::to_string(raw.size()) + " != model width " +
                                                std::to_string(model.standardization.size()));
  }
  std::vector<double> z(raw.size());
  model.standardization.apply(raw, z);
  switch (model.kind) {
    case ModelKind::kLinear: return predict_linear(std::get<LinearParams>(model.params), z);
    case ModelKind::kForest: return std::get<ForestParams>(model.params).predict(z);
    case ModelKind::kMlp: {
      const auto& mm = std::get<MlpModel>(model.params);
      return mm.target_mean + mlp_forward(mm.params, z);
    }
  }
  return 0.0;
}

double predict(const TrainedModel& model, const FeatureVector& features) {
  if (features.schema_version != model.schema_version) {
    throw Error(ErrorCode::kSchemaMismatch, "feature schema '" + features.schema_version +
                                                "' does not match model schema '" + model.schema_version + "'");
  }
  return predict_row(model, features.values);
}

std::string serialize_model(const TrainedModel& model) {
  const json body = {{"standardization", standardization_json(model.standardization)},
                     {"params", params_json(model)}};
  json hyper = json::object();
  for (const auto& [k, v] : model.meta.hyperparameters) hyper[k] = v;
  const json doc = {{"format", "peerlens-model"},
                    {"format_version", kModelFormatVersion},
                    {"header",
                     {{"kind", kind_name(model.kind)},
                      {"schema_version", model.schema_version},
                      {"seed", model.meta.seed},
                      {"hyperparameters", hyper},
                      {"corpus_fingerprint", model.meta.corpus_fingerprint},
                      {"checksum", to_hex(fnv1a64(body.dump()))}}},
                    {"body", body}};
  return doc.dump(1) + "\n";
}

TrainedModel deserialize_model(std::string_view content, std::string_view expected_schema) {
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptModel, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != "peerlens-model") {
      throw Error(ErrorCode::kFormatVersionMismatch, "not a peerlens model file");
    }
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(ErrorCode::kFormatVersionMismatch, "model format version " + std::to_string(version) +
                                                         " is not supported (expected " +
                                                         std::to_string(kModelFormatVersion) + ")");
    }
    const json& header = doc.at("header");
    const auto schema = header.at("schema_version").get<std::string>();
    if (schema != expected_schema) {
      throw Error(ErrorCode::kFormatVersionMismatch,
                  "model feature schema '" + schema + "' does not match '" + std::string(expected_schema) + "'");
    }
    const json& body = doc.at("body");
    if (to_hex(fnv1a64(body.dump())) != header.at("checksum").get<std::string>()) {
      throw Error(ErrorCode::kCorruptModel, "model checksum mismatch");
    }
    TrainedModel m;
    m.schema_version = schema;
    try {
      m.kind = parse_kind(header.at("kind").get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorCode::kCorruptModel, e.what());
    }
    m.meta.seed = header.at("seed").get<std::uint64_t>();
    m.meta.corpus_fingerprint = header.at("corpus_fingerprint").get<std::string>();
    for (const auto& [k, v] : header.at("hyperparameters").items()) m.meta.hyperparameters[k] = v.get<std::string>();
    m.standardization = standardization_from(body.at("standardization"));
    params_from(m, body.at("params"));
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptModel, std::string("model file is malformed: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  const std::string content = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path, std::string_view expected_schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str(), expected_schema);
}

}  // namespace peerlens::estimator
