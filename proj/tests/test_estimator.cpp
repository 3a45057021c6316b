#include <doctest.h>

#include <cmath>
#include <ctime>
#include <filesystem>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "peerlens/estimator/model.hpp"
#include "peerlens/judge/backend.hpp"
#include "peerlens/profile/openalex.hpp"
#include "support/golden.hpp"
#include "support/expect.hpp"
#include "support/oracles.hpp"

using namespace peerlens::estimator;
using peerlens::Error;
using peerlens::ErrorCode;
using peerlens::Exec;
using peerlens::Rng;
using peerlens::testing::code_of;
using peerlens::testing::linear_problem;

namespace {

Matrix random_matrix(Rng& rng, std::size_t n, std::size_t d, double lo = -1.0, double hi = 1.0) {
  Matrix m(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = rng.uniform(lo, hi);
  }
  return m;
}

std::vector<double> column_of(const Matrix& m, std::size_t j) {
  std::vector<double> c(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) c[i] = m(i, j);
  return c;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("peerlens_test_" + name);
}

}  // namespace

TEST_CASE("standardization uses population std and pins constant columns") {
  Matrix x(4, 2);
  for (std::size_t i = 0; i < 4; ++i) {
    x(i, 0) = static_cast<double>(i);
    x(i, 1) = 7.0;
  }
  const auto s = Standardization::fit(x);
  CHECK(s.mean[0] == doctest::Approx(1.5));
  CHECK(s.scale[0] == doctest::Approx(std::sqrt(1.25)));
  CHECK(s.constant[1]);
  CHECK(s.mean[1] == 7.0);
  CHECK(s.scale[1] == 1.0);
  const Matrix z = s.apply(x);
  for (std::size_t i = 0; i < 4; ++i) CHECK(z(i, 1) == 0.0);
}

TEST_CASE("linear recovers y = 2x + 1 exactly") {
  Matrix x(10, 1);
  std::vector<double> y(10);
  for (std::size_t i = 0; i < 10; ++i) {
    x(i, 0) = static_cast<double>(i) * 0.7 - 2.0;
    y[i] = 2.0 * x(i, 0) + 1.0;
  }
  const auto m = fit_linear(x, y, 0.0);
  const auto raw = to_raw(std::get<LinearParams>(m.params), m.standardization);
  CHECK(std::fabs(raw.weights[0] - 2.0) < 1e-9);
  CHECK(std::fabs(raw.intercept - 1.0) < 1e-9);
}

TEST_CASE("linear on a constant target has zero weights") {
  Rng rng(3);
  const Matrix x = random_matrix(rng, 15, 4);
  const std::vector<double> y(15, 3.25);
  const auto m = fit_linear(x, y);
  const auto& p = std::get<LinearParams>(m.params);
  for (double w : p.weights) CHECK(w == 0.0);
  CHECK(p.intercept == 3.25);
}

TEST_CASE("linear matches the naive normal-equations oracle") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const Matrix x = random_matrix(rng, 20, 5, -4.0, 9.0);
    std::vector<double> y(20);
    for (auto& v : y) v = rng.uniform(-10.0, 10.0);
    const auto m = fit_linear(x, y);
    const auto& p = std::get<LinearParams>(m.params);
    const auto expected =
        peerlens::testing::normal_equations_oracle(m.standardization.apply(x), y, kDefaultRidge);
    double worst = 0.0;
    for (std::size_t j = 0; j < 5; ++j) worst = std::max(worst, std::fabs(p.weights[j] - expected[j]));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("linear predictions are invariant to rescaling a feature") {
  Rng rng(11);
  const Matrix x = random_matrix(rng, 30, 4);
  std::vector<double> y(30);
  for (auto& v : y) v = rng.uniform(0.0, 5.0);
  Matrix scaled = x;
  for (std::size_t i = 0; i < 30; ++i) scaled(i, 2) *= 1234.5;
  const auto a = fit_linear(x, y);
  const auto b = fit_linear(scaled, y);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(std::fabs(predict_row(a, x.row(i)) - predict_row(b, scaled.row(i))) < 1e-8);
  }
}

TEST_CASE("linear recovers a 28-feature noiseless target") {
  const auto problem = linear_problem(2024, 200, 28);
  const auto m = fit_linear(problem.x, problem.y);
  const auto raw = to_raw(std::get<LinearParams>(m.params), m.standardization);
  for (std::size_t j = 0; j < 28; ++j) CHECK(std::fabs(raw.weights[j] - problem.weights[j]) < 1e-6);
  CHECK(std::fabs(raw.intercept - problem.intercept) < 1e-6);
}

TEST_CASE("linear errors") {
  Matrix x(5, 2);
  for (std::size_t i = 0; i < 5; ++i) {
    x(i, 0) = static_cast<double>(i);
    x(i, 1) = 2.0 * static_cast<double>(i);
  }
  const std::vector<double> y = {1, 2, 3, 4, 5};
  CHECK(code_of([&] { fit_linear(x, y, 0.0); }) == ErrorCode::kSingularSystem);
  CHECK(code_of([&] { fit_linear(x, std::vector<double>{1, 2}); }) == ErrorCode::kDimensionMismatch);
  CHECK(code_of([&] { fit_linear(Matrix(1, 2), std::vector<double>{1}); }) == ErrorCode::kTooFewSamples);
  CHECK_NOTHROW(fit_linear(x, y));
}

TEST_CASE("mlp gradient matches central finite differences") {
  Rng rng(99);
  for (int config = 0; config < 20; ++config) {
    const std::size_t inputs = 1 + rng.below(6);
    const std::size_t hidden = 1 + rng.below(8);
    const auto act = config % 2 == 0 ? Activation::kRelu : Activation::kTanh;
    const auto p = mlp_init(inputs, hidden, act, rng.next_u64());
    const Matrix x = random_matrix(rng, 8, inputs, -2.0, 2.0);
    std::vector<double> y(8);
    for (auto& v : y) v = rng.uniform(-1.0, 1.0);
    const auto analytic = mlp_loss_gradient(p, x, y, Exec::kSerial);
    const auto numeric = peerlens::testing::finite_difference_gradient(p, x, y, 1e-5);
    REQUIRE(analytic.grad.size() == numeric.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < numeric.size(); ++k) {
      const double denom = std::max({std::fabs(analytic.grad[k]), std::fabs(numeric[k]), 1e-6});
      worst = std::max(worst, std::fabs(analytic.grad[k] - numeric[k]) / denom);
    }
    CHECK_MESSAGE(worst < 1e-4, "config " << config);
    CHECK(analytic.loss == doctest::Approx(peerlens::testing::mse_of(p, x, y)).epsilon(1e-12));
  }
}

TEST_CASE("mlp serial and parallel gradients agree bit for bit") {
  Rng rng(5);
  const auto p = mlp_init(7, 9, Activation::kTanh, 17);
  const Matrix x = random_matrix(rng, 333, 7);
  std::vector<double> y(333);
  for (auto& v : y) v = rng.uniform(-1.0, 1.0);
  const auto a = mlp_loss_gradient(p, x, y, Exec::kSerial);
  const auto b = mlp_loss_gradient(p, x, y, Exec::kParallel);
  CHECK(a.loss == b.loss);
  CHECK(a.grad == b.grad);
}

TEST_CASE("mlp fits a noiseless linear target within default epochs") {
  const auto problem = linear_problem(8, 20, 28);
  const auto m = fit_mlp(problem.x, problem.y, MlpConfig{});
  double mse = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    const double r = predict_row(m, problem.x.row(i)) - problem.y[i];
    mse += r * r;
  }
  CHECK(mse / 20.0 < 1e-3);
  CHECK(m.loss_history.size() == 2000);
  CHECK(m.loss_history.back() < m.loss_history.front());
}

TEST_CASE("mlp training is deterministic") {
  const auto problem = linear_problem(4, 40, 6);
  MlpConfig cfg;
  cfg.epochs = 200;
  cfg.seed = 42;
  const auto a = fit_mlp(problem.x, problem.y, cfg, Exec::kParallel);
  const auto b = fit_mlp(problem.x, problem.y, cfg, Exec::kParallel);
  const auto c = fit_mlp(problem.x, problem.y, cfg, Exec::kSerial);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a.loss_history == c.loss_history);
  cfg.seed = 43;
  CHECK_FALSE(fit_mlp(problem.x, problem.y, cfg) == a);
}

TEST_CASE("mlp divergence is reported") {
  const auto problem = linear_problem(4, 40, 6);
  MlpConfig cfg;
  cfg.learning_rate = 1e3;
  cfg.epochs = 500;
  CHECK(code_of([&] { fit_mlp(problem.x, problem.y, cfg); }) == ErrorCode::kNonFiniteLoss);
}

TEST_CASE("mlp with zero weights outputs its bias") {
  auto p = mlp_init(3, 4, Activation::kRelu, 1);
  std::fill(p.w1.begin(), p.w1.end(), 0.0);
  std::fill(p.w2.begin(), p.w2.end(), 0.0);
  p.b2 = 0.625;
  const std::vector<double> x = {3.0, -1.0, 8.0};
  CHECK(mlp_forward(p, x) == 0.625);
}

TEST_CASE("mlp init stays within fan-in bounds") {
  const auto p = mlp_init(16, 9, Activation::kRelu, 3);
  for (double w : p.w1) CHECK(std::fabs(w) <= 0.25);
  for (double w : p.w2) CHECK(std::fabs(w) <= 1.0 / 3.0);
}

TEST_CASE("forest stump splits a perfectly separating binary feature") {
  Matrix x(6, 2);
  std::vector<double> y(6);
  for (std::size_t i = 0; i < 6; ++i) {
    x(i, 0) = static_cast<double>(i % 2);
    x(i, 1) = static_cast<double>(i % 3);
    y[i] = static_cast<double>(i % 2);
  }
  ForestConfig cfg;
  cfg.trees = 1;
  cfg.max_depth = 1;
  cfg.min_leaf = 1;
  cfg.feature_fraction = 1.0;
  cfg.bootstrap = false;
  const auto f = fit_forest_params(x, y, cfg);
  const auto& t = f.trees.at(0);
  REQUIRE(t.nodes.size() == 3);
  CHECK(t.nodes[0].feature == 0);
  CHECK(t.nodes[0].threshold == 0.5);
  CHECK(t.nodes[static_cast<std::size_t>(t.nodes[0].left)].value == 0.0);
  CHECK(t.nodes[static_cast<std::size_t>(t.nodes[0].right)].value == 1.0);
}

TEST_CASE("single tree equals brute-force split enumeration") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const Matrix x = random_matrix(rng, 30, 3, 0.0, 10.0);
    std::vector<double> y(30);
    for (std::size_t i = 0; i < 30; ++i) y[i] = std::sin(x(i, 0)) + 0.3 * x(i, 1) + rng.uniform(-0.5, 0.5);
    ForestConfig cfg;
    cfg.trees = 1;
    cfg.feature_fraction = 1.0;
    cfg.bootstrap = false;
    cfg.seed = seed;
    const auto fast = fit_forest_params(x, y, cfg).trees.at(0);
    const auto slow = peerlens::testing::brute_force_tree(x, y, cfg.max_depth, cfg.min_leaf);
    REQUIRE(fast.nodes.size() == slow.nodes.size());
    for (std::size_t k = 0; k < fast.nodes.size(); ++k) {
      CHECK(fast.nodes[k].feature == slow.nodes[k].feature);
      CHECK(fast.nodes[k].threshold == slow.nodes[k].threshold);
      CHECK(fast.nodes[k].left == slow.nodes[k].left);
      CHECK(fast.nodes[k].right == slow.nodes[k].right);
      CHECK(std::fabs(fast.nodes[k].value - slow.nodes[k].value) < 1e-12);
    }
  }
}

TEST_CASE("forest predictions stay within the target range") {
  Rng rng(21);
  const Matrix x = random_matrix(rng, 80, 5);
  std::vector<double> y(80);
  for (auto& v : y) v = rng.uniform(1.0, 5.0);
  const auto lo = *std::min_element(y.begin(), y.end());
  const auto hi = *std::max_element(y.begin(), y.end());
  ForestConfig cfg;
  cfg.trees = 25;
  const auto m = fit_forest(x, y, cfg);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> probe(5);
    for (auto& v : probe) v = rng.uniform(-10.0, 10.0);
    const double p = predict_row(m, probe);
    CHECK(p >= lo);
    CHECK(p <= hi);
  }
}

TEST_CASE("tree structure depends only on feature rank order") {
  Rng rng(8);
  const Matrix x = random_matrix(rng, 40, 3, 0.1, 4.0);
  std::vector<double> y(40);
  for (auto& v : y) v = rng.uniform(0.0, 1.0);
  Matrix warped = x;
  for (std::size_t i = 0; i < 40; ++i) warped(i, 1) = std::exp(3.0 * x(i, 1));
  ForestConfig cfg;
  cfg.trees = 1;
  cfg.feature_fraction = 1.0;
  cfg.bootstrap = false;
  const auto a = fit_forest_params(x, y, cfg).trees.at(0);
  const auto b = fit_forest_params(warped, y, cfg).trees.at(0);
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t k = 0; k < a.nodes.size(); ++k) {
    CHECK(a.nodes[k].feature == b.nodes[k].feature);
    CHECK(a.nodes[k].left == b.nodes[k].left);
    CHECK(a.nodes[k].value == b.nodes[k].value);
  }
}

TEST_CASE("forest is deterministic across Exec modes") {
  Rng rng(2);
  const Matrix x = random_matrix(rng, 60, 6);
  const auto y = column_of(x, 0);
  ForestConfig cfg;
  cfg.trees = 12;
  cfg.seed = 77;
  const auto a = fit_forest_params(x, y, cfg, Exec::kParallel);
  CHECK(a == fit_forest_params(x, y, cfg, Exec::kSerial));
  cfg.seed = 78;
  CHECK_FALSE(a == fit_forest_params(x, y, cfg, Exec::kParallel));
}

TEST_CASE("features_per_node floors and clamps") {
  ForestConfig cfg;
  CHECK(features_per_node(cfg, 28) == 9);
  CHECK(features_per_node(cfg, 2) == 1);
  cfg.feature_fraction = 1.0;
  CHECK(features_per_node(cfg, 5) == 5);
}

TEST_CASE("feature vector layout without a profile") {
  peerlens::text::StructuredMetrics m;
  const auto r = rubric_from_annotations([] {
    std::map<std::string, int> a;
    for (auto k : peerlens::judge::kAspectKeys) a[std::string(k)] = 3;
    return a;
  }());
  const auto f = assemble_features(m, r, std::nullopt);
  REQUIRE(f.values.size() == kFeatureCount);
  CHECK(feature_names().size() == kFeatureCount);
  CHECK(f.schema_version == "features-v1");
  for (std::size_t i = 0; i < 11; ++i) CHECK(f.values[i] == 0.0);
  for (std::size_t i = 11; i < 24; ++i) CHECK(f.values[i] == 3.0);
  for (std::size_t i = 24; i < 28; ++i) CHECK(f.values[i] == 0.0);

  peerlens::profile::ReviewerProfile p;
  p.citation_count = 1500;
  p.tenure_years = 15;
  p.topical_alignment = 0.3;
  const auto g = assemble_features(m, r, p);
  for (std::size_t i = 0; i < 24; ++i) CHECK(g.values[i] == f.values[i]);
  CHECK(g.values[24] == 1500.0);
  CHECK(g.values[25] == 15.0);
  CHECK(g.values[26] == 0.3);
  CHECK(g.values[27] == 1.0);

  auto partial = r;
  partial.scores.erase("clarity_readability");
  CHECK(code_of([&] { assemble_features(m, partial, std::nullopt); }) == ErrorCode::kSchemaMismatch);
}

TEST_CASE("fixture review end-to-end feature vector") {
  const auto doc = nlohmann::json::parse(peerlens::testing::read_file(peerlens::testing::fixture_path("review.json")));
  peerlens::ReviewInput review;
  review.title = doc.at("title");
  review.abstract = doc.at("abstract");
  review.review_text = doc.at("review_text");
  const peerlens::text::TextMetrics metrics;
  const auto structured = metrics.compute(review.review_text, review.paper_text());
  const peerlens::judge::MockJudgeBackend backend;
  const auto rubric = peerlens::judge::judge(review, backend);
  const peerlens::profile::FixtureAuthorSource source(peerlens::testing::fixture_path("openalex"));
  std::tm tm{};
  tm.tm_year = 2025 - 1900;
  tm.tm_mday = 1;
  const auto now = std::chrono::system_clock::from_time_t(timegm(&tm));
  const auto prof = peerlens::profile::derive_profile(source.fetch(doc.at("reviewer_openalex_id")),
                                                      review.paper_text(), metrics, now);
  const auto f = assemble_features(structured, rubric, prof);
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t i = 0; i < kFeatureCount; ++i) out[feature_names()[i]] = f.values[i];
  const std::string actual = out.dump(2) + "\n";
  CHECK(actual == peerlens::testing::golden("features_review.json", actual));
}

TEST_CASE("model save/load round trip is exact for every kind") {
  const auto problem = linear_problem(31, 40, 5);
  TrainOptions opt;
  opt.seed = 9;
  opt.forest.trees = 10;
  opt.mlp.epochs = 50;
  opt.corpus_fingerprint = "abc";
  for (auto kind : {ModelKind::kLinear, ModelKind::kForest, ModelKind::kMlp}) {
    const auto m = fit_model(kind, problem.x, problem.y, opt);
    const auto path = temp_file(std::string(kind_name(kind)) + ".json");
    save_model(m, path);
    const auto loaded = load_model(path);
    CHECK(loaded == m);
    for (std::size_t i = 0; i < problem.x.rows(); ++i) {
      CHECK(predict_row(loaded, problem.x.row(i)) == predict_row(m, problem.x.row(i)));
    }
    CHECK(serialize_model(loaded) == serialize_model(m));
    std::filesystem::remove(path);
  }
}

TEST_CASE("model load failures") {
  const auto problem = linear_problem(31, 40, 5);
  const std::string text = serialize_model(fit_linear(problem.x, problem.y));

  CHECK(code_of([&] { deserialize_model(text.substr(0, text.size() / 2)); }) == ErrorCode::kCorruptModel);
  CHECK(code_of([&] { deserialize_model(text, "features-v2"); }) == ErrorCode::kFormatVersionMismatch);

  auto doc = nlohmann::json::parse(text);
  doc["format_version"] = 2;
  CHECK(code_of([&] { deserialize_model(doc.dump()); }) == ErrorCode::kFormatVersionMismatch);

  doc = nlohmann::json::parse(text);
  doc["body"]["params"]["intercept"] = 123.0;
  CHECK(code_of([&] { deserialize_model(doc.dump()); }) == ErrorCode::kCorruptModel);

  CHECK(code_of([&] { load_model("/nonexistent/model.json"); }) == ErrorCode::kIoError);
}

TEST_CASE("predict checks the feature schema") {
  const auto problem = linear_problem(1, 30, kFeatureCount);
  const auto m = fit_linear(problem.x, problem.y);
  FeatureVector f{std::vector<double>(problem.x.row(0).begin(), problem.x.row(0).end()), "features-v1"};
  CHECK(std::isfinite(predict(m, f)));
  f.schema_version = "features-v0";
  CHECK(code_of([&] { predict(m, f); }) == ErrorCode::kSchemaMismatch);
  f.schema_version = "features-v1";
  f.values.pop_back();
  CHECK(code_of([&] { predict(m, f); }) == ErrorCode::kSchemaMismatch);
}

TEST_CASE("linear with zero weights predicts its intercept") {
  TrainedModel m;
  m.standardization = Standardization::fit(Matrix(2, 3, 1.0));
  m.params = LinearParams{{0.0, 0.0, 0.0}, 4.5, 0.0};
  const std::vector<double> x = {9.0, -3.0, 1e6};
  CHECK(predict_row(m, x) == 4.5);
}

TEST_CASE("golden linear model prediction matches manual matrix math") {
  const std::string text = peerlens::testing::read_file(peerlens::testing::fixture_path("model_linear.json"));
  const auto m = deserialize_model(text);
  const auto vec = nlohmann::json::parse(peerlens::testing::read_file(peerlens::testing::golden_path("features_review.json")));
  std::vector<double> x;
  for (const auto& name : feature_names()) x.push_back(vec.at(name).get<double>());

  const auto doc = nlohmann::json::parse(text);
  const auto& body = doc["body"];
  double manual = body["params"]["intercept"].get<double>();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double z = (x[j] - body["standardization"]["mean"][j].get<double>()) /
                     body["standardization"]["scale"][j].get<double>();
    manual += body["params"]["weights"][j].get<double>() * z;
  }
  const double score = predict_row(m, x);
  CHECK(std::fabs(score - manual) < 1e-12);
  std::ostringstream os;
  os.precision(17);
  os << score << "\n";
  CHECK(os.str() == peerlens::testing::golden("model_linear_score.txt", os.str()));
}
