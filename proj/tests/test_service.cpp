#include <doctest.h>

#include <atomic>
#include <thread>

#include <nlohmann/json.hpp>

#include "peerlens/service/config.hpp"
#include "support/expect.hpp"
#include "support/golden.hpp"
#include "support/mock_http.hpp"
#include "support/oracles.hpp"
#include "support/schema.hpp"
#include "support/service_env.hpp"

using namespace peerlens::service;
using nlohmann::json;
using peerlens::ErrorCode;
using peerlens::testing::code_of;
using peerlens::testing::fixture_engine;
using peerlens::testing::fixture_path;
using peerlens::testing::read_file;
using peerlens::testing::schemas;
using peerlens::testing::ServiceHarness;

namespace {

json fixture_body() { return json::parse(read_file(fixture_path("review.json"))); }

std::string canonical(const QualityReport& r) { return to_json(r, JsonOptions{false, true}).dump(2) + "\n"; }

json canonical_json(json report) {
  report.erase("timings_ms");
  if (report["profile"].is_object()) report["profile"].erase("fetched_at");
  return report;
}

RequestError request_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const RequestError& e) {
    return e;
  }
  FAIL("expected a RequestError");
  return RequestError(0, "", "");
}

void expect_valid(const std::string& schema, const json& doc) {
  const auto errors = schemas().validate(schema, doc);
  std::string joined;
  for (const auto& e : errors) joined += e + "\n";
  CHECK_MESSAGE(errors.empty(), joined);
}

std::shared_ptr<const peerlens::estimator::TrainedModel> small_model() {
  const auto p = peerlens::testing::linear_problem(3, 40, peerlens::estimator::kFeatureCount);
  return std::make_shared<const peerlens::estimator::TrainedModel>(peerlens::estimator::fit_linear(p.x, p.y));
}

}  // namespace

TEST_CASE("fixture review produces the golden report") {
  const Analyzer analyzer(fixture_engine());
  const auto report = analyzer.analyze(parse_review_input(fixture_body()));
  CHECK_FALSE(report.degraded);
  CHECK(std::holds_alternative<peerlens::judge::RubricScores>(report.rubric));
  CHECK(std::holds_alternative<peerlens::profile::ReviewerProfile>(report.profile));
  CHECK_FALSE(report.overall_estimate.has_value());
  const std::string actual = canonical(report);
  CHECK(actual == peerlens::testing::golden("report_review.json", actual));
  expect_valid("quality_report.schema.json", to_json(report));
}

TEST_CASE("empty review text is rejected with empty_review") {
  const Analyzer analyzer(fixture_engine());
  auto body = fixture_body();
  body["review_text"] = "";
  auto e = request_error([&] { analyzer.analyze(parse_review_input(body)); });
  CHECK(e.status() == 422);
  CHECK(e.code() == "empty_review");
  body["review_text"] = "  ...  ";
  e = request_error([&] { analyzer.analyze(parse_review_input(body)); });
  CHECK(e.code() == "empty_review");
}

TEST_CASE("request invariants") {
  const Analyzer analyzer(fixture_engine());
  auto body = fixture_body();
  body["title"] = "";
  body["abstract"] = "";
  CHECK(request_error([&] { analyzer.analyze(parse_review_input(body)); }).code() == "empty_paper_context");
  body = fixture_body();
  body["include_llm"] = "yes";
  CHECK(request_error([&] { parse_review_input(body); }).code() == "invalid_field");
  body = fixture_body();
  body["reviewer_openalex_id"] = "X123";
  CHECK(request_error([&] { parse_review_input(body); }).code() == "invalid_reviewer_id");
  body = fixture_body();
  body.erase("reviewer_openalex_id");
  body["include_profile"] = true;
  CHECK(request_error([&] { analyzer.analyze(parse_review_input(body)); }).code() == "missing_reviewer_id");
  CHECK(request_error([&] { parse_review_input(json::array()); }).status() == 400);

  Engine small = fixture_engine();
  small.limits.max_review_bytes = 10;
  const Analyzer limited(std::move(small));
  CHECK(request_error([&] { limited.analyze(parse_review_input(fixture_body())); }).status() == 413);
}

TEST_CASE("include_llm=false skips the judge entirely") {
  auto judge = std::make_shared<peerlens::judge::MockJudgeBackend>();
  const Analyzer analyzer(fixture_engine(judge));
  auto body = fixture_body();
  body["include_llm"] = false;
  const auto report = analyzer.analyze(parse_review_input(body));
  CHECK(std::holds_alternative<std::monostate>(report.rubric));
  CHECK(to_json(report)["rubric"].is_null());
  CHECK(judge->calls() == 0);
  CHECK_FALSE(report.degraded);
}

TEST_CASE("profile defaults follow the reviewer id") {
  const Analyzer analyzer(fixture_engine());
  auto body = fixture_body();
  body["include_profile"] = false;
  CHECK(std::holds_alternative<std::monostate>(analyzer.analyze(parse_review_input(body)).profile));
  body.erase("include_profile");
  body.erase("reviewer_openalex_id");
  CHECK(std::holds_alternative<std::monostate>(analyzer.analyze(parse_review_input(body)).profile));
}

TEST_CASE("judge failure degrades the rubric section only") {
  auto failing = std::make_shared<peerlens::judge::FailingJudgeBackend>();
  const Analyzer analyzer(fixture_engine(failing));
  const auto report = analyzer.analyze(parse_review_input(fixture_body()));
  CHECK(report.degraded);
  const auto j = to_json(report);
  CHECK(j["rubric"]["error"]["code"] == "backend_error");
  CHECK(j["profile"]["citation_count"] == 1500);
  CHECK(j["structured"]["review_length_tokens"].get<int>() > 0);
  expect_valid("quality_report.schema.json", j);

  const auto scripted = std::make_shared<peerlens::judge::ScriptedJudgeBackend>(std::vector<std::string>{"no json"});
  const Analyzer garbled(fixture_engine(scripted));
  const auto g = to_json(garbled.analyze(parse_review_input(fixture_body())));
  CHECK(g["rubric"]["error"]["code"] == "malformed_judgment");
  CHECK(scripted->calls() == 3);
}

TEST_CASE("OpenAlex failures degrade the profile section") {
  const Analyzer analyzer(fixture_engine());
  auto body = fixture_body();
  body["reviewer_openalex_id"] = "A5000000003";
  const auto j = to_json(analyzer.analyze(parse_review_input(body)));
  CHECK(j["degraded"] == true);
  CHECK(j["profile"]["error"]["code"] == "not_found");
  CHECK(j["rubric"]["scores"].size() == 13);

  peerlens::testing::MockServer upstream([](httplib::Server& s) {
    s.Get(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
      res.set_content("{}", "application/json");
    });
  });
  Engine engine = fixture_engine();
  peerlens::profile::OpenAlexClient::Config oc;
  oc.base_url = upstream.base_url();
  oc.max_retries = 0;
  engine.authors = std::make_shared<peerlens::profile::OpenAlexClient>(oc);
  const Analyzer live(std::move(engine));
  const auto k = to_json(live.analyze(parse_review_input(fixture_body())));
  CHECK(k["profile"]["error"]["code"] == "upstream_error");
  CHECK(k["profile"]["error"]["upstream_status"] == 500);
  expect_valid("quality_report.schema.json", k);
}

TEST_CASE("estimates need a model and rubric features") {
  Engine engine = fixture_engine();
  const auto handle = engine.model;
  const Analyzer analyzer(std::move(engine));
  auto body = fixture_body();
  body["require_estimate"] = true;
  const auto e = request_error([&] { analyzer.analyze(parse_review_input(body)); });
  CHECK(e.status() == 503);
  CHECK(e.code() == "model_not_loaded");

  handle->set(small_model());
  const auto report = analyzer.analyze(parse_review_input(body));
  REQUIRE(report.overall_estimate.has_value());
  CHECK(std::isfinite(*report.overall_estimate));

  body["include_llm"] = false;
  const auto j = to_json(analyzer.analyze(parse_review_input(body)));
  CHECK(j["overall_estimate"].is_null());
  CHECK(j["estimate_error"]["error"]["code"] == "missing_features");
  expect_valid("quality_report.schema.json", j);
}

TEST_CASE("batch isolates items and preserves order") {
  const Analyzer analyzer(fixture_engine());
  auto empty = fixture_body();
  empty["review_text"] = "";
  const json body = json::array({fixture_body(), empty, fixture_body()});
  const auto out = analyzer.analyze_batch(body);
  REQUIRE(out.size() == 3);
  CHECK(out[0].contains("structured"));
  CHECK(out[1]["error"]["code"] == "empty_review");
  CHECK(out[2].contains("structured"));
  expect_valid("batch_response.schema.json", out);

  const auto single = to_json(analyzer.analyze(parse_review_input(fixture_body())));
  CHECK(canonical_json(out[0]) == canonical_json(single));
  CHECK(canonical_json(out[2]) == canonical_json(single));
}

TEST_CASE("batch limits") {
  const Analyzer analyzer(fixture_engine());
  json big = json::array();
  for (int i = 0; i < 501; ++i) big.push_back(fixture_body());
  auto e = request_error([&] { analyzer.analyze_batch(big); });
  CHECK(e.status() == 400);
  CHECK(e.code() == "batch_too_large");
  CHECK(request_error([&] { analyzer.analyze_batch(json::object()); }).status() == 400);
  CHECK(request_error([&] { analyzer.analyze_batch(json::array()); }).status() == 400);
}

TEST_CASE("batch of identical items gives identical reports") {
  const Analyzer analyzer(fixture_engine());
  json body = json::array();
  for (int i = 0; i < 12; ++i) body.push_back(fixture_body());
  const auto out = analyzer.analyze_batch(body, JsonOptions{false, true});
  for (const auto& item : out) CHECK(item == out[0]);
}

TEST_CASE("reviewer lookups") {
  const Analyzer analyzer(fixture_engine());
  const auto p = analyzer.reviewer("https://openalex.org/A5000000001", "");
  CHECK(p.openalex_id == "A5000000001");
  CHECK(p.citation_count == 1500);
  CHECK_FALSE(p.topical_alignment.has_value());
  CHECK(analyzer.reviewer("A5000000001", "graph neural networks").topical_alignment.has_value());
  expect_valid("reviewer_profile.schema.json", to_json(p));

  CHECK(request_error([&] { analyzer.reviewer("X123", ""); }).status() == 422);
  CHECK(request_error([&] { analyzer.reviewer("A5000000003", ""); }).status() == 404);
}

TEST_CASE("HTTP endpoints") {
  Engine engine = fixture_engine();
  const auto handle = engine.model;
  ServiceHarness service(std::move(engine));
  auto client = service.client();

  auto health = client.Get("/v1/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  auto hj = json::parse(health->body);
  CHECK(hj["model_loaded"] == false);
  expect_valid("health.schema.json", hj);
  handle->set(small_model());
  hj = json::parse(client.Get("/v1/health")->body);
  CHECK(hj["model_loaded"] == true);
  expect_valid("health.schema.json", hj);

  const std::string body = fixture_body().dump();
  auto analyze = client.Post("/v1/analyze", body, "application/json");
  REQUIRE(analyze);
  CHECK(analyze->status == 200);
  CHECK(analyze->get_header_value("Content-Type") == "application/json");
  const auto report = json::parse(analyze->body);
  expect_valid("quality_report.schema.json", report);
  CHECK(report["overall_estimate"].is_number());
  const auto direct = to_json(service.analyzer().analyze(parse_review_input(fixture_body())));
  CHECK(canonical_json(report) == canonical_json(direct));

  auto bad = client.Post("/v1/analyze", "{not json", "application/json");
  CHECK(bad->status == 400);
  CHECK(json::parse(bad->body)["error"]["code"] == "malformed_json");
  expect_valid("error.schema.json", json::parse(bad->body));

  auto empty = fixture_body();
  empty["review_text"] = "";
  auto unprocessable = client.Post("/v1/analyze", empty.dump(), "application/json");
  CHECK(unprocessable->status == 422);
  CHECK(json::parse(unprocessable->body)["error"]["code"] == "empty_review");

  auto batch = client.Post("/v1/analyze/batch", json::array({fixture_body(), empty}).dump(), "application/json");
  CHECK(batch->status == 200);
  const auto items = json::parse(batch->body);
  expect_valid("batch_response.schema.json", items);
  CHECK(canonical_json(items[0]) == canonical_json(report));
  CHECK(items[1]["error"]["code"] == "empty_review");

  json big = json::array();
  for (int i = 0; i < 501; ++i) big.push_back(json{{"review_text", "x"}});
  auto too_big = client.Post("/v1/analyze/batch", big.dump(), "application/json");
  CHECK(too_big->status == 400);
  CHECK(json::parse(too_big->body)["error"]["code"] == "batch_too_large");

  auto reviewer = client.Get("/v1/reviewer/A5000000001?submission_text=graph%20networks");
  CHECK(reviewer->status == 200);
  const auto pj = json::parse(reviewer->body);
  expect_valid("reviewer_profile.schema.json", pj);
  CHECK(pj["topical_alignment"].is_number());
  CHECK(client.Get("/v1/reviewer/A5000000001")->status == 200);
  CHECK(json::parse(client.Get("/v1/reviewer/A5000000001")->body)["topical_alignment"].is_null());
  CHECK(client.Get("/v1/reviewer/X123")->status == 422);
  CHECK(client.Get("/v1/reviewer/A5000000003")->status == 404);

  auto missing = client.Get("/v1/nothing");
  CHECK(missing->status == 404);
  expect_valid("error.schema.json", json::parse(missing->body));
}

TEST_CASE("reviewer endpoint echoes upstream failures as 502") {
  peerlens::testing::MockServer upstream([](httplib::Server& s) {
    s.Get(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
      res.set_content("oops", "text/plain");
    });
  });
  Engine engine = fixture_engine();
  peerlens::profile::OpenAlexClient::Config oc;
  oc.base_url = upstream.base_url();
  oc.max_retries = 0;
  engine.authors = std::make_shared<peerlens::profile::OpenAlexClient>(oc);
  ServiceHarness service(std::move(engine));
  auto res = service.client().Get("/v1/reviewer/A5000000001");
  REQUIRE(res);
  CHECK(res->status == 502);
  const auto j = json::parse(res->body);
  CHECK(j["error"]["upstream_status"] == 500);
  expect_valid("error.schema.json", j);
}

TEST_CASE("logs never carry request content") {
  ServiceHarness service(fixture_engine());
  auto client = service.client();
  const auto body = fixture_body();
  client.Post("/v1/analyze", body.dump(), "application/json");
  client.Post("/v1/analyze/batch", json::array({body, body}).dump(), "application/json");
  client.Get("/v1/reviewer/A5000000001?submission_text=secret%20submission%20words");
  client.Post("/v1/analyze", "{\"review_text\": \"", "application/json");
  service.stop();
  const std::string log = service.log_text();

  std::istringstream lines(log);
  std::string line;
  int requests = 0;
  const std::set<std::string> allowed = {"ts",     "level",     "event",    "request_id",  "method", "route",
                                         "status", "bytes_in",  "bytes_out", "duration_ms", "error_code", "detail"};
  while (std::getline(lines, line)) {
    const auto j = json::parse(line);
    for (const auto& [k, _] : j.items()) CHECK_MESSAGE(allowed.count(k), k);
    if (j["event"] == "request") ++requests;
  }
  CHECK(requests == 4);
  for (const std::string needle : {"sparse message passing", "Sparse Message Passing", "sensitivity analysis",
                                   "Hamilton", "A5000000001", "secret", "molecular"}) {
    CHECK_MESSAGE(log.find(needle) == std::string::npos, needle);
  }
  CHECK(log.find("malformed_json") != std::string::npos);
}

TEST_CASE("model swaps never disturb in-flight readers") {
  Engine engine = fixture_engine();
  const auto handle = engine.model;
  const Analyzer analyzer(std::move(engine));
  auto body = fixture_body();
  const auto input = parse_review_input(body);
  std::atomic<bool> done{false};
  std::thread swapper([&] {
    const auto m = small_model();
    while (!done) {
      handle->set(m);
      handle->set(nullptr);
    }
  });
  for (int i = 0; i < 50; ++i) {
    const auto r = analyzer.analyze(input);
    CHECK((r.overall_estimate.has_value() || !r.estimate_error.has_value()));
  }
  done = true;
  swapper.join();
}

TEST_CASE("config defaults, overrides and errors") {
  const auto c = parse_config(nullptr);
  CHECK(c.server.port == 8080);
  CHECK(c.judge.kind == "none");
  CHECK(c.limits.max_batch == 500);
  CHECK(c.limits.max_review_bytes == 1u << 20);

  const auto d = parse_config(json{{"server", {{"port", 9000}}}, {"backends", {{"judge", {{"kind", "mock"}}}}}},
                              {{"PEERLENS_SERVER_PORT", "9100"}, {"PEERLENS_LIMITS_MAX_BATCH", "20"}});
  CHECK(d.server.port == 9100);
  CHECK(d.judge.kind == "mock");
  CHECK(d.limits.max_batch == 20);

  auto message = [](const std::function<void()>& f) {
    try {
      f();
    } catch (const peerlens::Error& e) {
      CHECK(e.code() == ErrorCode::kConfigError);
      return std::string(e.what());
    }
    FAIL("expected ConfigError");
    return std::string();
  };
  CHECK(message([] { parse_config(json{{"backends", {{"judge", {{"colour", 1}}}}}}); })
            .rfind("/backends/judge/colour:", 0) == 0);
  CHECK(message([] { parse_config(json{{"server", {{"port", "80"}}}}); }).rfind("/server/port:", 0) == 0);
  CHECK(message([] { parse_config(json{{"server", {{"port", 70000}}}}); }).rfind("/server/port:", 0) == 0);
  CHECK(message([] { parse_config(json{{"backends", {{"judge", {{"kind", "gpt"}}}}}}); })
            .rfind("/backends/judge/kind:", 0) == 0);
  CHECK(message([] { parse_config(json{{"backends", {{"judge", {{"kind", "http"}}}}}}); })
            .rfind("/backends/judge/base_url:", 0) == 0);
  CHECK(message([] { parse_config(nullptr, {{"PEERLENS_SERVER_PORT", "eighty"}}); })
            .rfind("PEERLENS_SERVER_PORT:", 0) == 0);
}

TEST_CASE("engine build reports an unloadable model without failing") {
  ServiceConfig c = parse_config(nullptr);
  c.openalex.kind = "none";
  c.model_path = "/nonexistent/model.json";
  std::string warning;
  const auto engine = build_engine(c, &warning);
  CHECK(engine.model->get() == nullptr);
  CHECK(warning == "io_error");
  CHECK(engine.judge == nullptr);
  CHECK(engine.authors == nullptr);
}
