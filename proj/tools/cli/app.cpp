#include <iostream>

#include "CLI11.hpp"
#include "peerlens/cli/commands.hpp"
#include "peerlens/version.hpp"

namespace peerlens::cli {
namespace {

void add_backend_flags(CLI::App* cmd, BackendOptions& b) {
  cmd->add_option("--config", b.config_path, "JSON config file");
  cmd->add_option("--judge", b.judge, "judge backend")->check(CLI::IsMember({"none", "mock", "http"}));
  cmd->add_option("--openalex-fixtures", b.openalex_fixtures, "serve author records from <dir>/<ID>.json");
  cmd->add_flag("--no-openalex", b.no_openalex, "disable reviewer profile lookups");
  cmd->add_option("--model", b.model_path, "trained model file");
  cmd->add_option("--now", b.now, "fixed current date, YYYY-MM-DD or YYYY-MM-DDTHH:MM:SSZ");
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Peer-review quality engine", args.empty() ? "peerlens" : args.front()};
  app.set_version_flag("--version", std::string(kEngineVersion));
  app.require_subcommand(1);

  AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "analyze one ReviewInput JSON document");
  add_backend_flags(a, analyze.backends);
  a->add_option("-i,--input,input", analyze.input, "input file, - for stdin");
  a->add_option("--format", analyze.format, "output format")->check(CLI::IsMember({"json", "table"}));
  a->add_flag("--omit-timings", analyze.omit_timings, "leave timings_ms out of the report");

  AuditOptions audit;
  auto* u = app.add_subcommand("audit", "stream a JSONL corpus into JSONL reports");
  add_backend_flags(u, audit.backends);
  u->add_option("--corpus,corpus", audit.corpus, "JSONL corpus, - for stdin")->required();
  u->add_option("--out", audit.out, "report file, - for stdout");
  u->add_option("--summary", audit.summary, "summary file (default: stderr)");
  u->add_flag("--skip-llm", audit.skip_llm, "do not call the judge");
  u->add_option("--concurrency", audit.concurrency, "records analyzed in parallel")->check(CLI::PositiveNumber);
  u->add_option("--chunk", audit.chunk_lines, "lines read per chunk")->check(CLI::PositiveNumber);
  u->add_flag("--omit-timings", audit.omit_timings, "leave timings_ms out of the reports");

  TrainOptions train;
  auto* t = app.add_subcommand("train", "fit an estimator on an annotated corpus");
  add_backend_flags(t, train.backends);
  t->add_option("--corpus,corpus", train.corpus, "annotated JSONL corpus")->required();
  t->add_option("--model-kind", train.model_kind, "linear, forest or mlp");
  t->add_option("--out", train.out, "model output path")->required();
  t->add_option("--seed", train.seed, "training seed");
  t->add_flag("--use-human-rubric", train.use_human_rubric, "take rubric features from the human annotations");
  t->add_flag("--fail-fast", train.fail_fast, "stop at the first backend failure");

  EvaluateOptions evaluate;
  auto* e = app.add_subcommand("evaluate", "k-fold cross-validated Kendall tau_b");
  add_backend_flags(e, evaluate.backends);
  e->add_option("--corpus,corpus", evaluate.corpus, "annotated JSONL corpus")->required();
  e->add_option("--model-kind", evaluate.model_kind, "linear, forest or mlp");
  e->add_option("-k,--k,--folds", evaluate.k, "number of folds");
  e->add_option("--seed", evaluate.seed, "fold and training seed");
  e->add_option("--out", evaluate.out, "JSON report path");
  e->add_flag("--use-human-rubric", evaluate.use_human_rubric, "take rubric features from the human annotations");
  e->add_flag("--fail-fast", evaluate.fail_fast, "stop at the first backend failure");

  ServeOptions serve;
  auto* s = app.add_subcommand("serve", "run the HTTP service");
  add_backend_flags(s, serve.backends);
  s->add_option("--port", serve.port, "listen port (0 picks one)");
  s->add_option("--host", serve.host, "listen address");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (a->parsed()) return cmd_analyze(analyze, in, out, err);
  if (u->parsed()) return cmd_audit(audit, in, out, err);
  if (t->parsed()) return cmd_train(train, out, err);
  if (e->parsed()) return cmd_evaluate(evaluate, out, err);
  return cmd_serve(serve, err);
}

}  // namespace peerlens::cli
