#include <iomanip>
#include <iostream>

#include "peerlens/agreement/cross_validation.hpp"
#include "peerlens/agreement/kendall.hpp"
#include "peerlens/estimator/model.hpp"
#include "training.hpp"

namespace peerlens::cli {
namespace {

using nlohmann::json;

estimator::ModelKind kind_or_throw(const std::string& name) {
  try {
    return estimator::parse_kind(name);
  } catch (const Error&) {
    throw CommandError(kExitInput, "--model must be linear, forest or mlp");
  }
}

int from_error(const Error& e, std::ostream& err) {
  err << code_name(e.code()) << ": " << e.what() << '\n';
  switch (e.code()) {
    case ErrorCode::kTooFewSamples:
    case ErrorCode::kDegenerateInput:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kIoError:
      return kExitInput;
    default:
      return kExitBackend;
  }
}

}  // namespace

int cmd_train(const TrainOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const auto kind = kind_or_throw(o.model_kind);
    if (o.out.empty()) throw CommandError(kExitInput, "--out is required");
    const auto set = build_training_set(o.corpus, o.backends, o.use_human_rubric, o.fail_fast, err);

    estimator::TrainOptions train;
    train.seed = o.seed;
    train.corpus_fingerprint = set.corpus_fingerprint;
    const auto model = estimator::fit_model(kind, set.x, set.y, train);

    std::vector<double> predicted(set.y.size());
    double sse = 0.0;
    for (std::size_t i = 0; i < set.y.size(); ++i) {
      predicted[i] = estimator::predict_row(model, set.x.row(i));
      sse += (predicted[i] - set.y[i]) * (predicted[i] - set.y[i]);
    }
    json tau = nullptr;
    try {
      tau = agreement::kendall_tau_b(predicted, set.y);
    } catch (const Error&) {
    }
    estimator::save_model(model, o.out);

    const json report = {{"model", std::string(estimator::kind_name(kind))},
                         {"records", set.y.size()},
                         {"skipped", set.skipped},
                         {"seed", o.seed},
                         {"corpus_fingerprint", set.corpus_fingerprint},
                         {"training_mse", sse / static_cast<double>(set.y.size())},
                         {"in_sample_tau_b", tau},
                         {"out", o.out}};
    out << report.dump(2) << '\n';
    return kExitOk;
  } catch (const CommandError& e) {
    err << e.what() << '\n';
    return e.exit_code();
  } catch (const Error& e) {
    return from_error(e, err);
  }
}

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const auto kind = kind_or_throw(o.model_kind);
    const auto set = build_training_set(o.corpus, o.backends, o.use_human_rubric, o.fail_fast, err);

    estimator::TrainOptions train;
    train.seed = o.seed;
    train.corpus_fingerprint = set.corpus_fingerprint;
    const auto cv = agreement::cross_validate(set.x, set.y, kind, train, o.k, o.seed);

    for (std::size_t f = 0; f < cv.per_fold.size(); ++f) {
      out << "fold " << (f + 1) << ": tau_b = ";
      if (cv.per_fold[f]) {
        out << std::fixed << std::setprecision(6) << *cv.per_fold[f] << '\n';
      } else {
        out << "undefined\n";
      }
    }
    out << "mean tau_b = " << std::fixed << std::setprecision(6) << cv.mean_tau << '\n';

    if (o.out) {
      auto report = cv.to_json();
      report["records"] = set.y.size();
      report["skipped"] = set.skipped;
      report["corpus_fingerprint"] = set.corpus_fingerprint;
      OutputFile file(*o.out, out);
      file.stream() << report.dump(2) << '\n';
    }
    return kExitOk;
  } catch (const CommandError& e) {
    err << e.what() << '\n';
    return e.exit_code();
  } catch (const Error& e) {
    return from_error(e, err);
  }
}

}  // namespace peerlens::cli
