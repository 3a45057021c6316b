#pragma once

#include <string>
#include <vector>

#include "common.hpp"
#include "peerlens/estimator/matrix.hpp"

namespace peerlens::cli {

struct TrainingSet {
  estimator::Matrix x;
  std::vector<double> y;
  std::size_t skipped = 0;
  std::string corpus_fingerprint;  // FNV-1a of the corpus bytes
};

/// Streams an annotated corpus into feature rows. Malformed records are
/// reported and skipped; backend failures skip the record unless
/// `fail_fast`, which throws CommandError(3). Throws CommandError(2) when
/// fewer than kMinTrainingRecords usable records remain.
TrainingSet build_training_set(const std::string& corpus, const BackendOptions& backends, bool use_human_rubric,
                               bool fail_fast, std::ostream& err);

}  // namespace peerlens::cli
