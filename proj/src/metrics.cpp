#include "featshift/metrics.hpp"

#include <algorithm>

#include "featshift/error.hpp"

namespace featshift {

PrecisionRecall rates(const Confusion& counts) {
  PrecisionRecall pr;
  pr.counts = counts;
  const std::size_t pred = counts.tp + counts.fp;
  const std::size_t real = counts.tp + counts.fn;
  pr.precision = pred ? static_cast<double>(counts.tp) / static_cast<double>(pred) : 0.0;
  pr.recall = real ? static_cast<double>(counts.tp) / static_cast<double>(real) : 0.0;
  pr.degenerate = pred == 0 || real == 0;
  return pr;
}

PrecisionRecall micro_pr(std::span<const TrialOutcome> outcomes, std::size_t d) {
  if (d < 1) throw InvalidArgumentError("micro_pr: d must be >= 1");
  Confusion c;
  std::vector<char> pred(d);
  std::vector<char> truth(d);
  for (const auto& o : outcomes) {
    std::fill(pred.begin(), pred.end(), 0);
    std::fill(truth.begin(), truth.end(), 0);
    for (std::size_t j : o.predicted) {
      if (j >= d) throw InvalidArgumentError("micro_pr: predicted index out of range");
      pred[j] = 1;
    }
    for (std::size_t j : o.truth) {
      if (j >= d) throw InvalidArgumentError("micro_pr: truth index out of range");
      truth[j] = 1;
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (pred[j] && truth[j]) ++c.tp;
      else if (pred[j]) ++c.fp;
      else if (truth[j]) ++c.fn;
      else ++c.tn;
    }
  }
  return rates(c);
}

PrecisionRecall detection_pr(std::span<const TrialOutcome> outcomes) {
  Confusion c;
  for (const auto& o : outcomes) {
    if (o.detected && o.attack_present) ++c.tp;
    else if (o.detected) ++c.fp;
    else if (o.attack_present) ++c.fn;
    else ++c.tn;
  }
  return rates(c);
}

}  // namespace featshift
