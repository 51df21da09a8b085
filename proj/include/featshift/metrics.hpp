#pragma once

#include <cstddef>
#include <span>

#include "featshift/numeric.hpp"

namespace featshift {

struct TrialOutcome {
  IndexList predicted;
  IndexList truth;
  bool detected = false;
  bool attack_present = false;
  double elapsed = 0.0;  // seconds
};

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  bool degenerate = false;  // some ratio was 0/0 and reported as 0
  Confusion counts;
};

/// Precision and recall of already-summed counts; 0/0 is reported as 0.
PrecisionRecall rates(const Confusion& counts);

/// Feature-wise confusion matrices summed over trials and features.
PrecisionRecall micro_pr(std::span<const TrialOutcome> outcomes, std::size_t d);

/// Trial-level stage-1 confusion: positive class is "attack present".
PrecisionRecall detection_pr(std::span<const TrialOutcome> outcomes);

}  // namespace featshift
