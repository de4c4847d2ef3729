#pragma once

#include <span>
#include <vector>

#include "relaysim/channel.hpp"
#include "relaysim/constellation.hpp"

namespace relaysim {

struct DetectionResult {
  int index = 0;      // winning candidate (also its bit label value)
  double metric = 0;  // squared distance of the winner
};

/// Exhaustive-search ML detector. Caches gain*H*x for every candidate so the
/// per-use search is a plain nearest-neighbour scan; ties go to the lowest
/// candidate index.
class MlDetector {
 public:
  MlDetector(const ChannelMatrix& estimated_h, double gain,
             const CandidateSet& candidates);

  DetectionResult detect(std::span<const cdouble> received) const;

  int candidate_count() const { return count_; }

 private:
  int m_;
  int count_;
  std::vector<cdouble> images_;  // count * m
};

/// One-shot form of the ML rule:
/// argmin over candidates x' of || received - gain * H * x' ||^2.
DetectionResult ml_detect(std::span<const cdouble> received,
                          const ChannelMatrix& estimated_h, double gain,
                          const CandidateSet& candidates);

}  // namespace relaysim
