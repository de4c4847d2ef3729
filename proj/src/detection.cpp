#include "relaysim/detection.hpp"

#include <limits>
#include <stdexcept>

namespace relaysim {

MlDetector::MlDetector(const ChannelMatrix& estimated_h, double gain,
                       const CandidateSet& candidates)
    : m_(candidates.m), count_(candidates.count) {
  if (estimated_h.m != m_) throw std::invalid_argument("channel/candidate size mismatch");
  if (gain <= 0.0) throw std::invalid_argument("gain must be positive");
  images_.resize(static_cast<std::size_t>(count_) * m_);
  std::vector<cdouble> tmp(m_);
  for (int k = 0; k < count_; ++k) {
    estimated_h.mul(candidates.vec(k), tmp);
    for (int r = 0; r < m_; ++r)
      images_[static_cast<std::size_t>(k) * m_ + r] = gain * tmp[r];
  }
}

DetectionResult MlDetector::detect(std::span<const cdouble> received) const {
  int best = 0;
  double best_metric = std::numeric_limits<double>::infinity();
  for (int k = 0; k < count_; ++k) {
    const cdouble* img = images_.data() + static_cast<std::size_t>(k) * m_;
    double d = 0.0;
    for (int r = 0; r < m_; ++r) d += std::norm(received[r] - img[r]);
    if (d < best_metric) {
      best_metric = d;
      best = k;
    }
  }
  return {best, best_metric};
}

DetectionResult ml_detect(std::span<const cdouble> received,
                          const ChannelMatrix& estimated_h, double gain,
                          const CandidateSet& candidates) {
  return MlDetector(estimated_h, gain, candidates).detect(received);
}

}  // namespace relaysim
