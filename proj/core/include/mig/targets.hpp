#pragma once

#include <memory>
#include <string>

#include "mig/mig_distribution.hpp"
#include "mig/sampler.hpp"

namespace mig {

// Data-generating distributions of the simulation study, supported on the
// half-space with beta = 1_d. Truncated kinds estimate their normalizing
// constant by Monte Carlo (1e6 draws from the untruncated law) and sample
// by rejection.
class TargetDistribution {
 public:
  enum class Kind {
    trunc_t,          // F1
    mixture,          // F2
    trunc_skew_gauss, // F3
    mig,              // F4
  };

  static TargetDistribution build(Kind kind, int d, RngStream& rng);

  Kind kind() const { return kind_; }
  const HalfSpace& halfspace() const { return halfspace_; }
  Eigen::Index dim() const { return halfspace_.dim(); }

  /// Normalized log density; -inf off the half-space.
  double log_density(const Vector& x) const;
  Vector sample(RngStream& rng) const;
  SampleBatch sample_batch(Eigen::Index n, RngStream& rng) const;

  ~TargetDistribution();
  TargetDistribution(TargetDistribution&&) noexcept;
  TargetDistribution& operator=(TargetDistribution&&) noexcept;

 private:
  struct Impl;
  TargetDistribution(Kind kind, HalfSpace hs, std::unique_ptr<Impl> impl);

  Kind kind_;
  HalfSpace halfspace_;
  std::unique_ptr<Impl> impl_;
};

TargetDistribution::Kind target_kind_from_name(const std::string& name);
const char* to_string(TargetDistribution::Kind kind);

}  // namespace mig
