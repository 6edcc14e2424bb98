#pragma once

// Independent auditing of certificates and numerical dimension probes.
//
// Dimension is measured as the generic rank of the Jacobian of the
// parameter -> (x; y) map of a generator family. The pre-quotient rank counts
// the scaling direction (x, -y); the post-quotient rank removes it.

#include <array>
#include <cstdint>

#include "ambiglab/generators.hpp"

namespace ambiglab {

inline constexpr double kDefaultVerifyTol = 1e-10;
inline constexpr double kDefaultFdStep = 1e-5;
inline constexpr double kDefaultSvdTol = 1e-6;
inline constexpr double kNoncollinearTol = 1e-6;

struct VerificationReport {
  double conv_residual = 0.0;
  std::array<bool, 4> membership{};  // x1 ∈ K1, y1 ∈ K2, x2 ∈ K1, y2 ∈ K2
  bool noncollinear = false;
  bool pathology_free = false;
  bool equivalent_pairs = false;
  bool pass = false;
};

VerificationReport verify_instance(const AdversarialInstance& inst, double tol = kDefaultVerifyTol);

/// True iff |x(1)|, |x(m)|, |y(1)|, |y(n)| are all strictly greater than tol.
bool check_pathology(const RealVec& x, const RealVec& y, double tol);

/// (x2, y2) = (α x1, y1 / α) for a common α != 0, up to tol (relative).
bool equivalent_pairs(const SignalPair& p1, const SignalPair& p2, double tol = kDefaultVerifyTol);

/// Central-difference Jacobian of family.map at point, (m+n) x parameter_count.
RealMat jacobian(const GeneratorFamily& family, const RealVec& point, double fd_step = kDefaultFdStep);

/// Number of singular values of the Jacobian above svd_tol * σ_max. Throws
/// ill-conditioned-point near excluded angle sets.
int jacobian_rank(const GeneratorFamily& family, const RealVec& point, double fd_step = kDefaultFdStep,
                  double svd_tol = kDefaultSvdTol);

struct DimProbeOptions {
  double fd_step = kDefaultFdStep;
  double svd_tol = kDefaultSvdTol;
  /// Claimed dimension is a lower bound: agreement is measured >= claimed.
  bool lower_bound = false;
  int threads = 1;
};

struct DimProbeResult {
  int claimed = 0;
  int measured_pre_quotient = 0;
  int measured_post_quotient = 0;
  int samples = 0;
  bool agreement = false;
  int conclusive = 0;    // trials with a stable rank
  int inconclusive = 0;  // unstable rank or ill-conditioned point
  int agreeing = 0;      // conclusive trials whose post-quotient rank matches the claim
};

/// Per-trial outcome of the probe; rank < 0 marks an inconclusive trial.
struct TrialRank {
  int pre = -1;
  int post = -1;
};

TrialRank probe_trial(const GeneratorFamily& family, std::uint64_t seed, const DimProbeOptions& opts = {});

/// Majority vote over `trials` seeded admissible points. Throws
/// invalid-argument for trials < 1 and inconclusive when more than half the
/// trials are inconclusive or the vote is tied.
DimProbeResult estimate_unidentifiable_dim(const GeneratorFamily& family, int trials, std::uint64_t seed,
                                           const DimProbeOptions& opts = {});

}  // namespace ambiglab
