#pragma once

#include <cstdint>

#include "saddle/random.hpp"
#include "saddle/verify.hpp"

namespace saddle {

struct SuiteOptions {
  std::uint64_t seed = 1;
  /// Added to every closed-form lambda_max before it is compared; a nonzero
  /// value must make the spectral and witness checks fail.
  double lambda_max_perturbation = 0.0;
};

/// Randomized invariant checks per module, one CheckResult each.
VerificationReport linalg_suite(const SuiteOptions& options);
VerificationReport dynamics_suite(const SuiteOptions& options);
VerificationReport spectral_suite(const SuiteOptions& options);
VerificationReport predict_suite(const SuiteOptions& options);

/// All of the above, concatenated.
VerificationReport run_property_suites(const SuiteOptions& options);

/// Random convergent configuration used by the limit checks: zero-sum,
/// general-sum, accelerated or DOGDA, with a step size inside the range
/// covered by the convergence results.
struct LimitCase {
  BilinearGame game;
  Algorithm algo;
  double eta;
  IterateState init;
  std::string label;
};
LimitCase random_limit_case(Rng& rng, int index);

}  // namespace saddle
