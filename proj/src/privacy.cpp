#include "keyrates/privacy.hpp"

namespace kr {

PrivacyTest privacy_test(const PrivateStateBundle& bundle) {
  long kd = 1;
  for (size_t s = 0; s < bundle.key_slots.size(); ++s) kd *= bundle.key_dim;
  long sd = bundle.gamma.layout.dim() / kd;
  require(static_cast<long>(bundle.twisting.rows()) == kd * sd,
          "twisting unitary does not match the bundle layout");

  Mat ghz = density(ghz_state(bundle.parties, bundle.key_dim)).mat;
  Mat pi = bundle.twisting * kron(ghz, Mat::Identity(sd, sd)) * bundle.twisting.adjoint();
  PrivacyTest t;
  t.projector = HermitianOperator{std::move(pi), bundle.gamma.layout};
  t.key_dim = bundle.key_dim;
  t.key_slots = bundle.key_slots;
  t.shield_slots = bundle.shield_slots;
  return t;
}

double test_success(const PrivacyTest& test, const DensityOperator& rho) {
  require(rho.layout.dims == test.projector.layout.dims,
          "state layout does not match the privacy test");
  return (test.projector.mat * rho.mat).trace().real();
}

HypTestResult one_shot_key_upper_bound(const DensityOperator& rho, const DensityOperator& sigma,
                                       double eps) {
  require(rho.layout.dims == sigma.layout.dims,
          "state and attack candidate must share one layout");
  return hypothesis_testing(rho.mat, sigma.mat, eps);
}

bool epsilon_approx_check(const DensityOperator& rho, const DensityOperator& gamma, double eps) {
  require(eps >= 0.0 && eps <= 1.0, "epsilon must lie in [0,1]");
  return fidelity(rho.mat, gamma.mat) >= 1.0 - eps;
}

}  // namespace kr
