#pragma once

#include "keyrates/divergences.hpp"
#include "keyrates/states.hpp"

namespace kr {

// Dichotomic privacy test for a private-state bundle: the projector
// Pi = U (Phi_GHZ (x) I_shield) U^dag built from the bundle's twisting
// unitary. A state passes with probability Tr[Pi rho].
struct PrivacyTest {
  HermitianOperator projector;
  int key_dim = 0;
  std::vector<int> key_slots;
  std::vector<int> shield_slots;
};

PrivacyTest privacy_test(const PrivateStateBundle& bundle);

// Tr[Pi rho].
double test_success(const PrivacyTest& test, const DensityOperator& rho);

// One-shot distillable-key upper bound D_h^eps(rho || sigma) against a
// biseparable attack candidate sigma. The library does not certify
// biseparability of arbitrary sigma; pass a constructed candidate
// (BisepCandidate::state) or a user-attested operator.
HypTestResult one_shot_key_upper_bound(const DensityOperator& rho, const DensityOperator& sigma,
                                       double eps);

// True iff F(rho, gamma) >= 1 - eps.
bool epsilon_approx_check(const DensityOperator& rho, const DensityOperator& gamma, double eps);

}  // namespace kr
