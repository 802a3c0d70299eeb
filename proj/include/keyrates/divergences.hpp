#pragma once

#include <vector>

#include "keyrates/tensor.hpp"

namespace kr {

// All entropic quantities are in bits (logarithms base 2).

// Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2.
double fidelity(const Mat& rho, const Mat& sigma);
// (1/2) ||rho - sigma||_1.
double trace_distance(const Mat& rho, const Mat& sigma);
// Relative entropy Tr[rho (log2 rho - log2 sigma)]; +inf when supp(rho) is
// not contained in supp(sigma) (kernel mass above tol::reconstruct).
double relative_entropy(const Mat& rho, const Mat& sigma);
// Max-relative entropy log2 of the largest eigenvalue of
// sigma^{-1/2} rho sigma^{-1/2} (pseudo-inverse); +inf on support violation.
double max_relative_entropy(const Mat& rho, const Mat& sigma);
// Sandwiched Renyi divergence of order alpha > 0, alpha != 1. For alpha > 1,
// +inf on support violation; alpha = 1/2 gives -log2 F.
double sandwiched_renyi(const Mat& rho, const Mat& sigma, double alpha);

// Shannon helpers.
double binary_entropy(double p);
double von_neumann_entropy(const Mat& rho);

// Hypothesis-testing relative entropy
//   D_h^eps(rho || sigma) = -log2 min{ Tr[L sigma] : 0 <= L <= I, Tr[L rho] >= 1 - eps }.
// Solved by the generalized Neyman-Pearson construction: bisection over the
// likelihood threshold mu with L(mu) = P_+(rho - mu sigma) + x P_0(rho - mu sigma),
// the boundary weight x chosen to meet Tr[L rho] = 1 - eps exactly. Every call
// returns a feasibility-checked primal test operator and a matching dual
// certificate; the certified gap must close to tol::duality_bits.
struct HypTestResult {
  double value_bits = 0;   // -log2 of the primal optimum (reported value)
  Mat test_operator;       // optimal L
  double primal = 0;       // Tr[L sigma]
  double primal_bits = 0;  // -log2 primal (achievable, hence a floor on the value)
  double dual_bits = 0;    // certified ceiling on the value from weak duality
  double mu = 0;           // dual multiplier of the certificate
  double gap_bits = 0;     // |dual_bits - primal_bits|, must close to tol::duality_bits
};
HypTestResult hypothesis_testing(const Mat& rho, const Mat& sigma, double eps);

// Exact optimum for commuting (diagonal) pairs by greedy knapsack over
// eigenvalue ratios: independent oracle for the semidefinite solver.
double hypothesis_testing_diagonal(const RVec& rho, const RVec& sigma, double eps);

// Upper bounds on D_h^eps from weaker data. Fidelity version, valid for
// eps in [0, sqrt(F)):
//   D_h^eps <= -2 log2( sqrt(F) - sqrt(eps) sqrt(1 - (sqrt F - sqrt eps)^2) )
// (+inf if the argument is not positive); trace-distance version, valid for
// eps in [0, 1 - T): D_h^eps <= -log2(1 - T - eps).
double hyp_bound_from_fidelity(double F, double eps);
double hyp_bound_from_trace_distance(double T, double eps);

// Conditional mutual information I(Y : B | Z) of a state whose Y and Z slot
// groups are classical registers (throws invalid_input if their off-diagonal
// leakage exceeds tol::classical).
double conditional_mutual_information(const DensityOperator& rho,
                                      const std::vector<int>& slots_Y,
                                      const std::vector<int>& slots_B,
                                      const std::vector<int>& slots_Z);

}  // namespace kr
