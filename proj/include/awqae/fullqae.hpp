#pragma once

#include <cstdint>
#include <vector>

#include "awqae/engine.hpp"
#include "awqae/grover.hpp"

namespace awqae {

// Single-circuit phase estimation baseline: one counting register of m
// qubits estimating Q directly, no windowing, no post-selection.
struct FullQaeResult {
	std::uint64_t y = 0;
	double phi = 0.0;      // y / 2^m
	double p_tilde = 0.0;  // sin^2(pi phi)
	double a_tilde = 0.0;
	std::vector<double> distribution;  // simulated counting-register law
};

// Simulates the baseline circuit on the statevector backend. Exact mode
// takes the argmax of the simulated distribution (near-ties within 1e-12
// go to the smaller outcome, which canonically picks the lower of the two
// mirrored eigenphase peaks); sampled mode draws config.n_shots shots and
// takes the histogram mode. m <= 12.
FullQaeResult run_full_qae(const AmplitudeProblem& problem, int m, const BlockConfig& config);

// Closed-form reference law for the same circuit: the equal mixture of
// the two eigenphase branches, (P_m(t; phi+) + P_m(t; phi-)) / 2. Not
// simulated, so m may go up to 20.
std::vector<double> full_qae_distribution(const AmplitudeProblem& problem, int m);

}  // namespace awqae
