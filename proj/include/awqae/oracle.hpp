#pragma once

#include <cstdint>
#include <vector>

#include "awqae/grover.hpp"
#include "awqae/types.hpp"

namespace awqae {

// Closed-form outcome law of textbook phase estimation with m counting
// qubits reading eigenphase phi:
//   P(t) = sin^2(2^m pi d_t) / (4^m sin^2(pi d_t)),  d_t = phi - t/2^m,
// with P(t) = 1 when phi lies on the grid point t. Periodic in phi with
// period 1 and exact on grid phases. m <= 12.
std::vector<double> qpe_distribution(double phi, int m);

// Probability that the top resolution bit reads a when a resolution
// register of m_start qubits estimates phi: the total qpe mass on
// outcomes whose most significant bit equals a.
double resolution_weight(double phi, int m_start, int a);

// Joint pre-measurement law of one estimation block: ancilla bit a
// (copied from the resolution MSB) and counting outcome t. Both
// eigenphase branches of A|0> contribute with weight 1/2:
//   joint(a, t) = sum_b 1/2 R_a(phi_b) P_m(t; frac(2^k phi_b)).
// probs is flat, indexed a * 2^m + t, matching the circuit readout order
// (counting register then ancilla).
struct BlockDistribution {
	int m = 0;
	std::vector<double> probs;

	double at(int a, std::uint64_t t) const {
		return probs[(static_cast<std::uint64_t>(a) << m) + t];
	}
};

// k is the power offset (counting qubit j controls Q^(2^(j+k))), m >= 2
// the block width, m_start the resolution width.
BlockDistribution block_joint_distribution(const AmplitudeProblem& problem, int k, int m,
					   int m_start);

namespace detail {

// Same law as qpe_distribution without the public width cap. The full
// QAE reference distribution needs widths up to 20.
std::vector<double> qpe_kernel(double phi, int m);

// Joint law from explicit branch phases; the perturbed-operator path
// shifts both phases before calling this.
BlockDistribution block_joint_from_phases(double phi_plus, double phi_minus, int k, int m,
					  int m_start);

// x - floor(x), in [0, 1).
double frac(double x);

}  // namespace detail

}  // namespace awqae
