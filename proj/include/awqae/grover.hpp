#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "awqae/matrix.hpp"
#include "awqae/types.hpp"

namespace awqae {

enum class ProblemForm { Rotation, Counting };

// Amplitude estimation instance. Two constructions are supported:
//  - rotation form: one target qubit, A|0> = sqrt(1-p)|0> + sqrt(p)|1>,
//    good subspace is |1>. Any p in [0, 1].
//  - counting form: n_target qubits, A = H tensor n_target, good subspace
//    spanned by the marked basis states, so p is exactly M / 2^n_target.
struct AmplitudeProblem {
	ProblemForm form = ProblemForm::Rotation;
	double p = 0.0;
	int n_target = 1;
	std::vector<std::uint64_t> marked;  // counting form only

	static AmplitudeProblem rotation(double p);
	static AmplitudeProblem counting(int n_target, std::vector<std::uint64_t> marked);

	double success_probability() const { return p; }
};

// Grover iterate Q = -A S0 Adag Schi and its cached powers. On the 2D
// subspace spanned by the good and bad components of A|0>, Q acts as a
// rotation with eigenvalues e^{+i theta} and e^{-i theta}. phase_offset
// delta multiplies the matrix by e^{i 2 pi delta}, shifting both
// eigenphases by delta; theta/phi fields always describe the unshifted
// operator.
struct GroverOperator {
	Mat matrix;
	int n_target = 1;
	double theta = 0.0;      // 2 arcsin(sqrt(p)), in [0, pi]
	double phi_plus = 0.0;   // theta / 2 pi, in [0, 0.5]
	double phi_minus = 0.0;  // (1 - phi_plus) mod 1
	double phase_offset = 0.0;
	std::map<std::uint64_t, Mat> cached_powers;
};

// State preparation unitary A on the target register.
Mat build_state_prep(const AmplitudeProblem& problem);

GroverOperator build_grover(const AmplitudeProblem& problem, double phase_offset = 0.0);

// Q^exponent for a power-of-two exponent, by repeated squaring with
// caching. Throws ContractError on any other exponent.
const Mat& grover_power(GroverOperator& q, std::uint64_t exponent);

// Read-only cache lookup; requires the power to be prepopulated. This is
// the only accessor the block workers use, so a shared GroverOperator is
// safe to read concurrently once prepopulate_powers has run.
const Mat& cached_power(const GroverOperator& q, std::uint64_t exponent);

// Fills the cache with Q^1, Q^2, Q^4, ... up to max_exponent inclusive.
void prepopulate_powers(GroverOperator& q, std::uint64_t max_exponent);

// (phi_plus, phi_minus) of the unshifted operator, without building it.
// phi_plus = arcsin(sqrt(p)) / pi, phi_minus = (1 - phi_plus) mod 1.
std::pair<double, double> eigenphases(const AmplitudeProblem& problem);

}  // namespace awqae
