#pragma once

#include <cstdint>
#include <vector>

#include "awqae/matrix.hpp"
#include "awqae/rng.hpp"
#include "awqae/types.hpp"

namespace awqae {

// Dense amplitude vector over num_qubits qubits. Qubit j carries bit
// weight 2^j in the basis index; when a register is given as an ordered
// qubit list, position j in the list carries weight 2^j, so the most
// significant bit of the register is the last listed qubit.
struct StateVector {
	int num_qubits = 0;
	std::vector<ComplexAmplitude> amps;
};

// Ordered qubit roles for one estimation block circuit. All indices are
// distinct qubits of one StateVector.
struct RegisterLayout {
	std::vector<int> resolution;
	std::vector<int> counting;
	std::vector<int> target;
	int ancilla = -1;
};

// |0...0> on num_qubits qubits. 1 <= num_qubits <= kMaxQubits.
StateVector new_state(int num_qubits);

// Sum of |amp|^2. Stays within 1e-10 of 1 across any gate sequence here.
double norm_sq(const StateVector& state);

// Applies a dense unitary to an ordered target list (position j of the
// list carries weight 2^j in the gate's index space). Validates that the
// matrix is unitary to 1e-12 and that targets are distinct and in range.
void apply_unitary(StateVector& state, const Mat& u, const std::vector<int>& targets);

// One-qubit convenience wrapper over apply_unitary.
void apply_single(StateVector& state, const Mat& u, int qubit);

// Applies u to targets only where the control qubit is 1.
void apply_controlled_unitary(StateVector& state, const Mat& u, int control,
			      const std::vector<int>& targets);

// diag(1, e^{i angle}) on `target`, applied when `control` is 1. The two
// qubits are interchangeable; kept as a named op because the QFT is built
// from it.
void apply_controlled_phase(StateVector& state, int control, int target, double angle);

// F|y> = 2^{-m/2} sum_t exp(2 pi i y t / 2^m) |t> on the given register,
// and its exact inverse. apply_iqft(apply_qft(s)) returns s to 1e-10.
void apply_qft(StateVector& state, const std::vector<int>& reg);
void apply_iqft(StateVector& state, const std::vector<int>& reg);

// Probability distribution over the listed qubits (position j of the list
// carries weight 2^j in the outcome index), tracing out the rest.
std::vector<double> marginal_distribution(const StateVector& state,
					  const std::vector<int>& qubits);

// Multinomial draw from an explicit distribution (must sum to 1 within
// 1e-9). Same seed, same histogram, on any platform.
Histogram sample(const std::vector<double>& dist, std::uint64_t shots, std::uint64_t rng_seed);
Histogram sample(const std::vector<double>& dist, std::uint64_t shots, Rng& rng);

// Common gate matrices.
Mat gate_h();
Mat gate_x();

}  // namespace awqae
