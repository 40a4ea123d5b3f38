#include "awqae/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace awqae {

namespace {

void check_qubits(const StateVector& state, const std::vector<int>& qubits) {
	std::uint64_t seen = 0;
	for (int q : qubits) {
		if (q < 0 || q >= state.num_qubits)
			throw ValidationError("qubit index " + std::to_string(q) + " out of range");
		const std::uint64_t bit = 1ull << q;
		if (seen & bit)
			throw ValidationError("qubit index " + std::to_string(q) + " listed twice");
		seen |= bit;
	}
}

}  // namespace

StateVector new_state(int num_qubits) {
	if (num_qubits < 1 || num_qubits > kMaxQubits)
		throw CapacityError("state size " + std::to_string(num_qubits) +
				    " outside supported range [1, " + std::to_string(kMaxQubits) + "]");
	StateVector s;
	s.num_qubits = num_qubits;
	s.amps.assign(std::size_t{1} << num_qubits, ComplexAmplitude{});
	s.amps[0] = 1.0;
	return s;
}

double norm_sq(const StateVector& state) {
	double total = 0.0;
	for (const auto& a : state.amps) total += std::norm(a);
	return total;
}

void apply_unitary(StateVector& state, const Mat& u, const std::vector<int>& targets) {
	check_qubits(state, targets);
	const std::size_t k = targets.size();
	if (k == 0 || k > 63) throw ValidationError("target list empty or too long");
	const std::size_t sub = std::size_t{1} << k;
	if (u.dim != sub)
		throw ValidationError("gate dimension " + std::to_string(u.dim) +
				      " does not match " + std::to_string(k) + " target qubits");
	if (!mat_is_unitary(u, 1e-12)) throw ValidationError("gate matrix is not unitary");

	// offset[x] places subspace index x onto the target qubits
	std::vector<std::uint64_t> offset(sub, 0);
	std::uint64_t tmask = 0;
	for (std::size_t j = 0; j < k; ++j) tmask |= 1ull << targets[j];
	for (std::size_t x = 0; x < sub; ++x) {
		std::uint64_t o = 0;
		for (std::size_t j = 0; j < k; ++j)
			if (x >> j & 1) o |= 1ull << targets[j];
		offset[x] = o;
	}

	std::vector<ComplexAmplitude> buf(sub);
	const std::uint64_t n = state.amps.size();
	for (std::uint64_t base = 0; base < n; ++base) {
		if (base & tmask) continue;
		for (std::size_t r = 0; r < sub; ++r) {
			ComplexAmplitude acc{};
			for (std::size_t c = 0; c < sub; ++c)
				acc += u.at(r, c) * state.amps[base | offset[c]];
			buf[r] = acc;
		}
		for (std::size_t r = 0; r < sub; ++r) state.amps[base | offset[r]] = buf[r];
	}
}

void apply_single(StateVector& state, const Mat& u, int qubit) {
	apply_unitary(state, u, {qubit});
}

void apply_controlled_unitary(StateVector& state, const Mat& u, int control,
			      const std::vector<int>& targets) {
	std::vector<int> all = targets;
	all.push_back(control);
	check_qubits(state, all);  // also rejects control overlapping a target
	const std::size_t k = targets.size();
	const std::size_t sub = std::size_t{1} << k;
	if (u.dim != sub)
		throw ValidationError("gate dimension " + std::to_string(u.dim) +
				      " does not match " + std::to_string(k) + " target qubits");
	// operator powers built by repeated squaring are only kept unitary to
	// 1e-10, so this guard sits at that bound rather than the 1e-12 used
	// for the exact single-qubit constants
	if (!mat_is_unitary(u, 1e-10)) throw ValidationError("gate matrix is not unitary");

	std::vector<std::uint64_t> offset(sub, 0);
	std::uint64_t tmask = 0;
	for (std::size_t j = 0; j < k; ++j) tmask |= 1ull << targets[j];
	for (std::size_t x = 0; x < sub; ++x) {
		std::uint64_t o = 0;
		for (std::size_t j = 0; j < k; ++j)
			if (x >> j & 1) o |= 1ull << targets[j];
		offset[x] = o;
	}

	const std::uint64_t cbit = 1ull << control;
	std::vector<ComplexAmplitude> buf(sub);
	const std::uint64_t n = state.amps.size();
	for (std::uint64_t base = 0; base < n; ++base) {
		if ((base & tmask) || !(base & cbit)) continue;
		for (std::size_t r = 0; r < sub; ++r) {
			ComplexAmplitude acc{};
			for (std::size_t c = 0; c < sub; ++c)
				acc += u.at(r, c) * state.amps[base | offset[c]];
			buf[r] = acc;
		}
		for (std::size_t r = 0; r < sub; ++r) state.amps[base | offset[r]] = buf[r];
	}
}

void apply_controlled_phase(StateVector& state, int control, int target, double angle) {
	check_qubits(state, {control, target});
	const std::uint64_t mask = (1ull << control) | (1ull << target);
	const ComplexAmplitude ph = std::polar(1.0, angle);
	const std::uint64_t n = state.amps.size();
	for (std::uint64_t i = 0; i < n; ++i)
		if ((i & mask) == mask) state.amps[i] *= ph;
}

namespace {

void swap_qubits(StateVector& state, int q1, int q2) {
	const std::uint64_t b1 = 1ull << q1;
	const std::uint64_t b2 = 1ull << q2;
	const std::uint64_t n = state.amps.size();
	for (std::uint64_t i = 0; i < n; ++i) {
		// visit each pair once, from the (q1=1, q2=0) side
		if ((i & b1) && !(i & b2)) std::swap(state.amps[i], state.amps[(i ^ b1) | b2]);
	}
}

}  // namespace

void apply_qft(StateVector& state, const std::vector<int>& reg) {
	check_qubits(state, reg);
	const int m = static_cast<int>(reg.size());
	if (m == 0) throw ValidationError("empty register");
	const Mat h = gate_h();
	const double two_pi = 2.0 * std::numbers::pi;
	for (int j = m - 1; j >= 0; --j) {
		apply_single(state, h, reg[j]);
		for (int i = j - 1; i >= 0; --i)
			apply_controlled_phase(state, reg[i], reg[j],
					       two_pi / static_cast<double>(1ull << (j - i + 1)));
	}
	for (int i = 0; i < m / 2; ++i) swap_qubits(state, reg[i], reg[m - 1 - i]);
}

void apply_iqft(StateVector& state, const std::vector<int>& reg) {
	check_qubits(state, reg);
	const int m = static_cast<int>(reg.size());
	if (m == 0) throw ValidationError("empty register");
	const Mat h = gate_h();
	const double two_pi = 2.0 * std::numbers::pi;
	for (int i = 0; i < m / 2; ++i) swap_qubits(state, reg[i], reg[m - 1 - i]);
	for (int j = 0; j < m; ++j) {
		for (int i = 0; i < j; ++i)
			apply_controlled_phase(state, reg[i], reg[j],
					       -two_pi / static_cast<double>(1ull << (j - i + 1)));
		apply_single(state, h, reg[j]);
	}
}

std::vector<double> marginal_distribution(const StateVector& state,
					  const std::vector<int>& qubits) {
	check_qubits(state, qubits);
	const std::size_t k = qubits.size();
	if (k == 0) throw ValidationError("empty register");
	std::vector<double> out(std::size_t{1} << k, 0.0);
	const std::uint64_t n = state.amps.size();
	for (std::uint64_t i = 0; i < n; ++i) {
		const double w = std::norm(state.amps[i]);
		if (w == 0.0) continue;
		std::uint64_t x = 0;
		for (std::size_t j = 0; j < k; ++j)
			if (i >> qubits[j] & 1) x |= 1ull << j;
		out[x] += w;
	}
	return out;
}

Histogram sample(const std::vector<double>& dist, std::uint64_t shots, Rng& rng) {
	if (dist.empty()) throw ValidationError("empty distribution");
	double total = 0.0;
	for (double p : dist) {
		if (p < 0.0 || !std::isfinite(p)) throw ValidationError("malformed distribution");
		total += p;
	}
	if (std::abs(total - 1.0) > 1e-9) throw ValidationError("distribution does not sum to 1");

	std::vector<double> cdf(dist.size());
	double acc = 0.0;
	for (std::size_t i = 0; i < dist.size(); ++i) {
		acc += dist[i];
		cdf[i] = acc;
	}
	cdf.back() = total;  // guard the top against accumulation drift

	Histogram h;
	for (std::uint64_t s = 0; s < shots; ++s) {
		const double u = rng.uniform() * total;
		const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
		const std::uint64_t outcome =
			static_cast<std::uint64_t>(std::min<std::ptrdiff_t>(
				it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
		++h.counts[outcome];
	}
	h.total_kept = shots;
	h.total_discarded = 0;
	return h;
}

Histogram sample(const std::vector<double>& dist, std::uint64_t shots, std::uint64_t rng_seed) {
	Rng rng(rng_seed);
	return sample(dist, shots, rng);
}

Mat gate_h() {
	Mat m(2);
	const double r = std::numbers::sqrt2 / 2.0;
	m.at(0, 0) = r;
	m.at(0, 1) = r;
	m.at(1, 0) = r;
	m.at(1, 1) = -r;
	return m;
}

Mat gate_x() {
	Mat m(2);
	m.at(0, 1) = 1.0;
	m.at(1, 0) = 1.0;
	return m;
}

}  // namespace awqae
