#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "awqae/rng.hpp"
#include "awqae/statevector.hpp"

using namespace awqae;

namespace {

constexpr double kPi = std::numbers::pi;

// independent reference: plain O(4^m) discrete Fourier transform with the
// same convention the simulator documents, F|y> has phase +2 pi y t / 2^m
std::vector<ComplexAmplitude> dft_reference(const std::vector<ComplexAmplitude>& in) {
	const std::size_t n = in.size();
	std::vector<ComplexAmplitude> out(n);
	const double scale = 1.0 / std::sqrt(static_cast<double>(n));
	for (std::size_t t = 0; t < n; ++t) {
		ComplexAmplitude acc{};
		for (std::size_t y = 0; y < n; ++y)
			acc += std::polar(1.0, 2.0 * kPi * static_cast<double>(y) *
						       static_cast<double>(t) /
						       static_cast<double>(n)) *
			       in[y];
		out[t] = acc * scale;
	}
	return out;
}

StateVector random_state(int num_qubits, std::uint64_t seed) {
	Rng rng(seed);
	StateVector s = new_state(num_qubits);
	double norm = 0.0;
	for (auto& a : s.amps) {
		a = ComplexAmplitude(rng.uniform() - 0.5, rng.uniform() - 0.5);
		norm += std::norm(a);
	}
	norm = std::sqrt(norm);
	for (auto& a : s.amps) a /= norm;
	return s;
}

double max_amp_diff(const std::vector<ComplexAmplitude>& x,
		    const std::vector<ComplexAmplitude>& y) {
	double worst = 0.0;
	for (std::size_t i = 0; i < x.size(); ++i)
		worst = std::max(worst, std::abs(x[i] - y[i]));
	return worst;
}

}  // namespace

TEST_CASE("fresh states start in the all-zeros basis state") {
	const StateVector s = new_state(1);
	CHECK(s.amps.size() == 2);
	CHECK(s.amps[0] == ComplexAmplitude(1.0, 0.0));
	CHECK(s.amps[1] == ComplexAmplitude(0.0, 0.0));

	const StateVector big = new_state(20);
	CHECK(big.amps.size() == (1u << 20));
	CHECK(norm_sq(big) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("state sizes outside the supported range are rejected") {
	CHECK_THROWS_AS(new_state(0), CapacityError);
	CHECK_THROWS_AS(new_state(-3), CapacityError);
	CHECK_THROWS_AS(new_state(kMaxQubits + 1), CapacityError);
}

TEST_CASE("single-qubit gates act on the addressed qubit only") {
	StateVector s = new_state(2);
	apply_single(s, gate_h(), 0);
	const double r = std::numbers::sqrt2 / 2.0;
	CHECK(std::abs(s.amps[0] - ComplexAmplitude(r, 0)) < 1e-15);
	CHECK(std::abs(s.amps[1] - ComplexAmplitude(r, 0)) < 1e-15);
	CHECK(std::abs(s.amps[2]) < 1e-15);

	apply_single(s, gate_x(), 1);
	CHECK(std::abs(s.amps[2] - ComplexAmplitude(r, 0)) < 1e-15);
	CHECK(std::abs(s.amps[3] - ComplexAmplitude(r, 0)) < 1e-15);
	CHECK(std::abs(s.amps[0]) < 1e-15);
}

TEST_CASE("H twice is the identity") {
	StateVector s = random_state(3, 11);
	const std::vector<ComplexAmplitude> before = s.amps;
	apply_single(s, gate_h(), 1);
	apply_single(s, gate_h(), 1);
	CHECK(max_amp_diff(s.amps, before) < 1e-14);
}

TEST_CASE("non-unitary gates are rejected") {
	Mat bad(2);
	bad.at(0, 0) = 1.0;
	bad.at(1, 1) = 0.5;
	StateVector s = new_state(1);
	CHECK_THROWS_AS(apply_single(s, bad, 0), ValidationError);
}

TEST_CASE("controlled gates validate dimensions and overlap") {
	StateVector s = new_state(3);
	Mat u(4);
	u = mat_identity(4);
	CHECK_THROWS_AS(apply_controlled_unitary(s, u, 0, {1}), ValidationError);
	CHECK_THROWS_AS(apply_controlled_unitary(s, mat_identity(2), 1, {1}), ValidationError);
	CHECK_THROWS_AS(apply_controlled_unitary(s, mat_identity(2), 0, {5}), ValidationError);
}

TEST_CASE("controlled phase gate kicks the phase back onto the control branch") {
	// control in superposition, target |0>; a controlled e^{i alpha} I
	// marks only the control=1 amplitude
	const double alpha = 0.7;
	Mat phase_gate = mat_identity(2);
	phase_gate.at(0, 0) = std::polar(1.0, alpha);
	phase_gate.at(1, 1) = std::polar(1.0, alpha);

	StateVector s = new_state(2);
	apply_single(s, gate_h(), 0);
	apply_controlled_unitary(s, phase_gate, 0, {1});
	const double r = std::numbers::sqrt2 / 2.0;
	CHECK(std::abs(s.amps[0] - ComplexAmplitude(r, 0.0)) < 1e-15);
	CHECK(std::abs(s.amps[1] - r * std::polar(1.0, alpha)) < 1e-15);
}

TEST_CASE("a controlled gate with the control set acts unconditionally") {
	StateVector a = new_state(3);
	apply_single(a, gate_x(), 2);  // control qubit to |1>
	apply_single(a, gate_h(), 0);
	StateVector b = a;

	Mat u(4);
	// two-qubit unitary: swap tensor phase
	u.at(0, 0) = 1.0;
	u.at(1, 2) = 1.0;
	u.at(2, 1) = 1.0;
	u.at(3, 3) = std::polar(1.0, 0.3);
	apply_controlled_unitary(a, u, 2, {0, 1});
	apply_unitary(b, u, {0, 1});
	CHECK(max_amp_diff(a.amps, b.amps) < 1e-14);
}

TEST_CASE("the transform matches a direct discrete Fourier transform") {
	for (int m = 1; m <= 6; ++m) {
		StateVector s = random_state(m, 100 + static_cast<std::uint64_t>(m));
		const std::vector<ComplexAmplitude> expected = dft_reference(s.amps);
		std::vector<int> reg;
		for (int i = 0; i < m; ++i) reg.push_back(i);
		apply_qft(s, reg);
		CHECK(max_amp_diff(s.amps, expected) < 1e-12);
	}
}

TEST_CASE("the transform on a sub-register acts fiberwise") {
	StateVector s = random_state(4, 42);
	StateVector expected = s;
	// reference: DFT each fiber over qubits {1, 3} with the outside bits
	// (0, 2) fixed
	for (int b0 = 0; b0 < 2; ++b0) {
		for (int b2 = 0; b2 < 2; ++b2) {
			const std::uint64_t base = static_cast<std::uint64_t>(b0) |
						   (static_cast<std::uint64_t>(b2) << 2);
			std::vector<ComplexAmplitude> fiber(4);
			for (int x = 0; x < 4; ++x) {
				const std::uint64_t idx = base |
							  (static_cast<std::uint64_t>(x & 1) << 1) |
							  (static_cast<std::uint64_t>(x >> 1) << 3);
				fiber[static_cast<std::size_t>(x)] = s.amps[idx];
			}
			const std::vector<ComplexAmplitude> out = dft_reference(fiber);
			for (int x = 0; x < 4; ++x) {
				const std::uint64_t idx = base |
							  (static_cast<std::uint64_t>(x & 1) << 1) |
							  (static_cast<std::uint64_t>(x >> 1) << 3);
				expected.amps[idx] = out[static_cast<std::size_t>(x)];
			}
		}
	}
	apply_qft(s, {1, 3});
	CHECK(max_amp_diff(s.amps, expected.amps) < 1e-12);
}

TEST_CASE("inverse transform undoes the transform to 1e-10") {
	for (int m = 2; m <= 10; m += 2) {
		StateVector s = random_state(m, 7 + static_cast<std::uint64_t>(m));
		const std::vector<ComplexAmplitude> before = s.amps;
		std::vector<int> reg;
		for (int i = 0; i < m; ++i) reg.push_back(i);
		apply_qft(s, reg);
		apply_iqft(s, reg);
		CHECK(max_amp_diff(s.amps, before) < 1e-10);
		CHECK(std::abs(norm_sq(s) - 1.0) < 1e-10);
	}
}

TEST_CASE("inverse transform maps an exact-grid phase ramp to its index") {
	// amplitudes e^{2 pi i y 3/8} / sqrt(8) must collapse onto |3>
	const int m = 3;
	StateVector s = new_state(m);
	for (std::uint64_t y = 0; y < 8; ++y)
		s.amps[y] = std::polar(1.0 / std::sqrt(8.0),
				       2.0 * kPi * static_cast<double>(y) * 3.0 / 8.0);
	apply_iqft(s, {0, 1, 2});
	CHECK(std::abs(std::norm(s.amps[3]) - 1.0) < 1e-10);
}

TEST_CASE("the single-qubit transform is a Hadamard") {
	StateVector a = random_state(1, 5);
	StateVector b = a;
	apply_iqft(a, {0});
	apply_single(b, gate_h(), 0);
	CHECK(max_amp_diff(a.amps, b.amps) < 1e-13);
}

TEST_CASE("marginals trace out unlisted qubits") {
	// Bell pair on qubits 0, 1
	StateVector s = new_state(2);
	apply_single(s, gate_h(), 0);
	apply_controlled_unitary(s, gate_x(), 0, {1});
	const std::vector<double> one = marginal_distribution(s, {0});
	CHECK(one[0] == doctest::Approx(0.5).epsilon(1e-12));
	CHECK(one[1] == doctest::Approx(0.5).epsilon(1e-12));

	const std::vector<double> both = marginal_distribution(s, {0, 1});
	CHECK(both[0] == doctest::Approx(0.5).epsilon(1e-12));
	CHECK(both[3] == doctest::Approx(0.5).epsilon(1e-12));
	CHECK(both[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("the marginal over all qubits is the squared amplitudes") {
	StateVector s = random_state(4, 99);
	std::vector<int> all = {0, 1, 2, 3};
	const std::vector<double> dist = marginal_distribution(s, all);
	double total = 0.0;
	for (std::size_t i = 0; i < dist.size(); ++i) {
		CHECK(dist[i] == doctest::Approx(std::norm(s.amps[i])).epsilon(1e-12));
		total += dist[i];
	}
	CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampling a deterministic distribution gives one outcome") {
	const Histogram h = sample({1.0, 0.0}, 100, 7);
	CHECK(h.counts.size() == 1);
	CHECK(h.counts.at(0) == 100);
	CHECK(h.total_kept == 100);
	CHECK(h.total_discarded == 0);
}

TEST_CASE("sampling a fair coin stays within five sigma") {
	const std::uint64_t shots = 100000;
	const Histogram h = sample({0.5, 0.5}, shots, 12345);
	const double sigma = std::sqrt(static_cast<double>(shots) * 0.25);
	const double n0 = static_cast<double>(h.counts.at(0));
	CHECK(std::abs(n0 - 50000.0) <= 5.0 * sigma);
	CHECK(h.counts.at(0) + h.counts.at(1) == shots);
}

TEST_CASE("sampling is deterministic per seed") {
	const std::vector<double> dist = {0.1, 0.2, 0.3, 0.4};
	const Histogram a = sample(dist, 5000, 77);
	const Histogram b = sample(dist, 5000, 77);
	const Histogram c = sample(dist, 5000, 78);
	CHECK(a.counts == b.counts);
	CHECK(a.counts != c.counts);
}

TEST_CASE("malformed distributions are rejected") {
	CHECK_THROWS_AS(sample({0.5, 0.4}, 10, 1), ValidationError);
	CHECK_THROWS_AS(sample({0.5, -0.5, 1.0}, 10, 1), ValidationError);
	CHECK_THROWS_AS(sample({}, 10, 1), ValidationError);
}

TEST_CASE("norm is preserved across random circuits") {
	Rng rng(2024);
	StateVector s = random_state(5, 31);
	for (int step = 0; step < 200; ++step) {
		const int q = static_cast<int>(rng.below(5));
		switch (rng.below(4)) {
		case 0:
			apply_single(s, gate_h(), q);
			break;
		case 1:
			apply_single(s, gate_x(), q);
			break;
		case 2: {
			const int c = static_cast<int>(rng.below(5));
			if (c != q) apply_controlled_unitary(s, gate_x(), c, {q});
			break;
		}
		default: {
			const int c = static_cast<int>(rng.below(5));
			if (c != q) apply_controlled_phase(s, c, q, rng.uniform() * 2.0 * kPi);
			break;
		}
		}
	}
	CHECK(std::abs(norm_sq(s) - 1.0) < 1e-10);
}
