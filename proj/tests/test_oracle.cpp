#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "awqae/engine.hpp"
#include "awqae/oracle.hpp"
#include "awqae/rng.hpp"
#include "awqae/statevector.hpp"

using namespace awqae;

namespace {

constexpr double kPi = std::numbers::pi;

// independent reference: the outcome law of phase estimation computed by
// brute force from the amplitude sum, P(t) = |2^-m sum_y e^{2 pi i y phi}
// e^{-2 pi i y t / 2^m}|^2
std::vector<double> qpe_bruteforce(double phi, int m) {
	const std::uint64_t n = 1ull << m;
	std::vector<double> out(n);
	for (std::uint64_t t = 0; t < n; ++t) {
		std::complex<double> acc{};
		for (std::uint64_t y = 0; y < n; ++y)
			acc += std::polar(1.0, 2.0 * kPi * static_cast<double>(y) *
						       (phi - static_cast<double>(t) /
								      static_cast<double>(n)));
		out[t] = std::norm(acc) / static_cast<double>(n * n);
	}
	return out;
}

}  // namespace

TEST_CASE("a grid phase is read exactly") {
	const std::vector<double> dist = qpe_distribution(0.25, 2);
	CHECK(dist[0] == 0.0);
	CHECK(dist[1] == 1.0);
	CHECK(dist[2] == 0.0);
	CHECK(dist[3] == 0.0);
}

TEST_CASE("a mid-grid phase splits between its neighbours") {
	const std::vector<double> dist = qpe_distribution(1.0 / 8.0, 2);
	CHECK(dist[0] == doctest::Approx(0.4268).epsilon(1e-3));
	CHECK(dist[1] == doctest::Approx(0.4268).epsilon(1e-3));
	CHECK(dist[2] == doctest::Approx(0.0732).epsilon(1e-3));
	CHECK(dist[3] == doctest::Approx(0.0732).epsilon(1e-3));
	// exact tie between the two neighbours of the half-grid point
	CHECK(dist[0] == dist[1]);
	CHECK(dist[2] == dist[3]);
}

TEST_CASE("the closed form matches the brute-force amplitude sum") {
	Rng rng(17);
	for (int trial = 0; trial < 40; ++trial) {
		const double phi = rng.uniform();
		const int m = 1 + static_cast<int>(rng.below(7));
		const std::vector<double> fast = qpe_distribution(phi, m);
		const std::vector<double> slow = qpe_bruteforce(phi, m);
		for (std::size_t t = 0; t < fast.size(); ++t)
			CHECK(fast[t] == doctest::Approx(slow[t]).epsilon(1e-11));
	}
}

TEST_CASE("the law is complete for every width") {
	Rng rng(23);
	for (int m = 1; m <= 12; ++m) {
		const double phi = rng.uniform();
		const std::vector<double> dist = qpe_distribution(phi, m);
		double total = 0.0;
		for (double v : dist) total += v;
		CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
	}
}

TEST_CASE("the law is periodic in the phase") {
	// dyadic phase keeps phi + 1 exact, so the laws agree bitwise
	const double phi = 0.3125;
	const std::vector<double> a = qpe_distribution(phi, 4);
	const std::vector<double> b = qpe_distribution(phi + 1.0, 4);
	CHECK(a == b);
}

TEST_CASE("reflecting the phase reflects the law") {
	const int m = 4;
	const std::uint64_t n = 1ull << m;
	const double phi = 437.0 / 4096.0;
	const std::vector<double> fwd = qpe_distribution(phi, m);
	const std::vector<double> rev = qpe_distribution(1.0 - phi, m);
	for (std::uint64_t t = 0; t < n; ++t)
		CHECK(fwd[t] == doctest::Approx(rev[(n - t) % n]).epsilon(1e-11));
}

TEST_CASE("width caps are enforced") {
	CHECK_THROWS_AS(qpe_distribution(0.1, 13), ValidationError);
	CHECK_THROWS_AS(qpe_distribution(0.1, 0), ValidationError);
}

TEST_CASE("resolution weights are a partition of unity") {
	Rng rng(31);
	for (int trial = 0; trial < 20; ++trial) {
		const double phi = rng.uniform();
		const int ms = 2 + static_cast<int>(rng.below(4));
		const double w0 = resolution_weight(phi, ms, 0);
		const double w1 = resolution_weight(phi, ms, 1);
		CHECK(w0 + w1 == doctest::Approx(1.0).epsilon(1e-12));
	}
	// a low grid phase reads entirely into the low half
	CHECK(resolution_weight(0.25, 2, 0) == 1.0);
	CHECK(resolution_weight(0.25, 2, 1) == 0.0);
}

TEST_CASE("a balanced instance concentrates on two joint outcomes") {
	const BlockDistribution law =
		block_joint_distribution(AmplitudeProblem::rotation(0.5), 0, 2, 2);
	CHECK(law.at(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
	CHECK(law.at(1, 3) == doctest::Approx(0.5).epsilon(1e-12));
	double rest = 0.0;
	for (std::size_t i = 0; i < law.probs.size(); ++i)
		if (i != 1 && i != 7) rest += law.probs[i];
	CHECK(rest < 1e-12);
}

TEST_CASE("a zero-amplitude instance pins everything at zero") {
	const BlockDistribution law =
		block_joint_distribution(AmplitudeProblem::rotation(0.0), 0, 2, 2);
	CHECK(law.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the joint law is normalized") {
	Rng rng(41);
	for (int trial = 0; trial < 10; ++trial) {
		const BlockDistribution law = block_joint_distribution(
			AmplitudeProblem::rotation(rng.uniform()),
			static_cast<int>(rng.below(6)), 2 + static_cast<int>(rng.below(4)), 2);
		double total = 0.0;
		for (double v : law.probs) total += v;
		CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
	}
}

TEST_CASE("the ancilla marginal is the resolution weight mixture") {
	const AmplitudeProblem problem = AmplitudeProblem::rotation(0.31);
	const BlockDistribution law = block_joint_distribution(problem, 1, 3, 2);
	auto [pp, pm] = eigenphases(problem);
	for (int a = 0; a < 2; ++a) {
		double marginal = 0.0;
		for (std::uint64_t t = 0; t < (1ull << law.m); ++t) marginal += law.at(a, t);
		const double expected = 0.5 * resolution_weight(pp, 2, a) +
					0.5 * resolution_weight(pm, 2, a);
		CHECK(marginal == doctest::Approx(expected).epsilon(1e-12));
	}
}

TEST_CASE("the joint law matches the simulated circuit") {
	const AmplitudeProblem problem = AmplitudeProblem::rotation(0.3);
	BlockConfig config;
	const BlockDistribution law = block_joint_distribution(problem, 1, 3, config.m_start);
	auto [state, layout] = build_block_circuit(problem, 1, 3, config);
	std::vector<int> readout = layout.counting;
	readout.push_back(layout.ancilla);
	const std::vector<double> sim = marginal_distribution(state, readout);
	double tv = 0.0;
	for (std::size_t i = 0; i < sim.size(); ++i) tv += std::abs(sim[i] - law.probs[i]);
	CHECK(tv * 0.5 < 1e-9);
}

TEST_CASE("invalid joint-law parameters are rejected") {
	const AmplitudeProblem problem = AmplitudeProblem::rotation(0.5);
	CHECK_THROWS_AS(block_joint_distribution(problem, 0, 1, 2), ValidationError);
	CHECK_THROWS_AS(block_joint_distribution(problem, -1, 2, 2), ValidationError);
	CHECK_THROWS_AS(block_joint_distribution(problem, 0, 13, 2), ValidationError);
}
