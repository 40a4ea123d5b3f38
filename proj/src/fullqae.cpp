#include "awqae/fullqae.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "awqae/oracle.hpp"
#include "awqae/postprocess.hpp"
#include "awqae/statevector.hpp"

namespace awqae {

FullQaeResult run_full_qae(const AmplitudeProblem& problem, int m, const BlockConfig& config) {
	if (m < 1 || m > 12)
		throw ValidationError("counting width " + std::to_string(m) + " outside [1, 12]");
	detail::validate_config(config);

	const int n_t = problem.n_target;
	if (n_t + m > kMaxQubits)
		throw CapacityError("baseline circuit needs " + std::to_string(n_t + m) +
				    " qubits, cap is " + std::to_string(kMaxQubits));

	GroverOperator q = build_grover(problem);
	prepopulate_powers(q, 1ull << (m - 1));

	std::vector<int> target, counting;
	for (int i = 0; i < n_t; ++i) target.push_back(i);
	for (int i = 0; i < m; ++i) counting.push_back(n_t + i);

	StateVector state = new_state(n_t + m);
	apply_unitary(state, build_state_prep(problem), target);
	const Mat h = gate_h();
	for (int qb : counting) apply_single(state, h, qb);
	for (int j = 0; j < m; ++j)
		apply_controlled_unitary(state, cached_power(q, 1ull << j), counting[j], target);
	apply_iqft(state, counting);

	FullQaeResult res;
	res.distribution = marginal_distribution(state, counting);

	if (config.mode == RunMode::Exact) {
		// mirrored peaks are analytically equal; the 1e-12 margin makes
		// the tie robust to gate-level roundoff and resolves it toward
		// the smaller outcome
		std::uint64_t best = 0;
		for (std::uint64_t t = 1; t < res.distribution.size(); ++t)
			if (res.distribution[t] > res.distribution[best] + 1e-12) best = t;
		res.y = best;
	} else {
		const Histogram h2 = sample(res.distribution, config.n_shots, config.rng_seed);
		std::uint64_t best = 0;
		std::uint64_t best_count = 0;
		for (const auto& [t, c] : h2.counts) {
			if (c > best_count) {  // map iterates ascending, ties keep smaller t
				best = t;
				best_count = c;
			}
		}
		res.y = best;
	}

	res.phi = std::ldexp(static_cast<double>(res.y), -m);
	// same conversion the windowed path uses, so equal phases give
	// bitwise equal amplitude estimates
	const AmplitudeTriple amp = amplitude_from_phase(res.phi);
	res.p_tilde = amp.p_tilde;
	res.a_tilde = amp.a_tilde;
	return res;
}

std::vector<double> full_qae_distribution(const AmplitudeProblem& problem, int m) {
	if (m < 1 || m > 20)
		throw ValidationError("counting width " + std::to_string(m) + " outside [1, 20]");
	const auto [pp, pm] = eigenphases(problem);
	const std::vector<double> fp = detail::qpe_kernel(pp, m);
	const std::vector<double> fm = detail::qpe_kernel(pm, m);
	std::vector<double> out(fp.size());
	for (std::size_t t = 0; t < out.size(); ++t) out[t] = 0.5 * (fp[t] + fm[t]);
	return out;
}

}  // namespace awqae
