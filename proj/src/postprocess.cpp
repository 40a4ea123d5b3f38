#include "awqae/postprocess.hpp"

#include <cmath>
#include <numbers>

#include "awqae/oracle.hpp"

namespace awqae {

namespace {

std::uint64_t chunk_value(const std::string& bits) {
	std::uint64_t v = 0;
	for (char c : bits) {
		if (c != '0' && c != '1') throw ValidationError("bit string may contain only 0 and 1");
		v = (v << 1) | static_cast<std::uint64_t>(c - '0');
	}
	return v;
}

std::string chunk_bits(std::uint64_t value, int m) {
	std::string s(static_cast<std::size_t>(m), '0');
	for (int j = 0; j < m; ++j)
		if (value >> j & 1) s[static_cast<std::size_t>(m - 1 - j)] = '1';
	return s;
}

}  // namespace

std::vector<std::string> partition(const std::string& phi_raw, const BitAllocation& allocation) {
	if (phi_raw.size() != static_cast<std::size_t>(allocation.n_total()))
		throw ValidationError("bit string length " + std::to_string(phi_raw.size()) +
				      " does not match allocation total " +
				      std::to_string(allocation.n_total()));
	std::vector<std::string> chunks;
	std::size_t pos = 0;
	for (int m : allocation.widths()) {
		chunks.push_back(phi_raw.substr(pos, static_cast<std::size_t>(m)));
		chunk_value(chunks.back());  // validates characters
		pos += static_cast<std::size_t>(m);
	}
	return chunks;
}

std::optional<int> find_special_chunk(const std::vector<std::string>& chunks) {
	for (int j = static_cast<int>(chunks.size()); j >= 1; --j) {
		const std::string& bits = chunks[static_cast<std::size_t>(j - 1)];
		const std::uint64_t v = chunk_value(bits);
		if (v == 0) continue;
		if (v == 1ull << (bits.size() - 1)) return j;
		return std::nullopt;
	}
	return std::nullopt;
}

ResolvedEstimate resolve(const std::string& phi_raw, const BitAllocation& allocation,
			 const std::vector<bool>& amb_flags) {
	const int B = allocation.block_count();
	if (amb_flags.size() != static_cast<std::size_t>(B))
		throw ValidationError("ambiguity flag count does not match block count");
	const std::vector<std::string> chunks = partition(phi_raw, allocation);
	const std::optional<int> last = find_special_chunk(chunks);

	std::vector<std::uint64_t> v(chunks.size());
	for (std::size_t i = 0; i < chunks.size(); ++i) v[i] = chunk_value(chunks[i]);

	// j is the 1-based index of the chunk being corrected; the borrow
	// comes from the already corrected chunk j+1, so the cascade must run
	// high index to low
	for (int j = B - 1; j >= 1; --j) {
		const int cj = j - 1;  // 0-based corrected chunk
		const int sj = j;      // 0-based source chunk (block j+1)
		const int m_c = allocation.widths()[static_cast<std::size_t>(cj)];
		const int m_s = allocation.widths()[static_cast<std::size_t>(sj)];
		std::uint64_t borrow = v[static_cast<std::size_t>(sj)] >> (m_s - 1) & 1;
		if (amb_flags[static_cast<std::size_t>(cj)] || (last && *last == j + 1)) borrow = 0;
		const std::uint64_t mask = (1ull << m_c) - 1;
		v[static_cast<std::size_t>(cj)] = (v[static_cast<std::size_t>(cj)] - borrow) & mask;
	}

	ResolvedEstimate out;
	std::uint64_t total = 0;
	for (std::size_t i = 0; i < v.size(); ++i) {
		const int m = allocation.widths()[i];
		out.phi_est_bits += chunk_bits(v[i], m);
		total = (total << m) | v[i];
	}
	out.value = total;
	out.phi_est = std::ldexp(static_cast<double>(total), -allocation.n_total());
	out.last_idx = last;
	out.special_flag = last.has_value();
	const AmplitudeTriple amp = amplitude_from_phase(out.phi_est);
	out.theta = amp.theta;
	out.p_tilde = amp.p_tilde;
	out.a_tilde = amp.a_tilde;
	return out;
}

ResolvedEstimate resolve(const RawEstimate& raw, const BitAllocation& allocation) {
	return resolve(raw.phi_raw, allocation, raw.amb_flags);
}

AmplitudeTriple amplitude_from_phase(double phi_est) {
	AmplitudeTriple amp;
	amp.theta = 2.0 * std::numbers::pi * phi_est;
	// evaluated in extended precision so the result is the correctly
	// rounded value of sin(pi phi) itself, not of the rounded argument;
	// grid phases like 1/4 then hit p = 0.5 exactly
	const long double s =
		std::sin(std::numbers::pi_v<long double> * static_cast<long double>(phi_est));
	amp.p_tilde = static_cast<double>(s * s);
	amp.a_tilde = static_cast<double>(std::fabs(s));
	return amp;
}

bool perturbed_confidence_check(const AmplitudeProblem& problem, const BitAllocation& allocation,
				const BlockConfig& config, double delta_phi) {
	const auto [pp, pm] = eigenphases(problem);
	(void)pm;
	if (!(pp + delta_phi > 0.0 && pp + delta_phi < 0.5))
		throw ValidationError("perturbation must keep the eigenphase inside (0, 0.5)");

	const ResolvedEstimate base = resolve(run_awqae(problem, allocation, config), allocation);
	const ResolvedEstimate shifted =
		resolve(run_awqae(problem, allocation, config, delta_phi), allocation);

	const double moved = detail::frac(shifted.phi_est - base.phi_est);
	const double expected = detail::frac(delta_phi);
	double gap = std::abs(moved - expected);
	gap = std::min(gap, 1.0 - gap);  // circular distance
	return gap <= std::ldexp(1.0, -allocation.n_total()) + 1e-12;
}

}  // namespace awqae
