#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "awqae/engine.hpp"

namespace awqae {

// Final estimate after carry resolution. phi_est_bits has n_total chars,
// most significant first, and phi_est = value / 2^n_total exactly.
// last_idx is the 1-based index of the special chunk when one exists; a
// special chunk marks an unresolved half-grid tie, so callers comparing
// against ground truth should skip flagged estimates.
struct ResolvedEstimate {
	std::string phi_est_bits;
	std::uint64_t value = 0;
	double phi_est = 0.0;
	std::optional<int> last_idx;
	bool special_flag = false;
	double theta = 0.0;    // 2 pi phi_est
	double p_tilde = 0.0;  // sin^2(theta / 2)
	double a_tilde = 0.0;  // |sin(pi phi_est)| = sqrt(p_tilde)
};

// Splits a raw bit string into per-block chunks. The string length must
// equal the allocation total.
std::vector<std::string> partition(const std::string& phi_raw, const BitAllocation& allocation);

// Scans chunks from least significant to most significant, skipping
// all-zero chunks. If the first non-zero chunk encountered reads exactly
// "10...0" (value 2^(m-1)) its 1-based index is returned; any other value
// stops the scan with no result. A hit means the trailing estimate sits
// exactly between two grid points and no correction can disambiguate it.
std::optional<int> find_special_chunk(const std::vector<std::string>& chunks);

// Carry resolution. Walking from the last block toward the first, each
// chunk j absorbs the top bit of the already corrected chunk j+1 (the
// rounded-up half of the next block's estimate belongs to chunk j as a
// carry). The borrow is suppressed when chunk j was flagged ambiguous or
// when chunk j+1 is the special chunk.
ResolvedEstimate resolve(const std::string& phi_raw, const BitAllocation& allocation,
			 const std::vector<bool>& amb_flags);
ResolvedEstimate resolve(const RawEstimate& raw, const BitAllocation& allocation);

struct AmplitudeTriple {
	double theta = 0.0;
	double p_tilde = 0.0;
	double a_tilde = 0.0;
};

// theta = 2 pi phi, p = sin^2(theta/2), a = |sin(pi phi)|.
AmplitudeTriple amplitude_from_phase(double phi_est);

// Reruns the estimate with Q multiplied by e^{i 2 pi delta_phi}, which
// shifts both eigenphases by delta_phi. A trustworthy estimate moves by
// exactly delta_phi (mod 1) within one grid cell; an estimate pinned to a
// fragile configuration does not. Requires phi_plus + delta_phi to stay
// inside (0, 0.5).
bool perturbed_confidence_check(const AmplitudeProblem& problem, const BitAllocation& allocation,
				const BlockConfig& config, double delta_phi);

}  // namespace awqae
