#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "awqae/engine.hpp"
#include "awqae/postprocess.hpp"

namespace awqae {

// Aggregated outcome of a cross-validation sweep. Every case lands in
// exactly one bucket, so agreements + failures.size() + special_flag_count
// always equals cases_run.
struct SweepFailure {
	double p = 0.0;
	std::vector<int> allocation;
	std::string diagnostic;
};

struct SweepReport {
	long cases_run = 0;
	long agreements = 0;
	long special_flag_count = 0;
	double max_tv_distance = 0.0;
	std::vector<SweepFailure> failures;
};

// Exhaustive grid sweep: for every interior grid phase y / 2^n_total with
// 0 < y < 2^(n_total - 1) and every allocation, runs the windowed
// estimate in exact mode, resolves it, and demands the exact bit pattern
// y back as well as agreement with the single-circuit baseline. Special
// flagged cases are tallied, not compared. Exhaustive up to n_total = 10.
SweepReport sweep_exact_grid(int n_total, const std::vector<std::vector<int>>& allocations);

// Continuous-phase comparison: trials phases drawn uniformly from
// (0, 0.5). Non-special trials must match the baseline p estimate exactly
// and carry amplitude error at most pi 2^-(n_total+1) + 1e-12 (half a
// grid cell propagated through sin).
SweepReport compare_random_phases(long trials, int n_total, const BitAllocation& allocation,
				  std::uint64_t rng_seed);

// Cross-validates the closed-form block law against the statevector
// circuit on random (p, k, m) configurations with m_start = 2; the total
// variation distance of each pair is folded into max_tv_distance and any
// case above 1e-9 becomes a failure.
SweepReport oracle_equivalence(long cases, std::uint64_t rng_seed);

// End-to-end recovery rate of the sampled pipeline on random non-special
// grid phases.
struct RecoveryReport {
	long trials = 0;
	long recovered = 0;
	double fraction = 0.0;
};

RecoveryReport sampled_recovery(long trials, int n_total, const BitAllocation& allocation,
				std::uint64_t n_shots, std::uint64_t rng_seed);

// One row of the amplitude comparison table: both estimators run on the
// same instance, error is relative to the single-circuit baseline.
struct TableRow {
	int trial = 0;
	double a_true = 0.0;
	double awqae_estimate = 0.0;
	double fullqae_estimate = 0.0;
	double error_pct = 0.0;
	bool special = false;
};

// The ten stock amplitudes of the default comparison table (4-decimal
// inputs).
const std::vector<double>& default_table_amplitudes();

// Runs both estimators over the given true amplitudes. Allocation drives
// the windowed run; the baseline uses one register of n_total qubits.
std::vector<TableRow> comparison_table(const std::vector<double>& true_amplitudes,
				       const BitAllocation& allocation,
				       const BlockConfig& config);

// Extends the stock table with extra_trials random amplitudes a = sin(pi
// phi), phi uniform in (0, 0.5). Random draws that land on a special flag
// are redrawn, matching the table's exclusion rule.
std::vector<TableRow> extended_table(long extra_trials, const BitAllocation& allocation,
				     const BlockConfig& config, std::uint64_t rng_seed);

}  // namespace awqae
