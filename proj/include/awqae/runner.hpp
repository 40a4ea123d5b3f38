#pragma once

#include <cstdint>
#include <vector>

#include "awqae/engine.hpp"

namespace awqae {

// Blocks share no state, so they can run on any number of workers. Every
// block draws its seed statelessly from the master seed and its own index
// (split_seed), which makes the merged result bit-identical to the
// sequential run for every worker count and any scheduling order.
struct ParallelPlan {
	int worker_count = 1;
	std::uint64_t master_seed = 0;
};

// split_seed(master_seed, i) for each block index i.
std::vector<std::uint64_t> block_seeds(std::uint64_t master_seed, int block_count);

// Runs all blocks of the allocation across plan.worker_count threads and
// merges the results in allocation order. plan.master_seed plays the role
// config.rng_seed plays in run_awqae. A failing block surfaces as an
// Error naming the 1-based block index.
RawEstimate run_blocks_parallel(const AmplitudeProblem& problem, const BitAllocation& allocation,
				const BlockConfig& config, const ParallelPlan& plan);

}  // namespace awqae
