#include "awqae/runner.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

namespace awqae {

std::vector<std::uint64_t> block_seeds(std::uint64_t master_seed, int block_count) {
	if (block_count < 0) throw ContractError("negative block count");
	std::vector<std::uint64_t> seeds;
	seeds.reserve(static_cast<std::size_t>(block_count));
	for (int i = 0; i < block_count; ++i)
		seeds.push_back(split_seed(master_seed, static_cast<std::uint64_t>(i)));
	return seeds;
}

RawEstimate run_blocks_parallel(const AmplitudeProblem& problem, const BitAllocation& allocation,
				const BlockConfig& config, const ParallelPlan& plan) {
	if (plan.worker_count < 1) throw ValidationError("worker count must be at least 1");
	detail::validate_config(config);

	const int B = allocation.block_count();
	const int n_total = allocation.n_total();
	const std::vector<std::uint64_t> seeds = block_seeds(plan.master_seed, B);

	// the power cache is filled once up front so workers only ever read it
	GroverOperator q;
	const bool sampled = config.mode == RunMode::Sampled;
	if (sampled) {
		q = build_grover(problem);
		int top = config.m_start - 1;
		if (n_total - 1 > top) top = n_total - 1;
		prepopulate_powers(q, 1ull << top);
	}

	std::vector<std::optional<BlockResult>> slots(static_cast<std::size_t>(B));
	std::atomic<int> next{0};
	std::mutex err_mutex;
	int err_block = -1;
	std::string err_message;

	auto worker = [&]() {
		for (;;) {
			const int i = next.fetch_add(1);
			if (i >= B) return;
			try {
				const int k = allocation.k_offset(i);
				const int m = allocation.widths()[static_cast<std::size_t>(i)];
				slots[static_cast<std::size_t>(i)] = detail::run_block(
					problem, i + 1, k, m, k + m == n_total, config, seeds[static_cast<std::size_t>(i)],
					0.0, sampled ? &q : nullptr);
			} catch (const std::exception& e) {
				std::lock_guard<std::mutex> lock(err_mutex);
				if (err_block < 0 || i + 1 < err_block) {
					err_block = i + 1;
					err_message = e.what();
				}
			}
		}
	};

	const int spawn = std::min(plan.worker_count, B);
	std::vector<std::thread> threads;
	threads.reserve(static_cast<std::size_t>(spawn));
	for (int w = 0; w < spawn; ++w) threads.emplace_back(worker);
	for (auto& t : threads) t.join();

	if (err_block >= 0)
		throw Error("block " + std::to_string(err_block) + " failed: " + err_message);

	RawEstimate est;
	for (auto& slot : slots) {
		BlockResult block = std::move(*slot);
		est.phi_raw += block.chunk_bits;
		est.amb_flags.push_back(block.flag_amb);
		est.blocks.push_back(std::move(block));
	}
	return est;
}

}  // namespace awqae
