#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "awqae/grover.hpp"
#include "awqae/oracle.hpp"
#include "awqae/rng.hpp"
#include "awqae/statevector.hpp"
#include "awqae/types.hpp"

namespace awqae {

// Per-block counting widths m_1, ..., m_B, most significant chunk first.
// Every width must be at least 2 (the carry resolution step needs a top
// bit below the chunk boundary) and the total is capped by kMaxQubits.
class BitAllocation {
public:
	explicit BitAllocation(std::vector<int> widths);
	static BitAllocation parse(const std::string& csv);  // "3,3,4"

	const std::vector<int>& widths() const { return widths_; }
	int block_count() const { return static_cast<int>(widths_.size()); }
	int n_total() const { return n_total_; }
	// bits already fixed by blocks before i (0-based): sum of widths_[0..i)
	int k_offset(int i) const;

private:
	std::vector<int> widths_;
	int n_total_ = 0;
};

enum class RunMode { Exact, Sampled };

struct BlockConfig {
	int m_start = 2;         // resolution register width, >= 2
	double epsilon = 0.9;    // ambiguity ratio threshold, in (0, 1]
	std::uint64_t n_shots = 1024;  // sampled mode only
	int b_a = 0;             // ancilla value kept by post-selection
	RunMode mode = RunMode::Exact;
	std::uint64_t rng_seed = 0;    // master seed; blocks use split_seed
};

// Outcome of one block. scores holds the conditioned statistics that chunk
// selection saw: probabilities in exact mode, kept shot counts in sampled
// mode. histogram is populated in sampled mode only and carries the
// post-selection bookkeeping (kept + discarded = n_shots).
struct BlockResult {
	int block_index = 0;  // 1-based
	int k_offset = 0;
	std::string chunk_bits;  // m_i chars, most significant first
	bool flag_amb = false;
	std::uint64_t t1_star = 0;
	std::uint64_t t2_star = 0;
	double c1 = 0.0;  // score of t1_star; c1 >= c2 always
	double c2 = 0.0;  // score of t2_star; 0 when no runner-up exists
	std::map<std::uint64_t, double> scores;
	Histogram histogram;
	double wall_ms = 0.0;
};

struct RawEstimate {
	std::string phi_raw;  // concatenated chunk bits, most significant chunk first
	std::vector<bool> amb_flags;
	std::vector<BlockResult> blocks;
};

struct SelectResult {
	std::string chunk_bits;
	bool flag_amb = false;
	std::uint64_t t1_star = 0;
	std::uint64_t t2_star = 0;
	double c1 = 0.0;
	double c2 = 0.0;
};

// Wrap-aware minimum on Z_n: returns n-1 when {a, b} = {0, n-1} (the pair
// straddles the wraparound), otherwise min(a, b). a == b is a caller bug.
std::uint64_t min_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n);

// Chunk selection on conditioned statistics. t1 is the argmax (exact ties
// broken uniformly at random from rng), t2 the runner-up. The ambiguity
// flag fires when c2/c1 > epsilon; a flagged non-final block reports
// min_mod(t1, t2, 2^m), every other block reports t1.
SelectResult select_chunk(const std::map<std::uint64_t, double>& scores, int m, double epsilon,
			  bool is_last, Rng& rng);
SelectResult select_chunk(const Histogram& conditioned, int m, double epsilon, bool is_last,
			  Rng& rng);

// Builds the full pre-measurement state of block (k, m): state prep on the
// target register, phase estimation of Q on the resolution register, copy
// of the resolution MSB onto the ancilla, then phase estimation of Q^(2^k)
// on the counting register. Nothing is measured or collapsed.
std::pair<StateVector, RegisterLayout> build_block_circuit(const AmplitudeProblem& problem,
							   int k, int m,
							   const BlockConfig& config);

// Runs every block of the allocation in order and concatenates the chunk
// bits. phase_offset multiplies Q by e^{i 2 pi phase_offset} (both
// eigenphase branches shift by phase_offset); the confidence check uses it.
RawEstimate run_awqae(const AmplitudeProblem& problem, const BitAllocation& allocation,
		      const BlockConfig& config, double phase_offset = 0.0);

// Grover applications needed per block and in total. The counting
// registers cost 2^k (2^m - 1) applications per block, which telescopes
// to 2^n_total - 1 across a full allocation; each block additionally pays
// 2^m_start - 1 on its resolution register.
struct BlockCost {
	int block_index = 0;  // 1-based
	int k_offset = 0;
	int m = 0;
	std::uint64_t resolution_applications = 0;
	std::uint64_t counting_applications = 0;
	std::uint64_t max_power = 0;
};

struct CostReport {
	int m_start = 2;
	std::vector<BlockCost> blocks;
	std::uint64_t counting_total = 0;
	std::uint64_t resolution_total = 0;
	std::uint64_t max_power_overall = 0;
};

CostReport grover_cost(const BitAllocation& allocation, int m_start = 2);

namespace detail {

void validate_config(const BlockConfig& config);

// One block, independently reproducible from its own seed. q_powers must
// be prepopulated up to 2^(k+m-1) in sampled mode and may be null in
// exact mode.
BlockResult run_block(const AmplitudeProblem& problem, int block_index, int k, int m,
		      bool is_last, const BlockConfig& config, std::uint64_t block_seed,
		      double phase_offset, const GroverOperator* q_powers);

}  // namespace detail

}  // namespace awqae
