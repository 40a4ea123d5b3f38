#include "awqae/engine.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <sstream>

namespace awqae {

namespace {

std::string bits_msb_first(std::uint64_t value, int m) {
	std::string s(static_cast<std::size_t>(m), '0');
	for (int j = 0; j < m; ++j)
		if (value >> j & 1) s[static_cast<std::size_t>(m - 1 - j)] = '1';
	return s;
}

}  // namespace

BitAllocation::BitAllocation(std::vector<int> widths) : widths_(std::move(widths)) {
	if (widths_.empty()) throw ValidationError("bit allocation is empty");
	for (int m : widths_) {
		if (m < 2) throw ValidationError("every block width must be at least 2");
		n_total_ += m;
	}
	if (n_total_ > kMaxQubits)
		throw ValidationError("total bits " + std::to_string(n_total_) + " exceed cap " +
				      std::to_string(kMaxQubits));
}

BitAllocation BitAllocation::parse(const std::string& csv) {
	std::vector<int> widths;
	std::stringstream ss(csv);
	std::string item;
	while (std::getline(ss, item, ',')) {
		std::size_t pos = 0;
		int v = 0;
		try {
			v = std::stoi(item, &pos);
		} catch (const std::exception&) {
			throw ValidationError("bad bit allocation entry '" + item + "'");
		}
		while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
		if (pos != item.size())
			throw ValidationError("bad bit allocation entry '" + item + "'");
		widths.push_back(v);
	}
	return BitAllocation(widths);
}

int BitAllocation::k_offset(int i) const {
	if (i < 0 || i >= block_count()) throw ContractError("block index out of range");
	int k = 0;
	for (int r = 0; r < i; ++r) k += widths_[static_cast<std::size_t>(r)];
	return k;
}

std::uint64_t min_mod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
	if (a >= n || b >= n) throw ContractError("min_mod: value out of range");
	if (a == b) throw ContractError("min_mod: values must differ");
	if ((a == 0 && b == n - 1) || (b == 0 && a == n - 1)) return n - 1;
	return std::min(a, b);
}

SelectResult select_chunk(const std::map<std::uint64_t, double>& scores, int m, double epsilon,
			  bool is_last, Rng& rng) {
	if (scores.empty())
		throw EmptyConditioningError("no statistics survived post-selection");
	if (!(epsilon > 0.0 && epsilon <= 1.0))
		throw ValidationError("ambiguity threshold must lie in (0, 1]");
	const std::uint64_t space = 1ull << m;
	for (const auto& [t, c] : scores) {
		if (t >= space) throw ContractError("select_chunk: outcome exceeds chunk space");
		if (c <= 0.0) throw ContractError("select_chunk: nonpositive score");
	}

	// argmax with uniform tie-break; exact ties only (probability ties on
	// half-grid phases are bitwise equal, sampled scores are integers)
	auto pick_max = [&](std::uint64_t skip, bool use_skip) {
		double best = -1.0;
		std::vector<std::uint64_t> ties;
		for (const auto& [t, c] : scores) {
			if (use_skip && t == skip) continue;
			if (c > best) {
				best = c;
				ties.assign(1, t);
			} else if (c == best) {
				ties.push_back(t);
			}
		}
		if (ties.empty()) return std::pair<std::uint64_t, double>{0, -1.0};
		const std::uint64_t t = ties.size() == 1
						? ties.front()
						: ties[static_cast<std::size_t>(rng.below(ties.size()))];
		return std::pair<std::uint64_t, double>{t, best};
	};

	SelectResult sel;
	auto [t1, c1] = pick_max(0, false);
	sel.t1_star = t1;
	sel.c1 = c1;
	auto [t2, c2] = pick_max(t1, true);
	if (c2 < 0.0) {
		// single outcome, unambiguous by construction
		sel.t2_star = t1;
		sel.c2 = 0.0;
		sel.flag_amb = false;
	} else {
		sel.t2_star = t2;
		sel.c2 = c2;
		sel.flag_amb = c2 / c1 > epsilon;
	}
	const std::uint64_t est = (sel.flag_amb && !is_last)
					  ? min_mod(sel.t1_star, sel.t2_star, space)
					  : sel.t1_star;
	sel.chunk_bits = bits_msb_first(est, m);
	return sel;
}

SelectResult select_chunk(const Histogram& conditioned, int m, double epsilon, bool is_last,
			  Rng& rng) {
	std::map<std::uint64_t, double> scores;
	for (const auto& [t, c] : conditioned.counts)
		if (c > 0) scores[t] = static_cast<double>(c);
	return select_chunk(scores, m, epsilon, is_last, rng);
}

namespace detail {

void validate_config(const BlockConfig& config) {
	if (config.m_start < 2 || config.m_start > 12)
		throw ValidationError("resolution width must lie in [2, 12]");
	if (!(config.epsilon > 0.0 && config.epsilon <= 1.0))
		throw ValidationError("ambiguity threshold must lie in (0, 1]");
	if (config.n_shots < 1) throw ValidationError("shot count must be positive");
	if (config.b_a != 0 && config.b_a != 1)
		throw ValidationError("ancilla selection bit must be 0 or 1");
}

}  // namespace detail

namespace {

// Circuit path shared by the public builder and the sampled runner. The
// operator must have powers up to 2^(max(m_start, k+m) - 1) cached.
std::pair<StateVector, RegisterLayout> build_block_circuit_impl(const AmplitudeProblem& problem,
								const GroverOperator& q, int k,
								int m, int m_start) {
	const int n_t = problem.n_target;
	const int total = n_t + m_start + 1 + m;
	if (total > kMaxQubits)
		throw CapacityError("block circuit needs " + std::to_string(total) +
				    " qubits, cap is " + std::to_string(kMaxQubits));

	RegisterLayout layout;
	for (int i = 0; i < n_t; ++i) layout.target.push_back(i);
	for (int i = 0; i < m_start; ++i) layout.resolution.push_back(n_t + i);
	layout.ancilla = n_t + m_start;
	for (int i = 0; i < m; ++i) layout.counting.push_back(n_t + m_start + 1 + i);

	StateVector state = new_state(total);
	apply_unitary(state, build_state_prep(problem), layout.target);

	const Mat h = gate_h();
	for (int qb : layout.resolution) apply_single(state, h, qb);
	for (int j = 0; j < m_start; ++j)
		apply_controlled_unitary(state, cached_power(q, 1ull << j), layout.resolution[j],
					 layout.target);
	apply_iqft(state, layout.resolution);

	// the resolution MSB tags which eigenphase branch dominates; copy it
	// out so post-selection can condition on it after the register is
	// reused conceptually by the next block
	apply_controlled_unitary(state, gate_x(), layout.resolution[m_start - 1],
				 {layout.ancilla});

	for (int qb : layout.counting) apply_single(state, h, qb);
	for (int j = 0; j < m; ++j)
		apply_controlled_unitary(state, cached_power(q, 1ull << (j + k)),
					 layout.counting[j], layout.target);
	apply_iqft(state, layout.counting);

	return {std::move(state), std::move(layout)};
}

std::uint64_t max_exponent_for(int k, int m, int m_start) {
	const int top = std::max(m_start - 1, k + m - 1);
	return 1ull << top;
}

}  // namespace

std::pair<StateVector, RegisterLayout> build_block_circuit(const AmplitudeProblem& problem,
							   int k, int m,
							   const BlockConfig& config) {
	detail::validate_config(config);
	if (m < 2) throw ValidationError("block width must be at least 2");
	if (k < 0 || k + m > kMaxQubits) throw ValidationError("power offset out of range");
	GroverOperator q = build_grover(problem);
	prepopulate_powers(q, max_exponent_for(k, m, config.m_start));
	return build_block_circuit_impl(problem, q, k, m, config.m_start);
}

namespace detail {

BlockResult run_block(const AmplitudeProblem& problem, int block_index, int k, int m,
		      bool is_last, const BlockConfig& config, std::uint64_t block_seed,
		      double phase_offset, const GroverOperator* q_powers) {
	const auto t_start = std::chrono::steady_clock::now();
	BlockResult res;
	res.block_index = block_index;
	res.k_offset = k;
	Rng rng(block_seed);

	if (config.mode == RunMode::Exact) {
		// Idealized post-selection: keeping ancilla = b_a restricts the
		// statistics to the eigenphase branch the resolution register
		// tags with that bit, so the counting register sees a single
		// pure phase. Wrap leakage between branches is a sampling
		// effect and lives in the sampled path and the joint law.
		auto [pp, pm] = eigenphases(problem);
		pp = detail::frac(pp + phase_offset);
		pm = detail::frac(pm + phase_offset);
		int ba = config.b_a;
		double phi_sel = 0.0;
		double mass = 0.0;
		for (int attempt = 0;; ++attempt) {
			const double wp = resolution_weight(pp, config.m_start, ba);
			const double wm = resolution_weight(pm, config.m_start, ba);
			phi_sel = wp >= wm ? pp : pm;
			mass = 0.5 * std::max(wp, wm);
			if (mass >= 1e-12) break;
			if (attempt == 1)
				throw EmptyConditioningError(
					"post-selection keeps no probability mass for either "
					"ancilla value");
			ba = 1 - ba;
		}
		const std::vector<double> f =
			detail::qpe_kernel(detail::frac(std::ldexp(phi_sel, k)), m);
		for (std::uint64_t t = 0; t < f.size(); ++t)
			if (f[t] > 0.0) res.scores[t] = f[t];
	} else {
		if (q_powers == nullptr)
			throw ContractError("run_block: sampled mode needs a prepared operator");
		auto [state, layout] =
			build_block_circuit_impl(problem, *q_powers, k, m, config.m_start);

		// readout index = ancilla * 2^m + counting outcome
		std::vector<int> readout = layout.counting;
		readout.push_back(layout.ancilla);
		const std::vector<double> dist = marginal_distribution(state, readout);
		const Histogram raw = sample(dist, config.n_shots, rng);

		const std::uint64_t space = 1ull << m;
		auto condition_on = [&](int ba) {
			Histogram kept;
			for (const auto& [outcome, count] : raw.counts) {
				if ((outcome >> m) == static_cast<std::uint64_t>(ba)) {
					kept.counts[outcome & (space - 1)] += count;
					kept.total_kept += count;
				} else {
					kept.total_discarded += count;
				}
			}
			return kept;
		};
		Histogram kept = condition_on(config.b_a);
		if (kept.total_kept == 0) kept = condition_on(1 - config.b_a);
		if (kept.total_kept == 0)
			throw EmptyConditioningError(
				"post-selection keeps no shots for either ancilla value");
		res.histogram = kept;
		for (const auto& [t, c] : kept.counts) res.scores[t] = static_cast<double>(c);
	}

	const SelectResult sel = select_chunk(res.scores, m, config.epsilon, is_last, rng);
	res.chunk_bits = sel.chunk_bits;
	res.flag_amb = sel.flag_amb;
	res.t1_star = sel.t1_star;
	res.t2_star = sel.t2_star;
	res.c1 = sel.c1;
	res.c2 = sel.c2;
	res.wall_ms = std::chrono::duration<double, std::milli>(
			      std::chrono::steady_clock::now() - t_start)
			      .count();
	return res;
}

}  // namespace detail

RawEstimate run_awqae(const AmplitudeProblem& problem, const BitAllocation& allocation,
		      const BlockConfig& config, double phase_offset) {
	detail::validate_config(config);
	const int B = allocation.block_count();
	const int n_total = allocation.n_total();

	GroverOperator q;
	const bool sampled = config.mode == RunMode::Sampled;
	if (sampled) {
		q = build_grover(problem, phase_offset);
		prepopulate_powers(q, max_exponent_for(0, n_total, config.m_start));
	}

	RawEstimate est;
	for (int i = 0; i < B; ++i) {
		const int k = allocation.k_offset(i);
		const int m = allocation.widths()[static_cast<std::size_t>(i)];
		const bool is_last = k + m == n_total;
		BlockResult block = detail::run_block(problem, i + 1, k, m, is_last, config,
						      split_seed(config.rng_seed,
								 static_cast<std::uint64_t>(i)),
						      phase_offset, sampled ? &q : nullptr);
		est.phi_raw += block.chunk_bits;
		est.amb_flags.push_back(block.flag_amb);
		est.blocks.push_back(std::move(block));
	}
	return est;
}

CostReport grover_cost(const BitAllocation& allocation, int m_start) {
	if (m_start < 2 || m_start > 12)
		throw ValidationError("resolution width must lie in [2, 12]");
	CostReport report;
	report.m_start = m_start;
	const std::uint64_t res_apps = (1ull << m_start) - 1;
	for (int i = 0; i < allocation.block_count(); ++i) {
		BlockCost bc;
		bc.block_index = i + 1;
		bc.k_offset = allocation.k_offset(i);
		bc.m = allocation.widths()[static_cast<std::size_t>(i)];
		bc.resolution_applications = res_apps;
		bc.counting_applications = (1ull << bc.k_offset) * ((1ull << bc.m) - 1);
		bc.max_power = 1ull << (bc.k_offset + bc.m - 1);
		report.counting_total += bc.counting_applications;
		report.resolution_total += bc.resolution_applications;
		report.max_power_overall = std::max(report.max_power_overall, bc.max_power);
		report.blocks.push_back(bc);
	}
	return report;
}

}  // namespace awqae
