#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "awqae/engine.hpp"
#include "awqae/fullqae.hpp"
#include "awqae/harness.hpp"
#include "awqae/postprocess.hpp"
#include "awqae/records.hpp"
#include "awqae/runner.hpp"

namespace {

using namespace awqae;

struct Options {
	std::optional<double> p;
	std::optional<double> a;
	std::string phi;
	std::vector<std::uint64_t> marked;
	std::optional<int> ntarget;
	std::string allocation = "3,3,4";
	std::uint64_t shots = 1024;
	double epsilon = 0.9;
	int mstart = 2;
	int ba = 0;
	std::string mode;
	std::uint64_t seed = 0;
	std::optional<int> parallel;
	std::string format = "text";
	std::string out;
	// compare
	std::optional<int> fullbits;
	// table / sweep
	long trials = 0;
	int sweep_n = 8;
	std::string sweep_allocations = "4,4;2,2,2,2;3,3,2";
	long sweep_random = 0;
	long sweep_oracle = 0;
	long sweep_recovery = 0;
};

// accepts "411/1024" (exact rational) or a plain decimal
double parse_phase(const std::string& text) {
	const std::size_t slash = text.find('/');
	double value = 0.0;
	try {
		if (slash == std::string::npos) {
			std::size_t pos = 0;
			value = std::stod(text, &pos);
			if (pos != text.size()) throw ValidationError("");
		} else {
			std::size_t pos = 0;
			const std::string num_s = text.substr(0, slash);
			const std::string den_s = text.substr(slash + 1);
			const long long num = std::stoll(num_s, &pos);
			if (pos != num_s.size()) throw ValidationError("");
			const long long den = std::stoll(den_s, &pos);
			if (pos != den_s.size()) throw ValidationError("");
			if (num < 0 || den <= 0) throw ValidationError("");
			value = static_cast<double>(num) / static_cast<double>(den);
		}
	} catch (const std::exception&) {
		throw ValidationError("cannot parse phase '" + text + "'");
	}
	if (!(value >= 0.0 && value <= 0.5))
		throw ValidationError("phase must lie in [0, 0.5]");
	return value;
}

AmplitudeProblem problem_from_options(const Options& opt) {
	int sources = 0;
	if (opt.p) ++sources;
	if (opt.a) ++sources;
	if (!opt.phi.empty()) ++sources;
	if (opt.ntarget) ++sources;
	if (sources == 0)
		throw ValidationError("specify a problem with --p, --a, --phi or --ntarget/--marked");
	if (sources > 1)
		throw ValidationError("options --p, --a, --phi and --ntarget are mutually exclusive");

	if (opt.ntarget) return AmplitudeProblem::counting(*opt.ntarget, opt.marked);
	if (!opt.marked.empty())
		throw ValidationError("--marked requires --ntarget");
	if (opt.p) {
		if (!(*opt.p >= 0.0 && *opt.p <= 1.0))
			throw ValidationError("--p must lie in [0, 1]");
		return AmplitudeProblem::rotation(*opt.p);
	}
	if (opt.a) {
		if (!(*opt.a >= 0.0 && *opt.a <= 1.0))
			throw ValidationError("--a must lie in [0, 1]");
		return AmplitudeProblem::rotation(*opt.a * *opt.a);
	}
	const double phi = parse_phase(opt.phi);
	const double s = std::sin(std::numbers::pi * phi);
	return AmplitudeProblem::rotation(s * s);
}

BlockConfig config_from_options(const Options& opt, RunMode default_mode) {
	BlockConfig config;
	config.m_start = opt.mstart;
	config.epsilon = opt.epsilon;
	config.n_shots = opt.shots;
	config.b_a = opt.ba;
	config.rng_seed = opt.seed;
	if (opt.mode.empty())
		config.mode = default_mode;
	else if (opt.mode == "exact")
		config.mode = RunMode::Exact;
	else if (opt.mode == "sampled")
		config.mode = RunMode::Sampled;
	else
		throw ValidationError("--mode must be 'exact' or 'sampled'");
	return config;
}

int worker_count(const Options& opt) {
	if (opt.parallel) {
		if (*opt.parallel < 1) throw ValidationError("--parallel must be at least 1");
		return *opt.parallel;
	}
	if (const char* env = std::getenv("AWQAE_WORKERS")) {
		try {
			const int w = std::stoi(env);
			if (w >= 1) return w;
		} catch (const std::exception&) {
		}
		throw ValidationError("AWQAE_WORKERS must be a positive integer");
	}
	return 1;
}

void check_format(const std::string& format) {
	if (format != "text" && format != "csv" && format != "json")
		throw ValidationError("--format must be text, csv or json");
}

void write_out(const Options& opt, const std::string& doc) {
	if (opt.out.empty()) return;
	std::ofstream f(opt.out, std::ios::binary);
	if (!f) throw Error("cannot open output file '" + opt.out + "'");
	f << doc;
	if (!f.good()) throw Error("failed writing output file '" + opt.out + "'");
}

void add_problem_options(CLI::App* cmd, Options& opt) {
	cmd->add_option("--p", opt.p, "success probability in [0, 1]");
	cmd->add_option("--a", opt.a, "true amplitude in [0, 1] (p = a^2)");
	cmd->add_option("--phi", opt.phi,
			"eigenphase in [0, 0.5]; accepts an exact rational like 411/1024");
	cmd->add_option("--ntarget", opt.ntarget, "counting form: target register qubits");
	cmd->add_option("--marked", opt.marked, "counting form: marked basis states")
		->delimiter(',');
}

void add_run_options(CLI::App* cmd, Options& opt) {
	cmd->add_option("--allocation", opt.allocation, "per-block bit widths, e.g. 3,3,4");
	cmd->add_option("--shots", opt.shots, "shots per block in sampled mode");
	cmd->add_option("--epsilon", opt.epsilon, "ambiguity ratio threshold (default 0.9)");
	cmd->add_option("--mstart", opt.mstart, "resolution register width (default 2)");
	cmd->add_option("--ba", opt.ba, "ancilla value kept by post-selection (default 0)");
	cmd->add_option("--mode", opt.mode, "exact or sampled");
	cmd->add_option("--seed", opt.seed, "master RNG seed");
	cmd->add_option("--parallel", opt.parallel,
			"worker threads (default: AWQAE_WORKERS or 1)");
}

void add_output_options(CLI::App* cmd, Options& opt) {
	cmd->add_option("--format", opt.format, "text, csv or json");
	cmd->add_option("--out", opt.out, "also write the document to this path");
}

RunRecord run_estimate(const AmplitudeProblem& problem, const BitAllocation& allocation,
		       const BlockConfig& config, int workers) {
	RunRecord record;
	record.problem = problem;
	record.allocation = allocation.widths();
	record.config = config;
	record.seed = config.rng_seed;

	const auto t0 = std::chrono::steady_clock::now();
	if (workers > 1) {
		ParallelPlan plan;
		plan.worker_count = workers;
		plan.master_seed = config.rng_seed;
		record.raw = run_blocks_parallel(problem, allocation, config, plan);
	} else {
		record.raw = run_awqae(problem, allocation, config);
	}
	record.timing.total_ms = std::chrono::duration<double, std::milli>(
					 std::chrono::steady_clock::now() - t0)
					 .count();
	for (const auto& b : record.raw.blocks) record.timing.per_block_ms.push_back(b.wall_ms);

	record.resolved = resolve(record.raw, allocation);
	record.cost = grover_cost(allocation, config.m_start);
	return record;
}

std::string flags_text(const std::vector<bool>& flags) {
	std::string s = "[";
	for (std::size_t i = 0; i < flags.size(); ++i) {
		if (i) s += ",";
		s += flags[i] ? "1" : "0";
	}
	return s + "]";
}

std::string estimate_text(const RunRecord& record) {
	std::ostringstream out;
	const ResolvedEstimate& r = record.resolved;
	out << "phi_raw:      " << record.raw.phi_raw << "\n";
	out << "amb_flags:    " << flags_text(record.raw.amb_flags) << "\n";
	out << "phi_est_bits: " << r.phi_est_bits << "\n";
	out << "phi_est:      " << format_double(r.phi_est) << "\n";
	out << "theta:        " << format_double(r.theta) << "\n";
	out << "p_tilde:      " << format_double(r.p_tilde) << "\n";
	out << "a_tilde:      " << format_double(r.a_tilde) << "\n";
	out << "special:      " << (r.special_flag ? "yes" : "no");
	if (r.last_idx) out << " (chunk " << *r.last_idx << ")";
	out << "\n";
	out << "grover applications: " << record.cost.counting_total << " counting + "
	    << record.cost.resolution_total << " resolution\n";
	out << "total wall ms: " << format_double(record.timing.total_ms) << "\n";
	return out.str();
}

std::string estimate_csv(const RunRecord& record) {
	std::ostringstream out;
	const ResolvedEstimate& r = record.resolved;
	out << "key,value\n";
	out << "phi_raw," << record.raw.phi_raw << "\n";
	out << "phi_est_bits," << r.phi_est_bits << "\n";
	out << "phi_est," << format_double(r.phi_est) << "\n";
	out << "p_tilde," << format_double(r.p_tilde) << "\n";
	out << "a_tilde," << format_double(r.a_tilde) << "\n";
	out << "special," << (r.special_flag ? 1 : 0) << "\n";
	return out.str();
}

int cmd_estimate(const Options& opt, RunMode default_mode) {
	check_format(opt.format);
	const AmplitudeProblem problem = problem_from_options(opt);
	const BitAllocation allocation = BitAllocation::parse(opt.allocation);
	const BlockConfig config = config_from_options(opt, default_mode);
	const RunRecord record =
		run_estimate(problem, allocation, config, worker_count(opt));

	std::string doc;
	if (opt.format == "json")
		doc = run_record_to_json(record).dump(2) + "\n";
	else if (opt.format == "csv")
		doc = estimate_csv(record);
	else
		doc = estimate_text(record);
	std::cout << doc;
	write_out(opt, doc);
	return 0;
}

int cmd_compare(const Options& opt) {
	check_format(opt.format);
	const AmplitudeProblem problem = problem_from_options(opt);
	const BitAllocation allocation = BitAllocation::parse(opt.allocation);
	const BlockConfig config = config_from_options(opt, RunMode::Exact);
	const int m_full = opt.fullbits ? *opt.fullbits : allocation.n_total();
	if (m_full != allocation.n_total())
		throw ValidationError(
			"bit budgets differ: allocation has " +
			std::to_string(allocation.n_total()) + " bits, baseline was given " +
			std::to_string(m_full) + "; a comparison needs equal budgets");

	const RunRecord record =
		run_estimate(problem, allocation, config, worker_count(opt));
	const FullQaeResult full = run_full_qae(problem, m_full, config);
	const double diff_pct =
		full.a_tilde == 0.0
			? (record.resolved.a_tilde == 0.0 ? 0.0 : 100.0)
			: 100.0 * std::abs(record.resolved.a_tilde - full.a_tilde) / full.a_tilde;

	std::string doc;
	if (opt.format == "json") {
		nlohmann::json j{{"windowed",
				  {{"p_tilde", record.resolved.p_tilde},
				   {"a_tilde", record.resolved.a_tilde},
				   {"phi_est", record.resolved.phi_est},
				   {"special", record.resolved.special_flag}}},
				 {"baseline",
				  {{"y", full.y},
				   {"p_tilde", full.p_tilde},
				   {"a_tilde", full.a_tilde}}},
				 {"error_pct", diff_pct}};
		doc = j.dump(2) + "\n";
	} else {
		std::ostringstream out;
		out << "windowed estimate: a_tilde = " << format_double(record.resolved.a_tilde)
		    << " (p_tilde = " << format_double(record.resolved.p_tilde) << ")";
		if (record.resolved.special_flag) out << " [special]";
		out << "\n";
		out << "baseline estimate: a_tilde = " << format_double(full.a_tilde)
		    << " (p_tilde = " << format_double(full.p_tilde) << ")\n";
		char buf[64];
		std::snprintf(buf, sizeof(buf), "%.2f", diff_pct);
		out << "relative error vs baseline: " << buf << "%\n";
		doc = out.str();
	}
	std::cout << doc;
	write_out(opt, doc);
	return 0;
}

std::string table_text(const std::vector<TableRow>& rows) {
	std::ostringstream out;
	out << "trial  true_amplitude  awqae_estimate  fullqae_estimate  error_pct\n";
	char buf[160];
	for (const auto& r : rows) {
		std::snprintf(buf, sizeof(buf), "%5d  %14.4f  %14.4f  %16.4f  %9.2f%s\n",
			      r.trial, r.a_true, r.awqae_estimate, r.fullqae_estimate,
			      r.error_pct, r.special ? "  [special]" : "");
		out << buf;
	}
	return out.str();
}

int cmd_table(const Options& opt) {
	check_format(opt.format);
	const BitAllocation allocation = BitAllocation::parse(opt.allocation);
	const BlockConfig config = config_from_options(opt, RunMode::Exact);
	const std::vector<TableRow> rows =
		opt.trials > 0 ? extended_table(opt.trials, allocation, config, opt.seed)
			       : comparison_table(default_table_amplitudes(), allocation, config);

	std::string doc;
	if (opt.format == "json")
		doc = table_to_json(rows).dump(2) + "\n";
	else if (opt.format == "csv")
		doc = table_csv(rows);
	else
		doc = table_text(rows);
	std::cout << doc;
	write_out(opt, doc);
	return 0;
}

int cmd_count(const Options& opt) {
	check_format(opt.format);
	if (!opt.ntarget) throw ValidationError("count needs --ntarget");
	if (*opt.ntarget < 1 || *opt.ntarget > 6)
		throw ValidationError("count supports target registers of at most 6 qubits");
	const AmplitudeProblem problem = AmplitudeProblem::counting(*opt.ntarget, opt.marked);
	const BitAllocation allocation = BitAllocation::parse(opt.allocation);
	const BlockConfig config = config_from_options(opt, RunMode::Exact);

	const RunRecord record =
		run_estimate(problem, allocation, config, worker_count(opt));
	const double space = std::ldexp(1.0, *opt.ntarget);
	const std::uint64_t m_hat = static_cast<std::uint64_t>(
		std::llround(space * record.resolved.p_tilde));
	const double a = record.resolved.a_tilde;
	const std::uint64_t iterations =
		a > 0.0 ? static_cast<std::uint64_t>(
				  std::floor(std::numbers::pi / (4.0 * std::asin(a))))
			: 0;

	std::string doc;
	if (opt.format == "json") {
		nlohmann::json j{{"search_space", static_cast<std::uint64_t>(space)},
				 {"marked_true", problem.marked.size()},
				 {"marked_estimate", m_hat},
				 {"p_tilde", record.resolved.p_tilde},
				 {"a_tilde", a},
				 {"grover_iterations", iterations},
				 {"special", record.resolved.special_flag}};
		doc = j.dump(2) + "\n";
	} else {
		std::ostringstream out;
		out << "search space N = " << static_cast<std::uint64_t>(space) << ", marked M = "
		    << problem.marked.size() << "\n";
		out << "estimated count M_hat = " << m_hat << "\n";
		out << "p_tilde = " << format_double(record.resolved.p_tilde)
		    << ", a_tilde = " << format_double(a) << "\n";
		if (a > 0.0)
			out << "grover iterations for search: " << iterations << "\n";
		else
			out << "grover iterations for search: n/a (no marked items detected)\n";
		doc = out.str();
	}
	std::cout << doc;
	write_out(opt, doc);
	return 0;
}

int cmd_cost(const Options& opt) {
	check_format(opt.format);
	const BitAllocation allocation = BitAllocation::parse(opt.allocation);
	const CostReport report = grover_cost(allocation, opt.mstart);
	const int n = allocation.n_total();
	const std::uint64_t full_apps = (1ull << n) - 1;

	std::string doc;
	if (opt.format == "json") {
		nlohmann::json j = cost_report_to_json(report);
		j["baseline"] = {{"counting_applications", full_apps},
				 {"max_power", 1ull << (n - 1)}};
		doc = j.dump(2) + "\n";
	} else {
		std::ostringstream out;
		out << "block  k_offset  m  counting_apps  max_power  resolution_apps\n";
		char buf[160];
		for (const auto& b : report.blocks) {
			std::snprintf(buf, sizeof(buf), "%5d  %8d  %1d  %13llu  %9llu  %15llu\n",
				      b.block_index, b.k_offset, b.m,
				      static_cast<unsigned long long>(b.counting_applications),
				      static_cast<unsigned long long>(b.max_power),
				      static_cast<unsigned long long>(b.resolution_applications));
			out << buf;
		}
		out << "counting total: " << report.counting_total
		    << " (baseline single circuit: " << full_apps << ")\n";
		out << "resolution total: " << report.resolution_total << "\n";
		out << "max power applied: " << report.max_power_overall
		    << " (baseline: " << (1ull << (n - 1)) << ")\n";
		doc = out.str();
	}
	std::cout << doc;
	write_out(opt, doc);
	return 0;
}

int cmd_sweep(const Options& opt) {
	check_format(opt.format);
	nlohmann::json out = nlohmann::json::object();
	std::ostringstream text;

	if (opt.sweep_random == 0 && opt.sweep_oracle == 0 && opt.sweep_recovery == 0) {
		std::vector<std::vector<int>> allocations;
		std::stringstream ss(opt.sweep_allocations);
		std::string group;
		while (std::getline(ss, group, ';'))
			allocations.push_back(BitAllocation::parse(group).widths());
		const SweepReport report = sweep_exact_grid(opt.sweep_n, allocations);
		out["grid"] = sweep_report_to_json(report);
		text << "grid sweep n=" << opt.sweep_n << ": " << report.agreements << "/"
		     << report.cases_run << " recovered, " << report.special_flag_count
		     << " special, " << report.failures.size() << " failures\n";
	}
	if (opt.sweep_random > 0) {
		const BitAllocation allocation = BitAllocation::parse(opt.allocation);
		const SweepReport report = compare_random_phases(
			opt.sweep_random, allocation.n_total(), allocation, opt.seed);
		out["random_phases"] = sweep_report_to_json(report);
		text << "random phases: " << report.agreements << "/" << report.cases_run
		     << " agree, " << report.special_flag_count << " special, "
		     << report.failures.size() << " failures\n";
	}
	if (opt.sweep_oracle > 0) {
		const SweepReport report = oracle_equivalence(opt.sweep_oracle, opt.seed);
		out["oracle"] = sweep_report_to_json(report);
		text << "oracle equivalence: " << report.agreements << "/" << report.cases_run
		     << " under tv 1e-9, max tv " << format_double(report.max_tv_distance)
		     << "\n";
	}
	if (opt.sweep_recovery > 0) {
		const BitAllocation allocation = BitAllocation::parse(opt.allocation);
		const RecoveryReport report =
			sampled_recovery(opt.sweep_recovery, allocation.n_total(), allocation,
					 opt.shots, opt.seed);
		out["recovery"] = {{"trials", report.trials},
				   {"recovered", report.recovered},
				   {"fraction", report.fraction}};
		text << "sampled recovery: " << report.recovered << "/" << report.trials
		     << " (" << format_double(report.fraction) << ")\n";
	}

	std::string doc;
	if (opt.format == "json")
		doc = out.dump(2) + "\n";
	else
		doc = text.str();
	std::cout << doc;
	write_out(opt, doc);
	return 0;
}

}  // namespace

int main(int argc, char** argv) {
	CLI::App app{"Adaptive windowed amplitude estimation on a statevector simulator"};
	app.require_subcommand(1);
	Options opt;

	CLI::App* estimate = app.add_subcommand(
		"estimate", "run the windowed estimator (sampled mode by default)");
	add_problem_options(estimate, opt);
	add_run_options(estimate, opt);
	add_output_options(estimate, opt);

	CLI::App* compare = app.add_subcommand(
		"compare", "run windowed and single-circuit estimates on the same instance");
	add_problem_options(compare, opt);
	add_run_options(compare, opt);
	add_output_options(compare, opt);
	compare->add_option("--fullbits", opt.fullbits,
			    "baseline counting qubits (must equal the allocation total)");

	CLI::App* table = app.add_subcommand(
		"table", "amplitude comparison table (ten stock rows; --trials adds random rows)");
	add_run_options(table, opt);
	add_output_options(table, opt);
	table->add_option("--trials", opt.trials, "extra random rows to append");

	CLI::App* count = app.add_subcommand(
		"count", "estimate the number of marked items of a counting instance");
	add_problem_options(count, opt);
	add_run_options(count, opt);
	add_output_options(count, opt);

	CLI::App* cost = app.add_subcommand(
		"cost", "grover applications per block versus the single-circuit baseline");
	cost->add_option("--allocation", opt.allocation, "per-block bit widths, e.g. 3,3,4");
	cost->add_option("--mstart", opt.mstart, "resolution register width (default 2)");
	add_output_options(cost, opt);

	CLI::App* sweep = app.add_subcommand(
		"sweep", "cross-validation sweeps (grid, random phases, oracle, recovery)");
	sweep->add_option("--n", opt.sweep_n, "grid sweep total bits");
	sweep->add_option("--allocations", opt.sweep_allocations,
			  "semicolon-separated allocations for the grid sweep");
	sweep->add_option("--random", opt.sweep_random, "random-phase comparison trials");
	sweep->add_option("--oracle", opt.sweep_oracle, "oracle equivalence cases");
	sweep->add_option("--recovery", opt.sweep_recovery, "sampled recovery trials");
	add_run_options(sweep, opt);
	add_output_options(sweep, opt);

	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e);
	} catch (const CLI::CallForAllHelp& e) {
		return app.exit(e);
	} catch (const CLI::ParseError& e) {
		app.exit(e);
		return 1;
	}

	try {
		if (estimate->parsed()) return cmd_estimate(opt, RunMode::Sampled);
		if (compare->parsed()) return cmd_compare(opt);
		if (table->parsed()) return cmd_table(opt);
		if (count->parsed()) return cmd_count(opt);
		if (cost->parsed()) return cmd_cost(opt);
		if (sweep->parsed()) return cmd_sweep(opt);
	} catch (const ValidationError& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 1;
	} catch (const ContractError& e) {
		std::cerr << "internal error: " << e.what() << "\n";
		return 2;
	} catch (const std::exception& e) {
		std::cerr << "runtime error: " << e.what() << "\n";
		return 2;
	}
	return 0;
}
