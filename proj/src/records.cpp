#include "awqae/records.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace awqae {

using nlohmann::json;

std::string format_double(double v) {
	char buf[64];
	const auto res = std::to_chars(buf, buf + sizeof(buf), v);
	return std::string(buf, res.ptr);
}

namespace {

json histogram_to_json(const Histogram& h) {
	json counts = json::object();
	for (const auto& [k, v] : h.counts) counts[std::to_string(k)] = v;
	return json{{"counts", counts},
		    {"total_kept", h.total_kept},
		    {"total_discarded", h.total_discarded}};
}

Histogram histogram_from_json(const json& j) {
	Histogram h;
	for (const auto& [k, v] : j.at("counts").items())
		h.counts[std::stoull(k)] = v.get<std::uint64_t>();
	h.total_kept = j.at("total_kept").get<std::uint64_t>();
	h.total_discarded = j.at("total_discarded").get<std::uint64_t>();
	return h;
}

json block_to_json(const BlockResult& b) {
	json scores = json::object();
	for (const auto& [t, c] : b.scores) scores[std::to_string(t)] = c;
	return json{{"block_index", b.block_index},
		    {"k_offset", b.k_offset},
		    {"chunk_bits", b.chunk_bits},
		    {"flag_amb", b.flag_amb},
		    {"t1_star", b.t1_star},
		    {"t2_star", b.t2_star},
		    {"c1", b.c1},
		    {"c2", b.c2},
		    {"scores", scores},
		    {"histogram", histogram_to_json(b.histogram)},
		    {"wall_ms", b.wall_ms}};
}

BlockResult block_from_json(const json& j) {
	BlockResult b;
	b.block_index = j.at("block_index").get<int>();
	b.k_offset = j.at("k_offset").get<int>();
	b.chunk_bits = j.at("chunk_bits").get<std::string>();
	b.flag_amb = j.at("flag_amb").get<bool>();
	b.t1_star = j.at("t1_star").get<std::uint64_t>();
	b.t2_star = j.at("t2_star").get<std::uint64_t>();
	b.c1 = j.at("c1").get<double>();
	b.c2 = j.at("c2").get<double>();
	for (const auto& [t, c] : j.at("scores").items())
		b.scores[std::stoull(t)] = c.get<double>();
	b.histogram = histogram_from_json(j.at("histogram"));
	b.wall_ms = j.at("wall_ms").get<double>();
	return b;
}

json problem_to_json(const AmplitudeProblem& p) {
	return json{{"form", p.form == ProblemForm::Rotation ? "rotation" : "counting"},
		    {"p", p.p},
		    {"n_target", p.n_target},
		    {"marked", p.marked}};
}

AmplitudeProblem problem_from_json(const json& j) {
	const std::string form = j.at("form").get<std::string>();
	if (form == "rotation") return AmplitudeProblem::rotation(j.at("p").get<double>());
	if (form == "counting")
		return AmplitudeProblem::counting(
			j.at("n_target").get<int>(),
			j.at("marked").get<std::vector<std::uint64_t>>());
	throw ValidationError("unknown problem form '" + form + "'");
}

json config_to_json(const BlockConfig& c) {
	return json{{"m_start", c.m_start},
		    {"epsilon", c.epsilon},
		    {"n_shots", c.n_shots},
		    {"b_a", c.b_a},
		    {"mode", c.mode == RunMode::Exact ? "exact" : "sampled"},
		    {"rng_seed", c.rng_seed}};
}

BlockConfig config_from_json(const json& j) {
	BlockConfig c;
	c.m_start = j.at("m_start").get<int>();
	c.epsilon = j.at("epsilon").get<double>();
	c.n_shots = j.at("n_shots").get<std::uint64_t>();
	c.b_a = j.at("b_a").get<int>();
	const std::string mode = j.at("mode").get<std::string>();
	if (mode == "exact")
		c.mode = RunMode::Exact;
	else if (mode == "sampled")
		c.mode = RunMode::Sampled;
	else
		throw ValidationError("unknown mode '" + mode + "'");
	c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
	return c;
}

json resolved_to_json(const ResolvedEstimate& r) {
	json out{{"phi_est_bits", r.phi_est_bits},
		 {"value", r.value},
		 {"phi_est", r.phi_est},
		 {"special_flag", r.special_flag},
		 {"theta", r.theta},
		 {"p_tilde", r.p_tilde},
		 {"a_tilde", r.a_tilde}};
	if (r.last_idx)
		out["last_idx"] = *r.last_idx;
	else
		out["last_idx"] = nullptr;
	return out;
}

ResolvedEstimate resolved_from_json(const json& j) {
	ResolvedEstimate r;
	r.phi_est_bits = j.at("phi_est_bits").get<std::string>();
	r.value = j.at("value").get<std::uint64_t>();
	r.phi_est = j.at("phi_est").get<double>();
	r.special_flag = j.at("special_flag").get<bool>();
	if (!j.at("last_idx").is_null()) r.last_idx = j.at("last_idx").get<int>();
	r.theta = j.at("theta").get<double>();
	r.p_tilde = j.at("p_tilde").get<double>();
	r.a_tilde = j.at("a_tilde").get<double>();
	return r;
}

}  // namespace

json cost_report_to_json(const CostReport& report) {
	json blocks = json::array();
	for (const auto& b : report.blocks)
		blocks.push_back(json{{"block_index", b.block_index},
				      {"k_offset", b.k_offset},
				      {"m", b.m},
				      {"resolution_applications", b.resolution_applications},
				      {"counting_applications", b.counting_applications},
				      {"max_power", b.max_power}});
	return json{{"m_start", report.m_start},
		    {"blocks", blocks},
		    {"counting_total", report.counting_total},
		    {"resolution_total", report.resolution_total},
		    {"max_power_overall", report.max_power_overall}};
}

namespace {

CostReport cost_report_from_json(const json& j) {
	CostReport report;
	report.m_start = j.at("m_start").get<int>();
	for (const auto& bj : j.at("blocks")) {
		BlockCost b;
		b.block_index = bj.at("block_index").get<int>();
		b.k_offset = bj.at("k_offset").get<int>();
		b.m = bj.at("m").get<int>();
		b.resolution_applications = bj.at("resolution_applications").get<std::uint64_t>();
		b.counting_applications = bj.at("counting_applications").get<std::uint64_t>();
		b.max_power = bj.at("max_power").get<std::uint64_t>();
		report.blocks.push_back(b);
	}
	report.counting_total = j.at("counting_total").get<std::uint64_t>();
	report.resolution_total = j.at("resolution_total").get<std::uint64_t>();
	report.max_power_overall = j.at("max_power_overall").get<std::uint64_t>();
	return report;
}

}  // namespace

json run_record_to_json(const RunRecord& record) {
	json blocks = json::array();
	for (const auto& b : record.raw.blocks) blocks.push_back(block_to_json(b));

	json outputs = resolved_to_json(record.resolved);
	outputs["phi_raw"] = record.raw.phi_raw;
	outputs["amb_flags"] = record.raw.amb_flags;
	outputs["blocks"] = blocks;
	outputs["cost"] = cost_report_to_json(record.cost);

	return json{{"inputs",
		     {{"problem", problem_to_json(record.problem)},
		      {"allocation", record.allocation},
		      {"config", config_to_json(record.config)},
		      {"seed", record.seed}}},
		    {"outputs", outputs},
		    {"timing",
		     {{"per_block_ms", record.timing.per_block_ms},
		      {"total_ms", record.timing.total_ms}}}};
}

RunRecord run_record_from_json(const json& j) {
	const json& in = j.at("inputs");
	RunRecord record;
	record.problem = problem_from_json(in.at("problem"));
	record.allocation = in.at("allocation").get<std::vector<int>>();
	record.config = config_from_json(in.at("config"));
	record.seed = in.at("seed").get<std::uint64_t>();

	const json& out = j.at("outputs");
	record.raw.phi_raw = out.at("phi_raw").get<std::string>();
	record.raw.amb_flags = out.at("amb_flags").get<std::vector<bool>>();
	for (const auto& bj : out.at("blocks")) record.raw.blocks.push_back(block_from_json(bj));
	record.resolved = resolved_from_json(out);
	record.cost = cost_report_from_json(out.at("cost"));

	const json& timing = j.at("timing");
	record.timing.per_block_ms = timing.at("per_block_ms").get<std::vector<double>>();
	record.timing.total_ms = timing.at("total_ms").get<double>();
	return record;
}

json sweep_report_to_json(const SweepReport& report) {
	json failures = json::array();
	for (const auto& f : report.failures)
		failures.push_back(json{{"p", f.p},
					{"allocation", f.allocation},
					{"diagnostic", f.diagnostic}});
	return json{{"cases_run", report.cases_run},
		    {"agreements", report.agreements},
		    {"special_flag_count", report.special_flag_count},
		    {"max_tv_distance", report.max_tv_distance},
		    {"failures", failures}};
}

std::string table_csv(const std::vector<TableRow>& rows) {
	std::ostringstream out;
	out << "trial,true_amplitude,awqae_estimate,fullqae_estimate,error_pct\n";
	char buf[128];
	for (const auto& r : rows) {
		std::snprintf(buf, sizeof(buf), "%d,%.4f,%.4f,%.4f,%.2f\n", r.trial, r.a_true,
			      r.awqae_estimate, r.fullqae_estimate, r.error_pct);
		out << buf;
	}
	return out.str();
}

json table_to_json(const std::vector<TableRow>& rows) {
	json arr = json::array();
	for (const auto& r : rows)
		arr.push_back(json{{"trial", r.trial},
				   {"true_amplitude", r.a_true},
				   {"awqae_estimate", r.awqae_estimate},
				   {"fullqae_estimate", r.fullqae_estimate},
				   {"error_pct", r.error_pct},
				   {"special", r.special}});
	return arr;
}

}  // namespace awqae
