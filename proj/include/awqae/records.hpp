#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "awqae/engine.hpp"
#include "awqae/harness.hpp"
#include "awqae/postprocess.hpp"

namespace awqae {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

struct RunTiming {
	std::vector<double> per_block_ms;
	double total_ms = 0.0;
};

// Everything needed to archive or replay one estimation run. Serializes
// to JSON with full double precision; from_json(to_json(r)) is lossless.
struct RunRecord {
	// inputs
	AmplitudeProblem problem;
	std::vector<int> allocation;
	BlockConfig config;
	std::uint64_t seed = 0;
	// outputs
	RawEstimate raw;
	ResolvedEstimate resolved;
	CostReport cost;
	// timing
	RunTiming timing;
};

nlohmann::json run_record_to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

nlohmann::json sweep_report_to_json(const SweepReport& report);
nlohmann::json cost_report_to_json(const CostReport& report);

// trial,true_amplitude,awqae_estimate,fullqae_estimate,error_pct
std::string table_csv(const std::vector<TableRow>& rows);
nlohmann::json table_to_json(const std::vector<TableRow>& rows);

}  // namespace awqae
