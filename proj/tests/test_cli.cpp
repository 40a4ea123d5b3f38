#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef AWQAE_CLI_PATH
#error "AWQAE_CLI_PATH must point at the command line binary"
#endif

namespace {

struct CliResult {
	int code = -1;
	std::string output;
};

CliResult run_cli(const std::string& args) {
	const std::string cmd = std::string("\"") + AWQAE_CLI_PATH + "\" " + args + " 2>&1";
	FILE* pipe = popen(cmd.c_str(), "r");
	REQUIRE(pipe != nullptr);
	CliResult res;
	char buf[4096];
	std::size_t n = 0;
	while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) res.output.append(buf, n);
	const int rc = pclose(pipe);
	res.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
	return res;
}

bool contains(const std::string& haystack, const std::string& needle) {
	return haystack.find(needle) != std::string::npos;
}

// wall times vary between runs; everything else must not
std::string drop_timing_lines(const std::string& text) {
	std::istringstream in(text);
	std::string line;
	std::string out;
	while (std::getline(in, line))
		if (line.rfind("total wall ms:", 0) != 0) out += line + "\n";
	return out;
}

}  // namespace

TEST_CASE("estimate prints the balanced amplitude at full precision") {
	const CliResult res = run_cli("estimate --p 0.5 --allocation 2,2 --mode exact");
	CHECK(res.code == 0);
	CHECK(contains(res.output, "a_tilde:      0.7071067811865476"));
	CHECK(contains(res.output, "p_tilde:      0.5"));
	CHECK(contains(res.output, "phi_est_bits: 0100"));
	CHECK(contains(res.output, "special:      no"));
}

TEST_CASE("estimate reads an exact rational phase") {
	const CliResult res = run_cli("estimate --phi 411/1024 --allocation 3,3,4 --mode exact");
	CHECK(res.code == 0);
	CHECK(contains(res.output, "a_tilde:      0.9523750127197659"));
	CHECK(contains(res.output, "phi_est:      0.4013671875"));
}

TEST_CASE("estimate is deterministic under a fixed seed") {
	const std::string args = "estimate --p 0.37 --allocation 3,3 --seed 42 --shots 512";
	const CliResult a = run_cli(args);
	const CliResult b = run_cli(args);
	CHECK(a.code == 0);
	CHECK(drop_timing_lines(a.output) == drop_timing_lines(b.output));
}

TEST_CASE("estimate emits machine-readable JSON") {
	const CliResult res =
		run_cli("estimate --p 0.5 --allocation 2,2 --mode exact --format json");
	CHECK(res.code == 0);
	const nlohmann::json j = nlohmann::json::parse(res.output);
	CHECK(j.at("inputs").at("config").at("mode") == "exact");
	CHECK(j.at("outputs").at("a_tilde").get<double>() == 0.7071067811865476);
	CHECK(j.at("outputs").at("phi_est_bits") == "0100");
	CHECK(j.at("outputs").at("cost").at("counting_total") == 15);
}

TEST_CASE("estimate mirrors the document into --out") {
	const std::filesystem::path path = "cli_out_check.json";
	const CliResult res = run_cli(
		"estimate --p 0.25 --allocation 2,2 --mode exact --format json --out " +
		path.string());
	CHECK(res.code == 0);
	std::ifstream f(path);
	REQUIRE(f.good());
	std::stringstream file_content;
	file_content << f.rdbuf();
	CHECK(file_content.str() == res.output);
	f.close();
	std::filesystem::remove(path);
}

TEST_CASE("invalid problems exit with code 1") {
	CHECK(run_cli("estimate --p 1.5 --allocation 2,2").code == 1);
	CHECK(run_cli("estimate --allocation 2,2").code == 1);
	CHECK(run_cli("estimate --p 0.5 --a 0.7").code == 1);
	CHECK(run_cli("estimate --phi 0.7 --allocation 2,2").code == 1);
	CHECK(run_cli("estimate --p 0.5 --mode fuzzy").code == 1);
	CHECK(run_cli("cost --allocation 1,9").code == 1);
	CHECK(run_cli("estimate --p 0.5 --marked 1,2").code == 1);
}

TEST_CASE("unknown flags exit nonzero") {
	CHECK(run_cli("estimate --p 0.5 --frobnicate").code != 0);
	CHECK(run_cli("").code != 0);  // a subcommand is required
}

TEST_CASE("an impossible circuit width exits with code 2") {
	const CliResult res =
		run_cli("estimate --p 0.5 --allocation 11,11 --mstart 12 --mode sampled --shots 1");
	CHECK(res.code == 2);
	CHECK(contains(res.output, "error"));
}

TEST_CASE("help exits cleanly") {
	CHECK(run_cli("--help").code == 0);
	CHECK(run_cli("estimate --help").code == 0);
}

TEST_CASE("the stock table renders as CSV with zero error") {
	const CliResult res = run_cli("table --format csv");
	CHECK(res.code == 0);
	std::istringstream lines(res.output);
	std::string line;
	REQUIRE(std::getline(lines, line));
	CHECK(line == "trial,true_amplitude,awqae_estimate,fullqae_estimate,error_pct");
	int rows = 0;
	while (std::getline(lines, line)) {
		if (line.empty()) continue;
		++rows;
		CHECK(line.substr(line.size() - 5) == ",0.00");
	}
	CHECK(rows == 10);
}

TEST_CASE("counting instances report the marked-count estimate") {
	const CliResult res = run_cli("count --ntarget 4 --marked 1,2,3");
	CHECK(res.code == 0);
	CHECK(contains(res.output, "search space N = 16, marked M = 3"));
	CHECK(contains(res.output, "estimated count M_hat = 3"));
	CHECK(run_cli("count --allocation 3,3,4").code == 1);  // needs --ntarget
	CHECK(run_cli("count --ntarget 7 --marked 1").code == 1);
}

TEST_CASE("cost reports the telescoped totals") {
	const CliResult res = run_cli("cost --allocation 3,3,4");
	CHECK(res.code == 0);
	CHECK(contains(res.output, "counting total: 1023 (baseline single circuit: 1023)"));
	CHECK(contains(res.output, "max power applied: 512"));

	const CliResult json_res = run_cli("cost --allocation 3,3,4 --format json");
	CHECK(json_res.code == 0);
	const nlohmann::json j = nlohmann::json::parse(json_res.output);
	CHECK(j.at("counting_total") == 1023);
	CHECK(j.at("baseline").at("counting_applications") == 1023);
}

TEST_CASE("compare runs both estimators on one instance") {
	const CliResult res = run_cli("compare --phi 411/1024 --mode exact");
	CHECK(res.code == 0);
	CHECK(contains(res.output, "windowed estimate: a_tilde = 0.9523750127197659"));
	CHECK(contains(res.output, "baseline estimate: a_tilde = 0.9523750127197659"));
	CHECK(contains(res.output, "relative error vs baseline: 0.00%"));

	CHECK(run_cli("compare --phi 411/1024 --fullbits 8").code == 1);
}

TEST_CASE("the grid sweep subcommand summarizes its buckets") {
	const CliResult res = run_cli("sweep --n 4 --allocations 2,2");
	CHECK(res.code == 0);
	CHECK(contains(res.output, "grid sweep n=4: 5/7 recovered, 2 special, 0 failures"));

	const CliResult rec =
		run_cli("sweep --recovery 5 --allocation 2,2 --shots 512 --seed 11");
	CHECK(rec.code == 0);
	CHECK(contains(rec.output, "sampled recovery: "));
}
