#include "awqae/grover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace awqae {

namespace {

// Dense matrices get squared up to 2^(kMaxQubits-1); keep the base small.
constexpr int kMaxCountingQubits = 8;

}  // namespace

AmplitudeProblem AmplitudeProblem::rotation(double p) {
	if (!(p >= 0.0 && p <= 1.0))
		throw ValidationError("success probability must lie in [0, 1]");
	AmplitudeProblem prob;
	prob.form = ProblemForm::Rotation;
	prob.p = p;
	prob.n_target = 1;
	return prob;
}

AmplitudeProblem AmplitudeProblem::counting(int n_target, std::vector<std::uint64_t> marked) {
	if (n_target < 1 || n_target > kMaxCountingQubits)
		throw ValidationError("counting register size must lie in [1, " +
				      std::to_string(kMaxCountingQubits) + "]");
	const std::uint64_t space = 1ull << n_target;
	std::sort(marked.begin(), marked.end());
	for (std::size_t i = 0; i < marked.size(); ++i) {
		if (marked[i] >= space) throw ValidationError("marked item out of range");
		if (i > 0 && marked[i] == marked[i - 1])
			throw ValidationError("marked item listed twice");
	}
	AmplitudeProblem prob;
	prob.form = ProblemForm::Counting;
	prob.n_target = n_target;
	prob.marked = std::move(marked);
	// exact in double arithmetic: integer divided by a power of two
	prob.p = static_cast<double>(prob.marked.size()) / static_cast<double>(space);
	return prob;
}

Mat build_state_prep(const AmplitudeProblem& problem) {
	if (problem.form == ProblemForm::Rotation) {
		const double s = std::sqrt(problem.p);
		const double c = std::sqrt(1.0 - problem.p);
		Mat a(2);
		a.at(0, 0) = c;
		a.at(0, 1) = -s;
		a.at(1, 0) = s;
		a.at(1, 1) = c;
		return a;
	}
	const std::size_t dim = std::size_t{1} << problem.n_target;
	const double amp = std::pow(2.0, -0.5 * problem.n_target);
	Mat a(dim);
	for (std::size_t r = 0; r < dim; ++r)
		for (std::size_t c = 0; c < dim; ++c)
			a.at(r, c) = (std::popcount(r & c) & 1) ? -amp : amp;
	return a;
}

std::pair<double, double> eigenphases(const AmplitudeProblem& problem) {
	const double phi_plus = std::asin(std::min(1.0, std::sqrt(problem.p))) / std::numbers::pi;
	const double phi_minus = phi_plus == 0.0 ? 0.0 : 1.0 - phi_plus;
	return {phi_plus, phi_minus};
}

GroverOperator build_grover(const AmplitudeProblem& problem, double phase_offset) {
	const std::size_t dim = std::size_t{1} << problem.n_target;
	const Mat a = build_state_prep(problem);

	Mat s0 = mat_identity(dim);
	s0.at(0, 0) = -1.0;

	Mat schi = mat_identity(dim);
	if (problem.form == ProblemForm::Rotation) {
		schi.at(1, 1) = -1.0;
	} else {
		for (std::uint64_t x : problem.marked) schi.at(x, x) = -1.0;
	}

	Mat q = mat_scale(mat_mul(mat_mul(mat_mul(a, s0), mat_adjoint(a)), schi), -1.0);
	if (phase_offset != 0.0)
		q = mat_scale(q, std::polar(1.0, 2.0 * std::numbers::pi * phase_offset));

	GroverOperator op;
	op.matrix = std::move(q);
	op.n_target = problem.n_target;
	op.theta = 2.0 * std::asin(std::min(1.0, std::sqrt(problem.p)));
	auto [pp, pm] = eigenphases(problem);
	op.phi_plus = pp;
	op.phi_minus = pm;
	op.phase_offset = phase_offset;
	op.cached_powers.emplace(1, op.matrix);
	return op;
}

namespace {

// One Newton step toward the polar factor: U <- U (3I - U'U) / 2. Bare
// repeated squaring lets the unitarity defect roughly double per level
// (measured 1.2e-12 by Q^8192), which would outgrow the 1e-10 power
// guarantee on deep towers; the step pulls each cached power back to
// machine-level defect.
Mat polish_unitary(Mat u) {
	Mat gram = mat_mul(mat_adjoint(u), u);
	Mat corr = mat_identity(u.dim);
	for (std::size_t i = 0; i < corr.a.size(); ++i)
		corr.a[i] = 1.5 * corr.a[i] - 0.5 * gram.a[i];
	return mat_mul(u, corr);
}

}  // namespace

const Mat& grover_power(GroverOperator& q, std::uint64_t exponent) {
	if (exponent == 0 || (exponent & (exponent - 1)) != 0)
		throw ContractError("grover_power: exponent must be a power of two");
	auto it = q.cached_powers.find(exponent);
	if (it != q.cached_powers.end()) return it->second;
	const Mat& half = grover_power(q, exponent / 2);
	auto [pos, inserted] =
	    q.cached_powers.emplace(exponent, polish_unitary(mat_mul(half, half)));
	(void)inserted;
	return pos->second;
}

const Mat& cached_power(const GroverOperator& q, std::uint64_t exponent) {
	auto it = q.cached_powers.find(exponent);
	if (it == q.cached_powers.end())
		throw ContractError("cached_power: power " + std::to_string(exponent) +
				    " not prepopulated");
	return it->second;
}

void prepopulate_powers(GroverOperator& q, std::uint64_t max_exponent) {
	for (std::uint64_t e = 1; e <= max_exponent && e != 0; e <<= 1) grover_power(q, e);
}

}  // namespace awqae
