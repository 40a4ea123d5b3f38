#include "awqae/oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace awqae {

namespace detail {

double frac(double x) {
	const double f = x - std::floor(x);
	return f == 1.0 ? 0.0 : f;
}

std::vector<double> qpe_kernel(double phi, int m) {
	if (m < 1) throw ValidationError("register width must be positive");
	const std::uint64_t n = 1ull << m;
	const double inv_n = std::ldexp(1.0, -m);
	const double scale = std::ldexp(1.0, 2 * m);  // 4^m, exact
	std::vector<double> out(n, 0.0);
	for (std::uint64_t t = 0; t < n; ++t) {
		const double d = phi - static_cast<double>(t) * inv_n;
		const double delta = d - std::round(d);
		if (std::abs(delta) < 1e-14) {
			out[t] = 1.0;
			continue;
		}
		// sin^2(2^m pi delta) evaluated through the centered fraction g
		// so the numerator never loses precision to argument reduction
		double g = std::ldexp(delta, m);
		g -= std::round(g);
		const double sn = std::sin(std::numbers::pi * g);
		const double sd = std::sin(std::numbers::pi * delta);
		out[t] = (sn * sn) / (scale * sd * sd);
	}
	return out;
}

BlockDistribution block_joint_from_phases(double phi_plus, double phi_minus, int k, int m,
					  int m_start) {
	if (m < 2) throw ValidationError("block width must be at least 2");
	if (m > 12 || m_start < 1 || m_start > 12) throw ValidationError("register width too large");
	if (k < 0 || k + m > kMaxQubits) throw ValidationError("power offset out of range");

	BlockDistribution dist;
	dist.m = m;
	dist.probs.assign(std::size_t{1} << (m + 1), 0.0);
	const double branches[2] = {phi_plus, phi_minus};
	for (double phi : branches) {
		// 2^k phi is exact scaling, so the reduced phase carries no
		// rounding beyond phi itself
		const std::vector<double> f = qpe_kernel(frac(std::ldexp(phi, k)), m);
		for (int a = 0; a < 2; ++a) {
			const double w = 0.5 * resolution_weight(phi, m_start, a);
			if (w == 0.0) continue;
			for (std::uint64_t t = 0; t < f.size(); ++t)
				dist.probs[(static_cast<std::uint64_t>(a) << m) + t] += w * f[t];
		}
	}
	return dist;
}

}  // namespace detail

std::vector<double> qpe_distribution(double phi, int m) {
	if (m < 1 || m > 12)
		throw ValidationError("register width " + std::to_string(m) + " outside [1, 12]");
	return detail::qpe_kernel(phi, m);
}

double resolution_weight(double phi, int m_start, int a) {
	if (a != 0 && a != 1) throw ContractError("resolution_weight: bit must be 0 or 1");
	const std::vector<double> f = detail::qpe_kernel(phi, m_start);
	const std::uint64_t half = f.size() / 2;
	double total = 0.0;
	if (a == 0) {
		for (std::uint64_t y = 0; y < half; ++y) total += f[y];
	} else {
		for (std::uint64_t y = half; y < f.size(); ++y) total += f[y];
	}
	return total;
}

BlockDistribution block_joint_distribution(const AmplitudeProblem& problem, int k, int m,
					   int m_start) {
	auto [pp, pm] = eigenphases(problem);
	return detail::block_joint_from_phases(pp, pm, k, m, m_start);
}

}  // namespace awqae
