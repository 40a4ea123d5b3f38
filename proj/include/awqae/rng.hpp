#pragma once

#include <cstdint>
#include <random>

namespace awqae {

// Deterministic random source. mt19937_64 has a standard-mandated output
// sequence, and we only consume it through the two helpers below, so a
// given seed reproduces bit-identical results on any conforming platform.
class Rng {
public:
	explicit Rng(std::uint64_t seed) : gen_(seed) {}

	// Uniform double in [0, 1) with exactly 53 random bits.
	double uniform() {
		return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
	}

	// Uniform integer in [0, n), rejection sampled to avoid modulo bias.
	std::uint64_t below(std::uint64_t n) {
		if (n <= 1) return 0;
		const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
		std::uint64_t x;
		do {
			x = gen_();
		} while (x >= limit);
		return x % n;
	}

private:
	std::mt19937_64 gen_;
};

// Stateless per-block seed derivation (splitmix64 finalizer). Block i of a
// run seeded with master gets split_seed(master, i) no matter which worker
// executes it or in what order, which is what makes parallel and sequential
// execution bit-identical.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
	std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
	z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
	z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
	return z ^ (z >> 31);
}

}  // namespace awqae
