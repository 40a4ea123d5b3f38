#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace awqae {

using ComplexAmplitude = std::complex<double>;

// Hard precision cap shared by the simulator and the estimation pipeline.
// Dense amplitude vectors and dyadic phase arithmetic stay exact below this.
inline constexpr int kMaxQubits = 24;

// Base class for recoverable runtime failures (exit code 2 in the CLI).
class Error : public std::runtime_error {
public:
	explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested state or power budget exceeds what the backend supports.
class CapacityError : public Error {
public:
	explicit CapacityError(const std::string& msg) : Error(msg) {}
};

// Malformed input: non-unitary gate, bad probability, bad bit allocation.
// The CLI maps this to a usage error (exit code 1).
class ValidationError : public Error {
public:
	explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Post-selection kept no statistics even after retrying the flipped
// ancilla value. Surfaced to callers rather than silently guessing.
class EmptyConditioningError : public Error {
public:
	explicit EmptyConditioningError(const std::string& msg) : Error(msg) {}
};

// Caller broke a documented precondition (programming error, not input).
class ContractError : public std::logic_error {
public:
	explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

// Measurement tally. counts maps outcome -> multiplicity and carries only
// the shots that survived any post-selection; the rest are accounted for
// in total_discarded so that kept + discarded always equals shots taken.
struct Histogram {
	std::map<std::uint64_t, std::uint64_t> counts;
	std::uint64_t total_kept = 0;
	std::uint64_t total_discarded = 0;
};

}  // namespace awqae
