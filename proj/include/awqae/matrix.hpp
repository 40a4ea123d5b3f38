#pragma once

#include <cstddef>
#include <vector>

#include "awqae/types.hpp"

namespace awqae {

// Small dense square matrix, row major. Used for gate unitaries only; the
// dimension never exceeds the target-register size (at most a few hundred).
struct Mat {
	std::size_t dim = 0;
	std::vector<ComplexAmplitude> a;

	Mat() = default;
	explicit Mat(std::size_t d) : dim(d), a(d * d) {}

	ComplexAmplitude& at(std::size_t r, std::size_t c) { return a[r * dim + c]; }
	const ComplexAmplitude& at(std::size_t r, std::size_t c) const { return a[r * dim + c]; }
};

Mat mat_identity(std::size_t dim);
Mat mat_mul(const Mat& x, const Mat& y);
Mat mat_adjoint(const Mat& x);
Mat mat_scale(const Mat& x, ComplexAmplitude s);

// max_ij |X_ij - Y_ij|
double mat_max_diff(const Mat& x, const Mat& y);

// ||U U^dag - I||_max <= tol
bool mat_is_unitary(const Mat& u, double tol);

}  // namespace awqae
