#include "awqae/matrix.hpp"

#include <cmath>

namespace awqae {

Mat mat_identity(std::size_t dim) {
	Mat m(dim);
	for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
	return m;
}

Mat mat_mul(const Mat& x, const Mat& y) {
	if (x.dim != y.dim) throw ContractError("mat_mul: dimension mismatch");
	Mat out(x.dim);
	for (std::size_t r = 0; r < x.dim; ++r) {
		for (std::size_t k = 0; k < x.dim; ++k) {
			const ComplexAmplitude xv = x.at(r, k);
			if (xv == ComplexAmplitude{}) continue;
			for (std::size_t c = 0; c < x.dim; ++c) {
				out.at(r, c) += xv * y.at(k, c);
			}
		}
	}
	return out;
}

Mat mat_adjoint(const Mat& x) {
	Mat out(x.dim);
	for (std::size_t r = 0; r < x.dim; ++r)
		for (std::size_t c = 0; c < x.dim; ++c)
			out.at(r, c) = std::conj(x.at(c, r));
	return out;
}

Mat mat_scale(const Mat& x, ComplexAmplitude s) {
	Mat out = x;
	for (auto& v : out.a) v *= s;
	return out;
}

double mat_max_diff(const Mat& x, const Mat& y) {
	if (x.dim != y.dim) throw ContractError("mat_max_diff: dimension mismatch");
	double worst = 0.0;
	for (std::size_t i = 0; i < x.a.size(); ++i) {
		worst = std::max(worst, std::abs(x.a[i] - y.a[i]));
	}
	return worst;
}

bool mat_is_unitary(const Mat& u, double tol) {
	return mat_max_diff(mat_mul(u, mat_adjoint(u)), mat_identity(u.dim)) <= tol;
}

}  // namespace awqae
