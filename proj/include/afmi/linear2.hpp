#pragma once

// Closed-form spectral helpers for 2x2 real matrices.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace afmi {

enum class StabilityClass { StableNode, StableFocus, UnstableNode, UnstableFocus, Saddle, NonHyperbolic };

std::string_view to_string(StabilityClass c);
StabilityClass stability_class_from_string(std::string_view name);

// Eigenvalues ordered by increasing real part (then imaginary part).
using EigenPair = std::array<std::complex<double>, 2>;

template <typename Derived>
EigenPair eigenvalues2(const Eigen::MatrixBase<Derived>& J) {
    const double tr = J(0, 0) + J(1, 1);
    const double det = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0);
    // (J11 - J22)^2 + 4 J12 J21 avoids the cancellation in tr^2 - 4 det.
    const double diff = J(0, 0) - J(1, 1);
    const double disc = diff * diff + 4.0 * J(0, 1) * J(1, 0);
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        // Stable form: compute the larger-magnitude root first.
        const double q = -0.5 * (-tr + std::copysign(root, -tr));
        double l1 = q;
        double l2 = (q != 0.0) ? det / q : 0.5 * (tr - root);
        if (l1 > l2) std::swap(l1, l2);
        return {std::complex<double>(l1, 0.0), std::complex<double>(l2, 0.0)};
    }
    const double im = 0.5 * std::sqrt(-disc);
    return {std::complex<double>(0.5 * tr, -im), std::complex<double>(0.5 * tr, im)};
}

// Unit eigenvector for a real eigenvalue; picks whichever row of (J - lambda I)
// gives the better conditioned null direction.
template <typename Derived>
Eigen::Vector2d real_eigenvector2(const Eigen::MatrixBase<Derived>& J, double lambda) {
    const Eigen::Vector2d a(J(0, 1), lambda - J(0, 0));
    const Eigen::Vector2d b(lambda - J(1, 1), J(1, 0));
    Eigen::Vector2d v = (a.squaredNorm() >= b.squaredNorm()) ? a : b;
    const double n = v.norm();
    if (n == 0.0) return Eigen::Vector2d(1.0, 0.0);  // J = lambda I
    return v / n;
}

// Classification in the trace-determinant plane. trace and det are expected
// to be normalised by the largest Jacobian entry (and its square) so that the
// NonHyperbolic band is scale free.
inline StabilityClass classify_trace_det(double trace, double det, double band = 1e-9) {
    if (det < -band) return StabilityClass::Saddle;
    if (std::abs(det) <= band || std::abs(trace) <= band) return StabilityClass::NonHyperbolic;
    const double disc = trace * trace - 4.0 * det;
    if (trace < 0) return disc < 0 ? StabilityClass::StableFocus : StabilityClass::StableNode;
    return disc < 0 ? StabilityClass::UnstableFocus : StabilityClass::UnstableNode;
}

template <typename Derived>
StabilityClass classify_jacobian(const Eigen::MatrixBase<Derived>& J, double band = 1e-9) {
    const double scale = std::max(J.cwiseAbs().maxCoeff(), 1e-300);
    const double tr = (J(0, 0) + J(1, 1)) / scale;
    const double det = (J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0)) / (scale * scale);
    return classify_trace_det(tr, det, band);
}

}  // namespace afmi
