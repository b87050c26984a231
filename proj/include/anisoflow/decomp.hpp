#pragma once

#include <cmath>
#include <stdexcept>

#include "anisoflow/image.hpp"

namespace aniso {

/// Symmetric positive definite 2x2 covariance (pixels^2).
struct Covariance2 {
    double c11, c12, c22;
};

enum class Axis { X1, X2 };

/// Everything the two-pass filter needs: which grid axis carries the first
/// filter, the two standard deviations, the off-grid line angle phi and the
/// shear factor mu (axis-offset in pixels per unit step along the other axis).
struct DecompPlan {
    Axis axis;
    double sigma_axis;
    double sigma_line;
    double phi;  // degrees in (0, 180]
    double mu;
};

/// C = R diag(sigma1^2, sigma2^2) R^T for the rotation by theta.
inline Covariance2 covariance_of(const AnisoKernelSpec& spec) {
    spec.validate();
    const double th = deg2rad(spec.theta);
    const double c = std::cos(th), s = std::sin(th);
    const double v1 = spec.sigma1 * spec.sigma1, v2 = spec.sigma2 * spec.sigma2;
    return {v1 * c * c + v2 * s * s, (v1 - v2) * c * s, v1 * s * s + v2 * c * c};
}

/// Decomposition with the first filter along the x1-axis.
/// sigma_axis = sigma1*sigma2/sqrt(c22) (covariance-consistent), phi from
/// atan2(c22, c12), sigma_line = sqrt(c22)/sin(phi), mu = c12/c22.
/// as_printed reproduces the published sigma_x formula for comparison only.
inline DecompPlan plan_x1(const AnisoKernelSpec& spec, bool as_printed = false) {
    const Covariance2 cov = covariance_of(spec);
    DecompPlan p{};
    p.axis = Axis::X1;
    const double phi = std::atan2(cov.c22, cov.c12);  // in (0, pi) since c22 > 0
    p.phi = rad2deg(phi);
    p.mu = cov.c12 / cov.c22;
    p.sigma_line = std::sqrt(cov.c22) / std::sin(phi);
    p.sigma_axis = as_printed ? spec.sigma1 * spec.sigma2 / std::sqrt(cov.c11)
                              : spec.sigma1 * spec.sigma2 / std::sqrt(cov.c22);
    return p;
}

/// Mirror of plan_x1 with the coordinate roles swapped: plan for the
/// transposed spec (theta' = 90 - theta), relabeled to axis X2.
inline DecompPlan plan_x2(const AnisoKernelSpec& spec, bool as_printed = false) {
    AnisoKernelSpec t = spec;
    t.theta = 90.0 - spec.theta;
    DecompPlan p = plan_x1(t, as_printed);
    p.axis = Axis::X2;
    return p;
}

/// With the major-axis modification, use the x2-aligned decomposition for
/// theta mod 180 in [45, 135].
inline DecompPlan plan_auto(const AnisoKernelSpec& spec, bool modification,
                            bool as_printed = false) {
    if (modification) {
        const double t = fold180(spec.theta);
        if (t >= 45.0 && t <= 135.0) return plan_x2(spec, as_printed);
    }
    return plan_x1(spec, as_printed);
}

} // namespace aniso
