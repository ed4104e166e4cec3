#pragma once

#include <complex>
#include <functional>
#include <optional>

#include "rbmo/field.hpp"

namespace rbmo {

// F ∘ φ with φ the rotation by theta. Polygon indicators stay exact; other fields
// integrate by adaptive quadrature of the pulled-back expression.
FieldPtr compose_rotation(FieldPtr F, double theta, QuadratureOptions opt = {});
// bilinear resampling of centre values; the default window covers φ^{-1}(F.window()),
// a given target must cover the pulled-back support of F
GridSamples compose_rotation(const GridSamples& F, double theta,
                             std::optional<Rect> target = std::nullopt);

// multiplier m(ξ) applied on a grid zero-padded by `pad` (1 = the window is one period)
GridSamples apply_multiplier(const GridSamples& F,
                             const std::function<std::complex<double>(double, double)>& m,
                             int pad = 1);

// H_v: multiplier -i sgn(v·ξ)
GridSamples directional_hilbert(const GridSamples& F, Point v, int pad = 1);

// T_Ω = ½ ∫_{S^1} Ω(v) H_v dv by the midpoint rule with n nodes; Ω given as a function of the angle
GridSamples rough_operator(const GridSamples& F, const std::function<double(double)>& omega,
                           int n_theta = 256, int pad = 1);

}  // namespace rbmo
