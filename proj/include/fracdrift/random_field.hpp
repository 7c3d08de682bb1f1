#pragma once

#include <cstdint>

#include "fracdrift/field.hpp"

namespace fracdrift::field {

/// Band-limited Gaussian field driven by a counter-based generator: each
/// canonical wavenumber draws from its own stream, so the realization of a
/// shared mode is identical across resolutions and thread counts.
/// Mode amplitudes follow |k|^(-spectral_slope) up to kmax; the result is
/// rescaled so its sup-norm equals target_sup (skipped when target_sup <= 0).
ScalarField make_bandlimited_gaussian(const Grid& g, std::uint64_t seed, int kmax,
                                      double spectral_slope, double target_sup);

}  // namespace fracdrift::field
