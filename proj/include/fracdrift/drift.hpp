#pragma once

#include <string>
#include <vector>

#include "fracdrift/field.hpp"

namespace fracdrift::drift {

using field::Grid;
using field::ScalarField;
using field::VectorField;

enum class DriftKind { sqg_riesz, multiplier_matrix, fv_mhd };

/// Divergence-free singular-integral drift as a Fourier multiplier family.
/// In 2-D every bounded divergence-free multiplier is a scalar symbol times
/// the rotated Riesz vector i(xi2,-xi1)/|xi|; presets select that scalar.
struct DriftSpec {
    DriftKind kind = DriftKind::sqg_riesz;
    double eta_smooth = 0.0;  // pre-compose with (-Delta)^(-eta/2)
    double eta_rough = 0.0;   // pre-compose with (-Delta)^(+eta/2)
    double mollify_eps = 0.0;
    std::string multiplier_preset = "riesz_perp";  // multiplier_matrix only

    void validate() const;
};

DriftKind drift_kind_from_string(const std::string& s);
std::string to_string(DriftKind k);

/// A_[theta] as spectral multiplication; zero mode annihilated, result
/// divergence-free by construction.
VectorField evaluate_drift(const DriftSpec& spec, const ScalarField& theta);

/// Spatial mollification A * omega_eps realized as multiplication by a
/// Gaussian-tapered bump transform exp(-(eps |xi|)^2 / 2).
VectorField mollify_drift(const VectorField& A, double eps);
ScalarField mollify_scalar(const ScalarField& f, double eps);

/// Time mollification A *_t psi_eps over a uniformly sampled snapshot series,
/// with the series zero-extended outside its time range.
std::vector<VectorField> mollify_drift_time(const std::vector<VectorField>& series,
                                            double snapshot_dt, double eps);

/// || div A ||_inf computed spectrally.
double check_divergence_free(const VectorField& A);

}  // namespace fracdrift::drift
