#pragma once

#include <complex>
#include <optional>

#include "gapforce/core.hpp"

namespace gapforce {

inline constexpr const char* kSpectrumTimeConvention = "one-sided, Nyquist unhalved";
inline constexpr const char* kSpectrum2DConvention = "complex pair, wave cos(m*x - n*tau)";

/// One-sided amplitude spectrum over one period:
///   series(tau) = A_0 + sum_k A_k cos(k*tau + phase_k)  (+ Nyquist term)
/// A_0 is the signed mean; A_k = 2|c_k|/N for 0 < k < N/2; the Nyquist bin
/// (even N) keeps |c|/N unhalved. Parseval: mean(x^2) = A_0^2 +
/// sum A_k^2/2 + A_nyq^2.
struct Spectrum1D {
    std::vector<double> amplitude;
    std::vector<double> phase;
    std::string convention = kSpectrumTimeConvention;

    int order_count() const { return static_cast<int>(amplitude.size()); }
};

/// Complex 2D spectrum over (spatial order m, temporal order n):
///   c(m, n) = 1/(S*T) * sum_{j,i} x[j,i] exp(-i*m*x_j) exp(+i*n*tau_i)
/// so a traveling wave cos(m*x - n*tau) lands on the (m, n) bin. Real input
/// satisfies c(-m,-n) = conj(c(m,n)).
struct Spectrum2D {
    int space_bins = 0;
    int time_bins = 0;
    std::vector<std::complex<double>> coeff;  // (space, time) row-major, DFT bin order
    int spatial_label_base = 1;   // axis labeling: multiples of the pole count
    int temporal_label_base = 1;  // axis labeling: multiples of the slot count
    std::string convention = kSpectrum2DConvention;

    /// Signed-order lookup; throws std::out_of_range beyond the Nyquist range.
    std::complex<double> at(int m, int n) const;

    /// One-sided-pair amplitude: 2|c| with the (m,n)/(-m,-n) pair folded;
    /// self-paired bins (DC/Nyquist corners) are unhalved and DC is signed.
    double pair_amplitude(int m, int n) const;
};

struct RippleMetrics {
    double mean = 0.0;
    double peak_to_peak = 0.0;
    std::vector<double> order_amplitude;
};

/// Throws std::invalid_argument for series shorter than 4 samples.
Spectrum1D spectrum_time(const std::vector<double>& series);
Spectrum1D spectrum_time(const TorqueSeries& series);

double peak_to_peak(const std::vector<double>& series);

RippleMetrics ripple_metrics(const std::vector<double>& series);

enum class ToothSpectrumMode {
    teeth_as_samples,  // 2D FFT with teeth as the spatial sample points
    mean_of_teeth,     // FFT of the tooth-averaged series (spatial DC only)
};

/// 2D DFT of a (space, time) sample matrix, row-major, time fastest.
Spectrum2D spectrum_space_time(const std::vector<double>& samples, int space_samples,
                               int time_samples);

Spectrum2D spectrum_space_time(const ToothForceSeries& forces, FieldComponent component,
                               ToothSpectrumMode mode = ToothSpectrumMode::teeth_as_samples,
                               int spatial_label_base = 1, int temporal_label_base = 1);

/// 2D spectrum of one slice of a field map over (angle, time); recovers the
/// synthesis table of synthetic maps.
Spectrum2D field_slice_spectrum(const AirGapFieldMap& field, FieldComponent component,
                                int slice = 0);

/// Inverse of spectrum_space_time: (space, time) row-major samples.
std::vector<double> inverse_spectrum_2d(const Spectrum2D& spectrum);

/// Exact bin lookup; throws std::out_of_range outside the stored range.
double order_amplitude(const Spectrum1D& spectrum, int order);
double order_amplitude(const Spectrum2D& spectrum, int m, int n);

/// amplitude(skewed)/amplitude(reference); nullopt when the reference bin is
/// below the 1e-12 absolute floor. Throws std::invalid_argument when the two
/// spectra use different conventions.
std::optional<double> suppression_ratio(const Spectrum1D& skewed, const Spectrum1D& reference,
                                        int order);
std::optional<double> suppression_ratio(const Spectrum2D& skewed, const Spectrum2D& reference,
                                        int m, int n);

}  // namespace gapforce
