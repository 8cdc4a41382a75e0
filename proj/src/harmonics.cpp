#include "gapforce/harmonics.hpp"

#include <algorithm>
#include <cmath>

#include "dft.hpp"
#include "gapforce/parallel.hpp"

namespace gapforce {

namespace {

int wrap_bin(int order, int bins) {
    return ((order % bins) + bins) % bins;
}

void check_order(int order, int bins, const char* axis) {
    if (order > bins / 2 || order < -(bins / 2)) {
        throw std::out_of_range(std::string(axis) + " order " + std::to_string(order) +
                                " outside the Nyquist range of " + std::to_string(bins) +
                                " bins");
    }
}

}  // namespace

std::complex<double> Spectrum2D::at(int m, int n) const {
    check_order(m, space_bins, "spatial");
    check_order(n, time_bins, "temporal");
    return coeff[static_cast<std::size_t>(wrap_bin(m, space_bins)) * time_bins +
                 wrap_bin(n, time_bins)];
}

double Spectrum2D::pair_amplitude(int m, int n) const {
    const std::complex<double> c = at(m, n);
    const bool self_paired =
        (2 * m) % space_bins == 0 && (2 * n) % time_bins == 0;
    if (m == 0 && n == 0) return c.real();
    if (self_paired) return std::abs(c);
    return 2.0 * std::abs(c);
}

Spectrum1D spectrum_time(const std::vector<double>& series) {
    const int n = static_cast<int>(series.size());
    if (n < 4) throw std::invalid_argument("spectrum needs at least 4 samples");

    const std::vector<std::complex<double>> coeff = detail::dft_forward_real(series);
    const int half = n / 2;
    Spectrum1D spec;
    spec.amplitude.resize(half + 1);
    spec.phase.resize(half + 1);
    spec.amplitude[0] = coeff[0].real() / n;
    spec.phase[0] = 0.0;
    for (int k = 1; k <= half; ++k) {
        const bool nyquist = (n % 2 == 0) && k == half;
        spec.amplitude[k] = (nyquist ? 1.0 : 2.0) * std::abs(coeff[k]) / n;
        spec.phase[k] = std::arg(coeff[k]);
    }
    return spec;
}

Spectrum1D spectrum_time(const TorqueSeries& series) {
    return spectrum_time(series.torque);
}

double peak_to_peak(const std::vector<double>& series) {
    if (series.empty()) throw std::invalid_argument("peak_to_peak of an empty series");
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    return *hi - *lo;
}

RippleMetrics ripple_metrics(const std::vector<double>& series) {
    const Spectrum1D spec = spectrum_time(series);
    RippleMetrics metrics;
    metrics.mean = spec.amplitude[0];
    metrics.peak_to_peak = peak_to_peak(series);
    metrics.order_amplitude = spec.amplitude;
    return metrics;
}

Spectrum2D spectrum_space_time(const std::vector<double>& samples, int space_samples,
                               int time_samples) {
    if (space_samples < 1 || time_samples < 1 ||
        samples.size() != static_cast<std::size_t>(space_samples) * time_samples) {
        throw std::invalid_argument("sample matrix does not match the (space, time) shape");
    }

    Spectrum2D spec;
    spec.space_bins = space_samples;
    spec.time_bins = time_samples;
    spec.coeff.assign(samples.size(), 0.0);

    // Row-column decomposition: backward DFT along time per space row, then
    // forward DFT along space per time bin.
    std::vector<std::complex<double>> stage(samples.size());
    detail::parallel_for(space_samples, [&](std::size_t j) {
        std::vector<double> row(time_samples);
        for (int i = 0; i < time_samples; ++i) {
            row[i] = samples[j * time_samples + i];
        }
        const std::vector<std::complex<double>> out = detail::dft_backward_real(row);
        for (int i = 0; i < time_samples; ++i) stage[j * time_samples + i] = out[i];
    });
    detail::parallel_for(time_samples, [&](std::size_t i) {
        std::vector<std::complex<double>> col(space_samples);
        for (int j = 0; j < space_samples; ++j) {
            col[j] = stage[static_cast<std::size_t>(j) * time_samples + i];
        }
        const std::vector<std::complex<double>> out = detail::dft_forward(col);
        const double norm = 1.0 / (static_cast<double>(space_samples) * time_samples);
        for (int j = 0; j < space_samples; ++j) {
            spec.coeff[static_cast<std::size_t>(j) * time_samples + i] = out[j] * norm;
        }
    });
    return spec;
}

namespace {

const std::vector<double>& force_component(const ToothForcePage& page,
                                           FieldComponent component) {
    switch (component) {
        case FieldComponent::radial: return page.fr;
        case FieldComponent::tangential: return page.ft;
        case FieldComponent::axial: return page.fz;
    }
    throw std::invalid_argument("unknown force component");
}

}  // namespace

Spectrum2D spectrum_space_time(const ToothForceSeries& forces, FieldComponent component,
                               ToothSpectrumMode mode, int spatial_label_base,
                               int temporal_label_base) {
    const ToothForcePage& page = forces.total;
    const std::vector<double>& data = force_component(page, component);

    Spectrum2D spec;
    if (mode == ToothSpectrumMode::teeth_as_samples) {
        spec = spectrum_space_time(data, page.tooth_count, page.time_samples);
    } else {
        std::vector<double> mean(page.time_samples, 0.0);
        for (int k = 0; k < page.tooth_count; ++k) {
            for (int i = 0; i < page.time_samples; ++i) {
                mean[i] += data[page.index(k, i)];
            }
        }
        for (double& v : mean) v /= page.tooth_count;
        spec = spectrum_space_time(mean, 1, page.time_samples);
    }
    spec.spatial_label_base = spatial_label_base;
    spec.temporal_label_base = temporal_label_base;
    return spec;
}

Spectrum2D field_slice_spectrum(const AirGapFieldMap& field, FieldComponent component,
                                int slice) {
    ensure_valid(field);
    if (slice < 0 || slice >= field.slices) {
        throw std::out_of_range("slice index outside the field map");
    }
    const std::vector<double>& values = component == FieldComponent::radial ? field.br
                                        : component == FieldComponent::tangential
                                            ? field.btheta
                                            : field.bz;
    // Transpose (time, angle) storage into (angle, time) sample order.
    std::vector<double> samples(static_cast<std::size_t>(field.angle_samples) *
                                field.time_samples);
    for (int j = 0; j < field.angle_samples; ++j) {
        for (int i = 0; i < field.time_samples; ++i) {
            samples[static_cast<std::size_t>(j) * field.time_samples + i] =
                values[field.index(slice, i, j)];
        }
    }
    return spectrum_space_time(samples, field.angle_samples, field.time_samples);
}

std::vector<double> inverse_spectrum_2d(const Spectrum2D& spectrum) {
    const int s = spectrum.space_bins;
    const int t = spectrum.time_bins;
    if (s < 1 || t < 1 || spectrum.coeff.size() != static_cast<std::size_t>(s) * t) {
        throw std::invalid_argument("spectrum coefficient matrix has inconsistent shape");
    }
    std::vector<std::complex<double>> stage(spectrum.coeff.size());
    detail::parallel_for(t, [&](std::size_t i) {
        std::vector<std::complex<double>> col(s);
        for (int j = 0; j < s; ++j) col[j] = spectrum.coeff[static_cast<std::size_t>(j) * t + i];
        const std::vector<std::complex<double>> out = detail::dft_backward(col);
        for (int j = 0; j < s; ++j) stage[static_cast<std::size_t>(j) * t + i] = out[j];
    });
    std::vector<double> samples(spectrum.coeff.size());
    detail::parallel_for(s, [&](std::size_t j) {
        std::vector<std::complex<double>> row(t);
        for (int i = 0; i < t; ++i) row[i] = stage[j * t + i];
        const std::vector<std::complex<double>> out = detail::dft_forward(row);
        for (int i = 0; i < t; ++i) samples[j * t + i] = out[i].real();
    });
    return samples;
}

double order_amplitude(const Spectrum1D& spectrum, int order) {
    if (order < 0 || order >= spectrum.order_count()) {
        throw std::out_of_range("order " + std::to_string(order) +
                                " outside the spectrum range [0, " +
                                std::to_string(spectrum.order_count() - 1) + "]");
    }
    return spectrum.amplitude[order];
}

double order_amplitude(const Spectrum2D& spectrum, int m, int n) {
    return spectrum.pair_amplitude(m, n);
}

namespace {

constexpr double kRatioFloor = 1e-12;

std::optional<double> guarded_ratio(double skewed, double reference) {
    if (std::abs(reference) < kRatioFloor) return std::nullopt;
    return skewed / reference;
}

}  // namespace

std::optional<double> suppression_ratio(const Spectrum1D& skewed, const Spectrum1D& reference,
                                        int order) {
    if (skewed.convention != reference.convention) {
        throw std::invalid_argument("spectra use different normalization conventions");
    }
    return guarded_ratio(order_amplitude(skewed, order), order_amplitude(reference, order));
}

std::optional<double> suppression_ratio(const Spectrum2D& skewed, const Spectrum2D& reference,
                                        int m, int n) {
    if (skewed.convention != reference.convention) {
        throw std::invalid_argument("spectra use different normalization conventions");
    }
    return guarded_ratio(skewed.pair_amplitude(m, n), reference.pair_amplitude(m, n));
}

}  // namespace gapforce
