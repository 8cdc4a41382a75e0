#include "gapforce/field_synth.hpp"

#include <cmath>
#include <complex>

#include "gapforce/parallel.hpp"

namespace gapforce {

namespace {

std::vector<double>& component_array(AirGapFieldMap& map, FieldComponent component) {
    switch (component) {
        case FieldComponent::radial: return map.br;
        case FieldComponent::tangential: return map.btheta;
        case FieldComponent::axial: return map.bz;
    }
    throw std::invalid_argument("unknown field component");
}

// Writes one slice of the harmonic series with the slice's temporal shift
// folded into the phase. Shared by synthesize and the exact shift path so a
// zero shift reproduces the original grid bit-for-bit.
void render_slice(AirGapFieldMap& map, int slice, double shift) {
    const int nt = map.time_samples;
    const int na = map.angle_samples;
    for (const FieldHarmonic& h : map.synthesis) {
        std::vector<double>& values = component_array(map, h.component);
        const double psi = h.phase - h.temporal_order * shift;
        for (int i = 0; i < nt; ++i) {
            const double tau = kTwoPi * i / nt;
            const std::size_t row = map.index(slice, i, 0);
            for (int j = 0; j < na; ++j) {
                const double theta = kTwoPi * j / na;
                values[row + j] +=
                    h.amplitude * std::cos(h.spatial_order * theta - h.temporal_order * tau + psi);
            }
        }
    }
}

void check_nyquist(const FieldHarmonic& h, int time_samples, int angle_samples) {
    const int need_a = 2 * std::abs(h.spatial_order) + 2;
    const int need_t = 2 * std::abs(h.temporal_order) + 2;
    if (angle_samples < need_a || time_samples < need_t) {
        throw std::invalid_argument(
            "grid (" + std::to_string(time_samples) + ", " + std::to_string(angle_samples) +
            ") below Nyquist limit for harmonic m=" + std::to_string(h.spatial_order) +
            ", n=" + std::to_string(h.temporal_order));
    }
}

}  // namespace

AirGapFieldMap synthesize(const std::vector<FieldHarmonic>& harmonics, int time_samples,
                          int angle_samples, int slices, const MachineGeometry& geom) {
    ensure_valid(geom);
    if (slices < 1) throw std::invalid_argument("slice count must be at least 1");
    if (time_samples < 4 || angle_samples < 8) {
        throw std::invalid_argument("grid must have at least 4 time and 8 angle samples");
    }
    for (const FieldHarmonic& h : harmonics) {
        if (!(h.amplitude >= 0.0)) {
            throw std::invalid_argument("harmonic amplitude must be non-negative");
        }
        check_nyquist(h, time_samples, angle_samples);
    }

    AirGapFieldMap map;
    map.slices = slices;
    map.time_samples = time_samples;
    map.angle_samples = angle_samples;
    map.axial_spans.assign(slices, geom.axial_length / slices);
    map.br.assign(map.grid_size(), 0.0);
    map.btheta.assign(map.grid_size(), 0.0);
    map.bz.assign(map.grid_size(), 0.0);
    map.synthesis = harmonics;
    map.slice_shifts.assign(slices, 0.0);

    detail::parallel_for(slices, [&](std::size_t s) {
        render_slice(map, static_cast<int>(s), 0.0);
    });
    return map;
}

AirGapFieldMap apply_slice_shifts(const AirGapFieldMap& field, const SliceSchedule& schedule,
                                  ShiftPolicy policy) {
    ensure_valid(field);
    const int out_slices = schedule.slice_count();
    if (out_slices < 1) throw std::invalid_argument("schedule has no slices");
    const bool replicate = field.slices == 1 && out_slices > 1;
    if (!replicate && field.slices != out_slices) {
        throw std::invalid_argument("schedule length " + std::to_string(out_slices) +
                                    " does not match field slice count " +
                                    std::to_string(field.slices));
    }

    AirGapFieldMap out;
    out.slices = out_slices;
    out.time_samples = field.time_samples;
    out.angle_samples = field.angle_samples;
    out.bz_absent = field.bz_absent;
    out.axial_spans.resize(out_slices);
    for (int k = 0; k < out_slices; ++k) out.axial_spans[k] = schedule.slices[k].axial_span;

    if (field.is_synthetic()) {
        out.synthesis = field.synthesis;
        out.slice_shifts.resize(out_slices);
        out.br.assign(out.grid_size(), 0.0);
        out.btheta.assign(out.grid_size(), 0.0);
        out.bz.assign(out.grid_size(), 0.0);
        for (int k = 0; k < out_slices; ++k) {
            const double base = field.slice_shifts.empty()
                                    ? 0.0
                                    : field.slice_shifts[replicate ? 0 : k];
            out.slice_shifts[k] = base + schedule.slices[k].shift;
        }
        detail::parallel_for(out_slices, [&](std::size_t k) {
            render_slice(out, static_cast<int>(k), out.slice_shifts[k]);
        });
        return out;
    }

    const int nt = field.time_samples;
    const int na = field.angle_samples;
    const double dtau = kTwoPi / nt;
    out.br.resize(out.grid_size());
    out.btheta.resize(out.grid_size());
    out.bz.resize(out.grid_size());

    detail::parallel_for(out_slices, [&](std::size_t k) {
        const int src = replicate ? 0 : static_cast<int>(k);
        const double cells = schedule.slices[k].shift / dtau;
        const double nearest = std::round(cells);
        const bool whole = std::abs(cells - nearest) <= 1e-9;
        if (!whole && policy == ShiftPolicy::exact_only) {
            throw GridMismatchError(
                "slice shift " + std::to_string(schedule.slices[k].shift) +
                " rad is not a whole number of time cells and interpolation is disabled");
        }
        for (int i = 0; i < nt; ++i) {
            const std::size_t dst_row = out.index(static_cast<int>(k), i, 0);
            if (whole) {
                const long long base = i + static_cast<long long>(nearest);
                const int si = static_cast<int>(((base % nt) + nt) % nt);
                const std::size_t src_row = field.index(src, si, 0);
                for (int j = 0; j < na; ++j) {
                    out.br[dst_row + j] = field.br[src_row + j];
                    out.btheta[dst_row + j] = field.btheta[src_row + j];
                    out.bz[dst_row + j] = field.bz[src_row + j];
                }
            } else {
                const double pos = i + cells;
                const double lo = std::floor(pos);
                const double frac = pos - lo;
                const long long l = static_cast<long long>(lo);
                const int i0 = static_cast<int>(((l % nt) + nt) % nt);
                const int i1 = (i0 + 1) % nt;
                const std::size_t row0 = field.index(src, i0, 0);
                const std::size_t row1 = field.index(src, i1, 0);
                for (int j = 0; j < na; ++j) {
                    out.br[dst_row + j] =
                        (1.0 - frac) * field.br[row0 + j] + frac * field.br[row1 + j];
                    out.btheta[dst_row + j] =
                        (1.0 - frac) * field.btheta[row0 + j] + frac * field.btheta[row1 + j];
                    out.bz[dst_row + j] =
                        (1.0 - frac) * field.bz[row0 + j] + frac * field.bz[row1 + j];
                }
            }
        }
    });
    return out;
}

AirGapFieldMap collapse_slices(const AirGapFieldMap& field, CollapseMode mode) {
    ensure_valid(field);
    if (mode == CollapseMode::concatenate || field.slices == 1) {
        return field;
    }
    if (field.axial_spans.empty()) {
        throw std::invalid_argument("cannot average a field map without axial spans");
    }

    AirGapFieldMap out;
    out.slices = 1;
    out.time_samples = field.time_samples;
    out.angle_samples = field.angle_samples;
    out.bz_absent = field.bz_absent;
    const double total = field.total_span();
    out.axial_spans = {total};

    const std::size_t page = static_cast<std::size_t>(field.time_samples) * field.angle_samples;
    out.br.assign(page, 0.0);
    out.btheta.assign(page, 0.0);
    out.bz.assign(page, 0.0);
    for (int s = 0; s < field.slices; ++s) {
        const double span = field.axial_spans[s];
        const std::size_t base = field.index(s, 0, 0);
        for (std::size_t p = 0; p < page; ++p) {
            out.br[p] += span * field.br[base + p];
            out.btheta[p] += span * field.btheta[base + p];
            out.bz[p] += span * field.bz[base + p];
        }
    }
    for (std::size_t p = 0; p < page; ++p) {
        out.br[p] /= total;
        out.btheta[p] /= total;
        out.bz[p] /= total;
    }

    // The weighted slice mean acts on each harmonic as a complex phasor mean,
    // so the provenance stays exact: amplitude scales by |P|, phase by arg(P).
    if (field.is_synthetic()) {
        out.synthesis.reserve(field.synthesis.size());
        for (const FieldHarmonic& h : field.synthesis) {
            std::complex<double> phasor = 0.0;
            for (int s = 0; s < field.slices; ++s) {
                const double shift = field.slice_shifts.empty() ? 0.0 : field.slice_shifts[s];
                phasor += (field.axial_spans[s] / total) *
                          std::polar(1.0, -static_cast<double>(h.temporal_order) * shift);
            }
            FieldHarmonic folded = h;
            folded.amplitude = h.amplitude * std::abs(phasor);
            folded.phase = h.phase + std::arg(phasor);
            out.synthesis.push_back(folded);
        }
        out.slice_shifts = {0.0};
    }
    return out;
}

}  // namespace gapforce
