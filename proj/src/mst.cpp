#include "gapforce/mst.hpp"

#include <cmath>

#include "gapforce/parallel.hpp"

namespace gapforce {

StressTensor3 stress_tensor(double br, double btheta, double bz) {
    if (!std::isfinite(br) || !std::isfinite(btheta) || !std::isfinite(bz)) {
        throw std::invalid_argument("flux density components must be finite");
    }
    const double inv = 1.0 / kMu0;
    StressTensor3 t;
    t.at(0, 0) = 0.5 * inv * (br * br - btheta * btheta - bz * bz);
    t.at(1, 1) = 0.5 * inv * (btheta * btheta - br * br - bz * bz);
    t.at(2, 2) = 0.5 * inv * (bz * bz - br * br - btheta * btheta);
    t.at(0, 1) = t.at(1, 0) = inv * br * btheta;
    t.at(0, 2) = t.at(2, 0) = inv * br * bz;
    t.at(1, 2) = t.at(2, 1) = inv * btheta * bz;
    return t;
}

std::array<double, 3> traction(const StressTensor3& tensor, const std::array<double, 3>& normal) {
    const double len =
        std::sqrt(normal[0] * normal[0] + normal[1] * normal[1] + normal[2] * normal[2]);
    if (std::abs(len - 1.0) > 1e-12) {
        throw std::invalid_argument("traction requires a unit normal");
    }
    std::array<double, 3> sigma{};
    for (int row = 0; row < 3; ++row) {
        sigma[row] = tensor.at(row, 0) * normal[0] + tensor.at(row, 1) * normal[1] +
                     tensor.at(row, 2) * normal[2];
    }
    return sigma;
}

namespace {

// Slice spans used for integration weights. Falls back to an even split of
// the machine length when the map does not carry spans (plain CSV ingests).
std::vector<double> integration_spans(const AirGapFieldMap& field, const MachineGeometry& geom,
                                      bool require_full_length) {
    std::vector<double> spans = field.axial_spans;
    if (spans.empty()) {
        spans.assign(field.slices, geom.axial_length / field.slices);
    }
    if (require_full_length) {
        double total = 0.0;
        for (double s : spans) total += s;
        if (std::abs(total - geom.axial_length) > 1e-9 * geom.axial_length) {
            throw ValidationError("slice axial spans sum to " + std::to_string(total) +
                                  " m, expected the axial length " +
                                  std::to_string(geom.axial_length) + " m");
        }
    }
    return spans;
}

std::vector<double> rotor_angle_grid(int time_samples, const MachineGeometry& geom) {
    std::vector<double> grid(time_samples);
    const double mech_period = kTwoPi / geom.pole_pairs();
    for (int i = 0; i < time_samples; ++i) {
        grid[i] = mech_period * i / time_samples;
    }
    return grid;
}

void add_slice_torque(std::vector<double>& torque, const AirGapFieldMap& field, int slice,
                      double span, const MachineGeometry& geom) {
    const int nt = field.time_samples;
    const int na = field.angle_samples;
    const double dtheta = kTwoPi / na;
    const double scale = span * geom.airgap_radius * geom.airgap_radius * dtheta / kMu0;
    detail::parallel_for(nt, [&](std::size_t i) {
        const std::size_t row = field.index(slice, static_cast<int>(i), 0);
        double acc = 0.0;
        for (int j = 0; j < na; ++j) {
            acc += field.br[row + j] * field.btheta[row + j];
        }
        torque[i] += scale * acc;
    });
}

// Half-open window [start, start + width) with a small angular snap so cell
// boundaries that coincide with window edges land on one side only.
std::vector<int> window_cells(int angle_samples, const ToothWindow& window) {
    constexpr double kTol = 1e-9;
    std::vector<int> cells;
    if (window.width >= kTwoPi - kTol) {
        cells.resize(angle_samples);
        for (int j = 0; j < angle_samples; ++j) cells[j] = j;
        return cells;
    }
    const double start = window.start_angle();
    for (int j = 0; j < angle_samples; ++j) {
        const double theta = kTwoPi * j / angle_samples;
        double rel = std::fmod(theta - start, kTwoPi);
        if (rel < 0.0) rel += kTwoPi;
        if (rel >= kTwoPi - kTol) rel = 0.0;
        if (rel < window.width - kTol) cells.push_back(j);
    }
    return cells;
}

struct WindowSums {
    double fr = 0.0;
    double ft = 0.0;
    double fz = 0.0;
};

WindowSums arc_sums(const AirGapFieldMap& field, int slice, int itime, int cell_begin,
                    int cell_end, bool include_bz) {
    WindowSums sums;
    const std::size_t row = field.index(slice, itime, 0);
    for (int j = cell_begin; j < cell_end; ++j) {
        const double br = field.br[row + j];
        const double bt = field.btheta[row + j];
        const double bzv = field.bz[row + j];
        sums.fr += br * br - bt * bt - (include_bz ? bzv * bzv : 0.0);
        sums.ft += bt * br;
        sums.fz += bzv * br;
    }
    return sums;
}

}  // namespace

TorqueSeries torque_2d(const AirGapFieldMap& field, const MachineGeometry& geom) {
    ensure_valid(geom);
    ensure_valid(field);
    if (field.slices != 1) {
        throw std::invalid_argument("torque_2d expects a single-slice map; use torque_total");
    }
    const double span = field.axial_spans.empty() ? geom.axial_length : field.axial_spans[0];
    TorqueSeries series;
    series.torque.assign(field.time_samples, 0.0);
    series.rotor_angle = rotor_angle_grid(field.time_samples, geom);
    add_slice_torque(series.torque, field, 0, span, geom);
    return series;
}

TorqueSeries torque_total(const AirGapFieldMap& field, const MachineGeometry& geom) {
    ensure_valid(geom);
    ensure_valid(field);
    const std::vector<double> spans = integration_spans(field, geom, true);
    TorqueSeries series;
    series.torque.assign(field.time_samples, 0.0);
    series.rotor_angle = rotor_angle_grid(field.time_samples, geom);
    for (int s = 0; s < field.slices; ++s) {
        add_slice_torque(series.torque, field, s, spans[s], geom);
    }
    return series;
}

ForceSeries surface_force_components(const AirGapFieldMap& field, const MachineGeometry& geom,
                                     const std::optional<ToothWindow>& window, bool include_bz) {
    ensure_valid(geom);
    ensure_valid(field);
    const std::vector<double> spans = integration_spans(field, geom, true);

    std::vector<int> cells;
    if (window.has_value()) {
        cells = window_cells(field.angle_samples, *window);
    } else {
        cells.resize(field.angle_samples);
        for (int j = 0; j < field.angle_samples; ++j) cells[j] = j;
    }

    const int nt = field.time_samples;
    const double dtheta = kTwoPi / field.angle_samples;
    ForceSeries out;
    out.fr.assign(nt, 0.0);
    out.ft.assign(nt, 0.0);
    out.fz.assign(nt, 0.0);
    for (int s = 0; s < field.slices; ++s) {
        const double base = geom.airgap_radius * spans[s] * dtheta / kMu0;
        detail::parallel_for(nt, [&, s](std::size_t i) {
            const std::size_t row = field.index(s, static_cast<int>(i), 0);
            double fr = 0.0, ft = 0.0, fz = 0.0;
            for (int j : cells) {
                const double br = field.br[row + j];
                const double bt = field.btheta[row + j];
                const double bzv = field.bz[row + j];
                fr += br * br - bt * bt - (include_bz ? bzv * bzv : 0.0);
                ft += bt * br;
                fz += bzv * br;
            }
            out.fr[i] += 0.5 * base * fr;
            out.ft[i] += base * ft;
            out.fz[i] += base * fz;
        });
    }
    return out;
}

namespace {

ToothForcePage blank_page(int tooth_count, int time_samples) {
    ToothForcePage page;
    page.tooth_count = tooth_count;
    page.time_samples = time_samples;
    page.fr.assign(static_cast<std::size_t>(tooth_count) * time_samples, 0.0);
    page.ft.assign(page.fr.size(), 0.0);
    page.fz.assign(page.fr.size(), 0.0);
    return page;
}

void accumulate_page(ToothForcePage& total, const ToothForcePage& page) {
    for (std::size_t i = 0; i < total.fr.size(); ++i) {
        total.fr[i] += page.fr[i];
        total.ft[i] += page.ft[i];
        total.fz[i] += page.fz[i];
    }
}

int cells_per_tooth(const AirGapFieldMap& field, const MachineGeometry& geom) {
    if (field.angle_samples % geom.slot_count != 0) {
        throw GridMismatchError("angle sample count " + std::to_string(field.angle_samples) +
                                " is not divisible by the slot count " +
                                std::to_string(geom.slot_count));
    }
    return field.angle_samples / geom.slot_count;
}

}  // namespace

ToothForceSeries tooth_forces_one_section(const AirGapFieldMap& field,
                                          const MachineGeometry& geom, bool include_bz) {
    ensure_valid(geom);
    ensure_valid(field);
    const std::vector<double> spans = integration_spans(field, geom, true);
    const int cpt = cells_per_tooth(field, geom);
    const int ns = geom.slot_count;
    const int nt = field.time_samples;
    const double dtheta = kTwoPi / field.angle_samples;

    ToothForceSeries series;
    series.path = ToothPathMode::one_section;
    series.include_bz = include_bz;
    series.total = blank_page(ns, nt);
    series.per_slice.reserve(field.slices);

    for (int s = 0; s < field.slices; ++s) {
        ToothForcePage page = blank_page(ns, nt);
        const double base = geom.airgap_radius * spans[s] * dtheta / kMu0;
        detail::parallel_for(ns, [&, s](std::size_t tooth) {
            const int k = static_cast<int>(tooth);
            for (int i = 0; i < nt; ++i) {
                const WindowSums sums =
                    arc_sums(field, s, i, k * cpt, (k + 1) * cpt, include_bz);
                const std::size_t at = page.index(k, i);
                page.fr[at] = 0.5 * base * sums.fr;
                page.ft[at] = base * sums.ft;
                page.fz[at] = base * sums.fz;
            }
        });
        accumulate_page(series.total, page);
        series.per_slice.push_back(std::move(page));
    }
    return series;
}

ValidationReport validate_slot_paths(const SlotPathField& paths) {
    ValidationReport report;
    auto fail = [&report](const std::string& msg) { report.violations.push_back(msg); };

    if (paths.slices < 1) fail("slot paths need at least one slice");
    if (paths.slot_count < 1) fail("slot paths need at least one slot");
    if (paths.time_samples < 1) fail("slot paths need time samples");
    if (paths.radial_samples < 2) fail("slot paths need at least 2 radial samples");
    if (!(paths.inner_radius > 0.0) || !(paths.outer_radius > paths.inner_radius)) {
        fail("slot path radii must satisfy 0 < inner < outer");
    }
    if (!report.ok()) return report;

    const std::size_t expect = paths.grid_size();
    if (paths.br.size() != expect || paths.btheta.size() != expect ||
        paths.bz.size() != expect) {
        fail("slot path arrays must share the (slice, slot, time, sample) shape");
        return report;
    }
    for (const std::vector<double>* arr : {&paths.br, &paths.btheta, &paths.bz}) {
        for (double v : *arr) {
            if (!std::isfinite(v)) {
                fail("slot path values must be finite");
                return report;
            }
        }
    }
    return report;
}

ToothForceSeries tooth_forces_three_section(const AirGapFieldMap& field,
                                            const SlotPathField& slot_paths,
                                            const MachineGeometry& geom, bool include_bz) {
    ensure_valid(geom);
    ensure_valid(field);
    if (slot_paths.empty()) {
        throw MissingDataError(
            "three-section evaluation requires slot-path data; none was provided "
            "(use the one-section path if slot fields are unavailable)");
    }
    {
        const ValidationReport report = validate_slot_paths(slot_paths);
        if (!report.ok()) throw ValidationError("invalid slot paths: " + report.joined());
    }
    if (slot_paths.slot_count != geom.slot_count || slot_paths.slices != field.slices ||
        slot_paths.time_samples != field.time_samples) {
        throw GridMismatchError("slot-path layout (" + std::to_string(slot_paths.slices) + ", " +
                                std::to_string(slot_paths.slot_count) + ", " +
                                std::to_string(slot_paths.time_samples) +
                                ") does not match the field map and geometry");
    }

    const std::vector<double> spans = integration_spans(field, geom, true);
    const int cpt = cells_per_tooth(field, geom);
    const int ns = geom.slot_count;
    const int nt = field.time_samples;
    const double dtheta = kTwoPi / field.angle_samples;
    const double dr =
        (slot_paths.outer_radius - slot_paths.inner_radius) / (slot_paths.radial_samples - 1);

    ToothForceSeries series;
    series.path = ToothPathMode::three_section;
    series.include_bz = include_bz;
    series.total = blank_page(ns, nt);
    series.per_slice.reserve(field.slices);

    // Trapezoid integrals of the stress entries along slot path `slot`:
    // T_rtheta feeds F_r, T_thetatheta feeds F_t, T_ztheta feeds F_z.
    auto slot_integrals = [&](int s, int slot, int i) {
        double i_rt = 0.0, i_tt = 0.0, i_zt = 0.0;
        for (int p = 0; p < slot_paths.radial_samples; ++p) {
            const double w =
                (p == 0 || p == slot_paths.radial_samples - 1) ? 0.5 * dr : dr;
            const std::size_t at = slot_paths.index(s, slot, i, p);
            const double br = slot_paths.br[at];
            const double bt = slot_paths.btheta[at];
            const double bzv = slot_paths.bz[at];
            i_rt += w * br * bt;
            i_tt += w * 0.5 * (bt * bt - br * br - (include_bz ? bzv * bzv : 0.0));
            i_zt += w * bzv * bt;
        }
        return std::array<double, 3>{i_rt, i_tt, i_zt};
    };

    for (int s = 0; s < field.slices; ++s) {
        ToothForcePage page = blank_page(ns, nt);
        const double arc_base = geom.airgap_radius * spans[s] * dtheta / kMu0;
        const double slot_base = spans[s] / kMu0;
        detail::parallel_for(ns, [&, s](std::size_t tooth) {
            const int k = static_cast<int>(tooth);
            const int right = (k + 1) % ns;
            for (int i = 0; i < nt; ++i) {
                const WindowSums arc =
                    arc_sums(field, s, i, k * cpt, (k + 1) * cpt, include_bz);
                const std::array<double, 3> left = slot_integrals(s, k, i);
                const std::array<double, 3> rightp = slot_integrals(s, right, i);
                const std::size_t at = page.index(k, i);
                page.fr[at] = 0.5 * arc_base * arc.fr + slot_base * (left[0] - rightp[0]);
                page.ft[at] = arc_base * arc.ft + slot_base * (left[1] - rightp[1]);
                page.fz[at] = arc_base * arc.fz + slot_base * (left[2] - rightp[2]);
            }
        });
        accumulate_page(series.total, page);
        series.per_slice.push_back(std::move(page));
    }
    return series;
}

double axial_force_estimate(double torque, double rotor_diameter, double theta_skew) {
    if (!(rotor_diameter > 0.0)) {
        throw std::invalid_argument("rotor diameter must be positive");
    }
    if (std::abs(theta_skew) >= 0.5 * std::numbers::pi) {
        throw std::invalid_argument("skew angle must lie below pi/2 for the tangent estimate");
    }
    return (2.0 * torque / rotor_diameter) * std::tan(theta_skew);
}

}  // namespace gapforce
