#include "gapforce/core.hpp"

#include <cmath>
#include <sstream>

namespace gapforce {

namespace {

bool nearly_equal_rel(double a, double b, double rel) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= rel * std::max(scale, 1e-300);
}

}  // namespace

std::string ValidationReport::joined() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i > 0) out << "; ";
        out << violations[i];
    }
    return out.str();
}

ValidationReport validate_geometry(const MachineGeometry& geom) {
    ValidationReport report;
    auto fail = [&report](const std::string& msg) { report.violations.push_back(msg); };

    if (geom.pole_count < 2) fail("pole count must be at least 2");
    if (geom.pole_count % 2 != 0) fail("pole count must be even");
    if (geom.slot_count < 1) fail("slot count must be at least 1");
    if (!(geom.airgap_radius > 0.0)) fail("air gap radius must be positive");
    if (!(geom.rotor_radius > 0.0)) fail("rotor radius must be positive");
    if (!(geom.axial_length > 0.0)) fail("axial length must be positive");
    if (!(geom.rotor_diameter > 0.0)) fail("rotor diameter must be positive");
    if (!(geom.slot_bottom_radius > 0.0)) fail("slot bottom radius must be positive");

    if (geom.rotor_radius > 0.0 && geom.airgap_radius > 0.0 &&
        geom.airgap_radius < geom.rotor_radius) {
        fail("air gap radius below rotor radius");
    }
    if (geom.airgap_radius > 0.0 && geom.slot_bottom_radius > 0.0 &&
        !(geom.slot_bottom_radius > geom.airgap_radius)) {
        fail("slot bottom radius must exceed air gap radius");
    }
    if (geom.rotor_diameter > 0.0 && geom.rotor_radius > 0.0 &&
        !nearly_equal_rel(geom.rotor_diameter, 2.0 * geom.rotor_radius, 1e-12)) {
        fail("rotor diameter must equal twice the rotor radius");
    }
    return report;
}

void ensure_valid(const MachineGeometry& geom) {
    const ValidationReport report = validate_geometry(geom);
    if (!report.ok()) throw ValidationError("invalid machine geometry: " + report.joined());
}

std::string to_string(SkewStyle style) {
    switch (style) {
        case SkewStyle::none: return "none";
        case SkewStyle::step: return "step";
        case SkewStyle::vee: return "vee";
        case SkewStyle::continuous: return "continuous";
    }
    return "unknown";
}

ValidationReport validate_skew(const SkewConfiguration& config) {
    ValidationReport report;
    auto fail = [&report](const std::string& msg) { report.violations.push_back(msg); };

    if (config.segment_count < 1) fail("segment count must be at least 1");
    if (!(config.total_angle >= 0.0)) fail("total skew angle must be non-negative");
    if (config.style == SkewStyle::none) {
        if (config.segment_count != 1) fail("style=none requires segment count 1");
        if (config.total_angle != 0.0) fail("style=none requires zero skew angle");
    }
    if (config.style == SkewStyle::vee && config.segment_count < 2) {
        fail("style=vee requires at least 2 segments");
    }
    if (config.continuous_resolution < 8) {
        fail("continuous resolution must be at least 8");
    }
    return report;
}

void ensure_valid(const SkewConfiguration& config) {
    const ValidationReport report = validate_skew(config);
    if (!report.ok()) throw ValidationError("invalid skew configuration: " + report.joined());
}

std::vector<ToothWindow> tooth_windows(const MachineGeometry& geom) {
    ensure_valid(geom);
    const double width = kTwoPi / geom.slot_count;
    std::vector<ToothWindow> windows;
    windows.reserve(geom.slot_count);
    for (int k = 0; k < geom.slot_count; ++k) {
        windows.push_back(ToothWindow{k, (k + 0.5) * width, width});
    }
    return windows;
}

std::string to_string(FieldComponent component) {
    switch (component) {
        case FieldComponent::radial: return "radial";
        case FieldComponent::tangential: return "tangential";
        case FieldComponent::axial: return "axial";
    }
    return "unknown";
}

std::string to_string(ToothPathMode mode) {
    return mode == ToothPathMode::one_section ? "one_section" : "three_section";
}

double AirGapFieldMap::total_span() const {
    double sum = 0.0;
    for (double span : axial_spans) sum += span;
    return sum;
}

ValidationReport validate_field_map(const AirGapFieldMap& map) {
    ValidationReport report;
    auto fail = [&report](const std::string& msg) { report.violations.push_back(msg); };

    if (map.slices < 1) fail("field map needs at least one slice");
    if (map.time_samples < 4) fail("field map needs at least 4 time samples");
    if (map.angle_samples < 8) fail("field map needs at least 8 angle samples");
    if (!report.ok()) return report;

    const std::size_t expect = map.grid_size();
    if (map.br.size() != expect || map.btheta.size() != expect || map.bz.size() != expect) {
        fail("component arrays must share the (slice, time, angle) shape");
        return report;
    }
    if (!map.axial_spans.empty()) {
        if (map.axial_spans.size() != static_cast<std::size_t>(map.slices)) {
            fail("axial span list must have one entry per slice");
        } else {
            for (double span : map.axial_spans) {
                if (!(span > 0.0)) {
                    fail("axial spans must be positive");
                    break;
                }
            }
        }
    }
    if (!map.slice_shifts.empty() &&
        map.slice_shifts.size() != static_cast<std::size_t>(map.slices)) {
        fail("slice shift list must have one entry per slice");
    }
    for (const std::vector<double>* arr : {&map.br, &map.btheta, &map.bz}) {
        for (double v : *arr) {
            if (!std::isfinite(v)) {
                fail("field values must be finite");
                return report;
            }
        }
    }
    return report;
}

void ensure_valid(const AirGapFieldMap& map) {
    const ValidationReport report = validate_field_map(map);
    if (!report.ok()) throw ValidationError("invalid field map: " + report.joined());
}

}  // namespace gapforce
