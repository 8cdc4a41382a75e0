#include "gapforce/pipeline.hpp"

namespace gapforce {

AirGapFieldMap build_field(const RunConfig& config) {
    validate_run_config(config);
    const MachineGeometry& geom = config.geometry;

    AirGapFieldMap base;
    if (config.has_synthesis) {
        base = synthesize(config.synthesis, config.grid.time_samples, config.grid.angle_samples,
                          config.grid.slices, geom);
    } else {
        base = read_field_csv_file(config.base_dir / config.field.path);
        base.axial_spans.assign(base.slices, geom.axial_length / base.slices);
    }

    if (config.skew.style == SkewStyle::none) {
        return base;
    }
    const SliceSchedule schedule = slice_schedule(config.skew, geom);
    const ShiftPolicy policy =
        config.field.interpolate ? ShiftPolicy::interpolate : ShiftPolicy::exact_only;
    return apply_slice_shifts(base, schedule, policy);
}

TorqueRun run_torque(const RunConfig& config) {
    TorqueRun run;
    run.schedule = slice_schedule(config.skew, config.geometry);
    run.field = build_field(config);
    run.torque = torque_total(run.field, config.geometry);
    run.spectrum = spectrum_time(run.torque);
    run.metrics = ripple_metrics(run.torque.torque);
    return run;
}

ToothForceSeries run_tooth_forces(const RunConfig& config, const AirGapFieldMap& field) {
    if (config.evaluation.tooth_path == ToothPathMode::one_section) {
        return tooth_forces_one_section(field, config.geometry, config.evaluation.include_bz);
    }
    if (config.evaluation.slot_path_file.empty()) {
        throw MissingDataError(
            "three-section evaluation requires evaluation.slot_path_file; "
            "set tooth_path = one_section to evaluate without slot data");
    }
    SlotPathField paths =
        read_slot_path_csv_file(config.base_dir / config.evaluation.slot_path_file);
    paths.inner_radius = config.geometry.airgap_radius;
    paths.outer_radius = config.geometry.slot_bottom_radius;
    return tooth_forces_three_section(field, paths, config.geometry,
                                      config.evaluation.include_bz);
}

CompareRun run_compare(const RunConfig& reference, const RunConfig& variant) {
    if (reference.grid.time_samples != variant.grid.time_samples) {
        throw std::invalid_argument(
            "compare requires identical time grids so spectrum bins line up");
    }
    CompareRun run;
    run.reference = run_torque(reference);
    run.variant = run_torque(variant);
    const int orders = run.reference.spectrum.order_count();
    run.ratio.reserve(orders);
    for (int k = 0; k < orders; ++k) {
        run.ratio.push_back(suppression_ratio(run.variant.spectrum, run.reference.spectrum, k));
    }
    return run;
}

nlohmann::json conventions_json() {
    return nlohmann::json{
        {"angles", "radians"},
        {"time_grid", "one electrical period, uniform"},
        {"mu0", kMu0},
        {"force_sign", kForceSignConvention},
        {"spectrum_1d", kSpectrumTimeConvention},
        {"spectrum_2d", kSpectrum2DConvention},
    };
}

nlohmann::json geometry_json(const MachineGeometry& geom) {
    return nlohmann::json{
        {"poles", geom.pole_count},
        {"slots", geom.slot_count},
        {"airgap_radius", geom.airgap_radius},
        {"rotor_radius", geom.rotor_radius},
        {"axial_length", geom.axial_length},
        {"rotor_diameter", geom.rotor_diameter},
        {"slot_bottom_radius", geom.slot_bottom_radius},
    };
}

nlohmann::json skew_json(const SkewConfiguration& skew, const SliceSchedule& schedule) {
    nlohmann::json shifts = nlohmann::json::array();
    nlohmann::json spans = nlohmann::json::array();
    for (const SliceShift& s : schedule.slices) {
        shifts.push_back(s.shift);
        spans.push_back(s.axial_span);
    }
    return nlohmann::json{
        {"style", to_string(skew.style)},
        {"segments", skew.segment_count},
        {"theta_skew", skew.total_angle},
        {"continuous_resolution", skew.continuous_resolution},
        {"slice_shifts", shifts},
        {"slice_spans", spans},
    };
}

namespace {

nlohmann::json torque_block(const TorqueRun& run) {
    nlohmann::json orders = nlohmann::json::array();
    for (double a : run.metrics.order_amplitude) orders.push_back(a);
    return nlohmann::json{
        {"mean", run.metrics.mean},
        {"peak_to_peak", run.metrics.peak_to_peak},
        {"order_amplitudes", orders},
    };
}

}  // namespace

nlohmann::json torque_summary_json(const RunConfig& config, const TorqueRun& run) {
    return nlohmann::json{
        {"geometry", geometry_json(config.geometry)},
        {"skew", skew_json(config.skew, run.schedule)},
        {"conventions", conventions_json()},
        {"torque", torque_block(run)},
    };
}

nlohmann::json compare_summary_json(const RunConfig& reference_config,
                                    const RunConfig& variant_config, const CompareRun& run) {
    nlohmann::json ratios;
    for (std::size_t k = 0; k < run.ratio.size(); ++k) {
        const std::string key = "order" + std::to_string(k);
        if (run.ratio[k].has_value()) {
            ratios[key] = *run.ratio[k];
        } else {
            ratios[key] = nullptr;
        }
    }
    return nlohmann::json{
        {"geometry", geometry_json(reference_config.geometry)},
        {"conventions", conventions_json()},
        {"reference",
         {{"skew", skew_json(reference_config.skew, run.reference.schedule)},
          {"torque", torque_block(run.reference)}}},
        {"variant",
         {{"skew", skew_json(variant_config.skew, run.variant.schedule)},
          {"torque", torque_block(run.variant)}}},
        {"suppression_ratio", ratios},
    };
}

}  // namespace gapforce
