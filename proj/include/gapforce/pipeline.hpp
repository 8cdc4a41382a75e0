#pragma once

#include <json.hpp>

#include "gapforce/field_synth.hpp"
#include "gapforce/harmonics.hpp"
#include "gapforce/io.hpp"
#include "gapforce/mst.hpp"
#include "gapforce/skew.hpp"

namespace gapforce {

/// Builds the evaluation-ready field map of a run: synthesize or ingest,
/// then apply the skew schedule. Ingested maps keep their slice structure
/// when the style is none; otherwise the schedule length must match.
AirGapFieldMap build_field(const RunConfig& config);

struct TorqueRun {
    SliceSchedule schedule;
    AirGapFieldMap field;
    TorqueSeries torque;
    Spectrum1D spectrum;
    RippleMetrics metrics;
};

TorqueRun run_torque(const RunConfig& config);

ToothForceSeries run_tooth_forces(const RunConfig& config, const AirGapFieldMap& field);

struct CompareRun {
    TorqueRun reference;
    TorqueRun variant;
    std::vector<std::optional<double>> ratio;  // per temporal order
};

/// Runs both configs and forms per-order variant/reference amplitude ratios.
/// The runs must share the time grid so spectra bins line up.
CompareRun run_compare(const RunConfig& reference, const RunConfig& variant);

nlohmann::json conventions_json();
nlohmann::json geometry_json(const MachineGeometry& geom);
nlohmann::json skew_json(const SkewConfiguration& skew, const SliceSchedule& schedule);
nlohmann::json torque_summary_json(const RunConfig& config, const TorqueRun& run);
nlohmann::json compare_summary_json(const RunConfig& reference_config,
                                    const RunConfig& variant_config, const CompareRun& run);

}  // namespace gapforce
