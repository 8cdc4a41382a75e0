#pragma once

#include <filesystem>
#include <iosfwd>

#include "gapforce/core.hpp"
#include "gapforce/harmonics.hpp"
#include "gapforce/mst.hpp"

namespace gapforce {

/// Locale-independent float formatting with 17 significant digits, enough to
/// round-trip any double exactly.
std::string format_double(double value);

// ---------------------------------------------------------------------------
// Field-map CSV: header `slice,itime,itheta,Br,Btheta,Bz`, one row per grid
// cell, dense duplicate-free index coverage. The Bz column may be absent
// (zero-filled on read, flagged bz_absent, and omitted again on write).
// UTF-8, LF line endings, '.' decimal separator. Axial spans are not part of
// the format; consumers assign them from the machine geometry.
// ---------------------------------------------------------------------------

AirGapFieldMap read_field_csv(std::istream& in, const std::string& source_name = "<stream>");
AirGapFieldMap read_field_csv_file(const std::filesystem::path& path);
void write_field_csv(const AirGapFieldMap& map, std::ostream& out);
void write_field_csv_file(const AirGapFieldMap& map, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Slot-path CSV for three-section tooth evaluation:
// header `slice,slot,itime,isample,Br,Btheta,Bz`. Radii are assigned by the
// consumer (air-gap radius to slot-bottom radius).
// ---------------------------------------------------------------------------

SlotPathField read_slot_path_csv(std::istream& in, const std::string& source_name = "<stream>");
SlotPathField read_slot_path_csv_file(const std::filesystem::path& path);
void write_slot_path_csv(const SlotPathField& paths, std::ostream& out);
void write_slot_path_csv_file(const SlotPathField& paths, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Spectrum CSV: header `m,n,amplitude,phase`. 1D spectra write m = 0 and the
// one-sided amplitudes; 2D spectra write every raw complex bin as
// magnitude/phase with signed orders.
// ---------------------------------------------------------------------------

void write_spectrum_csv(const Spectrum1D& spectrum, std::ostream& out);
void write_spectrum_csv(const Spectrum2D& spectrum, std::ostream& out);
void write_spectrum_csv_file(const Spectrum1D& spectrum, const std::filesystem::path& path);
void write_spectrum_csv_file(const Spectrum2D& spectrum, const std::filesystem::path& path);

struct SpectrumRow {
    double m = 0.0;
    double n = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
};

std::vector<SpectrumRow> read_spectrum_csv(std::istream& in,
                                           const std::string& source_name = "<stream>");
std::vector<SpectrumRow> read_spectrum_csv_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Tooth-force CSV writers.
// ---------------------------------------------------------------------------

void write_tooth_forces_csv(const ToothForceSeries& series, std::ostream& out);
void write_tooth_forces_csv_file(const ToothForceSeries& series,
                                 const std::filesystem::path& path);
void write_tooth_forces_per_slice_csv(const ToothForceSeries& series, std::ostream& out);
void write_tooth_forces_per_slice_csv_file(const ToothForceSeries& series,
                                           const std::filesystem::path& path);

void write_torque_csv(const TorqueSeries& series, std::ostream& out);
void write_torque_csv_file(const TorqueSeries& series, const std::filesystem::path& path);

/// Writes text with LF endings regardless of platform.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Run configuration: sectioned key=value text with `#` comments. Angles take
// an optional `deg`/`rad` suffix (default rad).
// ---------------------------------------------------------------------------

struct GridConfig {
    int time_samples = 256;
    int angle_samples = 240;
    int slices = 1;
};

struct FieldSourceConfig {
    std::string path;
    bool interpolate = true;
};

struct EvaluationConfig {
    bool include_bz = false;
    ToothPathMode tooth_path = ToothPathMode::one_section;
    std::string slot_path_file;
    std::string output_dir;
};

struct RunConfig {
    MachineGeometry geometry;
    SkewConfiguration skew;
    GridConfig grid;
    std::vector<FieldHarmonic> synthesis;
    bool has_synthesis = false;
    FieldSourceConfig field;
    bool has_field = false;
    EvaluationConfig evaluation;
    std::filesystem::path base_dir;  // directory of the config file, for relative paths
};

/// Parses and validates a config. `eager_files` additionally requires every
/// referenced file to exist at parse time.
RunConfig parse_config(const std::string& text, const std::string& source_name = "<config>",
                       bool eager_files = false);
RunConfig read_config_file(const std::filesystem::path& path, bool eager_files = false);

/// Applies one `section.key=value` override on top of a parsed config.
void apply_override(RunConfig& config, const std::string& dotted_key, const std::string& value);

/// Re-checks the config invariants (geometry, skew, block exclusivity);
/// throws ValidationError. Used after overrides.
void validate_run_config(const RunConfig& config);

}  // namespace gapforce
