#pragma once

#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace gapforce {

inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;  // H/m, fixed exactly
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file; the message carries the file name and line number.
class ParseError : public Error {
  public:
    using Error::Error;
};

/// A domain-type invariant does not hold.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Requested operation needs a grid layout the data does not have.
class GridMismatchError : public Error {
  public:
    using Error::Error;
};

/// Required input data (e.g. slot-path samples) was not supplied.
class MissingDataError : public Error {
  public:
    using Error::Error;
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    std::string joined() const;
};

struct MachineGeometry {
    int pole_count = 0;           // N_p, even
    int slot_count = 0;           // N_s
    double airgap_radius = 0.0;   // r_delta [m], evaluation surface
    double rotor_radius = 0.0;    // r_rt [m]
    double axial_length = 0.0;    // L [m]
    double rotor_diameter = 0.0;  // D [m], kept explicit alongside r_rt
    double slot_bottom_radius = 0.0;  // r_sb [m], outer end of the slot paths

    int pole_pairs() const { return pole_count / 2; }
};

ValidationReport validate_geometry(const MachineGeometry& geom);

/// Throws ValidationError listing every violated geometry invariant.
void ensure_valid(const MachineGeometry& geom);

enum class SkewStyle { none, step, vee, continuous };

std::string to_string(SkewStyle style);

struct SkewConfiguration {
    SkewStyle style = SkewStyle::none;
    int segment_count = 1;       // q
    double total_angle = 0.0;    // theta_skew [rad]
    int continuous_resolution = 32;  // staircase slices for style=continuous

    int slice_count() const {
        return style == SkewStyle::continuous ? continuous_resolution : segment_count;
    }
};

ValidationReport validate_skew(const SkewConfiguration& config);
void ensure_valid(const SkewConfiguration& config);

struct ToothWindow {
    int tooth_index = 0;
    double center_angle = 0.0;  // rad
    double width = 0.0;         // rad

    double start_angle() const { return center_angle - 0.5 * width; }
    double end_angle() const { return center_angle + 0.5 * width; }
};

/// N_s half-open windows [k*w, (k+1)*w), w = 2*pi/N_s, tiling the circle.
/// Tooth 0 is centered at pi/N_s so slot centers sit on multiples of w.
std::vector<ToothWindow> tooth_windows(const MachineGeometry& geom);

enum class FieldComponent { radial, tangential, axial };

std::string to_string(FieldComponent component);

/// One term of the analytic field series:
///   B(theta, tau) = amplitude * cos(m*theta - n*tau + phase)
/// with tau in [0, 2*pi) covering one electrical period.
struct FieldHarmonic {
    FieldComponent component = FieldComponent::radial;
    int spatial_order = 0;   // m
    int temporal_order = 0;  // n, cycles per electrical period
    double amplitude = 0.0;  // T, >= 0
    double phase = 0.0;      // rad
};

/// Sampled air-gap flux density on the cylindrical evaluation surface.
///
/// Grids are index-based and uniform by construction: theta_j = 2*pi*j/N_a,
/// tau_i = 2*pi*i/N_t over one electrical period. Arrays are indexed
/// (slice, time, angle), angle fastest.
///
/// Maps produced by synthesize() keep their harmonic table in `synthesis`
/// plus the per-slice temporal shift already applied in `slice_shifts`;
/// slice k's grid equals the table evaluated with each harmonic phase
/// advanced by -n*slice_shifts[k]. Shift operations use that provenance for
/// exact re-evaluation instead of grid interpolation.
struct AirGapFieldMap {
    int slices = 0;
    int time_samples = 0;   // N_t
    int angle_samples = 0;  // N_a
    std::vector<double> axial_spans;  // per slice [m]; empty = unassigned
    std::vector<double> br;
    std::vector<double> btheta;
    std::vector<double> bz;
    bool bz_absent = false;  // ingested without a Bz column (zero-filled)

    std::vector<FieldHarmonic> synthesis;  // empty for ingested maps
    std::vector<double> slice_shifts;      // rad, size slices when synthetic

    std::size_t index(int slice, int itime, int itheta) const {
        return (static_cast<std::size_t>(slice) * time_samples + itime) * angle_samples + itheta;
    }
    std::size_t grid_size() const {
        return static_cast<std::size_t>(slices) * time_samples * angle_samples;
    }
    bool is_synthetic() const { return !synthesis.empty(); }
    double total_span() const;
};

/// Structural invariants: slices >= 1, N_t >= 4, N_a >= 8, array shapes
/// consistent, finite values, spans (when assigned) positive.
ValidationReport validate_field_map(const AirGapFieldMap& map);
void ensure_valid(const AirGapFieldMap& map);

struct TorqueSeries {
    std::vector<double> torque;       // M_z [N*m], one electrical period
    std::vector<double> rotor_angle;  // mechanical rad, derived via pole pairs
};

enum class ToothPathMode { one_section, three_section };

std::string to_string(ToothPathMode mode);

/// Sign convention shared by all force outputs; recorded in metadata.
inline constexpr const char* kForceSignConvention =
    "positive F_r = radially outward pull on the rotor-facing stator surface";

/// Per-tooth force waveforms, arrays shaped (tooth, time), time fastest.
struct ToothForcePage {
    int tooth_count = 0;
    int time_samples = 0;
    std::vector<double> fr;
    std::vector<double> ft;
    std::vector<double> fz;

    std::size_t index(int tooth, int itime) const {
        return static_cast<std::size_t>(tooth) * time_samples + itime;
    }
};

struct ToothForceSeries {
    ToothForcePage total;                    // fixed-order sum over slices
    std::vector<ToothForcePage> per_slice;   // axial distribution, slice order
    ToothPathMode path = ToothPathMode::one_section;
    bool include_bz = false;
    std::string sign_convention = kForceSignConvention;
};

}  // namespace gapforce
