#pragma once

#include <array>
#include <optional>

#include "gapforce/core.hpp"

namespace gapforce {

/// Maxwell stress tensor in cylindrical components (r, theta, z), pascals.
/// Row-major 3x3, symmetric.
struct StressTensor3 {
    std::array<double, 9> m{};

    double& at(int row, int col) { return m[row * 3 + col]; }
    double at(int row, int col) const { return m[row * 3 + col]; }
    double trace() const { return m[0] + m[4] + m[8]; }
};

StressTensor3 stress_tensor(double br, double btheta, double bz);

/// sigma = T * n for a unit normal n (|n| = 1 within 1e-12).
std::array<double, 3> traction(const StressTensor3& tensor, const std::array<double, 3>& normal);

/// Flux density sampled along the radial slot-center paths used by the
/// three-section tooth contour. Path k runs at angle k*2*pi/N_s from
/// inner_radius (air gap) to outer_radius (slot bottom); tooth k is flanked
/// by paths k (A-B side) and k+1 (C-D side). Arrays indexed
/// (slice, slot, time, radial sample), sample fastest.
struct SlotPathField {
    int slices = 0;
    int slot_count = 0;
    int time_samples = 0;
    int radial_samples = 0;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    std::vector<double> br;
    std::vector<double> btheta;
    std::vector<double> bz;

    std::size_t index(int slice, int slot, int itime, int isample) const {
        return ((static_cast<std::size_t>(slice) * slot_count + slot) * time_samples + itime) *
                   radial_samples +
               isample;
    }
    std::size_t grid_size() const {
        return static_cast<std::size_t>(slices) * slot_count * time_samples * radial_samples;
    }
    bool empty() const { return slot_count == 0; }
};

ValidationReport validate_slot_paths(const SlotPathField& paths);

struct ForceSeries {
    std::vector<double> fr;
    std::vector<double> ft;
    std::vector<double> fz;
};

/// Torque of a single-slice map: M_z = (L_slice / mu0) * r_delta^2 *
/// integral of B_r*B_theta dtheta, rectangle rule per time step. The slice
/// span is taken from the map when assigned, else the machine length.
TorqueSeries torque_2d(const AirGapFieldMap& field, const MachineGeometry& geom);

/// Slice-wise torque sum in fixed slice order; spans must sum to L.
TorqueSeries torque_total(const AirGapFieldMap& field, const MachineGeometry& geom);

/// Integrated force components over an angular window (full circle when no
/// window is given):
///   F_r = r*L/(2*mu0) * integral (B_r^2 - B_theta^2 - [B_z^2]) dtheta
///   F_t = r*L/mu0     * integral  B_theta*B_r dtheta
///   F_z = r*L/mu0     * integral  B_z*B_r dtheta
/// include_bz toggles the B_z^2 term of F_r (commonly neglected for 2D
/// data). Multi-slice maps integrate per slice with the slice span and sum
/// in fixed order.
ForceSeries surface_force_components(const AirGapFieldMap& field, const MachineGeometry& geom,
                                     const std::optional<ToothWindow>& window,
                                     bool include_bz = false);

/// Per-tooth forces from the air-gap arc of each tooth window. Requires
/// N_a divisible by N_s so windows map to whole grid cells.
ToothForceSeries tooth_forces_one_section(const AirGapFieldMap& field,
                                          const MachineGeometry& geom, bool include_bz = false);

/// Per-tooth forces from the three-section contour: the air-gap arc plus the
/// two flanking slot paths. Normal stress on the arc and shear on the slot
/// paths feed F_r; shear on the arc and normal stress on the slot paths feed
/// F_t; slot-path signs follow the contour orientation, so the two sides of
/// every slot cancel in the machine total. Zero slot-path data reproduces
/// tooth_forces_one_section exactly.
ToothForceSeries tooth_forces_three_section(const AirGapFieldMap& field,
                                            const SlotPathField& slot_paths,
                                            const MachineGeometry& geom, bool include_bz = false);

/// F_z = (2*M/D) * tan(theta_skew), the torque-based axial-force estimate
/// for a skewed rotor.
double axial_force_estimate(double torque, double rotor_diameter, double theta_skew);

}  // namespace gapforce
