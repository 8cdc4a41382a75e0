#pragma once

#include "gapforce/core.hpp"
#include "gapforce/skew.hpp"

namespace gapforce {

/// How apply_slice_shifts treats shifts that are not whole grid cells on
/// ingested (non-synthetic) maps.
enum class ShiftPolicy { interpolate, exact_only };

enum class CollapseMode { concatenate, average };

/// Evaluates the harmonic table on a (slices, N_t, N_a) grid; all slices are
/// identical until a schedule is applied. Slices get equal spans L/slices.
/// Throws std::invalid_argument when the grid is below the Nyquist limit
/// (N_a >= 2|m|+2, N_t >= 2|n|+2) of any requested harmonic.
AirGapFieldMap synthesize(const std::vector<FieldHarmonic>& harmonics, int time_samples,
                          int angle_samples, int slices, const MachineGeometry& geom);

/// Slice k of the result is the source field with the rotor advanced by
/// schedule shift_k, i.e. evaluated at time argument tau + shift_k. A
/// harmonic (m, n) therefore picks up the phase offset -n*shift_k; this is
/// what makes a step schedule scale every torque spectrum bin n by
/// discrete_skew_factor(theta, q, n).
///
/// Synthetic maps are re-evaluated exactly from their harmonic table.
/// Ingested maps are rolled circularly along the time axis; fractional-cell
/// shifts use linear interpolation, or raise GridMismatchError under
/// ShiftPolicy::exact_only.
///
/// The source must have either one slice (replicated across the schedule) or
/// exactly one slice per schedule entry.
AirGapFieldMap apply_slice_shifts(const AirGapFieldMap& field, const SliceSchedule& schedule,
                                  ShiftPolicy policy = ShiftPolicy::interpolate);

/// concatenate keeps the slice structure; average produces a single-slice
/// length-weighted mean field. Averaging fields is only a quick 2D-style
/// estimate: force is quadratic in B, so slice-wise force summation (the mst
/// module) is the faithful multi-slice path.
AirGapFieldMap collapse_slices(const AirGapFieldMap& field, CollapseMode mode);

}  // namespace gapforce
