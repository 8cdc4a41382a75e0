#pragma once

#include <string>
#include <vector>

#include "gapforce/core.hpp"

namespace gapforce {

/// Exact signed rational, normalized with positive denominator.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_integer() const { return den == 1; }
    std::string str() const;

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
};

struct HarmonicOrder {
    int generator = 0;  // g
    Rational order;     // nu = 1 +/- g * N_s / N_p
};

struct HarmonicOrderSet {
    int pole_count = 0;
    int slot_count = 0;
    std::vector<HarmonicOrder> orders;  // g=0 first, then -,+ pair per g
};

struct SliceShift {
    int slice_index = 0;
    double shift = 0.0;       // rad, temporal shift applied to the slice
    double axial_span = 0.0;  // m
};

/// Shift schedule for one skewing style. Shifts are centered (zero mean) so
/// the skewed fundamental stays phase-aligned with the unskewed reference.
struct SliceSchedule {
    SkewStyle style = SkewStyle::none;
    std::vector<SliceShift> slices;

    int slice_count() const { return static_cast<int>(slices.size()); }
    double total_span() const;
};

/// 2*pi / lcm(N_p, N_s), the angle that cancels the first slot-harmonic order.
double optimal_skew_angle(int pole_count, int slot_count);

/// sin(theta*nu/2) / (theta*nu/2); 1 at theta*nu = 0.
double skew_factor(double theta, double nu);

/// Magnitude of the mean phasor over the q centered step shifts,
/// |1/q * sum_k exp(i*nu*shift_k)|. Converges to skew_factor for q -> inf.
double discrete_skew_factor(double theta, int q, double nu);

/// nu = 1 +/- g*N_s/N_p for g = 0..g_max, exact rational arithmetic.
HarmonicOrderSet harmonic_orders(int pole_count, int slot_count, int g_max);

SliceSchedule slice_schedule(const SkewConfiguration& config, const MachineGeometry& geom);

/// Circumferential inclination slope r_rt * theta / L of a continuously
/// skewed magnet. Dimensionless slope, not an angle.
double continuous_inclination(const MachineGeometry& geom, double theta_skew);

}  // namespace gapforce
