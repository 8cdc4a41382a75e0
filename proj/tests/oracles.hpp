// Independent oracles for the test suites. Everything here recomputes
// expected values through a different route than the library code under
// test: brute-force searches, long-double brute sums, closed forms, and
// traction-based contour integration.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "gapforce/core.hpp"
#include "gapforce/mst.hpp"

namespace oracles {

inline constexpr double kPi = std::numbers::pi;

// Smallest common multiple by linear search over multiples of a.
inline long long brute_lcm(long long a, long long b) {
    long long m = a;
    while (m % b != 0) m += a;
    return m;
}

// sin(x)/x in extended precision.
inline long double sinc_ld(long double x) {
    if (x == 0.0L) return 1.0L;
    return std::sin(x) / x;
}

// Mean phasor magnitude over the centered step shifts, long double.
inline long double phasor_mean_ld(long double theta, int q, long double nu) {
    std::complex<long double> sum = 0.0L;
    for (int k = 0; k < q; ++k) {
        const long double shift = (k - 0.5L * (q - 1)) * theta / q;
        sum += std::exp(std::complex<long double>(0.0L, nu * shift));
    }
    return std::abs(sum) / q;
}

// Closed-form torque of a single-harmonic pair B_r = A cos(p*theta - n*tau +
// phi_a), B_theta = C cos(p*theta - n*tau + phi_c):
//   M_z = L r^2 pi A C cos(phi_a - phi_c) / mu0.
inline double torque_closed_form(double axial_length, double radius, double amp_r, double amp_t,
                                 double phase_diff) {
    return axial_length * radius * radius * kPi * amp_r * amp_t * std::cos(phase_diff) /
           gapforce::kMu0;
}

// Single-bin 2D DFT coefficient by the naive full double sum,
// c(m, n) = 1/(S*T) sum x[j,i] exp(-i*m*x_j) exp(+i*n*tau_i).
inline std::complex<double> dft2_bin_naive(const std::vector<double>& samples, int space,
                                           int time, int m, int n) {
    std::complex<long double> acc = 0.0L;
    for (int j = 0; j < space; ++j) {
        for (int i = 0; i < time; ++i) {
            const long double arg = -2.0L * kPi * m * j / space + 2.0L * kPi * n * i / time;
            acc += static_cast<long double>(samples[static_cast<std::size_t>(j) * time + i]) *
                   std::exp(std::complex<long double>(0.0L, arg));
        }
    }
    acc /= static_cast<long double>(space) * time;
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

// Tooth-force contour integral via the traction route: sigma = T(B) * n
// summed along the air-gap arc (n = +r) and the two slot paths (+theta on
// the leading side, -theta on the trailing side), trapezoid along r.
// Returns (F_r, F_t, F_z) for one tooth, slice and time step.
inline std::array<double, 3> contour_tooth_force(const gapforce::AirGapFieldMap& field,
                                                 const gapforce::SlotPathField& paths,
                                                 const gapforce::MachineGeometry& geom,
                                                 int slice, int tooth, int itime,
                                                 bool include_bz) {
    using gapforce::stress_tensor;
    using gapforce::traction;

    const int cpt = field.angle_samples / geom.slot_count;
    const double dtheta = 2.0 * kPi / field.angle_samples;
    const double span = field.axial_spans.empty()
                            ? geom.axial_length / field.slices
                            : field.axial_spans[slice];

    auto tensor_at = [&](double br, double bt, double bz) {
        gapforce::StressTensor3 t = stress_tensor(br, bt, include_bz ? bz : 0.0);
        if (!include_bz) {
            // Keep the shear rows that Eq. 10 uses even when the B_z^2 term
            // of the diagonals is neglected.
            t.at(0, 2) = t.at(2, 0) = br * bz / gapforce::kMu0;
            t.at(1, 2) = t.at(2, 1) = bt * bz / gapforce::kMu0;
        }
        return t;
    };

    std::array<double, 3> force{0.0, 0.0, 0.0};
    for (int j = tooth * cpt; j < (tooth + 1) * cpt; ++j) {
        const std::size_t at = field.index(slice, itime, j);
        const auto t = tensor_at(field.br[at], field.btheta[at], field.bz[at]);
        const auto sigma = traction(t, {1.0, 0.0, 0.0});
        for (int c = 0; c < 3; ++c) {
            force[c] += sigma[c] * geom.airgap_radius * span * dtheta;
        }
    }

    const double dr = (paths.outer_radius - paths.inner_radius) / (paths.radial_samples - 1);
    for (int side = 0; side < 2; ++side) {
        const int slot = side == 0 ? tooth : (tooth + 1) % geom.slot_count;
        const std::array<double, 3> normal = side == 0 ? std::array<double, 3>{0.0, 1.0, 0.0}
                                                       : std::array<double, 3>{0.0, -1.0, 0.0};
        for (int p = 0; p < paths.radial_samples; ++p) {
            const double w = (p == 0 || p == paths.radial_samples - 1) ? 0.5 * dr : dr;
            const std::size_t at = paths.index(slice, slot, itime, p);
            const auto t = tensor_at(paths.br[at], paths.btheta[at], paths.bz[at]);
            const auto sigma = traction(t, normal);
            for (int c = 0; c < 3; ++c) {
                force[c] += sigma[c] * span * w;
            }
        }
    }
    return force;
}

}  // namespace oracles
