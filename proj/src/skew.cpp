#include "gapforce/skew.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

namespace gapforce {

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

std::string Rational::str() const {
    std::ostringstream out;
    out << num;
    if (den != 1) out << '/' << den;
    return out.str();
}

double optimal_skew_angle(int pole_count, int slot_count) {
    if (pole_count < 1 || slot_count < 1) {
        throw std::invalid_argument("pole and slot counts must be positive");
    }
    const long long lcm = std::lcm<long long>(pole_count, slot_count);
    return kTwoPi / static_cast<double>(lcm);
}

double skew_factor(double theta, double nu) {
    const double x = 0.5 * theta * nu;
    if (x == 0.0) return 1.0;
    return std::sin(x) / x;
}

double discrete_skew_factor(double theta, int q, double nu) {
    if (q < 1) throw std::invalid_argument("segment count must be at least 1");
    std::complex<double> sum = 0.0;
    for (int k = 0; k < q; ++k) {
        const double shift = (k - 0.5 * (q - 1)) * theta / q;
        sum += std::polar(1.0, nu * shift);
    }
    return std::abs(sum) / q;
}

HarmonicOrderSet harmonic_orders(int pole_count, int slot_count, int g_max) {
    if (pole_count < 1 || slot_count < 1) {
        throw std::invalid_argument("pole and slot counts must be positive");
    }
    if (g_max < 0) throw std::invalid_argument("g_max must be non-negative");

    HarmonicOrderSet set;
    set.pole_count = pole_count;
    set.slot_count = slot_count;
    set.orders.push_back(HarmonicOrder{0, Rational{1, 1}});
    for (int g = 1; g <= g_max; ++g) {
        const Rational step{static_cast<long long>(g) * slot_count, pole_count};
        set.orders.push_back(
            HarmonicOrder{g, Rational{step.den - step.num, step.den}});
        set.orders.push_back(
            HarmonicOrder{g, Rational{step.den + step.num, step.den}});
    }
    return set;
}

double SliceSchedule::total_span() const {
    double sum = 0.0;
    for (const SliceShift& s : slices) sum += s.axial_span;
    return sum;
}

namespace {

// Centered step staircase: shift_k = (k - (q-1)/2) * theta / q, equal spans.
std::vector<double> step_shifts(int q, double theta) {
    std::vector<double> shifts(q);
    for (int k = 0; k < q; ++k) shifts[k] = (k - 0.5 * (q - 1)) * theta / q;
    return shifts;
}

SliceSchedule make_schedule(SkewStyle style, const std::vector<double>& shifts, double length) {
    SliceSchedule schedule;
    schedule.style = style;
    const int q = static_cast<int>(shifts.size());
    schedule.slices.reserve(q);
    for (int k = 0; k < q; ++k) {
        schedule.slices.push_back(SliceShift{k, shifts[k], length / q});
    }
    return schedule;
}

}  // namespace

SliceSchedule slice_schedule(const SkewConfiguration& config, const MachineGeometry& geom) {
    {
        const ValidationReport skew = validate_skew(config);
        const ValidationReport geo = validate_geometry(geom);
        if (!skew.ok() || !geo.ok()) {
            throw std::invalid_argument("invalid slice schedule inputs: " + skew.joined() +
                                        (skew.ok() || geo.ok() ? "" : "; ") + geo.joined());
        }
    }
    const double length = geom.axial_length;

    switch (config.style) {
        case SkewStyle::none:
            return make_schedule(SkewStyle::none, {0.0}, length);
        case SkewStyle::step:
            return make_schedule(SkewStyle::step,
                                 step_shifts(config.segment_count, config.total_angle), length);
        case SkewStyle::continuous:
            // Staircase limit of step skewing at the configured resolution.
            return make_schedule(SkewStyle::continuous,
                                 step_shifts(config.continuous_resolution, config.total_angle),
                                 length);
        case SkewStyle::vee: {
            // Palindromic mirror of a half-length step schedule. For odd q the
            // raw palindrome is not zero-mean, so it is re-centered to keep the
            // schedule invariant.
            const int q = config.segment_count;
            const int half = (q + 1) / 2;
            const std::vector<double> head = step_shifts(half, config.total_angle);
            std::vector<double> shifts(q);
            for (int k = 0; k < q; ++k) {
                shifts[k] = head[std::min(k, q - 1 - k)];
            }
            double mean = 0.0;
            for (double s : shifts) mean += s;
            mean /= q;
            for (double& s : shifts) s -= mean;
            return make_schedule(SkewStyle::vee, shifts, length);
        }
    }
    throw std::invalid_argument("unknown skew style");
}

double continuous_inclination(const MachineGeometry& geom, double theta_skew) {
    if (!(geom.axial_length > 0.0)) {
        throw std::invalid_argument("axial length must be positive");
    }
    return geom.rotor_radius * theta_skew / geom.axial_length;
}

}  // namespace gapforce
