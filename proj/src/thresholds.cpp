#include "xtel/thresholds.hpp"

#include <cmath>

namespace xtel {

const char* to_string(QuantumFlag f) {
    switch (f) {
    case QuantumFlag::no:       return "false";
    case QuantumFlag::yes:      return "true";
    case QuantumFlag::boundary: return "boundary";
    }
    return "?";
}

double threshold_c_x(const XState& x) {
    const double d = std::sqrt(x.r22) - std::sqrt(x.r33);
    return d * d;
}

double threshold_c_x_use(const XState& x) {
    use_ratio(x);
    return threshold_c_x(x) +
           (std::sqrt(x.r44 / x.r11) - 1.0) * (x.r22 + x.r33);
}

double threshold_c_x_use_0(const XState& x) {
    use_ratio(x);
    const double d = std::sqrt(x.r11 * x.r22) - std::sqrt(x.r33 * x.r44);
    return d * d / std::sqrt(x.r11 * x.r44);
}

namespace {

QuantumFlag classify(double c14, double threshold) {
    if (std::abs(c14 - threshold) <= kThresholdGuard)
        return QuantumFlag::boundary;
    return c14 > threshold ? QuantumFlag::yes : QuantumFlag::no;
}

} // namespace

ThresholdReport compute_thresholds(const XState& x) {
    ThresholdReport report;
    report.c14 = x_concurrence(x).c14;
    report.c_x_th = threshold_c_x(x);
    report.c_x_use_th = threshold_c_x_use(x);
    report.c_x_use_0_th = threshold_c_x_use_0(x);
    report.quantum_plain = classify(report.c14, report.c_x_th);
    report.quantum_use_total = classify(report.c14, report.c_x_use_th);
    report.quantum_use_filtered = classify(report.c14, report.c_x_use_0_th);
    return report;
}

bool threshold_inversion_region(const XState& x) {
    use_ratio(x);
    return x.r33 < x.r22 * std::sqrt(x.r11 / x.r44);
}

} // namespace xtel
