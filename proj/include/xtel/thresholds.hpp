#pragma once

#include "xtel/fidelity.hpp"

namespace xtel {

/// Comparisons closer to a threshold than kThresholdGuard are reported as
/// boundary instead of a hard yes/no.
inline constexpr double kThresholdGuard = 1e-12;

enum class QuantumFlag { no, yes, boundary };

const char* to_string(QuantumFlag f);

// Concurrence thresholds above which the corresponding average fidelity
// exceeds the classical bound 2/3.
double threshold_c_x(const XState& x);       // (sqrt(r22) - sqrt(r33))^2
double threshold_c_x_use(const XState& x);   // requires r11 > 0
double threshold_c_x_use_0(const XState& x); // requires r11 > 0

struct ThresholdReport {
    double c14 = 0;
    double c_x_th = 0;
    double c_x_use_th = 0;
    double c_x_use_0_th = 0;
    QuantumFlag quantum_plain = QuantumFlag::no;        // f_x > 2/3
    QuantumFlag quantum_use_total = QuantumFlag::no;    // f_x_use > 2/3
    QuantumFlag quantum_use_filtered = QuantumFlag::no; // f_x_use_0 > 2/3
};

/// Evaluates the three thresholds and classifies the channel. Each flag is
/// yes exactly when c14 exceeds the matching threshold, which is equivalent
/// to the corresponding closed-form fidelity exceeding 2/3. Errors when
/// r11 == 0 (the extraction thresholds are undefined there).
ThresholdReport compute_thresholds(const XState& x);

/// Whether r33 < r22*sqrt(r11/r44), the regime where the filtered threshold
/// drops below the plain one. Equivalent to c_x_use_0_th < c_x_th whenever
/// r11 < r44 strictly (at r11 == r44 the two thresholds coincide).
bool threshold_inversion_region(const XState& x);

} // namespace xtel
