#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "xtel/thresholds.hpp"

namespace xtel {

/// One line of the eval/sweep report. Empty optionals print as empty CSV
/// cells (JSON null): metrics of an invalid channel, or the extraction
/// metrics of a channel with r11 == 0.
struct ReportRow {
    bool valid = false;
    std::string error; // diagnostic for invalid rows (goes to stderr, not CSV)
    double r11 = 0, r22 = 0, r33 = 0, r44 = 0, r14 = 0, r23 = 0;
    std::optional<double> c14;
    std::optional<double> f_x, f_x_use, f_x_use_0, f_x_use_1, p_qext;
    std::optional<double> c_x_th, c_x_use_th, c_x_use_0_th;
    std::optional<QuantumFlag> q_plain, q_use, q_filtered;
    std::string method;
    long long n_samples = 0;
    std::optional<double> std_err;
    std::optional<std::uint64_t> seed;
};

/// Raw, unvalidated X-state parameters (sweeps need to represent invalid
/// grid points before validation).
struct XParams {
    double r11 = 0, r22 = 0, r33 = 0, r44 = 0, r14 = 0, r23 = 0;
};

/// Channel as given on the command line; pure channels are reported through
/// their X-state embedding (alpha^2, 0, 0, beta^2, alpha*beta, 0).
struct ChannelSpec {
    bool pure = false;
    double alpha = 0;
    XParams x{};
};

XParams parse_x_params(const std::string& spec);   // "r11=0.3,r22=..."
double parse_pure_alpha(const std::string& spec);  // "alpha=0.4"
XState build_channel(const ChannelSpec& spec, bool strict);
XParams embedding_params(double alpha); // attempted embedding, unvalidated

struct EvalOptions {
    Method method = Method::closed_form;
    QuadratureSpec quadrature{};
    long long n_samples = 100000;
    std::uint64_t seed = 0;
    bool strict = false;
};

/// Computes one report row; channel construction failures yield an invalid
/// row instead of propagating.
ReportRow evaluate_channel(const ChannelSpec& spec, const EvalOptions& opts);

struct SweepRange {
    std::string parameter; // alpha (pure) or one of r11..r23 (x)
    double start = 0, stop = 0;
    long long steps = 1;
};

/// "param=start:stop:steps"
SweepRange parse_sweep_range(const std::string& text);

/// One row per grid point; invalid points are marked, not dropped. Throws
/// ErrorKind::parse_error for an unknown parameter name.
std::vector<ReportRow> run_sweep(const ChannelSpec& base, const SweepRange& range,
                                 const EvalOptions& opts);

enum class OutputFormat { csv, json };

/// 9 significant digits, lowercase scientific notation outside [1e-4, 1e6).
std::string format_number(double v);

std::string csv_header();
std::string to_csv(const ReportRow& row);
std::string to_json(const std::vector<ReportRow>& rows);
void write_rows(std::ostream& out, const std::vector<ReportRow>& rows,
                OutputFormat format);

struct ValidateOptions {
    std::uint64_t seed = 42;
    int channels = 1000;
    int mc_channels = 10;
    long long mc_samples = 100000;
    QuadratureSpec quadrature{};
    bool inject_error = false; // negative-control fixture: biases one closed form
};

/// Cross-validates closed forms against quadrature, the 8x8 simulation path
/// and Monte Carlo on random channels; prints max deviations. Returns 0 when
/// everything is within tolerance, 3 otherwise (offending channels listed).
int run_validate(const ValidateOptions& opts, std::ostream& out);

} // namespace xtel
