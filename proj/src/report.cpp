#include "xtel/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace xtel {

namespace {

double take_key(std::map<std::string, double>& kv, const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) return 0.0;
    const double v = it->second;
    kv.erase(it);
    return v;
}

} // namespace

XParams parse_x_params(const std::string& spec) {
    auto kv = parse_key_values(spec);
    XParams p;
    p.r11 = take_key(kv, "r11");
    p.r22 = take_key(kv, "r22");
    p.r33 = take_key(kv, "r33");
    p.r44 = take_key(kv, "r44");
    p.r14 = take_key(kv, "r14");
    p.r23 = take_key(kv, "r23");
    if (!kv.empty())
        throw Error(ErrorKind::parse_error,
                    "unknown key '" + kv.begin()->first + "'");
    return p;
}

double parse_pure_alpha(const std::string& spec) {
    auto kv = parse_key_values(spec);
    auto it = kv.find("alpha");
    if (it == kv.end() || kv.size() != 1)
        throw Error(ErrorKind::parse_error,
                    "pure channel spec must be alpha=<value>");
    return it->second;
}

XParams embedding_params(double alpha) {
    XParams p;
    const double a2 = alpha * alpha;
    p.r11 = a2;
    p.r44 = 1.0 - a2;
    p.r14 = alpha * std::sqrt(std::max(0.0, 1.0 - a2));
    return p;
}

XState build_channel(const ChannelSpec& spec, bool strict) {
    if (spec.pure)
        return embed_pure_channel(make_pure_channel(spec.alpha));
    return make_x_state(spec.x.r11, spec.x.r22, spec.x.r33, spec.x.r44,
                        spec.x.r14, spec.x.r23, strict);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[48];
    const double a = std::abs(v);
    if (a < 1e-4 || a >= 1e6) {
        std::snprintf(buf, sizeof buf, "%.8e", v);
    } else {
        const int decimals = 8 - static_cast<int>(std::floor(std::log10(a)));
        std::snprintf(buf, sizeof buf, "%.*f", std::max(0, decimals), v);
    }
    return buf;
}

namespace {

std::string cell(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
}

std::string cell(const std::optional<QuantumFlag>& v) {
    return v ? to_string(*v) : std::string();
}

ReportRow invalid_row(const XParams& p, const std::string& message,
                      const EvalOptions& opts) {
    ReportRow row;
    row.valid = false;
    row.error = message;
    row.r11 = p.r11;
    row.r22 = p.r22;
    row.r33 = p.r33;
    row.r44 = p.r44;
    row.r14 = p.r14;
    row.r23 = p.r23;
    row.method = to_string(opts.method);
    return row;
}

XParams attempted_params(const ChannelSpec& spec) {
    return spec.pure ? embedding_params(spec.alpha) : spec.x;
}

} // namespace

ReportRow evaluate_channel(const ChannelSpec& spec, const EvalOptions& opts) {
    XState x;
    try {
        x = build_channel(spec, opts.strict);
    } catch (const Error& e) {
        return invalid_row(attempted_params(spec), e.what(), opts);
    }

    ReportRow row;
    row.valid = true;
    row.r11 = x.r11;
    row.r22 = x.r22;
    row.r33 = x.r33;
    row.r44 = x.r44;
    row.r14 = x.r14;
    row.r23 = x.r23;
    row.method = to_string(opts.method);
    row.c14 = x_concurrence(x).c14;
    row.c_x_th = threshold_c_x(x);

    const bool use_defined = x.r11 > 0.0;
    double max_std_error = 0.0;

    if (opts.method == Method::closed_form) {
        row.f_x = closed_f_x(x);
        if (use_defined) {
            row.f_x_use = closed_f_x_use(x);
            const WeightedFidelity success = closed_f_x_use_success(x);
            const WeightedFidelity failure = closed_f_x_use_failure(x);
            row.f_x_use_0 = success.fidelity;
            row.f_x_use_1 = failure.weight >= 1e-12
                                ? std::optional<double>(failure.fidelity)
                                : std::nullopt;
            row.p_qext = success.weight;
        }
    } else {
        AverageSpec avg;
        avg.method = opts.method;
        avg.quadrature = opts.quadrature;
        avg.n_samples = opts.n_samples;
        avg.seed = opts.seed;
        auto track = [&max_std_error](const FidelityEstimate& e) {
            max_std_error = std::max(max_std_error, e.std_error);
            return e;
        };
        const FidelityEstimate fx =
            track(average_fidelity(x_teleport_protocol(x), avg));
        row.f_x = fx.value;
        row.n_samples = fx.n_samples;
        if (use_defined) {
            row.f_x_use =
                track(average_fidelity(x_use_protocol(x), avg)).value;
            row.f_x_use_0 = track(conditional_average_fidelity(
                                      x_use_success_protocol(x), avg))
                                .value;
            const double p_qext = quasi_extraction_probability(x);
            row.p_qext = p_qext;
            if (p_qext < 1.0 - 1e-12)
                row.f_x_use_1 = track(conditional_average_fidelity(
                                          x_use_failure_protocol(x), avg))
                                    .value;
        }
        if (opts.method == Method::monte_carlo) {
            row.std_err = max_std_error;
            row.seed = opts.seed;
        }
    }

    if (use_defined) {
        const ThresholdReport thresholds = compute_thresholds(x);
        row.c_x_use_th = thresholds.c_x_use_th;
        row.c_x_use_0_th = thresholds.c_x_use_0_th;
        row.q_plain = thresholds.quantum_plain;
        row.q_use = thresholds.quantum_use_total;
        row.q_filtered = thresholds.quantum_use_filtered;
    } else {
        // extraction undefined; plain threshold still applies
        const double c14 = *row.c14;
        const double th = *row.c_x_th;
        row.q_plain = std::abs(c14 - th) <= kThresholdGuard
                          ? QuantumFlag::boundary
                          : (c14 > th ? QuantumFlag::yes : QuantumFlag::no);
    }
    return row;
}

SweepRange parse_sweep_range(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw Error(ErrorKind::parse_error,
                    "sweep must be param=start:stop:steps");
    SweepRange range;
    range.parameter = text.substr(0, eq);
    const std::string rest = text.substr(eq + 1);
    std::stringstream ss(rest);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, ':'))
        parts.push_back(part);
    if (parts.size() != 3)
        throw Error(ErrorKind::parse_error,
                    "sweep must be param=start:stop:steps");
    try {
        range.start = std::stod(parts[0]);
        range.stop = std::stod(parts[1]);
        range.steps = std::stoll(parts[2]);
    } catch (const std::exception&) {
        throw Error(ErrorKind::parse_error, "bad sweep range '" + rest + "'");
    }
    if (range.steps < 1)
        throw Error(ErrorKind::parse_error, "sweep needs steps >= 1");
    return range;
}

std::vector<ReportRow> run_sweep(const ChannelSpec& base,
                                 const SweepRange& range,
                                 const EvalOptions& opts) {
    double* slot = nullptr;
    ChannelSpec spec = base;
    if (spec.pure) {
        if (range.parameter != "alpha")
            throw Error(ErrorKind::parse_error,
                        "pure channels sweep only 'alpha'");
        slot = &spec.alpha;
    } else {
        if (range.parameter == "r11") slot = &spec.x.r11;
        else if (range.parameter == "r22") slot = &spec.x.r22;
        else if (range.parameter == "r33") slot = &spec.x.r33;
        else if (range.parameter == "r44") slot = &spec.x.r44;
        else if (range.parameter == "r14") slot = &spec.x.r14;
        else if (range.parameter == "r23") slot = &spec.x.r23;
        else
            throw Error(ErrorKind::parse_error,
                        "unknown sweep parameter '" + range.parameter + "'");
    }

    std::vector<ReportRow> rows;
    rows.reserve(static_cast<std::size_t>(range.steps));
    for (long long i = 0; i < range.steps; ++i) {
        *slot = range.steps == 1
                    ? range.start
                    : range.start + (range.stop - range.start) *
                                        static_cast<double>(i) /
                                        static_cast<double>(range.steps - 1);
        rows.push_back(evaluate_channel(spec, opts));
    }
    return rows;
}

std::string csv_header() {
    return "valid,r11,r22,r33,r44,r14,r23,c14,f_x,f_x_use,f_x_use_0,"
           "f_x_use_1,p_qext,c_x_th,c_x_use_th,c_x_use_0_th,q_plain,q_use,"
           "q_filtered,method,n_samples,std_err,seed";
}

std::string to_csv(const ReportRow& row) {
    std::ostringstream out;
    out << (row.valid ? "true" : "false") << ','
        << format_number(row.r11) << ',' << format_number(row.r22) << ','
        << format_number(row.r33) << ',' << format_number(row.r44) << ','
        << format_number(row.r14) << ',' << format_number(row.r23) << ','
        << cell(row.c14) << ',' << cell(row.f_x) << ',' << cell(row.f_x_use)
        << ',' << cell(row.f_x_use_0) << ',' << cell(row.f_x_use_1) << ','
        << cell(row.p_qext) << ',' << cell(row.c_x_th) << ','
        << cell(row.c_x_use_th) << ',' << cell(row.c_x_use_0_th) << ','
        << cell(row.q_plain) << ',' << cell(row.q_use) << ','
        << cell(row.q_filtered) << ',' << row.method << ','
        << (row.n_samples > 0 ? std::to_string(row.n_samples) : std::string())
        << ',' << cell(row.std_err) << ','
        << (row.seed ? std::to_string(*row.seed) : std::string());
    return out.str();
}

std::string to_json(const std::vector<ReportRow>& rows) {
    nlohmann::json array = nlohmann::json::array();
    auto put = [](nlohmann::json& obj, const char* key,
                  const std::optional<double>& v) {
        if (v)
            obj[key] = *v;
        else
            obj[key] = nullptr;
    };
    auto put_flag = [](nlohmann::json& obj, const char* key,
                       const std::optional<QuantumFlag>& v) {
        if (v)
            obj[key] = to_string(*v);
        else
            obj[key] = nullptr;
    };
    for (const ReportRow& row : rows) {
        nlohmann::json obj;
        obj["valid"] = row.valid;
        obj["r11"] = row.r11;
        obj["r22"] = row.r22;
        obj["r33"] = row.r33;
        obj["r44"] = row.r44;
        obj["r14"] = row.r14;
        obj["r23"] = row.r23;
        put(obj, "c14", row.c14);
        put(obj, "f_x", row.f_x);
        put(obj, "f_x_use", row.f_x_use);
        put(obj, "f_x_use_0", row.f_x_use_0);
        put(obj, "f_x_use_1", row.f_x_use_1);
        put(obj, "p_qext", row.p_qext);
        put(obj, "c_x_th", row.c_x_th);
        put(obj, "c_x_use_th", row.c_x_use_th);
        put(obj, "c_x_use_0_th", row.c_x_use_0_th);
        put_flag(obj, "q_plain", row.q_plain);
        put_flag(obj, "q_use", row.q_use);
        put_flag(obj, "q_filtered", row.q_filtered);
        obj["method"] = row.method;
        obj["n_samples"] = row.n_samples;
        put(obj, "std_err", row.std_err);
        if (row.seed)
            obj["seed"] = *row.seed;
        else
            obj["seed"] = nullptr;
        array.push_back(obj);
    }
    return array.dump(2);
}

void write_rows(std::ostream& out, const std::vector<ReportRow>& rows,
                OutputFormat format) {
    if (format == OutputFormat::json) {
        out << to_json(rows) << '\n';
        return;
    }
    out << csv_header() << '\n';
    for (const ReportRow& row : rows)
        out << to_csv(row) << '\n';
}

} // namespace xtel
