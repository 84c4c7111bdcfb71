#include <algorithm>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "xtel/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

struct CommonOptions {
    std::string pure_spec;
    std::string x_spec;
    std::string method = "closed";
    long long samples = 100000;
    std::uint64_t seed = 0;
    std::string format = "csv";
    bool strict = false;
    int t_nodes = 12;
    int phase_nodes = 16;
};

xtel::Method parse_method(const std::string& name) {
    if (name == "closed") return xtel::Method::closed_form;
    if (name == "quad") return xtel::Method::quadrature;
    if (name == "mc") return xtel::Method::monte_carlo;
    throw xtel::Error(xtel::ErrorKind::parse_error,
                      "method must be closed, quad or mc");
}

xtel::OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return xtel::OutputFormat::csv;
    if (name == "json") return xtel::OutputFormat::json;
    throw xtel::Error(xtel::ErrorKind::parse_error,
                      "format must be csv or json");
}

xtel::ChannelSpec parse_channel(const CommonOptions& common) {
    if (common.pure_spec.empty() == common.x_spec.empty())
        throw xtel::Error(xtel::ErrorKind::parse_error,
                          "give exactly one of --pure or --x");
    xtel::ChannelSpec spec;
    if (!common.pure_spec.empty()) {
        spec.pure = true;
        spec.alpha = xtel::parse_pure_alpha(common.pure_spec);
    } else {
        spec.x = xtel::parse_x_params(common.x_spec);
    }
    return spec;
}

xtel::EvalOptions eval_options(const CommonOptions& common) {
    xtel::EvalOptions opts;
    opts.method = parse_method(common.method);
    opts.n_samples = common.samples;
    opts.seed = common.seed;
    opts.strict = common.strict;
    opts.quadrature.t_nodes = common.t_nodes;
    opts.quadrature.phase_nodes = common.phase_nodes;
    return opts;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"teleportation fidelity analysis over pure and X-state "
                 "channels with unambiguous state extraction"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; command-line "
                                   "flags win on conflict");

    CommonOptions common;
    app.add_option("--pure", common.pure_spec,
                   "pure channel spec, e.g. alpha=0.4");
    app.add_option("--x", common.x_spec,
                   "X-state spec, e.g. "
                   "r11=0.3,r22=0.15,r33=0.05,r44=0.5,r14=0.35,r23=0");
    app.add_option("--method", common.method,
                   "evaluation method: closed, quad or mc")
        ->capture_default_str();
    app.add_option("--samples", common.samples, "Monte Carlo sample count")
        ->capture_default_str();
    app.add_option("--seed", common.seed, "random seed")
        ->capture_default_str();
    app.add_option("--format", common.format, "output format: csv or json")
        ->capture_default_str();
    app.add_flag("--strict-principal", common.strict,
                 "require the principal-subspace condition r11*r44 > r22*r33");
    app.add_option("--t-nodes", common.t_nodes,
                   "Gauss-Legendre nodes on t for quadrature")
        ->capture_default_str();
    app.add_option("--phase-nodes", common.phase_nodes,
                   "equispaced phase nodes for quadrature")
        ->capture_default_str();

    std::string sweep_text;
    long long validate_channels = 1000;
    int validate_mc_channels = 10;
    bool inject_error = false;

    CLI::App* eval = app.add_subcommand("eval", "evaluate a single channel");
    eval->fallthrough();

    CLI::App* sweep = app.add_subcommand(
        "sweep", "evaluate a channel family along one parameter");
    sweep->fallthrough();
    sweep->add_option("--sweep", sweep_text,
                      "grid spec param=start:stop:steps")
        ->required();

    CLI::App* validate_cmd = app.add_subcommand(
        "validate",
        "cross-validate closed forms against quadrature, simulation and "
        "Monte Carlo on random channels");
    validate_cmd->fallthrough();
    validate_cmd
        ->add_option("--channels", validate_channels,
                     "number of random channels")
        ->capture_default_str();
    validate_cmd
        ->add_option("--mc-channels", validate_mc_channels,
                     "channels given a Monte Carlo check")
        ->capture_default_str();
    validate_cmd
        ->add_flag("--inject-error", inject_error,
                   "bias one closed form (negative-control fixture)")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) // --help and friends
            return app.exit(e);
        app.exit(e);
        return kExitInput;
    }

    try {
        if (eval->parsed()) {
            const xtel::ChannelSpec spec = parse_channel(common);
            const xtel::ReportRow row =
                xtel::evaluate_channel(spec, eval_options(common));
            xtel::write_rows(std::cout, {row}, parse_format(common.format));
            if (!row.valid) {
                std::cerr << "invalid channel: " << row.error << "\n";
                return kExitInput;
            }
            return kExitOk;
        }
        if (sweep->parsed()) {
            const xtel::ChannelSpec spec = parse_channel(common);
            const auto rows =
                xtel::run_sweep(spec, xtel::parse_sweep_range(sweep_text),
                                eval_options(common));
            xtel::write_rows(std::cout, rows, parse_format(common.format));
            const bool any_valid =
                std::any_of(rows.begin(), rows.end(),
                            [](const xtel::ReportRow& r) { return r.valid; });
            if (!any_valid) {
                std::cerr << "no valid sweep points\n";
                return kExitInput;
            }
            return kExitOk;
        }
        if (validate_cmd->parsed()) {
            if (validate_channels < 1)
                throw xtel::Error(xtel::ErrorKind::parse_error,
                                  "need at least one channel");
            xtel::ValidateOptions opts;
            opts.seed = common.seed;
            opts.channels = static_cast<int>(validate_channels);
            opts.mc_channels = validate_mc_channels;
            opts.mc_samples = common.samples;
            opts.quadrature.t_nodes = common.t_nodes;
            opts.quadrature.phase_nodes = common.phase_nodes;
            opts.inject_error = inject_error;
            return xtel::run_validate(opts, std::cout);
        }
    } catch (const xtel::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case xtel::ErrorKind::parse_error:
        case xtel::ErrorKind::channel_trace:
        case xtel::ErrorKind::channel_negative_population:
        case xtel::ErrorKind::channel_psd:
        case xtel::ErrorKind::channel_canonical_order:
        case xtel::ErrorKind::channel_principal_subspace:
            return kExitInput;
        default:
            return kExitInternal;
        }
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
