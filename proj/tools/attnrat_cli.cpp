#include "attnrat/approximation.hpp"
#include "attnrat/errors.hpp"
#include "attnrat/fixtures.hpp"
#include "attnrat/json_io.hpp"
#include "attnrat/parity.hpp"
#include "attnrat/sweep.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace attnrat;
using io::Json;

namespace {

constexpr const char* kVersion = "1.0.0";

enum ExitCode { kOk = 0, kValidation = 2, kDenominator = 3, kScaleCap = 4, kBudget = 5 };

struct Common {
    std::uint32_t cap = kDefaultExhaustiveCap;
    std::uint64_t seed = 1;
    std::uint64_t trials = 10000;
    std::size_t grid = 100000;
    std::string out;
};

Json meta(const Common& c) {
    return Json{{"tool", "attnrat"}, {"version", kVersion}, {"seed", c.seed}, {"cap", c.cap}, {"grid", c.grid}};
}

void emit(const std::string& text, const Common& c) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(c.out, std::ios::binary);
    if (!file) throw ValidationError("cannot write " + c.out);
    file << text;
}

void emit(Json report, const Common& c) {
    report["meta"] = meta(c);
    emit(report.dump(2) + "\n", c);
}

Rational parse_arg(const std::string& text, const char* name) {
    try {
        return parse_rational(text);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("--") + name + ": " + e.what());
    }
}

LayerSpec load_layer(const std::string& path) { return io::layer_from_json(io::read_file(path)); }

int run_compile(const std::string& spec, bool assume, const Common& c) {
    LayerSpec layer = load_layer(spec);
    CompileOptions options;
    options.cap = c.cap;
    options.assume_nonvanishing = assume;
    emit(io::to_json(compile_layer(layer, options)), c);
    return kOk;
}

int run_verify(const std::string& spec, const Common& c) {
    LayerSpec layer = load_layer(spec);
    CompileOptions options;
    options.cap = c.cap;
    CompiledLayer compiled = compile_layer(layer, options);
    emit(io::to_json(verify_equivalence(layer, compiled.function, c.cap)), c);
    return kOk;
}

int run_parity_check(const std::string& spec, std::optional<std::uint32_t> campaign_n, std::uint32_t max_d,
                     const Common& c) {
    if (campaign_n) {
        CampaignOptions options;
        options.n = *campaign_n;
        options.trials = c.trials;
        options.seed = c.seed;
        options.max_d = max_d;
        if (*campaign_n > c.cap) throw ScaleCapExceeded("n exceeds the exhaustive cap");
        CampaignResult result = theorem1_campaign(options);
        BoundReport report;
        report.n = result.n;
        report.bound = Rational(result.n, 4);
        report.bound.canonicalize();
        report.sign_represents = result.sign_representations > 0;
        report.contradiction = result.contradictions > 0;
        report.satisfied = !report.contradiction;
        report.seed = result.seed;
        report.trials = result.trials;
        report.witness = std::to_string(result.sign_representations) + " of " + std::to_string(result.trials) +
                         " random layers with 2hp < n/2 sign-represent parity (consistency check, not a proof)";
        Json j = io::to_json(report);
        j.erase("h");
        j.erase("p");
        j["campaign"] = io::to_json(result);
        emit(j, c);
        return kOk;
    }
    if (spec.empty()) throw ValidationError("parity-check needs a spec file or --campaign n");
    emit(io::to_json(theorem1_report(load_layer(spec), c.cap)), c);
    return kOk;
}

int run_sensitivity(const std::string& spec, std::optional<std::uint32_t> parity_n, const std::string& tau_text,
                    const Common& c) {
    BooleanTable g;
    Json source;
    if (parity_n) {
        if (*parity_n > c.cap) throw ScaleCapExceeded("n exceeds the exhaustive cap");
        g = parity(*parity_n);
        source = Json{{"parity", *parity_n}};
    } else {
        if (spec.empty()) throw ValidationError("sensitivity needs a spec file or --parity n");
        LayerSpec layer = load_layer(spec);
        Rational tau = layer.has_rational_post() ? Rational(0) : layer.relu_post().threshold;
        if (!tau_text.empty()) tau = parse_arg(tau_text, "tau");
        g = threshold_table(layer_table(layer, c.cap), tau);
        source = Json{{"spec", spec}, {"tau", io::rational_to_json(tau)}};
    }
    emit(Json{{"n", g.n},
              {"source", source},
              {"avgSensitivity", io::rational_to_json(average_sensitivity(g))},
              {"parityCorrelation", io::rational_to_json(parity_correlation(g))}},
         c);
    return kOk;
}

ApproximationOptions approx_options(const Common& c, std::uint32_t max_k) {
    ApproximationOptions options;
    options.grid_points = c.grid;
    options.univariate_grid = c.grid;
    options.max_k = max_k;
    return options;
}

int run_approx(const std::string& net_path, const std::string& eps_text, std::uint32_t max_k, const Common& c) {
    const Rational eps = parse_arg(eps_text, "epsilon");
    if (eps <= 0 || eps > 1) throw ValidationError("--epsilon must satisfy 0 < epsilon <= 1");
    ReluNetwork net = io::network_from_json(io::read_file(net_path));
    emit(io::to_json(approximate_network(net, eps, approx_options(c, max_k))), c);
    return kOk;
}

int run_theorem2(const std::string& spec, const std::string& tau_text, const std::string& gamma_text,
                 std::uint32_t max_k, const Common& c) {
    LayerSpec layer = load_layer(spec);
    if (layer.has_rational_post()) throw ValidationError("theorem2 needs a layer with ReLU post-processing");
    Rational tau = layer.relu_post().threshold;
    std::optional<Rational> gamma;
    if (!gamma_text.empty()) gamma = parse_arg(gamma_text, "gamma");
    if (!tau_text.empty()) tau = parse_arg(tau_text, "tau");
    bool measured = false;
    if (!gamma) {
        if (layer.n() > c.cap) throw ScaleCapExceeded("n exceeds the exhaustive cap");
        auto margin = best_margin(layer_table(layer, c.cap), parity(layer.n()));
        if (!margin) throw ValidationError("the layer does not separate parity; pass --tau and --gamma explicitly");
        if (tau_text.empty()) tau = margin->tau;
        gamma = margin->gamma;
        measured = true;
    }
    Theorem2Options options;
    options.cap = c.cap;
    options.approximation = approx_options(c, max_k);
    Json j = io::to_json(theorem2_report(layer, tau, *gamma, options));
    j["gammaMeasured"] = measured;
    emit(j, c);
    return kOk;
}

int run_sweep_cmd(const std::string& config_path, const Common& c) {
    SweepSettings settings;
    settings.seed = c.seed;
    settings.cap = c.cap;
    emit(run_sweep(io::read_file(config_path), settings), c);
    return kOk;
}

int run_make_fixture(const std::string& kind, std::uint32_t n, const Common& c) {
    Json j;
    if (kind == "parity-layer") {
        j = io::to_json(build_parity_layer(n));
    } else if (kind == "relu-hat-layer") {
        j = io::to_json(relu_hat_layer(n));
    } else if (kind == "relu-hat-network") {
        j = io::to_json(relu_hat_network(n));
    } else if (kind == "uniform-mean") {
        j = io::to_json(LayerSpec({uniform_mean_head(n)},
                                  RationalPost{Polynomial::variable(1, 0), Polynomial::constant(1, 1), 1}));
    } else if (kind == "single-gate") {
        j = io::to_json(single_gate_network());
    } else if (kind == "tent") {
        j = io::to_json(tent_network());
    } else {
        throw ValidationError("unknown fixture \"" + kind +
                              "\" (parity-layer, relu-hat-layer, relu-hat-network, uniform-mean, single-gate, tent)");
    }
    emit(j.dump(2) + "\n", c);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact rational analysis of single-layer attention on Boolean inputs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--cap", common.cap, "Largest n checked exhaustively")->check(CLI::PositiveNumber);
        sub->add_option("--out", common.out, "Output file (default: stdout)");
    };

    std::string spec, net_path, config_path, eps_text, tau_text, gamma_text, kind;
    bool assume = false;
    std::optional<std::uint32_t> campaign_n, parity_n;
    std::uint32_t max_d = 3, max_k = 160, fixture_n = 4;

    auto* compile = app.add_subcommand("compile", "Compile a layer to a rational function on the cube");
    compile->add_option("spec", spec, "LayerSpec JSON")->required();
    compile->add_flag("--assume-nonvanishing", assume, "Above the cap, trust that Q does not vanish");
    add_common(compile);

    auto* verify = app.add_subcommand("verify", "Compile and compare against direct evaluation on every input");
    verify->add_option("spec", spec, "LayerSpec JSON")->required();
    add_common(verify);

    auto* parity_check = app.add_subcommand("parity-check", "Parity sign-representation and the hp >= n/4 bound");
    parity_check->add_option("spec", spec, "LayerSpec JSON with rational post-processing");
    parity_check->add_option("--campaign", campaign_n, "Run a randomized campaign on n bits instead");
    parity_check->add_option("--trials", common.trials, "Campaign size");
    parity_check->add_option("--seed", common.seed, "Campaign seed");
    parity_check->add_option("--max-d", max_d, "Largest value dimension in the campaign")->check(CLI::PositiveNumber);
    add_common(parity_check);

    auto* sensitivity = app.add_subcommand("sensitivity", "Average sensitivity and parity correlation");
    sensitivity->add_option("spec", spec, "LayerSpec JSON");
    sensitivity->add_option("--parity", parity_n, "Use parity on n bits");
    sensitivity->add_option("--tau", tau_text, "Threshold for sign(T - tau)");
    add_common(sensitivity);

    auto* approx = app.add_subcommand("approx-relu", "Rational approximation of a ReLU network");
    approx->add_option("network", net_path, "ReluNetwork JSON")->required();
    approx->add_option("--epsilon", eps_text, "Target sup-error, e.g. 1/10")->required();
    approx->add_option("--grid", common.grid, "Verification samples")->check(CLI::Range(2, 100000000));
    approx->add_option("--max-k", max_k, "Largest Newman parameter")->check(CLI::Range(2, 400));
    add_common(approx);

    auto* theorem2 = app.add_subcommand("theorem2", "Margin pipeline for a ReLU post-processed layer");
    theorem2->add_option("spec", spec, "LayerSpec JSON with ReLU post-processing")->required();
    theorem2->add_option("--tau", tau_text, "Threshold (default: measured)");
    theorem2->add_option("--gamma", gamma_text, "Margin (default: measured)");
    theorem2->add_option("--grid", common.grid, "Verification samples")->check(CLI::Range(2, 100000000));
    theorem2->add_option("--max-k", max_k, "Largest Newman parameter")->check(CLI::Range(2, 400));
    add_common(theorem2);

    auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
    sweep->add_option("config", config_path, "Sweep config JSON")->required();
    sweep->add_option("--seed", common.seed, "Seed (a seed in the config takes precedence)");
    add_common(sweep);

    auto* fixture = app.add_subcommand("make-fixture", "Write a built-in layer or network");
    fixture->add_option("kind", kind, "parity-layer | relu-hat-layer | relu-hat-network | uniform-mean | single-gate | tent")
        ->required();
    fixture->add_option("--n", fixture_n, "Input length")->check(CLI::Range(1, 63));
    add_common(fixture);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*compile) return run_compile(spec, assume, common);
        if (*verify) return run_verify(spec, common);
        if (*parity_check) return run_parity_check(spec, campaign_n, max_d, common);
        if (*sensitivity) return run_sensitivity(spec, parity_n, tau_text, common);
        if (*approx) return run_approx(net_path, eps_text, max_k, common);
        if (*theorem2) return run_theorem2(spec, tau_text, gamma_text, max_k, common);
        if (*sweep) return run_sweep_cmd(config_path, common);
        if (*fixture) return run_make_fixture(kind, fixture_n, common);
    } catch (const DenominatorVanished& e) {
        std::cerr << "error: denominator vanishes: " << e.what() << "\n";
        return kDenominator;
    } catch (const ScaleCapExceeded& e) {
        std::cerr << "error: scale cap: " << e.what() << "\n";
        return kScaleCap;
    } catch (const ApproximationBudgetExceeded& e) {
        std::cerr << "error: approximation budget: " << e.what() << "\n";
        return kBudget;
    } catch (const RangeAssumptionViolated& e) {
        std::cerr << "error: range hypothesis: " << e.what() << "\n";
        return kValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return kValidation;
    }
    return kValidation;
}
