#include "attnrat/sweep.hpp"

#include "attnrat/errors.hpp"
#include "attnrat/fixtures.hpp"
#include "attnrat/kernels.hpp"

#include <sstream>

namespace attnrat {

namespace {

std::vector<std::uint32_t> sizes(const io::Json& entry, const std::string& where) {
    if (!entry.contains("n")) throw ValidationError(where + ": missing field \"n\"");
    const io::Json& n = entry["n"];
    std::vector<std::uint32_t> out;
    auto take = [&](const io::Json& v) {
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() < 1) {
            throw ValidationError(where + ".n: expected positive integers");
        }
        out.push_back(v.get<std::uint32_t>());
    };
    if (n.is_array()) {
        for (const auto& v : n) take(v);
    } else {
        take(n);
    }
    return out;
}

std::uint32_t positive(const io::Json& entry, const char* key, const std::string& where) {
    if (!entry.contains(key) || !entry[key].is_number_unsigned() || entry[key].get<std::uint64_t>() < 1) {
        throw ValidationError(where + "." + key + ": expected a positive integer");
    }
    return entry[key].get<std::uint32_t>();
}

Rational random_unit(RandomStream& rng) { return rng.small_rational(4, 4); }

AffineGate random_gate(RandomStream& rng, std::size_t inputs) {
    AffineGate g;
    for (std::size_t j = 0; j < inputs; ++j) g.a.push_back(random_unit(rng));
    g.b = random_unit(rng);
    const Rational norm = g.norm();
    if (norm > 1) {
        for (auto& c : g.a) c /= norm;
        g.b /= norm;
    }
    return g;
}

HeadSpec signed_mean_head(std::uint32_t n) {
    std::vector<WeightTable> weights(n);
    std::vector<ValuePair> values(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (auto& row : weights[i]) row = {Rational(1), Rational(1)};
        values[i] = {std::vector<Rational>{-1}, std::vector<Rational>{1}};
    }
    return HeadSpec(n, 1, std::move(weights), std::move(values));
}

struct Row {
    std::string family;
    std::uint32_t n, h, m, l;
    std::uint64_t trials;
    std::uint64_t seed;
    std::optional<Margin> margin;
};

std::string csv_row(const Row& r) {
    std::ostringstream out;
    Rational hml = r.h;
    for (std::uint32_t i = 0; i < r.l; ++i) hml *= r.m;
    Rational quarter(r.n, 4);
    quarter.canonicalize();
    out << r.family << ',' << r.n << ',' << r.h << ',' << r.m << ',' << r.l << ',' << r.trials << ',' << r.seed << ',';
    if (r.margin) {
        out << format_rational(r.margin->tau) << ',' << format_rational(r.margin->gamma) << ','
            << decimal_string(r.margin->gamma, 12) << ',' << relu_bound_quantity(r.h, r.m, r.l, r.margin->gamma);
    } else {
        out << ",,,undefined";
    }
    out << ',' << format_rational(quarter) << ',' << format_rational(hml);
    return out.str();
}

}  // namespace

ReluNetwork random_relu_network(RandomStream& rng, std::size_t d, std::uint32_t m, std::uint32_t l) {
    std::vector<std::vector<AffineGate>> layers;
    std::size_t inputs = d;
    for (std::uint32_t layer = 0; layer < l; ++layer) {
        std::vector<AffineGate> gates;
        for (std::uint32_t g = 0; g < m; ++g) gates.push_back(random_gate(rng, inputs));
        layers.push_back(std::move(gates));
        inputs = m;
    }
    return ReluNetwork(d, std::move(layers), random_gate(rng, inputs));
}

std::string run_sweep(const io::Json& config, const SweepSettings& settings) {
    if (!config.is_object()) throw ValidationError("sweep config: expected an object");
    std::uint64_t seed = settings.seed;
    if (config.contains("seed")) {
        if (!config["seed"].is_number_unsigned()) throw ValidationError("sweep config.seed: expected an integer");
        seed = config["seed"].get<std::uint64_t>();
    }
    const io::Json empty = io::Json::array();
    const io::Json& entries = config.contains("configurations") ? config["configurations"] : empty;
    if (!entries.is_array()) throw ValidationError("sweep config.configurations: expected an array");

    std::ostringstream csv;
    csv << kSweepHeader << '\n';
    for (std::size_t e = 0; e < entries.size(); ++e) {
        const std::string where = "configurations[" + std::to_string(e) + "]";
        const io::Json& entry = entries[e];
        if (!entry.is_object() || !entry.contains("family") || !entry["family"].is_string()) {
            throw ValidationError(where + ": missing string field \"family\"");
        }
        const std::string family = entry["family"].get<std::string>();
        for (std::uint32_t n : sizes(entry, where)) {
            if (n > settings.cap || n > kDenseCubeLimit) {
                throw ScaleCapExceeded(where + ": n = " + std::to_string(n) + " exceeds the exhaustive cap");
            }
            const BooleanTable target = parity(n);
            if (family == "relu-hat") {
                LayerSpec layer = relu_hat_layer(n);
                csv << csv_row({family, n, 1, n, 1, 1, seed, best_margin(layer_table(layer, settings.cap), target)}) << '\n';
            } else if (family == "random-relu") {
                const std::uint32_t m = positive(entry, "m", where);
                const std::uint32_t l = positive(entry, "l", where);
                const std::uint32_t trials = positive(entry, "trials", where);
                std::optional<Margin> best;
                for (std::uint32_t t = 0; t < trials; ++t) {
                    RandomStream rng(seed, (static_cast<std::uint64_t>(e) << 40) ^ (static_cast<std::uint64_t>(n) << 24) ^ t);
                    LayerSpec layer({signed_mean_head(n)}, ReluPost{random_relu_network(rng, 1, m, l), 0});
                    auto margin = best_margin(layer_table(layer, settings.cap), target);
                    if (margin && (!best || margin->gamma > best->gamma)) best = margin;
                }
                csv << csv_row({family, n, 1, m, l, trials, seed, best}) << '\n';
            } else {
                throw ValidationError(where + ".family: expected \"relu-hat\" or \"random-relu\"");
            }
        }
    }
    return csv.str();
}

}  // namespace attnrat
