// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance <path-to-cli> [work-dir]

#include "attnrat/approximation.hpp"
#include "attnrat/compiler.hpp"
#include "attnrat/errors.hpp"
#include "attnrat/exact_lp.hpp"
#include "attnrat/fixtures.hpp"
#include "attnrat/json_io.hpp"
#include "attnrat/kernels.hpp"
#include "attnrat/newman.hpp"
#include "attnrat/parity.hpp"
#include "attnrat/random.hpp"

#include <omp.h>
#include <sys/wait.h>

#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace attnrat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// Softmax-free direct evaluation of a layer from its definition, as an
// oracle independent of the library's evaluators.
Rational direct_layer_value(const LayerSpec& layer, CubeMask x) {
    const std::uint32_t n = layer.n();
    const int last = static_cast<int>((x >> (n - 1)) & 1U);
    std::vector<Rational> sum(layer.d(), Rational(0));
    for (const auto& head : layer.heads()) {
        Rational total = 0;
        std::vector<Rational> acc(layer.d(), Rational(0));
        for (std::uint32_t i = 0; i < n; ++i) {
            const int b = static_cast<int>((x >> i) & 1U);
            const Rational& w = head.weight(i, last, b);
            total += w;
            for (std::uint32_t k = 0; k < layer.d(); ++k) acc[k] += w * head.value(i, b)[k];
        }
        for (std::uint32_t k = 0; k < layer.d(); ++k) sum[k] += acc[k] / total;
    }
    const RationalPost& post = layer.rational_post();
    return poly_eval(post.numerator, sum) / poly_eval(post.denominator, sum);
}

Outcome compiler_exactness() {
    RandomStream rng(9001);
    std::uint64_t points = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<std::uint32_t>(rng.integer(1, 10));
        const auto d = static_cast<std::uint32_t>(rng.integer(1, 3));
        const auto h = static_cast<std::uint32_t>(rng.integer(1, 3));
        const auto p = static_cast<std::uint32_t>(rng.integer(1, 3));
        LayerSpec layer = random_rational_layer(rng.next(), n, d, h, p);
        for (const auto& head : layer.heads()) {
            LoweredHead lowered = head_to_rational(head);
            if (lowered.denominator.degree() > 2) return {false, "head denominator degree > 2"};
            for (const auto& num : lowered.numerators) {
                if (num.degree() > 2) return {false, "head numerator degree > 2"};
            }
        }
        CompiledLayer compiled = compile_layer(layer);
        if (compiled.function.degree() > 2 * h * p || compiled.formal_degree > 2 * h * p) {
            return {false, "layer " + std::to_string(trial) + " exceeds degree 2hp"};
        }
        const auto num = kernels::cube_values(compiled.function.numerator());
        const auto den = kernels::cube_values(compiled.function.denominator());
        for (CubeMask x = 0; x < cube_size(n); ++x) {
            if (num[x] / den[x] != direct_layer_value(layer, x)) {
                return {false, "layer " + std::to_string(trial) + " differs at x = " + bitstring(x, n)};
            }
            ++points;
        }
    }
    return {true, "200 random layers, " + std::to_string(points) + " points equal exactly; degrees <= 2 and <= 2hp"};
}

Outcome indicator_identity() {
    int checked = 0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            Polynomial ind = indicator_poly(a, b, 1, 0, 2);
            for (int xn = 0; xn < 2; ++xn) {
                for (int xi = 0; xi < 2; ++xi) {
                    const Rational v = poly_eval(ind, std::vector<Rational>{xi, xn});
                    if (v != ((xn == a && xi == b) ? 1 : 0)) return {false, "indicator mismatch"};
                    ++checked;
                }
            }
        }
    }
    return {true, std::to_string(checked) + " evaluations match the Kronecker indicator"};
}

bool independent_witness_check(const PtfFeasibility& r, std::uint32_t n, std::uint32_t k) {
    if (!r.witness || r.witness->degree() > k) return false;
    for (CubeMask x = 0; x < cube_size(n); ++x) {
        Rational v = r.witness->evaluate(x);
        if (std::popcount(x) % 2 == 0) v = -v;
        if (v < 1) return false;
    }
    return true;
}

bool independent_farkas_check(const PtfFeasibility& r, std::uint32_t n, std::uint32_t k) {
    Rational total = 0;
    for (const auto& y : r.farkas) {
        if (y < 0) return false;
        total += y;
    }
    if (total != 1 || r.farkas.size() != cube_size(n)) return false;
    for (CubeMask s = 0; s < cube_size(n); ++s) {
        if (static_cast<std::uint32_t>(std::popcount(s)) > k) continue;
        Rational acc = 0;
        for (CubeMask x = 0; x < cube_size(n); ++x) {
            if ((x & s) == s) acc += (std::popcount(x) % 2 ? 1 : -1) * r.farkas[x];
        }
        if (acc != 0) return false;
    }
    return true;
}

Outcome ptf_degree() {
    for (std::uint32_t n = 1; n <= 4; ++n) {
        PtfFeasibility full = ptf_parity_feasible(n, n);
        PtfFeasibility short_by_one = ptf_parity_feasible(n, n - 1);
        if (!full.feasible || !independent_witness_check(full, n, n)) return {false, "degree n infeasible at n = " + std::to_string(n)};
        if (short_by_one.feasible || !independent_farkas_check(short_by_one, n, n - 1)) {
            return {false, "degree n-1 not refuted at n = " + std::to_string(n)};
        }
        if (!symmetric_parity_feasible(n, n) || symmetric_parity_feasible(n, n - 1)) {
            return {false, "symmetrized cross-check disagrees at n = " + std::to_string(n)};
        }
    }
    return {true, "n = 1..4: degree n feasible (witness checked), degree n-1 infeasible (Farkas certificate checked)"};
}

Outcome theorem1_consistency() {
    for (std::uint32_t n = 1; n <= 10; ++n) {
        LayerSpec layer = build_parity_layer(n);
        BoundReport r = theorem1_report(layer);
        if (!r.sign_represents || r.h * r.p != n || !r.satisfied) {
            return {false, "parity layer fails at n = " + std::to_string(n)};
        }
        if (!verify_equivalence(layer, compile_layer(layer).function).ok()) {
            return {false, "parity layer compile mismatch at n = " + std::to_string(n)};
        }
    }
    std::string detail = "parity layers n = 1..10 sign-represent with hp = n";
    for (std::uint32_t n : {6u, 8u}) {
        CampaignResult c = theorem1_campaign({n, 10000, 20251, 3});
        detail += "; n = " + std::to_string(n) + ": " + std::to_string(c.sign_representations) + "/10000 represent parity (" +
                  std::to_string(c.resampled) + " denominators redrawn)";
        if (c.sign_representations != 0 || c.contradictions != 0) return {false, detail};
    }
    return {true, detail + "; consistency check only, not a proof"};
}

Outcome newman_pipeline() {
    std::string detail = "newman errors";
    BigFloat previous;
    bool first = true;
    for (std::uint32_t k : {4u, 9u, 16u, 25u}) {
        GridError err = newman_abs_error(k, 100000);
        detail += " k" + std::to_string(k) + "=" + decimal_string(err.sup_error, 4);
        if (!first && !(err.sup_error < previous)) return {false, detail + " (not strictly decreasing)"};
        previous = err.sup_error;
        first = false;
    }
    struct Fixture {
        const char* name;
        ReluNetwork net;
    };
    const Fixture fixtures[] = {{"single-gate", single_gate_network()},
                                {"hat2", relu_hat_network(2)},
                                {"hat4", relu_hat_network(4)},
                                {"tent", tent_network()}};
    for (const auto& f : fixtures) {
        std::uint32_t previous_degree = 0;
        for (const Rational& eps : {Rational(1, 2), Rational(1, 10), Rational(1, 50)}) {
            ApproximationResult r = approximate_network(f.net, eps);
            if (r.sup_error.compare(eps) > 0 || r.degree < previous_degree) {
                return {false, std::string(f.name) + " misses epsilon " + format_rational(eps)};
            }
            previous_degree = r.degree;
        }
        detail += "; " + std::string(f.name) + " ok";
    }
    return {true, detail + " (eps 1/2, 1/10, 1/50 on 10^5 samples)"};
}

Outcome theorem2_end_to_end() {
    std::string detail;
    for (std::uint32_t n : {2u, 4u}) {
        LayerSpec layer = relu_hat_layer(n);
        auto margin = best_margin(layer_table(layer), parity(n));
        if (!margin) return {false, "no measured margin at n = " + std::to_string(n)};
        BoundReport r = theorem2_report(layer, margin->tau, margin->gamma);
        if (!r.hypothesis_met || !r.sign_represents || !r.margin_inequalities_hold || !r.satisfied ||
            Rational(r.h * r.p) < Rational(n, 4)) {
            return {false, "pipeline fails at n = " + std::to_string(n) + ": " + r.witness};
        }
        detail += (detail.empty() ? "" : "; ") + std::string("n = ") + std::to_string(n) + ": gamma = " +
                  format_rational(*r.gamma) + ", k = " + std::to_string(r.newman_k) + ", hp = " +
                  std::to_string(r.h * r.p) + " >= " + format_rational(r.bound);
    }
    return {true, detail};
}

Outcome remark_quantities() {
    for (std::uint32_t n = 1; n <= 12; ++n) {
        if (average_sensitivity(parity(n)) != n) return {false, "parity sensitivity wrong at n = " + std::to_string(n)};
        if (parity_correlation(parity(n)) != 1) return {false, "parity correlation wrong at n = " + std::to_string(n)};
    }
    int flips = 0;
    for (unsigned x = 0; x < 8; ++x) {
        for (unsigned i = 0; i < 3; ++i) {
            if ((std::popcount(x) >= 2) != (std::popcount(x ^ (1U << i)) >= 2)) ++flips;
        }
    }
    Rational enumerated(flips, 8);
    enumerated.canonicalize();
    if (enumerated != Rational(3, 2) || average_sensitivity(majority(3)) != enumerated) {
        return {false, "majority-of-3 sensitivity is not 3/2"};
    }
    return {true, "AS(parity_n) = n and corr = 1 for n <= 12; AS(maj3) = 3/2 by enumeration"};
}

int run(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism(const std::string& cli, const fs::path& dir) {
    const fs::path config = dir / "sweep.json";
    std::ofstream(config) << R"({"configurations": [{"family": "relu-hat", "n": [2, 4, 6]},
        {"family": "random-relu", "n": [3, 4], "m": 3, "l": 2, "trials": 40}]})";
    const fs::path a = dir / "sweep_a.csv";
    const fs::path b = dir / "sweep_b.csv";
    for (const auto& out : {a, b}) {
        if (run(cli + " sweep " + config.string() + " --seed 77 --out " + out.string()) != 0) return {false, "sweep failed"};
    }
    if (slurp(a) != slurp(b) || slurp(a).empty()) return {false, "sweep CSV differs between runs"};

    const fs::path ca = dir / "campaign_a.json";
    const fs::path cb = dir / "campaign_b.json";
    for (const auto& out : {ca, cb}) {
        if (run(cli + " parity-check --campaign 6 --trials 500 --seed 4 --out " + out.string()) != 0) {
            return {false, "campaign command failed"};
        }
    }
    if (slurp(ca) != slurp(cb)) return {false, "campaign report differs between runs"};

    // Thread count must not change campaign results.
    const int threads = omp_get_max_threads();
    omp_set_num_threads(1);
    const std::string one = io::to_json(theorem1_campaign({6, 400, 12, 3})).dump();
    omp_set_num_threads(4);
    const std::string four = io::to_json(theorem1_campaign({6, 400, 12, 3})).dump();
    omp_set_num_threads(threads);
    if (one != four) return {false, "campaign depends on the thread count"};

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        if (io::to_json(random_rational_layer(seed, 5, 2, 1, 1)) != io::to_json(random_rational_layer(seed, 5, 2, 1, 1))) {
            return {false, "random layer generation is not reproducible"};
        }
    }
    return {true, "sweep CSV and campaign JSON byte-identical across runs; campaigns identical with 1 and 4 threads"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <cli> [work-dir]\n");
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path dir = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "attnrat_acceptance";
    fs::create_directories(dir);

    criterion(1, "compiler exactness", compiler_exactness);
    criterion(2, "indicator identity", indicator_identity);
    criterion(3, "PTF degree by exact LP", ptf_degree);
    criterion(4, "theorem 1 consistency", theorem1_consistency);
    criterion(5, "Newman pipeline", newman_pipeline);
    criterion(6, "theorem 2 end-to-end", theorem2_end_to_end);
    criterion(7, "sensitivity and correlation", remark_quantities);
    criterion(8, "determinism", [&] { return determinism(cli, dir); });

    std::printf("%d of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
