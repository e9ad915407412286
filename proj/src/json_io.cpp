#include "attnrat/json_io.hpp"

#include "attnrat/errors.hpp"

#include <fstream>
#include <sstream>

namespace attnrat::io {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(where + ": missing field \"" + key + "\"");
    return *it;
}

const Json& array_field(const Json& j, const char* key, const std::string& where) {
    const Json& a = field(j, key, where);
    if (!a.is_array()) throw ValidationError(where + "." + key + ": expected an array");
    return a;
}

std::uint64_t unsigned_field(const Json& j, const char* key, const std::string& where) {
    const Json& v = field(j, key, where);
    if (!v.is_number_unsigned()) throw ValidationError(where + "." + key + ": expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::vector<Rational> rational_vector(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ValidationError(where + ": expected an array of rationals");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Json gate_to_json(const AffineGate& g) {
    Json a = Json::array();
    for (const auto& c : g.a) a.push_back(rational_to_json(c));
    return Json{{"a", a}, {"b", rational_to_json(g.b)}};
}

AffineGate gate_from_json(const Json& j, const std::string& where) {
    return AffineGate{rational_vector(field(j, "a", where), where + ".a"), rational_from_json(field(j, "b", where), where + ".b")};
}

Json optional_number(const std::optional<std::uint64_t>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json rational_to_json(const Rational& q) { return format_rational(q); }

Rational rational_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) throw ValidationError(where + ": expected a rational string \"num/den\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

Json to_json(const Polynomial& p) {
    Json terms = Json::array();
    for (const auto& [mono, coeff] : p.terms()) {
        Json exps = Json::object();
        for (const auto& [var, e] : mono.factors()) exps[std::to_string(var)] = e;
        terms.push_back(Json{{"exps", exps}, {"num", coeff.get_num().get_str()}, {"den", coeff.get_den().get_str()}});
    }
    return Json{{"arity", p.arity()}, {"terms", terms}};
}

Json to_json(const CubePolynomial& p) { return to_json(p.to_polynomial()); }

Polynomial polynomial_from_json(const Json& j, const std::string& where) {
    const auto arity = unsigned_field(j, "arity", where);
    Polynomial p(static_cast<std::uint32_t>(arity));
    const Json& terms = array_field(j, "terms", where);
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string at = where + ".terms[" + std::to_string(t) + "]";
        const Json& exps = field(terms[t], "exps", at);
        if (!exps.is_object()) throw ValidationError(at + ".exps: expected an object");
        std::vector<Monomial::Factor> factors;
        for (const auto& [key, e] : exps.items()) {
            std::size_t used = 0;
            unsigned long var = 0;
            try {
                var = std::stoul(key, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != key.size() || key.empty()) throw ValidationError(at + ".exps: bad variable index \"" + key + "\"");
            if (var >= arity) throw ValidationError(at + ".exps: variable " + key + " out of range for arity");
            if (!e.is_number_unsigned()) throw ValidationError(at + ".exps: exponents must be nonnegative integers");
            factors.emplace_back(static_cast<std::uint32_t>(var), e.get<std::uint32_t>());
        }
        const Json& num = field(terms[t], "num", at);
        const Json& den = field(terms[t], "den", at);
        auto text = [&](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        const Rational coeff = parse_rational(text(num) + "/" + text(den));
        p.add_term(Monomial(std::move(factors)), coeff);
    }
    return p;
}

Json to_json(const ReluNetwork& net) {
    Json layers = Json::array();
    for (const auto& layer : net.layers()) {
        Json gates = Json::array();
        for (const auto& g : layer) gates.push_back(gate_to_json(g));
        layers.push_back(gates);
    }
    return Json{{"inputDim", net.input_dim()}, {"layers", layers}, {"readout", gate_to_json(net.readout())}};
}

ReluNetwork network_from_json(const Json& j, const std::string& where) {
    const auto dim = unsigned_field(j, "inputDim", where);
    const Json& layers = array_field(j, "layers", where);
    std::vector<std::vector<AffineGate>> parsed;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const std::string at = where + ".layers[" + std::to_string(l) + "]";
        if (!layers[l].is_array()) throw ValidationError(at + ": expected an array of gates");
        std::vector<AffineGate> gates;
        for (std::size_t g = 0; g < layers[l].size(); ++g) {
            gates.push_back(gate_from_json(layers[l][g], at + "[" + std::to_string(g) + "]"));
        }
        parsed.push_back(std::move(gates));
    }
    return ReluNetwork(dim, std::move(parsed), gate_from_json(field(j, "readout", where), where + ".readout"));
}

Json to_json(const LayerSpec& layer) {
    Json heads = Json::array();
    for (const auto& head : layer.heads()) {
        Json weights = Json::array();
        Json values = Json::array();
        for (std::uint32_t i = 0; i < head.n(); ++i) {
            Json table = Json::array();
            for (int a = 0; a < 2; ++a) {
                table.push_back(Json::array({rational_to_json(head.weight(i, a, 0)), rational_to_json(head.weight(i, a, 1))}));
            }
            weights.push_back(table);
            Json pair = Json::array();
            for (int b = 0; b < 2; ++b) {
                Json coords = Json::array();
                for (const auto& c : head.value(i, b)) coords.push_back(rational_to_json(c));
                pair.push_back(coords);
            }
            values.push_back(pair);
        }
        heads.push_back(Json{{"weights", weights}, {"values", values}});
    }
    Json post;
    if (layer.has_rational_post()) {
        const RationalPost& r = layer.rational_post();
        post = Json{{"kind", "rational"}, {"p", r.degree_bound}, {"P", to_json(r.numerator)}, {"Q", to_json(r.denominator)}};
    } else {
        const ReluPost& r = layer.relu_post();
        post = Json{{"kind", "relu"}, {"network", to_json(r.network)}, {"tau", rational_to_json(r.threshold)}};
    }
    return Json{{"n", layer.n()}, {"d", layer.d()}, {"heads", heads}, {"post", post}};
}

LayerSpec layer_from_json(const Json& j) {
    const std::string where = "layer";
    const auto n = static_cast<std::uint32_t>(unsigned_field(j, "n", where));
    const auto d = static_cast<std::uint32_t>(unsigned_field(j, "d", where));
    const Json& heads = array_field(j, "heads", where);
    if (heads.empty()) throw ValidationError("layer.heads: at least one head is required");
    std::vector<HeadSpec> parsed;
    for (std::size_t h = 0; h < heads.size(); ++h) {
        const std::string at = "layer.heads[" + std::to_string(h) + "]";
        const Json& weights = array_field(heads[h], "weights", at);
        const Json& values = array_field(heads[h], "values", at);
        if (weights.size() != n || values.size() != n) {
            throw ValidationError(at + ": weights and values need one entry per position (n = " + std::to_string(n) + ")");
        }
        std::vector<WeightTable> tables(n);
        std::vector<ValuePair> pairs(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            const std::string wat = at + ".weights[" + std::to_string(i) + "]";
            const Json& w = weights[i];
            if (w.is_array() && w.size() == 4 && !w[0].is_array()) {
                for (int k = 0; k < 4; ++k) tables[i][k / 2][k % 2] = rational_from_json(w[k], wat);
            } else if (w.is_array() && w.size() == 2 && w[0].is_array() && w[1].is_array() && w[0].size() == 2 &&
                       w[1].size() == 2) {
                for (int a = 0; a < 2; ++a) {
                    for (int b = 0; b < 2; ++b) tables[i][a][b] = rational_from_json(w[a][b], wat);
                }
            } else {
                throw ValidationError(wat + ": expected [[w00, w01], [w10, w11]] or [w00, w01, w10, w11]");
            }
            const std::string vat = at + ".values[" + std::to_string(i) + "]";
            if (!values[i].is_array() || values[i].size() != 2) throw ValidationError(vat + ": expected [v(0), v(1)]");
            for (int b = 0; b < 2; ++b) pairs[i][b] = rational_vector(values[i][b], vat);
        }
        parsed.emplace_back(n, d, std::move(tables), std::move(pairs));
    }
    const Json& post = field(j, "post", where);
    const Json& kind = field(post, "kind", "layer.post");
    if (kind == "rational") {
        const auto p = static_cast<std::uint32_t>(unsigned_field(post, "p", "layer.post"));
        return LayerSpec(std::move(parsed),
                         RationalPost{polynomial_from_json(field(post, "P", "layer.post"), "layer.post.P"),
                                      polynomial_from_json(field(post, "Q", "layer.post"), "layer.post.Q"), p});
    }
    if (kind == "relu") {
        Rational tau = 0;
        if (post.contains("tau")) tau = rational_from_json(post["tau"], "layer.post.tau");
        return LayerSpec(std::move(parsed),
                         ReluPost{network_from_json(field(post, "network", "layer.post"), "layer.post.network"), tau});
    }
    throw ValidationError("layer.post.kind: expected \"rational\" or \"relu\"");
}

Json to_json(const CubeRationalFunction& f) {
    return Json{{"n", f.arity()},
                {"numerator", to_json(f.numerator())},
                {"denominator", to_json(f.denominator())},
                {"denominatorPositive", f.denominator_positive()},
                {"denominatorCertified", f.denominator_certified()}};
}

Json to_json(const CompiledLayer& compiled) {
    return Json{{"function", to_json(compiled.function)},
                {"report",
                 {{"h", compiled.h},
                  {"p", compiled.declared_p},
                  {"degreeBound", compiled.degree_bound},
                  {"achievedNumDegree", compiled.function.numerator().degree()},
                  {"achievedDenDegree", compiled.function.denominator().degree()},
                  {"formalDegree", compiled.formal_degree},
                  {"nonvanishingAssumed", compiled.nonvanishing_assumed}}}};
}

Json to_json(const EquivalenceReport& report) {
    Json mismatch = nullptr;
    if (report.mismatch) {
        mismatch = Json{{"x", bitstring(report.mismatch->x, report.n)},
                        {"lhs", rational_to_json(report.mismatch->lhs)},
                        {"rhs", rational_to_json(report.mismatch->rhs)}};
    }
    return Json{{"n", report.n},
                {"degreeBound", report.degree_bound},
                {"achievedNumDegree", report.achieved_num_degree},
                {"achievedDenDegree", report.achieved_den_degree},
                {"equivalenceChecked", report.equivalence_checked},
                {"pointsChecked", report.points_checked},
                {"mismatch", mismatch}};
}

Json to_json(const BoundReport& report) {
    Json j{{"theorem", std::to_string(report.theorem)},
           {"n", report.n},
           {"h", report.h},
           {"p", report.p},
           {"signRepresents", report.sign_represents},
           {"bound", rational_to_json(report.bound)},
           {"satisfied", report.satisfied},
           {"contradiction", report.contradiction},
           {"seed", optional_number(report.seed)},
           {"trials", optional_number(report.trials)},
           {"witness", report.witness}};
    if (report.theorem == 2) {
        j["m"] = report.m;
        j["l"] = report.l;
        j["tau"] = report.tau ? rational_to_json(*report.tau) : Json(nullptr);
        j["gamma"] = report.gamma ? rational_to_json(*report.gamma) : Json(nullptr);
        j["hypothesisMet"] = report.hypothesis_met;
        j["epsilon"] = report.epsilon ? rational_to_json(*report.epsilon) : Json(nullptr);
        j["newmanK"] = report.newman_k;
        j["approximationSupError"] = report.approximation_error;
        j["gridPoints"] = report.grid_points;
        j["marginInequalitiesHold"] = report.margin_inequalities_hold;
        j["achievedDegree"] = report.achieved_degree;
        j["reluBoundQuantity"] = report.relu_bound_quantity;
        j["reluBoundInequality"] = "h m^l ln(2l/gamma)^(2l) >= n/C, C symbolic";
    } else {
        j["achievedDegree"] = report.achieved_degree;
    }
    return j;
}

Json to_json(const CampaignResult& result) {
    return Json{{"n", result.n},
                {"trials", result.trials},
                {"seed", result.seed},
                {"signRepresentations", result.sign_representations},
                {"contradictions", result.contradictions},
                {"resampledDenominators", result.resampled},
                {"firstRepresentation", optional_number(result.first_representation)},
                {"note", "randomized falsification run: absence of representations is recorded, not proven"}};
}

Json to_json(const ApproximationResult& result) {
    Json gate_k = Json::array();
    for (const auto& layer : result.gate_k) gate_k.push_back(layer);
    return Json{{"epsilon", rational_to_json(result.epsilon)},
                {"delta", rational_to_json(result.delta)},
                {"radius", rational_to_json(result.radius)},
                {"newmanK", result.k},
                {"gateK", gate_k},
                {"degreeAchieved", result.degree},
                {"numDegree", result.num_degree},
                {"denDegree", result.den_degree},
                {"gateSupError", decimal_string(result.gate_error)},
                {"supError", decimal_string(result.sup_error)},
                {"gridPoints", result.grid_points},
                {"univariateGrid", result.univariate_grid},
                {"withinEpsilon", result.sup_error.compare(result.epsilon) <= 0}};
}

Json parse_text(const std::string& text, const std::string& where) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(where + ": malformed JSON: " + e.what());
    }
}

Json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_text(buffer.str(), path);
}

}  // namespace attnrat::io
