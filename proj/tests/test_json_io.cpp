#include "attnrat/errors.hpp"
#include "attnrat/fixtures.hpp"
#include "attnrat/json_io.hpp"
#include "test_support.hpp"

#include "doctest.h"

using namespace attnrat;
using attnrat::testing::Gen;
using io::Json;

TEST_CASE("polynomial JSON round trip and term order") {
    Gen gen(31);
    for (int i = 0; i < 100; ++i) {
        Polynomial p = gen.polynomial(3, 5, 3);
        Json j = io::to_json(p);
        CHECK(io::polynomial_from_json(j) == p);
        CHECK(Json::parse(j.dump()) == j);
    }
    Polynomial q(2);
    q.add_term(Monomial{{1, 1}}, make_rational(-3, 2));
    q.add_term(Monomial{{0, 2}}, 1);
    Json j = io::to_json(q);
    CHECK(j["terms"][0]["exps"] == Json{{"0", 2}});
    CHECK(j["terms"][1]["num"] == "-3");
    CHECK(j["terms"][1]["den"] == "2");
}

TEST_CASE("polynomial JSON rejects malformed input") {
    CHECK_THROWS_AS(io::polynomial_from_json(Json::parse(R"({"terms": []})")), ValidationError);
    CHECK_THROWS_AS(io::polynomial_from_json(Json::parse(R"({"arity": 1, "terms": [{"exps": {"3": 1}, "num": "1", "den": "1"}]})")),
                    ValidationError);
    CHECK_THROWS_AS(io::polynomial_from_json(Json::parse(R"({"arity": 1, "terms": [{"exps": {"x": 1}, "num": "1", "den": "1"}]})")),
                    ValidationError);
    CHECK_THROWS_AS(io::polynomial_from_json(Json::parse(R"({"arity": 1, "terms": [{"exps": {}, "num": "1", "den": "0"}]})")),
                    ValidationError);
}

TEST_CASE("layer JSON round trip for both post-processing kinds") {
    Gen gen(5);
    for (int i = 0; i < 20; ++i) {
        LayerSpec layer = attnrat::testing::random_rational_layer(gen, 3, 2, 2, 2);
        LayerSpec back = io::layer_from_json(io::to_json(layer));
        CHECK(io::to_json(back) == io::to_json(layer));
        for (CubeMask x = 0; x < 8; ++x) CHECK(layer_eval(back, x) == layer_eval(layer, x));
    }
    LayerSpec hat = relu_hat_layer(3);
    CHECK(io::to_json(io::layer_from_json(io::to_json(hat))) == io::to_json(hat));
}

TEST_CASE("weight tables accept nested and flat forms") {
    Json nested = io::to_json(relu_hat_layer(2));
    Json flat = nested;
    nested["heads"][0]["weights"][0] = Json::parse(R"([["1/1", "2/1"], ["3/1", "4/1"]])");
    flat["heads"][0]["weights"][0] = Json::parse(R"(["1/1", "2/1", "3/1", "4/1"])");
    LayerSpec a = io::layer_from_json(nested);
    LayerSpec b = io::layer_from_json(flat);
    CHECK(a.heads()[0].weight(0, 1, 0) == 3);
    CHECK(b.heads()[0].weight(0, 1, 0) == 3);
    CHECK(a.heads()[0].weight(0, 0, 1) == 2);
    flat["heads"][0]["weights"][0] = Json::parse(R"(["1/1", "2/1", "3/1"])");
    CHECK_THROWS_AS(io::layer_from_json(flat), ValidationError);
    nested["post"]["kind"] = "softmax";
    CHECK_THROWS_AS(io::layer_from_json(nested), ValidationError);
}

TEST_CASE("network JSON round trip and validation") {
    ReluNetwork tent = tent_network();
    ReluNetwork back = io::network_from_json(io::to_json(tent));
    CHECK(io::to_json(back) == io::to_json(tent));
    Json bad = io::to_json(tent);
    bad["readout"]["b"] = "1/1";
    try {
        io::network_from_json(bad);
        FAIL("expected a normalization error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("readout") != std::string::npos);
    }
    CHECK_THROWS_AS(io::rational_from_json(Json(1.5), "x"), ValidationError);
    CHECK(io::rational_from_json(Json(-3), "x") == -3);
    CHECK_THROWS_AS(io::parse_text("{", "inline"), ValidationError);
}
