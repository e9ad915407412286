#pragma once

#include "attnrat/approximation.hpp"
#include "attnrat/attention.hpp"
#include "attnrat/compiler.hpp"
#include "attnrat/parity.hpp"
#include "attnrat/polynomial.hpp"
#include "attnrat/relu_network.hpp"

#include "json.hpp"

#include <string>

namespace attnrat::io {

using Json = nlohmann::ordered_json;

// Every parse function throws ValidationError with a path-like context on
// malformed input.

Json rational_to_json(const Rational& q);
// Accepts "p", "p/q" strings and JSON integers.
Rational rational_from_json(const Json& j, const std::string& where);

Json to_json(const Polynomial& p);
Json to_json(const CubePolynomial& p);
Polynomial polynomial_from_json(const Json& j, const std::string& where = "polynomial");

Json to_json(const ReluNetwork& net);
ReluNetwork network_from_json(const Json& j, const std::string& where = "network");

// Weight tables are written as [[w(0,0), w(0,1)], [w(1,0), w(1,1)]] per
// position ([a][b] with a the last bit); a flat [w00, w01, w10, w11] is
// also accepted on input.
Json to_json(const LayerSpec& layer);
LayerSpec layer_from_json(const Json& j);

Json to_json(const CubeRationalFunction& f);
Json to_json(const CompiledLayer& compiled);
Json to_json(const EquivalenceReport& report);
Json to_json(const BoundReport& report);
Json to_json(const CampaignResult& result);
Json to_json(const ApproximationResult& result);

Json parse_text(const std::string& text, const std::string& where);
Json read_file(const std::string& path);

}  // namespace attnrat::io
