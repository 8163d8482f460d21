#pragma once

#include "nnml/labelled.hpp"
#include "nnml/models.hpp"
#include "nnml/search.hpp"

#include <json.hpp>

namespace nnml {

using Json = nlohmann::json;

Json to_json(const Hypersequent& h);
Json to_json(const Derivation& d);
Json to_json(const SearchStats& s);
Json to_json(const ConditionReport& r);
Json to_json(const LNode& n);

// Models are {worlds, valuation} plus one of "bi", "standard", "relational".
Json to_json(const BiModel& m);
Json to_json(const StandardModel& m);
Json to_json(const RelationalModel& m);
Json to_json(const AnyModel& m);

// Throws Error on malformed input.
AnyModel model_from_json(const Json& j);

}  // namespace nnml
