#pragma once

#include "adcert/fixtures.hpp"
#include "adcert/network.hpp"

#include <json.hpp>

#include <string>

namespace adcert {

using json = nlohmann::ordered_json;

json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j);

json activation_to_json(const PiecewiseFn& f);
// Accepts the full piece list or a catalog shorthand {"catalog": name, ...}.
PiecewiseFn activation_from_json(const json& j);

json network_to_json(const Network& net);
// Accepts a bare network object or {"network": {...}, ...}.
Network network_from_json(const json& j);

json answers_to_json(const AnswerSheet& a);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Network load_network(const std::string& path);

} // namespace adcert
