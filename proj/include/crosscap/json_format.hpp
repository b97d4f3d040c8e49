#pragma once

#include <string>

#include "json.hpp"

namespace crosscap {

using OrderedJson = nlohmann::ordered_json;

/// %.17g, with non-finite values written as null.
std::string format_double(double x);

/// Two-space indented JSON in insertion order with every float printed by format_double.
/// The output ends with a newline.
std::string format_json(const OrderedJson& doc);

}  // namespace crosscap
