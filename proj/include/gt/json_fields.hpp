#pragma once

// Strict field access for scenario documents. Every failure throws
// std::invalid_argument naming the offending path.

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gt {

using Json = nlohmann::json;

void require_object(const Json& doc, std::string_view where);
void reject_unknown_fields(const Json& doc, std::initializer_list<std::string_view> allowed, std::string_view where);
const Json& required_field(const Json& doc, std::string_view key, std::string_view where);

double get_number(const Json& doc, std::string_view key, std::string_view where);
double get_number_or(const Json& doc, std::string_view key, double fallback, std::string_view where);
long long get_integer(const Json& doc, std::string_view key, std::string_view where);
long long get_integer_or(const Json& doc, std::string_view key, long long fallback, std::string_view where);
std::string get_string(const Json& doc, std::string_view key, std::string_view where);
std::vector<double> get_number_list(const Json& doc, std::string_view key, std::string_view where);

}  // namespace gt
