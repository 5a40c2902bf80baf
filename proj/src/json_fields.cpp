#include "gt/json_fields.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace gt {

namespace {

[[noreturn]] void fail(std::string_view where, std::string_view message) {
  throw std::invalid_argument(fmt::format("{}: {}", where, message));
}

}  // namespace

void require_object(const Json& doc, std::string_view where) {
  if (!doc.is_object()) fail(where, "expected an object");
}

void reject_unknown_fields(const Json& doc, std::initializer_list<std::string_view> allowed, std::string_view where) {
  require_object(doc, where);
  for (const auto& [key, value] : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(where, fmt::format("unknown field '{}'", key));
    }
  }
}

const Json& required_field(const Json& doc, std::string_view key, std::string_view where) {
  const auto it = doc.find(std::string(key));
  if (it == doc.end()) fail(where, fmt::format("missing field '{}'", key));
  return *it;
}

double get_number(const Json& doc, std::string_view key, std::string_view where) {
  const auto& v = required_field(doc, key, where);
  if (!v.is_number()) fail(where, fmt::format("field '{}' must be a number", key));
  return v.get<double>();
}

double get_number_or(const Json& doc, std::string_view key, double fallback, std::string_view where) {
  return doc.contains(std::string(key)) ? get_number(doc, key, where) : fallback;
}

long long get_integer(const Json& doc, std::string_view key, std::string_view where) {
  const auto& v = required_field(doc, key, where);
  if (!v.is_number_integer()) fail(where, fmt::format("field '{}' must be an integer", key));
  return v.get<long long>();
}

long long get_integer_or(const Json& doc, std::string_view key, long long fallback, std::string_view where) {
  return doc.contains(std::string(key)) ? get_integer(doc, key, where) : fallback;
}

std::string get_string(const Json& doc, std::string_view key, std::string_view where) {
  const auto& v = required_field(doc, key, where);
  if (!v.is_string()) fail(where, fmt::format("field '{}' must be a string", key));
  return v.get<std::string>();
}

std::vector<double> get_number_list(const Json& doc, std::string_view key, std::string_view where) {
  const auto& v = required_field(doc, key, where);
  if (!v.is_array()) fail(where, fmt::format("field '{}' must be an array of numbers", key));
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(where, fmt::format("field '{}' must be an array of numbers", key));
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace gt
