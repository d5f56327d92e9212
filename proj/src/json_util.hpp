#pragma once

#include <string>

#include <json.hpp>

#include "spot/codec.hpp"
#include "spot/errors.hpp"

namespace spot::jsonx {

template <class T>
std::string hex(const T& v) {
  return to_hex(v.to_bytes());
}

template <class T>
T unhex(const nlohmann::json& j) {
  if (!j.is_string()) throw MalformedInput("expected a hex string");
  const Bytes b = from_hex(j.get<std::string>());
  return T::from_bytes(b);
}

template <class T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw MalformedInput(std::string("missing field ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedInput(std::string("bad field ") + key + ": " + e.what());
  }
}

inline const nlohmann::json& at(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw MalformedInput(std::string("missing field ") + key);
  return j.at(key);
}

template <class T>
T unhex_field(const nlohmann::json& j, const char* key) {
  return unhex<T>(at(j, key));
}

}  // namespace spot::jsonx
