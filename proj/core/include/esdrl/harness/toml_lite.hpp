#pragma once

#include <stdexcept>
#include <string>

namespace esdrl::harness {

struct TomlError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Converts a TOML document to its JSON equivalent (returned as JSON text).
// Covers the config subset: tables, dotted keys, arrays of tables, inline
// tables, arrays, strings, integers, floats, booleans and # comments.
// Dates and multi-line strings are not supported and raise TomlError with
// a line number.
std::string toml_to_json_text(const std::string& toml_text);

}  // namespace esdrl::harness
