#pragma once

// Internal (not installed): streaming JSON writer. All doubles are emitted
// with 17 significant digits so parsing recovers the exact binary64 value;
// artifact files produced through this writer are byte-stable across runs.

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace esdrl::internal {

class JsonEmitter {
 public:
  std::string take() { return std::move(out_); }
  const std::string& str() const { return out_; }

  JsonEmitter& begin_object() {
    comma();
    out_ += '{';
    stack_.push_back(0);
    return *this;
  }
  JsonEmitter& end_object() {
    out_ += '}';
    stack_.pop_back();
    return *this;
  }
  JsonEmitter& begin_array() {
    comma();
    out_ += '[';
    stack_.push_back(0);
    return *this;
  }
  JsonEmitter& end_array() {
    out_ += ']';
    stack_.pop_back();
    return *this;
  }
  JsonEmitter& key(const char* k) {
    comma();
    append_string(k);
    out_ += ':';
    pending_value_ = true;
    return *this;
  }
  JsonEmitter& value(double v) {
    comma();
    if (!std::isfinite(v)) {
      throw std::runtime_error("JsonEmitter: non-finite number");
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out_ += buf;
    return *this;
  }
  JsonEmitter& value(long long v) {
    comma();
    out_ += std::to_string(v);
    return *this;
  }
  JsonEmitter& value(int v) { return value(static_cast<long long>(v)); }
  JsonEmitter& value(std::size_t v) {
    comma();
    out_ += std::to_string(v);
    return *this;
  }
  JsonEmitter& value(bool v) {
    comma();
    out_ += v ? "true" : "false";
    return *this;
  }
  JsonEmitter& value(const std::string& s) {
    comma();
    append_string(s.c_str());
    return *this;
  }
  JsonEmitter& value(const char* s) {
    comma();
    append_string(s);
    return *this;
  }

 private:
  void comma() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!stack_.empty() && stack_.back()++ > 0) out_ += ',';
  }
  void append_string(const char* s) {
    out_ += '"';
    for (const char* p = s; *p; ++p) {
      switch (*p) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default: out_ += *p;
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<int> stack_;
  bool pending_value_ = false;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace esdrl::internal
