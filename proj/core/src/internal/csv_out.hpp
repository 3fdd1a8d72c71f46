#pragma once

// Internal (not installed): CSV writer with %.17g doubles so repeated runs
// produce byte-identical files.

#include <string>
#include <vector>

#include "src/internal/json_out.hpp"

namespace esdrl::internal {

class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ += ',';
      out_ += header[i];
    }
    out_ += '\n';
  }

  CsvBuilder& cell(double v) {
    sep();
    out_ += format_double(v);
    return *this;
  }
  CsvBuilder& cell(long v) {
    sep();
    out_ += std::to_string(v);
    return *this;
  }
  CsvBuilder& cell(int v) { return cell(static_cast<long>(v)); }
  CsvBuilder& cell(bool v) {
    sep();
    out_ += v ? '1' : '0';
    return *this;
  }
  CsvBuilder& cell(const std::string& v) {
    sep();
    out_ += v;
    return *this;
  }
  void endrow() {
    out_ += '\n';
    col_ = 0;
  }

  const std::string& str() const { return out_; }
  std::string take() { return std::move(out_); }

 private:
  void sep() {
    if (col_++ > 0) out_ += ',';
  }
  std::string out_;
  int col_ = 0;
};

}  // namespace esdrl::internal
