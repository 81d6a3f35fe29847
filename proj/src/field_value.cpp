#include "livekv/field_value.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace livekv {

namespace {
constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53
}  // namespace

FieldValue::FieldValue(double d) : storage_(d) {
  if (!std::isfinite(d)) {
    throw std::invalid_argument("field value: numbers must be finite");
  }
}

std::string format_number(double value) {
  if (std::trunc(value) == value && std::fabs(value) <= kMaxExactInteger) {
    return std::to_string(static_cast<std::int64_t>(value));
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw std::runtime_error("format_number: to_chars failed");
  }
  return std::string(buf, end);
}

std::string FieldValue::canonical_bytes() const {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const std::string& s) const {
      std::string out;
      out.reserve(s.size() + 1);
      out.push_back('\x01');
      out += s;
      return out;
    }
  };
  return std::visit(Visitor{}, storage_);
}

void validate_field_name(std::string_view name) {
  if (name.empty()) {
    throw std::invalid_argument("field name must be non-empty");
  }
  for (unsigned char c : name) {
    if (c < 0x20 || c == 0x7f) {
      throw std::invalid_argument("field name contains a control character");
    }
  }
}

}  // namespace livekv
