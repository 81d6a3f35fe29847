#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>

namespace livekv {

/// A scalar field value: null, boolean, finite number, or UTF-8 text.
/// Equality is equality of canonical bytes.
class FieldValue {
 public:
  using Storage = std::variant<std::monostate, bool, double, std::string>;

  FieldValue() = default;
  FieldValue(std::nullptr_t) {}
  FieldValue(bool b) : storage_(b) {}
  /// Throws std::invalid_argument for NaN or infinities.
  FieldValue(double d);
  FieldValue(int i) : FieldValue(static_cast<double>(i)) {}
  FieldValue(std::string s) : storage_(std::move(s)) {}
  FieldValue(const char* s) : storage_(std::string(s)) {}

  bool is_null() const { return std::holds_alternative<std::monostate>(storage_); }
  bool is_bool() const { return std::holds_alternative<bool>(storage_); }
  bool is_number() const { return std::holds_alternative<double>(storage_); }
  bool is_text() const { return std::holds_alternative<std::string>(storage_); }

  bool as_bool() const { return std::get<bool>(storage_); }
  double as_number() const { return std::get<double>(storage_); }
  const std::string& as_text() const { return std::get<std::string>(storage_); }

  const Storage& storage() const { return storage_; }

  /// null -> "null"; booleans -> "true"/"false"; numbers -> canonical decimal;
  /// text -> 0x01 followed by the raw UTF-8 bytes.
  std::string canonical_bytes() const;

  friend bool operator==(const FieldValue& a, const FieldValue& b) {
    return a.canonical_bytes() == b.canonical_bytes();
  }

 private:
  Storage storage_;
};

/// A flat object: field name to value, ordered by name bytes.
using Object = std::map<std::string, FieldValue>;
using FieldSet = std::set<std::string>;

/// Shortest round-trip decimal; integral values with magnitude <= 2^53 are
/// printed as plain integers.
std::string format_number(double value);

/// Throws std::invalid_argument unless the name is non-empty and free of
/// control characters.
void validate_field_name(std::string_view name);

}  // namespace livekv
