#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace semem {

struct NodeId {
  std::uint64_t value = 0;
  auto operator<=>(const NodeId&) const = default;
};

struct EdgeId {
  std::uint64_t value = 0;
  auto operator<=>(const EdgeId&) const = default;
};

/// Position in millimetres, orientation (yaw, pitch, roll) in degrees within [-180, 180).
struct Pose {
  std::array<double, 3> position{};
  std::array<double, 3> orientation{};

  bool operator==(const Pose&) const = default;

  bool is_finite() const noexcept;
  bool is_valid() const noexcept;
  /// Same pose with every angle wrapped into [-180, 180).
  Pose normalized() const;
  std::vector<double> as_vector() const;
};

double wrap_degrees(double angle);

/// Static value held by a node: text, a number vector (a scalar is a 1-vector), or a pose.
using Value = std::variant<std::string, std::vector<double>, Pose>;

struct PropertyValue {
  std::string slot;
  Value value;

  bool operator==(const PropertyValue&) const = default;
};

/// Filter semantics used by queries: text is compared case-insensitively after
/// trimming; number vectors match when ||a - b|| <= 1e-6 * (1 + ||filter||).
/// A vector filter of length 3 against a pose compares the position only.
bool value_matches(const Value& filter, const Value& actual);

std::string format_value(const Value& value);

// Text helpers shared across modules.
std::string to_lower(std::string_view text);
std::string trim(std::string_view text);
bool iequals(std::string_view a, std::string_view b);

}  // namespace semem

template <>
struct std::hash<semem::NodeId> {
  std::size_t operator()(const semem::NodeId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

template <>
struct std::hash<semem::EdgeId> {
  std::size_t operator()(const semem::EdgeId& id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
