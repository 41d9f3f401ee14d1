#include "semem/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "semem/error.hpp"

namespace semem {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDuplicateType: return "DuplicateType";
    case ErrorCode::kUnknownParent: return "UnknownParent";
    case ErrorCode::kHierarchyCycle: return "HierarchyCycle";
    case ErrorCode::kUnknownType: return "UnknownType";
    case ErrorCode::kUnknownSlot: return "UnknownSlot";
    case ErrorCode::kNotAnInstance: return "NotAnInstance";
    case ErrorCode::kInvalidSignature: return "InvalidSignature";
    case ErrorCode::kMalformedScene: return "MalformedScene";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNoVerbFound: return "NoVerbFound";
    case ErrorCode::kNoPatientFound: return "NoPatientFound";
    case ErrorCode::kNoTripletFound: return "NoTripletFound";
    case ErrorCode::kUnknownModifier: return "UnknownModifier";
    case ErrorCode::kUnsupportedConjunction: return "UnsupportedConjunction";
    case ErrorCode::kInvalidLexicon: return "InvalidLexicon";
    case ErrorCode::kStaleProposal: return "StaleProposal";
    case ErrorCode::kDialogueBusy: return "DialogueBusy";
    case ErrorCode::kUnknownPrompt: return "UnknownPrompt";
    case ErrorCode::kPromptNotOpen: return "PromptNotOpen";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kDuplicateSkill: return "DuplicateSkill";
    case ErrorCode::kUnknownSkill: return "UnknownSkill";
    case ErrorCode::kStalePlan: return "StalePlan";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kMalformedDocument: return "MalformedDocument";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kIntegrityViolation: return "IntegrityViolation";
  }
  return "Unknown";
}

double wrap_degrees(double angle) {
  double wrapped = std::fmod(angle + 180.0, 360.0);
  if (wrapped < 0) wrapped += 360.0;
  return wrapped - 180.0;
}

bool Pose::is_finite() const noexcept {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(position.begin(), position.end(), finite) &&
         std::all_of(orientation.begin(), orientation.end(), finite);
}

bool Pose::is_valid() const noexcept {
  return is_finite() && std::all_of(orientation.begin(), orientation.end(),
                                    [](double a) { return a >= -180.0 && a < 180.0; });
}

Pose Pose::normalized() const {
  Pose out = *this;
  for (double& a : out.orientation) a = wrap_degrees(a);
  return out;
}

std::vector<double> Pose::as_vector() const {
  return {position[0], position[1], position[2], orientation[0], orientation[1], orientation[2]};
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  auto begin = std::find_if_not(text.begin(), text.end(), is_space);
  auto end = std::find_if_not(text.rbegin(), std::string_view::reverse_iterator(begin), is_space).base();
  return std::string(begin, end);
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

namespace {

bool vectors_match(const std::vector<double>& filter, const std::vector<double>& actual) {
  if (filter.size() != actual.size()) return false;
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < filter.size(); ++i) {
    diff += (filter[i] - actual[i]) * (filter[i] - actual[i]);
    norm += filter[i] * filter[i];
  }
  return std::sqrt(diff) <= 1e-6 * (1.0 + std::sqrt(norm));
}

}  // namespace

bool value_matches(const Value& filter, const Value& actual) {
  if (const auto* text = std::get_if<std::string>(&filter)) {
    const auto* other = std::get_if<std::string>(&actual);
    return other != nullptr && iequals(trim(*text), trim(*other));
  }
  std::vector<double> wanted = std::holds_alternative<Pose>(filter)
                                   ? std::get<Pose>(filter).as_vector()
                                   : std::get<std::vector<double>>(filter);
  if (const auto* pose = std::get_if<Pose>(&actual)) {
    if (wanted.size() == 3) {
      return vectors_match(wanted, {pose->position.begin(), pose->position.end()});
    }
    return vectors_match(wanted, pose->as_vector());
  }
  if (const auto* numbers = std::get_if<std::vector<double>>(&actual)) {
    return vectors_match(wanted, *numbers);
  }
  return false;
}

std::string format_value(const Value& value) {
  std::ostringstream out;
  auto write_numbers = [&out](const auto& numbers) {
    out << '[';
    bool first = true;
    for (double v : numbers) {
      if (!first) out << ',';
      out << v;
      first = false;
    }
    out << ']';
  };
  if (const auto* text = std::get_if<std::string>(&value)) {
    out << *text;
  } else if (const auto* numbers = std::get_if<std::vector<double>>(&value)) {
    write_numbers(*numbers);
  } else {
    const auto& pose = std::get<Pose>(value);
    write_numbers(pose.position);
    out << '@';
    write_numbers(pose.orientation);
  }
  return out.str();
}

}  // namespace semem
