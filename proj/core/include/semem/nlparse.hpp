#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semem/types.hpp"

namespace semem {

/// Word classes of the restricted instruction language. Loaded from a JSON
/// object with arrays "verbs", "colors", "shapes" and "stopwords"; the four
/// sets must be pairwise disjoint.
struct Lexicon {
  std::set<std::string> verbs;
  std::set<std::string> colors;
  std::set<std::string> shapes;
  std::set<std::string> stopwords;

  static Lexicon from_json(std::string_view text);
  static Lexicon load(const std::filesystem::path& path);
  std::string to_json() const;

  /// "color" or "shape" for known adjectives.
  std::optional<std::string> adjective_slot(std::string_view word) const;
};

enum class Determiner { kNone, kDefinite, kIndefinite };

std::string_view to_string(Determiner determiner) noexcept;

struct ObjectDescriptor {
  std::string type_word;
  std::vector<PropertyValue> modifiers;
  Determiner determiner = Determiner::kNone;

  bool operator==(const ObjectDescriptor&) const = default;
};

/// Predicate-argument structure of one instruction.
struct IntentFrame {
  std::string actor;
  std::string action;
  ObjectDescriptor patient;
  std::string raw;

  bool operator==(const IntentFrame&) const = default;
  /// Equality ignoring the original text.
  bool same_intent(const IntentFrame& other) const {
    return actor == other.actor && action == other.action && patient == other.patient;
  }
};

enum class ParseStrategy { kHeuristic, kTriplet };

std::string_view to_string(ParseStrategy strategy) noexcept;
std::optional<ParseStrategy> parse_strategy_name(std::string_view name);

enum class Tag { kProperNoun, kVerb, kAdjective, kDeterminer, kStopword, kConjunction, kPunctuation, kNoun };

struct TaggedToken {
  std::string text;
  Tag tag;
};

/// Actor assumed when the instruction carries no vocative.
inline constexpr std::string_view kDefaultActor = "yumi";

/// Lowercased word tokens; ",", "!", ".", "?", ";" and ":" become tokens of
/// their own. Throws EmptyInput for blank text.
std::vector<std::string> tokenize(std::string_view text);

/// Rule-table tagging shared by both strategies. An out-of-lexicon word in
/// the imperative verb slot is tagged as a verb when the sentence has no
/// known verb.
std::vector<TaggedToken> tag_tokens(const std::vector<std::string>& tokens, const Lexicon& lexicon);

IntentFrame parse_heuristic(std::string_view text, const Lexicon& lexicon);
IntentFrame parse_triplet(std::string_view text, const Lexicon& lexicon);
IntentFrame parse(std::string_view text, const Lexicon& lexicon, ParseStrategy strategy = ParseStrategy::kHeuristic);

/// Canonical template sentence for a frame: "<actor>, <verb> [det] [adj]* <noun>!".
std::string render(const IntentFrame& frame);

}  // namespace semem
