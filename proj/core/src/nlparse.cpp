#include "semem/nlparse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semem/error.hpp"
#include "json_diagnostics.hpp"

namespace semem {

namespace {

using nlohmann::json;

constexpr std::string_view kPunctuation = ",!.?;:";

bool is_punctuation(std::string_view token) {
  return token.size() == 1 && kPunctuation.find(token.front()) != std::string_view::npos;
}

std::optional<Determiner> determiner_of(std::string_view word) {
  if (word == "the") return Determiner::kDefinite;
  if (word == "a" || word == "an") return Determiner::kIndefinite;
  return std::nullopt;
}

[[noreturn]] void lexicon_error(const std::string& message) { throw Error(ErrorCode::kInvalidLexicon, message); }

}  // namespace

// ---------------------------------------------------------------------------
// Lexicon

Lexicon Lexicon::from_json(std::string_view text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    lexicon_error("lexicon is not valid JSON (" + detail::describe_position(text, e.byte) + ")");
  }
  if (!document.is_object()) lexicon_error("lexicon must be a JSON object");

  Lexicon lexicon;
  const std::pair<const char*, std::set<std::string>*> fields[] = {
      {"verbs", &lexicon.verbs}, {"colors", &lexicon.colors}, {"shapes", &lexicon.shapes},
      {"stopwords", &lexicon.stopwords}};
  for (const auto& [key, value] : document.items()) {
    bool known = std::any_of(std::begin(fields), std::end(fields), [&](const auto& f) { return key == f.first; });
    if (!known) lexicon_error("lexicon: unknown field '" + key + "'");
  }
  for (const auto& [key, target] : fields) {
    if (!document.contains(key) || !document.at(key).is_array()) {
      lexicon_error(std::string("lexicon: '") + key + "' must be an array of strings");
    }
    for (const auto& word : document.at(key)) {
      if (!word.is_string()) lexicon_error(std::string("lexicon: '") + key + "' must be an array of strings");
      std::string normalized = to_lower(trim(word.get<std::string>()));
      if (normalized.empty() || normalized.find_first_of(" \t,!.?;:") != std::string::npos) {
        lexicon_error(std::string("lexicon: invalid word in '") + key + "'");
      }
      if (determiner_of(normalized) || normalized == "and") {
        lexicon_error("lexicon: '" + normalized + "' is a reserved grammatical word");
      }
      target->insert(normalized);
    }
  }
  for (std::size_t i = 0; i < std::size(fields); ++i) {
    for (std::size_t j = i + 1; j < std::size(fields); ++j) {
      for (const auto& word : *fields[i].second) {
        if (fields[j].second->contains(word)) {
          lexicon_error("lexicon: '" + word + "' appears in both '" + fields[i].first + "' and '" +
                        fields[j].first + "'");
        }
      }
    }
  }
  return lexicon;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open lexicon '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

std::string Lexicon::to_json() const {
  json document{{"verbs", verbs}, {"colors", colors}, {"shapes", shapes}, {"stopwords", stopwords}};
  return document.dump(2) + "\n";
}

std::optional<std::string> Lexicon::adjective_slot(std::string_view word) const {
  std::string key(word);
  if (colors.contains(key)) return "color";
  if (shapes.contains(key)) return "shape";
  return std::nullopt;
}

std::string_view to_string(Determiner determiner) noexcept {
  switch (determiner) {
    case Determiner::kNone: return "none";
    case Determiner::kDefinite: return "definite";
    case Determiner::kIndefinite: return "indefinite";
  }
  return "?";
}

std::string_view to_string(ParseStrategy strategy) noexcept {
  return strategy == ParseStrategy::kHeuristic ? "heuristic" : "triplet";
}

std::optional<ParseStrategy> parse_strategy_name(std::string_view name) {
  std::string key = to_lower(name);
  if (key == "heuristic") return ParseStrategy::kHeuristic;
  if (key == "triplet") return ParseStrategy::kTriplet;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Tokens and tags

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(to_lower(current));
    current.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (kPunctuation.find(c) != std::string_view::npos) {
      flush();
      tokens.emplace_back(1, c);
    } else {
      current.push_back(c);
    }
  }
  flush();
  if (tokens.empty()) throw Error(ErrorCode::kEmptyInput, "instruction is empty");
  return tokens;
}

std::vector<TaggedToken> tag_tokens(const std::vector<std::string>& tokens, const Lexicon& lexicon) {
  std::vector<TaggedToken> tagged;
  tagged.reserve(tokens.size());
  bool has_verb = false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& word = tokens[i];
    Tag tag = Tag::kNoun;
    if (is_punctuation(word)) {
      tag = Tag::kPunctuation;
    } else if (i == 0 && tokens.size() > 1 && tokens[1] == ",") {
      tag = Tag::kProperNoun;
    } else if (word == "and") {
      tag = Tag::kConjunction;
    } else if (determiner_of(word)) {
      tag = Tag::kDeterminer;
    } else if (lexicon.verbs.contains(word)) {
      tag = Tag::kVerb;
      has_verb = true;
    } else if (lexicon.adjective_slot(word)) {
      tag = Tag::kAdjective;
    } else if (lexicon.stopwords.contains(word)) {
      tag = Tag::kStopword;
    }
    tagged.push_back({word, tag});
  }
  if (!has_verb) {
    // Imperative slot: first content word after the vocative (or at the start).
    for (auto& token : tagged) {
      if (token.tag == Tag::kProperNoun || token.tag == Tag::kPunctuation || token.tag == Tag::kStopword) continue;
      if (token.tag == Tag::kNoun) token.tag = Tag::kVerb;
      break;
    }
  }
  return tagged;
}

namespace {

void reject_conjunctions(const std::vector<TaggedToken>& tagged) {
  for (const auto& token : tagged) {
    if (token.tag == Tag::kConjunction) {
      throw Error(ErrorCode::kUnsupportedConjunction,
                  "only single-clause commands are supported; found '" + token.text + "'");
    }
  }
}

PropertyValue modifier_for(const std::string& word, const Lexicon& lexicon) {
  return PropertyValue{*lexicon.adjective_slot(word), Value{word}};
}

[[noreturn]] void unknown_modifier(const std::string& word) {
  throw Error(ErrorCode::kUnknownModifier, "'" + word + "' is not a known color or shape word");
}

}  // namespace

// ---------------------------------------------------------------------------
// Strategies

IntentFrame parse_heuristic(std::string_view text, const Lexicon& lexicon) {
  auto tagged = tag_tokens(tokenize(text), lexicon);
  reject_conjunctions(tagged);

  IntentFrame frame;
  frame.raw = std::string(text);
  frame.actor = tagged.front().tag == Tag::kProperNoun ? tagged.front().text : std::string(kDefaultActor);

  auto verb = std::find_if(tagged.begin(), tagged.end(), [](const auto& t) { return t.tag == Tag::kVerb; });
  if (verb == tagged.end()) throw Error(ErrorCode::kNoVerbFound, "no action verb in '" + frame.raw + "'");
  frame.action = verb->text;

  auto head = std::find_if(tagged.rbegin(), tagged.rend(), [](const auto& t) { return t.tag == Tag::kNoun; });
  if (head == tagged.rend() || head.base() - 1 < verb) {
    throw Error(ErrorCode::kNoPatientFound, "no object to act on in '" + frame.raw + "'");
  }
  auto head_it = head.base() - 1;
  frame.patient.type_word = head_it->text;

  for (auto it = verb + 1; it != head_it; ++it) {
    switch (it->tag) {
      case Tag::kAdjective:
        frame.patient.modifiers.push_back(modifier_for(it->text, lexicon));
        break;
      case Tag::kDeterminer:
        if (frame.patient.determiner == Determiner::kNone) frame.patient.determiner = *determiner_of(it->text);
        break;
      case Tag::kNoun:
        unknown_modifier(it->text);
      default:
        break;
    }
  }
  return frame;
}

namespace {

struct NounPhrase {
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the head
  Determiner determiner = Determiner::kNone;
};

// Det? (Adj | Noun)* Noun, or a lone proper noun.
std::optional<NounPhrase> chunk_at(const std::vector<TaggedToken>& tagged, std::size_t start) {
  const Tag first = tagged[start].tag;
  if (first == Tag::kProperNoun) return NounPhrase{start, start + 1, Determiner::kNone};
  std::size_t i = start;
  NounPhrase phrase{start, start, Determiner::kNone};
  if (first == Tag::kDeterminer) {
    phrase.determiner = *determiner_of(tagged[i].text);
    ++i;
  }
  std::optional<std::size_t> last_noun;
  while (i < tagged.size() && (tagged[i].tag == Tag::kAdjective || tagged[i].tag == Tag::kNoun)) {
    if (tagged[i].tag == Tag::kNoun) last_noun = i;
    ++i;
  }
  if (!last_noun || *last_noun != i - 1) return std::nullopt;
  phrase.end = i;
  return phrase;
}

}  // namespace

IntentFrame parse_triplet(std::string_view text, const Lexicon& lexicon) {
  auto tagged = tag_tokens(tokenize(text), lexicon);
  reject_conjunctions(tagged);

  IntentFrame frame;
  frame.raw = std::string(text);

  std::optional<std::size_t> verb;
  std::optional<NounPhrase> subject;
  std::optional<NounPhrase> object;
  for (std::size_t i = 0; i < tagged.size();) {
    if (tagged[i].tag == Tag::kVerb && !verb) {
      verb = i++;
      continue;
    }
    auto phrase = chunk_at(tagged, i);
    if (!phrase) {
      ++i;
      continue;
    }
    if (!verb && !subject) subject = phrase;
    if (verb && !object) object = phrase;
    i = phrase->end;
  }
  if (!verb || !object) {
    throw Error(ErrorCode::kNoTripletFound, "no subject-predicate-object triplet in '" + frame.raw + "'");
  }

  frame.actor = subject ? tagged[subject->end - 1].text : std::string(kDefaultActor);
  frame.action = tagged[*verb].text;
  frame.patient.type_word = tagged[object->end - 1].text;
  frame.patient.determiner = object->determiner;
  for (std::size_t i = object->begin; i + 1 < object->end; ++i) {
    if (tagged[i].tag == Tag::kAdjective) {
      frame.patient.modifiers.push_back(modifier_for(tagged[i].text, lexicon));
    } else if (tagged[i].tag == Tag::kNoun) {
      unknown_modifier(tagged[i].text);
    }
  }
  return frame;
}

IntentFrame parse(std::string_view text, const Lexicon& lexicon, ParseStrategy strategy) {
  return strategy == ParseStrategy::kHeuristic ? parse_heuristic(text, lexicon) : parse_triplet(text, lexicon);
}

std::string render(const IntentFrame& frame) {
  std::string out = frame.actor + ", " + frame.action;
  if (frame.patient.determiner == Determiner::kDefinite) out += " the";
  if (frame.patient.determiner == Determiner::kIndefinite) out += " a";
  for (const auto& modifier : frame.patient.modifiers) out += " " + format_value(modifier.value);
  out += " " + frame.patient.type_word + "!";
  return out;
}

}  // namespace semem
