#include "semem/perception.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "semem/error.hpp"
#include "json_diagnostics.hpp"

namespace semem {

namespace {

double norm3(const std::array<double, 3>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

}  // namespace

double signature_distance(const Signature& a, const Signature& b, const DistanceWeights& weights) {
  double distance = 0.0;
  if (!iequals(a.shape_class, b.shape_class)) distance += weights.shape;
  if (!iequals(a.color_class, b.color_class)) distance += weights.color;

  std::array<double, 3> delta{a.size[0] - b.size[0], a.size[1] - b.size[1], a.size[2] - b.size[2]};
  double scale = std::max(norm3(a.size), norm3(b.size));
  if (scale > 0) distance += weights.size * norm3(delta) / scale;

  if (a.descriptor && b.descriptor && a.descriptor->size() == b.descriptor->size()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.descriptor->size(); ++i) {
      double d = (*a.descriptor)[i] - (*b.descriptor)[i];
      sum += d * d;
    }
    distance += weights.descriptor * std::sqrt(sum);
  }
  return distance;
}

void validate_signature(const Signature& signature, std::size_t descriptor_dim) {
  if (trim(signature.shape_class).empty() || trim(signature.color_class).empty()) {
    throw Error(ErrorCode::kInvalidSignature, "signature shape and color must be non-empty");
  }
  for (double s : signature.size) {
    if (!std::isfinite(s) || s <= 0) throw Error(ErrorCode::kInvalidSignature, "signature sizes must be > 0");
  }
  if (signature.descriptor) {
    const auto& d = *signature.descriptor;
    if (d.size() != descriptor_dim) {
      throw Error(ErrorCode::kInvalidSignature, "descriptor must have " + std::to_string(descriptor_dim) +
                                                    " components, got " + std::to_string(d.size()));
    }
    double sum = 0.0;
    for (double v : d) sum += v * v;
    if (!std::isfinite(sum) || std::abs(std::sqrt(sum) - 1.0) > 1e-9) {
      throw Error(ErrorCode::kInvalidSignature, "descriptor must be unit length");
    }
  }
}

void SignatureDatabase::register_signature(const KnowledgeGraph& graph, std::string_view type_label,
                                           Signature signature) {
  auto type = graph.find_type(type_label);
  if (!type) throw Error(ErrorCode::kUnknownType, "unknown type '" + std::string(type_label) + "'");
  validate_signature(signature, config_.descriptor_dim);
  entries_.push_back(Entry{graph.node(*type).label, std::move(signature)});
}

void SignatureDatabase::restore(std::vector<Entry> entries) {
  for (const auto& entry : entries) validate_signature(entry.signature, config_.descriptor_dim);
  entries_ = std::move(entries);
}

std::vector<Signature> SignatureDatabase::signatures_for(std::string_view type_label) const {
  std::vector<Signature> out;
  for (const auto& entry : entries_) {
    if (iequals(entry.type_label, type_label)) out.push_back(entry.signature);
  }
  return out;
}

Classification SignatureDatabase::classify(const Signature& signature) const {
  if (entries_.empty()) return Unknown{};
  std::vector<double> distances;
  distances.reserve(entries_.size());
  for (const auto& entry : entries_) distances.push_back(signature_distance(signature, entry.signature, config_.weights));
  double nearest = *std::min_element(distances.begin(), distances.end());

  // Distances equal up to rounding are ties; the smallest label wins.
  std::optional<Candidate> best;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (distances[i] > nearest + kDistanceTolerance) continue;
    if (!best || entries_[i].type_label < best->type_label) best = Candidate{entries_[i].type_label, distances[i]};
  }
  if (best->distance <= config_.match_threshold + kDistanceTolerance) return Match{best->type_label, best->distance};
  return Unknown{best};
}

double SignatureDatabase::min_volume() const {
  if (entries_.empty()) return 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& entry : entries_) smallest = std::min(smallest, entry.signature.volume());
  return 0.5 * smallest;
}

IngestReport ingest_scene(KnowledgeGraph& graph, const SignatureDatabase& database,
                          const std::vector<Observation>& observations) {
  IngestReport report;
  const double min_volume = database.min_volume();
  for (const auto& observation : observations) {
    if (observation.signature.volume() < min_volume) {
      ++report.discarded;
      continue;
    }
    auto outcome = database.classify(observation.signature);
    const auto* match = std::get_if<Match>(&outcome);
    if (match == nullptr) {
      report.unknowns.push_back(observation);
      continue;
    }
    NodeId type = *graph.find_type(match->type_label);
    auto slots = graph.slots_of(type);
    const auto& sig = observation.signature;
    std::vector<PropertyValue> values;
    if (slots.contains("color")) values.push_back({"color", Value{to_lower(sig.color_class)}});
    if (slots.contains("shape")) values.push_back({"shape", Value{to_lower(sig.shape_class)}});
    if (slots.contains("size")) {
      values.push_back({"size", Value{std::vector<double>(sig.size.begin(), sig.size.end())}});
    }
    NodeId id = graph.instantiate(match->type_label, values, observation.pose);
    report.instantiated.push_back({id, graph.node(id).label, graph.node(type).label});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Scene documents

namespace {

using nlohmann::json;

[[noreturn]] void scene_error(const std::string& message) { throw Error(ErrorCode::kMalformedScene, message); }

std::array<double, 3> read_triple(const json& object, const char* key, const std::string& where) {
  if (!object.contains(key)) scene_error(where + ": missing field '" + key + "'");
  const json& value = object.at(key);
  if (!value.is_array() || value.size() != 3) scene_error(where + "." + key + ": expected array of 3 numbers");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!value[i].is_number()) scene_error(where + "." + key + "[" + std::to_string(i) + "]: expected number");
    out[i] = value[i].get<double>();
    if (!std::isfinite(out[i])) scene_error(where + "." + key + ": non-finite value");
  }
  return out;
}

std::string read_text(const json& object, const char* key, const std::string& where) {
  if (!object.contains(key)) scene_error(where + ": missing field '" + key + "'");
  const json& value = object.at(key);
  if (!value.is_string() || trim(value.get<std::string>()).empty()) {
    scene_error(where + "." + key + ": expected non-empty string");
  }
  return trim(value.get<std::string>());
}

}  // namespace

std::vector<Observation> parse_scene_document(std::string_view text, std::size_t descriptor_dim) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    scene_error("scene document is not valid JSON (" + detail::describe_position(text, e.byte) + ")");
  }
  if (!document.is_array()) scene_error("scene document must be a top-level array of observations");

  static const std::set<std::string> allowed{"shape", "color", "size", "descriptor", "position", "orientation"};
  std::vector<Observation> observations;
  for (std::size_t i = 0; i < document.size(); ++i) {
    const std::string where = "observation[" + std::to_string(i) + "]";
    const json& item = document[i];
    if (!item.is_object()) scene_error(where + ": expected object");
    for (const auto& [key, value] : item.items()) {
      if (!allowed.contains(key)) scene_error(where + ": unknown field '" + key + "'");
    }
    Observation observation;
    observation.signature.shape_class = read_text(item, "shape", where);
    observation.signature.color_class = read_text(item, "color", where);
    observation.signature.size = read_triple(item, "size", where);
    if (item.contains("descriptor")) {
      const json& d = item.at("descriptor");
      if (!d.is_array()) scene_error(where + ".descriptor: expected array of numbers");
      std::vector<double> values;
      for (const auto& v : d) {
        if (!v.is_number()) scene_error(where + ".descriptor: expected array of numbers");
        values.push_back(v.get<double>());
      }
      observation.signature.descriptor = std::move(values);
    }
    observation.pose.position = read_triple(item, "position", where);
    observation.pose.orientation = read_triple(item, "orientation", where);
    observation.pose = observation.pose.normalized();
    try {
      validate_signature(observation.signature, descriptor_dim);
    } catch (const Error& e) {
      scene_error(where + ": " + e.what());
    }
    observations.push_back(std::move(observation));
  }
  return observations;
}

}  // namespace semem
