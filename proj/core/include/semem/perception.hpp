#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semem/graph.hpp"
#include "semem/types.hpp"

namespace semem {

/// Perceptual fingerprint of an object as reported by the vision front-end.
struct Signature {
  std::string shape_class;
  std::string color_class;
  std::array<double, 3> size{};  // millimetres, all > 0
  std::optional<std::vector<double>> descriptor;  // unit norm, configured dimension

  bool operator==(const Signature&) const = default;
  double volume() const noexcept { return size[0] * size[1] * size[2]; }
};

struct Observation {
  Signature signature;
  Pose pose;

  bool operator==(const Observation&) const = default;
};

/// Distances closer than this are treated as equal, both for ties and for
/// the match threshold.
inline constexpr double kDistanceTolerance = 1e-12;

struct DistanceWeights {
  double shape = 0.4;
  double color = 0.2;
  double size = 0.2;
  double descriptor = 0.2;
};

struct PerceptionConfig {
  double match_threshold = 0.25;
  DistanceWeights weights{};
  std::size_t descriptor_dim = 16;
};

struct Candidate {
  std::string type_label;
  double distance = 0.0;

  bool operator==(const Candidate&) const = default;
};

struct Match {
  std::string type_label;
  double distance = 0.0;

  bool operator==(const Match&) const = default;
};

struct Unknown {
  std::optional<Candidate> nearest;

  bool operator==(const Unknown&) const = default;
};

using Classification = std::variant<Match, Unknown>;

struct InstantiatedObject {
  NodeId id;
  std::string label;
  std::string type_label;

  bool operator==(const InstantiatedObject&) const = default;
};

struct IngestReport {
  std::vector<InstantiatedObject> instantiated;
  std::vector<Observation> unknowns;
  std::size_t discarded = 0;
};

/// Weighted mismatch between two signatures:
///   w_shape * [shape differs] + w_color * [color differs]
///   + w_size * ||a - b|| / max(||a||, ||b||)
///   + w_descriptor * ||d_a - d_b||   (only when both carry a descriptor)
double signature_distance(const Signature& a, const Signature& b, const DistanceWeights& weights);

/// Throws InvalidSignature when sizes are not positive, labels are empty, or
/// the descriptor has the wrong dimension or is not unit length (1e-9).
void validate_signature(const Signature& signature, std::size_t descriptor_dim);

/// Reference database of known type signatures; classification is nearest
/// neighbour with a lexicographic tie-break on the type label.
class SignatureDatabase {
 public:
  struct Entry {
    std::string type_label;
    Signature signature;

    bool operator==(const Entry&) const = default;
  };

  explicit SignatureDatabase(PerceptionConfig config = {}) : config_(config) {}

  const PerceptionConfig& config() const noexcept { return config_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Appends a reference signature for a type that exists in `graph`.
  void register_signature(const KnowledgeGraph& graph, std::string_view type_label, Signature signature);

  /// Raw insertion used when restoring persisted databases.
  void restore(std::vector<Entry> entries);

  std::vector<Signature> signatures_for(std::string_view type_label) const;

  Classification classify(const Signature& signature) const;

  /// Observations with a smaller size-volume are treated as noise:
  /// half of the smallest reference volume (0 when empty).
  double min_volume() const;

  bool operator==(const SignatureDatabase& other) const { return entries_ == other.entries_; }

 private:
  PerceptionConfig config_;
  std::vector<Entry> entries_;
};

/// Classifies each observation, instantiates matches in the scene with their
/// color/shape/size/position values, and returns unknowns without touching
/// the graph for them.
IngestReport ingest_scene(KnowledgeGraph& graph, const SignatureDatabase& database,
                          const std::vector<Observation>& observations);

/// Parses a scene-description document: a JSON array of objects with exactly
/// the keys shape, color, size, position, orientation and optional descriptor.
/// Throws MalformedScene naming the offending element and field.
std::vector<Observation> parse_scene_document(std::string_view text, std::size_t descriptor_dim = 16);

}  // namespace semem
