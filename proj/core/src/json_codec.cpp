#include "semem/json_codec.hpp"

#include "semem/error.hpp"

namespace semem {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad(const std::string& message) { throw Error(ErrorCode::kInvalidArgument, message); }

const Json& field(const Json& object, const char* key, const std::string& where) {
  if (!object.is_object() || !object.contains(key)) bad(where + ": missing field '" + key + "'");
  return object.at(key);
}

std::string text_field(const Json& object, const char* key, const std::string& where) {
  const Json& value = field(object, key, where);
  if (!value.is_string()) bad(where + "." + key + ": expected string");
  return value.get<std::string>();
}

std::array<double, 3> triple(const Json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 3) bad(where + ": expected array of 3 numbers");
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!value[i].is_number()) bad(where + ": expected array of 3 numbers");
    out[i] = value[i].get<double>();
  }
  return out;
}

Json node_id(NodeId id) { return id.value; }

}  // namespace

Json to_json(const Pose& pose) { return Json{{"position", pose.position}, {"orientation", pose.orientation}}; }

Json to_json(const Value& value) {
  return std::visit(overloaded{[](const std::string& text) { return Json(text); },
                               [](const std::vector<double>& numbers) { return Json(numbers); },
                               [](const Pose& pose) { return to_json(pose); }},
                    value);
}

Json to_json(const PropertyValue& value) { return Json{{"slot", value.slot}, {"value", to_json(value.value)}}; }

Json to_json(const Signature& signature) {
  Json out{{"shape", signature.shape_class}, {"color", signature.color_class}, {"size", signature.size}};
  if (signature.descriptor) out["descriptor"] = *signature.descriptor;
  return out;
}

Json to_json(const Observation& observation) {
  Json out = to_json(observation.signature);
  out["position"] = observation.pose.position;
  out["orientation"] = observation.pose.orientation;
  return out;
}

Json to_json(const IntentFrame& frame) {
  Json modifiers = Json::array();
  for (const auto& m : frame.patient.modifiers) modifiers.push_back(to_json(m));
  return Json{{"actor", frame.actor},
              {"action", frame.action},
              {"patient",
               {{"type_word", frame.patient.type_word},
                {"modifiers", modifiers},
                {"determiner", to_string(frame.patient.determiner)}}},
              {"raw", frame.raw}};
}

Json to_json(const NearMiss& miss) {
  return Json{{"action", miss.action_label}, {"object_type", miss.object_type}, {"skill_ref", miss.skill_ref}};
}

Json to_json(const ResolvedPlan& plan) {
  return Json{{"actor_instance", node_id(plan.actor_instance)},
              {"patient_instance", node_id(plan.patient_instance)},
              {"action", plan.action_label},
              {"skill_ref", plan.skill_ref},
              {"frame", to_json(plan.frame)}};
}

Json to_json(const ResolutionOutcome& outcome) {
  Json out = std::visit(
      overloaded{
          [](const Resolved& r) { return Json{{"plan", to_json(r.plan)}}; },
          [](const NeedsObjectConfirmation& n) {
            return Json{{"proposed", node_id(n.proposed)},
                        {"mismatched", to_json(n.mismatched)},
                        {"plan_if_accepted", to_json(n.plan_if_accepted)},
                        {"requested_type", n.requested_type}};
          },
          [](const NeedsActionConfirmation& n) {
            Json misses = Json::array();
            for (const auto& m : n.near_misses) misses.push_back(to_json(m));
            return Json{{"near_misses", misses},
                        {"frame", to_json(n.frame)},
                        {"actor_instance", node_id(n.actor_instance)},
                        {"patient_instance", node_id(n.patient_instance)},
                        {"actor_type", n.actor_type},
                        {"object_type", n.object_type}};
          },
          [](const UnknownTypeWord& u) { return Json{{"word", u.word}}; },
          [](const NoInstanceInScene& n) { return Json{{"type", n.type_label}}; },
          [](const NoActorInScene& n) { return Json{{"actor_type", n.actor_type}}; }},
      outcome);
  out["variant"] = outcome_name(outcome);
  return out;
}

Json to_json(const SkillStep& step) {
  Json out{{"op", step_name(step)}};
  if (const auto* move = std::get_if<MoveTo>(&step)) out["pose"] = to_json(move->pose);
  if (const auto* place = std::get_if<PlacePatient>(&step)) out["pose"] = to_json(place->pose);
  return out;
}

Json to_json(const Skill& skill) {
  Json steps = Json::array();
  for (const auto& step : skill.steps) steps.push_back(to_json(step));
  return Json{{"name", skill.name}, {"steps", steps}};
}

Json to_json(const ExecutionRecord& record) {
  Json steps = Json::array();
  for (const auto& run : record.steps_run) {
    steps.push_back(Json{{"index", run.index}, {"step", run.step}, {"t", run.timestamp}});
  }
  Json moved = Json::array();
  for (const auto& [label, pose] : record.scene_delta.moved) moved.push_back(Json{{"label", label}, {"pose", to_json(pose)}});
  Json out{{"sequence", record.sequence},
           {"plan", to_json(record.plan)},
           {"actor", record.actor_label},
           {"patient", record.patient_label},
           {"steps", steps},
           {"result", record.success() ? "success" : "failed"},
           {"scene_delta", {{"removed", record.scene_delta.removed}, {"moved", moved}}}};
  if (record.failure) {
    out["failure"] = Json{{"step_index", record.failure->step_index}, {"reason", record.failure->reason}};
  }
  return out;
}

Json to_json(const Prompt& prompt) {
  Json payload = std::visit(
      overloaded{[](const NeedsObjectConfirmation& n) { return to_json(ResolutionOutcome{n}); },
                 [](const NeedsActionConfirmation& n) { return to_json(ResolutionOutcome{n}); },
                 [](const Observation& o) {
                   Json detected = Json::array();
                   detected.push_back(to_json(PropertyValue{"color", Value{o.signature.color_class}}));
                   detected.push_back(to_json(PropertyValue{"shape", Value{o.signature.shape_class}}));
                   detected.push_back(to_json(PropertyValue{
                       "size", Value{std::vector<double>(o.signature.size.begin(), o.signature.size.end())}}));
                   detected.push_back(to_json(PropertyValue{"position", Value{o.pose}}));
                   return Json{{"observation", to_json(o)}, {"detected", detected}};
                 },
                 [](const TeachRequest& t) {
                   return Json{{"actor_type", t.actor_type}, {"action", t.action_label}, {"object_type", t.object_type}};
                 }},
      prompt.payload);
  return Json{{"id", prompt.id},
              {"kind", to_string(prompt.kind)},
              {"state", to_string(prompt.state)},
              {"created_at", prompt.created_at},
              {"payload", payload}};
}

Json to_json(const Effect& effect) {
  return std::visit(
      overloaded{
          [](const TypeCreated& e) {
            Json out{{"effect", "type_created"}, {"label", e.label}};
            if (e.parent) out["parent"] = *e.parent;
            return out;
          },
          [](const SubtypeLinked& e) { return Json{{"effect", "subtype_linked"}, {"child", e.child}, {"parent", e.parent}}; },
          [](const SignatureRegistered& e) { return Json{{"effect", "signature_registered"}, {"type", e.type_label}}; },
          [](const InstanceCreated& e) {
            return Json{{"effect", "instance_created"}, {"id", node_id(e.id)}, {"label", e.label}, {"type", e.type_label}};
          },
          [](const SkillTaught& e) { return Json{{"effect", "skill_taught"}, {"name", e.name}, {"steps", e.steps}}; },
          [](const ActionDefined& e) {
            return Json{{"effect", "action_defined"},
                        {"actor_type", e.actor_type},
                        {"action", e.action_label},
                        {"object_type", e.object_type},
                        {"skill_ref", e.skill_ref}};
          },
          [](const Executed& e) { return Json{{"effect", "executed"}, {"record", to_json(e.record)}}; },
          [](const OutcomeReported& e) { return Json{{"effect", "outcome"}, {"outcome", to_json(e.outcome)}}; },
          [](const ObservationDropped&) { return Json{{"effect", "observation_dropped"}}; },
          [](const PromptRaised& e) {
            return Json{{"effect", "prompt_raised"}, {"prompt_id", e.id}, {"kind", to_string(e.kind)}};
          }},
      effect);
}

Json to_json(const IngestReport& report) {
  Json instantiated = Json::array();
  for (const auto& item : report.instantiated) {
    instantiated.push_back(Json{{"id", node_id(item.id)}, {"label", item.label}, {"type", item.type_label}});
  }
  Json unknowns = Json::array();
  for (const auto& o : report.unknowns) unknowns.push_back(to_json(o));
  return Json{{"instantiated", instantiated}, {"unknowns", unknowns}, {"discarded", report.discarded}};
}

Json to_json(const Node& node) {
  Json out{{"id", node_id(node.id)},
           {"label", node.label},
           {"subgraph", to_string(node.subgraph)},
           {"kind", to_string(node.kind)}};
  if (node.value) out["value"] = to_json(*node.value);
  if (node.skill_ref) out["skill_ref"] = *node.skill_ref;
  return out;
}

Json to_json(const Edge& edge) {
  Json out{{"id", edge.id.value},
           {"source", node_id(edge.source)},
           {"dest", node_id(edge.dest)},
           {"kind", to_string(edge.kind)}};
  if (edge.kind == EdgeKind::kAction) {
    out["label"] = edge.action_label;
    if (edge.object) out["object"] = node_id(*edge.object);
  }
  return out;
}

Json graph_to_json(const KnowledgeGraph& graph) {
  Json nodes = Json::array();
  for (const auto& [id, node] : graph.nodes()) nodes.push_back(to_json(node));
  Json edges = Json::array();
  for (const auto& [id, edge] : graph.edges()) edges.push_back(to_json(edge));
  return Json{{"nodes", nodes}, {"edges", edges}, {"counters", graph.instance_counters()}};
}

// ---------------------------------------------------------------------------
// Parsing

Pose pose_from_json(const Json& json) {
  Pose pose;
  pose.position = triple(field(json, "position", "pose"), "pose.position");
  pose.orientation = triple(field(json, "orientation", "pose"), "pose.orientation");
  if (!pose.is_finite()) bad("pose: non-finite value");
  return pose.normalized();
}

Value value_from_json(const Json& json) {
  if (json.is_string()) return json.get<std::string>();
  if (json.is_array()) {
    std::vector<double> numbers;
    for (const auto& v : json) {
      if (!v.is_number()) bad("value: expected array of numbers");
      numbers.push_back(v.get<double>());
    }
    return numbers;
  }
  if (json.is_object()) return pose_from_json(json);
  bad("value: expected string, number array or pose");
}

SkillStep skill_step_from_json(const Json& json) {
  std::string op = text_field(json, "op", "step");
  if (op == "move_to") return MoveTo{pose_from_json(field(json, "pose", "step"))};
  if (op == "grip_close") return GripClose{};
  if (op == "grip_open") return GripOpen{};
  if (op == "remove_patient") return RemovePatient{};
  if (op == "place_patient") return PlacePatient{pose_from_json(field(json, "pose", "step"))};
  bad("step: unknown op '" + op + "'");
}

Skill skill_from_json(const Json& json) {
  Skill skill{text_field(json, "name", "skill"), {}};
  const Json& steps = field(json, "steps", "skill");
  if (!steps.is_array()) bad("skill.steps: expected array");
  for (const auto& step : steps) skill.steps.push_back(skill_step_from_json(step));
  return skill;
}

Signature signature_from_json(const Json& json) {
  Signature signature;
  signature.shape_class = text_field(json, "shape", "signature");
  signature.color_class = text_field(json, "color", "signature");
  signature.size = triple(field(json, "size", "signature"), "signature.size");
  if (json.contains("descriptor")) {
    const Json& d = json.at("descriptor");
    if (!d.is_array()) bad("signature.descriptor: expected array of numbers");
    std::vector<double> values;
    for (const auto& v : d) {
      if (!v.is_number()) bad("signature.descriptor: expected array of numbers");
      values.push_back(v.get<double>());
    }
    signature.descriptor = std::move(values);
  }
  return signature;
}

AnswerChoice answer_choice_from_json(const Json& json) {
  if (!json.is_object() || json.size() != 1) bad("choice: expected an object with exactly one key");
  const auto& [key, value] = *json.items().begin();
  if (key == "confirm") {
    if (!value.is_boolean()) bad("choice.confirm: expected boolean");
    return ConfirmChoice{value.get<bool>()};
  }
  if (key == "choose_action") {
    return ChooseActionChoice{text_field(value, "action", "choice.choose_action"),
                              text_field(value, "object_type", "choice.choose_action")};
  }
  if (key == "teach") return RequestTeachChoice{};
  if (key == "decline") return DeclineChoice{};
  if (key == "new_type") {
    NewTypeChoice choice{text_field(value, "label", "choice.new_type"), std::nullopt, {}};
    if (value.contains("parent") && !value.at("parent").is_null()) {
      choice.parent = text_field(value, "parent", "choice.new_type");
    }
    if (value.contains("slots")) {
      const Json& slots = value.at("slots");
      if (!slots.is_array()) bad("choice.new_type.slots: expected array of strings");
      for (const auto& s : slots) {
        if (!s.is_string()) bad("choice.new_type.slots: expected array of strings");
        choice.slots.push_back(s.get<std::string>());
      }
    }
    return choice;
  }
  if (key == "existing_type") {
    if (!value.is_string()) bad("choice.existing_type: expected string");
    return ExistingTypeChoice{value.get<std::string>()};
  }
  if (key == "skill") {
    Skill skill = skill_from_json(value);
    return TeachChoice{std::move(skill.name), std::move(skill.steps)};
  }
  bad("choice: unknown kind '" + key + "'");
}

Answer answer_from_json(const Json& json) {
  const Json& id = field(json, "prompt_id", "answer");
  if (!id.is_number_unsigned()) bad("answer.prompt_id: expected non-negative integer");
  return Answer{id.get<std::uint64_t>(), answer_choice_from_json(field(json, "choice", "answer"))};
}

Json to_json(const AnswerChoice& choice) {
  return std::visit(
      overloaded{[](const ConfirmChoice& c) { return Json{{"confirm", c.accept}}; },
                 [](const ChooseActionChoice& c) {
                   return Json{{"choose_action", {{"action", c.action_label}, {"object_type", c.object_type}}}};
                 },
                 [](const RequestTeachChoice&) { return Json{{"teach", true}}; },
                 [](const DeclineChoice&) { return Json{{"decline", true}}; },
                 [](const NewTypeChoice& c) {
                   Json body{{"label", c.label}, {"slots", c.slots}};
                   if (c.parent) body["parent"] = *c.parent;
                   return Json{{"new_type", body}};
                 },
                 [](const ExistingTypeChoice& c) { return Json{{"existing_type", c.label}}; },
                 [](const TeachChoice& c) { return Json{{"skill", to_json(Skill{c.skill_name, c.steps})}}; }},
      choice);
}

}  // namespace semem
