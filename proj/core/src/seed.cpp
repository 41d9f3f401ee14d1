#include "semem/seed.hpp"

namespace semem {

namespace {

Signature sig(std::string shape, std::string color, std::array<double, 3> size,
              std::optional<std::vector<double>> descriptor = {}) {
  return Signature{std::move(shape), std::move(color), size, std::move(descriptor)};
}

std::vector<double> unit(std::size_t axis, std::size_t dim = 16) {
  std::vector<double> v(dim, 0.0);
  v[axis] = 1.0;
  return v;
}

}  // namespace

World seed_world() {
  World world;
  KnowledgeGraph& g = world.graph;
  g.add_type("YuMi", std::nullopt, {"position"});
  g.add_type("Nut", std::nullopt, {"color", "shape", "position"});
  g.add_type("Screw", std::nullopt, {"color", "shape", "position"});
  g.add_type("Box", std::nullopt, {"color", "shape", "size", "position"});
  g.add_type("Clip", std::nullopt, {"color", "shape", "position"});

  SignatureDatabase& db = world.signatures;
  db.register_signature(g, "YuMi", sig("robot", "gray", {500, 400, 600}));
  db.register_signature(g, "Nut", sig("hex", "green", {8, 8, 4}));
  db.register_signature(g, "Nut", sig("hex", "blue", {8, 8, 4}));
  db.register_signature(g, "Screw", sig("cylinder", "blue", {6, 6, 30}));
  db.register_signature(g, "Box", sig("square", "gray", {100, 100, 60}, unit(0)));
  db.register_signature(g, "Clip", sig("big", "green", {40, 10, 5}));
  db.register_signature(g, "Clip", sig("small", "blue", {20, 5, 3}));

  register_builtin_skills(world.skills, g);
  return world;
}

}  // namespace semem
