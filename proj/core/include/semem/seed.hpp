#pragma once

#include "semem/world.hpp"

namespace semem {

/// The bootstrap brain: the YuMi actor and the Nut, Screw, Box and Clip
/// types with their reference signatures, pick/place skills and actions.
World seed_world();

}  // namespace semem
