#pragma once

#include <Eigen/Core>

#include "mimic/synth/scene.hpp"

namespace mimic::synth {

// Deterministic finite-state expert, a pure function of the true scene state:
// approach the object of interest, bin obviously blemished onions directly,
// lift unknowns to the inspection height, then carry to bin or corner; for
// pouring, align above the matching container, dwell, then bin the empty.
// The returned action never exceeds max_step in L2 norm.
Eigen::Vector3d scripted_expert(const SceneState& scene, const TaskConfig& cfg);

// the point the expert is currently steering toward (exposed for tests)
Eigen::Vector3d expert_target(const SceneState& scene, const TaskConfig& cfg);

}  // namespace mimic::synth
