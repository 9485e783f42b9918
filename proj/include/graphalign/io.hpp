#pragma once

#include <string>

#include "graphalign/model.hpp"

namespace graphalign {

// Instance JSON: {"n","p","rho","seed","pi_star","signal","observed"} with
// edges in canonical lexicographic order and reals printed with 17 significant
// digits. "noise" is omitted; it is rebuilt from the model identity on load
// (zeros at rho = 1, where the identity leaves it unconstrained).
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

void save_instance(const Instance& inst, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace graphalign
