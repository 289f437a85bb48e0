#pragma once

#include <optional>
#include <string>
#include <vector>

#include "costsense/model.hpp"

namespace costsense {

struct GradCheckEntry {
  std::string name;  // op name, "lstm", or "preset:<name>"
  double max_rel_error = 0.0;
  std::size_t coordinates = 0;
};

// Finite-difference check of one preset at reduced width (PresetDims::tiny)
// on a small padded batch, in both train and infer modes.
GradCheckEntry check_preset_gradients(Preset preset, std::uint64_t seed = 1);

// Every differentiable op, the LSTM layer, and the four presets (or only
// `only` when given). Points are sampled away from relu kinks.
std::vector<GradCheckEntry> run_gradcheck_suite(std::optional<Preset> only = std::nullopt);

}  // namespace costsense
