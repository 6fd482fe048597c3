#pragma once

// Model checkpoints are JSON documents:
//
//   {"format": "cfnn-checkpoint", "version": 1,
//    "architecture": {...}, "params": [...]}
//
// "architecture" is Model::describe(); "params" is the flat parameter
// vector in the model's own order. Doubles are written with round-trip
// precision, so save followed by load reproduces the parameters exactly.

#include <memory>
#include <string>

#include "cfnn/train/net.hpp"

namespace cfnn::train {

inline constexpr int kCheckpointVersion = 1;

std::string checkpoint_to_string(const Model& model);
std::unique_ptr<Model> checkpoint_from_string(const std::string& text);

void save_checkpoint(const Model& model, const std::string& path);
std::unique_ptr<Model> load_checkpoint(const std::string& path);

}  // namespace cfnn::train
