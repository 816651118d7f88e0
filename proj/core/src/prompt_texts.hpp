#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "sgp/task.hpp"

namespace sgp::detail {

struct PromptText {
  TaskKind task;
  PromptMode mode;
  std::vector<std::string_view> stages;  // three for sgp, one otherwise
};

const std::array<PromptText, 18>& prompt_texts();

}  // namespace sgp::detail
