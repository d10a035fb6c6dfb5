#pragma once

#include <vector>

#include "qli/units.hpp"

namespace qli {

struct ClassicalChannel {
  ItuChannel channel;
  Power launch;
};

/// One quantum channel plus the classical channels sharing its fiber.
struct ChannelPlan {
  ItuChannel quantum{39};
  std::vector<ClassicalChannel> classical;

  /// Throws Error{InvalidConfig} when the quantum channel is also used for
  /// classical traffic or a classical channel appears twice.
  void validate() const;
  Power total_launch() const;
};

}  // namespace qli
