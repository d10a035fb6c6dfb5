#include "qli/channel_plan.hpp"

#include <set>
#include <string>

#include "qli/errors.hpp"

namespace qli {

void ChannelPlan::validate() const {
  std::set<int> seen;
  for (const ClassicalChannel& c : classical) {
    if (c.channel == quantum) {
      throw Error(ErrorCode::InvalidConfig,
                  "classical channel " + std::to_string(c.channel.index()) +
                      " collides with the quantum channel");
    }
    if (!seen.insert(c.channel.index()).second) {
      throw Error(ErrorCode::InvalidConfig,
                  "classical channel " + std::to_string(c.channel.index()) + " listed twice");
    }
  }
}

Power ChannelPlan::total_launch() const {
  std::vector<Power> powers;
  powers.reserve(classical.size());
  for (const ClassicalChannel& c : classical) powers.push_back(c.launch);
  return sum_powers(powers);
}

}  // namespace qli
