#include "rdelab/state_space.hpp"

#include <set>

#include "rdelab/errors.hpp"

namespace rdelab {

StateSpace::StateSpace(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw InputError("state space must be nonempty");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) {
      throw InputError("duplicate state label: \"" + l + "\"");
    }
  }
}

StateSpacePtr make_state_space(std::vector<std::string> labels) {
  return std::make_shared<StateSpace>(std::move(labels));
}

StateSpacePtr binary_space() {
  static const StateSpacePtr space = make_state_space({"0", "1"});
  return space;
}

}  // namespace rdelab
