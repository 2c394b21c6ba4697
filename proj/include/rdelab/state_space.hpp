#pragma once

#include <memory>
#include <string>
#include <vector>

namespace rdelab {

// Finite ordered state space. Labels are distinct and their order defines the
// coordinate order of every measure and tensor over the space.
class StateSpace {
 public:
  explicit StateSpace(std::vector<std::string> labels);

  int size() const { return int(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_.at(i); }

  friend bool operator==(const StateSpace& a, const StateSpace& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
};

using StateSpacePtr = std::shared_ptr<const StateSpace>;

StateSpacePtr make_state_space(std::vector<std::string> labels);

// {"0","1"}; the space of all bundled instances.
StateSpacePtr binary_space();

inline bool same_space(const StateSpacePtr& a, const StateSpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace rdelab
