#include "rdelab/bundled.hpp"

#include "rdelab/errors.hpp"

namespace rdelab {

std::shared_ptr<const RdeSpec> bundled_coin() {
  return std::make_shared<RdeSpec>(
      binary_space(),
      std::vector<NoiseAtom>{{0.5, 0, {0}}, {0.5, 0, {1}}});
}

std::shared_ptr<const RdeSpec> bundled_xor() {
  return std::make_shared<RdeSpec>(
      binary_space(), std::vector<NoiseAtom>{{1.0, 2, {0, 1, 1, 0}}});
}

std::shared_ptr<const RdeSpec> bundled_noisy_copy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InputError("noisy_copy: flip probability must lie in [0,1]");
  }
  return std::make_shared<RdeSpec>(
      binary_space(),
      std::vector<NoiseAtom>{{1.0 - p, 1, {0, 1}}, {p, 1, {1, 0}}});
}

std::shared_ptr<const RdeSpec> bundled_and_or() {
  return std::make_shared<RdeSpec>(
      binary_space(),
      std::vector<NoiseAtom>{{0.5, 2, {0, 0, 0, 1}}, {0.5, 2, {0, 1, 1, 1}}});
}

std::vector<std::pair<std::string, std::shared_ptr<const RdeSpec>>>
bundled_instances() {
  return {{"coin", bundled_coin()},
          {"xor", bundled_xor()},
          {"noisy_copy", bundled_noisy_copy()},
          {"and_or", bundled_and_or()}};
}

}  // namespace rdelab
