#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rdelab/rde_spec.hpp"

namespace rdelab {

// Regression instances on {0,1} used across tests and the CLI.

// Ignores its (zero) arguments and outputs a fair coin flip.
std::shared_ptr<const RdeSpec> bundled_coin();

// Output is the XOR of two independent copies.
std::shared_ptr<const RdeSpec> bundled_xor();

// Copies one child and flips it with probability p.
std::shared_ptr<const RdeSpec> bundled_noisy_copy(double p = 0.25);

// AND of two children or OR of two children, an even mix.
std::shared_ptr<const RdeSpec> bundled_and_or();

// All of the above with their file-stem names.
std::vector<std::pair<std::string, std::shared_ptr<const RdeSpec>>>
bundled_instances();

}  // namespace rdelab
