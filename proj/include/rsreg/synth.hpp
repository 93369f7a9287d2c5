#pragma once

#include <cstdint>
#include <string>

#include "rsreg/model.hpp"

namespace rsreg {

enum class WeightPolicy { Explicit, AutoPsd, AutoDominance };

std::string to_string(WeightPolicy policy);
WeightPolicy parse_weight_policy(const std::string& name);

struct SynthesisOptions {
    Index n = 16;
    Index d = 4;
    std::uint64_t seed = 0;
    double radius = 1.0;  // ||A|| and ||b||_2 are scaled to this, ||x*|| <= this
    FunctionKind kind = FunctionKind::Exp;
    WeightPolicy policy = WeightPolicy::Explicit;  // explicit -> w = 1
    double l = 1.0;  // PSD floor fed into the weight thresholds
};

// A seeded Gaussian instance. Under the auto policies, w_i^2 is set to the
// exact threshold evaluated at the sampled anchor point.
struct SynthesizedInstance {
    ProblemInstance instance;
    Vector anchor;  // the sampled point the weight thresholds were measured at
};

SynthesizedInstance synthesize(const SynthesisOptions& options);

}  // namespace rsreg
