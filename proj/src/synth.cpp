#include "rsreg/synth.hpp"

#include <cmath>

#include "rsreg/calculus.hpp"
#include "rsreg/linalg.hpp"
#include "rsreg/rng.hpp"
#include "rsreg/spectral.hpp"

namespace rsreg {

std::string to_string(WeightPolicy policy) {
    switch (policy) {
        case WeightPolicy::Explicit: return "explicit";
        case WeightPolicy::AutoPsd: return "psd";
        case WeightPolicy::AutoDominance: return "dominance";
    }
    throw Error("unknown weight policy");
}

WeightPolicy parse_weight_policy(const std::string& name) {
    if (name == "explicit") return WeightPolicy::Explicit;
    if (name == "psd") return WeightPolicy::AutoPsd;
    if (name == "dominance") return WeightPolicy::AutoDominance;
    throw Error("unknown weight policy '" + name +
                "' (expected explicit|psd|dominance)");
}

SynthesizedInstance synthesize(const SynthesisOptions& options) {
    if (options.n < 1 || options.d < 1)
        throw DimensionMismatch("synthesis requires n >= 1 and d >= 1");
    if (!(options.radius > 0.0))
        throw PreconditionViolated("synthesis radius must be positive");
    if (options.radius * options.radius > kOverflowGuard)
        throw PreconditionViolated("synthesis radius exceeds the overflow-safe range");

    Rng rng(options.seed);
    SynthesizedInstance result;
    ProblemInstance& instance = result.instance;
    instance.kind = options.kind;

    instance.A.resize(options.n, options.d);
    for (Index i = 0; i < options.n; ++i)
        for (Index j = 0; j < options.d; ++j) instance.A(i, j) = rng.normal();
    const double a_norm = spectral_norm(instance.A);
    if (a_norm > 0.0) instance.A *= options.radius / a_norm;

    instance.b.resize(options.n);
    for (Index i = 0; i < options.n; ++i) instance.b(i) = rng.normal();
    const double b_norm = instance.b.norm();
    if (b_norm > 0.0) instance.b *= options.radius / b_norm;

    // anchor point inside the radius ball
    result.anchor.resize(options.d);
    for (Index j = 0; j < options.d; ++j) result.anchor(j) = rng.normal();
    const double shrink = rng.uniform();
    const double x_norm = result.anchor.norm();
    if (x_norm > 0.0)
        result.anchor *= options.radius * (0.25 + 0.5 * shrink) / x_norm;

    switch (options.policy) {
        case WeightPolicy::Explicit:
            instance.w = Vector::Ones(options.n);
            break;
        case WeightPolicy::AutoPsd:
        case WeightPolicy::AutoDominance: {
            instance.w = Vector::Ones(options.n);  // anchor evaluation needs a shape
            const Evaluation eval = evaluate(instance, result.anchor);
            const double r0 = point_radius(instance, eval);
            const double smin = sigma_min(instance.A);
            const ThresholdMode mode = options.policy == WeightPolicy::AutoPsd
                                           ? ThresholdMode::Psd
                                           : ThresholdMode::Dominance;
            const double wsq = weight_threshold(r0, smin, options.l, mode);
            instance.w = Vector::Constant(options.n, std::sqrt(wsq));
            break;
        }
    }
    return result;
}

}  // namespace rsreg
