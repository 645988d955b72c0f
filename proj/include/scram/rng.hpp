#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace scram {

/// Seedable generator with platform-independent output.
///
/// The standard distributions are implementation-defined, so integer and
/// Gaussian draws are derived here from the raw mt19937_64 stream.
class Rng {
public:
    static constexpr std::string_view algorithm = "mt19937_64/lemire-int/polar-normal";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal draw (Marsaglia polar method, spare value cached).
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

} // namespace scram
