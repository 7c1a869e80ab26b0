#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace volwin {

/// Seeded generator with portable transforms.
///
/// Only the engine comes from <random> (its output sequence is fixed by the
/// standard); the uniform/normal/gamma transforms are implemented here so a
/// seed yields the same draws on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    /// Gamma(shape, scale = 1), Marsaglia-Tsang.
    double gamma(double shape);

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Child seed for a named sub-task of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::string_view key);

}  // namespace volwin
