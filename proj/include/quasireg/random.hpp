#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>

#include "quasireg/matrix.hpp"

namespace quasireg {

/// SplitMix64 finalizer; used to derive substream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Its seed is splitmix64(root ^ splitmix64(stream + 1)), so every
/// (root seed, stream index) pair names one reproducible sequence on any host.
/// Uniform and normal variates are produced here rather than through
/// <random> distributions, whose algorithms are implementation-defined.
class RandomStream {
public:
    RandomStream(std::uint64_t root_seed, std::uint64_t stream_index);

    std::uint64_t root_seed() const noexcept { return root_; }
    std::uint64_t stream_index() const noexcept { return index_; }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }
    /// Standard normal (Marsaglia polar method).
    double normal();

private:
    std::uint64_t root_;
    std::uint64_t index_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

namespace error_model {

struct Normal {
    double sigma = 1.0;
};
struct Uniform {
    double a = -1.0;
    double b = 1.0;
};
/// Two-component centred normal mixture: N(0, sigma1²) with probability p1,
/// N(0, sigma2²) with probability p2.
struct Mixture {
    double sigma1 = 1.0;
    double p1 = 0.8;
    double sigma2 = 10.0;
    double p2 = 0.2;
};
/// Stationary Gaussian series with autocovariance R(τ) = σ² exp(−q|τ|),
/// realised as AR(1) with coefficient exp(−q).
struct ArExponential {
    double sigma = 1.0;
    double q = 0.3;
};

}  // namespace error_model

using ErrorModel = std::variant<error_model::Normal, error_model::Uniform, error_model::Mixture,
                                error_model::ArExponential>;

/// Throws DomainError on invalid parameters.
void validate(const ErrorModel& model);
std::string describe(const ErrorModel& model);
/// Variance of a single draw.
double variance(const ErrorModel& model);

Vector sample_errors(const ErrorModel& model, std::size_t n, RandomStream& stream);
/// Same as above, writing into `out` (no allocation).
void sample_errors_into(const ErrorModel& model, std::span<double> out, RandomStream& stream);

}  // namespace quasireg
