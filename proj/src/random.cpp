#include "quasireg/random.hpp"

#include <cmath>

#include <fmt/format.h>

namespace quasireg {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t root_seed, std::uint64_t stream_index)
    : root_(root_seed),
      index_(stream_index),
      engine_(splitmix64(root_seed ^ splitmix64(stream_index + 1))) {}

double RandomStream::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void validate(const ErrorModel& model) {
    std::visit(
        overloaded{
            [](const error_model::Normal& m) {
                if (!(m.sigma > 0.0)) throw DomainError("normal error model: sigma must be positive");
            },
            [](const error_model::Uniform& m) {
                if (!(m.a < m.b)) throw DomainError("uniform error model: requires a < b");
            },
            [](const error_model::Mixture& m) {
                if (!(m.sigma1 > 0.0 && m.sigma2 > 0.0))
                    throw DomainError("mixture error model: sigmas must be positive");
                if (!(m.p1 > 0.0 && m.p1 < 1.0 && m.p2 > 0.0 && m.p2 < 1.0))
                    throw DomainError("mixture error model: probabilities must lie in (0, 1)");
                if (std::abs(m.p1 + m.p2 - 1.0) > 1e-12)
                    throw DomainError("mixture error model: probabilities must sum to 1");
            },
            [](const error_model::ArExponential& m) {
                if (!(m.sigma > 0.0)) throw DomainError("ar_exponential error model: sigma must be positive");
                if (!(m.q > 0.0)) throw DomainError("ar_exponential error model: q must be positive");
            },
        },
        model);
}

std::string describe(const ErrorModel& model) {
    return std::visit(
        overloaded{
            [](const error_model::Normal& m) { return fmt::format("normal(sigma={:g})", m.sigma); },
            [](const error_model::Uniform& m) { return fmt::format("uniform({:g},{:g})", m.a, m.b); },
            [](const error_model::Mixture& m) {
                return fmt::format("mixture(sigma1={:g},p1={:g},sigma2={:g},p2={:g})", m.sigma1, m.p1,
                                   m.sigma2, m.p2);
            },
            [](const error_model::ArExponential& m) {
                return fmt::format("ar_exponential(sigma={:g},q={:g})", m.sigma, m.q);
            },
        },
        model);
}

double variance(const ErrorModel& model) {
    return std::visit(overloaded{
                          [](const error_model::Normal& m) { return m.sigma * m.sigma; },
                          [](const error_model::Uniform& m) { return (m.b - m.a) * (m.b - m.a) / 12.0; },
                          [](const error_model::Mixture& m) {
                              return m.p1 * m.sigma1 * m.sigma1 + m.p2 * m.sigma2 * m.sigma2;
                          },
                          [](const error_model::ArExponential& m) { return m.sigma * m.sigma; },
                      },
                      model);
}

void sample_errors_into(const ErrorModel& model, std::span<double> out, RandomStream& stream) {
    std::visit(overloaded{
                   [&](const error_model::Normal& m) {
                       for (double& x : out) x = m.sigma * stream.normal();
                   },
                   [&](const error_model::Uniform& m) {
                       for (double& x : out) x = stream.uniform(m.a, m.b);
                   },
                   [&](const error_model::Mixture& m) {
                       for (double& x : out) {
                           const double sigma = stream.uniform01() < m.p1 ? m.sigma1 : m.sigma2;
                           x = sigma * stream.normal();
                       }
                   },
                   [&](const error_model::ArExponential& m) {
                       if (out.empty()) return;
                       const double phi = std::exp(-m.q);
                       const double innovation = m.sigma * std::sqrt(1.0 - phi * phi);
                       out[0] = m.sigma * stream.normal();
                       for (std::size_t t = 1; t < out.size(); ++t)
                           out[t] = phi * out[t - 1] + innovation * stream.normal();
                   },
               },
               model);
}

Vector sample_errors(const ErrorModel& model, std::size_t n, RandomStream& stream) {
    if (n == 0) throw DomainError("sample_errors: n must be at least 1");
    validate(model);
    Vector out(n);
    sample_errors_into(model, out, stream);
    return out;
}

}  // namespace quasireg
