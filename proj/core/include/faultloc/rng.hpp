#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace faultloc {

// splitmix64 finalizer; the basis of all seed derivation in this library.
std::uint64_t splitmix64(std::uint64_t x);

// Stable seed-derivation chain: children of one root seed are decorrelated by
// hashing each path element into the state. Used to give every sample, tree,
// and sweep combination an independent stream, so parallel and serial runs
// produce identical results.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

// mt19937_64 wrapper with portable distributions. The std:: distribution
// objects are implementation-defined sequences, so uniforms, shuffles and
// binomials are spelled out here instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1), 53-bit resolution
    double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    // uniform integer in [0, n), unbiased via rejection
    std::uint64_t next_below(std::uint64_t n);

    // sum of n Bernoulli(p) draws; always consumes exactly n variates
    int binomial(int n, double p);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace faultloc
