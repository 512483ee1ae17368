#include "faultloc/rng.hpp"

namespace faultloc {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(root);
    for (std::uint64_t p : path) {
        s = splitmix64(s ^ splitmix64(p + 0xD1B54A32D192ED03ULL));
    }
    return s;
}

std::uint64_t Rng::next_below(std::uint64_t n) {
    if (n <= 1) return 0;
    // reject the tail that would bias the modulus
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    std::uint64_t x;
    do {
        x = gen_();
    } while (x > limit);
    return x % n;
}

int Rng::binomial(int n, double p) {
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        hits += bernoulli(p) ? 1 : 0;
    }
    return hits;
}

}  // namespace faultloc
