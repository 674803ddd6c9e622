#ifndef ONT_RNG_HPP
#define ONT_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "concepts.hpp"

namespace ont {

using Rng = std::mt19937_64;

// std::uniform_* distributions are implementation-defined; these helpers
// keep every seeded run reproducible across standard libraries.
inline size_t uniform_index(Rng& rng, size_t n) {
    if (n == 0) throw OntError("uniform_index over empty range");
    return static_cast<size_t>(rng() % n);
}

inline double uniform_real(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_real(rng);
}

template <class T>
void shuffle_vec(Rng& rng, std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = uniform_index(rng, i);
        std::swap(v[i - 1], v[j]);
    }
}

inline std::vector<size_t> shuffled_indices(Rng& rng, size_t n) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle_vec(rng, idx);
    return idx;
}

} // namespace ont

#endif
