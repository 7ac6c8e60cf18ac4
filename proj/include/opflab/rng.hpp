#pragma once

#include <cstdint>
#include <random>

#include "opflab/tensor.hpp"

namespace opflab {

// splitmix64 step; used to derive independent sub-streams from (seed, salt).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// Seeded generator with an implementation-pinned double path (53-bit uniforms,
// Box-Muller gaussians), so fixtures replay bit-identically.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed), seed_(seed) {}

    std::uint64_t next_u64() { return eng_(); }
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);
    int uniform_int(int lo, int hi);        // inclusive bounds
    double gaussian();
    Complex cgaussian();                    // independent N(0,1) real and imaginary parts

    std::uint64_t seed() const { return seed_; }
    Rng fork(std::uint64_t salt) const { return Rng(mix_seed(seed_, salt)); }

private:
    std::mt19937_64 eng_;
    std::uint64_t seed_;
};

// QR of a complex Gaussian matrix with the R-diagonal phases absorbed; Haar
// distributed on U(d).
Matrix haar_unitary(int d, Rng& rng);

Ket random_ket(int d, Rng& rng);

}  // namespace opflab
