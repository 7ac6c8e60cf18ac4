#include "opflab/rng.hpp"

#include <Eigen/QR>
#include <cmath>

namespace opflab {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int lo, int hi) {
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
}

double Rng::gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Complex Rng::cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
}

Matrix haar_unitary(int d, Rng& rng) {
    Matrix z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) z(i, j) = rng.cgaussian();
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        Complex ph = r(j, j);
        const double a = std::abs(ph);
        q.col(j) *= (a > 0 ? ph / a : Complex(1.0, 0.0));
    }
    return q;
}

Ket random_ket(int d, Rng& rng) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = rng.cgaussian();
    return Ket::normalized(std::move(v));
}

}  // namespace opflab
