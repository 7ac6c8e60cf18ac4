#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opflab/irreps.hpp"
#include "opflab/rng.hpp"
#include "opflab/symgroup.hpp"

using namespace opflab;

TEST_CASE("generator_Njn: trivial block, kernel membership, trace descent") {
    for (auto [d, n] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 3}}) {
        const MnElement n0 = generator_Njn(0, n, d);
        CHECK(max_abs(n0.mat - sym_projector(d, n).mat) < 1e-12);
    }

    for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
        const MnElement top = generator_Njn(n, n, d);
        const Op op(FactorShape::power(d, n), top.mat);
        CHECK(max_abs(partial_trace(op, n - 1).mat) < 1e-12);
    }

    // tr_n N_{j,n} is a nonzero multiple of N_{j,n-1} for j < n
    for (int d : {2, 3}) {
        const MnElement n12 = generator_Njn(1, 2, d);
        const Matrix traced = partial_trace(Op(FactorShape::power(d, 2), n12.mat), 1).mat;
        const Matrix target = generator_Njn(1, 1, d).mat;
        const Complex coeff = hs_inner(target, traced) / hs_inner(target, target);
        CHECK(std::abs(coeff) > 1e-6);
        CHECK(max_abs(traced - coeff * target) < 1e-12);
    }

    CHECK_THROWS_AS(generator_Njn(3, 2, 2), std::invalid_argument);
}

TEST_CASE("orbit_span dimensions match the closed forms") {
    CHECK(orbit_span(generator_Njn(0, 2, 2), 100, 1).dim() == 1);
    CHECK(orbit_span(generator_Njn(1, 1, 2), 100, 2).dim() == 3);
    CHECK(orbit_span(generator_Njn(2, 2, 2), 100, 3).dim() == 5);
}

TEST_CASE("dimension formulas and the matching identity") {
    CHECK(dim_Mn(3, 2) == 36);
    CHECK(dim_Nn(3, 2) == 27);
    CHECK(dim_Nn(2, 3) == 7);
    for (int d = 2; d <= 5; ++d)
        for (int n = 1; n <= 4; ++n)
            CHECK(dim_Mn(d, n) == dim_Nn(d, n) + dim_Mn(d, n - 1));

    // cross-route: dim N_n^d equals the hook-content dimension of (2n, n^{d-2})
    for (int d = 2; d <= 5; ++d) {
        for (int n = 1; n <= 4; ++n) {
            Partition lam{2 * n};
            for (int i = 0; i < d - 2; ++i) lam.push_back(n);
            CHECK(su_dim(lam, d) == dim_Nn(d, n));
        }
    }
}

TEST_CASE("decompose_Mn block dimensions") {
    const auto b21 = decompose_Mn(2, 1, 10);
    REQUIRE(b21.size() == 2);
    CHECK(b21[0].dim() == 1);
    CHECK(b21[1].dim() == 3);

    const auto b22 = decompose_Mn(2, 2, 11);
    REQUIRE(b22.size() == 3);
    CHECK(b22[0].dim() == 1);
    CHECK(b22[1].dim() == 3);
    CHECK(b22[2].dim() == 5);

    const auto b32 = decompose_Mn(3, 2, 12);
    REQUIRE(b32.size() == 3);
    CHECK(b32[0].dim() == 1);
    CHECK(b32[1].dim() == 8);
    CHECK(b32[2].dim() == 27);

    long long total = 0;
    for (const auto& blk : b32) total += blk.dim();
    CHECK(total == dim_Mn(3, 2));
}

TEST_CASE("irrep blocks: orthonormal, mutually orthogonal, conjugation closed") {
    Rng rng(13);
    const auto blocks = decompose_Mn(2, 2, 14);
    for (const auto& blk : blocks) {
        for (int p = 0; p < blk.dim(); ++p)
            for (int q = 0; q < blk.dim(); ++q) {
                const Complex g = hs_inner(blk.basis[p], blk.basis[q]);
                CHECK(std::abs(g - (p == q ? 1.0 : 0.0)) < 1e-10);
            }
    }
    for (size_t i = 0; i < blocks.size(); ++i)
        for (size_t j = i + 1; j < blocks.size(); ++j)
            for (const auto& x : blocks[i].basis)
                for (const auto& y : blocks[j].basis)
                    CHECK(std::abs(hs_inner(x, y)) < 1e-10);

    // closure under sampled conjugations
    for (const auto& blk : blocks) {
        for (int t = 0; t < 3; ++t) {
            const Matrix u = haar_unitary(2, rng);
            const Matrix un = kron(u, u);
            const Matrix moved = un * blk.basis.front() * un.adjoint();
            Matrix proj = Matrix::Zero(4, 4);
            for (const auto& b : blk.basis) proj += hs_inner(b, moved) * b;
            CHECK(max_abs(moved - proj) < 1e-8);
        }
    }

    // generators live in their own block
    const auto b23 = decompose_Mn(2, 3, 17);
    for (int j = 0; j <= 3; ++j) {
        const Matrix gen = generator_Njn(j, 3, 2).mat;
        for (const auto& blk : b23) {
            if (blk.j == j) continue;
            for (const auto& b : blk.basis) CHECK(std::abs(hs_inner(b, gen)) < 1e-8);
        }
    }
}

TEST_CASE("partial trace maps block j at degree n to block j at degree n-1") {
    const auto b23 = decompose_Mn(2, 3, 19);
    const auto b22 = decompose_Mn(2, 2, 20);
    for (const auto& blk : b23) {
        for (const auto& b : blk.basis) {
            const Matrix traced = partial_trace(Op(FactorShape::power(2, 3), b), 2).mat;
            if (blk.j == 3) {
                CHECK(max_abs(traced) < 1e-10);
                continue;
            }
            // overlap only with the degree-2 block of the same label
            for (const auto& blk2 : b22) {
                if (blk2.j == blk.j) continue;
                for (const auto& c : blk2.basis) CHECK(std::abs(hs_inner(c, traced)) < 1e-10);
            }
        }
    }
}

TEST_CASE("casimir: trivial block, calibration values, equivariance") {
    const CasimirMap cas = casimir_map(2, 2);
    CHECK(max_abs(cas.apply(sym_projector(2, 2).mat)) < 1e-10);

    // calibrated values equal 2j(j+d-1) for the kernel-irrep family
    for (int d : {2, 3}) {
        const CasimirSpectrum spec = casimir_calibrate(d, 2, 21);
        for (const auto& [j, v] : spec.calibration)
            CHECK(v == doctest::Approx(2.0 * j * (j + d - 1)).epsilon(1e-8));
        for (auto it = spec.calibration.begin(); std::next(it) != spec.calibration.end(); ++it)
            CHECK(it->second < std::next(it)->second);
    }

    Rng rng(23);
    for (int t = 0; t < 3; ++t) {
        const Matrix u = haar_unitary(2, rng);
        const Matrix un = kron(u, u);
        const Matrix m = generator_Njn(1, 2, 2).mat;
        CHECK(max_abs(cas.apply(un * m * un.adjoint()) - un * cas.apply(m) * un.adjoint()) < 1e-9);
    }
}

TEST_CASE("omega support: generic state overlaps every block") {
    const auto blocks = decompose_Mn(2, 2, 25);
    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const auto norms = omega_support_check(Ket(plus), blocks);
    REQUIRE(norms.size() == 3);
    for (double v : norms) CHECK(v > 1e-8);

    // against the (|0⟩,|1⟩) generator itself, |0⟩ has vanishing overlap for j >= 1
    const Vector w = ket_power(Ket::basis_state(2, 0), 2);
    for (int j = 1; j <= 2; ++j)
        CHECK(std::abs((w.adjoint() * generator_Njn(j, 2, 2).mat * w).value()) < 1e-14);

    // stabilizer invariance: U fixing psi leaves the form invariant
    Rng rng(27);
    const Ket zero = Ket::basis_state(2, 0);
    const Vector w0 = ket_power(zero, 2);
    for (int t = 0; t < 5; ++t) {
        const double th = rng.uniform(0, 2 * M_PI);
        Matrix u = Matrix::Identity(2, 2);
        u(1, 1) = Complex(std::cos(th), std::sin(th));
        const Matrix un = kron(u, u);
        const Matrix& p = sym_projector(2, 2).mat;
        Matrix r(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int jj = 0; jj < 4; ++jj) r(i, jj) = rng.cgaussian();
        const Matrix m = p * r * p;
        const Complex before = (w0.adjoint() * m * w0).value();
        const Complex after = (w0.adjoint() * (un * m * un.adjoint()) * w0).value();
        CHECK(std::abs(before - after) < 1e-12);
    }
}

TEST_CASE("licit probe: toy star keeps the projected span below j = 2") {
    const ProbeReport rep = licit_probe(toy_star_product(), 31);
    CHECK(rep.all_pass());
    CHECK(rep.control_rank == 100);  // the whole of M_2^4 shows up in the control span
    CHECK(rep.calibration.at(2) == doctest::Approx(20.0).epsilon(1e-8));
    for (const auto& a : rep.assertions) {
        INFO(a.name << " metric " << a.metric);
        CHECK(a.pass);
    }
}

TEST_CASE("tripartite probe: presence/absence contradiction pair") {
    const ProbeReport rep = tripartite_probe(toy_star_product(), 33);
    CHECK(rep.all_pass());
    CHECK(rep.control_rank == 9);  // faithful copy of M_2^2
    CHECK(rep.calibration.at(2) == doctest::Approx(12.0).epsilon(1e-8));
}

TEST_CASE("orbit_span rejects a zero generator") {
    const Matrix z = Matrix::Zero(4, 4);
    CHECK_THROWS_AS(orbit_span(MnElement(2, 2, z), 50, 1), std::invalid_argument);
}
