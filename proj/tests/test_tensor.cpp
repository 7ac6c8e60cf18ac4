#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opflab/rng.hpp"
#include "opflab/tensor.hpp"

using namespace opflab;

namespace {

Matrix random_matrix(int d, Rng& rng) {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = rng.cgaussian();
    return m;
}

// Symmetric-supported element built straight from the defining formula.
Matrix njn_element(int j, int n, int d) {
    Matrix e01 = Matrix::Zero(d, d);
    e01(0, 1) = 1.0;
    Matrix core = Matrix::Identity(1, 1);
    for (int i = 0; i < n; ++i)
        core = kron(core, i < j ? e01 : Matrix::Identity(d, d));
    const Matrix p = sym_projector(d, n).mat;
    return p * core * p;
}

}  // namespace

TEST_CASE("kron: identities and trace multiplicativity") {
    const Matrix i2 = Matrix::Identity(2, 2);
    CHECK(max_abs(kron(i2, i2) - Matrix::Identity(4, 4)) == 0.0);

    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    Matrix p01 = kron(p0, p1);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(p01(i, j) == (i == 1 && j == 1 ? Complex(1.0) : Complex(0.0)));

    Rng rng(7);
    for (int t = 0; t < 5; ++t) {
        Matrix a = random_matrix(3, rng), b = random_matrix(3, rng);
        const Complex lhs = kron(a, b).trace();
        const Complex rhs = a.trace() * b.trace();
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
    }

    Op oa(FactorShape::single(2), i2);
    Op ob(FactorShape::single(3), Matrix::Identity(3, 3));
    CHECK(kron(oa, ob).shape.flat_dims() == std::vector<int>{2, 3});
}

TEST_CASE("perm_operator: identity, swap, trace of swap") {
    CHECK(max_abs(perm_operator(Permutation::identity(3), 2, 3).mat - Matrix::Identity(8, 8)) == 0.0);

    const Op swap = perm_operator(Permutation({1, 0}), 2, 2);
    Vector e01 = Vector::Zero(4), e10 = Vector::Zero(4);
    e01(1) = 1.0;  // |01⟩
    e10(2) = 1.0;  // |10⟩
    CHECK((swap.mat * e01 - e10).norm() == 0.0);

    for (int d : {2, 3, 4}) {
        const Complex tr = perm_operator(Permutation({1, 0}), d, 2).mat.trace();
        CHECK(std::abs(tr - Complex(d)) < 1e-12);
    }
}

TEST_CASE("perm_operator is a group homomorphism on sampled pairs") {
    Rng rng(11);
    const int n = 4, d = 2;
    for (int t = 0; t < 10; ++t) {
        std::vector<int> a(n), b(n);
        for (int i = 0; i < n; ++i) a[i] = b[i] = i;
        for (int i = n - 1; i > 0; --i) {
            std::swap(a[i], a[rng.uniform_int(0, i)]);
            std::swap(b[i], b[rng.uniform_int(0, i)]);
        }
        Permutation pa(a), pb(b);
        const Matrix lhs = perm_operator(pa.compose(pb), d, n).mat;
        const Matrix rhs = perm_operator(pa, d, n).mat * perm_operator(pb, d, n).mat;
        CHECK(max_abs(lhs - rhs) == 0.0);
    }
}

TEST_CASE("sym_projector: rank, idempotence, permutation invariance") {
    CHECK(max_abs(sym_projector(3, 1).mat - Matrix::Identity(3, 3)) == 0.0);
    CHECK(numerical_rank(sym_projector(2, 2).mat) == 3);

    for (int d = 2; d <= 4; ++d) {
        for (int n = 1; n <= 3; ++n) {
            const Matrix p = sym_projector(d, n).mat;
            CHECK(max_abs(p - p.adjoint()) < 1e-12);
            CHECK(max_abs(p * p - p) < 1e-12);
            // commutes with every permutation operator
            std::vector<int> img(n);
            for (int i = 0; i < n; ++i) img[i] = i;
            do {
                const Matrix pi = perm_operator(Permutation(img), d, n).mat;
                CHECK(max_abs(pi * p - p * pi) < 1e-12);
            } while (std::next_permutation(img.begin(), img.end()));
        }
    }
}

TEST_CASE("antisym_projector: singlet at d=2, orthogonality, rank at d=3") {
    const Op pm = antisym_projector(2);
    CHECK(numerical_rank(pm.mat) == 1);
    Vector singlet = Vector::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    CHECK(max_abs(pm.mat - singlet * singlet.adjoint()) < 1e-12);

    CHECK(max_abs(sym_projector(2, 2).mat * pm.mat) < 1e-12);
    CHECK(numerical_rank(antisym_projector(3).mat) == 3);  // rank of 1 - P_+
    CHECK_THROWS_AS(antisym_projector(2, 3), std::invalid_argument);
}

TEST_CASE("partial_trace: product rule, kernel element, factor independence") {
    Rng rng(13);
    Matrix a = random_matrix(3, rng), b = random_matrix(3, rng);
    Op ab(FactorShape::power(3, 2), kron(a, b));
    CHECK(max_abs(partial_trace(ab, 1).mat - a * b.trace()) < 1e-12);
    CHECK(max_abs(partial_trace(ab, 0).mat - b * a.trace()) < 1e-12);

    for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
        Op m(FactorShape::power(d, n), njn_element(n, n, d));
        CHECK(max_abs(partial_trace(m, n - 1).mat) < 1e-12);
    }

    for (auto [d, n] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 3}}) {
        const Matrix p = sym_projector(d, n).mat;
        Op m(FactorShape::power(d, n), p * random_matrix(static_cast<int>(p.rows()), rng) * p);
        const Matrix last = partial_trace(m, n - 1).mat;
        const Matrix first = partial_trace(m, 0).mat;
        CHECK(max_abs(last - first) < 1e-12);
    }
}

TEST_CASE("partial_trace: linearity and symmetric-cone preservation") {
    Rng rng(17);
    const int d = 2, n = 3;
    const Matrix p = sym_projector(d, n).mat;
    const Matrix pm1 = sym_projector(d, n - 1).mat;
    for (int t = 0; t < 5; ++t) {
        Matrix r1 = random_matrix(8, rng), r2 = random_matrix(8, rng);
        Op m1(FactorShape::power(d, n), p * r1 * p);
        Op m2(FactorShape::power(d, n), p * r2 * p);
        Op sum(FactorShape::power(d, n), m1.mat * 0.3 + m2.mat * 1.7);
        CHECK(max_abs(partial_trace(sum, 2).mat -
                      (0.3 * partial_trace(m1, 2).mat + 1.7 * partial_trace(m2, 2).mat)) < 1e-12);
        const Matrix tr = partial_trace(m1, 2).mat;
        CHECK(max_abs(pm1 * tr * pm1 - tr) < 1e-11);
    }
}

TEST_CASE("factor_reorder: identity, product evaluation, inverse, spectra") {
    Rng rng(19);
    Op m(FactorShape::single(3), random_matrix(3, rng));
    Op same = factor_reorder(m, FactorShape::single(3), FactorShape::single(3));
    CHECK(max_abs(same.mat - m.mat) == 0.0);

    // grouped F ⊗ G against interleaved evaluation on (α ⊗ β)^{⊗2}
    const int a = 2, b = 3;
    const Matrix f = hermitize(random_matrix(a * a, rng));
    const Matrix g = hermitize(random_matrix(b * b, rng));
    Op fg(FactorShape::flat({a, a, b, b}), kron(f, g));
    Op inter = factor_reorder(fg, FactorShape::flat({a, a, b, b}), FactorShape({a, b}, 2));
    for (int t = 0; t < 10; ++t) {
        const Ket alpha = random_ket(a, rng), beta = random_ket(b, rng);
        const Vector ab = kron(alpha.amplitudes, beta.amplitudes);
        const Vector w = kron(ab, ab);
        const Complex lhs = (w.adjoint() * inter.mat * w).value();
        const Complex fa = (ket_power(alpha, 2).adjoint() * f * ket_power(alpha, 2)).value();
        const Complex gb = (ket_power(beta, 2).adjoint() * g * ket_power(beta, 2)).value();
        const Complex rhs = fa * gb;
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }

    Op back = factor_reorder(inter, FactorShape({a, b}, 2), FactorShape::flat({a, a, b, b}));
    CHECK(max_abs(back.mat - fg.mat) == 0.0);

    // conjugation preserves spectra of Hermitian inputs
    Op h(FactorShape::flat({2, 3, 2}), hermitize(random_matrix(12, rng)));
    Op hr = reorder_factors(h, {2, 0, 1});
    Eigen::SelfAdjointEigenSolver<Matrix> e1(h.mat), e2(hr.mat);
    CHECK((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);

    CHECK_THROWS_AS(factor_reorder(m, FactorShape::single(3), FactorShape::single(4)),
                    std::invalid_argument);
}

TEST_CASE("grouped/interleaved helpers invert each other") {
    Rng rng(23);
    Op m(FactorShape({2, 3}, 2), random_matrix(36, rng));
    Op g = interleaved_to_grouped(m, {2, 3}, 2);
    CHECK(g.shape.flat_dims() == std::vector<int>{2, 2, 3, 3});
    Op back = grouped_to_interleaved(g, {2, 3}, 2);
    CHECK(max_abs(back.mat - m.mat) == 0.0);
}

TEST_CASE("operator_interval_check: zero, overflow, convex combinations") {
    const Matrix p = sym_projector(2, 2).mat;
    CHECK(operator_interval_check(Matrix::Zero(4, 4), p, tolerances().psd_floor));
    CHECK_FALSE(operator_interval_check(2.0 * p, p, tolerances().psd_floor));

    Rng rng(29);
    const Matrix id = Matrix::Identity(4, 4);
    for (int t = 0; t < 5; ++t) {
        // convex combination of random projectors stays inside [0, 1]
        Matrix acc = Matrix::Zero(4, 4);
        double wsum = 0;
        for (int k = 0; k < 3; ++k) {
            const Matrix u = haar_unitary(4, rng);
            Matrix d = Matrix::Zero(4, 4);
            for (int i = 0; i < 4; ++i) d(i, i) = rng.uniform() < 0.5 ? 0.0 : 1.0;
            const double w = rng.uniform();
            acc += w * (u * d * u.adjoint());
            wsum += w;
        }
        acc /= wsum;
        CHECK(operator_interval_check(acc, id, tolerances().psd_floor));
    }

    Matrix nh = Matrix::Zero(2, 2);
    nh(0, 1) = 1.0;
    CHECK_THROWS_AS(operator_interval_check(nh, Matrix::Identity(2, 2), 1e-9),
                    std::invalid_argument);
}

TEST_CASE("Ket validation") {
    Vector v(2);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(Ket{v}, std::invalid_argument);
    CHECK(Ket::normalized(v).amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-14));
}
