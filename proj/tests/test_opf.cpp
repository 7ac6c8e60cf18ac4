#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opflab/opf.hpp"
#include "opflab/rng.hpp"

using namespace opflab;

namespace {

Opf projector_opf(int d, const Ket& phi) {  // n = 1 rank-one projector
    return Opf(MnElement(d, 1, phi.amplitudes * phi.amplitudes.adjoint()));
}

// Real vectorization of a Hermitian matrix (isometric on the Hermitian part).
Vector real_embed(const Matrix& h) {
    const Eigen::Index d = h.rows();
    Vector v(d * d);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < d; ++i) v(k++) = h(i, i).real();
    const double s = std::sqrt(2.0);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i + 1; j < d; ++j) {
            v(k++) = s * h(i, j).real();
            v(k++) = s * h(i, j).imag();
        }
    return v;
}

}  // namespace

TEST_CASE("evaluate: unit, zero, and a rank-one projector") {
    Rng rng(5);
    for (int d : {2, 3}) {
        for (int n : {1, 2}) {
            const Ket psi = random_ket(d, rng);
            CHECK(evaluate(unit_opf(d, n), psi) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(evaluate(zero_opf(d, n), psi) == 0.0);
        }
    }
    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK(evaluate(projector_opf(2, Ket::basis_state(2, 0)), Ket(plus)) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(evaluate(unit_opf(2, 1), random_ket(3, rng)), std::invalid_argument);
}

TEST_CASE("evaluate_ensemble: singleton, uniform basis, toy degree-2 outcome") {
    Rng rng(7);
    const Ket psi = random_ket(2, rng);
    const Opf f = projector_opf(2, Ket::basis_state(2, 0));
    CHECK(evaluate_ensemble(f, Ensemble::pure(psi)) ==
          doctest::Approx(evaluate(f, psi)).epsilon(1e-12));

    for (int d : {2, 3}) {
        std::vector<Ket> basis;
        for (int i = 0; i < d; ++i) basis.push_back(Ket::basis_state(d, i));
        const Opf g = projector_opf(d, Ket::basis_state(d, 0));
        CHECK(evaluate_ensemble(g, Ensemble::uniform(basis)) ==
              doctest::Approx(1.0 / d).epsilon(1e-12));
    }

    // n=2, d=2: F = P_+ |00⟩⟨00| P_+ on the uniform computational ensemble.
    // Direct two-term sum: (|⟨00|00⟩|² + |⟨00|11⟩|²)/2 = 1/2.
    Vector e00 = Vector::Zero(4);
    e00(0) = 1.0;
    const Matrix p = sym_projector(2, 2).mat;
    const Opf toy(MnElement(2, 2, p * (e00 * e00.adjoint()) * p));
    const Ensemble comp = Ensemble::uniform({Ket::basis_state(2, 0), Ket::basis_state(2, 1)});
    CHECK(evaluate_ensemble(toy, comp) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mix: identity, halving, pointwise linearity") {
    Rng rng(9);
    const Opf f = projector_opf(2, random_ket(2, rng));
    const Opf m1 = mix({f}, {1.0});
    CHECK(max_abs(m1.mat() - f.mat()) < 1e-15);

    const Opf half = mix({f, zero_opf(2, 1)}, {0.5, 0.5});
    for (int t = 0; t < 10; ++t) {
        const Ket psi = random_ket(2, rng);
        CHECK(evaluate(half, psi) == doctest::Approx(evaluate(f, psi) / 2).epsilon(1e-12));
    }

    const Opf g = projector_opf(2, random_ket(2, rng));
    const Opf h = projector_opf(2, random_ket(2, rng));
    const std::vector<double> w{0.2, 0.3, 0.5};
    const Opf mx = mix({f, g, h}, w);
    for (int t = 0; t < 20; ++t) {
        const Ket psi = random_ket(2, rng);
        const double direct = w[0] * evaluate(f, psi) + w[1] * evaluate(g, psi) + w[2] * evaluate(h, psi);
        CHECK(std::abs(evaluate(mx, psi) - direct) < 1e-12);
    }
    CHECK_THROWS_AS(mix({f, g}, {0.7, 0.7}), std::invalid_argument);
}

TEST_CASE("pullback_unitary: identity, composition, basis rotation") {
    Rng rng(11);
    const Opf f(MnElement(2, 2, sym_projector(2, 2).mat * 0.4));
    const Opf same = pullback_unitary(f, Matrix::Identity(2, 2));
    CHECK(max_abs(same.mat() - f.mat()) < 1e-15);

    for (int t = 0; t < 5; ++t) {
        const Matrix u = haar_unitary(2, rng), v = haar_unitary(2, rng);
        const Opf lhs = pullback_unitary(pullback_unitary(f, u), v);
        const Opf rhs = pullback_unitary(f, u * v);
        CHECK(max_abs(lhs.mat() - rhs.mat()) < 1e-12);
    }

    const Opf z0 = projector_opf(2, Ket::basis_state(2, 0));
    const Matrix u = haar_unitary(2, rng);
    const double lhs = evaluate(pullback_unitary(z0, u), Ket::basis_state(2, 0));
    CHECK(lhs == doctest::Approx(std::norm(u(0, 0))).epsilon(1e-12));

    Matrix notu = Matrix::Identity(2, 2) * 2.0;
    CHECK_THROWS_AS(pullback_unitary(f, notu), std::invalid_argument);
}

TEST_CASE("moment_state: singleton, uniform bases") {
    Rng rng(13);
    const Ket psi = random_ket(2, rng);
    const Vector w2 = ket_power(psi, 2);
    CHECK(max_abs(moment_state(Ensemble::pure(psi), 2).omega - w2 * w2.adjoint()) < 1e-14);

    for (int d : {2, 3}) {
        std::vector<Ket> basis;
        for (int i = 0; i < d; ++i) basis.push_back(Ket::basis_state(d, i));
        CHECK(max_abs(moment_state(Ensemble::uniform(basis), 1).omega -
                      Matrix::Identity(d, d) / d) < 1e-14);
    }

    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = 0.5;
    expected(3, 3) = 0.5;
    const Ensemble comp = Ensemble::uniform({Ket::basis_state(2, 0), Ket::basis_state(2, 1)});
    CHECK(max_abs(moment_state(comp, 2).omega - expected) < 1e-14);
}

TEST_CASE("distinguishability_gap: MUB ensembles at n=1 and n=2") {
    const double s = 1.0 / std::sqrt(2.0);
    Vector vp(2), vm(2);
    vp << s, s;
    vm << s, -s;
    const Ensemble comp = Ensemble::uniform({Ket::basis_state(2, 0), Ket::basis_state(2, 1)});
    const Ensemble had = Ensemble::uniform({Ket(vp), Ket(vm)});

    const GapResult same = distinguishability_gap(comp, comp, 2);
    CHECK(same.gap == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_FALSE(same.witness.has_value());

    const GapResult n1 = distinguishability_gap(comp, had, 1);
    CHECK(n1.gap < 1e-12);  // both reduce to I/2
    CHECK_FALSE(n1.witness.has_value());

    const GapResult n2 = distinguishability_gap(comp, had, 2);
    CHECK(n2.gap == doctest::Approx(1.0).epsilon(1e-10));  // frozen trace-norm value
    REQUIRE(n2.witness.has_value());
    const double p1 = evaluate_ensemble(*n2.witness, comp);
    const double p2 = evaluate_ensemble(*n2.witness, had);
    CHECK(std::abs((p1 - p2) - 0.5) < 1e-10);  // frozen witness separation
}

TEST_CASE("restrict_with_ancilla: product form and pointwise agreement") {
    Rng rng(17);
    const Ket beta = random_ket(3, rng);

    // n = 1, G = Q ⊗ |β⟩⟨β| restricts to Q
    const Matrix q = 0.5 * (Matrix::Identity(2, 2) + 0.3 * haar_unitary(2, rng) *
                                                         Matrix::Identity(2, 2) *
                                                         haar_unitary(2, rng).adjoint());
    const Matrix qh = hermitize(q) * 0.5;
    const Matrix g1 = kron(qh, beta.amplitudes * beta.amplitudes.adjoint());
    const Opf g(MnElement(6, 1, g1));
    const Opf f = restrict_with_ancilla(g, beta);
    CHECK(max_abs(f.mat() - qh) < 1e-12);

    // random degree-2 OPF on C^4 = C^2 ⊗ C^2, pointwise check
    const Matrix p4 = sym_projector(4, 2).mat;
    Matrix r(16, 16);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) r(i, j) = rng.cgaussian();
    const Matrix u = haar_unitary(16, rng);
    Matrix diag = Matrix::Zero(16, 16);
    for (int i = 0; i < 16; ++i) diag(i, i) = rng.uniform();
    const Opf g2(MnElement(4, 2, p4 * (u * diag * u.adjoint()) * p4));
    const Ket beta2 = random_ket(2, rng);
    const Opf f2 = restrict_with_ancilla(g2, beta2);
    for (int t = 0; t < 20; ++t) {
        const Ket alpha = random_ket(2, rng);
        const Ket joint = Ket::normalized(kron(alpha.amplitudes, beta2.amplitudes));
        CHECK(std::abs(evaluate(f2, alpha) - evaluate(g2, joint)) < 1e-12);
    }

    CHECK_THROWS_AS(restrict_with_ancilla(g2, random_ket(3, rng)), std::invalid_argument);
}

TEST_CASE("invariants: moment linearity, phase invariance, normalization") {
    Rng rng(19);
    const Matrix p = sym_projector(2, 2).mat;
    const Matrix u = haar_unitary(4, rng);
    Matrix diag = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) diag(i, i) = rng.uniform();
    const Opf f(MnElement(2, 2, p * (u * diag * u.adjoint()) * p));

    std::vector<std::pair<Ket, double>> members;
    double tot = 0;
    for (int i = 0; i < 3; ++i) {
        const double w = rng.uniform() + 0.1;
        members.emplace_back(random_ket(2, rng), w);
        tot += w;
    }
    for (auto& [k, w] : members) w /= tot;
    // normalize exactly enough for the invariant check
    double s = 0;
    for (auto& [k, w] : members) s += w;
    members.back().second += 1.0 - s;
    const Ensemble e(members);

    const MomentState w2 = moment_state(e, 2);
    const double via_moment = (f.mat() * w2.omega).trace().real();
    CHECK(std::abs(evaluate_ensemble(f, e) - via_moment) < 1e-12);

    const Ket psi = random_ket(2, rng);
    for (int t = 0; t < 5; ++t) {
        const double theta = rng.uniform(0, 2 * M_PI);
        const Ket phased(psi.amplitudes * Complex(std::cos(theta), std::sin(theta)));
        CHECK(std::abs(evaluate(f, phased) - evaluate(f, psi)) < 1e-12);
    }

    const Opf g(MnElement(2, 2, p - f.mat()));
    const Measurement m({f, g});
    for (int t = 0; t < 10; ++t) {
        const Ket x = random_ket(2, rng);
        double total = 0;
        for (const Opf& out : m.outcomes) total += evaluate(out, x);
        CHECK(std::abs(total - 1.0) < 1e-10);
    }
}

TEST_CASE("moment operators span spaces of the expected real dimension") {
    Rng rng(23);
    for (auto [d, n, expect] : std::vector<std::array<int, 3>>{
             {2, 1, 4}, {3, 1, 9}, {2, 2, 9}, {3, 2, 36}}) {
        const int samples = 2 * expect + 6;
        Matrix rows(samples, static_cast<Eigen::Index>(std::pow(d, 2 * n)));
        for (int s = 0; s < samples; ++s) {
            const MomentState w = moment_state(Ensemble::pure(random_ket(d, rng)), n);
            rows.row(s) = real_embed(w.omega).transpose();
        }
        CHECK(numerical_rank(rows) == expect);
    }
}
