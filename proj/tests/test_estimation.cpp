#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opflab/estimation.hpp"
#include "opflab/irreps.hpp"
#include "opflab/rng.hpp"

using namespace opflab;

namespace {

Opf direction_projector(const Vector& v) {  // n=1 "up" outcome along a Bloch direction
    return Opf(MnElement(static_cast<int>(v.size()), 1, v * v.adjoint() / v.squaredNorm()));
}

std::vector<Opf> three_directions() {
    Vector z(2), x(2), y(2);
    z << 1, 0;
    x << 1, 1;
    y << 1, Complex(0, 1);
    return {direction_projector(z), direction_projector(x), direction_projector(y)};
}

}  // namespace

TEST_CASE("affine_reconstruct: a feature reconstructs itself exactly") {
    Rng rng(3);
    const std::vector<Opf> features = three_directions();
    const std::vector<Ensemble> probes = random_probes(2, 12, rng);
    const std::vector<Ensemble> hold = random_probes(2, 6, rng);
    const Reconstruction rec = affine_reconstruct(features, evaluator_of(features[1]), probes, hold);
    CHECK(rec.full_rank);
    CHECK(rec.residual < 1e-12);
    CHECK(rec.coefficients(1) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(rec.coefficients(0)) < 1e-8);
    CHECK(std::abs(rec.coefficients(2)) < 1e-8);
    CHECK(std::abs(rec.constant) < 1e-8);
}

TEST_CASE("quantum d=2: three independent directions determine every outcome") {
    Rng rng(5);
    const std::vector<Opf> features = three_directions();
    const std::vector<Ensemble> probes = random_probes(2, 20, rng);
    const std::vector<Ensemble> hold = random_probes(2, 10, rng);
    for (int t = 0; t < 5; ++t) {
        const Opf target = random_opf(2, 1, rng);
        const Reconstruction rec = affine_reconstruct(features, evaluator_of(target), probes, hold);
        CHECK(rec.full_rank);
        CHECK(rec.residual < 1e-8);
    }

    // two directions are not enough for a generic target
    const std::vector<Opf> two{features[0], features[1]};
    const Opf target = random_opf(2, 1, rng);
    const Reconstruction rec2 = affine_reconstruct(two, evaluator_of(target), probes, hold);
    CHECK(rec2.residual > 1e-3);
}

TEST_CASE("reconstruction coefficients are probe-set independent on full-rank designs") {
    Rng rng(7);
    const std::vector<Opf> features = three_directions();
    const Opf target = random_opf(2, 1, rng);
    const std::vector<Ensemble> probes1 = random_probes(2, 15, rng);
    const std::vector<Ensemble> probes2 = random_probes(2, 25, rng);
    const Reconstruction r1 = affine_reconstruct(features, evaluator_of(target), probes1, {});
    const Reconstruction r2 = affine_reconstruct(features, evaluator_of(target), probes2, {});
    REQUIRE(r1.full_rank);
    REQUIRE(r2.full_rank);
    CHECK((r1.coefficients - r2.coefficients).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(r1.constant - r2.constant) < 1e-8);
}

TEST_CASE("rank-deficient designs are flagged") {
    Rng rng(9);
    std::vector<Opf> features = three_directions();
    features.push_back(features[0]);  // duplicated feature
    const std::vector<Ensemble> probes = random_probes(2, 15, rng);
    const Reconstruction rec =
        affine_reconstruct(features, evaluator_of(features[0]), probes, {});
    CHECK_FALSE(rec.full_rank);
    CHECK(rec.design_rank == 4);
    CHECK_THROWS_AS(affine_reconstruct(features, evaluator_of(features[0]),
                                       random_probes(2, 3, rng), {}),
                    std::invalid_argument);
}

TEST_CASE("estimability dimension: quantum values and the degree-2 count") {
    CHECK(estimability_dimension(1, 2, 11) == 3);
    CHECK(estimability_dimension(1, 3, 12) == 8);
    CHECK(estimability_dimension(2, 2, 13) == 8);
}

TEST_CASE("feature bases reach every target at the estimability dimension") {
    Rng rng(15);
    const std::vector<Opf> features = feature_basis(2, 2);
    CHECK(static_cast<long long>(features.size()) == dim_Mn(2, 2) - 1);
    const std::vector<Ensemble> probes = random_probes(2, 30, rng);
    const std::vector<Ensemble> hold = random_probes(2, 12, rng);
    for (int t = 0; t < 3; ++t) {
        const Opf target = random_opf(2, 2, rng);
        const Reconstruction rec = affine_reconstruct(features, evaluator_of(target), probes, hold);
        CHECK(rec.full_rank);
        CHECK(rec.residual < 1e-8);
    }

    // one feature short: a generic degree-2 target no longer fits
    std::vector<Opf> short_basis(features.begin(), features.end() - 1);
    const Opf target = random_opf(2, 2, rng);
    const Reconstruction rec = affine_reconstruct(short_basis, evaluator_of(target), probes, hold);
    CHECK(rec.residual > 1e-6);
}

TEST_CASE("contextual rule fails estimation at degrees 1..3; Born control passes") {
    const ContextualMeasurement basis({Ket::basis_state(2, 0), Ket::basis_state(2, 1)});
    const auto rows = non_polynomial_witness(basis, 3, 60, 17);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        INFO("degree " << row.n << " residual " << row.residual);
        CHECK(row.residual > 1e-3);
    }

    // Born-rule control under the same harness
    Rng rng(19);
    const auto born = pure_state_evaluator(
        [](const Ket& psi) { return std::norm(psi.amplitudes(0)); });
    const std::vector<Opf> features = feature_basis(2, 1);
    const std::vector<Ensemble> probes = random_probes(2, 25, rng);
    const std::vector<Ensemble> hold = random_probes(2, 10, rng);
    const Reconstruction rec = affine_reconstruct(features, born, probes, hold);
    CHECK(rec.residual < 1e-10);
}

TEST_CASE("witness residual does not improve with more probes") {
    const ContextualMeasurement basis({Ket::basis_state(2, 0), Ket::basis_state(2, 1)});
    const auto target = pure_state_evaluator(
        [basis](const Ket& psi) { return contextual_probabilities(basis, psi)(0); });
    const std::vector<Opf> features = feature_basis(2, 1);
    Rng rng(21);
    const std::vector<Ensemble> pool = random_probes(2, 80, rng);
    const std::vector<Ensemble> small(pool.begin(), pool.begin() + 20);
    // residual over the fit set itself: extra constraints cannot shrink it
    const double r_small = affine_reconstruct(features, target, small, small).residual;
    const double r_large = affine_reconstruct(features, target, pool, pool).residual;
    CHECK(r_large >= r_small - 1e-6);
}
