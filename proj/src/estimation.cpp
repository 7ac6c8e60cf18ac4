#include "opflab/estimation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

#include "opflab/irreps.hpp"

namespace opflab {

FeatureDesign make_design(const std::vector<Opf>& features, const std::vector<Ensemble>& probes) {
    FeatureDesign d;
    d.probes = probes;
    d.opfs = features;
    d.matrix.resize(static_cast<Eigen::Index>(probes.size()),
                    static_cast<Eigen::Index>(features.size()));
    for (size_t p = 0; p < probes.size(); ++p)
        for (size_t x = 0; x < features.size(); ++x)
            d.matrix(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(x)) =
                evaluate_ensemble(features[x], probes[p]);
    return d;
}

EnsembleEvaluator evaluator_of(const Opf& target) {
    return [target](const Ensemble& e) { return evaluate_ensemble(target, e); };
}

EnsembleEvaluator pure_state_evaluator(std::function<double(const Ket&)> f) {
    return [f = std::move(f)](const Ensemble& e) {
        double acc = 0.0;
        for (const auto& [k, p] : e.members) acc += p * f(k);
        return acc;
    };
}

Reconstruction affine_reconstruct(const std::vector<Opf>& features, const EnsembleEvaluator& target,
                                  const std::vector<Ensemble>& probes,
                                  const std::vector<Ensemble>& holdout) {
    const size_t k = features.size();
    if (probes.size() < k + 2)
        throw std::invalid_argument("affine_reconstruct: need at least k+2 probes");

    Eigen::MatrixXd x(static_cast<Eigen::Index>(probes.size()), static_cast<Eigen::Index>(k + 1));
    Eigen::VectorXd y(static_cast<Eigen::Index>(probes.size()));
    for (size_t p = 0; p < probes.size(); ++p) {
        for (size_t f = 0; f < k; ++f)
            x(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(f)) =
                evaluate_ensemble(features[f], probes[p]);
        x(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(k)) = 1.0;
        y(static_cast<Eigen::Index>(p)) = target(probes[p]);
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(tolerances().rank_cut);
    const Eigen::VectorXd coef = svd.solve(y);

    Reconstruction rec;
    rec.design_rank = static_cast<int>(svd.rank());
    rec.full_rank = rec.design_rank == static_cast<int>(k) + 1;
    rec.coefficients = coef.head(static_cast<Eigen::Index>(k));
    rec.constant = coef(static_cast<Eigen::Index>(k));

    const auto& eval_set = holdout.empty() ? probes : holdout;
    double worst = 0.0;
    for (const Ensemble& e : eval_set) {
        double fit = rec.constant;
        for (size_t f = 0; f < k; ++f) fit += rec.coefficients(static_cast<Eigen::Index>(f)) *
                                               evaluate_ensemble(features[f], e);
        worst = std::max(worst, std::abs(fit - target(e)));
    }
    rec.residual = worst;
    return rec;
}

std::vector<Opf> feature_basis(int d, int n) {
    const Matrix& p = sym_projector(d, n).mat;
    Eigen::SelfAdjointEigenSolver<Matrix> es(p);
    std::vector<Vector> sym;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) sym.push_back(es.eigenvectors().col(i));
    const int ds = static_cast<int>(sym.size());
    Matrix v(p.rows(), ds);
    for (int i = 0; i < ds; ++i) v.col(i) = sym[i];

    std::vector<Opf> features;
    for (const Matrix& g : su_generators(ds)) {
        const Matrix h = v * g * v.adjoint();
        Eigen::SelfAdjointEigenSolver<Matrix> eh(h, Eigen::EigenvaluesOnly);
        const double m = eh.eigenvalues().cwiseAbs().maxCoeff();
        features.emplace_back(MnElement(d, n, (p + h / (2.0 * m)) / 2.0));
    }
    return features;
}

std::vector<Ensemble> random_probes(int d, int count, Rng& rng) {
    std::vector<Ensemble> probes;
    for (int i = 0; i < count; ++i) {
        const int m = rng.uniform_int(1, 3);
        std::vector<std::pair<Ket, double>> members;
        double total = 0.0;
        for (int j = 0; j < m; ++j) {
            const double w = rng.uniform() + 0.05;
            members.emplace_back(random_ket(d, rng), w);
            total += w;
        }
        double acc = 0.0;
        for (int j = 0; j < m - 1; ++j) {
            members[j].second /= total;
            acc += members[j].second;
        }
        members[m - 1].second = 1.0 - acc;
        probes.emplace_back(std::move(members));
    }
    return probes;
}

int estimability_dimension(int n, int d, std::uint64_t seed) {
    const long long k = dim_Mn(d, n) - 1;
    // cross-validate against the numerical rank of a random design
    Rng rng(seed);
    const std::vector<Opf> features = feature_basis(d, n);
    const std::vector<Ensemble> probes = random_probes(d, 2 * static_cast<int>(k) + 10, rng);
    const FeatureDesign design = make_design(features, probes);
    Eigen::MatrixXd with_unit(design.matrix.rows(), design.matrix.cols() + 1);
    with_unit << design.matrix, Eigen::VectorXd::Ones(design.matrix.rows());
    Matrix complex_copy = with_unit.cast<Complex>();
    const int rank = numerical_rank(complex_copy);
    if (rank != static_cast<int>(k) + 1)
        throw std::runtime_error("estimability_dimension: design rank " + std::to_string(rank) +
                                 " disagrees with dim M_n - 1 = " + std::to_string(k));
    return static_cast<int>(k);
}

std::vector<WitnessRow> non_polynomial_witness(const ContextualMeasurement& basis, int n_max,
                                               int probe_count, std::uint64_t seed) {
    if (n_max < 1) throw std::invalid_argument("non_polynomial_witness: n_max >= 1");
    const int d = basis.d();
    const auto target = pure_state_evaluator(
        [basis](const Ket& psi) { return contextual_probabilities(basis, psi)(0); });

    std::vector<WitnessRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        Rng rng(mix_seed(seed, n));
        const std::vector<Opf> features = feature_basis(d, n);
        const int holdout_count = probe_count / 2 + 5;
        const std::vector<Ensemble> probes =
            random_probes(d, probe_count + holdout_count, rng);
        const std::vector<Ensemble> fit(probes.begin(), probes.begin() + probe_count);
        const std::vector<Ensemble> hold(probes.begin() + probe_count, probes.end());
        const Reconstruction rec = affine_reconstruct(features, target, fit, hold);
        rows.push_back({n, static_cast<int>(features.size()), rec.residual});
    }
    return rows;
}

}  // namespace opflab
