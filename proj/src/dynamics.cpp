#include "opflab/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace opflab {

DensityMatrix::DensityMatrix(Matrix m) : d(static_cast<int>(m.rows())), mat(std::move(m)) {
    if (mat.rows() != mat.cols()) throw std::invalid_argument("DensityMatrix: not square");
    if (!is_hermitian(mat, tolerances().hermiticity))
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (min_eigenvalue(mat) < -1e-10) throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    if (std::abs(mat.trace().real() - 1.0) > tolerances().equality)
        throw std::invalid_argument("DensityMatrix: trace differs from 1");
}

DensityMatrix DensityMatrix::pure(const Ket& psi) {
    return DensityMatrix(psi.amplitudes * psi.amplitudes.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

// ── CpMap construction ───────────────────────────────────────────────────────

CpMap CpMap::from_kraus(std::vector<Matrix> ks) {
    if (ks.empty()) throw std::invalid_argument("CpMap: empty Kraus list");
    const int d = static_cast<int>(ks.front().rows());
    Matrix total = Matrix::Zero(d, d);
    for (const Matrix& k : ks) {
        if (k.rows() != d || k.cols() != d) throw std::invalid_argument("CpMap: Kraus shape mismatch");
        total += k.adjoint() * k;
    }
    // trace-non-increasing: Σ K†K ≤ 1
    if (min_eigenvalue(Matrix::Identity(d, d) - total) < -tolerances().psd_floor)
        throw std::invalid_argument("CpMap: Kraus operators exceed trace preservation");
    CpMap m;
    m.d_ = d;
    m.kraus_ = std::move(ks);
    return m;
}

CpMap CpMap::from_choi(Matrix choi) {
    const auto dd = choi.rows();
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dd))));
    if (static_cast<Eigen::Index>(d) * d != dd || choi.rows() != choi.cols())
        throw std::invalid_argument("CpMap: Choi matrix must be d² × d²");
    if (!is_hermitian(choi, tolerances().hermiticity))
        throw std::invalid_argument("CpMap: Choi matrix not Hermitian");
    CpMap m;
    m.d_ = d;
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(choi));
    if (es.eigenvalues()(0) >= -tolerances().psd_floor) {
        // CP: harvest Kraus operators, eigenvalue floor 1e-10
        for (Eigen::Index p = 0; p < es.eigenvalues().size(); ++p) {
            const double mu = es.eigenvalues()(p);
            if (mu < 1e-10) continue;
            Matrix k(d, d);
            for (int i = 0; i < d; ++i)      // input index
                for (int r = 0; r < d; ++r)  // output row
                    k(r, i) = std::sqrt(mu) * es.eigenvectors().col(p)(i * d + r);
            m.kraus_.push_back(std::move(k));
        }
        if (m.kraus_.empty()) m.kraus_.push_back(Matrix::Zero(d, d));
    } else {
        m.choi_ = std::move(choi);
    }
    return m;
}

CpMap CpMap::identity(int d) { return from_kraus({Matrix::Identity(d, d)}); }

CpMap CpMap::unitary(const Matrix& u) {
    if (max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) > tolerances().hermiticity)
        throw std::invalid_argument("CpMap::unitary: not unitary");
    return from_kraus({u});
}

Instrument::Instrument(std::vector<CpMap> maps) : outcomes(std::move(maps)) {
    if (outcomes.empty()) throw std::invalid_argument("Instrument: no outcomes");
    const int d = outcomes.front().dim();
    Matrix total = Matrix::Zero(d, d);
    for (const CpMap& m : outcomes) {
        if (m.dim() != d) throw std::invalid_argument("Instrument: mixed dimensions");
        total += povm_of(m).mat();
    }
    if (max_abs(total - Matrix::Identity(d, d)) > tolerances().completeness)
        throw std::invalid_argument("Instrument: summed map is not trace-preserving");
}

// ── Application and derived data ─────────────────────────────────────────────

Matrix apply(const CpMap& map, const Matrix& rho) {
    if (rho.rows() != map.dim() || rho.cols() != map.dim())
        throw std::invalid_argument("apply: dimension mismatch");
    if (map.has_kraus()) {
        Matrix out = Matrix::Zero(rho.rows(), rho.cols());
        for (const Matrix& k : map.kraus()) out += k * rho * k.adjoint();
        return out;
    }
    // Λ(ρ) = Tr_in[(ρ^T ⊗ 1) C]
    const int d = map.dim();
    const Matrix c = choi_of(map);
    Matrix out = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            out += rho(i, j) * c.block(i * d, j * d, d, d);
    return out;
}

Matrix apply(const CpMap& map, const DensityMatrix& rho) { return apply(map, rho.mat); }

double outcome_probability(const CpMap& map, const DensityMatrix& rho) {
    return clamp_probability(apply(map, rho).trace().real());
}

DensityMatrix post_state(const CpMap& map, const DensityMatrix& rho) {
    const Matrix out = apply(map, rho);
    const double p = out.trace().real();
    if (p <= 1e-12) throw ZeroProbabilityError();
    return DensityMatrix(hermitize(out) / p);
}

Opf povm_of(const CpMap& map) {
    const int d = map.dim();
    Matrix f = Matrix::Zero(d, d);
    if (map.has_kraus()) {
        for (const Matrix& k : map.kraus()) f += k.adjoint() * k;
    } else {
        const Matrix c = choi_of(map);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) f(j, i) = c.block(i * d, j * d, d, d).trace();
    }
    return Opf(MnElement(d, 1, hermitize(f)));
}

Instrument luders_instrument(const std::vector<Matrix>& projectors) {
    if (projectors.empty()) throw std::invalid_argument("luders_instrument: empty family");
    const auto d = projectors.front().rows();
    Matrix total = Matrix::Zero(d, d);
    for (size_t i = 0; i < projectors.size(); ++i) {
        const Matrix& q = projectors[i];
        if (!is_hermitian(q, tolerances().hermiticity) || max_abs(q * q - q) > 1e-10)
            throw std::invalid_argument("luders_instrument: not a Hermitian idempotent");
        for (size_t j = i + 1; j < projectors.size(); ++j)
            if (max_abs(q * projectors[j]) > 1e-10)
                throw std::invalid_argument("luders_instrument: projectors overlap");
        total += q;
    }
    if (max_abs(total - Matrix::Identity(d, d)) > tolerances().completeness)
        throw std::invalid_argument("luders_instrument: projectors do not sum to 1");
    std::vector<CpMap> maps;
    for (const Matrix& q : projectors) maps.push_back(CpMap::from_kraus({q}));
    return Instrument(std::move(maps));
}

Instrument compose(const Instrument& first, const Instrument& then) {
    if (first.d() != then.d()) throw std::invalid_argument("compose: dimension mismatch");
    std::vector<CpMap> maps;
    for (const CpMap& t : then.outcomes) {
        for (const CpMap& f : first.outcomes) {
            std::vector<Matrix> ks;
            for (const Matrix& kt : t.kraus())
                for (const Matrix& kf : f.kraus()) ks.push_back(kt * kf);
            maps.push_back(CpMap::from_kraus(std::move(ks)));
        }
    }
    return Instrument(std::move(maps));
}

Matrix choi_of(const CpMap& map) {
    if (!map.has_kraus()) return map.choi_;
    const int d = map.dim();
    Vector tau = Vector::Zero(static_cast<Eigen::Index>(d) * d);
    for (int i = 0; i < d; ++i) tau(i * d + i) = 1.0;
    Matrix c = Matrix::Zero(tau.size(), tau.size());
    for (const Matrix& k : map.kraus()) {
        const Vector w = kron(Matrix::Identity(d, d), k) * tau;
        c += w * w.adjoint();
    }
    return c;
}

bool cp_check(const CpMap& map) {
    return min_eigenvalue(choi_of(map)) >= -tolerances().psd_floor;
}

CpMap transpose_map(int d) {
    Matrix swap(d * d, d * d);
    swap.setZero();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
    return CpMap::from_choi(std::move(swap));
}

// ── Random generators ────────────────────────────────────────────────────────

DensityMatrix random_density(int d, Rng& rng) {
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = rng.cgaussian();
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(hermitize(rho));
}

CpMap random_cp_map(int d, int kraus_count, Rng& rng) {
    std::vector<Matrix> raw;
    Matrix total = Matrix::Zero(d, d);
    for (int k = 0; k < kraus_count; ++k) {
        Matrix g(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) g(i, j) = rng.cgaussian();
        total += g.adjoint() * g;
        raw.push_back(std::move(g));
    }
    // normalize to Σ K†K = 1
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(total));
    const Matrix inv_sqrt = es.operatorInverseSqrt();
    std::vector<Matrix> ks;
    for (const Matrix& g : raw) ks.push_back(g * inv_sqrt);
    return CpMap::from_kraus(std::move(ks));
}

Instrument random_instrument(int d, int outcomes, Rng& rng) {
    // split a trace-preserving map across outcomes
    std::vector<Matrix> raw;
    Matrix total = Matrix::Zero(d, d);
    for (int k = 0; k < outcomes * 2; ++k) {
        Matrix g(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) g(i, j) = rng.cgaussian();
        total += g.adjoint() * g;
        raw.push_back(std::move(g));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(total));
    const Matrix inv_sqrt = es.operatorInverseSqrt();
    std::vector<CpMap> maps;
    for (int o = 0; o < outcomes; ++o)
        maps.push_back(CpMap::from_kraus({raw[2 * o] * inv_sqrt, raw[2 * o + 1] * inv_sqrt}));
    return Instrument(std::move(maps));
}

}  // namespace opflab
