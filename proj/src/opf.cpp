#include "opflab/opf.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace opflab {

MnElement::MnElement(int d_, int n_, Matrix m) : d(d_), n(n_), mat(std::move(m)) {
    const Matrix& p = sym_projector(d, n).mat;
    if (mat.rows() != p.rows())
        throw std::invalid_argument("MnElement: matrix dimension is not d^n");
    if (max_abs(p * mat * p - mat) > tolerances().support)
        throw std::invalid_argument("MnElement: support leaves the symmetric subspace");
}

Opf::Opf(MnElement e) : element(std::move(e)) {
    const Matrix& p = sym_projector(element.d, element.n).mat;
    if (!operator_interval_check(element.mat, p, tolerances().psd_floor))
        throw std::invalid_argument("Opf: operator outside [0, P_+]");
}

Opf unit_opf(int d, int n) { return Opf(MnElement(d, n, sym_projector(d, n).mat)); }

Opf zero_opf(int d, int n) {
    const auto D = sym_projector(d, n).mat.rows();
    return Opf(MnElement(d, n, Matrix::Zero(D, D)));
}

Measurement::Measurement(std::vector<Opf> fs) : outcomes(std::move(fs)) {
    if (outcomes.empty()) throw std::invalid_argument("Measurement: no outcomes");
    const int d0 = outcomes.front().d(), n0 = outcomes.front().n();
    Matrix sum = Matrix::Zero(outcomes.front().mat().rows(), outcomes.front().mat().cols());
    for (const Opf& f : outcomes) {
        if (f.d() != d0 || f.n() != n0) throw std::invalid_argument("Measurement: mixed shapes");
        sum += f.mat();
    }
    if (max_abs(sum - sym_projector(d0, n0).mat) > tolerances().completeness)
        throw std::invalid_argument("Measurement: outcomes do not sum to the unit OPF");
}

Ensemble::Ensemble(std::vector<std::pair<Ket, double>> m) : members(std::move(m)) {
    if (members.empty()) throw std::invalid_argument("Ensemble: empty");
    const int d0 = members.front().first.dim;
    double total = 0.0;
    for (const auto& [k, p] : members) {
        if (k.dim != d0) throw std::invalid_argument("Ensemble: mixed dimensions");
        if (p < 0) throw std::invalid_argument("Ensemble: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > tolerances().equality)
        throw std::invalid_argument("Ensemble: probabilities do not sum to 1");
}

Ensemble Ensemble::pure(Ket psi) { return Ensemble({{std::move(psi), 1.0}}); }

Ensemble Ensemble::uniform(std::vector<Ket> kets) {
    const double p = 1.0 / static_cast<double>(kets.size());
    std::vector<std::pair<Ket, double>> m;
    m.reserve(kets.size());
    for (auto& k : kets) m.emplace_back(std::move(k), p);
    return Ensemble(std::move(m));
}

MomentState::MomentState(int d_, int n_, Matrix w) : d(d_), n(n_), omega(std::move(w)) {
    if (!is_hermitian(omega, tolerances().hermiticity))
        throw std::invalid_argument("MomentState: not Hermitian");
    if (min_eigenvalue(omega) < -tolerances().psd_floor)
        throw std::invalid_argument("MomentState: not PSD");
    if (std::abs(omega.trace().real() - 1.0) > 1e-10)
        throw std::invalid_argument("MomentState: trace is not 1");
    const Matrix& p = sym_projector(d, n).mat;
    if (max_abs(p * omega * p - omega) > tolerances().support)
        throw std::invalid_argument("MomentState: support leaves the symmetric subspace");
}

double clamp_probability(double x) {
    const double t = tolerances().prob_clamp;
    if (x < -t || x > 1.0 + t)
        throw std::logic_error("probability outside [0,1] beyond clamp tolerance");
    return std::min(1.0, std::max(0.0, x));
}

double evaluate(const Opf& f, const Ket& psi) {
    if (psi.dim != f.d()) throw std::invalid_argument("evaluate: dimension mismatch");
    const Vector w = ket_power(psi, f.n());
    return clamp_probability((w.adjoint() * f.mat() * w).value().real());
}

double evaluate_ensemble(const Opf& f, const Ensemble& e) {
    if (e.d() != f.d()) throw std::invalid_argument("evaluate_ensemble: dimension mismatch");
    double acc = 0.0;
    for (const auto& [k, p] : e.members) {
        const Vector w = ket_power(k, f.n());
        acc += p * (w.adjoint() * f.mat() * w).value().real();
    }
    return clamp_probability(acc);
}

Opf mix(const std::vector<Opf>& fs, const std::vector<double>& ps) {
    if (fs.empty() || fs.size() != ps.size())
        throw std::invalid_argument("mix: need equal numbers of OPFs and weights");
    double total = 0.0;
    for (double p : ps) {
        if (p < 0) throw std::invalid_argument("mix: negative weight");
        total += p;
    }
    if (std::abs(total - 1.0) > tolerances().equality)
        throw std::invalid_argument("mix: weights do not sum to 1");
    const int d0 = fs.front().d(), n0 = fs.front().n();
    Matrix acc = Matrix::Zero(fs.front().mat().rows(), fs.front().mat().cols());
    for (size_t i = 0; i < fs.size(); ++i) {
        if (fs[i].d() != d0 || fs[i].n() != n0) throw std::invalid_argument("mix: shape mismatch");
        acc += ps[i] * fs[i].mat();
    }
    return Opf(MnElement(d0, n0, std::move(acc)));
}

Opf pullback_unitary(const Opf& f, const Matrix& u) {
    if (u.rows() != f.d() || u.cols() != f.d())
        throw std::invalid_argument("pullback_unitary: dimension mismatch");
    if (max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) > tolerances().hermiticity)
        throw std::invalid_argument("pullback_unitary: input is not unitary");
    Matrix un = Matrix::Identity(1, 1);
    for (int i = 0; i < f.n(); ++i) un = kron(un, u);
    return Opf(MnElement(f.d(), f.n(), un.adjoint() * f.mat() * un));
}

MomentState moment_state(const Ensemble& e, int n) {
    const int d = e.d();
    long long D = 1;
    for (int i = 0; i < n; ++i) D *= d;
    Matrix w = Matrix::Zero(D, D);
    for (const auto& [k, p] : e.members) {
        const Vector v = ket_power(k, n);
        w += p * (v * v.adjoint());
    }
    return MomentState(d, n, std::move(w));
}

GapResult distinguishability_gap(const Ensemble& e1, const Ensemble& e2, int n) {
    if (e1.d() != e2.d()) throw std::invalid_argument("distinguishability_gap: dimension mismatch");
    const int d = e1.d();
    const Matrix delta = moment_state(e1, n).omega - moment_state(e2, n).omega;
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(delta));
    GapResult out;
    out.gap = es.eigenvalues().cwiseAbs().sum();
    if (out.gap <= 1e-9) return out;

    Matrix pos = Matrix::Zero(delta.rows(), delta.cols());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 1e-9)
            pos += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();

    const Matrix& p = sym_projector(d, n).mat;
    double eps = 1.0;
    Matrix f = pos;
    while (eps > 1e-6 && !operator_interval_check(p * f * p, p, tolerances().psd_floor)) {
        eps /= 2.0;
        f = eps * pos;
    }
    out.witness = Opf(MnElement(d, n, p * f * p));
    return out;
}

Opf restrict_with_ancilla(const Opf& g, const Ket& beta) {
    const int db = g.d();
    const int b = beta.dim;
    if (b < 1 || db % b != 0)
        throw std::invalid_argument("restrict_with_ancilla: dimension does not factor");
    const int d = db / b;
    const int n = g.n();
    const Op interleaved(FactorShape({d, b}, n), g.mat());
    const Op grouped = interleaved_to_grouped(interleaved, {d, b}, n);
    long long dn = 1;
    for (int i = 0; i < n; ++i) dn *= d;
    const Vector bn = ket_power(beta, n);
    Matrix bcol(bn.size(), 1);
    bcol.col(0) = bn;
    const Matrix v = kron(Matrix::Identity(dn, dn), bcol);  // isometry α ↦ α ⊗ β^{⊗n}
    return Opf(MnElement(d, n, v.adjoint() * grouped.mat * v));
}

}  // namespace opflab
