#include "opflab/theories.hpp"

#include <cmath>
#include <stdexcept>

namespace opflab {

Opf StarProduct::operator()(const Opf& f, const Opf& g) const {
    if (f.n() != degree || g.n() != degree)
        throw std::invalid_argument(name + " star: degree mismatch");
    return Opf(MnElement(f.d() * g.d(), degree, raw(f.mat(), f.d(), g.mat(), g.d())));
}

StarProduct quantum_star_product() {
    StarProduct s;
    s.name = "quantum";
    s.degree = 1;
    s.raw = [](const Matrix& f, int, const Matrix& g, int) { return kron(f, g); };
    return s;
}

StarProduct toy_star_product() {
    StarProduct s;
    s.name = "toy";
    s.degree = 2;
    s.raw = [](const Matrix& f, int a, const Matrix& g, int b) {
        const Matrix& pa = sym_projector(a, 2).mat;
        const Matrix& pb = sym_projector(b, 2).mat;
        const Matrix ma = Matrix::Identity(pa.rows(), pa.cols()) - pa;
        const Matrix mb = Matrix::Identity(pb.rows(), pb.cols()) - pb;
        const Complex ca = f.trace() / pa.trace();
        const Complex cb = g.trace() / pb.trace();
        const Matrix grouped = kron(f, g) + ca * cb * kron(ma, mb);
        const Op out = grouped_to_interleaved(
            Op(FactorShape::flat({a, a, b, b}), grouped), {a, b}, 2);
        return out.mat;
    };
    return s;
}

StarProduct star_product_by_name(const std::string& name) {
    if (name == "quantum") return quantum_star_product();
    if (name == "toy") return toy_star_product();
    throw std::invalid_argument("unknown star product: " + name);
}

Opf quantum_star(const Opf& f, const Opf& g) { return quantum_star_product()(f, g); }
Opf toy_star(const Opf& f, const Opf& g) { return toy_star_product()(f, g); }

// ── Random sampling ──────────────────────────────────────────────────────────

Opf random_opf(int d, int n, Rng& rng) {
    const Matrix& p = sym_projector(d, n).mat;
    const int D = static_cast<int>(p.rows());
    const Matrix u = haar_unitary(D, rng);
    Matrix diag = Matrix::Zero(D, D);
    for (int i = 0; i < D; ++i) diag(i, i) = rng.uniform();
    return Opf(MnElement(d, n, p * (u * diag * u.adjoint()) * p));
}

Measurement random_two_outcome_measurement(int d, int n, Rng& rng) {
    const Opf f = random_opf(d, n, rng);
    const Opf rest(MnElement(d, n, sym_projector(d, n).mat - f.mat()));
    return Measurement({f, rest});
}

// ── Axiom verification ───────────────────────────────────────────────────────

namespace {

double eval_raw(const Matrix& f, const Ket& psi, int n) {
    const Vector w = ket_power(psi, n);
    return (w.adjoint() * f * w).value().real();
}

Matrix nfold(const Matrix& u, int n) {
    Matrix out = Matrix::Identity(1, 1);
    for (int i = 0; i < n; ++i) out = kron(out, u);
    return out;
}

}  // namespace

bool AxiomReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return !checks.empty();
}

AxiomReport verify_star_axioms(const StarProduct& star, int a, int b, int trials, double tol,
                               std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("verify_star_axioms: trials >= 1");
    const int n = star.degree;
    AxiomReport rep{star.name, a, b, trials, seed, tol, {}};

    double dev_local = 0, dev_prob = 0, dev_mix = 0, dev_group = 0;
    const Matrix ua = sym_projector(a, n).mat;
    const Matrix ub = sym_projector(b, n).mat;
    const Matrix uab = sym_projector(a * b, n).mat;

    // operator-level probability rows, independent of trials
    dev_prob = std::max(dev_prob, max_abs(star.raw(ua, a, ub, b) - uab));
    dev_prob = std::max(dev_prob, max_abs(star.raw(ua, a, Matrix::Zero(ub.rows(), ub.cols()), b)));
    dev_prob = std::max(dev_prob, max_abs(star.raw(Matrix::Zero(ua.rows(), ua.cols()), a, ub, b)));

    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, t));
        const Opf f = random_opf(a, n, rng);
        const Opf g = random_opf(b, n, rng);
        const Ket alpha = random_ket(a, rng);
        const Ket beta = random_ket(b, rng);
        const Ket joint = random_ket(a * b, rng);

        // local structure: (f ⋆ u)(α⊗β) = f(α), and with factors exchanged
        {
            const Matrix fu = star.raw(f.mat(), a, ub, b);
            const Matrix ug = star.raw(ua, a, g.mat(), b);
            const Ket prod = Ket::normalized(kron(alpha.amplitudes, beta.amplitudes));
            dev_local = std::max(dev_local, std::abs(eval_raw(fu, prod, n) - evaluate(f, alpha)));
            dev_local = std::max(dev_local, std::abs(eval_raw(ug, prod, n) - evaluate(g, beta)));
            // factorization on product states
            const Matrix fg = star.raw(f.mat(), a, g.mat(), b);
            dev_local = std::max(dev_local, std::abs(eval_raw(fg, prod, n) -
                                                     evaluate(f, alpha) * evaluate(g, beta)));
        }

        // probability preservation on full measurements, entangled states
        {
            const Measurement ma = random_two_outcome_measurement(a, n, rng);
            const Measurement mb = random_two_outcome_measurement(b, n, rng);
            double total = 0;
            for (const Opf& fi : ma.outcomes)
                for (const Opf& gj : mb.outcomes)
                    total += eval_raw(star.raw(fi.mat(), a, gj.mat(), b), joint, n);
            dev_prob = std::max(dev_prob, std::abs(total - 1.0));
        }

        // commutes with local mixing (both orders)
        {
            const Opf f2 = random_opf(a, n, rng);
            const double p = rng.uniform();
            const Matrix mixed = star.raw(p * f.mat() + (1 - p) * f2.mat(), a, g.mat(), b);
            const Matrix sum = p * star.raw(f.mat(), a, g.mat(), b) +
                               (1 - p) * star.raw(f2.mat(), a, g.mat(), b);
            dev_mix = std::max(dev_mix, max_abs(mixed - sum));

            const Opf g2 = random_opf(b, n, rng);
            const Matrix mixed_b = star.raw(f.mat(), a, p * g.mat() + (1 - p) * g2.mat(), b);
            const Matrix sum_b = p * star.raw(f.mat(), a, g.mat(), b) +
                                 (1 - p) * star.raw(f.mat(), a, g2.mat(), b);
            dev_mix = std::max(dev_mix, max_abs(mixed_b - sum_b));
        }

        // commutes with the local group action (both orders)
        {
            const Matrix u = haar_unitary(a, rng);
            const Matrix fu = nfold(u, n).adjoint() * f.mat() * nfold(u, n);
            const Matrix lhs = star.raw(fu, a, g.mat(), b);
            const Matrix uext = nfold(kron(u, Matrix::Identity(b, b)), n);
            const Matrix rhs = uext.adjoint() * star.raw(f.mat(), a, g.mat(), b) * uext;
            dev_group = std::max(dev_group, max_abs(lhs - rhs));

            const Matrix v = haar_unitary(b, rng);
            const Matrix gv = nfold(v, n).adjoint() * g.mat() * nfold(v, n);
            const Matrix lhs_b = star.raw(f.mat(), a, gv, b);
            const Matrix vext = nfold(kron(Matrix::Identity(a, a), v), n);
            const Matrix rhs_b = vext.adjoint() * star.raw(f.mat(), a, g.mat(), b) * vext;
            dev_group = std::max(dev_group, max_abs(lhs_b - rhs_b));
        }
    }

    rep.checks = {
        {"local-structure", dev_local, tol, dev_local <= tol},
        {"probability", dev_prob, tol, dev_prob <= tol},
        {"local-mixing", dev_mix, tol, dev_mix <= tol},
        {"local-group-action", dev_group, tol, dev_group <= tol},
    };
    return rep;
}

// ── Associativity search ─────────────────────────────────────────────────────

AssocResult associativity_gap(const StarProduct& star, int a, int b, int c, int trials,
                              std::uint64_t seed) {
    const int n = star.degree;
    AssocResult best;
    best.gap = -1.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, t));
        const Opf f = random_opf(a, n, rng);
        const Opf g = random_opf(b, n, rng);
        const Opf h = random_opf(c, n, rng);
        const Ket psi = random_ket(a * b * c, rng);
        const Matrix lhs = star.raw(star.raw(f.mat(), a, g.mat(), b), a * b, h.mat(), c);
        const Matrix rhs = star.raw(f.mat(), a, star.raw(g.mat(), b, h.mat(), c), b * c);
        const double lv = eval_raw(lhs, psi, n);
        const double rv = eval_raw(rhs, psi, n);
        const double gap = std::abs(lv - rv);
        if (gap > best.gap) {
            best.gap = gap;
            best.certificate = {star.name, a,  b,  c,  seed, t, f.mat(), g.mat(), h.mat(),
                                psi.amplitudes, lv, rv, gap};
        }
    }
    return best;
}

double replay_certificate(const StarProduct& star, const AssocCertificate& cert) {
    const int n = star.degree;
    if (star.name != cert.star) throw std::invalid_argument("replay: star name mismatch");
    const Matrix lhs = star.raw(star.raw(cert.f, cert.a, cert.g, cert.b), cert.a * cert.b, cert.h, cert.c);
    const Matrix rhs = star.raw(cert.f, cert.a, star.raw(cert.g, cert.b, cert.h, cert.c), cert.b * cert.c);
    const Ket psi(cert.psi);
    return std::abs(eval_raw(lhs, psi, n) - eval_raw(rhs, psi, n));
}

// ── Contextual rule and Born sampling ────────────────────────────────────────

ContextualMeasurement::ContextualMeasurement(std::vector<Ket> b) : basis(std::move(b)) {
    if (basis.empty()) throw std::invalid_argument("ContextualMeasurement: empty basis");
    const int d = basis.front().dim;
    if (static_cast<int>(basis.size()) != d)
        throw std::invalid_argument("ContextualMeasurement: need d basis vectors");
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < basis.size(); ++j) {
            const Complex ip = (basis[i].amplitudes.adjoint() * basis[j].amplitudes).value();
            const double target = i == j ? 1.0 : 0.0;
            if (std::abs(ip - target) > tolerances().hermiticity)
                throw std::invalid_argument("ContextualMeasurement: basis not orthonormal");
        }
}

Eigen::VectorXd contextual_probabilities(const ContextualMeasurement& m, const Ket& psi) {
    if (psi.dim != m.d()) throw std::invalid_argument("contextual_probabilities: dimension mismatch");
    Eigen::VectorXd p(m.d());
    for (int i = 0; i < m.d(); ++i) {
        const Complex ip = (m.basis[i].amplitudes.adjoint() * psi.amplitudes).value();
        const double a2 = std::norm(ip);
        p(i) = a2 * a2;
    }
    const double z = p.sum();
    return p / z;
}

BornSample born_measure(const Measurement& povm, const Ket& psi, std::uint64_t seed) {
    if (povm.n() != 1) throw std::invalid_argument("born_measure: n=1 measurements only");
    Eigen::VectorXd p(static_cast<Eigen::Index>(povm.outcomes.size()));
    for (size_t i = 0; i < povm.outcomes.size(); ++i)
        p(static_cast<Eigen::Index>(i)) = evaluate(povm.outcomes[i], psi);
    Rng rng(seed);
    const double u = rng.uniform();
    double acc = 0;
    int outcome = static_cast<int>(povm.outcomes.size()) - 1;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        acc += p(i);
        if (u < acc) {
            outcome = static_cast<int>(i);
            break;
        }
    }
    return {std::move(p), outcome};
}

}  // namespace opflab
