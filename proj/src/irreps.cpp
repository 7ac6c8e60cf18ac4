#include "opflab/irreps.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "opflab/symgroup.hpp"

namespace opflab {

MnElement generator_Njn(int j, int n, int d) {
    if (j < 0 || j > n) throw std::invalid_argument("generator_Njn: need 0 <= j <= n");
    if (d < 2) throw std::invalid_argument("generator_Njn: need d >= 2");
    Matrix e01 = Matrix::Zero(d, d);
    e01(0, 1) = 1.0;
    Matrix core = Matrix::Identity(1, 1);
    for (int i = 0; i < n; ++i) core = kron(core, i < j ? e01 : Matrix::Identity(d, d));
    const Matrix& p = sym_projector(d, n).mat;
    return MnElement(d, n, p * core * p);
}

// ── Orbit spans ──────────────────────────────────────────────────────────────

namespace {

Vector vectorize(const Matrix& m) {
    Vector v(m.size());
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) v(k++) = m(i, j);
    return v;
}

Matrix devectorize(const Vector& v, Eigen::Index rows) {
    Matrix m(rows, v.size() / rows);
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = v(k++);
    return m;
}

// Orthonormal basis of the column span, singular values below
// rank_cut * largest discarded.
std::vector<Vector> column_span_basis(const Matrix& cols) {
    Eigen::BDCSVD<Matrix> svd(cols, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    std::vector<Vector> basis;
    if (sv.size() == 0 || sv(0) <= 0) return basis;
    const double cut = tolerances().rank_cut * sv(0);
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) basis.push_back(svd.matrixU().col(i));
    return basis;
}

}  // namespace

IrrepBlock orbit_span(const MnElement& m, int sample_cap, std::uint64_t seed) {
    if (hs_norm(m.mat) < 1e-14) throw std::invalid_argument("orbit_span: zero generator");
    const int d = m.d, n = m.n;
    const Eigen::Index D = m.mat.rows();
    Rng rng(seed);

    std::vector<Vector> cols;
    cols.push_back(vectorize(m.mat));
    int rank = 0, stable_batches = 0;
    constexpr int kBatch = 8;
    while (static_cast<int>(cols.size()) < sample_cap) {
        for (int s = 0; s < kBatch; ++s) {
            const Matrix u = haar_unitary(d, rng);
            Matrix un = Matrix::Identity(1, 1);
            for (int i = 0; i < n; ++i) un = kron(un, u);
            cols.push_back(vectorize(un * m.mat * un.adjoint()));
        }
        Matrix stacked(D * D, static_cast<Eigen::Index>(cols.size()));
        for (size_t i = 0; i < cols.size(); ++i) stacked.col(static_cast<Eigen::Index>(i)) = cols[i];
        const int new_rank = numerical_rank(stacked);
        if (new_rank == rank) {
            if (++stable_batches >= 3) {
                IrrepBlock block{/*j determined by caller*/ -1, d, n, {}};
                for (const Vector& v : column_span_basis(stacked)) block.basis.push_back(devectorize(v, D));
                return block;
            }
        } else {
            rank = new_rank;
            stable_batches = 0;
        }
    }
    throw std::runtime_error("orbit_span: rank did not stabilize within the sample cap");
}

// ── Dimension formulas ───────────────────────────────────────────────────────

long long dim_Mn(int d, int n) {
    if (d < 2 || n < 0) throw std::invalid_argument("dim_Mn: need d >= 2, n >= 0");
    const long long b = binomial(d + n - 1, n);
    return b * b;
}

long long dim_Nn(int d, int n) {
    if (d < 2 || n < 0) throw std::invalid_argument("dim_Nn: need d >= 2, n >= 0");
    const long long b = binomial(d + n - 2, n);
    const long long v = b * b * (2 * n + d - 1);
    if (v % (d - 1) != 0) throw std::logic_error("dim_Nn: formula not integral");
    return v / (d - 1);
}

std::vector<IrrepBlock> decompose_Mn(int d, int n, std::uint64_t seed) {
    if (dim_Mn(d, n) > 4096)
        throw std::invalid_argument("decompose_Mn: dimension beyond desk budget");
    std::vector<IrrepBlock> blocks;
    for (int j = 0; j <= n; ++j) {
        const long long expect = dim_Nn(d, j);
        const int cap = static_cast<int>(expect) + 64;
        IrrepBlock block = orbit_span(generator_Njn(j, n, d), cap, mix_seed(seed, j));
        block.j = j;
        if (block.dim() != expect)
            throw std::runtime_error("decompose_Mn: block " + std::to_string(j) + " has rank " +
                                     std::to_string(block.dim()) + ", expected " +
                                     std::to_string(expect));
        blocks.push_back(std::move(block));
    }
    return blocks;
}

// ── Casimir maps ─────────────────────────────────────────────────────────────

std::vector<Matrix> su_generators(int d) {
    std::vector<Matrix> gens;
    const double s = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            Matrix sym = Matrix::Zero(d, d), asym = Matrix::Zero(d, d);
            sym(j, k) = sym(k, j) = s;
            asym(j, k) = Complex(0, -s);
            asym(k, j) = Complex(0, s);
            gens.push_back(sym);
            gens.push_back(asym);
        }
    }
    for (int l = 1; l < d; ++l) {
        Matrix diag = Matrix::Zero(d, d);
        for (int i = 0; i < l; ++i) diag(i, i) = 1.0;
        diag(l, l) = -l;
        gens.push_back(diag / std::sqrt(static_cast<double>(l) * (l + 1)));
    }
    return gens;
}

Matrix CasimirMap::apply(const Matrix& m) const {
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (const Matrix& dt : deltas_) {
        const Matrix c = dt * m - m * dt;
        out += dt * c - c * dt;
    }
    return out;
}

CasimirMap casimir_on_slot(const std::vector<int>& subsys_dims, int n, int slot) {
    const int k = static_cast<int>(subsys_dims.size());
    if (slot < 0 || slot >= k) throw std::invalid_argument("casimir_on_slot: bad slot");
    const int d = subsys_dims[slot];
    long long D = 1;
    for (int c = 0; c < n; ++c)
        for (int s = 0; s < k; ++s) D *= subsys_dims[s];
    std::vector<Matrix> deltas;
    for (const Matrix& t : su_generators(d)) {
        Matrix delta = Matrix::Zero(D, D);
        for (int c = 0; c < n; ++c) {
            Matrix term = Matrix::Identity(1, 1);
            for (int cc = 0; cc < n; ++cc)
                for (int s = 0; s < k; ++s)
                    term = kron(term, (cc == c && s == slot)
                                          ? t
                                          : Matrix::Identity(subsys_dims[s], subsys_dims[s]));
            delta += term;
        }
        deltas.push_back(std::move(delta));
    }
    return CasimirMap(std::move(deltas));
}

CasimirMap casimir_map(int d, int n) { return casimir_on_slot({d}, n, 0); }

namespace {

std::vector<SpectrumLine> group_spectrum(std::vector<double> vals) {
    std::sort(vals.begin(), vals.end());
    std::vector<SpectrumLine> out;
    for (double v : vals) {
        if (!out.empty() &&
            std::abs(v - out.back().value) <= tolerances().casimir_rel * std::max(1.0, std::abs(v))) {
            ++out.back().multiplicity;
        } else {
            out.push_back({v, 1});
        }
    }
    return out;
}

bool spectrum_contains(const std::vector<double>& vals, double target) {
    for (double v : vals)
        if (std::abs(v - target) <= tolerances().casimir_rel * std::max(1.0, std::abs(target)))
            return true;
    return false;
}

}  // namespace

CasimirSpectrum casimir_calibrate(int d, int n, std::uint64_t seed) {
    const CasimirMap cas = casimir_map(d, n);
    CasimirSpectrum out;
    std::vector<double> all;
    for (const IrrepBlock& block : decompose_Mn(d, n, seed)) {
        // C₂ is scalar on each block; read it off one basis element.
        const Matrix img = cas.apply(block.basis.front());
        const double value = hs_inner(block.basis.front(), img).real();
        out.calibration[block.j] = value;
        for (int i = 0; i < block.dim(); ++i) all.push_back(value);
    }
    out.eigenvalues = group_spectrum(std::move(all));
    // calibration must separate the labels
    for (auto it = out.calibration.begin(); it != out.calibration.end(); ++it)
        for (auto jt = std::next(it); jt != out.calibration.end(); ++jt)
            if (std::abs(it->second - jt->second) <=
                tolerances().casimir_rel * std::max(1.0, std::abs(jt->second)))
                throw std::runtime_error("casimir_calibrate: labels not separated");
    return out;
}

std::vector<double> omega_support_check(const Ket& psi, const std::vector<IrrepBlock>& blocks) {
    if (blocks.empty()) return {};
    const int n = blocks.front().n;
    const Vector w = ket_power(psi, n);
    const Matrix omega = w * w.adjoint();
    std::vector<double> norms;
    for (const IrrepBlock& block : blocks) {
        double acc = 0;
        for (const Matrix& b : block.basis) acc += std::norm(hs_inner(b, omega));
        norms.push_back(std::sqrt(acc));
    }
    return norms;
}

SpanSpectrum casimir_spectrum_on_span(const std::vector<Matrix>& span, const CasimirMap& cas) {
    SpanSpectrum out;
    if (span.empty()) return out;
    const Eigen::Index D = span.front().rows();
    Matrix stacked(D * D, static_cast<Eigen::Index>(span.size()));
    for (size_t i = 0; i < span.size(); ++i) stacked.col(static_cast<Eigen::Index>(i)) = vectorize(span[i]);
    std::vector<Vector> basis = column_span_basis(stacked);
    out.rank = static_cast<int>(basis.size());
    if (out.rank == 0) return out;

    Matrix h(out.rank, out.rank);
    for (int q = 0; q < out.rank; ++q) {
        const Matrix img = cas.apply(devectorize(basis[q], D));
        const Vector iv = vectorize(img);
        Vector proj = Vector::Zero(iv.size());
        for (int p = 0; p < out.rank; ++p) {
            h(p, q) = basis[p].dot(iv);
            proj += h(p, q) * basis[p];
        }
        out.residual = std::max(out.residual, (iv - proj).norm());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(h), Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        out.eigenvalues.push_back(es.eigenvalues()(i));
    return out;
}

// ── Probes ───────────────────────────────────────────────────────────────────

bool ProbeReport::all_pass() const {
    for (const auto& a : assertions)
        if (!a.pass) return false;
    return !assertions.empty();
}

namespace {

// |s_i⟩⟨s_j| over an orthonormal basis of the symmetric subspace: a basis of
// M_n^d.
std::vector<Matrix> mn_basis(int d, int n) {
    const Matrix& p = sym_projector(d, n).mat;
    Eigen::SelfAdjointEigenSolver<Matrix> es(p);
    std::vector<Vector> sym;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 0.5) sym.push_back(es.eigenvectors().col(i));
    std::vector<Matrix> basis;
    for (const Vector& a : sym)
        for (const Vector& b : sym) basis.push_back(a * b.adjoint());
    return basis;
}

}  // namespace

ProbeReport licit_probe(const StarProduct& star, std::uint64_t seed) {
    constexpr int a = 2, b = 4, n = 2;
    if (star.degree != n) throw std::invalid_argument("licit_probe: degree-2 star required");
    ProbeReport rep;
    rep.kind = "licit";
    rep.dims = {{"a", a}, {"b", b}, {"n", n}};
    rep.seed = seed;

    const Matrix q = q_lambda({1, 1}, a, b, n).mat;
    const Matrix& ua = sym_projector(a, n).mat;
    std::vector<Matrix> projected, control;
    for (const Matrix& g : mn_basis(b, n)) {
        const Matrix s = star.raw(ua, a, g, b);
        control.push_back(s);
        projected.push_back(q * s * q);
    }

    const CasimirMap cas_b = casimir_on_slot({a, b}, n, 1);
    const SpanSpectrum spec_p = casimir_spectrum_on_span(projected, cas_b);
    const SpanSpectrum spec_c = casimir_spectrum_on_span(control, cas_b);
    rep.span_rank = spec_p.rank;
    rep.control_rank = spec_c.rank;
    rep.span_spectrum = group_spectrum(spec_p.eigenvalues);
    rep.control_spectrum = group_spectrum(spec_c.eigenvalues);
    rep.calibration = casimir_calibrate(b, n, mix_seed(seed, 1)).calibration;

    const double j2 = rep.calibration.at(n);
    const bool absent = !spectrum_contains(spec_p.eigenvalues, j2);
    const bool present = spectrum_contains(spec_c.eigenvalues, j2);
    const double closure = std::max(spec_p.residual, spec_c.residual);
    const Matrix q1 = q_lambda({1}, a, b, 1).mat;
    const double n1_dev = max_abs(q1 - Matrix::Identity(q1.rows(), q1.cols()));

    rep.assertions = {
        {"q-block-rank", numerical_rank(q) == 6, static_cast<double>(numerical_rank(q)),
         "rank of Q_(1,1) at (2,4), n=2"},
        {"j2-absent-in-projected-span", absent, j2, "calibrated j=2 value must not appear"},
        {"j2-present-in-control-span", present, j2, "unprojected span must detect the value"},
        {"span-closure", closure < 1e-8, closure, "Casimir map stays inside both spans"},
        {"n1-block-is-identity", n1_dev < 1e-12, n1_dev,
         "single lambda at n=1, so nothing can be excluded"},
    };
    return rep;
}

ProbeReport tripartite_probe(const StarProduct& star, std::uint64_t seed) {
    constexpr int a = 2, c = 2, e = 2, n = 2;
    if (star.degree != n) throw std::invalid_argument("tripartite_probe: degree-2 star required");
    ProbeReport rep;
    rep.kind = "tripartite";
    rep.dims = {{"a", a}, {"c", c}, {"e", e}, {"n", n}};
    rep.seed = seed;

    const Matrix q_sym_first = q_lambda_mu_nu({2}, {1, 1}, {1, 1}, a, c, e, n).mat;
    const Matrix q_sym_mid = q_lambda_mu_nu({1, 1}, {2}, {1, 1}, a, c, e, n).mat;
    const Matrix& u2 = sym_projector(2, n).mat;
    const Matrix& u4 = sym_projector(4, n).mat;

    // presence side: Q_{(2),(1,1),(1,1)} [F ⋆ u_CE] Q over a basis of M_2^a
    std::vector<Matrix> present_span;
    // absence side: Q_{(1,1),(2),(1,1)} [u_A ⋆ (F_c ⋆ u_E)] Q over a basis of M_2^c
    std::vector<Matrix> absent_span;
    for (const Matrix& f : mn_basis(2, n)) {
        present_span.push_back(q_sym_first * star.raw(f, a, u4, c * e) * q_sym_first);
        const Matrix inner = star.raw(f, c, u2, e);
        absent_span.push_back(q_sym_mid * star.raw(u2, a, inner, c * e) * q_sym_mid);
    }

    const CasimirMap cas_a = casimir_on_slot({a, c, e}, n, 0);
    const CasimirMap cas_c = casimir_on_slot({a, c, e}, n, 1);
    const SpanSpectrum spec_present = casimir_spectrum_on_span(present_span, cas_a);
    const SpanSpectrum spec_absent = casimir_spectrum_on_span(absent_span, cas_c);
    rep.span_rank = spec_absent.rank;
    rep.control_rank = spec_present.rank;
    rep.span_spectrum = group_spectrum(spec_absent.eigenvalues);
    rep.control_spectrum = group_spectrum(spec_present.eigenvalues);
    rep.calibration = casimir_calibrate(2, n, mix_seed(seed, 1)).calibration;

    const double j2 = rep.calibration.at(n);
    const int rank_q = numerical_rank(q_sym_mid);
    const bool present = spectrum_contains(spec_present.eigenvalues, j2);
    const bool absent = !spectrum_contains(spec_absent.eigenvalues, j2);
    const double closure = std::max(spec_present.residual, spec_absent.residual);

    rep.assertions = {
        {"q-projector-nonzero", rank_q > 0, static_cast<double>(rank_q),
         "Q_{(1,1),(2),(1,1)} does not vanish"},
        {"a-side-j2-present", present, j2,
         "permuted-role span is a faithful copy of M_2^a"},
        {"c-side-j2-absent", absent, j2,
         "the same value cannot be reached through the middle slot"},
        {"span-closure", closure < 1e-8, closure, "Casimir map stays inside both spans"},
    };
    return rep;
}

}  // namespace opflab
