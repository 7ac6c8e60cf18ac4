#include "opflab/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace opflab {

// ── Ket ──────────────────────────────────────────────────────────────────────

Ket::Ket(Vector amps) : dim(static_cast<int>(amps.size())), amplitudes(std::move(amps)) {
    if (dim < 1) throw std::invalid_argument("Ket: empty amplitude vector");
    const double n = amplitudes.norm();
    if (std::abs(n - 1.0) > tolerances().equality)
        throw std::invalid_argument("Ket: norm deviates from 1 by " + std::to_string(std::abs(n - 1.0)));
}

Ket Ket::basis_state(int d, int index) {
    if (index < 0 || index >= d) throw std::invalid_argument("Ket::basis_state: index out of range");
    Vector v = Vector::Zero(d);
    v(index) = 1.0;
    return Ket(std::move(v));
}

Ket Ket::normalized(Vector amps) {
    const double n = amps.norm();
    if (n == 0.0) throw std::invalid_argument("Ket::normalized: zero vector");
    return Ket(amps / n);
}

// ── FactorShape ──────────────────────────────────────────────────────────────

FactorShape::FactorShape(std::vector<int> dims, int n) : factor_dims(std::move(dims)), copies(n) {
    if (copies < 0) throw std::invalid_argument("FactorShape: negative copies");
    for (int d : factor_dims)
        if (d < 1) throw std::invalid_argument("FactorShape: factor dims must be positive");
}

FactorShape FactorShape::single(int d) { return FactorShape({d}, 1); }
FactorShape FactorShape::power(int d, int n) { return FactorShape({d}, n); }
FactorShape FactorShape::flat(std::vector<int> dims) { return FactorShape(std::move(dims), 1); }

std::vector<int> FactorShape::flat_dims() const {
    std::vector<int> out;
    out.reserve(factor_dims.size() * copies);
    for (int c = 0; c < copies; ++c)
        out.insert(out.end(), factor_dims.begin(), factor_dims.end());
    return out;
}

long long FactorShape::copy_dim() const {
    long long p = 1;
    for (int d : factor_dims) p *= d;
    return p;
}

long long FactorShape::total_dim() const {
    long long p = 1;
    for (int c = 0; c < copies; ++c) p *= copy_dim();
    return p;
}

// ── Op ───────────────────────────────────────────────────────────────────────

Op::Op(FactorShape s, Matrix m) : shape(std::move(s)), mat(std::move(m)) {
    if (mat.rows() != mat.cols()) throw std::invalid_argument("Op: matrix not square");
    if (mat.rows() != shape.total_dim())
        throw std::invalid_argument("Op: matrix dimension inconsistent with shape");
}

// ── Permutation ──────────────────────────────────────────────────────────────

Permutation::Permutation(std::vector<int> imgs) : images(std::move(imgs)) {
    std::vector<bool> seen(images.size(), false);
    for (int v : images) {
        if (v < 0 || v >= static_cast<int>(images.size()) || seen[v])
            throw std::invalid_argument("Permutation: images not a bijection");
        seen[v] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img));
}

Permutation Permutation::compose(const Permutation& inner) const {
    if (size() != inner.size()) throw std::invalid_argument("Permutation::compose: size mismatch");
    std::vector<int> img(images.size());
    for (int i = 0; i < size(); ++i) img[i] = images[inner.images[i]];
    return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
    std::vector<int> img(images.size());
    for (int i = 0; i < size(); ++i) img[images[i]] = i;
    return Permutation(std::move(img));
}

// ── Flat index helpers ───────────────────────────────────────────────────────

namespace {

void unflatten(long long idx, const std::vector<int>& dims, std::vector<int>& digits) {
    digits.resize(dims.size());
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        digits[k] = static_cast<int>(idx % dims[k]);
        idx /= dims[k];
    }
}

long long flatten(const std::vector<int>& digits, const std::vector<int>& dims) {
    long long idx = 0;
    for (size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
    return idx;
}

// Index map of the basis permutation: target factor slot t takes source
// factor perm[t].
std::vector<long long> factor_perm_index_map(const std::vector<int>& src_dims,
                                             const std::vector<int>& perm) {
    const size_t k = src_dims.size();
    if (perm.size() != k) throw std::invalid_argument("reorder: permutation size mismatch");
    std::vector<int> tgt_dims(k);
    for (size_t t = 0; t < k; ++t) tgt_dims[t] = src_dims[perm[t]];
    long long D = 1;
    for (int d : src_dims) D *= d;
    std::vector<long long> map(D);
    std::vector<int> sdig, tdig(k);
    for (long long i = 0; i < D; ++i) {
        unflatten(i, src_dims, sdig);
        for (size_t t = 0; t < k; ++t) tdig[t] = sdig[perm[t]];
        map[i] = flatten(tdig, tgt_dims);
    }
    return map;
}

}  // namespace

// ── kron ─────────────────────────────────────────────────────────────────────

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Op kron(const Op& a, const Op& b) {
    std::vector<int> dims = a.shape.flat_dims();
    const std::vector<int> bd = b.shape.flat_dims();
    dims.insert(dims.end(), bd.begin(), bd.end());
    return Op(FactorShape::flat(std::move(dims)), kron(a.mat, b.mat));
}

Vector ket_power(const Ket& psi, int n) {
    Vector v = psi.amplitudes;
    for (int i = 1; i < n; ++i) v = kron(v, psi.amplitudes);
    return v;
}

// ── Permutation operators and projectors ─────────────────────────────────────

Op perm_operator(const Permutation& pi, int d, int n) {
    if (pi.size() != n) throw std::invalid_argument("perm_operator: permutation acts on n factors");
    const Permutation inv = pi.inverse();
    long long D = 1;
    for (int i = 0; i < n; ++i) D *= d;
    Matrix P = Matrix::Zero(D, D);
    const std::vector<int> dims(n, d);
    std::vector<int> sdig, tdig(n);
    for (long long i = 0; i < D; ++i) {
        unflatten(i, dims, sdig);
        for (int t = 0; t < n; ++t) tdig[t] = sdig[inv.images[t]];
        P(flatten(tdig, dims), i) = 1.0;
    }
    return Op(FactorShape::power(d, n), std::move(P));
}

namespace {
std::map<std::pair<int, int>, Matrix> g_sym_cache;
std::mutex g_sym_mutex;
}

Op sym_projector(int d, int n) {
    if (d < 1 || n < 1) throw std::invalid_argument("sym_projector: d, n must be positive");
    {
        std::lock_guard<std::mutex> lk(g_sym_mutex);
        auto it = g_sym_cache.find({d, n});
        if (it != g_sym_cache.end()) return Op(FactorShape::power(d, n), it->second);
    }
    long long D = 1;
    for (int i = 0; i < n; ++i) D *= d;
    Matrix acc = Matrix::Zero(D, D);
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    long long count = 0;
    do {
        acc += perm_operator(Permutation(img), d, n).mat;
        ++count;
    } while (std::next_permutation(img.begin(), img.end()));
    acc /= static_cast<double>(count);
    {
        std::lock_guard<std::mutex> lk(g_sym_mutex);
        g_sym_cache.insert({{d, n}, acc});
    }
    return Op(FactorShape::power(d, n), std::move(acc));
}

Op antisym_projector(int d, int n) {
    if (n != 2) throw std::invalid_argument("antisym_projector: only defined for n = 2");
    Op p = sym_projector(d, 2);
    return Op(p.shape, Matrix::Identity(p.mat.rows(), p.mat.cols()) - p.mat);
}

// ── partial_trace ────────────────────────────────────────────────────────────

Op partial_trace(const Op& m, int copy_index) {
    const int n = m.shape.copies;
    if (n < 1) throw std::invalid_argument("partial_trace: no copies to trace");
    if (copy_index < 0 || copy_index >= n) throw std::invalid_argument("partial_trace: bad copy index");
    const long long B = m.shape.copy_dim();
    long long Dout = 1;
    for (int i = 0; i < n - 1; ++i) Dout *= B;
    long long lo = 1;  // block size of copies after copy_index
    for (int i = copy_index + 1; i < n; ++i) lo *= B;
    Matrix out = Matrix::Zero(Dout, Dout);
    for (long long u = 0; u < Dout; ++u) {
        const long long uh = u / lo, ul = u % lo;
        for (long long v = 0; v < Dout; ++v) {
            const long long vh = v / lo, vl = v % lo;
            Complex s = 0.0;
            for (long long t = 0; t < B; ++t)
                s += m.mat((uh * B + t) * lo + ul, (vh * B + t) * lo + vl);
            out(u, v) = s;
        }
    }
    return Op(FactorShape(m.shape.factor_dims, n - 1), std::move(out));
}

// ── Reordering ───────────────────────────────────────────────────────────────

Op reorder_factors(const Op& m, const std::vector<int>& perm) {
    const std::vector<int> src = m.shape.flat_dims();
    const auto map = factor_perm_index_map(src, perm);
    Matrix out(m.mat.rows(), m.mat.cols());
    for (Eigen::Index i = 0; i < m.mat.rows(); ++i)
        for (Eigen::Index j = 0; j < m.mat.cols(); ++j)
            out(map[i], map[j]) = m.mat(i, j);
    std::vector<int> tgt(src.size());
    for (size_t t = 0; t < src.size(); ++t) tgt[t] = src[perm[t]];
    return Op(FactorShape::flat(std::move(tgt)), std::move(out));
}

Op factor_reorder(const Op& m, const FactorShape& from, const FactorShape& to) {
    const std::vector<int> src = from.flat_dims();
    const std::vector<int> dst = to.flat_dims();
    if (m.shape.flat_dims() != src)
        throw std::invalid_argument("factor_reorder: operator does not carry the from-shape");
    {
        std::vector<int> a = src, b = dst;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) throw std::invalid_argument("factor_reorder: incompatible shapes");
    }
    // Match equal dims by occurrence order.
    std::vector<int> perm(dst.size());
    std::vector<bool> used(src.size(), false);
    for (size_t t = 0; t < dst.size(); ++t) {
        size_t s = 0;
        while (used[s] || src[s] != dst[t]) ++s;
        used[s] = true;
        perm[t] = static_cast<int>(s);
    }
    Op out = reorder_factors(m, perm);
    return Op(to, std::move(out.mat));
}

std::vector<int> interleaved_to_grouped_perm(int n_subsys, int n_copies) {
    std::vector<int> perm(n_subsys * n_copies);
    for (int s = 0; s < n_subsys; ++s)
        for (int c = 0; c < n_copies; ++c)
            perm[s * n_copies + c] = c * n_subsys + s;
    return perm;
}

std::vector<int> grouped_to_interleaved_perm(int n_subsys, int n_copies) {
    std::vector<int> perm(n_subsys * n_copies);
    for (int c = 0; c < n_copies; ++c)
        for (int s = 0; s < n_subsys; ++s)
            perm[c * n_subsys + s] = s * n_copies + c;
    return perm;
}

Op interleaved_to_grouped(const Op& m, const std::vector<int>& subsys_dims, int n) {
    const int k = static_cast<int>(subsys_dims.size());
    if (m.shape.flat_dims() != FactorShape(subsys_dims, n).flat_dims())
        throw std::invalid_argument("interleaved_to_grouped: layout mismatch");
    return reorder_factors(m, interleaved_to_grouped_perm(k, n));
}

Op grouped_to_interleaved(const Op& m, const std::vector<int>& subsys_dims, int n) {
    const int k = static_cast<int>(subsys_dims.size());
    std::vector<int> grouped;
    for (int s = 0; s < k; ++s) grouped.insert(grouped.end(), n, subsys_dims[s]);
    if (m.shape.flat_dims() != grouped)
        throw std::invalid_argument("grouped_to_interleaved: layout mismatch");
    Op out = reorder_factors(m, grouped_to_interleaved_perm(k, n));
    return Op(FactorShape(subsys_dims, n), std::move(out.mat));
}

// ── Interval check and helpers ───────────────────────────────────────────────

bool is_hermitian(const Matrix& m, double tol) {
    return max_abs(m - m.adjoint()) <= tol;
}

Matrix hermitize(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(hermitian), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

bool operator_interval_check(const Matrix& f, const Matrix& p, double tol) {
    if (!is_hermitian(f, tolerances().hermiticity) || !is_hermitian(p, tolerances().hermiticity))
        throw std::invalid_argument("operator_interval_check: non-Hermitian input");
    if (f.rows() != p.rows()) throw std::invalid_argument("operator_interval_check: dimension mismatch");
    return min_eigenvalue(f) >= -tol && min_eigenvalue(p - f) >= -tol;
}

bool operator_interval_check(const Op& f, const Op& p, double tol) {
    return operator_interval_check(f.mat, p.mat, tol);
}

int numerical_rank(const Matrix& m) {
    if (m.size() == 0) return 0;
    Eigen::BDCSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0) return 0;
    const double cut = tolerances().rank_cut * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++r;
    return r;
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
    return (a.adjoint() * b).trace();
}

double hs_norm(const Matrix& a) { return a.norm(); }

}  // namespace opflab
