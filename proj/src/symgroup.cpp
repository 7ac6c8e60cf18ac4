#include "opflab/symgroup.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

namespace opflab {

int partition_weight(const Partition& p) {
    return std::accumulate(p.begin(), p.end(), 0);
}

bool is_partition(const Partition& p) {
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 1) return false;
        if (i > 0 && p[i] > p[i - 1]) return false;
    }
    return true;
}

void validate_partition(const Partition& p) {
    if (!is_partition(p)) throw std::invalid_argument("not a partition (weakly decreasing, parts >= 1)");
}

namespace {

void gen_partitions(int n, int max_part, Partition& cur, std::vector<Partition>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int k = std::min(n, max_part); k >= 1; --k) {
        cur.push_back(k);
        gen_partitions(n - k, k, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Partition> partitions(int n) {
    if (n < 1) throw std::invalid_argument("partitions: n >= 1");
    std::vector<Partition> out;
    Partition cur;
    gen_partitions(n, n, cur, out);
    return out;
}

long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

long long class_size(const Partition& mu) {
    validate_partition(mu);
    const int n = partition_weight(mu);
    long long z = 1;
    int run = 1;
    for (size_t i = 0; i < mu.size(); ++i) {
        z *= mu[i];
        if (i + 1 < mu.size() && mu[i + 1] == mu[i]) {
            ++run;
            z *= run;
        } else {
            run = 1;
        }
    }
    return factorial(n) / z;
}

// ── Murnaghan-Nakayama via beta-sets ─────────────────────────────────────────
//
// With B = {λ_i + k - i}, removing a border strip of length t corresponds to
// replacing some b ∈ B, b ≥ t, b - t ∉ B, by b - t; the strip height is the
// number of elements of B strictly between b - t and b.

namespace {

Partition partition_from_beta(std::vector<int> beta) {
    std::sort(beta.begin(), beta.end(), std::greater<int>());
    const int k = static_cast<int>(beta.size());
    Partition p;
    for (int i = 0; i < k; ++i) {
        const int part = beta[i] - (k - 1 - i);
        if (part > 0) p.push_back(part);
        else if (part < 0) throw std::logic_error("invalid beta set");
    }
    return p;
}

std::map<std::pair<Partition, std::vector<int>>, long long> g_chi_memo;
std::mutex g_chi_mutex;

long long chi_rec(const Partition& lambda, const std::vector<int>& mu_rest) {
    if (lambda.empty()) return mu_rest.empty() ? 1 : throw std::logic_error("weight mismatch in recursion");
    const auto key = std::make_pair(lambda, mu_rest);
    {
        std::lock_guard<std::mutex> lk(g_chi_mutex);
        auto it = g_chi_memo.find(key);
        if (it != g_chi_memo.end()) return it->second;
    }
    const int t = mu_rest.front();
    const std::vector<int> rest(mu_rest.begin() + 1, mu_rest.end());
    const int k = static_cast<int>(lambda.size());
    std::vector<int> beta(k);
    for (int i = 0; i < k; ++i) beta[i] = lambda[i] + (k - 1 - i);
    std::set<int> bs(beta.begin(), beta.end());
    long long total = 0;
    for (int b : beta) {
        if (b < t || bs.count(b - t)) continue;
        int height = 0;
        for (int c : beta)
            if (c > b - t && c < b) ++height;
        std::vector<int> nb;
        for (int c : beta) nb.push_back(c == b ? b - t : c);
        const long long sub = chi_rec(partition_from_beta(std::move(nb)), rest);
        total += (height % 2 == 0 ? sub : -sub);
    }
    {
        std::lock_guard<std::mutex> lk(g_chi_mutex);
        g_chi_memo.emplace(key, total);
    }
    return total;
}

}  // namespace

long long mn_character(const Partition& lambda, const Partition& mu) {
    validate_partition(lambda);
    validate_partition(mu);
    if (partition_weight(lambda) != partition_weight(mu))
        throw std::invalid_argument("mn_character: weights differ");
    return chi_rec(lambda, mu);
}

long long sn_dim(const Partition& lambda) {
    validate_partition(lambda);
    const int n = partition_weight(lambda);
    if (n == 0) return 1;
    // n! / product of hook lengths
    long long num = factorial(n);
    for (size_t i = 0; i < lambda.size(); ++i) {
        for (int j = 0; j < lambda[i]; ++j) {
            int arm = lambda[i] - j - 1;
            int leg = 0;
            for (size_t r = i + 1; r < lambda.size(); ++r)
                if (lambda[r] > j) ++leg;
            const long long hook = arm + leg + 1;
            const long long g = std::gcd(num, hook);
            if (g != hook) throw std::logic_error("hook product does not divide n!");
            num /= hook;
        }
    }
    return num;
}

CharacterTable character_table(int n) {
    CharacterTable t;
    t.n = n;
    t.labels = partitions(n);
    t.entries.resize(t.labels.size());
    for (size_t r = 0; r < t.labels.size(); ++r) {
        t.entries[r].resize(t.labels.size());
        for (size_t c = 0; c < t.labels.size(); ++c)
            t.entries[r][c] = mn_character(t.labels[r], t.labels[c]);
    }
    return t;
}

// ── Isotypic and Schur-Weyl projectors ───────────────────────────────────────

namespace {

Partition cycle_type(const Permutation& pi) {
    const int n = pi.size();
    std::vector<bool> seen(n, false);
    Partition type;
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        int len = 0, j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = pi.images[j];
            ++len;
        }
        type.push_back(len);
    }
    std::sort(type.begin(), type.end(), std::greater<int>());
    return type;
}

}  // namespace

Op isotypic_projector(const Partition& lambda, int d, int n) {
    validate_partition(lambda);
    if (partition_weight(lambda) != n)
        throw std::invalid_argument("isotypic_projector: weight(lambda) must equal n");
    const double dim = static_cast<double>(sn_dim(lambda));
    long long D = 1;
    for (int i = 0; i < n; ++i) D *= d;
    Matrix acc = Matrix::Zero(D, D);
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    do {
        const Permutation pi{img};
        acc += static_cast<double>(mn_character(lambda, cycle_type(pi))) * perm_operator(pi, d, n).mat;
    } while (std::next_permutation(img.begin(), img.end()));
    acc *= dim / static_cast<double>(factorial(n));
    return Op(FactorShape::power(d, n), std::move(acc));
}

Op q_lambda(const Partition& lambda, int a, int b, int n) {
    const Op pa = isotypic_projector(lambda, a, n);
    const Op pb = isotypic_projector(lambda, b, n);
    const Op grouped = kron(pa, pb);
    const Op inter = grouped_to_interleaved(grouped, {a, b}, n);
    const Matrix q = inter.mat * sym_projector(a * b, n).mat;
    return Op(FactorShape({a, b}, n), q);
}

Op q_lambda_mu_nu(const Partition& lambda, const Partition& mu, const Partition& nu,
                  int a, int b, int c, int n) {
    const Op pa = isotypic_projector(lambda, a, n);
    const Op pb = isotypic_projector(mu, b, n);
    const Op pc = isotypic_projector(nu, c, n);
    const Op grouped = kron(kron(pa, pb), pc);
    const Op inter = grouped_to_interleaved(grouped, {a, b, c}, n);
    const Matrix q = inter.mat * sym_projector(a * b * c, n).mat;
    return Op(FactorShape({a, b, c}, n), q);
}

long long kronecker_coefficient(const Partition& lambda, const Partition& mu,
                                const Partition& nu) {
    const int n = partition_weight(lambda);
    if (partition_weight(mu) != n || partition_weight(nu) != n)
        throw std::invalid_argument("kronecker_coefficient: weights differ");
    long long acc = 0;
    for (const Partition& cls : partitions(n))
        acc += class_size(cls) * mn_character(lambda, cls) * mn_character(mu, cls) *
               mn_character(nu, cls);
    const long long nf = factorial(n);
    if (acc % nf != 0) throw std::logic_error("kronecker sum not divisible by n!");
    return acc / nf;
}

// ── SU(d) dimensions, Littlewood-Richardson, duals ───────────────────────────

long long su_dim(const Partition& lambda, int d) {
    validate_partition(lambda);
    if (static_cast<int>(lambda.size()) > d)
        throw std::invalid_argument("su_dim: more than d parts");
    long long num = 1, den = 1;
    for (size_t i = 0; i < lambda.size(); ++i) {
        for (int j = 0; j < lambda[i]; ++j) {
            const long long content = d + j - static_cast<int>(i);
            int arm = lambda[i] - j - 1;
            int leg = 0;
            for (size_t r = i + 1; r < lambda.size(); ++r)
                if (lambda[r] > j) ++leg;
            num *= content;
            den *= arm + leg + 1;
            const long long g = std::gcd(num, den);
            num /= g;
            den /= g;
        }
    }
    if (den != 1) throw std::logic_error("hook-content product not integral");
    return num;
}

namespace {

// Count LR skew tableaux of shape nu/lambda with content mu. Cells are filled
// in reverse reading order (rows top to bottom, right to left within a row),
// which lets the lattice-word condition be enforced as count[i] <= count[i-1]
// at every step.
long long count_lr(const Partition& nu, const Partition& lambda, const Partition& mu) {
    const int rows = static_cast<int>(nu.size());
    std::vector<int> inner(rows, 0);
    for (size_t i = 0; i < lambda.size(); ++i) inner[i] = lambda[i];
    for (int i = 0; i < rows; ++i)
        if (inner[i] > nu[i]) return 0;
    std::vector<std::pair<int, int>> cells;  // (row, col) in reverse reading order
    for (int r = 0; r < rows; ++r)
        for (int col = nu[r] - 1; col >= inner[r]; --col) cells.push_back({r, col});
    const int letters = static_cast<int>(mu.size());
    std::vector<int> count(letters, 0);
    std::vector<std::vector<int>> fill(rows);
    for (int r = 0; r < rows; ++r) fill[r].assign(nu[r], -1);

    long long total = 0;
    auto rec = [&](auto&& self, size_t idx) -> void {
        if (idx == cells.size()) {
            ++total;
            return;
        }
        const auto [r, col] = cells[idx];
        for (int v = 0; v < letters; ++v) {
            if (count[v] >= mu[v]) continue;
            if (v > 0 && count[v] >= count[v - 1]) continue;  // lattice word
            // row weakly increasing: right neighbour already filled
            if (col + 1 < nu[r] && fill[r][col + 1] != -1 && v > fill[r][col + 1]) continue;
            // column strictly increasing against the cell above, if in the skew part
            if (r > 0 && col < nu[r - 1] && col >= inner[r - 1] && v <= fill[r - 1][col]) continue;
            fill[r][col] = v;
            ++count[v];
            self(self, idx + 1);
            --count[v];
            fill[r][col] = -1;
        }
    };
    rec(rec, 0);
    return total;
}

void enumerate_supershapes(const Partition& lambda, int boxes, int max_rows, int row,
                           int prev, Partition& cur, std::vector<Partition>& out) {
    if (row == max_rows) {
        if (boxes == 0) {
            Partition trimmed = cur;
            while (!trimmed.empty() && trimmed.back() == 0) trimmed.pop_back();
            out.push_back(std::move(trimmed));
        }
        return;
    }
    const int lam = row < static_cast<int>(lambda.size()) ? lambda[row] : 0;
    for (int v = std::min(prev, lam + boxes); v >= lam; --v) {
        cur.push_back(v);
        enumerate_supershapes(lambda, boxes - (v - lam), max_rows, row + 1, v, cur, out);
        cur.pop_back();
    }
}

Partition su_reduce(Partition nu, int d) {
    if (static_cast<int>(nu.size()) < d) return nu;
    const int last = nu[d - 1];
    if (last == 0) {
        while (!nu.empty() && nu.back() == 0) nu.pop_back();
        return nu;
    }
    for (int& p : nu) p -= last;
    while (!nu.empty() && nu.back() == 0) nu.pop_back();
    return nu;
}

}  // namespace

std::map<Partition, long long> lr_decompose(const Partition& lambda, const Partition& mu, int d) {
    if (!lambda.empty()) validate_partition(lambda);
    if (!mu.empty()) validate_partition(mu);
    if (static_cast<int>(lambda.size()) > d || static_cast<int>(mu.size()) > d)
        throw std::invalid_argument("lr_decompose: factors need at most d parts");
    const int total = partition_weight(lambda) + partition_weight(mu);
    std::vector<Partition> shapes;
    Partition cur;
    enumerate_supershapes(lambda, partition_weight(mu), d, 0, total, cur, shapes);
    std::map<Partition, long long> out;
    for (const Partition& nu : shapes) {
        const long long c = count_lr(nu, lambda, mu);
        if (c > 0) out[su_reduce(nu, d)] += c;
    }
    return out;
}

Partition dual_partition(const Partition& lambda, int d) {
    if (!lambda.empty()) validate_partition(lambda);
    if (static_cast<int>(lambda.size()) > d)
        throw std::invalid_argument("dual_partition: more than d parts");
    const int l1 = lambda.empty() ? 0 : lambda[0];
    std::vector<int> padded(d, 0);
    for (size_t i = 0; i < lambda.size(); ++i) padded[i] = lambda[i];
    Partition out;
    for (int i = 0; i < d; ++i) out.push_back(l1 - padded[d - 1 - i]);
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

}  // namespace opflab
