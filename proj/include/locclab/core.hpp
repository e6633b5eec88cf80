// core.hpp
// Dense complex linear algebra primitives, Weyl shift-and-modulate unitaries,
// generalized Bell states and state-set validity checks.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace locclab {

using cxd = std::complex<double>;
using Vec = std::vector<cxd>;

// Tolerances shared across the library.
inline constexpr double kEpsNorm = 1e-9;
inline constexpr double kEpsOrth = 1e-9;
inline constexpr double kEpsUnit = 1e-9;

// Row-major dense complex matrix.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<cxd> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    cxd& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const cxd& operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static Mat identity(int d) {
        Mat m(d, d);
        for (int i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline Mat matmul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul: dimension mismatch");
    Mat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const cxd xik = x(i, k);
            if (xik == cxd{}) continue;
            for (int j = 0; j < y.cols; ++j) z(i, j) += xik * y(k, j);
        }
    return z;
}

inline Mat adjoint(const Mat& x) {
    Mat z(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z(j, i) = std::conj(x(i, j));
    return z;
}

inline Mat transpose(const Mat& x) {
    Mat z(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z(j, i) = x(i, j);
    return z;
}

inline Mat conjugate(const Mat& x) {
    Mat z = x;
    for (auto& v : z.a) v = std::conj(v);
    return z;
}

inline double max_abs_diff(const Mat& x, const Mat& y) {
    if (x.rows != y.rows || x.cols != y.cols)
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (size_t i = 0; i < x.a.size(); ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
    return m;
}

inline Vec matvec(const Mat& x, const Vec& v) {
    if (x.cols != static_cast<int>(v.size()))
        throw std::invalid_argument("matvec: dimension mismatch");
    Vec out(x.rows);
    for (int i = 0; i < x.rows; ++i) {
        cxd s{};
        for (int j = 0; j < x.cols; ++j) s += x(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

inline cxd vdot(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("vdot: dimension mismatch");
    cxd s{};
    for (size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

inline double norm(const Vec& x) { return std::sqrt(std::real(vdot(x, x))); }

inline void normalize(Vec& x) {
    const double n = norm(x);
    if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
    for (auto& v : x) v /= n;
}

inline bool is_unitary(const Mat& u, double tol = kEpsUnit) {
    if (u.rows != u.cols) return false;
    return max_abs_diff(matmul(adjoint(u), u), Mat::identity(u.rows)) <= tol;
}

// Table of the d-th roots of unity; all phase arithmetic reduces exponents
// mod d first so equal phases stay bit-identical.
inline std::vector<cxd> root_of_unity_table(int d) {
    std::vector<cxd> w(static_cast<size_t>(d));
    for (int r = 0; r < d; ++r)
        w[static_cast<size_t>(r)] =
            std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / d);
    return w;
}

inline int mod_d(long long x, int d) {
    long long r = x % d;
    if (r < 0) r += d;
    return static_cast<int>(r);
}

struct WeylIndex {
    int n = 0;
    int m = 0;
    int d = 0;

    void validate() const {
        if (d < 1) throw std::invalid_argument("WeylIndex: d must be positive");
        if (n < 0 || n >= d || m < 0 || m >= d)
            throw std::invalid_argument("WeylIndex: indices out of range");
    }
    bool operator==(const WeylIndex&) const = default;
};

// U[(j+m) mod d][j] = w^(j*n), all other entries zero.
inline Mat make_weyl(const WeylIndex& idx) {
    idx.validate();
    const auto w = root_of_unity_table(idx.d);
    Mat u(idx.d, idx.d);
    for (int j = 0; j < idx.d; ++j)
        u(mod_d(j + idx.m, idx.d), j) = w[static_cast<size_t>(mod_d(static_cast<long long>(j) * idx.n, idx.d))];
    return u;
}

// Coefficient matrix of a pure bipartite state: amplitudes(a, b) multiplies |a>|b>.
struct BipartiteState {
    int dA = 0;
    int dB = 0;
    Mat amplitudes;

    BipartiteState() = default;
    BipartiteState(int a, int b) : dA(a), dB(b), amplitudes(a, b) {}

    double frob_norm() const {
        double s = 0.0;
        for (const auto& v : amplitudes.a) s += std::norm(v);
        return std::sqrt(s);
    }
};

inline BipartiteState phi_plus(int d) {
    BipartiteState s(d, d);
    const double c = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) s.amplitudes(j, j) = c;
    return s;
}

inline BipartiteState make_generalized_bell(const WeylIndex& idx) {
    idx.validate();
    const auto w = root_of_unity_table(idx.d);
    BipartiteState s(idx.d, idx.d);
    const double c = 1.0 / std::sqrt(static_cast<double>(idx.d));
    for (int j = 0; j < idx.d; ++j)
        s.amplitudes(j, mod_d(j + idx.m, idx.d)) =
            c * w[static_cast<size_t>(mod_d(static_cast<long long>(j) * idx.n, idx.d))];
    return s;
}

enum class Side { A, B };

// Applies a unitary on one party: on side B the coefficient of |a>|b> becomes
// sum_b' U(b,b') amp(a,b'); side A acts on the row index analogously.
inline BipartiteState apply_local_unitary(const Mat& u, const BipartiteState& s, Side side) {
    BipartiteState out = s;
    if (side == Side::B) {
        if (u.rows != s.dB || u.cols != s.dB)
            throw std::invalid_argument("apply_local_unitary: B-side dimension mismatch");
        out.amplitudes = matmul(s.amplitudes, transpose(u));
    } else {
        if (u.rows != s.dA || u.cols != s.dA)
            throw std::invalid_argument("apply_local_unitary: A-side dimension mismatch");
        out.amplitudes = matmul(u, s.amplitudes);
    }
    return out;
}

inline cxd inner_product(const BipartiteState& s1, const BipartiteState& s2) {
    if (s1.dA != s2.dA || s1.dB != s2.dB)
        throw std::invalid_argument("inner_product: dimension mismatch");
    cxd r{};
    for (size_t i = 0; i < s1.amplitudes.a.size(); ++i)
        r += std::conj(s1.amplitudes.a[i]) * s2.amplitudes.a[i];
    return r;
}

// True iff the reduced state amp*amp^dagger equals I/d within tolerance.
inline bool is_maximally_entangled(const BipartiteState& s, double tol = kEpsOrth) {
    if (s.dA != s.dB) return false;
    Mat red = matmul(s.amplitudes, adjoint(s.amplitudes));
    Mat target = Mat::identity(s.dA);
    for (auto& v : target.a) v /= static_cast<double>(s.dA);
    return max_abs_diff(red, target) <= tol;
}

enum class Direction { AtoB, BtoA };

struct StateSet {
    int dA = 0;
    int dB = 0;
    BipartiteState base;
    std::vector<Mat> unitaries;
    Direction direction = Direction::AtoB;

    int size() const { return static_cast<int>(unitaries.size()); }

    BipartiteState derived_state(int i) const {
        return apply_local_unitary(unitaries[static_cast<size_t>(i)], base, Side::B);
    }

    // Validity gate: unitarity of every operator and pairwise orthogonality
    // of the derived states.
    void validate() const {
        if (base.dA != dA || base.dB != dB)
            throw std::invalid_argument("StateSet: base dimension mismatch");
        if (std::abs(base.frob_norm() - 1.0) > kEpsNorm)
            throw std::invalid_argument("StateSet: base state not normalized");
        for (const auto& u : unitaries) {
            if (u.rows != dB || u.cols != dB)
                throw std::invalid_argument("StateSet: unitary dimension mismatch");
            if (!is_unitary(u)) throw std::invalid_argument("StateSet: operator not unitary");
        }
        std::vector<BipartiteState> derived;
        derived.reserve(unitaries.size());
        for (int i = 0; i < size(); ++i) derived.push_back(derived_state(i));
        for (size_t k = 0; k < derived.size(); ++k)
            for (size_t l = k + 1; l < derived.size(); ++l)
                if (std::abs(inner_product(derived[k], derived[l])) > kEpsOrth)
                    throw std::invalid_argument("StateSet: derived states not pairwise orthogonal");
    }
};

// Rewrites the set with V_k = U_k^T and the direction flipped; the derived
// states are the originals with the two parties exchanged, so a Bob-first
// question becomes an Alice-first question on the transposed set.
// Requires the base to be the standard maximally entangled state.
inline StateSet transpose_set(const StateSet& ss) {
    if (ss.dA != ss.dB) throw std::invalid_argument("transpose_set: requires dA == dB");
    if (max_abs_diff(ss.base.amplitudes, phi_plus(ss.dA).amplitudes) > kEpsOrth)
        throw std::invalid_argument("transpose_set: base is not the standard maximally entangled state");
    StateSet out = ss;
    for (auto& u : out.unitaries) u = transpose(u);
    out.direction = ss.direction == Direction::AtoB ? Direction::BtoA : Direction::AtoB;
    return out;
}

// max over pairs (k,l) of || U_k^dag U_l - U_l U_k^dag ||_max; a value within
// kEpsUnit of zero means the direction-symmetry remark applies.
inline double commutation_defect(const StateSet& ss) {
    double worst = 0.0;
    for (int k = 0; k < ss.size(); ++k) {
        const Mat uk_dag = adjoint(ss.unitaries[static_cast<size_t>(k)]);
        for (int l = 0; l < ss.size(); ++l) {
            if (k == l) continue;
            const Mat& ul = ss.unitaries[static_cast<size_t>(l)];
            worst = std::max(worst, max_abs_diff(matmul(uk_dag, ul), matmul(ul, uk_dag)));
        }
    }
    return worst;
}

// Haar-ish random unitary: orthonormalize a matrix of standard complex
// Gaussians. Seeded explicitly for reproducibility.
inline Mat random_unitary(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat m(d, d);
    for (auto& v : m.a) v = cxd{g(rng), g(rng)};
    // Gram-Schmidt on columns.
    for (int c = 0; c < d; ++c) {
        for (int p = 0; p < c; ++p) {
            cxd ov{};
            for (int r = 0; r < d; ++r) ov += std::conj(m(r, p)) * m(r, c);
            for (int r = 0; r < d; ++r) m(r, c) -= ov * m(r, p);
        }
        double nn = 0.0;
        for (int r = 0; r < d; ++r) nn += std::norm(m(r, c));
        nn = std::sqrt(nn);
        for (int r = 0; r < d; ++r) m(r, c) /= nn;
    }
    return m;
}

inline Vec random_unit_vector(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec v(static_cast<size_t>(d));
    for (auto& x : v) x = cxd{g(rng), g(rng)};
    normalize(v);
    return v;
}

inline StateSet weyl_state_set(const std::vector<WeylIndex>& indices, Direction dir = Direction::AtoB) {
    if (indices.empty()) throw std::invalid_argument("weyl_state_set: empty index list");
    const int d = indices.front().d;
    StateSet ss;
    ss.dA = ss.dB = d;
    ss.base = phi_plus(d);
    ss.direction = dir;
    for (const auto& idx : indices) {
        if (idx.d != d) throw std::invalid_argument("weyl_state_set: mixed dimensions");
        ss.unitaries.push_back(make_weyl(idx));
    }
    return ss;
}

}  // namespace locclab
