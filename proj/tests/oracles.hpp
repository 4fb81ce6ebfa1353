#ifndef ELLWEYL_TESTS_ORACLES_HPP
#define ELLWEYL_TESTS_ORACLES_HPP

// Independent reference implementations used only by the tests: plain
// 64-bit lattice arithmetic written from the pairing, direct theta series,
// a lattice-sum P and small helpers for random data.

#include <cmath>
#include <complex>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "ellweyl/picard_lattice.hpp"
#include "ellweyl/torus_rep.hpp"
#include "ellweyl/types.hpp"

namespace oracle
{

using ellweyl::Complex;
using ellweyl::Real;
using Vec = std::vector<long long>;

inline long long pairing(const Vec &D, const Vec &d)
{
    long long s = D[0] * d[0];
    for (std::size_t k = 1; k < D.size(); ++k) {
        s -= D[k] * d[k];
    }
    return s;
}

inline Vec root(int i, int n, int m)
{
    Vec a(static_cast<std::size_t>(m) + 1, 0);
    if (i == 0) {
        a[0] = 1;
        for (int k = 1; k <= n + 1; ++k) {
            a[static_cast<std::size_t>(k)] = -1;
        }
    } else {
        a[static_cast<std::size_t>(i)] = 1;
        a[static_cast<std::size_t>(i) + 1] = -1;
    }
    return a;
}

inline Vec coroot(int i, int n, int m)
{
    Vec a = root(i, n, m);
    if (i == 0) {
        a[0] = n - 1;
    }
    return a;
}

inline Vec reflect(int i, const Vec &D, int n, int m)
{
    const long long c = pairing(D, coroot(i, n, m));
    Vec out = D;
    const Vec a = root(i, n, m);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] += c * a[k];
    }
    return out;
}

inline Vec reflect_curve(int i, const Vec &d, int n, int m)
{
    const long long c = pairing(root(i, n, m), d);
    Vec out = d;
    const Vec a = coroot(i, n, m);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] += c * a[k];
    }
    return out;
}

inline Vec apply_word(const std::vector<int> &letters, Vec D, int n, int m)
{
    for (int g : letters) {
        D = reflect(g, D, n, m);
    }
    return D;
}

inline Vec apply_word_curve(const std::vector<int> &letters, Vec d, int n, int m)
{
    for (int g : letters) {
        d = reflect_curve(g, d, n, m);
    }
    return d;
}

// Depth of the first appearance of each class in the orbit of alpha_0.
inline std::map<Vec, int> bfs_orbit(int n, int m, int depth)
{
    std::map<Vec, int> seen;
    std::deque<Vec> frontier{root(0, n, m)};
    seen[root(0, n, m)] = 0;
    for (int d = 1; d <= depth; ++d) {
        std::deque<Vec> next;
        for (const Vec &v : frontier) {
            for (int g = 0; g < m; ++g) {
                Vec w = reflect(g, v, n, m);
                if (!seen.count(w)) {
                    seen[w] = d;
                    next.push_back(w);
                }
            }
        }
        frontier.swap(next);
    }
    return seen;
}

inline Vec to_vec(const std::vector<ellweyl::Integer> &c)
{
    Vec v;
    for (const auto &x : c) {
        v.push_back(x.convert_to<long long>());
    }
    return v;
}

inline std::vector<ellweyl::Integer> to_integers(const Vec &v)
{
    return {v.begin(), v.end()};
}

// -i sum_{k in Z} (-1)^k q^{(k+1/2)^2} e^{(2k+1) pi i z}, q = e^{i pi tau}.
inline Complex theta_bilateral(Complex z, Complex tau, int terms = 40)
{
    const Complex I(0.0, 1.0);
    Complex s = 0;
    for (int k = -terms; k < terms; ++k) {
        const Real h = k + 0.5;
        const Complex e = std::exp(I * M_PI * tau * h * h + I * M_PI * Real(2 * k + 1) * z);
        s += (k % 2 == 0 ? 1.0 : -1.0) * e;
    }
    return -I * s;
}

inline Complex csc2(Complex z)
{
    const Complex s = std::sin(M_PI * z);
    return M_PI * M_PI / (s * s);
}

// P(u) summed over the lattice row by row: each row j + k tau is summed in
// closed form with pi^2 / sin^2.
inline Complex wp_lattice(Complex u, Complex tau, int rows = 40)
{
    Complex s = csc2(u) - M_PI * M_PI / 3.0;
    for (int k = 1; k <= rows; ++k) {
        const Complex kt = Real(k) * tau;
        s += csc2(u - kt) + csc2(u + kt) - 2.0 * csc2(kt);
    }
    return s;
}

inline std::vector<int> random_word(ellweyl::Rng &rng, int m, int max_len, int min_len = 0)
{
    const int len = min_len + static_cast<int>(rng.uniform() * (max_len - min_len + 1));
    std::vector<int> w;
    for (int k = 0; k < len; ++k) {
        w.push_back(static_cast<int>(rng.uniform() * m));
    }
    return w;
}

inline ellweyl::CMatrix random_matrix(ellweyl::Rng &rng, int rows, int cols)
{
    ellweyl::CMatrix a(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            a(r, c) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        }
    }
    return a;
}

inline Complex random_complex(ellweyl::Rng &rng, Real scale = 1.0)
{
    return {rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
}

// Projective equality of two columns (cross ratios of all coordinate pairs).
inline Real proj_gap(const ellweyl::CVector &a, const ellweyl::CVector &b)
{
    Real gap = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        for (Eigen::Index j = 0; j < a.size(); ++j) {
            gap = std::max(gap, std::abs(a[i] * b[j] - a[j] * b[i]));
        }
    }
    return gap / (a.norm() * b.norm());
}

} // namespace oracle

#endif
