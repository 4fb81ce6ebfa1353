#include "ellweyl/elliptic_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/math/quadrature/gauss.hpp>

namespace ellweyl
{

namespace
{

constexpr int max_series_terms = 200;
constexpr Real series_cutoff = 1e-17;

bool finite(Complex z)
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Theta_1 and three derivatives for an argument with |Im z| of order Im tau.
struct SeriesJet {
    Complex v, d1, d2, d3;
};

SeriesJet theta_series(Complex z, Complex tau)
{
    SeriesJet out{};
    const Real im_z = std::abs(z.imag());
    const Real im_tau = tau.imag();
    Real max_bound = 0;
    for (int k = 0; k < max_series_terms; ++k) {
        const Real half = k + 0.5;
        const Real c = (2 * k + 1) * pi;
        // |q^{(k+1/2)^2} sin((2k+1) pi z)| <= bound
        const Real log_bound = -pi * im_tau * half * half + c * im_z;
        const Real bound = std::exp(log_bound) * c * c * c;
        max_bound = std::max(max_bound, bound);
        if (k > 0 && bound < series_cutoff * max_bound) {
            break;
        }
        const Complex coef = (k % 2 == 0 ? 2.0 : -2.0) * std::exp(I * pi * tau * (half * half));
        const Complex s = std::sin(c * z);
        const Complex co = std::cos(c * z);
        out.v += coef * s;
        out.d1 += coef * c * co;
        out.d2 -= coef * c * c * s;
        out.d3 -= coef * c * c * c * co;
    }
    return out;
}

// Gauss-Legendre rule on [-1, 1].
struct Rule {
    std::vector<Real> x, w;
};

const Rule &gauss_rule()
{
    static const Rule rule = [] {
        using G = boost::math::quadrature::gauss<Real, 20>;
        Rule r;
        for (std::size_t i = 0; i < G::abscissa().size(); ++i) {
            r.x.push_back(G::abscissa()[i]);
            r.w.push_back(G::weights()[i]);
            r.x.push_back(-G::abscissa()[i]);
            r.w.push_back(G::weights()[i]);
        }
        return r;
    }();
    return rule;
}

CVector normalized(CVector v)
{
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < v.size(); ++k) {
        if (std::abs(v[k]) > std::abs(v[best])) {
            best = k;
        }
    }
    const Complex s = v[best];
    if (s == Complex(0.0, 0.0)) {
        throw DegenerateInput("embedding evaluated to the zero vector");
    }
    v /= s;
    v[best] = 1.0;
    return v;
}

} // namespace

// ------------------------------------------------------------ TorusModulus

TorusModulus::TorusModulus(Complex tau) : m_tau(tau)
{
    if (!finite(tau) || !(tau.imag() > 0)) {
        throw std::domain_error("torus modulus: Im tau must be positive");
    }
    m_q = std::exp(I * pi * tau);

    // Eisenstein series through Lambert sums in q^2 = exp(2 pi i tau).
    const Complex q2 = m_q * m_q;
    Complex s3{0.0, 0.0}, s5{0.0, 0.0};
    Complex q2k = 1.0;
    for (int k = 1; k < 2000; ++k) {
        q2k *= q2;
        const Complex frac = q2k / (1.0 - q2k);
        const Real k3 = static_cast<Real>(k) * k * k;
        const Complex t3 = k3 * frac;
        const Complex t5 = k3 * k * k * frac;
        s3 += t3;
        s5 += t5;
        if (std::abs(t5) < 1e-18 * (1.0 + std::abs(s5)) && k > 2) {
            break;
        }
    }
    const Complex e4 = 1.0 + 240.0 * s3;
    const Complex e6 = 1.0 - 504.0 * s5;
    const Real pi4 = pi * pi * pi * pi;
    m_g2 = (4.0 * pi4 / 3.0) * e4;
    m_g3 = (8.0 * pi4 * pi * pi / 27.0) * e6;

    const SeriesJet at_zero = theta_series(Complex(0.0, 0.0), tau);
    m_wp_const = at_zero.d3 / (3.0 * at_zero.d1);
}

std::pair<Real, Real> TorusModulus::coordinates(Complex z) const
{
    const Real b = z.imag() / m_tau.imag();
    const Real a = z.real() - b * m_tau.real();
    return {a, b};
}

Complex TorusModulus::reduce(Complex z) const
{
    auto [a, b] = coordinates(z);
    Real fa = a - std::floor(a);
    Real fb = b - std::floor(b);
    if (fa >= 1.0) {
        fa = 0.0;
    }
    if (fb >= 1.0) {
        fb = 0.0;
    }
    // Shift the original number so the representative differs from z by an
    // exact lattice vector up to one rounding.
    return z - (a - fa) - (b - fb) * m_tau;
}

Complex TorusModulus::reduce_centered(Complex z) const
{
    auto [a, b] = coordinates(z);
    const Real na = std::floor(a + 0.5);
    const Real nb = std::floor(b + 0.5);
    return z - na - nb * m_tau;
}

Real TorusModulus::lattice_distance(Complex z) const
{
    const Complex z0 = reduce_centered(z);
    Real best = std::numeric_limits<Real>::infinity();
    for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
            best = std::min(best, std::abs(z0 + static_cast<Real>(i) + static_cast<Real>(j) * m_tau));
        }
    }
    return best;
}

bool torus_eq(const TorusPoint &p, const TorusPoint &q, Real tol)
{
    if (!(p.modulus() == q.modulus())) {
        throw SignatureMismatch("torus points live on different tori");
    }
    return p.modulus().lattice_distance(p.value() - q.value()) < tol;
}

// ------------------------------------------------------------------ theta

ThetaJet theta_jet(Complex z, const TorusModulus &mod)
{
    if (!finite(z)) {
        throw std::domain_error("theta: non-finite argument");
    }
    const Complex tau = mod.tau();
    const Real b = std::round(z.imag() / tau.imag());
    const Complex z1 = z - b * tau;
    const Real a = std::round(z1.real());
    const Complex z0 = z1 - a;

    // [z0 + a + b tau] = (-1)^{a+b} q^{-b^2} e^{-2 pi i b z0} [z0]
    const Real parity = std::fmod(std::abs(a + b), 2.0);
    const Complex log_scale = I * pi * parity - I * pi * tau * (b * b) - 2.0 * pi * I * b * z0;
    const Complex k = -2.0 * pi * I * b;

    const SeriesJet s = theta_series(z0, tau);
    ThetaJet jet;
    jet.log_scale = log_scale;
    jet.value = s.v;
    jet.d1 = s.d1 + k * s.v;
    jet.d2 = s.d2 + 2.0 * k * s.d1 + k * k * s.v;
    jet.d3 = s.d3 + 3.0 * k * s.d2 + 3.0 * k * k * s.d1 + k * k * k * s.v;
    return jet;
}

Complex theta(Complex z, const TorusModulus &mod)
{
    const ThetaJet jet = theta_jet(z, mod);
    return std::exp(jet.log_scale) * jet.value;
}

Complex theta_log_derivative(Complex z, const TorusModulus &mod)
{
    const ThetaJet jet = theta_jet(z, mod);
    return jet.d1 / jet.value;
}

Complex wp(Complex u, int order, const TorusModulus &mod, Real tol_pole)
{
    if (order < 0 || order > 5) {
        throw std::out_of_range("wp: derivative order must be within 0..5");
    }
    if (!finite(u)) {
        throw std::domain_error("wp: non-finite argument");
    }
    if (mod.lattice_distance(u) < tol_pole) {
        throw DegenerateInput("wp: argument at a pole");
    }
    const ThetaJet jet = theta_jet(mod.reduce_centered(u), mod);
    const Complex l1 = jet.d1 / jet.value;
    const Complex l2 = jet.d2 / jet.value;
    const Complex l3 = jet.d3 / jet.value;
    const Complex p = l1 * l1 - l2 + mod.wp_constant();
    if (order == 0) {
        return p;
    }
    const Complex dp = -(l3 - 3.0 * l1 * l2 + 2.0 * l1 * l1 * l1);
    if (order == 1) {
        return dp;
    }
    // Higher derivatives from P'' = 6 P^2 - g2/2.
    const Complex d2 = 6.0 * p * p - mod.g2() / 2.0;
    const Complex d3 = 12.0 * p * dp;
    const Complex d4 = 12.0 * (dp * dp + p * d2);
    const Complex d5 = 36.0 * dp * d2 + 12.0 * p * d3;
    switch (order) {
    case 2:
        return d2;
    case 3:
        return d3;
    case 4:
        return d4;
    default:
        return d5;
    }
}

// -------------------------------------------------------------- embeddings

EllipticEmbedding EllipticEmbedding::weierstrass(int n, const TorusModulus &mod)
{
    if (n < 1 || n > 5) {
        throw std::invalid_argument("weierstrass embedding: n must be within 1..5");
    }
    return EllipticEmbedding(EmbeddingKind::weierstrass, n, mod);
}

EllipticEmbedding EllipticEmbedding::kmnoy(std::vector<Complex> base, Complex eps, const TorusModulus &mod)
{
    if (base.size() < 2) {
        throw std::invalid_argument("kmnoy embedding: need n+1 >= 2 base points");
    }
    for (Complex b : base) {
        if (!finite(b)) {
            throw std::domain_error("kmnoy embedding: non-finite base point");
        }
    }
    if (!finite(eps)) {
        throw std::domain_error("kmnoy embedding: non-finite eps");
    }
    EllipticEmbedding e(EmbeddingKind::kmnoy, static_cast<int>(base.size()) - 1, mod);
    e.m_base = std::move(base);
    e.m_eps = eps;
    return e;
}

EllipticEmbedding EllipticEmbedding::transformed(const CMatrix &h) const
{
    if (h.rows() != m_n + 1 || h.cols() != m_n + 1) {
        throw std::invalid_argument("embedding transform: expected an (n+1)x(n+1) matrix");
    }
    EllipticEmbedding e = *this;
    e.m_transform = m_transform ? CMatrix(h * *m_transform) : h;
    return e;
}

Section EllipticEmbedding::section(Complex u) const
{
    const int dim = m_n + 1;
    Section s{CVector::Zero(dim), CVector::Zero(dim)};
    if (m_kind == EmbeddingKind::weierstrass) {
        // [u]^{n+1} (1, P, P', ..., P^{(n-1)})
        const ThetaJet jet = theta_jet(u, m_mod);
        if (jet.value == Complex(0.0, 0.0)) {
            throw DegenerateInput("weierstrass section: argument on the lattice");
        }
        const Complex l = jet.d1 / jet.value;
        const Complex th = std::pow(jet.value, dim);
        std::vector<Complex> w(static_cast<std::size_t>(dim) + 1);
        w[0] = 1.0;
        for (int k = 1; k <= dim; ++k) {
            w[static_cast<std::size_t>(k)] = wp(u, k - 1, m_mod, 0.0);
        }
        for (int k = 0; k < dim; ++k) {
            const Complex wk = w[static_cast<std::size_t>(k)];
            const Complex dwk = k == 0 ? Complex(0.0, 0.0) : w[static_cast<std::size_t>(k) + 1];
            s.value[k] = th * wk;
            s.derivative[k] = th * (static_cast<Real>(dim) * l * wk + dwk);
        }
    } else {
        // [u - u_i - eps] prod_{k != i} [u - u_k]
        std::vector<ThetaJet> base_jets;
        base_jets.reserve(m_base.size());
        for (Complex b : m_base) {
            base_jets.push_back(theta_jet(u - b, m_mod));
        }
        std::vector<Complex> log_q(static_cast<std::size_t>(dim)), prod(static_cast<std::size_t>(dim)),
            dprod(static_cast<std::size_t>(dim));
        Real top = -std::numeric_limits<Real>::infinity();
        for (int i = 0; i < dim; ++i) {
            std::vector<const ThetaJet *> factors;
            const ThetaJet lead = theta_jet(u - m_base[static_cast<std::size_t>(i)] - m_eps, m_mod);
            factors.push_back(&lead);
            for (int k = 0; k < dim; ++k) {
                if (k != i) {
                    factors.push_back(&base_jets[static_cast<std::size_t>(k)]);
                }
            }
            Complex lq{0.0, 0.0}, p{1.0, 0.0}, dp{0.0, 0.0};
            for (std::size_t j = 0; j < factors.size(); ++j) {
                lq += factors[j]->log_scale;
                dp = dp * factors[j]->value + p * factors[j]->d1;
                p *= factors[j]->value;
            }
            const auto ui = static_cast<std::size_t>(i);
            log_q[ui] = lq;
            prod[ui] = p;
            dprod[ui] = dp;
            if (p != Complex(0.0, 0.0)) {
                top = std::max(top, lq.real() + std::log(std::abs(p)));
            }
        }
        if (!std::isfinite(top)) {
            throw DegenerateInput("kmnoy section vanishes identically at this point");
        }
        for (int i = 0; i < dim; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const Complex scale = std::exp(log_q[ui] - top);
            s.value[i] = prod[ui] * scale;
            s.derivative[i] = dprod[ui] * scale;
        }
    }
    if (m_transform) {
        s.value = *m_transform * s.value;
        s.derivative = *m_transform * s.derivative;
    }
    return s;
}

CVector EllipticEmbedding::operator()(Complex u) const
{
    const int dim = m_n + 1;
    CVector out;
    if (m_kind == EmbeddingKind::weierstrass && m_mod.lattice_distance(u) < default_tol_pole) {
        out = CVector::Zero(dim);
        out[m_n] = 1.0;
    } else if (m_kind == EmbeddingKind::kmnoy) {
        for (int k = 0; k < dim; ++k) {
            if (m_mod.lattice_distance(u - m_base[static_cast<std::size_t>(k)]) < default_tol_pole) {
                out = CVector::Zero(dim);
                out[k] = 1.0;
                break;
            }
        }
    }
    if (out.size() == 0) {
        out = section(u).value;
    } else if (m_transform) {
        out = *m_transform * out;
    }
    return normalized(std::move(out));
}

Complex EllipticEmbedding::base_point_v() const
{
    if (m_kind == EmbeddingKind::weierstrass) {
        return {0.0, 0.0};
    }
    const Complex sum = std::accumulate(m_base.begin(), m_base.end(), m_eps);
    return sum / static_cast<Real>(m_n + 1);
}

std::optional<std::vector<Complex>> EllipticEmbedding::first_coordinate_zeros() const
{
    if (m_transform) {
        return std::nullopt;
    }
    if (m_kind == EmbeddingKind::weierstrass) {
        return std::vector<Complex>(static_cast<std::size_t>(m_n) + 1, Complex(0.0, 0.0));
    }
    std::vector<Complex> z = m_base;
    z[0] += m_eps;
    return z;
}

CVector embed(const EllipticEmbedding &emb, const TorusPoint &u)
{
    if (!(u.modulus() == emb.modulus())) {
        throw SignatureMismatch("embed: point and embedding live on different tori");
    }
    return emb(u.value());
}

TorusPoint base_point_v(const EllipticEmbedding &emb)
{
    return TorusPoint(emb.base_point_v(), emb.modulus());
}

TorusPoint translation_between(std::span<const TorusPoint> zeros_src, std::span<const TorusPoint> zeros_dst)
{
    if (zeros_src.empty() || zeros_src.size() != zeros_dst.size()) {
        throw std::invalid_argument("translation_between: zero lists must be nonempty and of equal size");
    }
    const TorusModulus &mod = zeros_src.front().modulus();
    Complex diff{0.0, 0.0};
    for (std::size_t k = 0; k < zeros_src.size(); ++k) {
        if (!(zeros_src[k].modulus() == mod) || !(zeros_dst[k].modulus() == mod)) {
            throw SignatureMismatch("translation_between: mixed tori");
        }
        diff += zeros_dst[k].value() - zeros_src[k].value();
    }
    diff = mod.reduce_centered(diff);
    return TorusPoint(diff / static_cast<Real>(zeros_src.size()), mod);
}

SectionZeros hyperplane_zeros(const EllipticEmbedding &emb, const CVector &hyperplane)
{
    const TorusModulus &mod = emb.modulus();
    const Complex tau = mod.tau();
    if (hyperplane.size() != emb.n() + 1) {
        throw std::invalid_argument("hyperplane_zeros: hyperplane has the wrong length");
    }
    const Complex centre_shift = -(1.0 + tau) / 2.0;

    // Newton step length |h / h'|, a local estimate of the distance to the
    // nearest zero, used to keep the contour away from zeros.
    auto clearance = [&](Complex u) {
        const Section s = emb.section(u);
        const Complex h = hyperplane.cwiseProduct(s.value).sum();
        const Complex dh = hyperplane.cwiseProduct(s.derivative).sum();
        return std::abs(h) / std::max(std::abs(dh), std::numeric_limits<Real>::min());
    };
    auto edge_points = [&](Complex origin, int per_edge) {
        std::vector<Complex> pts;
        const std::array<Complex, 4> corners{origin, origin + 1.0, origin + 1.0 + tau, origin + tau};
        for (int e = 0; e < 4; ++e) {
            const Complex a = corners[static_cast<std::size_t>(e)];
            const Complex b = corners[static_cast<std::size_t>((e + 1) % 4)];
            for (int k = 0; k < per_edge; ++k) {
                pts.push_back(a + (b - a) * (static_cast<Real>(k) / per_edge));
            }
        }
        return pts;
    };

    std::vector<std::pair<Real, Real>> offsets{{0.0, 0.0}};
    for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) {
            if (a != 0 || b != 0) {
                offsets.emplace_back(0.173 * a + 0.011 * b, 0.181 * b - 0.013 * a);
            }
        }
    }
    Complex origin = centre_shift;
    Real best = -1;
    for (const auto &[da, db] : offsets) {
        const Complex cand = centre_shift + da + db * tau;
        Real worst = std::numeric_limits<Real>::infinity();
        for (Complex p : edge_points(cand, 48)) {
            worst = std::min(worst, clearance(p));
        }
        if (worst > best) {
            best = worst;
            origin = cand;
        }
        if (best > 0.08) {
            break;
        }
    }

    const Rule &rule = gauss_rule();
    constexpr int panels = 32;
    constexpr int max_moment = 8;
    const Complex centre = origin + (1.0 + tau) / 2.0;
    std::array<Complex, max_moment + 1> moments{};
    const std::array<Complex, 4> corners{origin, origin + 1.0, origin + 1.0 + tau, origin + tau};
    for (int e = 0; e < 4; ++e) {
        const Complex a = corners[static_cast<std::size_t>(e)];
        const Complex b = corners[static_cast<std::size_t>((e + 1) % 4)];
        const Complex step = (b - a) / static_cast<Real>(panels);
        for (int p = 0; p < panels; ++p) {
            const Complex mid = a + step * (p + 0.5);
            for (std::size_t k = 0; k < rule.x.size(); ++k) {
                const Complex u = mid + step * (0.5 * rule.x[k]);
                const Section s = emb.section(u);
                const Complex h = hyperplane.cwiseProduct(s.value).sum();
                const Complex dh = hyperplane.cwiseProduct(s.derivative).sum();
                const Complex f = dh / h * (0.5 * rule.w[k]) * step;
                Complex power{1.0, 0.0};
                for (int j = 0; j <= max_moment; ++j) {
                    moments[static_cast<std::size_t>(j)] += power * f;
                    power *= (u - centre);
                }
            }
        }
    }
    for (auto &mo : moments) {
        mo /= 2.0 * pi * I;
    }

    SectionZeros out;
    out.origin = origin;
    out.count = moments[0].real();
    const int count = static_cast<int>(std::lround(out.count));
    out.sum = moments[1] + static_cast<Real>(count) * centre;
    if (count <= 0 || count > max_moment) {
        return out;
    }
    // Newton identities: power sums -> elementary symmetric polynomials.
    std::vector<Complex> e(static_cast<std::size_t>(count) + 1);
    e[0] = 1.0;
    for (int k = 1; k <= count; ++k) {
        Complex acc{0.0, 0.0};
        for (int i = 1; i <= k; ++i) {
            const Real sgn = (i % 2 == 1) ? 1.0 : -1.0;
            acc += sgn * e[static_cast<std::size_t>(k - i)] * moments[static_cast<std::size_t>(i)];
        }
        e[static_cast<std::size_t>(k)] = acc / static_cast<Real>(k);
    }
    // Companion matrix of x^N - e1 x^{N-1} + e2 x^{N-2} - ...
    CMatrix comp = CMatrix::Zero(count, count);
    for (int k = 1; k < count; ++k) {
        comp(k, k - 1) = 1.0;
    }
    for (int k = 1; k <= count; ++k) {
        const Real sgn = (k % 2 == 1) ? 1.0 : -1.0;
        comp(count - k, count - 1) = sgn * e[static_cast<std::size_t>(k)];
    }
    Eigen::ComplexEigenSolver<CMatrix> solver(comp, false);
    for (Eigen::Index k = 0; k < count; ++k) {
        out.zeros.push_back(solver.eigenvalues()[k] + centre);
    }
    std::sort(out.zeros.begin(), out.zeros.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

} // namespace ellweyl
