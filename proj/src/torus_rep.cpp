#include "ellweyl/torus_rep.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ellweyl/cremona_config.hpp"

namespace ellweyl
{

namespace
{

Real to_real(const Integer &x)
{
    return x.convert_to<Real>();
}

Complex kmnoy_v(const TorusParams &p)
{
    const auto k = static_cast<std::ptrdiff_t>(p.n() + 1);
    const Complex sum = std::accumulate(p.u.begin(), p.u.begin() + k, *p.eps);
    return sum / static_cast<Real>(p.n() + 1);
}

void check_letter(int letter, const TorusParams &p)
{
    if (letter < 0 || letter >= p.m()) {
        throw std::out_of_range("generator " + std::to_string(letter) + " outside 0.." + std::to_string(p.m() - 1));
    }
}

} // namespace

// ------------------------------------------------------------- TorusParams

TorusParams TorusParams::weierstrass(const LatticeSignature &sig, const TorusModulus &mod, std::vector<Complex> u)
{
    TorusParams p{sig, mod, std::move(u), Complex(0.0, 0.0), std::nullopt};
    if (static_cast<int>(p.u.size()) != sig.m) {
        throw std::invalid_argument("torus params: expected m values u_i");
    }
    return p;
}

TorusParams TorusParams::kmnoy(const LatticeSignature &sig, const TorusModulus &mod, std::vector<Complex> u, Complex eps)
{
    TorusParams p{sig, mod, std::move(u), Complex(0.0, 0.0), eps};
    if (static_cast<int>(p.u.size()) != sig.m) {
        throw std::invalid_argument("torus params: expected m values u_i");
    }
    p.v = kmnoy_v(p);
    return p;
}

std::vector<TorusPoint> TorusParams::points() const
{
    std::vector<TorusPoint> out;
    out.reserve(u.size());
    for (Complex z : u) {
        out.emplace_back(z, modulus);
    }
    return out;
}

void TorusParams::validate(Real tol) const
{
    if (static_cast<int>(u.size()) != sig.m) {
        throw std::invalid_argument("torus params: expected m values u_i");
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = i + 1; j < u.size(); ++j) {
            if (modulus.lattice_distance(u[i] - u[j]) < tol) {
                throw DegenerateInput("torus params: u_" + std::to_string(i + 1) + " and u_" + std::to_string(j + 1)
                                      + " coincide on the torus");
            }
        }
    }
}

EllipticEmbedding embedding_for(const TorusParams &params)
{
    if (params.kind() == EmbeddingKind::weierstrass) {
        return EllipticEmbedding::weierstrass(params.n(), params.modulus);
    }
    std::vector<Complex> base(params.u.begin(), params.u.begin() + params.n() + 1);
    return EllipticEmbedding::kmnoy(std::move(base), *params.eps, params.modulus);
}

CMatrix configuration_matrix(const TorusParams &params)
{
    const EllipticEmbedding emb = embedding_for(params);
    CMatrix a(params.n() + 1, params.m());
    for (int i = 0; i < params.m(); ++i) {
        a.col(i) = emb(params.u[static_cast<std::size_t>(i)]);
    }
    return a;
}

// -------------------------------------------------------------- prediction

PointPrediction predict_points(const ActionMatrix &pullback, const TorusParams &params)
{
    require_same_signature(pullback.signature(), params.sig);
    if (static_cast<int>(params.u.size()) != params.m()) {
        throw std::invalid_argument("predict_points: expected m values u_i");
    }
    const Real n1 = params.n() + 1;
    auto image = [&](std::size_t r) {
        Complex z = n1 * to_real(pullback(0, r)) * params.v;
        for (std::size_t j = 1; j <= params.u.size(); ++j) {
            z += to_real(pullback(j, r)) * params.u[j - 1];
        }
        return z;
    };
    PointPrediction out;
    out.v_times = image(0);
    for (std::size_t i = 1; i <= params.u.size(); ++i) {
        out.u.push_back(image(i));
    }
    return out;
}

Complex shift_s(const ActionMatrix &pullback, const TorusParams &params)
{
    return predict_points(pullback, params).v_times - static_cast<Real>(params.n() + 1) * params.v;
}

// ------------------------------------------------------------------- steps

TorusParams kmnoy_step(int letter, const TorusParams &state)
{
    if (!state.eps) {
        throw std::invalid_argument("kmnoy_step: parameters carry no eps");
    }
    check_letter(letter, state);
    TorusParams out = state;
    const int n = state.n();
    if (letter == 0) {
        for (int i = 0; i <= n; ++i) {
            out.u[static_cast<std::size_t>(i)] += *state.eps;
        }
        out.eps = -*state.eps;
    } else {
        const auto k = static_cast<std::size_t>(letter);
        std::swap(out.u[k - 1], out.u[k]);
        if (letter == n + 1) {
            out.eps = *state.eps + state.u[k - 1] - state.u[k];
        }
    }
    out.v = kmnoy_v(out);
    return out;
}

TorusParams kmnoy_word(const WeylWord &w, const TorusParams &state)
{
    w.validate(state.sig);
    TorusParams cur = state;
    for (int letter : w.letters()) {
        cur = kmnoy_step(letter, cur);
    }
    return cur;
}

WeierstrassStep weierstrass_step(int letter, const TorusParams &params)
{
    if (params.eps) {
        throw std::invalid_argument("weierstrass_step: parameters belong to a KMNOY embedding");
    }
    check_letter(letter, params);
    const PointPrediction pred = predict_points(word_pullback(WeylWord{letter}, params.sig), params);
    Complex s{0.0, 0.0};
    if (letter == 0) {
        const int n = params.n();
        const Complex sum = std::accumulate(params.u.begin(), params.u.begin() + n + 1, Complex(0.0, 0.0));
        s = -static_cast<Real>(n - 1) / static_cast<Real>(n + 1) * sum;
    }
    TorusParams out = params;
    for (std::size_t i = 0; i < out.u.size(); ++i) {
        out.u[i] = pred.u[i] - s;
    }
    out.v = 0.0;
    return {std::move(out), s};
}

TorusStep torus_step(int letter, const TorusParams &params)
{
    if (params.kind() == EmbeddingKind::kmnoy) {
        return {kmnoy_step(letter, params), Complex(0.0, 0.0)};
    }
    WeierstrassStep st = weierstrass_step(letter, params);
    return {std::move(st.params), st.s};
}

TorusTrajectory torus_word(const WeylWord &w, const TorusParams &params)
{
    w.validate(params.sig);
    TorusTrajectory out{params, {}, Complex(0.0, 0.0)};
    for (int letter : w.letters()) {
        TorusStep st = torus_step(letter, out.params);
        out.params = std::move(st.params);
        out.shifts.push_back(st.s);
        out.total += st.s;
    }
    return out;
}

Real params_distance(const TorusParams &a, const TorusParams &b)
{
    require_same_signature(a.sig, b.sig);
    if (!(a.modulus == b.modulus)) {
        throw SignatureMismatch("params_distance: different tori");
    }
    if (a.eps.has_value() != b.eps.has_value()) {
        throw std::invalid_argument("params_distance: different embedding kinds");
    }
    const TorusModulus &mod = a.modulus;
    Real d = mod.lattice_distance(a.v - b.v);
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        d = std::max(d, mod.lattice_distance(a.u[i] - b.u[i]));
    }
    if (a.eps) {
        d = std::max(d, mod.lattice_distance(*a.eps - *b.eps));
    }
    return d;
}

// ------------------------------------------------------------------ random

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Complex random_torus_point(Rng &rng, const TorusModulus &mod)
{
    const Real a = rng.uniform();
    const Real b = rng.uniform();
    return mod.from_coordinates(a, b);
}

TorusParams random_params(EmbeddingKind kind, const LatticeSignature &sig, const TorusModulus &mod, Rng &rng,
                          Real separation, Real min_minor)
{
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<Complex> u;
        for (int i = 0; i < sig.m; ++i) {
            u.push_back(random_torus_point(rng, mod));
        }
        std::vector<Complex> special;
        std::optional<Complex> eps;
        if (kind == EmbeddingKind::kmnoy) {
            eps = mod.reduce_centered(random_torus_point(rng, mod));
            special.push_back(*eps);
            special.push_back(u[0] + *eps);
        } else {
            special.push_back(0.0);
        }
        bool ok = true;
        for (std::size_t i = 0; i < u.size() && ok; ++i) {
            for (std::size_t j = i + 1; j < u.size() && ok; ++j) {
                ok = mod.lattice_distance(u[i] - u[j]) > separation;
            }
            for (std::size_t k = 0; k < special.size() && ok; ++k) {
                ok = mod.lattice_distance(u[i] - special[k]) > separation;
            }
        }
        if (eps) {
            ok = ok && mod.lattice_distance(*eps) > separation;
        }
        if (!ok) {
            continue;
        }
        TorusParams p = kind == EmbeddingKind::kmnoy ? TorusParams::kmnoy(sig, mod, u, *eps)
                                                     : TorusParams::weierstrass(sig, mod, u);
        if (balanced_genericity_check(PointConfig(sig, configuration_matrix(p)), min_minor).pass) {
            return p;
        }
    }
    throw DegenerateInput("random_params: no generic configuration found");
}

} // namespace ellweyl
