#include "ellweyl/verify_harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace ellweyl
{

namespace
{

CMatrix probe_matrix(const EllipticEmbedding &emb, const std::vector<Complex> &t, Complex shift)
{
    CMatrix x(emb.n() + 1, static_cast<Eigen::Index>(t.size()));
    for (std::size_t r = 0; r < t.size(); ++r) {
        x.col(static_cast<Eigen::Index>(r)) = emb(t[r] - shift);
    }
    return x;
}

std::vector<Complex> draw_probes(Rng &rng, const TorusModulus &mod, int count)
{
    std::vector<Complex> t;
    for (int r = 0; r < count; ++r) {
        t.push_back(random_torus_point(rng, mod));
    }
    return t;
}

CMatrix hcat(const CMatrix &a, const CMatrix &b)
{
    CMatrix out(a.rows(), a.cols() + b.cols());
    out << a, b;
    return out;
}

// Unit vector with entry j made real and positive.
CVector phase_fixed(const CVector &v, Eigen::Index j)
{
    CVector out = v / v.norm();
    const Complex p = out[j];
    if (std::abs(p) > 0) {
        out *= std::conj(p) / std::abs(p);
    }
    return out;
}

// Smallest relative singular value of the linear system y_k x (G x_k) = 0
// over all correspondences; zero iff one projective map fits them all.
Real dlt_residual(const CMatrix &src, const CMatrix &dst)
{
    const Eigen::Index d = src.rows();
    const Eigen::Index pairs = d * (d - 1) / 2;
    CMatrix a = CMatrix::Zero(src.cols() * pairs, d * d);
    Eigen::Index row = 0;
    for (Eigen::Index c = 0; c < src.cols(); ++c) {
        const CVector x = src.col(c).normalized();
        const CVector y = dst.col(c).normalized();
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = i + 1; j < d; ++j) {
                for (Eigen::Index k = 0; k < d; ++k) {
                    a(row, j * d + k) += y[i] * x[k];
                    a(row, i * d + k) -= y[j] * x[k];
                }
                ++row;
            }
        }
    }
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<CMatrix>(a.adjoint() * a, Eigen::EigenvaluesOnly).eigenvalues();
    return std::sqrt(std::max(ev[0], Real(0)) / ev[ev.size() - 1]);
}

// Nelder-Mead over the complex plane.
template <class F>
Complex simplex_minimum(F f, Complex start, Real size, int iterations)
{
    std::array<Complex, 3> x{start, start + size, start + Complex(0.0, size)};
    std::array<Real, 3> y{f(x[0]), f(x[1]), f(x[2])};
    for (int it = 0; it < iterations; ++it) {
        std::array<int, 3> o{0, 1, 2};
        std::sort(o.begin(), o.end(), [&](int a, int b) { return y[static_cast<std::size_t>(a)] < y[static_cast<std::size_t>(b)]; });
        const auto lo = static_cast<std::size_t>(o[0]), mid = static_cast<std::size_t>(o[1]),
                   hi = static_cast<std::size_t>(o[2]);
        if (std::abs(x[hi] - x[lo]) < 1e-14) {
            break;
        }
        const Complex c = (x[lo] + x[mid]) / 2.0;
        const Complex r = c + (c - x[hi]);
        const Real fr = f(r);
        if (fr < y[lo]) {
            const Complex e = c + 2.0 * (c - x[hi]);
            const Real fe = f(e);
            if (fe < fr) {
                x[hi] = e;
                y[hi] = fe;
            } else {
                x[hi] = r;
                y[hi] = fr;
            }
        } else if (fr < y[mid]) {
            x[hi] = r;
            y[hi] = fr;
        } else {
            const Complex k = c + 0.5 * (x[hi] - c);
            const Real fk = f(k);
            if (fk < y[hi]) {
                x[hi] = k;
                y[hi] = fk;
            } else {
                for (std::size_t q : {mid, hi}) {
                    x[q] = x[lo] + 0.5 * (x[q] - x[lo]);
                    y[q] = f(x[q]);
                }
            }
        }
    }
    return x[static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin())];
}

} // namespace

// ---------------------------------------------------------------- verify_word

VerificationReport verify_word(const WeylWord &w, const TorusParams &params, const std::vector<Complex> &probes,
                               const VerifyOptions &opt)
{
    VerificationReport rep;
    rep.word = w;
    rep.sig = params.sig;
    rep.kind = params.kind();
    rep.tau = params.modulus.tau();
    try {
        w.validate(params.sig);
        params.validate();
        if (probes.empty()) {
            throw std::invalid_argument("verify_word: need at least one probe");
        }
        const EllipticEmbedding emb0 = embedding_for(params);
        const PointConfig cfg(params.sig, configuration_matrix(params), probe_matrix(emb0, probes, 0.0));
        const GenericityReport gen = balanced_genericity_check(cfg, opt.tol.det);
        rep.min_minor = gen.min_scaled_minor;
        if (!gen.pass) {
            throw DegenerateInput("starting configuration is not generic");
        }

        const PointConfig geo = apply_word(w, cfg);

        const TorusTrajectory traj = torus_word(w, params);
        rep.shifts = traj.shifts;
        rep.s_total = traj.total;
        const EllipticEmbedding emb1 = embedding_for(traj.params);
        const CMatrix predicted = configuration_matrix(traj.params);
        const CMatrix predicted_probes = probe_matrix(emb1, probes, traj.total);

        const PglFit fit = fit_pgl(geo.points(), predicted, opt.tol.det);
        rep.g = fit.map.matrix();
        rep.column_residual = fit.residual;
        for (Eigen::Index r = 0; r < geo.fiber_count(); ++r) {
            rep.probe_residual =
                std::max(rep.probe_residual, projective_distance(fit.map(geo.fibers().col(r)), predicted_probes.col(r)));
        }
        rep.max_residual = std::max(rep.column_residual, rep.probe_residual);
        rep.pass = rep.max_residual < opt.tol_verify;
    } catch (const std::exception &e) {
        rep.error = e.what();
        rep.pass = false;
    }
    return rep;
}

VerificationReport verify_word(const WeylWord &w, const TorusParams &params, Rng &rng, const VerifyOptions &opt)
{
    return verify_word(w, params, draw_probes(rng, params.modulus, opt.probes), opt);
}

std::vector<VerificationReport> verify_batch(const std::vector<VerifyTask> &tasks, const VerifyOptions &opt,
                                             unsigned threads)
{
    std::vector<VerificationReport> out(tasks.size());
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < tasks.size(); k = next++) {
            out[k] = verify_word(tasks[k].word, tasks[k].params, tasks[k].probes, opt);
        }
    };
    if (threads == 1) {
        worker();
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto &t : pool) {
        t.join();
    }
    return out;
}

Real scalar_mismatch(const CMatrix &a, const CMatrix &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("scalar_mismatch: shapes differ");
    }
    const Real bb = b.squaredNorm();
    const Real top = a.cwiseAbs().maxCoeff();
    if (bb == 0 || top == 0) {
        return std::numeric_limits<Real>::infinity();
    }
    Complex ab{0.0, 0.0};
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        ab += std::conj(b.data()[k]) * a.data()[k];
    }
    const Complex c = ab / bb;
    return (a - c * b).cwiseAbs().maxCoeff() / top;
}

// ------------------------------------------------------------ G closed forms

GDecompositionReport verify_g_decomposition(GCase which, const TorusParams &params, Real tol)
{
    const int n = params.n();
    const int dim = n + 1;
    GDecompositionReport rep;
    rep.which = which;

    const int letter = which == GCase::weierstrass_cremona ? 0 : n + 1;
    if ((which == GCase::weierstrass_cremona) != (params.kind() == EmbeddingKind::weierstrass)) {
        throw std::invalid_argument("verify_g_decomposition: parameters do not match the requested case");
    }
    const PointConfig cfg(params.sig, configuration_matrix(params));
    const PointConfig geo = apply_word(WeylWord{letter}, cfg);
    const TorusTrajectory traj = torus_word(WeylWord{letter}, params);
    const CMatrix predicted = configuration_matrix(traj.params);
    const PglFit fit = fit_pgl(geo.points(), predicted);
    rep.solved = fit.map.matrix();
    rep.fit_residual = fit.residual;

    if (which == GCase::weierstrass_cremona) {
        const CMatrix block = cfg.points().leftCols(dim);
        CVector minors(dim);
        for (int i = 0; i < dim; ++i) {
            CMatrix b = block;
            b.col(i).setZero();
            b(n, i) = 1.0;
            minors[i] = b.determinant();
        }
        rep.g1 = minors.asDiagonal();
        const Complex s = traj.total;
        const CMatrix abar = predicted.leftCols(dim);
        const CVector lambda = abar.fullPivLu().solve(embedding_for(traj.params)(-s));
        rep.g2 = abar * lambda.asDiagonal();
    } else {
        const TorusModulus &mod = params.modulus;
        const Complex eps = *params.eps;
        const auto &u = params.u;
        const Complex un1 = u[static_cast<std::size_t>(n)];
        const Complex un2 = u[static_cast<std::size_t>(n) + 1];
        CVector a(dim);
        for (int i = 0; i < dim; ++i) {
            const Complex ui = u[static_cast<std::size_t>(i)];
            a[i] = theta(un2 - ui - eps, mod) / theta(un2 - ui, mod);
        }
        CMatrix k = CMatrix::Identity(dim, dim);
        CVector d(dim);
        for (int i = 0; i < n; ++i) {
            k(i, n) = -a[i] / a[n];
            d[i] = -1.0 / a[i];
        }
        k(n, n) = 1.0 / a[n];
        d[n] = 1.0;
        rep.g1 = d.asDiagonal() * k;
        CVector g2(dim);
        for (int i = 0; i < n; ++i) {
            const Complex ui = u[static_cast<std::size_t>(i)];
            g2[i] = theta(un2 - ui - eps, mod) / theta(un1 - ui, mod);
        }
        g2[n] = theta(-eps, mod) / theta(un1 - un2, mod);
        rep.g2 = g2.asDiagonal();
    }
    rep.mismatch = scalar_mismatch(rep.solved, rep.g2 * rep.g1);
    rep.pass = rep.mismatch < tol;
    return rep;
}

// -------------------------------------------------------------- prop 3.2

namespace
{

std::vector<TorusPoint> first_zeros(const EllipticEmbedding &emb)
{
    std::vector<Complex> z;
    if (auto known = emb.first_coordinate_zeros()) {
        z = *known;
    } else {
        CVector h = CVector::Zero(emb.n() + 1);
        h[0] = 1.0;
        const SectionZeros found = hyperplane_zeros(emb, h);
        if (std::abs(found.count - (emb.n() + 1)) > 0.01 || static_cast<int>(found.zeros.size()) != emb.n() + 1) {
            throw DegenerateInput("prop32: first coordinate does not have n+1 zeros");
        }
        z = found.zeros;
    }
    std::vector<TorusPoint> out;
    for (Complex c : z) {
        out.emplace_back(c, emb.modulus());
    }
    return out;
}

} // namespace

Prop32Report verify_prop32(const EllipticEmbedding &emb_a, const EllipticEmbedding &emb_b, Rng &rng, int held_out,
                           Real tol)
{
    if (emb_a.n() != emb_b.n() || !(emb_a.modulus() == emb_b.modulus())) {
        throw SignatureMismatch("prop32: embeddings differ in dimension or torus");
    }
    const std::vector<TorusPoint> za = first_zeros(emb_a);
    const std::vector<TorusPoint> zb = first_zeros(emb_b);
    Prop32Report rep;
    rep.a = translation_between(za, zb).value();

    const int count = emb_a.n() + 2 + held_out;
    CMatrix src(emb_a.n() + 1, count), dst(emb_a.n() + 1, count);
    for (int k = 0; k < count; ++k) {
        const Complex u = random_torus_point(rng, emb_a.modulus());
        src.col(k) = emb_a(u);
        dst.col(k) = emb_b(u + rep.a);
    }
    const PglFit fit = fit_pgl(src, dst);
    rep.g = fit.map.matrix();
    rep.residual = fit.residual;
    rep.pass = rep.residual < tol;
    return rep;
}

// ------------------------------------------------------------ shift measure

ShiftMeasurement measure_weierstrass_shift(int letter, const TorusParams &params, const std::vector<Complex> &probes)
{
    if (params.kind() != EmbeddingKind::weierstrass) {
        throw std::invalid_argument("measure_weierstrass_shift: needs Weierstrass parameters");
    }
    const TorusModulus &mod = params.modulus;
    const int n = params.n();
    const EllipticEmbedding emb = embedding_for(params);
    const PointConfig cfg(params.sig, configuration_matrix(params), probe_matrix(emb, probes, 0.0));
    const PointConfig geo = apply_word(WeylWord{letter}, cfg);
    const CMatrix geo_all = hcat(geo.points(), geo.fibers());
    const PointPrediction pred = predict_points(word_pullback(WeylWord{letter}, params.sig), params);

    auto predicted = [&](Complex s) {
        CMatrix p(n + 1, geo_all.cols());
        for (int i = 0; i < params.m(); ++i) {
            p.col(i) = emb(pred.u[static_cast<std::size_t>(i)] - s);
        }
        for (std::size_t r = 0; r < probes.size(); ++r) {
            p.col(params.m() + static_cast<Eigen::Index>(r)) = emb(probes[r] - s);
        }
        return p;
    };
    auto fit_residual = [&](Complex s) {
        try {
            return fit_pgl(geo_all, predicted(s)).residual;
        } catch (const DegenerateInput &) {
            return Real(1);
        }
    };

    ShiftMeasurement out;
    out.formula = weierstrass_step(letter, params).s;
    out.residual_formula = fit_residual(out.formula);

    auto dlt = [&](Complex s) {
        try {
            return dlt_residual(geo_all, predicted(s));
        } catch (const DegenerateInput &) {
            return Real(1);
        }
    };

    // Coarse grid over one cell.
    const int grid = 24;
    std::vector<std::pair<Real, Complex>> cells;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const Complex c = mod.from_coordinates((i + 0.5) / grid, (j + 0.5) / grid);
            cells.emplace_back(dlt(c), c);
        }
    }
    const std::size_t starts = 8;
    std::partial_sort(cells.begin(), cells.begin() + starts, cells.end(),
                      [](const auto &a, const auto &b) { return a.first < b.first; });

    // Levenberg-damped Gauss-Newton on phase fixed unit vectors of the held
    // out points, from the best few cells.
    const Eigen::Index first = n + 2;
    const Eigen::Index count = geo_all.cols() - first;
    auto refine = [&](Complex start) {
        std::vector<Eigen::Index> anchor(static_cast<std::size_t>(count));
        const CMatrix p0 = predicted(start);
        for (Eigen::Index k = 0; k < count; ++k) {
            p0.col(first + k).cwiseAbs().maxCoeff(&anchor[static_cast<std::size_t>(k)]);
        }
        auto residual = [&](Complex z) {
            const CMatrix p = predicted(z);
            const PglFit fit = fit_pgl(geo_all, p);
            Eigen::VectorXd r(2 * count * (n + 1));
            Eigen::Index pos = 0;
            for (Eigen::Index k = 0; k < count; ++k) {
                const Eigen::Index j = anchor[static_cast<std::size_t>(k)];
                const CVector d =
                    phase_fixed(fit.map(geo_all.col(first + k)), j) - phase_fixed(p.col(first + k), j);
                for (Eigen::Index c = 0; c < d.size(); ++c) {
                    r[pos++] = d[c].real();
                    r[pos++] = d[c].imag();
                }
            }
            return r;
        };
        Complex z = start;
        Real mu = 1e-6;
        Eigen::VectorXd r = residual(z);
        for (int iter = 0; iter < 60; ++iter) {
            const Real h = 1e-7;
            Eigen::MatrixXd jac(r.size(), 2);
            jac.col(0) = (residual(z + h) - residual(z - h)) / (2 * h);
            jac.col(1) = (residual(z + Complex(0.0, h)) - residual(z - Complex(0.0, h))) / (2 * h);
            const Eigen::Matrix2d normal = jac.transpose() * jac + mu * Eigen::Matrix2d::Identity();
            const Eigen::Vector2d step = normal.ldlt().solve(-jac.transpose() * r);
            const Complex trial = z + Complex(step[0], step[1]);
            const Eigen::VectorXd rt = residual(trial);
            if (rt.norm() <= r.norm()) {
                z = trial;
                r = rt;
                mu = std::max(mu / 10, 1e-15);
                if (step.norm() < 1e-15) {
                    break;
                }
            } else {
                mu *= 10;
                if (mu > 1e6) {
                    break;
                }
            }
        }
        return z;
    };
    Complex s = cells.front().second;
    Real s_res = std::numeric_limits<Real>::infinity();
    for (std::size_t k = 0; k < starts && s_res > 1e-12; ++k) {
        const Complex near =
            simplex_minimum([&](Complex c) { return dlt(c) * dlt(c); }, cells[k].second, 0.5 / grid, 200);
        Complex z;
        try {
            z = refine(near);
        } catch (const DegenerateInput &) {
            continue;
        }
        const Real res = fit_residual(z);
        if (res < s_res) {
            s_res = res;
            s = z;
        }
    }
    out.measured = mod.reduce(s);
    out.residual_measured = fit_residual(s);
    const Real n1 = n + 1;
    out.torsion_defect = mod.lattice_distance(n1 * (out.measured - out.formula)) / n1;
    return out;
}

} // namespace ellweyl
