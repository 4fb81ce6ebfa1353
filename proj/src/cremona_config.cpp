#include "ellweyl/cremona_config.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/LU>

namespace ellweyl
{

namespace
{

Real column_norm_product(const CMatrix &m)
{
    Real p = 1;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        p *= m.col(c).norm();
    }
    return p;
}

Real scaled_det(const CMatrix &m)
{
    const Real norms = column_norm_product(m);
    if (norms == 0) {
        return 0;
    }
    return std::abs(m.fullPivLu().determinant()) / norms;
}

// Frame basis M diag(lambda) with M the first n+1 columns and lambda chosen so
// the columns sum to column n+2.
CMatrix frame_basis(const CMatrix &v, Real tol_det, const char *who)
{
    const Eigen::Index dim = v.rows();
    if (v.cols() < dim + 1) {
        throw std::invalid_argument(std::string(who) + ": need at least n+2 points");
    }
    const CMatrix m = v.leftCols(dim);
    if (scaled_det(m) < tol_det) {
        throw DegenerateInput(std::string(who) + ": first n+1 points are dependent");
    }
    const CVector last = v.col(dim);
    const CVector lambda = m.fullPivLu().solve(last);
    const Real scale = last.norm();
    for (Eigen::Index k = 0; k < dim; ++k) {
        if (std::abs(lambda[k]) * m.col(k).norm() < tol_det * scale) {
            throw DegenerateInput(std::string(who) + ": point n+2 lies on a hyperplane through n of the frame points");
        }
    }
    return m * lambda.asDiagonal();
}

void check_shape(const LatticeSignature &sig, const CMatrix &points, const CMatrix &fibers)
{
    if (points.rows() != sig.n + 1 || points.cols() != sig.m) {
        throw std::invalid_argument("point config: expected an (n+1) x m matrix");
    }
    if (fibers.size() != 0 && fibers.rows() != sig.n + 1) {
        throw std::invalid_argument("point config: fiber points need n+1 coordinates");
    }
}

PointConfig permute_columns(const PointConfig &cfg, const std::vector<int> &order)
{
    CMatrix p(cfg.points().rows(), cfg.points().cols());
    for (std::size_t k = 0; k < order.size(); ++k) {
        p.col(static_cast<Eigen::Index>(k)) = cfg.points().col(order[k]);
    }
    return PointConfig(cfg.signature(), std::move(p), cfg.fibers());
}

PointConfig standard_cremona(const PointConfig &cfg)
{
    const int dim = cfg.n() + 1;
    const CMatrix frame = cfg.points().leftCols(dim);
    if (scaled_det(frame) < ConfigTolerances{}.det) {
        throw DegenerateInput("cremona: frame points are dependent");
    }
    const auto lu = frame.fullPivLu();
    CMatrix pts = lu.solve(cfg.points());
    CMatrix fib = cfg.fiber_count() ? CMatrix(lu.solve(cfg.fibers())) : CMatrix(dim, 0);

    auto invert_entries = [&](CMatrix &block, Eigen::Index first, const char *what) {
        for (Eigen::Index c = first; c < block.cols(); ++c) {
            const Real scale = block.col(c).cwiseAbs().maxCoeff();
            for (Eigen::Index r = 0; r < dim; ++r) {
                if (!(std::abs(block(r, c)) > ConfigTolerances{}.det * scale)) {
                    throw DegenerateInput(std::string("cremona: ") + what + " " + std::to_string(c + 1)
                                          + " lies on a coordinate hyperplane of the Cremona frame");
                }
                block(r, c) = 1.0 / block(r, c);
            }
        }
    };
    invert_entries(pts, dim, "point");
    invert_entries(fib, 0, "fiber point");
    pts.leftCols(dim).setIdentity();
    return PointConfig(cfg.signature(), normalize_columns(pts), normalize_columns(fib));
}

} // namespace

// ------------------------------------------------------------- PointConfig

PointConfig::PointConfig(const LatticeSignature &sig, CMatrix points, CMatrix fibers)
    : m_sig(sig), m_points(std::move(points)), m_fibers(std::move(fibers))
{
    if (m_fibers.size() == 0) {
        m_fibers.resize(sig.n + 1, 0);
    }
    check_shape(sig, m_points, m_fibers);
}

// ----------------------------------------------------------- ProjectiveMap

ProjectiveMap::ProjectiveMap(CMatrix matrix) : m_matrix(std::move(matrix))
{
    if (m_matrix.rows() != m_matrix.cols() || m_matrix.rows() < 2) {
        throw std::invalid_argument("projective map: expected a square matrix of size >= 2");
    }
    const Real scale = m_matrix.cwiseAbs().maxCoeff();
    if (!(scale > 0) || scaled_det(m_matrix) < 1e-14) {
        throw DegenerateInput("projective map: singular matrix");
    }
}

ProjectiveMap ProjectiveMap::identity(int n)
{
    return ProjectiveMap(CMatrix::Identity(n + 1, n + 1));
}

ProjectiveMap ProjectiveMap::inverse() const
{
    return ProjectiveMap(m_matrix.fullPivLu().inverse());
}

CMatrix ProjectiveMap::normalized() const
{
    Eigen::Index br = 0, bc = 0;
    m_matrix.cwiseAbs().maxCoeff(&br, &bc);
    // Pick the first entry in row-major order whose modulus matches the max
    // up to rounding, so ties do not depend on Eigen's scan order.
    const Real top = std::abs(m_matrix(br, bc));
    for (Eigen::Index r = 0; r < m_matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < m_matrix.cols(); ++c) {
            if (std::abs(m_matrix(r, c)) >= top * (1 - 1e-12)) {
                CMatrix out = m_matrix / m_matrix(r, c);
                out(r, c) = 1.0;
                return out;
            }
        }
    }
    return m_matrix / m_matrix(br, bc);
}

// ------------------------------------------------------------------ helpers

Real projective_distance(const CVector &a, const CVector &b)
{
    const Real na = a.norm();
    const Real nb = b.norm();
    if (na == 0 || nb == 0) {
        return 1;
    }
    // |a ^ b| / (|a| |b|) avoids the cancellation in sqrt(1 - cos^2).
    Real wedge = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        for (Eigen::Index j = i + 1; j < a.size(); ++j) {
            wedge += std::norm(a[i] * b[j] - a[j] * b[i]);
        }
    }
    return std::min<Real>(1, std::sqrt(wedge) / (na * nb));
}

CVector normalize_max(const CVector &v)
{
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < v.size(); ++k) {
        if (std::abs(v[k]) > std::abs(v[best])) {
            best = k;
        }
    }
    if (v.size() == 0 || v[best] == Complex(0.0, 0.0)) {
        throw DegenerateInput("zero vector has no projective class");
    }
    CVector out = v / v[best];
    out[best] = 1.0;
    return out;
}

CMatrix normalize_columns(const CMatrix &m)
{
    CMatrix out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        out.col(c) = normalize_max(m.col(c));
    }
    return out;
}

// ------------------------------------------------------------- generators

PointConfig swap(int i, int j, const PointConfig &cfg)
{
    if (i < 1 || j > cfg.m() || i >= j) {
        throw std::out_of_range("swap: need 1 <= i < j <= m");
    }
    PointConfig out = cfg;
    out.points().col(i - 1).swap(out.points().col(j - 1));
    return out;
}

PointConfig cremona(const std::vector<int> &indices, const PointConfig &cfg)
{
    const int dim = cfg.n() + 1;
    if (static_cast<int>(indices.size()) != dim) {
        throw std::invalid_argument("cremona: need exactly n+1 indices");
    }
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] < 1 || indices[k] > cfg.m() || (k > 0 && indices[k] <= indices[k - 1])) {
            throw std::out_of_range("cremona: indices must be strictly increasing within 1..m");
        }
    }
    bool standard = true;
    for (int k = 0; k < dim; ++k) {
        standard = standard && indices[static_cast<std::size_t>(k)] == k + 1;
    }
    if (standard) {
        return standard_cremona(cfg);
    }
    // order[k] = old 0-based column placed in slot k.
    std::vector<int> order;
    for (int idx : indices) {
        order.push_back(idx - 1);
    }
    for (int c = 0; c < cfg.m(); ++c) {
        if (std::find(indices.begin(), indices.end(), c + 1) == indices.end()) {
            order.push_back(c);
        }
    }
    PointConfig moved = standard_cremona(permute_columns(cfg, order));
    std::vector<int> back(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        back[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
    }
    return permute_columns(moved, back);
}

PointConfig apply_generator(int letter, const PointConfig &cfg)
{
    if (letter < 0 || letter >= cfg.m()) {
        throw std::out_of_range("generator " + std::to_string(letter) + " outside 0.." + std::to_string(cfg.m() - 1));
    }
    if (letter == 0) {
        return standard_cremona(cfg);
    }
    return swap(letter, letter + 1, cfg);
}

PointConfig apply_word(const WeylWord &w, const PointConfig &cfg)
{
    w.validate(cfg.signature());
    PointConfig cur = cfg;
    for (std::size_t k = 0; k < w.size(); ++k) {
        try {
            cur = apply_generator(w[k], cur);
        } catch (const DegenerateInput &e) {
            throw DegenerateWord(std::string(e.what()) + " (after prefix [" + w.prefix(k).str() + "])", w.prefix(k), w[k]);
        }
    }
    return cur;
}

// ---------------------------------------------------------------- PGL fits

PglFit fit_pgl(const CMatrix &src, const CMatrix &dst, Real tol_det)
{
    if (src.rows() != dst.rows() || src.cols() != dst.cols()) {
        throw std::invalid_argument("solve_pgl: source and target lists differ in shape");
    }
    const CMatrix bs = frame_basis(src, tol_det, "solve_pgl source");
    const CMatrix bd = frame_basis(dst, tol_det, "solve_pgl target");
    ProjectiveMap g(bd * bs.fullPivLu().inverse());
    Real residual = 0;
    for (Eigen::Index k = 0; k < src.cols(); ++k) {
        residual = std::max(residual, projective_distance(g(src.col(k)), dst.col(k)));
    }
    return {ProjectiveMap(g.normalized()), residual};
}

ProjectiveMap solve_pgl(const CMatrix &src, const CMatrix &dst, const ConfigTolerances &tol)
{
    PglFit fit = fit_pgl(src, dst, tol.det);
    if (fit.residual > tol.projective) {
        throw InconsistentCorrespondence("solve_pgl: correspondences disagree with a single projective map (residual "
                                             + std::to_string(fit.residual) + ")",
                                         fit.residual);
    }
    return fit.map;
}

std::pair<PointConfig, ProjectiveMap> normalize_frame(const PointConfig &cfg, Real tol_det)
{
    const int dim = cfg.n() + 1;
    const CMatrix basis = frame_basis(cfg.points(), tol_det, "normalize_frame");
    const CMatrix h = basis.fullPivLu().inverse();

    auto scale = [&](CMatrix block) {
        for (Eigen::Index c = 0; c < block.cols(); ++c) {
            const Real nrm = block.col(c).norm();
            if (std::abs(block(0, c)) > tol_det * nrm) {
                block.col(c) /= block(0, c);
                block(0, c) = 1.0;
            } else {
                block.col(c) = normalize_max(block.col(c));
            }
        }
        return block;
    };
    CMatrix pts = scale(h * cfg.points());
    pts.leftCols(dim).setIdentity();
    pts.col(dim).setOnes();
    CMatrix fib = cfg.fiber_count() ? scale(h * cfg.fibers()) : CMatrix(dim, 0);
    return {PointConfig(cfg.signature(), std::move(pts), std::move(fib)), ProjectiveMap(h)};
}

GenericityReport genericity_check(const PointConfig &cfg, Real tol_det)
{
    const int dim = cfg.n() + 1;
    const int m = cfg.m();
    GenericityReport rep;
    rep.min_scaled_minor = std::numeric_limits<Real>::infinity();
    std::vector<int> pick(static_cast<std::size_t>(dim));
    std::iota(pick.begin(), pick.end(), 0);
    CMatrix sub(dim, dim);
    while (true) {
        for (int k = 0; k < dim; ++k) {
            sub.col(k) = cfg.points().col(pick[static_cast<std::size_t>(k)]);
        }
        const Real d = scaled_det(sub);
        if (d < rep.min_scaled_minor) {
            rep.min_scaled_minor = d;
            rep.worst.clear();
            for (int p : pick) {
                rep.worst.push_back(p + 1);
            }
        }
        // next combination
        int k = dim - 1;
        while (k >= 0 && pick[static_cast<std::size_t>(k)] == m - dim + k) {
            --k;
        }
        if (k < 0) {
            break;
        }
        ++pick[static_cast<std::size_t>(k)];
        for (int j = k + 1; j < dim; ++j) {
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    rep.pass = rep.min_scaled_minor > tol_det;
    return rep;
}

GenericityReport balanced_genericity_check(const PointConfig &cfg, Real tol_det)
{
    CMatrix pts = cfg.points();
    for (Eigen::Index r = 0; r < pts.rows(); ++r) {
        const Real top = pts.row(r).cwiseAbs().maxCoeff();
        if (top > 0) {
            pts.row(r) /= top;
        }
    }
    return genericity_check(PointConfig(cfg.signature(), pts), tol_det);
}

} // namespace ellweyl
