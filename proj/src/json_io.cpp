#include "ellweyl/json_io.hpp"

#include <cctype>

namespace ellweyl
{

namespace
{

Real parse_real(const std::string &text)
{
    std::size_t used = 0;
    Real x = 0;
    try {
        x = std::stod(text, &used);
    } catch (const std::exception &) {
        throw InputError("not a number: '" + text + "'");
    }
    if (used != text.size()) {
        throw InputError("not a number: '" + text + "'");
    }
    return x;
}

// Coefficient of i: "", "+", "-" stand for 1, 1, -1.
Real parse_imag(const std::string &text)
{
    if (text.empty() || text == "+") {
        return 1;
    }
    if (text == "-") {
        return -1;
    }
    return parse_real(text);
}

const json &field(const json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw InputError(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

int int_field(const json &j, const char *key)
{
    const json &v = field(j, key);
    if (!v.is_number_integer()) {
        throw InputError(std::string("field '") + key + "' must be an integer");
    }
    return v.get<int>();
}

LatticeSignature signature_from(const json &j)
{
    try {
        return LatticeSignature(int_field(j, "n"), int_field(j, "m"));
    } catch (const InputError &) {
        throw;
    } catch (const std::exception &e) {
        throw InputError(e.what());
    }
}

} // namespace

Complex parse_complex_text(const std::string &raw)
{
    std::string text;
    for (char c : raw) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            text += c;
        }
    }
    if (text.empty()) {
        throw InputError("empty complex number");
    }
    const char last = text.back();
    if (last != 'i' && last != 'j') {
        return {parse_real(text), 0.0};
    }
    text.pop_back();
    // Split at the last sign that is not an exponent sign or the leading one.
    std::size_t split = std::string::npos;
    for (std::size_t k = text.size(); k-- > 1;) {
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) {
        return {0.0, parse_imag(text)};
    }
    return {parse_real(text.substr(0, split)), parse_imag(text.substr(split))};
}

Complex parse_complex(const json &j)
{
    if (j.is_number()) {
        return {j.get<Real>(), 0.0};
    }
    if (j.is_string()) {
        return parse_complex_text(j.get<std::string>());
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<Real>(), j[1].get<Real>()};
    }
    throw InputError("complex numbers are [re, im], a number or a string like \"1+2i\"; got " + j.dump());
}

json complex_json(Complex z)
{
    return json::array({z.real(), z.imag()});
}

json complex_list_json(const std::vector<Complex> &zs)
{
    json out = json::array();
    for (Complex z : zs) {
        out.push_back(complex_json(z));
    }
    return out;
}

CMatrix matrix_from_columns(const json &j, Eigen::Index rows)
{
    if (!j.is_array()) {
        throw InputError("matrix must be a list of columns");
    }
    CMatrix m(rows, static_cast<Eigen::Index>(j.size()));
    for (std::size_t c = 0; c < j.size(); ++c) {
        const json &col = j[c];
        if (!col.is_array() || static_cast<Eigen::Index>(col.size()) != rows) {
            throw InputError("column " + std::to_string(c + 1) + " must have " + std::to_string(rows) + " entries");
        }
        for (std::size_t r = 0; r < col.size(); ++r) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(col[r]);
        }
    }
    return m;
}

json columns_json(const CMatrix &m)
{
    json out = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        json col = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            col.push_back(complex_json(m(r, c)));
        }
        out.push_back(col);
    }
    return out;
}

json rows_json(const CMatrix &m)
{
    return columns_json(m.transpose());
}

std::string kind_name(EmbeddingKind kind)
{
    return kind == EmbeddingKind::kmnoy ? "kmnoy" : "weierstrass";
}

EmbeddingKind parse_kind(const std::string &name)
{
    if (name == "kmnoy") {
        return EmbeddingKind::kmnoy;
    }
    if (name == "weierstrass") {
        return EmbeddingKind::weierstrass;
    }
    throw InputError("embedding must be \"kmnoy\" or \"weierstrass\", got \"" + name + "\"");
}

TorusParams params_from_json(const json &j, Rng *rng)
{
    const LatticeSignature sig = signature_from(j);
    Complex tau = parse_complex(field(j, "tau"));
    std::optional<TorusModulus> mod;
    try {
        mod.emplace(tau);
    } catch (const std::exception &e) {
        throw InputError(e.what());
    }
    const json &kind_field = field(j, "embedding");
    if (!kind_field.is_string()) {
        throw InputError("field 'embedding' must be a string");
    }
    const EmbeddingKind kind = parse_kind(kind_field.get<std::string>());
    if (kind == EmbeddingKind::weierstrass && sig.n > 5) {
        throw InputError("weierstrass embedding supports n <= 5");
    }
    if (rng) {
        return random_params(kind, sig, *mod, *rng);
    }
    const json &uj = field(j, "u");
    if (!uj.is_array() || static_cast<int>(uj.size()) != sig.m) {
        throw InputError("field 'u' must list m complex numbers");
    }
    std::vector<Complex> u;
    for (const json &z : uj) {
        u.push_back(parse_complex(z));
    }
    if (kind == EmbeddingKind::kmnoy) {
        return TorusParams::kmnoy(sig, *mod, std::move(u), parse_complex(field(j, "eps")));
    }
    return TorusParams::weierstrass(sig, *mod, std::move(u));
}

json params_json(const TorusParams &p)
{
    json out;
    out["n"] = p.n();
    out["m"] = p.m();
    out["tau"] = complex_json(p.modulus.tau());
    out["embedding"] = kind_name(p.kind());
    if (p.eps) {
        out["eps"] = complex_json(*p.eps);
    }
    out["u"] = complex_list_json(p.u);
    out["v"] = complex_json(p.v);
    return out;
}

PointConfig config_from_json(const json &j)
{
    const LatticeSignature sig = signature_from(j);
    CMatrix pts = matrix_from_columns(field(j, "points"), sig.n + 1);
    if (pts.cols() != sig.m) {
        throw InputError("field 'points' must list m columns");
    }
    CMatrix fib = j.contains("fibers") ? matrix_from_columns(j.at("fibers"), sig.n + 1) : CMatrix(sig.n + 1, 0);
    return PointConfig(sig, std::move(pts), std::move(fib));
}

json config_json(const PointConfig &cfg)
{
    json out;
    out["n"] = cfg.n();
    out["m"] = cfg.m();
    out["points"] = columns_json(cfg.points());
    out["fibers"] = columns_json(cfg.fibers());
    return out;
}

json integer_list_json(const std::vector<Integer> &v)
{
    json out = json::array();
    for (const Integer &x : v) {
        if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max()) {
            out.push_back(x.convert_to<long long>());
        } else {
            out.push_back(x.str());
        }
    }
    return out;
}

json report_json(const VerificationReport &r)
{
    json out;
    out["word"] = r.word.letters();
    out["n"] = r.sig.n;
    out["m"] = r.sig.m;
    out["embedding"] = kind_name(r.kind);
    out["tau"] = complex_json(r.tau);
    out["s"] = complex_list_json(r.shifts);
    out["s_total"] = complex_json(r.s_total);
    out["G"] = r.g.size() ? rows_json(r.g) : json::array();
    out["min_scaled_minor"] = r.min_minor;
    out["column_residual"] = r.column_residual;
    out["probe_residual"] = r.probe_residual;
    out["max_residual"] = r.max_residual;
    out["pass"] = r.pass;
    if (!r.error.empty()) {
        out["error"] = r.error;
    }
    if (r.seconds) {
        out["seconds"] = *r.seconds;
    }
    return out;
}

json gdecomp_json(const GDecompositionReport &r)
{
    json out;
    out["case"] = r.which == GCase::weierstrass_cremona ? "weierstrass_cremona" : "kmnoy_r_n1_n2";
    out["G1"] = rows_json(r.g1);
    out["G2"] = rows_json(r.g2);
    out["G_solved"] = rows_json(r.solved);
    out["fit_residual"] = r.fit_residual;
    out["mismatch"] = r.mismatch;
    out["pass"] = r.pass;
    return out;
}

json prop32_json(const Prop32Report &r)
{
    json out;
    out["a"] = complex_json(r.a);
    out["G"] = rows_json(r.g);
    out["residual"] = r.residual;
    out["pass"] = r.pass;
    return out;
}

json shift_json(const ShiftMeasurement &r)
{
    json out;
    out["s_measured"] = complex_json(r.measured);
    out["s_formula"] = complex_json(r.formula);
    out["residual_measured"] = r.residual_measured;
    out["residual_formula"] = r.residual_formula;
    out["torsion_defect"] = r.torsion_defect;
    return out;
}

} // namespace ellweyl
