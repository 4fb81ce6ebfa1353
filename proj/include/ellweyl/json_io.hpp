#ifndef ELLWEYL_JSON_IO_HPP
#define ELLWEYL_JSON_IO_HPP

// JSON forms of the domain objects. Complex numbers are [re, im] pairs (input
// also accepts plain numbers and strings such as "0.31+1.17i"); configuration
// matrices are lists of columns, projective maps lists of rows.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ellweyl/cremona_config.hpp"
#include "ellweyl/torus_rep.hpp"
#include "ellweyl/verify_harness.hpp"

namespace ellweyl
{

using json = nlohmann::json;

// Malformed input (as opposed to well formed input describing a degenerate
// object).
class InputError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

Complex parse_complex(const json &j);
Complex parse_complex_text(const std::string &text);
json complex_json(Complex z);
json complex_list_json(const std::vector<Complex> &zs);

CMatrix matrix_from_columns(const json &j, Eigen::Index rows);
json columns_json(const CMatrix &m);
json rows_json(const CMatrix &m);

std::string kind_name(EmbeddingKind kind);
EmbeddingKind parse_kind(const std::string &name);

// {"tau", "n", "m", "embedding", "u", "eps"}. With rng given, u (and eps)
// are drawn by random_params instead of read.
TorusParams params_from_json(const json &j, Rng *rng = nullptr);
json params_json(const TorusParams &p);

// {"n", "m", "points": columns, "fibers": columns (optional)}.
PointConfig config_from_json(const json &j);
json config_json(const PointConfig &cfg);

json integer_list_json(const std::vector<Integer> &v);
json report_json(const VerificationReport &r);
json gdecomp_json(const GDecompositionReport &r);
json prop32_json(const Prop32Report &r);
json shift_json(const ShiftMeasurement &r);

} // namespace ellweyl

#endif
