#pragma once
//
// Interchange formats: JSON forms for index sets, weights, algebra specs and
// frames; CSV for matrices and rank-four tensors. Complex CSV cells are
// written "re+imj" with %.17g parts so values round-trip bit-exactly.
//

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "frametensor/algebra.hpp"
#include "frametensor/core.hpp"
#include "frametensor/frame.hpp"
#include "frametensor/lattice.hpp"
#include "frametensor/tensor4.hpp"

namespace frametensor {

using json = nlohmann::json;

// --- scalars ---------------------------------------------------------------

inline std::string format_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_complex(cplx v)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gj", v.real(), v.imag());
    return buf;
}

inline double parse_real(std::string_view text)
{
    // from_chars rejects the explicit plus sign that "%+.17g" emits
    std::string_view body = text;
    if (!body.empty() && body.front() == '+')
        body.remove_prefix(1);
    double      value  = 0.0;
    const char* first  = body.data();
    const char* last   = body.data() + body.size();
    auto [ptr, ec]     = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || body.empty())
        throw std::invalid_argument("parse_real: malformed number '" + std::string(text) + "'");
    return value;
}

// Accepts "re+imj", "re-imj", a bare real "re", or a bare imaginary "imj".
inline cplx parse_complex(std::string_view cell)
{
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
        cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
        cell.remove_suffix(1);
    if (cell.empty())
        throw std::invalid_argument("parse_complex: empty cell");

    if (cell.back() != 'j' && cell.back() != 'J')
        return cplx(parse_real(cell), 0.0);

    std::string_view body = cell.substr(0, cell.size() - 1);
    // Split at the last +/- that does not follow an exponent marker and is
    // not the leading sign.
    std::size_t split = std::string_view::npos;
    for (std::size_t t = body.size(); t-- > 1;) {
        const char c = body[t];
        if ((c == '+' || c == '-') && body[t - 1] != 'e' && body[t - 1] != 'E') {
            split = t;
            break;
        }
    }
    if (split == std::string_view::npos)
        return cplx(0.0, parse_real(body));
    return cplx(parse_real(body.substr(0, split)), parse_real(body.substr(split)));
}

inline json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline cplx complex_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("complex entries must be [re, im] pairs");
    return cplx(j.at(0).get<double>(), j.at(1).get<double>());
}

// --- index sets and weights ------------------------------------------------

inline json index_set_to_json(const IndexSet& index)
{
    json points = json::array();
    for (const Point& p : index.points())
        points.push_back(p);
    return json{{"dim", index.dim()}, {"points", std::move(points)}};
}

inline IndexSet index_set_from_json(const json& j)
{
    const int          dim = j.at("dim").get<int>();
    std::vector<Point> points;
    for (const json& p : j.at("points"))
        points.push_back(p.get<Point>());
    return IndexSet(dim, std::move(points));
}

inline json weight_to_json(const Weight& w)
{
    switch (w.kind()) {
    case Weight::Kind::polynomial:
        return json{{"kind", "polynomial"}, {"s", w.s()}};
    case Weight::Kind::exponential_sub:
        return json{{"kind", "exponential_sub"}, {"b", w.b()}, {"gamma", w.gamma()}};
    case Weight::Kind::table:
    default: {
        json extents = json::array();
        for (const auto& [lo, hi] : w.table_extents())
            extents.push_back(json::array({lo, hi}));
        return json{{"kind", "table"},
                    {"dim", w.table_dim()},
                    {"extents", std::move(extents)},
                    {"values", w.table_values()}};
    }
    }
}

inline Weight weight_from_json(const json& j)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "polynomial")
        return Weight::polynomial(j.at("s").get<double>());
    if (kind == "exponential_sub")
        return Weight::exponential_sub(j.at("b").get<double>(), j.at("gamma").get<double>());
    if (kind == "table") {
        std::vector<std::pair<std::int64_t, std::int64_t>> extents;
        for (const json& e : j.at("extents"))
            extents.emplace_back(e.at(0).get<std::int64_t>(), e.at(1).get<std::int64_t>());
        return Weight::table(j.at("dim").get<int>(), std::move(extents),
                             j.at("values").get<std::vector<double>>());
    }
    throw std::invalid_argument("weight kind must be polynomial, exponential_sub or table");
}

// --- algebra specs ----------------------------------------------------------

inline json algebra_spec_to_json(const AlgebraSpec& spec)
{
    switch (spec.family) {
    case AlgebraSpec::Family::jaffard:
        return json{{"family", "jaffard"}, {"s", spec.s}};
    case AlgebraSpec::Family::schur:
        if (std::isinf(spec.p))
            return json{{"family", "schur"}, {"p", "inf"}, {"delta", spec.delta}};
        return json{{"family", "schur"}, {"p", spec.p}, {"delta", spec.delta}};
    case AlgebraSpec::Family::sjostrand:
    default:
        return json{{"family", "sjostrand"}, {"weight", weight_to_json(*spec.theta)}};
    }
}

inline AlgebraSpec algebra_spec_from_json(const json& j)
{
    const std::string family = j.at("family").get<std::string>();
    if (family == "jaffard")
        return AlgebraSpec::jaffard(j.at("s").get<double>());
    if (family == "schur") {
        const json& pj = j.at("p");
        const double p = pj.is_string()
                             ? (pj.get<std::string>() == "inf"
                                    ? std::numeric_limits<double>::infinity()
                                    : throw std::invalid_argument("schur p must be a number or \"inf\""))
                             : pj.get<double>();
        return AlgebraSpec::schur(p, j.at("delta").get<double>());
    }
    if (family == "sjostrand")
        return AlgebraSpec::sjostrand(weight_from_json(j.at("weight")));
    throw std::invalid_argument("algebra family must be jaffard, schur or sjostrand");
}

// --- matrices ---------------------------------------------------------------

inline json matrix_to_json(const Matrix& m)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j)
{
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("matrix JSON must be a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    Matrix     m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw std::invalid_argument("matrix JSON rows must have equal length");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = complex_from_json(row.at(static_cast<std::size_t>(c)));
    }
    return m;
}

inline void write_matrix_csv(std::ostream& out, const Matrix& m)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0)
                out << ',';
            out << format_complex(m(r, c));
        }
        out << '\n';
    }
}

inline std::vector<cplx> parse_csv_row(const std::string& line)
{
    std::vector<cplx> cells;
    std::size_t       start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        const std::string_view cell =
            std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                            : comma - start);
        cells.push_back(parse_complex(cell));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return cells;
}

inline Matrix read_matrix_csv(std::istream& in)
{
    std::vector<std::vector<cplx>> rows;
    std::string                    line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r")
            continue;
        rows.push_back(parse_csv_row(line));
    }
    if (rows.empty())
        throw std::invalid_argument("matrix CSV is empty");
    const std::size_t cols = rows.front().size();
    Matrix            m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw std::invalid_argument("matrix CSV rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    return m;
}

// --- frames -----------------------------------------------------------------

inline json frame_to_json(const Frame& f)
{
    json vectors = json::array();
    for (Eigen::Index c = 0; c < f.vectors.cols(); ++c) {
        json v = json::array();
        for (Eigen::Index t = 0; t < f.vectors.rows(); ++t)
            v.push_back(complex_to_json(f.vectors(t, c)));
        vectors.push_back(std::move(v));
    }
    return json{{"space_dim", f.space_dim},
                {"index", index_set_to_json(f.index)},
                {"vectors", std::move(vectors)}};
}

inline Frame frame_from_json(const json& j)
{
    const auto n     = j.at("space_dim").get<std::size_t>();
    IndexSet   index = index_set_from_json(j.at("index"));
    const json& vecs = j.at("vectors");
    if (!vecs.is_array() || vecs.size() != index.size())
        throw std::invalid_argument("frame JSON: one vector per index point required");
    Matrix v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(vecs.size()));
    for (std::size_t c = 0; c < vecs.size(); ++c) {
        const json& col = vecs.at(c);
        if (static_cast<std::size_t>(col.size()) != n)
            throw std::invalid_argument("frame JSON: vectors must have space_dim entries");
        for (std::size_t t = 0; t < n; ++t)
            v(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) =
                complex_from_json(col.at(t));
    }
    return Frame(n, std::move(index), std::move(v));
}

inline json hs_frame_to_json(const HSFrame& f)
{
    json ops = json::array();
    for (const Matrix& o : f.operators)
        ops.push_back(matrix_to_json(o));
    json j{{"dims", json::array({f.dim1, f.dim2})},
           {"index", index_set_to_json(f.index)},
           {"operators", std::move(ops)}};
    if (f.has_product_structure()) {
        j["outer"] = index_set_to_json(*f.outer);
        j["inner"] = index_set_to_json(*f.inner);
    }
    return j;
}

inline HSFrame hs_frame_from_json(const json& j)
{
    const auto          n1 = j.at("dims").at(0).get<std::size_t>();
    const auto          n2 = j.at("dims").at(1).get<std::size_t>();
    std::vector<Matrix> ops;
    for (const json& o : j.at("operators"))
        ops.push_back(matrix_from_json(o));
    if (j.contains("outer") && j.contains("inner"))
        return HSFrame(n1, n2, index_set_from_json(j.at("outer")),
                       index_set_from_json(j.at("inner")), std::move(ops));
    return HSFrame(n1, n2, index_set_from_json(j.at("index")), std::move(ops));
}

// --- rank-four tensors -------------------------------------------------------
//
// File layout: one compact JSON header line {"inner":…, "outer":…}, then
// |I1|·|I2|² CSV lines of |I1| cells each; read left to right, top to bottom,
// the entries appear in canonical order (i slowest, then k, then l, then j).

inline void write_tensor4(std::ostream& out, const Tensor4& t)
{
    out << json{{"outer", index_set_to_json(t.outer())}, {"inner", index_set_to_json(t.inner())}}
               .dump()
        << '\n';
    for (std::size_t i = 0; i < t.n1(); ++i)
        for (std::size_t k = 0; k < t.n2(); ++k)
            for (std::size_t l = 0; l < t.n2(); ++l) {
                for (std::size_t j = 0; j < t.n1(); ++j) {
                    if (j > 0)
                        out << ',';
                    out << format_complex(t.at(i, k, l, j));
                }
                out << '\n';
            }
}

inline Tensor4 read_tensor4(std::istream& in)
{
    std::string header;
    if (!std::getline(in, header))
        throw std::invalid_argument("tensor file: missing header line");
    const json h     = json::parse(header);
    IndexSet   outer = index_set_from_json(h.at("outer"));
    IndexSet   inner = index_set_from_json(h.at("inner"));

    Tensor4     t(outer, inner);
    std::string line;
    std::size_t flat = 0;
    const std::size_t total = t.entry_count();
    auto        dst  = t.data();
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r")
            continue;
        for (const cplx v : parse_csv_row(line)) {
            if (flat >= total)
                throw std::invalid_argument("tensor file: more entries than the index sets allow");
            dst[flat++] = v;
        }
    }
    if (flat != total)
        throw std::invalid_argument("tensor file: entry count does not match the index sets");
    return t;
}

}  // namespace frametensor
