#include "generator.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace toesplit {

Symmetry symmetry_from_string(const std::string& name)
{
    if (name == "general")
        return Symmetry::general;
    if (name == "symmetric")
        return Symmetry::symmetric;
    if (name == "skew")
        return Symmetry::skew;
    throw std::invalid_argument("unknown symmetry mode: " + name);
}

const char* symmetry_name(Symmetry s)
{
    switch (s) {
    case Symmetry::general: return "general";
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::skew: return "skew";
    }
    return "general";
}

namespace {

// Symmetry is per level: negating the lag of any single level leaves the
// coefficient unchanged (symmetric) or flips its sign (skew). Single-axis
// flips generate the full mirror group, so checking them suffices; in skew
// mode any coefficient with a zero lag on some level is its own flip partner
// and must therefore vanish (in particular t_0 == 0).
void validate_symmetry(const Shape& levels, const ComplexTensor& lags, Symmetry symmetry)
{
    if (symmetry == Symmetry::general)
        return;
    const int d = static_cast<int>(levels.size());
    for (int a = 0; a < d; ++a) {
        const std::int64_t len = 2 * levels[static_cast<std::size_t>(a)] - 1;
        const std::int64_t inner = lags.inner_count(a);
        const std::int64_t outer = lags.outer_count(a);
        for (std::int64_t o = 0; o < outer; ++o)
            for (std::int64_t k = 0; k < len; ++k) {
                const cplx* lhs = lags.data() + (o * len + k) * inner;
                const cplx* rhs = lags.data() + (o * len + (len - 1 - k)) * inner;
                for (std::int64_t i = 0; i < inner; ++i) {
                    if (symmetry == Symmetry::symmetric) {
                        if (lhs[i] != rhs[i])
                            throw SymmetryError("symmetric mode requires t_m == t_{-m} per level");
                    } else {
                        if (lhs[i] != -rhs[i])
                            throw SymmetryError("skew mode requires t_m == -t_{-m} per level (t_0 == 0)");
                    }
                }
            }
    }
}

} // namespace

GeneratorSpec::GeneratorSpec(Shape levels, ComplexTensor lags, Symmetry symmetry)
    : levels_(std::move(levels)), lags_(std::move(lags)), symmetry_(symmetry)
{
    if (levels_.empty())
        throw ShapeError("generator needs at least one level");
    for (auto n : levels_)
        if (n < 1)
            throw ShapeError("generator level sizes must be >= 1");
    if (lags_.dims() != static_cast<int>(levels_.size()))
        throw ShapeError("lag tensor rank must equal level count");
    for (int a = 0; a < lags_.dims(); ++a)
        if (lags_.shape()[static_cast<std::size_t>(a)] != 2 * levels_[static_cast<std::size_t>(a)] - 1)
            throw ShapeError("lag tensor must have shape (2n-1) per level");
    validate_symmetry(levels_, lags_, symmetry_);
}

const cplx& GeneratorSpec::lag(std::span<const std::int64_t> multilag) const
{
    if (static_cast<int>(multilag.size()) != dims())
        throw ShapeError("multi-lag rank mismatch");
    std::int64_t off = 0;
    for (int a = 0; a < dims(); ++a) {
        const std::int64_t n = levels_[static_cast<std::size_t>(a)];
        const std::int64_t m = multilag[static_cast<std::size_t>(a)];
        if (m < -(n - 1) || m > n - 1)
            throw std::out_of_range("multi-lag out of range");
        off = off * (2 * n - 1) + (m + n - 1);
    }
    return lags_[off];
}

std::string GeneratorSpec::to_json() const
{
    nlohmann::json j;
    j["levels"] = levels_;
    nlohmann::json lag_list = nlohmann::json::array();
    for (const auto& v : lags_.values())
        lag_list.push_back({v.real(), v.imag()});
    j["lags"] = std::move(lag_list);
    j["symmetry"] = symmetry_name(symmetry_);
    return j.dump();
}

GeneratorSpec GeneratorSpec::from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("generator json parse error: ") + e.what());
    }
    if (!j.contains("levels") || !j.contains("lags") || !j.contains("symmetry"))
        throw IoError("generator json must contain levels, lags, symmetry");

    Shape levels = j["levels"].get<Shape>();
    Shape lag_shape;
    for (auto n : levels)
        lag_shape.push_back(2 * n - 1);
    std::vector<cplx> values;
    for (const auto& entry : j["lags"]) {
        if (!entry.is_array() || entry.size() != 2)
            throw IoError("generator json lag entries must be [re, im] pairs");
        values.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    ComplexTensor lags(lag_shape, values);
    return GeneratorSpec(std::move(levels), std::move(lags), symmetry_from_string(j["symmetry"].get<std::string>()));
}

GeneratorSpec GeneratorSpec::from_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open generator file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void GeneratorSpec::to_json_file(const std::string& path) const
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write generator file: " + path);
    out << to_json() << "\n";
}

} // namespace toesplit
