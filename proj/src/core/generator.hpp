#pragma once

#include <string>

#include "tensor.hpp"

namespace toesplit {

enum class Symmetry { general, symmetric, skew };

Symmetry symmetry_from_string(const std::string& name);
const char* symmetry_name(Symmetry s);

/// Per-level Toeplitz lags t_{-(n-1)}..t_{n-1} along each of the d levels.
/// The lag tensor has shape (2*n_l - 1) per level; the coefficient for
/// multi-lag m (m_l in [-(n_l-1), n_l-1]) sits at offset m_l + n_l - 1.
///
/// symmetric mode requires t_m == t_{-m} for every multi-lag, skew mode
/// t_m == -t_{-m} (which forces t_0 == 0); both are checked at construction.
class GeneratorSpec {
  public:
    GeneratorSpec(Shape levels, ComplexTensor lags, Symmetry symmetry);

    int dims() const { return static_cast<int>(levels_.size()); }
    const Shape& levels() const { return levels_; }
    std::int64_t vector_size() const { return shape_volume(levels_); }
    Symmetry symmetry() const { return symmetry_; }
    const ComplexTensor& lags() const { return lags_; }

    /// Lag coefficient for multi-lag m, m_l in [-(n_l-1), n_l-1].
    const cplx& lag(std::span<const std::int64_t> multilag) const;

    GeneratorSpec clone() const { return GeneratorSpec(levels_, lags_.clone(), symmetry_); }

    /// Test-fixture JSON: {"levels":[...], "lags":[[re,im],...], "symmetry":"..."},
    /// lags row-major over the (2n-1)-per-level tensor.
    std::string to_json() const;
    static GeneratorSpec from_json(const std::string& text);
    static GeneratorSpec from_json_file(const std::string& path);
    void to_json_file(const std::string& path) const;

  private:
    Shape levels_;
    ComplexTensor lags_;
    Symmetry symmetry_;
};

} // namespace toesplit
