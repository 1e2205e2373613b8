#pragma once

#include <cstdint>
#include <optional>

#include "engine_split.hpp"
#include "kernel.hpp"

namespace toesplit {

/// Standard circulant-embedding matvec: zero-pad v to 2n per level, full
/// forward FFT, elementwise multiply with the embedded generator's spectrum,
/// full inverse FFT, project back to the leading n per level. Working peak
/// is the fully embedded vector, 2^d * s elements.
class EmbedOperator {
  public:
    explicit EmbedOperator(const GeneratorSpec& g, cplx s0 = {},
                           std::optional<SpectraStorage> storage = std::nullopt);

    ComplexTensor apply(const ComplexTensor& v, RunMetrics* metrics = nullptr) const;

    const Shape& levels() const { return levels_; }
    SpectraStorage storage() const { return storage_; }
    std::int64_t kernel_elements() const { return symbol_.size(); }
    std::uint64_t precompute_ns() const { return precompute_ns_; }

  private:
    Shape levels_;
    Shape padded_shape_;
    Symmetry symmetry_;
    SpectraStorage storage_;
    ComplexTensor symbol_; // full (2n)^d spectrum, or its (n+1)^d mirror corner
    std::uint64_t precompute_ns_ = 0;
};

std::pair<ComplexTensor, RunMetrics> toe_mul_embed(const GeneratorSpec& g, const ComplexTensor& v);

/// Brute-force dense oracle, built lag by lag from the generator (never from
/// the embedded form, so it independently cross-checks the embedding).
/// O(s^2); refuses instances with s > cap.
ComplexTensor naive_matvec(const GeneratorSpec& g, const ComplexTensor& v, std::int64_t cap = 4096);

/// Row-major s x s dense matrix T[j,k] = t_{m(j)-m(k)}. Same cap.
std::vector<cplx> dense_toeplitz_matrix(const GeneratorSpec& g, std::int64_t cap = 4096);

} // namespace toesplit
