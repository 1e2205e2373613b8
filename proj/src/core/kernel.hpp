#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fft.hpp"
#include "generator.hpp"
#include "tensor.hpp"

namespace toesplit {

/// d-bit parity mask: bit a set means the branch carries odd Fourier
/// coefficients along axis a. The root id is all-zero.
struct BranchId {
    std::uint32_t bits = 0;

    bool odd(int axis) const { return (bits >> axis) & 1u; }
    friend bool operator==(BranchId lhs, BranchId rhs) { return lhs.bits == rhs.bits; }
};

/// Returns b with the parity bit of `axis` set; the bit must be unset.
BranchId next_id(BranchId b, int axis);

/// First column of the level-wise circulant embedding: along each level the
/// layout is [t_0, t_1, ..., t_{n-1}, s0, t_{-(n-1)}, ..., t_{-1}], shape 2n
/// per level. s0 is the arbitrary padding value (default 0); the matvec
/// result never depends on it.
struct EmbeddedGenerator {
    Shape levels;
    ComplexTensor data; // shape 2*n_l per level
};

EmbeddedGenerator embed_generator(const GeneratorSpec& g, cplx s0 = {});

enum class SpectraStorage { full, mirror_compressed };
enum class PrecomputeStrategy { full_fft, branchwise };

/// The 2^d parity-indexed Fourier blocks of the embedded generator: block b
/// holds DFT(embedded)[2k_a + b_a] per axis, shape n_1 x ... x n_d.
///
/// mirror_compressed storage keeps, along every axis, only the non-redundant
/// half of each parity block (even-parity index symmetry k <-> n-k, odd
/// k <-> n-1-k, sign flipped per mirrored axis in skew mode) and expands on
/// the fly during multiplication.
class KernelSpectra {
  public:
    KernelSpectra(Shape levels, Symmetry symmetry, SpectraStorage storage,
                  std::vector<ComplexTensor> blocks);

    int dims() const { return static_cast<int>(levels_.size()); }
    const Shape& levels() const { return levels_; }
    std::int64_t vector_size() const { return shape_volume(levels_); }
    Symmetry symmetry() const { return symmetry_; }
    SpectraStorage storage() const { return storage_; }
    std::size_t block_count() const { return blocks_.size(); }

    const ComplexTensor& block(BranchId b) const;

    /// Total stored complex elements over all blocks.
    std::int64_t stored_elements() const;

    /// Shape of block b as stored (equals levels() in full mode).
    Shape stored_block_shape(BranchId b) const;

    /// t[i] *= block(b)[i] elementwise, expanding compressed storage on the
    /// fly with no temporary. t must have shape levels().
    void multiply_into(ComplexTensor& t, BranchId b) const;

    /// Materialize the full parity block for b (round-trip checks; the
    /// multiply path never needs it).
    ComplexTensor expand_block(BranchId b) const;

    void save(const std::string& path) const;
    static KernelSpectra load(const std::string& path);

  private:
    void check_block(BranchId b) const;

    Shape levels_;
    Symmetry symmetry_;
    SpectraStorage storage_;
    std::vector<ComplexTensor> blocks_; // indexed by BranchId bits
};

/// Parity blocks of DFT(embedded). full_fft performs one (2n)^d transform
/// and de-interleaves; branchwise folds one axis at a time (even sum / odd
/// phase-weighted difference) so only size-s transforms are ever taken.
/// Both strategies produce identical full-mode spectra.
KernelSpectra precompute_spectra(const EmbeddedGenerator& e,
                                 PrecomputeStrategy strategy = PrecomputeStrategy::branchwise,
                                 Symmetry symmetry = Symmetry::general,
                                 const FftProvider& provider = default_fft_provider());

/// Compress full-mode spectra of a (skew-)symmetric generator. Validates the
/// mirror property numerically and fails with SymmetryError when the spectra
/// do not exhibit it (e.g. skew generator embedded with s0 != 0).
KernelSpectra compress_spectra(const KernelSpectra& k, const GeneratorSpec& g);

/// Elementwise t[i] *= spectrum value resolved through per-axis remap
/// tables: value = sign * stored[sum_a src[a][idx_a] * stride_a]. src[a] and
/// sign[a] have t.shape()[a] entries; stride is the stored tensor's.
void multiply_remapped(ComplexTensor& t, const ComplexTensor& stored,
                       const std::vector<std::vector<std::int64_t>>& src,
                       const std::vector<std::vector<double>>& sign);

} // namespace toesplit
