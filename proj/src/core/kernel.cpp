#include "kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace toesplit {

namespace {

constexpr char kMagic[4] = {'T', 'S', 'K', 'F'};
constexpr std::uint32_t kFormatVersion = 1;

// Stored length of one axis of a parity block under mirror compression.
std::int64_t stored_axis_length(std::int64_t n, bool odd_parity)
{
    return odd_parity ? (n + 1) / 2 : n / 2 + 1;
}

// Full index k -> (stored index, mirrored?) along one parity-block axis.
// Even parity: f_{2k} = +-f_{2(n-k)}  => k <-> (n-k) mod n.
// Odd parity:  f_{2k+1} = +-f_{2(n-1-k)+1} => k <-> n-1-k.
std::pair<std::int64_t, bool> mirror_source(std::int64_t n, bool odd_parity, std::int64_t k)
{
    if (odd_parity) {
        const std::int64_t stored = stored_axis_length(n, true);
        if (k < stored)
            return {k, false};
        return {n - 1 - k, true};
    }
    if (k <= n / 2)
        return {k, false};
    return {n - k, true};
}

} // namespace

BranchId next_id(BranchId b, int axis)
{
    if (axis < 0 || axis >= 32)
        throw std::out_of_range("branch axis out of range");
    if (b.odd(axis))
        throw std::logic_error("next_id: parity bit already set for this level");
    return BranchId{b.bits | (1u << axis)};
}

EmbeddedGenerator embed_generator(const GeneratorSpec& g, cplx s0)
{
    const int d = g.dims();
    Shape out_shape;
    for (auto n : g.levels())
        out_shape.push_back(2 * n);

    ComplexTensor out(out_shape);
    const ComplexTensor& lags = g.lags();
    std::vector<std::int64_t> idx(out_shape.size(), 0);
    const std::int64_t total = out.size();
    for (std::int64_t off = 0; off < total; ++off) {
        bool padding = false;
        std::int64_t lag_off = 0;
        for (int a = 0; a < d; ++a) {
            const std::int64_t n = g.levels()[static_cast<std::size_t>(a)];
            const std::int64_t j = idx[static_cast<std::size_t>(a)];
            if (j == n) {
                padding = true;
                break;
            }
            const std::int64_t m = j < n ? j : j - 2 * n;
            lag_off = lag_off * (2 * n - 1) + (m + n - 1);
        }
        out[off] = padding ? s0 : lags[lag_off];
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < out_shape[static_cast<std::size_t>(a)])
                break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return EmbeddedGenerator{g.levels(), std::move(out)};
}

KernelSpectra::KernelSpectra(Shape levels, Symmetry symmetry, SpectraStorage storage,
                             std::vector<ComplexTensor> blocks)
    : levels_(std::move(levels)), symmetry_(symmetry), storage_(storage), blocks_(std::move(blocks))
{
    const std::size_t expected = std::size_t{1} << levels_.size();
    if (blocks_.size() != expected)
        throw KernelIntegrityError("kernel spectra must hold 2^d parity blocks");
    for (std::uint32_t b = 0; b < expected; ++b)
        if (blocks_[b].shape() != stored_block_shape(BranchId{b}))
            throw KernelIntegrityError("parity block has unexpected shape");
}

const ComplexTensor& KernelSpectra::block(BranchId b) const
{
    check_block(b);
    return blocks_[b.bits];
}

void KernelSpectra::check_block(BranchId b) const
{
    if (b.bits >= blocks_.size() || blocks_[b.bits].empty())
        throw KernelIntegrityError("missing parity block " + std::to_string(b.bits));
}

std::int64_t KernelSpectra::stored_elements() const
{
    std::int64_t total = 0;
    for (const auto& blk : blocks_)
        total += blk.size();
    return total;
}

Shape KernelSpectra::stored_block_shape(BranchId b) const
{
    Shape shape = levels_;
    if (storage_ == SpectraStorage::mirror_compressed)
        for (int a = 0; a < dims(); ++a)
            shape[static_cast<std::size_t>(a)] =
                stored_axis_length(levels_[static_cast<std::size_t>(a)], b.odd(a));
    return shape;
}

void KernelSpectra::multiply_into(ComplexTensor& t, BranchId b) const
{
    check_block(b);
    if (t.shape() != levels_)
        throw ShapeError("multiply_into expects a tensor of the operator's level sizes");

    const ComplexTensor& blk = blocks_[b.bits];
    if (storage_ == SpectraStorage::full) {
        cplx* p = t.data();
        const cplx* q = blk.data();
        const std::int64_t n = t.size();
        for (std::int64_t i = 0; i < n; ++i)
            p[i] *= q[i];
        return;
    }

    const double mirror_sign = symmetry_ == Symmetry::skew ? -1.0 : 1.0;
    std::vector<std::vector<std::int64_t>> src(static_cast<std::size_t>(dims()));
    std::vector<std::vector<double>> sign(static_cast<std::size_t>(dims()));
    for (int a = 0; a < dims(); ++a) {
        const std::int64_t n = levels_[static_cast<std::size_t>(a)];
        src[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(n));
        sign[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(n));
        for (std::int64_t k = 0; k < n; ++k) {
            auto [s, mirrored] = mirror_source(n, b.odd(a), k);
            src[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] = s;
            sign[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] = mirrored ? mirror_sign : 1.0;
        }
    }
    multiply_remapped(t, blk, src, sign);
}

ComplexTensor KernelSpectra::expand_block(BranchId b) const
{
    check_block(b);
    if (storage_ == SpectraStorage::full)
        return blocks_[b.bits].clone();
    ComplexTensor out(levels_);
    out.fill(cplx{1.0, 0.0});
    multiply_into(out, b);
    return out;
}

void multiply_remapped(ComplexTensor& t, const ComplexTensor& stored,
                       const std::vector<std::vector<std::int64_t>>& src,
                       const std::vector<std::vector<double>>& sign)
{
    const int d = t.dims();
    if (static_cast<int>(src.size()) != d || static_cast<int>(sign.size()) != d)
        throw ShapeError("remap table rank mismatch");
    for (int a = 0; a < d; ++a)
        if (static_cast<std::int64_t>(src[static_cast<std::size_t>(a)].size()) != t.shape()[static_cast<std::size_t>(a)] ||
            static_cast<std::int64_t>(sign[static_cast<std::size_t>(a)].size()) != t.shape()[static_cast<std::size_t>(a)])
            throw ShapeError("remap table length mismatch");

    std::vector<std::int64_t> stride(static_cast<std::size_t>(d));
    std::int64_t acc = 1;
    for (int a = d - 1; a >= 0; --a) {
        stride[static_cast<std::size_t>(a)] = acc;
        acc *= stored.shape()[static_cast<std::size_t>(a)];
    }

    std::vector<std::int64_t> digit(static_cast<std::size_t>(d), 0);
    std::vector<std::int64_t> off_prefix(static_cast<std::size_t>(d) + 1, 0);
    std::vector<double> sign_prefix(static_cast<std::size_t>(d) + 1, 1.0);
    auto refresh = [&](int from) {
        for (int a = from; a < d; ++a) {
            off_prefix[static_cast<std::size_t>(a) + 1] =
                off_prefix[static_cast<std::size_t>(a)] +
                src[static_cast<std::size_t>(a)][static_cast<std::size_t>(digit[static_cast<std::size_t>(a)])] *
                    stride[static_cast<std::size_t>(a)];
            sign_prefix[static_cast<std::size_t>(a) + 1] =
                sign_prefix[static_cast<std::size_t>(a)] *
                sign[static_cast<std::size_t>(a)][static_cast<std::size_t>(digit[static_cast<std::size_t>(a)])];
        }
    };
    refresh(0);

    cplx* p = t.data();
    const cplx* q = stored.data();
    const std::int64_t total = t.size();
    for (std::int64_t i = 0; i < total; ++i) {
        p[i] *= sign_prefix[static_cast<std::size_t>(d)] * q[off_prefix[static_cast<std::size_t>(d)]];
        int a = d - 1;
        for (; a >= 0; --a) {
            if (++digit[static_cast<std::size_t>(a)] < t.shape()[static_cast<std::size_t>(a)])
                break;
            digit[static_cast<std::size_t>(a)] = 0;
        }
        if (a < 0)
            break;
        refresh(a);
    }
}

namespace {

ComplexTensor fold_axis(const ComplexTensor& t, int axis, bool odd)
{
    Shape out_shape = t.shape();
    out_shape[static_cast<std::size_t>(axis)] /= 2;
    const std::int64_t n = out_shape[static_cast<std::size_t>(axis)];

    ComplexTensor out(out_shape);
    const std::int64_t inner = t.inner_count(axis);
    const std::int64_t outer = t.outer_count(axis);

    std::vector<cplx> phase;
    if (odd) {
        phase.resize(static_cast<std::size_t>(n));
        for (std::int64_t k = 0; k < n; ++k)
            phase[static_cast<std::size_t>(k)] =
                std::polar(1.0, -std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    }

    const cplx* src = t.data();
    cplx* dst = out.data();
    for (std::int64_t o = 0; o < outer; ++o)
        for (std::int64_t k = 0; k < n; ++k) {
            const cplx* lo = src + (o * 2 * n + k) * inner;
            const cplx* hi = lo + n * inner;
            cplx* row = dst + (o * n + k) * inner;
            if (odd) {
                const cplx f = phase[static_cast<std::size_t>(k)];
                for (std::int64_t i = 0; i < inner; ++i)
                    row[i] = f * (lo[i] - hi[i]);
            } else {
                for (std::int64_t i = 0; i < inner; ++i)
                    row[i] = lo[i] + hi[i];
            }
        }
    return out;
}

void branchwise_blocks(const ComplexTensor& t, int axis, std::uint32_t bits, int d,
                       const FftProvider& provider, std::vector<ComplexTensor>& blocks)
{
    if (axis == d) {
        ComplexTensor blk = t.clone();
        fft_all_axes_inplace(blk, provider);
        blocks[bits] = std::move(blk);
        return;
    }
    {
        ComplexTensor even = fold_axis(t, axis, false);
        branchwise_blocks(even, axis + 1, bits, d, provider, blocks);
    }
    ComplexTensor odd = fold_axis(t, axis, true);
    branchwise_blocks(odd, axis + 1, bits | (1u << axis), d, provider, blocks);
}

std::vector<ComplexTensor> full_fft_blocks(const EmbeddedGenerator& e, const FftProvider& provider)
{
    ComplexTensor spectrum = e.data.clone();
    fft_all_axes_inplace(spectrum, provider);

    const int d = static_cast<int>(e.levels.size());
    const std::size_t count = std::size_t{1} << d;
    std::vector<ComplexTensor> blocks(count);
    for (std::uint32_t bits = 0; bits < count; ++bits) {
        ComplexTensor blk(e.levels);
        std::vector<std::int64_t> idx(e.levels.size(), 0);
        const std::int64_t total = blk.size();
        for (std::int64_t off = 0; off < total; ++off) {
            std::int64_t src = 0;
            for (int a = 0; a < d; ++a)
                src = src * 2 * e.levels[static_cast<std::size_t>(a)] +
                      (2 * idx[static_cast<std::size_t>(a)] + ((bits >> a) & 1u));
            blk[off] = spectrum[src];
            for (int a = d - 1; a >= 0; --a) {
                if (++idx[static_cast<std::size_t>(a)] < e.levels[static_cast<std::size_t>(a)])
                    break;
                idx[static_cast<std::size_t>(a)] = 0;
            }
        }
        blocks[bits] = std::move(blk);
    }
    return blocks;
}

} // namespace

KernelSpectra precompute_spectra(const EmbeddedGenerator& e, PrecomputeStrategy strategy,
                                 Symmetry symmetry, const FftProvider& provider)
{
    try {
        std::vector<ComplexTensor> blocks;
        if (strategy == PrecomputeStrategy::full_fft) {
            blocks = full_fft_blocks(e, provider);
        } else {
            blocks.resize(std::size_t{1} << e.levels.size());
            branchwise_blocks(e.data, 0, 0, static_cast<int>(e.levels.size()), provider, blocks);
        }
        return KernelSpectra(e.levels, symmetry, SpectraStorage::full, std::move(blocks));
    } catch (const std::bad_alloc&) {
        throw ResourceError("out of memory while precomputing kernel spectra");
    }
}

KernelSpectra compress_spectra(const KernelSpectra& k, const GeneratorSpec& g)
{
    if (g.symmetry() == Symmetry::general)
        throw SymmetryError("compression requires a symmetric or skew generator");
    if (k.storage() != SpectraStorage::full)
        throw SymmetryError("compression expects full-mode spectra");
    if (k.levels() != g.levels())
        throw ShapeError("spectra and generator level sizes disagree");

    const int d = k.dims();
    const bool skew = g.symmetry() == Symmetry::skew;
    const double mirror_sign = skew ? -1.0 : 1.0;
    const std::size_t count = std::size_t{1} << d;

    std::vector<ComplexTensor> compressed(count);
    for (std::uint32_t bits = 0; bits < count; ++bits) {
        const BranchId b{bits};
        const ComplexTensor& full = k.block(b);
        const double scale = max_abs(full);
        const double tol = 1e-9 * std::max(scale, 1.0);

        // Validate the mirror property axis by axis before trusting half of
        // the data. Single-axis flips generate the whole mirror group, and a
        // skew fixed point (mirror index == index) reduces to |2f| <= tol,
        // i.e. the forced zero.
        for (int a = 0; a < d; ++a) {
            const std::int64_t n = k.levels()[static_cast<std::size_t>(a)];
            const std::int64_t inner = full.inner_count(a);
            const std::int64_t outer = full.outer_count(a);
            for (std::int64_t o = 0; o < outer; ++o)
                for (std::int64_t kk = 0; kk < n; ++kk) {
                    const std::int64_t mk = b.odd(a) ? n - 1 - kk : (n - kk) % n;
                    const cplx* lhs = full.data() + (o * n + kk) * inner;
                    const cplx* rhs = full.data() + (o * n + mk) * inner;
                    for (std::int64_t i = 0; i < inner; ++i)
                        if (std::abs(lhs[i] - mirror_sign * rhs[i]) > tol)
                            throw SymmetryError(
                                std::string("spectra are not mirror ") +
                                (skew ? "antisymmetric" : "symmetric") +
                                " (wrong mode or nonzero skew padding)");
                }
        }

        // Copy the non-redundant corner.
        Shape stored_shape = k.levels();
        for (int a = 0; a < d; ++a)
            stored_shape[static_cast<std::size_t>(a)] =
                stored_axis_length(k.levels()[static_cast<std::size_t>(a)], b.odd(a));
        ComplexTensor blk(stored_shape);
        std::vector<std::int64_t> sidx(static_cast<std::size_t>(d), 0);
        for (std::int64_t off = 0; off < blk.size(); ++off) {
            std::int64_t src = 0;
            for (int a = 0; a < d; ++a)
                src = src * k.levels()[static_cast<std::size_t>(a)] + sidx[static_cast<std::size_t>(a)];
            blk[off] = full[src];
            for (int a = d - 1; a >= 0; --a) {
                if (++sidx[static_cast<std::size_t>(a)] < stored_shape[static_cast<std::size_t>(a)])
                    break;
                sidx[static_cast<std::size_t>(a)] = 0;
            }
        }
        compressed[bits] = std::move(blk);
    }

    return KernelSpectra(k.levels(), g.symmetry(), SpectraStorage::mirror_compressed, std::move(compressed));
}

namespace {

void write_bytes(std::ofstream& out, const void* p, std::size_t n)
{
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void write_u32(std::ofstream& out, std::uint32_t v)
{
    unsigned char b[4];
    for (int i = 0; i < 4; ++i)
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
    write_bytes(out, b, 4);
}

void write_i64(std::ofstream& out, std::int64_t v)
{
    const auto u = static_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xffu);
    write_bytes(out, b, 8);
}

void write_f64(std::ofstream& out, double v)
{
    write_i64(out, static_cast<std::int64_t>(std::bit_cast<std::uint64_t>(v)));
}

bool read_bytes(std::ifstream& in, void* p, std::size_t n)
{
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    return static_cast<std::size_t>(in.gcount()) == n;
}

std::uint32_t read_u32(std::ifstream& in)
{
    unsigned char b[4];
    if (!read_bytes(in, b, 4))
        throw IoError("kernel file truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::int64_t read_i64(std::ifstream& in)
{
    unsigned char b[8];
    if (!read_bytes(in, b, 8))
        throw IoError("kernel file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return static_cast<std::int64_t>(v);
}

double read_f64(std::ifstream& in)
{
    return std::bit_cast<double>(static_cast<std::uint64_t>(read_i64(in)));
}

} // namespace

void KernelSpectra::save(const std::string& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write kernel file: " + path);
    write_bytes(out, kMagic, 4);
    write_u32(out, kFormatVersion);
    write_u32(out, static_cast<std::uint32_t>(dims()));
    for (auto n : levels_)
        write_i64(out, n);
    const unsigned char sym = static_cast<unsigned char>(symmetry_);
    const unsigned char sto = storage_ == SpectraStorage::full ? 0 : 1;
    write_bytes(out, &sym, 1);
    write_bytes(out, &sto, 1);
    const unsigned char reserved[2] = {0, 0};
    write_bytes(out, reserved, 2);

    for (const auto& blk : blocks_) {
        write_i64(out, blk.size());
        for (const auto& v : blk.values()) {
            write_f64(out, v.real());
            write_f64(out, v.imag());
        }
    }
    if (!out)
        throw IoError("write failure on kernel file: " + path);
}

KernelSpectra KernelSpectra::load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open kernel file: " + path);
    char magic[4];
    if (!read_bytes(in, magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("not a kernel spectra file: " + path);
    const std::uint32_t version = read_u32(in);
    if (version != kFormatVersion)
        throw IoError("unsupported kernel file version " + std::to_string(version));
    const std::uint32_t d = read_u32(in);
    if (d < 1 || d > 31)
        throw KernelIntegrityError("kernel file has invalid level count");
    Shape levels(d);
    for (auto& n : levels) {
        n = read_i64(in);
        if (n < 1)
            throw KernelIntegrityError("kernel file has invalid level size");
    }
    unsigned char sym = 0, sto = 0, reserved[2];
    if (!read_bytes(in, &sym, 1) || !read_bytes(in, &sto, 1) || !read_bytes(in, reserved, 2))
        throw IoError("kernel file truncated");
    if (sym > 2 || sto > 1)
        throw KernelIntegrityError("kernel file has invalid mode fields");
    const auto symmetry = static_cast<Symmetry>(sym);
    const auto storage = sto == 0 ? SpectraStorage::full : SpectraStorage::mirror_compressed;

    // Shapes are implied by the header; per-block counts are validated
    // against them.
    KernelSpectra probe(levels, symmetry, storage, [&] {
        std::vector<ComplexTensor> blocks;
        const std::size_t count = std::size_t{1} << d;
        for (std::uint32_t bits = 0; bits < count; ++bits) {
            Shape shape = levels;
            if (storage == SpectraStorage::mirror_compressed)
                for (std::uint32_t a = 0; a < d; ++a)
                    shape[a] = stored_axis_length(levels[a], (bits >> a) & 1u);
            const std::int64_t expect = shape_volume(shape);
            const std::int64_t n = read_i64(in);
            if (n != expect)
                throw KernelIntegrityError("kernel file block size mismatch");
            ComplexTensor blk(shape);
            for (std::int64_t i = 0; i < n; ++i) {
                const double re = read_f64(in);
                const double im = read_f64(in);
                blk[i] = cplx{re, im};
            }
            blocks.push_back(std::move(blk));
        }
        return blocks;
    }());
    return probe;
}

} // namespace toesplit
