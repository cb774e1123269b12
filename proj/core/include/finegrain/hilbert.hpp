#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "finegrain/errors.hpp"

namespace fg {

using cxd = Eigen::dcomplex;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// Dense representation cap: product of subsystem dimensions must stay below
/// 2^22 (~4M amplitudes) to keep desk-scale runtimes.
inline constexpr std::int64_t kDeskDimCap = std::int64_t{1} << 22;

/// Fine-graining of Hilbert space: mu bits per complex amplitude, mu/2 per
/// real component. The smallest resolvable Hilbert-space angle is 2^(-mu/2).
///
/// One worked qubit example elsewhere quotes the resolution as 2^(-mu)*pi;
/// this type follows the definition, not that example's convention.
struct FineGraining {
    int mu;

    explicit FineGraining(int mu_bits) : mu(mu_bits) {
        if (mu < 4 || mu % 2 != 0)
            throw std::invalid_argument("FineGraining: mu must be even and >= 4");
    }

    int half() const { return mu / 2; }
    double min_resolvable_angle() const { return std::exp2(-mu / 2.0); }
    double grid_step() const { return std::exp2(-mu / 2.0); }
};

/// Normalized complex state vector over a tensor-product space with explicit
/// subsystem dimensions. Basis order is mixed-radix over dims with the first
/// subsystem most significant. Immutable after construction.
class PureState {
  public:
    PureState(std::vector<int> dims, Vec amps);

    static PureState basis_state(std::vector<int> dims, const std::vector<int>& digits);
    /// Normalizes the amplitude vector; throws if it has zero norm.
    static PureState normalized(std::vector<int> dims, Vec amps);

    const std::vector<int>& dims() const { return dims_; }
    std::int64_t dim() const { return amps_.size(); }
    const Vec& amps() const { return amps_; }
    int subsystems() const { return static_cast<int>(dims_.size()); }

  private:
    std::vector<int> dims_;
    Vec amps_;
};

/// Hermitian, unit-trace operator over a tensor-product space.
class DensityMatrix {
  public:
    DensityMatrix(std::vector<int> dims, Mat mat);

    static DensityMatrix from_pure(const PureState& s);

    const std::vector<int>& dims() const { return dims_; }
    std::int64_t dim() const { return mat_.rows(); }
    const Mat& mat() const { return mat_; }

    /// Eigenvalue positivity check (O(D^3)); construction only checks the
    /// cheap invariants.
    double min_eigenvalue() const;

  private:
    std::vector<int> dims_;
    Mat mat_;
};

/// Partition of subsystem indices into irreducible tensor factors.
struct FactorizationStructure {
    std::vector<std::vector<int>> blocks;

    bool all_singletons() const {
        for (const auto& b : blocks)
            if (b.size() != 1) return false;
        return true;
    }
    std::size_t largest_block() const {
        std::size_t m = 0;
        for (const auto& b : blocks) m = std::max(m, b.size());
        return m;
    }
    /// Product of subsystem dimensions inside each block.
    std::vector<std::int64_t> block_dimension_products(const std::vector<int>& dims) const {
        std::vector<std::int64_t> out;
        out.reserve(blocks.size());
        for (const auto& b : blocks) {
            std::int64_t prod = 1;
            for (int idx : b) prod *= dims.at(static_cast<std::size_t>(idx));
            out.push_back(prod);
        }
        return out;
    }
};

/// Diagnostics from amplitude quantization; the renormalization discrepancy
/// is recorded rather than silently dropped.
struct QuantizeDiag {
    double max_component_error = 0.0; ///< pre-renormalization, per real component
    double pre_renorm_norm = 1.0;
};

/// Round every real and imaginary amplitude component to the nearest multiple
/// of 2^(-mu/2) (half away from zero), then renormalize. Basis states are
/// grid points and pass through unchanged.
PureState quantize(const PureState& state, const FineGraining& g, QuantizeDiag* diag = nullptr);

/// arccos(|<a|b>|) in [0, pi/2].
double fubini_study_angle(const PureState& a, const PureState& b);

PureState tensor(const PureState& a, const PureState& b);

/// Reduced operator over the kept subsystems (ascending original order).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// Von Neumann entropy (base 2) of either side of the bipartition, in bits.
/// `cut` lists the subsystem indices of one side.
double entanglement_entropy(const PureState& state, const std::vector<int>& cut);

/// Finest tensor-product partition found by greedy bipartition refinement;
/// a split is accepted when the second Schmidt coefficient is below tol.
FactorizationStructure factorize(const PureState& state, double tol = 1e-10);

/// (D - 1) * mu bits: state information of an isolated D-dimensional system
/// once normalization has paid for one amplitude.
double shannon_state_information(std::int64_t D, int mu);

/// Sum over blocks of the product of block dimensions: the dimension count a
/// memory register needs for a state with this factorization.
double mnemonic_dimension(const FactorizationStructure& f, const std::vector<int>& dims);

// -- index helpers (mixed-radix over dims, first subsystem most significant) --

std::int64_t total_dimension(const std::vector<int>& dims);
std::vector<std::int64_t> strides_for(const std::vector<int>& dims);
std::int64_t ravel_index(const std::vector<int>& dims, const std::vector<int>& digits);
std::vector<int> unravel_index(const std::vector<int>& dims, std::int64_t index);

} // namespace fg
