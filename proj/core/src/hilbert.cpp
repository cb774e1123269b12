#include "finegrain/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

namespace fg {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kHermTol = 1e-10;
constexpr double kTraceTol = 1e-10;

void check_dims(const std::vector<int>& dims) {
    if (dims.empty()) throw std::invalid_argument("state needs at least one subsystem");
    for (int d : dims)
        if (d < 1) throw std::invalid_argument("subsystem dimension must be >= 1");
    if (total_dimension(dims) > kDeskDimCap)
        throw std::invalid_argument("total dimension exceeds the desk-scale cap (2^22)");
}

} // namespace

std::int64_t total_dimension(const std::vector<int>& dims) {
    std::int64_t n = 1;
    for (int d : dims) {
        n *= d;
        if (n > kDeskDimCap) return n; // caller rejects; avoid overflow on absurd inputs
    }
    return n;
}

std::vector<std::int64_t> strides_for(const std::vector<int>& dims) {
    std::vector<std::int64_t> strides(dims.size(), 1);
    for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
        strides[i] = strides[i + 1] * dims[i + 1];
    return strides;
}

std::int64_t ravel_index(const std::vector<int>& dims, const std::vector<int>& digits) {
    if (digits.size() != dims.size())
        throw std::invalid_argument("digit count does not match subsystem count");
    const auto strides = strides_for(dims);
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (digits[i] < 0 || digits[i] >= dims[i])
            throw std::invalid_argument("basis digit out of range");
        idx += digits[i] * strides[i];
    }
    return idx;
}

std::vector<int> unravel_index(const std::vector<int>& dims, std::int64_t index) {
    std::vector<int> digits(dims.size());
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
        digits[i] = static_cast<int>(index % dims[i]);
        index /= dims[i];
    }
    return digits;
}

PureState::PureState(std::vector<int> dims, Vec amps)
    : dims_(std::move(dims)), amps_(std::move(amps)) {
    check_dims(dims_);
    if (amps_.size() != total_dimension(dims_))
        throw std::invalid_argument("amplitude count does not match the dimension product");
    if (std::fabs(amps_.squaredNorm() - 1.0) > kNormTol)
        throw std::invalid_argument("state is not normalized");
}

PureState PureState::basis_state(std::vector<int> dims, const std::vector<int>& digits) {
    Vec v = Vec::Zero(total_dimension(dims));
    v(ravel_index(dims, digits)) = 1.0;
    return PureState(std::move(dims), std::move(v));
}

PureState PureState::normalized(std::vector<int> dims, Vec amps) {
    const double n = amps.norm();
    if (n < 1e-300) throw std::domain_error("cannot normalize a zero state vector");
    return PureState(std::move(dims), amps / n);
}

DensityMatrix::DensityMatrix(std::vector<int> dims, Mat mat)
    : dims_(std::move(dims)), mat_(std::move(mat)) {
    check_dims(dims_);
    const std::int64_t d = total_dimension(dims_);
    if (mat_.rows() != d || mat_.cols() != d)
        throw std::invalid_argument("matrix shape does not match the dimension product");
    if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::fabs(mat_.trace().real() - 1.0) > kTraceTol ||
        std::fabs(mat_.trace().imag()) > kTraceTol)
        throw std::invalid_argument("density matrix trace is not 1");
}

DensityMatrix DensityMatrix::from_pure(const PureState& s) {
    return DensityMatrix(s.dims(), s.amps() * s.amps().adjoint());
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(mat_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

PureState quantize(const PureState& state, const FineGraining& g, QuantizeDiag* diag) {
    const double step = g.grid_step();
    Vec q(state.dim());
    double max_err = 0.0;
    for (std::int64_t i = 0; i < state.dim(); ++i) {
        const double re = std::round(state.amps()(i).real() / step) * step;
        const double im = std::round(state.amps()(i).imag() / step) * step;
        max_err = std::max({max_err, std::fabs(re - state.amps()(i).real()),
                            std::fabs(im - state.amps()(i).imag())});
        q(i) = cxd(re, im);
    }
    const double norm = q.norm();
    if (diag) {
        diag->max_component_error = max_err;
        diag->pre_renorm_norm = norm;
    }
    if (norm < 1e-300)
        throw std::domain_error(
            "quantize: every amplitude rounded to zero; the state is not representable "
            "at this fine-graining");
    return PureState(state.dims(), q / norm);
}

double fubini_study_angle(const PureState& a, const PureState& b) {
    if (a.dims() != b.dims())
        throw std::invalid_argument("fubini_study_angle: dimension mismatch");
    const double overlap = std::abs(a.amps().dot(b.amps()));
    return std::acos(std::clamp(overlap, 0.0, 1.0));
}

PureState tensor(const PureState& a, const PureState& b) {
    std::vector<int> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    check_dims(dims);
    Vec v(a.dim() * b.dim());
    for (std::int64_t i = 0; i < a.dim(); ++i)
        v.segment(i * b.dim(), b.dim()) = a.amps()(i) * b.amps();
    return PureState(std::move(dims), std::move(v));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const auto& dims = rho.dims();
    const int n = static_cast<int>(dims.size());
    std::vector<int> keep_sorted = keep;
    std::sort(keep_sorted.begin(), keep_sorted.end());
    if (keep_sorted.empty())
        throw std::invalid_argument("partial_trace: keep set must be nonempty");
    if (std::adjacent_find(keep_sorted.begin(), keep_sorted.end()) != keep_sorted.end())
        throw std::invalid_argument("partial_trace: duplicate subsystem index");
    for (int k : keep_sorted)
        if (k < 0 || k >= n) throw std::invalid_argument("partial_trace: index out of range");

    std::vector<int> drop;
    for (int i = 0; i < n; ++i)
        if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), i)) drop.push_back(i);

    std::vector<int> keep_dims, drop_dims;
    for (int k : keep_sorted) keep_dims.push_back(dims[k]);
    for (int d : drop) drop_dims.push_back(dims[d]);

    const std::int64_t dk = total_dimension(keep_dims);
    const std::int64_t dt = drop_dims.empty() ? 1 : total_dimension(drop_dims);
    const auto strides = strides_for(dims);

    // Precompute the full-space offsets contributed by each reduced index.
    std::vector<std::int64_t> keep_offset(dk), drop_offset(dt);
    for (std::int64_t i = 0; i < dk; ++i) {
        const auto digits = unravel_index(keep_dims, i);
        std::int64_t off = 0;
        for (std::size_t j = 0; j < keep_sorted.size(); ++j) off += digits[j] * strides[keep_sorted[j]];
        keep_offset[i] = off;
    }
    for (std::int64_t t = 0; t < dt; ++t) {
        std::int64_t off = 0;
        if (!drop.empty()) {
            const auto digits = unravel_index(drop_dims, t);
            for (std::size_t j = 0; j < drop.size(); ++j) off += digits[j] * strides[drop[j]];
        }
        drop_offset[t] = off;
    }

    Mat out = Mat::Zero(dk, dk);
    for (std::int64_t r = 0; r < dk; ++r)
        for (std::int64_t c = 0; c < dk; ++c) {
            cxd acc = 0.0;
            for (std::int64_t t = 0; t < dt; ++t)
                acc += rho.mat()(keep_offset[r] + drop_offset[t], keep_offset[c] + drop_offset[t]);
            out(r, c) = acc;
        }
    return DensityMatrix(std::move(keep_dims), std::move(out));
}

namespace {

// Reshape the amplitude vector into a (side A) x (side B) matrix for the cut.
Mat bipartition_matrix(const PureState& state, const std::vector<int>& side_a) {
    const auto& dims = state.dims();
    const int n = static_cast<int>(dims.size());
    std::vector<int> a = side_a;
    std::sort(a.begin(), a.end());
    if (a.empty() || a.size() >= dims.size())
        throw std::invalid_argument("bipartition must be a nonempty proper subset");
    for (int k : a)
        if (k < 0 || k >= n) throw std::invalid_argument("bipartition index out of range");
    std::vector<int> b;
    for (int i = 0; i < n; ++i)
        if (!std::binary_search(a.begin(), a.end(), i)) b.push_back(i);

    std::vector<int> a_dims, b_dims;
    for (int i : a) a_dims.push_back(dims[i]);
    for (int i : b) b_dims.push_back(dims[i]);
    const std::int64_t da = total_dimension(a_dims);
    const std::int64_t db = total_dimension(b_dims);
    const auto strides = strides_for(dims);

    Mat m(da, db);
    std::vector<std::int64_t> a_off(da), b_off(db);
    for (std::int64_t i = 0; i < da; ++i) {
        const auto digits = unravel_index(a_dims, i);
        std::int64_t off = 0;
        for (std::size_t j = 0; j < a.size(); ++j) off += digits[j] * strides[a[j]];
        a_off[i] = off;
    }
    for (std::int64_t i = 0; i < db; ++i) {
        const auto digits = unravel_index(b_dims, i);
        std::int64_t off = 0;
        for (std::size_t j = 0; j < b.size(); ++j) off += digits[j] * strides[b[j]];
        b_off[i] = off;
    }
    for (std::int64_t r = 0; r < da; ++r)
        for (std::int64_t c = 0; c < db; ++c) m(r, c) = state.amps()(a_off[r] + b_off[c]);
    return m;
}

} // namespace

double entanglement_entropy(const PureState& state, const std::vector<int>& cut) {
    const Mat m = bipartition_matrix(state, cut);
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& sv = svd.singularValues();
    double total = 0.0;
    for (int i = 0; i < sv.size(); ++i) total += sv(i) * sv(i);
    double entropy = 0.0;
    for (int i = 0; i < sv.size(); ++i) {
        const double p = sv(i) * sv(i) / total;
        if (p > 1e-300) entropy -= p * std::log2(p);
    }
    return entropy;
}

namespace {

struct SplitResult {
    bool split = false;
    Vec left, right;
    std::vector<int> left_positions; // positions within the block
};

// Search the block for any Schmidt-rank-1 bipartition. Subsets always
// contain position 0 so each cut is tried once.
SplitResult find_separable_cut(const PureState& block_state, double tol) {
    const int n = block_state.subsystems();
    SplitResult res;
    if (n < 2) return res;
    const std::uint64_t half = std::uint64_t{1} << (n - 1);
    for (std::uint64_t mask = 0; mask < half; ++mask) {
        std::vector<int> side_a{0};
        for (int bit = 0; bit < n - 1; ++bit)
            if (mask & (std::uint64_t{1} << bit)) side_a.push_back(bit + 1);
        if (side_a.size() == static_cast<std::size_t>(n)) continue;
        const Mat m = bipartition_matrix(block_state, side_a);
        Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        if (sv.size() >= 2 && sv(1) > tol) continue;
        res.split = true;
        res.left = svd.matrixU().col(0);
        res.right = svd.matrixV().col(0).conjugate();
        res.left_positions = side_a;
        return res;
    }
    return res;
}

void factorize_block(const PureState& block_state, const std::vector<int>& original_indices,
                     double tol, std::vector<std::vector<int>>& blocks) {
    const int n = block_state.subsystems();
    if (n == 1) {
        blocks.push_back(original_indices);
        return;
    }
    const SplitResult cut = find_separable_cut(block_state, tol);
    if (!cut.split) {
        blocks.push_back(original_indices);
        return;
    }
    std::vector<int> left_pos = cut.left_positions;
    std::sort(left_pos.begin(), left_pos.end());
    std::vector<int> right_pos;
    for (int i = 0; i < n; ++i)
        if (!std::binary_search(left_pos.begin(), left_pos.end(), i)) right_pos.push_back(i);

    std::vector<int> left_dims, right_dims, left_orig, right_orig;
    for (int p : left_pos) {
        left_dims.push_back(block_state.dims()[p]);
        left_orig.push_back(original_indices[p]);
    }
    for (int p : right_pos) {
        right_dims.push_back(block_state.dims()[p]);
        right_orig.push_back(original_indices[p]);
    }
    factorize_block(PureState::normalized(left_dims, cut.left), left_orig, tol, blocks);
    factorize_block(PureState::normalized(right_dims, cut.right), right_orig, tol, blocks);
}

} // namespace

FactorizationStructure factorize(const PureState& state, double tol) {
    std::vector<int> all(state.subsystems());
    std::iota(all.begin(), all.end(), 0);
    FactorizationStructure f;
    factorize_block(state, all, tol, f.blocks);
    std::sort(f.blocks.begin(), f.blocks.end());
    return f;
}

double shannon_state_information(std::int64_t D, int mu) {
    if (D < 1) throw std::invalid_argument("dimension must be >= 1");
    if (mu < 2) throw std::invalid_argument("mu must be >= 2");
    return static_cast<double>(D - 1) * mu;
}

double mnemonic_dimension(const FactorizationStructure& f, const std::vector<int>& dims) {
    double total = 0.0;
    for (const auto& block : f.blocks) {
        double prod = 1.0;
        for (int idx : block) prod *= dims.at(static_cast<std::size_t>(idx));
        total += prod;
    }
    return total;
}

} // namespace fg
