#include <algorithm>
#include <vector>

#include "trochoid/ensemble.hpp"
#include "trochoid/errors.hpp"
#include "trochoid/rng.hpp"

namespace trochoid::ensemble {

namespace {

void check_input(const DenseMatrix& m, const DenseCyclicSpec& spec) {
    if (m.rows() != m.cols()) throw InvalidSpec("dense-cyclic: input matrix is not square");
    validate(spec);
    if (m.rows() != spec.n) throw InvalidSpec("dense-cyclic: input dimension does not match spec.n");
}

// One uniform per candidate edge, drawn whether or not the edge qualifies, so
// stream consumption is independent of the numerics.
void apply_flips(DenseMatrix& m, int v, const Eigen::RowVectorXd& q, const DenseCyclicSpec& spec,
                 std::uint64_t seed) {
    Rng rng = Rng::stream(seed, stream_tag::sign_flips, static_cast<std::uint64_t>(v));
    for (int b = 0; b < v; ++b) {
        const double u = rng.uniform();
        const double w = q[b] * m(b, v);
        if (spec.sign * w < 0.0 && u < spec.flip_prob) m(b, v) = -m(b, v);
    }
}

}  // namespace

DenseMatrix induce_cyclic_correlations_reference(DenseMatrix m, const DenseCyclicSpec& spec,
                                                 std::uint64_t seed) {
    check_input(m, spec);
    if (spec.flip_prob == 0.0) return m;
    const int n = spec.n;
    const int k = spec.k;
    for (int v = k - 1; v < n; ++v) {
        const DenseMatrix s = m.topLeftCorner(v, v);
        DenseMatrix paths = s;
        for (int j = 2; j <= k - 2; ++j) {
            DenseMatrix next = s * paths;
            next.diagonal().setZero();
            paths = std::move(next);
        }
        const Eigen::RowVectorXd q = m.row(v).head(v) * paths;
        apply_flips(m, v, q, spec, seed);
    }
    return m;
}

// With P_j = S^j - sum_{i=2..j} S^{j-i} D_i and D_j = diag(S P_{j-1}):
//
//   d_j    = diag(S^j) - sum_{i=2..j-1} diag(S^{j-i}) * d_i
//   r P_j  = r S^j     - sum_{i=2..j}   (r S^{j-i})    * d_i
//
// so each step needs diag(S^m) for m <= k-2, which in turn needs the full
// powers S^2 ... S^{k-3}. Those are grown by one row/column per step:
//
//   TL(S'^m) = TL(S'^{m-1}) S + TR(S'^{m-1}) r        (rank-(m-1) update)
//   TR(S'^m) = TL(S'^{m-1}) c + TR(S'^{m-1}) s
//   BL(S'^m) = BL(S'^{m-1}) S + BR(S'^{m-1}) r
//   BR(S'^m) = BL(S'^{m-1}) c + BR(S'^{m-1}) s
//
// where S' = [S c; r s] is the block after node v joins.
DenseMatrix induce_cyclic_correlations(DenseMatrix m, const DenseCyclicSpec& spec, std::uint64_t seed) {
    check_input(m, spec);
    if (spec.flip_prob == 0.0) return m;
    const int n = spec.n;
    const int k = spec.k;
    const int depth = k - 2;               // path length feeding w(b)
    const int stored = std::max(0, k - 3);  // highest full power kept

    // powers[p] holds S^p for p = 2..stored in its leading block.
    std::vector<DenseMatrix> powers(static_cast<std::size_t>(stored + 1));
    const int v0 = k - 1;
    {
        const DenseMatrix s = m.topLeftCorner(v0, v0);
        DenseMatrix acc = s;
        for (int p = 2; p <= stored; ++p) {
            acc = acc * s;
            powers[p] = DenseMatrix::Zero(n, n);
            powers[p].topLeftCorner(v0, v0) = acc;
        }
    }

    std::vector<Eigen::VectorXd> diag_pow(static_cast<std::size_t>(depth + 1));
    std::vector<Eigen::VectorXd> walk_diag(static_cast<std::size_t>(depth + 1));
    std::vector<Eigen::RowVectorXd> row_pow(static_cast<std::size_t>(depth + 1));
    std::vector<Eigen::VectorXd> right_col(static_cast<std::size_t>(stored + 1));
    std::vector<Eigen::RowVectorXd> bottom_row(static_cast<std::size_t>(stored + 1));
    std::vector<double> corner(static_cast<std::size_t>(stored + 1));

    for (int v = v0; v < n; ++v) {
        const auto s = m.topLeftCorner(v, v);
        auto power = [&](int p) -> Eigen::Ref<const DenseMatrix> {
            if (p == 1) return s;
            return powers[p].topLeftCorner(v, v);
        };

        diag_pow[1] = s.diagonal();
        for (int p = 2; p <= depth; ++p) {
            diag_pow[p] = power(p - 1).cwiseProduct(s.transpose()).rowwise().sum();
        }
        for (int j = 2; j <= depth; ++j) {
            walk_diag[j] = diag_pow[j];
            for (int i = 2; i < j; ++i) walk_diag[j] -= diag_pow[j - i].cwiseProduct(walk_diag[i]);
        }

        row_pow[0] = m.row(v).head(v);
        for (int p = 1; p <= depth; ++p) row_pow[p].noalias() = row_pow[p - 1] * s;

        Eigen::RowVectorXd q = row_pow[depth];
        for (int i = 2; i <= depth; ++i) {
            q -= row_pow[depth - i].cwiseProduct(walk_diag[i].transpose());
        }

        apply_flips(m, v, q, spec, seed);

        if (stored < 2 || v + 1 >= n) continue;

        // Grow S^2 ... S^stored to dimension v + 1 using the post-flip column.
        const Eigen::VectorXd c = m.col(v).head(v);
        const Eigen::RowVectorXd& r = row_pow[0];
        const double sv = m(v, v);
        right_col[1] = c;
        bottom_row[1] = r;
        corner[1] = sv;
        for (int p = 2; p <= stored; ++p) {
            auto tl = powers[p].topLeftCorner(v, v);
            for (int i = 1; i < p; ++i) tl.noalias() += right_col[i] * row_pow[p - 1 - i];
            right_col[p] = power(p - 1) * c + right_col[p - 1] * sv;
            bottom_row[p] = bottom_row[p - 1] * s + corner[p - 1] * r;
            corner[p] = bottom_row[p - 1].dot(c) + corner[p - 1] * sv;
            powers[p].col(v).head(v) = right_col[p];
            powers[p].row(v).head(v) = bottom_row[p];
            powers[p](v, v) = corner[p];
        }
    }
    return m;
}

}  // namespace trochoid::ensemble
