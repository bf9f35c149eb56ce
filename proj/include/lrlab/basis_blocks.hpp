#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "lrlab/numerics.hpp"

namespace lrlab {

/// Position of a level in the ordered representation basis.
using Label = std::size_t;

/// Nonempty set of basis labels, kept sorted and duplicate-free.
class Block {
public:
    /// Sorts and deduplicates. Throws DomainError on an empty label list.
    explicit Block(std::vector<Label> labels);
    Block(std::initializer_list<Label> labels) : Block(std::vector<Label>(labels)) {}

    /// Contiguous labels first..last inclusive.
    static Block interval(Label first, Label last);

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t diameter() const noexcept { return labels_.back() - labels_.front(); }
    Label min() const noexcept { return labels_.front(); }
    Label max() const noexcept { return labels_.back(); }
    const std::vector<Label>& labels() const noexcept { return labels_; }

    bool contains(Label l) const;
    bool intersects(const Block& other) const;

    friend bool operator==(const Block&, const Block&) = default;

private:
    std::vector<Label> labels_;
};

std::size_t diameter(const Block& block);

/// min over i in a, j in b of |i - j|.
std::size_t block_distance(const Block& a, const Block& b);

/// One H_Z: the restriction of a matrix to the rows/columns of its block,
/// stored compactly as a |Z| x |Z| submatrix.
struct BlockTerm {
    Block block;
    Matrix local;
    double norm;  // operator norm of `local`, identical to that of the embedding

    /// The term as a full dimension x dimension matrix.
    Matrix embed(std::size_t dimension) const;
};

struct BlockDecomposition {
    std::vector<BlockTerm> terms;
    std::size_t dimension = 0;

    /// Sum of all embedded terms.
    Matrix reconstruct() const;
};

/// Entries with magnitude at or below this are structural zeros.
inline constexpr double kStructuralZero = 1e-14;

/// Singleton term per diagonal entry (zero ones included), two-label term per
/// off-diagonal pair above kStructuralZero. Throws ValidationError unless H is Hermitian to 1e-12.
BlockDecomposition pairwise_decompose(const Matrix& h);

/// Relabeling of the basis: new_label[old] is the position a level moves to.
class Permutation {
public:
    static Permutation identity(std::size_t n);
    /// Throws ValidationError unless `new_label` is a bijection on 0..n-1.
    explicit Permutation(std::vector<Label> new_label);

    std::size_t size() const noexcept { return new_label_.size(); }
    Label operator()(Label old) const { return new_label_[old]; }
    const std::vector<Label>& new_labels() const noexcept { return new_label_; }
    bool is_identity() const;

    /// Matrix in the relabeled basis: result(π(i), π(j)) = m(i, j).
    Matrix apply(const Matrix& m) const;

private:
    std::vector<Label> new_label_;
};

enum class ReorderStrategy { identity, bandwidth_greedy };

/// Cuthill-McKee-style breadth-first relabeling on the |H_ij| graph. Heavier
/// edges are visited first; ties go to the lower original label.
Permutation reorder_basis(const Matrix& h, ReorderStrategy strategy);

}  // namespace lrlab
