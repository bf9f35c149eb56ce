#include "lrlab/basis_blocks.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

#include "lrlab/errors.hpp"

namespace lrlab {

Block::Block(std::vector<Label> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw DomainError("block must contain at least one label");
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

Block Block::interval(Label first, Label last) {
    if (last < first) throw DomainError("interval block with last < first");
    std::vector<Label> labels(last - first + 1);
    std::iota(labels.begin(), labels.end(), first);
    return Block(std::move(labels));
}

bool Block::contains(Label l) const {
    return std::binary_search(labels_.begin(), labels_.end(), l);
}

bool Block::intersects(const Block& other) const {
    auto a = labels_.begin();
    auto b = other.labels_.begin();
    while (a != labels_.end() && b != other.labels_.end()) {
        if (*a == *b) return true;
        if (*a < *b) ++a; else ++b;
    }
    return false;
}

std::size_t diameter(const Block& block) { return block.diameter(); }

std::size_t block_distance(const Block& a, const Block& b) {
    // Merge walk over the two sorted lists; the closest pair is adjacent in
    // the merged order.
    std::size_t best = std::numeric_limits<std::size_t>::max();
    auto i = a.labels().begin();
    auto j = b.labels().begin();
    while (i != a.labels().end() && j != b.labels().end()) {
        const std::size_t d = *i > *j ? *i - *j : *j - *i;
        best = std::min(best, d);
        if (d == 0) break;
        if (*i < *j) ++i; else ++j;
    }
    return best;
}

Matrix BlockTerm::embed(std::size_t dimension) const {
    Matrix full = Matrix::Zero(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(dimension));
    const auto& l = block.labels();
    for (std::size_t r = 0; r < l.size(); ++r)
        for (std::size_t c = 0; c < l.size(); ++c)
            full(static_cast<Eigen::Index>(l[r]), static_cast<Eigen::Index>(l[c])) =
                local(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return full;
}

Matrix BlockDecomposition::reconstruct() const {
    const auto n = static_cast<Eigen::Index>(dimension);
    Matrix sum = Matrix::Zero(n, n);
    for (const auto& t : terms) {
        const auto& l = t.block.labels();
        for (std::size_t r = 0; r < l.size(); ++r)
            for (std::size_t c = 0; c < l.size(); ++c)
                sum(static_cast<Eigen::Index>(l[r]), static_cast<Eigen::Index>(l[c])) +=
                    t.local(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    return sum;
}

BlockDecomposition pairwise_decompose(const Matrix& h) {
    require_hermitian(h, 1e-12, "pairwise_decompose");
    BlockDecomposition out;
    out.dimension = static_cast<std::size_t>(h.rows());
    const auto n = h.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex d = h(i, i);
        Matrix local(1, 1);
        local(0, 0) = d;
        out.terms.push_back({Block{static_cast<Label>(i)}, std::move(local), std::abs(d)});
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (std::abs(h(i, j)) <= kStructuralZero && std::abs(h(j, i)) <= kStructuralZero) continue;
            Matrix local = Matrix::Zero(2, 2);
            local(0, 1) = h(i, j);
            local(1, 0) = h(j, i);
            // A Hermitian 2x2 with zero diagonal has norm |H_ij|.
            const double norm = operator_norm(local);
            out.terms.push_back({Block{static_cast<Label>(i), static_cast<Label>(j)}, std::move(local), norm});
        }
    }
    return out;
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<Label> p(n);
    std::iota(p.begin(), p.end(), Label{0});
    return Permutation(std::move(p));
}

Permutation::Permutation(std::vector<Label> new_label) : new_label_(std::move(new_label)) {
    std::vector<bool> seen(new_label_.size(), false);
    for (Label l : new_label_) {
        if (l >= new_label_.size() || seen[l]) throw ValidationError("permutation is not a bijection");
        seen[l] = true;
    }
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < new_label_.size(); ++i)
        if (new_label_[i] != i) return false;
    return true;
}

Matrix Permutation::apply(const Matrix& m) const {
    if (static_cast<std::size_t>(m.rows()) != size() || m.rows() != m.cols())
        throw ValidationError("permutation size does not match matrix");
    if (is_identity()) return m;
    Matrix out(m.rows(), m.cols());
    const auto n = static_cast<std::size_t>(m.rows());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(static_cast<Eigen::Index>(new_label_[i]), static_cast<Eigen::Index>(new_label_[j])) =
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
}

Permutation reorder_basis(const Matrix& h, ReorderStrategy strategy) {
    const auto n = static_cast<std::size_t>(h.rows());
    if (strategy == ReorderStrategy::identity) return Permutation::identity(n);

    struct Edge {
        Label to;
        double weight;
    };
    std::vector<std::vector<Edge>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double w = std::max(std::abs(h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))),
                                      std::abs(h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))));
            if (w > kStructuralZero) adj[i].push_back({j, w});
        }
        std::stable_sort(adj[i].begin(), adj[i].end(),
                         [](const Edge& a, const Edge& b) { return a.weight > b.weight; });
    }

    std::vector<Label> order;
    order.reserve(n);
    std::vector<bool> visited(n, false);
    while (order.size() < n) {
        // Each component starts from its lowest-degree unvisited level.
        Label start = n;
        for (Label v = 0; v < n; ++v) {
            if (visited[v]) continue;
            if (start == n || adj[v].size() < adj[start].size()) start = v;
        }
        std::queue<Label> frontier;
        frontier.push(start);
        visited[start] = true;
        while (!frontier.empty()) {
            const Label v = frontier.front();
            frontier.pop();
            order.push_back(v);
            for (const Edge& e : adj[v]) {
                if (visited[e.to]) continue;
                visited[e.to] = true;
                frontier.push(e.to);
            }
        }
    }

    std::vector<Label> new_label(n);
    for (std::size_t pos = 0; pos < n; ++pos) new_label[order[pos]] = pos;
    return Permutation(std::move(new_label));
}

}  // namespace lrlab
