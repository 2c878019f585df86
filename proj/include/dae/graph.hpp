#ifndef DAE_GRAPH_HPP
#define DAE_GRAPH_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dae/common.hpp"

namespace dae {

// ---------------------------------------------------------------------------
// Dense row-major matrix of doubles. Everything in the model path is 64-bit;
// the gradient checks depend on it.
// ---------------------------------------------------------------------------

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

    static Matrix from_rows(const std::vector<std::vector<double>>& rows_in);

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
    bool all_finite() const;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transposed(const Matrix& a);

// ---------------------------------------------------------------------------
// Reverse-mode autodiff over matrices. Nodes live in an arena owned by the
// Graph; handles are plain ints. backward() walks the arena in reverse
// creation order, which is a topological order by construction.
// ---------------------------------------------------------------------------

class Graph {
public:
    using NodeId = int;

    NodeId input(Matrix value);            // constant leaf, no gradient
    NodeId param(const Matrix& value);     // leaf that accumulates gradient
    NodeId zeros(int rows, int cols) { return input(Matrix(rows, cols, 0.0)); }

    const Matrix& val(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    const Matrix& grad(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].grad; }

    NodeId matmul(NodeId a, NodeId b);
    NodeId add(NodeId a, NodeId b);
    NodeId sub(NodeId a, NodeId b);
    NodeId mul_elem(NodeId a, NodeId b);
    NodeId scale(NodeId a, double s);
    NodeId add_row_broadcast(NodeId a, NodeId row);  // X + 1·b, b is 1×cols
    NodeId transpose(NodeId a);
    NodeId slice_cols(NodeId a, int c0, int c1);     // [c0, c1)
    NodeId concat_cols(const std::vector<NodeId>& parts);
    NodeId concat_rows(const std::vector<NodeId>& parts);
    NodeId gather_rows(NodeId a, const std::vector<int>& indices);
    NodeId softmax_rows(NodeId a);
    NodeId layer_norm_rows(NodeId x, NodeId gain, NodeId bias, double eps = 1e-5);
    NodeId tanh_act(NodeId a);
    NodeId abs_elem(NodeId a);
    NodeId log_clamped(NodeId a, double floor = 1e-12);
    NodeId mean_rows(NodeId a);  // 1×cols
    NodeId max_rows(NodeId a);   // 1×cols, ties resolved to the lowest row index
    NodeId sum_all(NodeId a);    // 1×1
    NodeId sum_squares(NodeId a);// 1×1

    // Seeds the root gradient with 1 and accumulates into every parameter
    // reachable from it. `root` must be 1×1.
    void backward(NodeId root);

    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        Matrix value;
        Matrix grad;
        bool requires_grad = false;
        std::function<void()> back;  // empty for leaves
    };

    NodeId emplace(Matrix value, bool requires_grad, std::function<void()> back);
    Matrix& grad_mut(NodeId id) { return nodes_[static_cast<std::size_t>(id)].grad; }
    bool needs_grad(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].requires_grad; }

    std::vector<Node> nodes_;
};

// Indices of the k largest entries of `scores` (ties broken toward the lower
// index), returned in increasing index order. Shared by the model and the
// standalone select_topk op so there is a single selection rule.
std::vector<int> top_k_indices(const std::vector<double>& scores, int k);

}  // namespace dae

#endif
