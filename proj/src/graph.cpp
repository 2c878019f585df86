#include "dae/graph.hpp"

#include <algorithm>
#include <cmath>

namespace dae {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows_in) {
    Matrix m(static_cast<int>(rows_in.size()),
             rows_in.empty() ? 0 : static_cast<int>(rows_in.front().size()));
    for (int r = 0; r < m.rows; ++r) {
        if (static_cast<int>(rows_in[static_cast<std::size_t>(r)].size()) != m.cols)
            throw DimensionMismatch("ragged row list in Matrix::from_rows");
        for (int c = 0; c < m.cols; ++c) m.at(r, c) = rows_in[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return m;
}

bool Matrix::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw DimensionMismatch("matmul " + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                                " * " + std::to_string(b.rows) + "x" + std::to_string(b.cols));
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            const double* brow = &b.data[static_cast<std::size_t>(k) * b.cols];
            double* orow = &out.data[static_cast<std::size_t>(i) * out.cols];
            for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Matrix transposed(const Matrix& a) {
    Matrix out(a.cols, a.rows);
    for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < a.cols; ++c) out.at(c, r) = a.at(r, c);
    return out;
}

Graph::NodeId Graph::emplace(Matrix value, bool requires_grad, std::function<void()> back) {
    Node n;
    n.grad = Matrix(value.rows, value.cols, 0.0);
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    n.back = std::move(back);
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
}

Graph::NodeId Graph::input(Matrix value) { return emplace(std::move(value), false, {}); }

Graph::NodeId Graph::param(const Matrix& value) { return emplace(value, true, {}); }

Graph::NodeId Graph::matmul(NodeId a, NodeId b) {
    Matrix out = dae::matmul(val(a), val(b));
    NodeId id = emplace(std::move(out), needs_grad(a) || needs_grad(b), {});
    nodes_.back().back = [this, a, b, id]() {
        const Matrix& g = grad(id);
        if (needs_grad(a)) {
            Matrix da = dae::matmul(g, transposed(val(b)));
            Matrix& acc = grad_mut(a);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += da.data[i];
        }
        if (needs_grad(b)) {
            Matrix db = dae::matmul(transposed(val(a)), g);
            Matrix& acc = grad_mut(b);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += db.data[i];
        }
    };
    return id;
}

Graph::NodeId Graph::add(NodeId a, NodeId b) {
    if (!val(a).same_shape(val(b))) throw DimensionMismatch("add with mismatched shapes");
    Matrix out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] += val(b).data[i];
    NodeId id = emplace(std::move(out), needs_grad(a) || needs_grad(b), {});
    nodes_.back().back = [this, a, b, id]() {
        const Matrix& g = grad(id);
        for (NodeId p : {a, b}) {
            if (!needs_grad(p)) continue;
            Matrix& acc = grad_mut(p);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += g.data[i];
        }
    };
    return id;
}

Graph::NodeId Graph::sub(NodeId a, NodeId b) {
    if (!val(a).same_shape(val(b))) throw DimensionMismatch("sub with mismatched shapes");
    Matrix out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] -= val(b).data[i];
    NodeId id = emplace(std::move(out), needs_grad(a) || needs_grad(b), {});
    nodes_.back().back = [this, a, b, id]() {
        const Matrix& g = grad(id);
        if (needs_grad(a)) {
            Matrix& acc = grad_mut(a);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += g.data[i];
        }
        if (needs_grad(b)) {
            Matrix& acc = grad_mut(b);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] -= g.data[i];
        }
    };
    return id;
}

Graph::NodeId Graph::mul_elem(NodeId a, NodeId b) {
    if (!val(a).same_shape(val(b))) throw DimensionMismatch("mul_elem with mismatched shapes");
    Matrix out = val(a);
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] *= val(b).data[i];
    NodeId id = emplace(std::move(out), needs_grad(a) || needs_grad(b), {});
    nodes_.back().back = [this, a, b, id]() {
        const Matrix& g = grad(id);
        if (needs_grad(a)) {
            Matrix& acc = grad_mut(a);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += g.data[i] * val(b).data[i];
        }
        if (needs_grad(b)) {
            Matrix& acc = grad_mut(b);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += g.data[i] * val(a).data[i];
        }
    };
    return id;
}

Graph::NodeId Graph::scale(NodeId a, double s) {
    Matrix out = val(a);
    for (double& v : out.data) v *= s;
    NodeId id = emplace(std::move(out), needs_grad(a), {});
    nodes_.back().back = [this, a, s, id]() {
        if (!needs_grad(a)) return;
        const Matrix& g = grad(id);
        Matrix& acc = grad_mut(a);
        for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += s * g.data[i];
    };
    return id;
}

Graph::NodeId Graph::add_row_broadcast(NodeId a, NodeId row) {
    const Matrix& x = val(a);
    const Matrix& b = val(row);
    if (b.rows != 1 || b.cols != x.cols) throw DimensionMismatch("add_row_broadcast bias shape");
    Matrix out = x;
    for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c) out.at(r, c) += b.at(0, c);
    NodeId id = emplace(std::move(out), needs_grad(a) || needs_grad(row), {});
    nodes_.back().back = [this, a, row, id]() {
        const Matrix& g = grad(id);
        if (needs_grad(a)) {
            Matrix& acc = grad_mut(a);
            for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += g.data[i];
        }
        if (needs_grad(row)) {
            Matrix& acc = grad_mut(row);
            for (int r = 0; r < g.rows; ++r)
                for (int c = 0; c < g.cols; ++c) acc.at(0, c) += g.at(r, c);
        }
    };
    return id;
}

Graph::NodeId Graph::transpose(NodeId a) {
    NodeId id = emplace(transposed(val(a)), needs_grad(a), {});
    nodes_.back().back = [this, a, id]() {
        if (!needs_grad(a)) return;
        Matrix gt = transposed(grad(id));
        Matrix& acc = grad_mut(a);
        for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += gt.data[i];
    };
    return id;
}

Graph::NodeId Graph::slice_cols(NodeId a, int c0, int c1) {
    const Matrix& x = val(a);
    if (c0 < 0 || c1 > x.cols || c0 >= c1) throw DimensionMismatch("slice_cols range");
    Matrix out(x.rows, c1 - c0);
    for (int r = 0; r < x.rows; ++r)
        for (int c = c0; c < c1; ++c) out.at(r, c - c0) = x.at(r, c);
    NodeId id = emplace(std::move(out), needs_grad(a), {});
    nodes_.back().back = [this, a, c0, c1, id]() {
        if (!needs_grad(a)) return;
        const Matrix& g = grad(id);
        Matrix& acc = grad_mut(a);
        for (int r = 0; r < g.rows; ++r)
            for (int c = c0; c < c1; ++c) acc.at(r, c) += g.at(r, c - c0);
    };
    return id;
}

Graph::NodeId Graph::concat_cols(const std::vector<NodeId>& parts) {
    if (parts.empty()) throw DimensionMismatch("concat_cols of nothing");
    int rows = val(parts[0]).rows;
    int cols = 0;
    bool rg = false;
    for (NodeId p : parts) {
        if (val(p).rows != rows) throw DimensionMismatch("concat_cols row mismatch");
        cols += val(p).cols;
        rg = rg || needs_grad(p);
    }
    Matrix out(rows, cols);
    int off = 0;
    for (NodeId p : parts) {
        const Matrix& x = val(p);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < x.cols; ++c) out.at(r, off + c) = x.at(r, c);
        off += x.cols;
    }
    NodeId id = emplace(std::move(out), rg, {});
    std::vector<NodeId> ps = parts;
    nodes_.back().back = [this, ps, id]() {
        const Matrix& g = grad(id);
        int off2 = 0;
        for (NodeId p : ps) {
            const int w = val(p).cols;
            if (needs_grad(p)) {
                Matrix& acc = grad_mut(p);
                for (int r = 0; r < g.rows; ++r)
                    for (int c = 0; c < w; ++c) acc.at(r, c) += g.at(r, off2 + c);
            }
            off2 += w;
        }
    };
    return id;
}

Graph::NodeId Graph::concat_rows(const std::vector<NodeId>& parts) {
    if (parts.empty()) throw DimensionMismatch("concat_rows of nothing");
    int cols = val(parts[0]).cols;
    int rows = 0;
    bool rg = false;
    for (NodeId p : parts) {
        if (val(p).cols != cols) throw DimensionMismatch("concat_rows col mismatch");
        rows += val(p).rows;
        rg = rg || needs_grad(p);
    }
    Matrix out(rows, cols);
    int off = 0;
    for (NodeId p : parts) {
        const Matrix& x = val(p);
        for (int r = 0; r < x.rows; ++r)
            for (int c = 0; c < cols; ++c) out.at(off + r, c) = x.at(r, c);
        off += x.rows;
    }
    NodeId id = emplace(std::move(out), rg, {});
    std::vector<NodeId> ps = parts;
    nodes_.back().back = [this, ps, id]() {
        const Matrix& g = grad(id);
        int off2 = 0;
        for (NodeId p : ps) {
            const int h = val(p).rows;
            if (needs_grad(p)) {
                Matrix& acc = grad_mut(p);
                for (int r = 0; r < h; ++r)
                    for (int c = 0; c < g.cols; ++c) acc.at(r, c) += g.at(off2 + r, c);
            }
            off2 += h;
        }
    };
    return id;
}

Graph::NodeId Graph::gather_rows(NodeId a, const std::vector<int>& indices) {
    const Matrix& x = val(a);
    Matrix out(static_cast<int>(indices.size()), x.cols);
    for (std::size_t r = 0; r < indices.size(); ++r) {
        int src = indices[r];
        if (src < 0 || src >= x.rows) throw DimensionMismatch("gather_rows index out of range");
        for (int c = 0; c < x.cols; ++c) out.at(static_cast<int>(r), c) = x.at(src, c);
    }
    NodeId id = emplace(std::move(out), needs_grad(a), {});
    std::vector<int> idx = indices;
    nodes_.back().back = [this, a, idx, id]() {
        if (!needs_grad(a)) return;
        const Matrix& g = grad(id);
        Matrix& acc = grad_mut(a);
        for (std::size_t r = 0; r < idx.size(); ++r)
            for (int c = 0; c < g.cols; ++c) acc.at(idx[r], c) += g.at(static_cast<int>(r), c);
    };
    return id;
}

Graph::NodeId Graph::softmax_rows(NodeId a) {
    const Matrix& x = val(a);
    Matrix out(x.rows, x.cols);
    for (int r = 0; r < x.rows; ++r) {
        double mx = x.at(r, 0);
        for (int c = 1; c < x.cols; ++c) mx = std::max(mx, x.at(r, c));
        double sum = 0.0;
        for (int c = 0; c < x.cols; ++c) {
            double e = std::exp(x.at(r, c) - mx);
            out.at(r, c) = e;
            sum += e;
        }
        for (int c = 0; c < x.cols; ++c) out.at(r, c) /= sum;
    }
    NodeId id = emplace(std::move(out), needs_grad(a), {});
    nodes_.back().back = [this, a, id]() {
        if (!needs_grad(a)) return;
        const Matrix& g = grad(id);
        const Matrix& y = val(id);
        Matrix& acc = grad_mut(a);
        for (int r = 0; r < y.rows; ++r) {
            double dot = 0.0;
            for (int c = 0; c < y.cols; ++c) dot += g.at(r, c) * y.at(r, c);
            for (int c = 0; c < y.cols; ++c)
                acc.at(r, c) += y.at(r, c) * (g.at(r, c) - dot);
        }
    };
    return id;
}

Graph::NodeId Graph::layer_norm_rows(NodeId xid, NodeId gain, NodeId bias, double eps) {
    const Matrix& x = val(xid);
    const Matrix& g = val(gain);
    const Matrix& b = val(bias);
    if (g.rows != 1 || g.cols != x.cols || b.rows != 1 || b.cols != x.cols)
        throw DimensionMismatch("layer_norm gain/bias shape");
    Matrix norm(x.rows, x.cols);   // x_hat
    std::vector<double> inv_sigma(static_cast<std::size_t>(x.rows));
    for (int r = 0; r < x.rows; ++r) {
        double mean = 0.0;
        for (int c = 0; c < x.cols; ++c) mean += x.at(r, c);
        mean /= x.cols;
        double var = 0.0;
        for (int c = 0; c < x.cols; ++c) {
            double d = x.at(r, c) - mean;
            var += d * d;
        }
        var /= x.cols;
        double is = 1.0 / std::sqrt(var + eps);
        inv_sigma[static_cast<std::size_t>(r)] = is;
        for (int c = 0; c < x.cols; ++c) norm.at(r, c) = (x.at(r, c) - mean) * is;
    }
    Matrix out(x.rows, x.cols);
    for (int r = 0; r < x.rows; ++r)
        for (int c = 0; c < x.cols; ++c) out.at(r, c) = norm.at(r, c) * g.at(0, c) + b.at(0, c);

    bool rg = needs_grad(xid) || needs_grad(gain) || needs_grad(bias);
    NodeId id = emplace(std::move(out), rg, {});
    Matrix norm_copy = std::move(norm);
    nodes_.back().back = [this, xid, gain, bias, id, norm_copy, inv_sigma]() {
        const Matrix& dy = grad(id);
        const Matrix& gv = val(gain);
        const int R = dy.rows;
        const int C = dy.cols;
        if (needs_grad(gain)) {
            Matrix& acc = grad_mut(gain);
            for (int r = 0; r < R; ++r)
                for (int c = 0; c < C; ++c) acc.at(0, c) += dy.at(r, c) * norm_copy.at(r, c);
        }
        if (needs_grad(bias)) {
            Matrix& acc = grad_mut(bias);
            for (int r = 0; r < R; ++r)
                for (int c = 0; c < C; ++c) acc.at(0, c) += dy.at(r, c);
        }
        if (needs_grad(xid)) {
            Matrix& acc = grad_mut(xid);
            for (int r = 0; r < R; ++r) {
                double mean_gdy = 0.0;
                double mean_gdy_xhat = 0.0;
                for (int c = 0; c < C; ++c) {
                    double gd = dy.at(r, c) * gv.at(0, c);
                    mean_gdy += gd;
                    mean_gdy_xhat += gd * norm_copy.at(r, c);
                }
                mean_gdy /= C;
                mean_gdy_xhat /= C;
                for (int c = 0; c < C; ++c) {
                    double gd = dy.at(r, c) * gv.at(0, c);
                    acc.at(r, c) += (gd - mean_gdy - norm_copy.at(r, c) * mean_gdy_xhat) *
                                    inv_sigma[static_cast<std::size_t>(r)];
                }
            }
        }
    };
    return id;
}

Graph::NodeId Graph::tanh_act(NodeId a) {
    Matrix out = val(a);
    for (double& v : out.data) v = std::tanh(v);
    NodeId id = emplace(std::move(out), needs_grad(a), {});
    nodes_.back().back = [this, a, id]() {
        if (!needs_grad(a)) return;
        const Matrix& g = grad(id);
        const Matrix& y = val(id);
        Matrix& acc = grad_mut(a);
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc.data[i] += g.data[i] * (1.0 - y.data[i] * y.data[i]);
    };
    return id;
}

Graph::NodeId Graph::abs_elem(NodeId a) {
    Matrix out = val(a);
    for (double& v : out.data) v = std::fabs(v);
    NodeId id = emplace(std::move(out), needs_grad(a), {});
    nodes_.back().back = [this, a, id]() {
        if (!needs_grad(a)) return;
        const Matrix& g = grad(id);
        const Matrix& x = val(a);
        Matrix& acc = grad_mut(a);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            double s = x.data[i] > 0.0 ? 1.0 : (x.data[i] < 0.0 ? -1.0 : 0.0);
            acc.data[i] += g.data[i] * s;
        }
    };
    return id;
}

Graph::NodeId Graph::log_clamped(NodeId a, double floor) {
    const Matrix& x = val(a);
    Matrix out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.size(); ++i) out.data[i] = std::log(std::max(x.data[i], floor));
    NodeId id = emplace(std::move(out), needs_grad(a), {});
    nodes_.back().back = [this, a, floor, id]() {
        if (!needs_grad(a)) return;
        const Matrix& g = grad(id);
        const Matrix& x2 = val(a);
        Matrix& acc = grad_mut(a);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            if (x2.data[i] > floor) acc.data[i] += g.data[i] / x2.data[i];
            // below the clamp the output is constant
        }
    };
    return id;
}

Graph::NodeId Graph::mean_rows(NodeId a) {
    const Matrix& x = val(a);
    if (x.rows < 1) throw DimensionMismatch("mean_rows of empty matrix");
    Matrix out(1, x.cols);
    for (int r = 0; r < x.rows; ++r)
        for (int c = 0; c < x.cols; ++c) out.at(0, c) += x.at(r, c);
    for (int c = 0; c < x.cols; ++c) out.at(0, c) /= x.rows;
    NodeId id = emplace(std::move(out), needs_grad(a), {});
    nodes_.back().back = [this, a, id]() {
        if (!needs_grad(a)) return;
        const Matrix& g = grad(id);
        Matrix& acc = grad_mut(a);
        const double inv = 1.0 / acc.rows;
        for (int r = 0; r < acc.rows; ++r)
            for (int c = 0; c < acc.cols; ++c) acc.at(r, c) += g.at(0, c) * inv;
    };
    return id;
}

Graph::NodeId Graph::max_rows(NodeId a) {
    const Matrix& x = val(a);
    if (x.rows < 1) throw DimensionMismatch("max_rows of empty matrix");
    Matrix out(1, x.cols);
    std::vector<int> argmax(static_cast<std::size_t>(x.cols), 0);
    for (int c = 0; c < x.cols; ++c) {
        double best = x.at(0, c);
        int bi = 0;
        for (int r = 1; r < x.rows; ++r) {
            if (x.at(r, c) > best) {
                best = x.at(r, c);
                bi = r;
            }
        }
        out.at(0, c) = best;
        argmax[static_cast<std::size_t>(c)] = bi;
    }
    NodeId id = emplace(std::move(out), needs_grad(a), {});
    nodes_.back().back = [this, a, id, argmax]() {
        if (!needs_grad(a)) return;
        const Matrix& g = grad(id);
        Matrix& acc = grad_mut(a);
        for (int c = 0; c < g.cols; ++c)
            acc.at(argmax[static_cast<std::size_t>(c)], c) += g.at(0, c);
    };
    return id;
}

Graph::NodeId Graph::sum_all(NodeId a) {
    const Matrix& x = val(a);
    Matrix out(1, 1);
    for (double v : x.data) out.at(0, 0) += v;
    NodeId id = emplace(std::move(out), needs_grad(a), {});
    nodes_.back().back = [this, a, id]() {
        if (!needs_grad(a)) return;
        double g = grad(id).at(0, 0);
        Matrix& acc = grad_mut(a);
        for (double& v : acc.data) v += g;
    };
    return id;
}

Graph::NodeId Graph::sum_squares(NodeId a) {
    const Matrix& x = val(a);
    Matrix out(1, 1);
    for (double v : x.data) out.at(0, 0) += v * v;
    NodeId id = emplace(std::move(out), needs_grad(a), {});
    nodes_.back().back = [this, a, id]() {
        if (!needs_grad(a)) return;
        double g = grad(id).at(0, 0);
        const Matrix& x2 = val(a);
        Matrix& acc = grad_mut(a);
        for (std::size_t i = 0; i < acc.size(); ++i) acc.data[i] += 2.0 * x2.data[i] * g;
    };
    return id;
}

void Graph::backward(NodeId root) {
    Node& r = nodes_[static_cast<std::size_t>(root)];
    if (r.value.rows != 1 || r.value.cols != 1)
        throw DimensionMismatch("backward root must be a scalar");
    r.grad.at(0, 0) = 1.0;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
        Node& n = nodes_[i];
        if (n.requires_grad && n.back) n.back();
    }
}

std::vector<int> top_k_indices(const std::vector<double>& scores, int k) {
    const int n = static_cast<int>(scores.size());
    const int take = std::min(k, n);
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](int l, int r) {
        return scores[static_cast<std::size_t>(l)] > scores[static_cast<std::size_t>(r)];
    });
    std::vector<int> picked(order.begin(), order.begin() + take);
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace dae
