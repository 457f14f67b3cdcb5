"""CART tree growing on sparse CSR/CSC data (numba kernels).

One builder serves both tree kinds:

* classification: weighted Gini over the three classes, leaves hold class weights;
* regression: squared error on a real target, leaves hold the weighted mean.

A node splits on ``x[f] <= threshold``. Candidate features are drawn from the
features that are nonzero somewhere in the node (all others are constant
there); at most ``mtry`` non-constant features are examined per node.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from numba import njit

CLASSIFY = 0
REGRESS = 1
UNLIMITED_DEPTH = 2**62


@njit(cache=True)
def _row_value(row_ptr, row_col, row_val, r, f):
    lo = row_ptr[r]
    hi = row_ptr[r + 1]
    while lo < hi:
        mid = (lo + hi) >> 1
        c = row_col[mid]
        if c < f:
            lo = mid + 1
        elif c > f:
            hi = mid
        else:
            return row_val[mid]
    return 0.0


@njit(cache=True)
def _gather(f, perm, start, end, node_id, node_of, col_ptr, col_row, col_val,
            row_ptr, row_col, row_val, out_rows, out_vals):
    """Nonzero values of feature ``f`` among the node's rows; returns their count."""
    k = 0
    size = end - start
    nnz = col_ptr[f + 1] - col_ptr[f]
    if size * 4 < nnz:
        for p in range(start, end):
            r = perm[p]
            v = _row_value(row_ptr, row_col, row_val, r, f)
            if v != 0.0:
                out_rows[k] = r
                out_vals[k] = v
                k += 1
        # keep row order canonical so both paths feed identical sequences
        o = np.argsort(out_rows[:k])
        tmp_r = out_rows[:k][o].copy()
        tmp_v = out_vals[:k][o].copy()
        out_rows[:k] = tmp_r
        out_vals[:k] = tmp_v
    else:
        for j in range(col_ptr[f], col_ptr[f + 1]):
            r = col_row[j]
            if node_of[r] == node_id:
                out_rows[k] = r
                out_vals[k] = col_val[j]
                k += 1
    return k


@njit(cache=True)
def _score(mode, lw, lc, ls, rw, rc, rs):
    # larger is better; equals minus the weighted impurity up to a node constant
    if mode == CLASSIFY:
        a = 0.0
        b = 0.0
        for c in range(3):
            a += lc[c] * lc[c]
            b += rc[c] * rc[c]
        return a / lw + b / rw
    return ls * ls / lw + rs * rs / rw


@njit(cache=True, nogil=True)
def build_tree(mode, col_ptr, col_row, col_val, row_ptr, row_col, row_val,
               n_features, counts, weights, y_cls, y_reg,
               max_depth, min_leaf, mtry, seed):
    np.random.seed(seed)
    n_rows = counts.shape[0]
    n_active = 0
    for i in range(n_rows):
        if counts[i] > 0:
            n_active += 1
    perm = np.empty(n_active, dtype=np.int64)
    j = 0
    for i in range(n_rows):
        if counts[i] > 0:
            perm[j] = i
            j += 1

    cap = 2 * max(n_active, 1) + 1
    n_out = 3 if mode == CLASSIFY else 1
    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    value = np.zeros((cap, n_out))
    n_nodes = 1

    node_of = np.full(n_rows, -1, dtype=np.int64)
    mark = np.full(n_features, -1, dtype=np.int64)
    feats = np.empty(n_features, dtype=np.int64)
    buf_rows = np.empty(n_active + 1, dtype=np.int64)
    buf_vals = np.empty(n_active + 1)
    go_right = np.zeros(n_rows, dtype=np.bool_)
    tmp = np.empty(n_active, dtype=np.int64)

    st_node = np.empty(cap, dtype=np.int64)
    st_start = np.empty(cap, dtype=np.int64)
    st_end = np.empty(cap, dtype=np.int64)
    st_depth = np.empty(cap, dtype=np.int64)
    sp_ = 0
    st_node[0] = 0
    st_start[0] = 0
    st_end[0] = n_active
    st_depth[0] = 0
    sp_ = 1

    tot_c = np.zeros(3)
    lc = np.zeros(3)
    rc = np.zeros(3)

    while sp_ > 0:
        sp_ -= 1
        node = st_node[sp_]
        start = st_start[sp_]
        end = st_end[sp_]
        depth = st_depth[sp_]

        tot_w = 0.0
        tot_s = 0.0
        tot_n = 0
        tot_c[:] = 0.0
        for p in range(start, end):
            r = perm[p]
            node_of[r] = node
            w = weights[r]
            tot_w += w
            tot_n += counts[r]
            if mode == CLASSIFY:
                tot_c[y_cls[r]] += w
            else:
                tot_s += w * y_reg[r]
        if mode == CLASSIFY:
            for c in range(3):
                value[node, c] = tot_c[c]
        else:
            value[node, 0] = tot_s / tot_w if tot_w > 0 else 0.0

        if depth >= max_depth or tot_n < 2 * min_leaf or tot_w <= 0.0:
            continue
        pure = True
        if mode == CLASSIFY:
            nonzero_classes = 0
            for c in range(3):
                if tot_c[c] > 0:
                    nonzero_classes += 1
            pure = nonzero_classes <= 1
        else:
            first = y_reg[perm[start]]
            for p in range(start, end):
                if y_reg[perm[p]] != first:
                    pure = False
                    break
        if pure:
            continue

        # candidate features: nonzero somewhere in this node
        n_feats = 0
        for p in range(start, end):
            r = perm[p]
            for q in range(row_ptr[r], row_ptr[r + 1]):
                f = row_col[q]
                if mark[f] != node:
                    mark[f] = node
                    feats[n_feats] = f
                    n_feats += 1
        cand = np.sort(feats[:n_feats])
        if mtry > 0 and mtry < n_feats:
            np.random.shuffle(cand)

        best_score = -np.inf
        best_f = -1
        best_thr = 0.0
        evaluated = 0
        for fi in range(n_feats):
            if mtry > 0 and evaluated >= mtry:
                break
            f = cand[fi]
            k = _gather(f, perm, start, end, node, node_of, col_ptr, col_row, col_val,
                        row_ptr, row_col, row_val, buf_rows, buf_vals)
            nz_n = 0
            for q in range(k):
                nz_n += counts[buf_rows[q]]
            zero_n = tot_n - nz_n
            order = np.argsort(buf_vals[:k], kind="mergesort")

            lw = 0.0
            ls = 0.0
            ln = 0
            lc[:] = 0.0
            found = False
            has_prev = False
            prev = 0.0
            zero_done = zero_n == 0
            p = 0
            while p < k or not zero_done:
                take_zero = (not zero_done) and (p == k or buf_vals[order[p]] > 0.0)
                v_next = 0.0 if take_zero else buf_vals[order[p]]
                if has_prev and v_next > prev and ln >= min_leaf and tot_n - ln >= min_leaf:
                    rw = tot_w - lw
                    if lw > 0.0 and rw > 0.0:
                        for c in range(3):
                            rc[c] = tot_c[c] - lc[c]
                        s = _score(mode, lw, lc, ls, rw, rc, tot_s - ls)
                        found = True
                        if s > best_score:
                            best_score = s
                            best_f = f
                            thr = 0.5 * (prev + v_next)
                            if thr >= v_next:
                                thr = prev
                            best_thr = thr
                if take_zero:
                    # the zero block is everything in the node minus the nonzeros seen
                    zw = tot_w
                    zs = tot_s
                    for c in range(3):
                        rc[c] = tot_c[c]
                    for q in range(k):
                        r = buf_rows[q]
                        zw -= weights[r]
                        if mode == CLASSIFY:
                            rc[y_cls[r]] -= weights[r]
                        else:
                            zs -= weights[r] * y_reg[r]
                    lw += zw
                    ls += zs
                    ln += zero_n
                    for c in range(3):
                        lc[c] += rc[c]
                    zero_done = True
                else:
                    r = buf_rows[order[p]]
                    w = weights[r]
                    lw += w
                    ln += counts[r]
                    if mode == CLASSIFY:
                        lc[y_cls[r]] += w
                    else:
                        ls += w * y_reg[r]
                    p += 1
                prev = v_next
                has_prev = True
            if found:
                evaluated += 1

        if best_f < 0:
            continue

        k = _gather(best_f, perm, start, end, node, node_of, col_ptr, col_row, col_val,
                    row_ptr, row_col, row_val, buf_rows, buf_vals)
        zero_right = 0.0 > best_thr
        for p in range(start, end):
            go_right[perm[p]] = zero_right
        for q in range(k):
            go_right[buf_rows[q]] = buf_vals[q] > best_thr
        n_left = 0
        for p in range(start, end):
            if not go_right[perm[p]]:
                tmp[n_left] = perm[p]
                n_left += 1
        m = n_left
        for p in range(start, end):
            if go_right[perm[p]]:
                tmp[m] = perm[p]
                m += 1
        for p in range(start, end):
            perm[p] = tmp[p - start]

        lid = n_nodes
        rid = n_nodes + 1
        n_nodes += 2
        feature[node] = best_f
        threshold[node] = best_thr
        left[node] = lid
        right[node] = rid
        mid = start + n_left
        st_node[sp_] = rid
        st_start[sp_] = mid
        st_end[sp_] = end
        st_depth[sp_] = depth + 1
        sp_ += 1
        st_node[sp_] = lid
        st_start[sp_] = start
        st_end[sp_] = mid
        st_depth[sp_] = depth + 1
        sp_ += 1

    return (feature[:n_nodes].copy(), threshold[:n_nodes].copy(), left[:n_nodes].copy(),
            right[:n_nodes].copy(), value[:n_nodes].copy())


@njit(cache=True, nogil=True)
def apply_tree(feature, threshold, left, right, row_ptr, row_col, row_val, n_rows):
    out = np.empty(n_rows, dtype=np.int64)
    for r in range(n_rows):
        node = 0
        while feature[node] >= 0:
            v = _row_value(row_ptr, row_col, row_val, r, feature[node])
            node = left[node] if v <= threshold[node] else right[node]
        out[r] = node
    return out


@dataclass(eq=False)
class Tree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def apply(self, X: sp.csr_matrix) -> np.ndarray:
        X = _as_csr(X)
        return apply_tree(self.feature, self.threshold, self.left, self.right,
                          X.indptr, X.indices, X.data, X.shape[0])

    def predict_value(self, X: sp.csr_matrix) -> np.ndarray:
        return self.value[self.apply(X)]

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict, n_features: int) -> "Tree":
        tree = cls(
            np.asarray(d["feature"], dtype=np.int64),
            np.asarray(d["threshold"], dtype=np.float64),
            np.asarray(d["left"], dtype=np.int64),
            np.asarray(d["right"], dtype=np.int64),
            np.asarray(d["value"], dtype=np.float64),
        )
        n = tree.n_nodes
        shapes_ok = all(a.shape == (n,) for a in (tree.threshold, tree.left, tree.right)) and tree.value.shape[0] == n
        internal = tree.feature >= 0
        refs_ok = (
            np.all(tree.feature < n_features)
            and np.all((tree.left[internal] > 0) & (tree.left[internal] < n))
            and np.all((tree.right[internal] > 0) & (tree.right[internal] < n))
        )
        if not (shapes_ok and refs_ok and n > 0):
            raise ValueError("tree arrays are inconsistent")
        return tree


def _as_csr(X) -> sp.csr_matrix:
    X = sp.csr_matrix(X, dtype=np.float64)
    if not X.has_sorted_indices:
        X = X.copy()
        X.sort_indices()
    return X


class TreeData:
    """CSR and CSC views of one training matrix, prepared once and shared by all trees."""

    def __init__(self, X):
        csr = _as_csr(X)
        csr.eliminate_zeros()
        csc = csr.tocsc()
        csc.sort_indices()
        self.n_rows, self.n_features = csr.shape
        self.row = (csr.indptr.astype(np.int64), csr.indices.astype(np.int64), csr.data)
        self.col = (csc.indptr.astype(np.int64), csc.indices.astype(np.int64), csc.data)

    def grow(self, mode, counts, weights, y_cls, y_reg, max_depth, min_leaf, mtry, seed) -> Tree:
        arrays = build_tree(
            mode, *self.col, *self.row, self.n_features,
            np.asarray(counts, dtype=np.int64), np.asarray(weights, dtype=np.float64),
            np.asarray(y_cls, dtype=np.int64), np.asarray(y_reg, dtype=np.float64),
            int(max_depth), int(min_leaf), int(mtry), int(seed) & 0xFFFFFFFF,
        )
        return Tree(*arrays)
