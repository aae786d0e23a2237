//! Smith normal form with unimodular transforms, and saturated integer
//! kernels derived from it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal,
/// `d[0] | d[1] | …`, all diagonal entries nonnegative.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn row_add(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_row_multiple(dst, src, f);
        self.u.add_row_multiple(dst, src, f);
        self.u_inv.add_col_multiple(src, dst, &-f);
    }

    fn col_add(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_col_multiple(dst, src, f);
        self.v.add_col_multiple(dst, src, f);
        self.v_inv.add_row_multiple(src, dst, &-f);
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a[(i, j)].abs();
                if !x.is_zero() && best.as_ref().map_or(true, |b| x < b.2) {
                    best = Some((i, j, x));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = w.min_entry(t) else { break };
        w.row_swap(t, pi);
        w.col_swap(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if !w.a[(i, t)].is_zero() {
                    let q = w.a[(i, t)].div_floor(&w.a[(t, t)]);
                    w.row_add(i, t, &-q);
                    if !w.a[(i, t)].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !w.a[(t, j)].is_zero() {
                    let q = w.a[(t, j)].div_floor(&w.a[(t, t)]);
                    w.col_add(j, t, &-q);
                    if !w.a[(t, j)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                // a remainder smaller than the pivot exists in row/column t
                let mut best = (t, t, w.a[(t, t)].abs());
                for i in t + 1..m {
                    let x = w.a[(i, t)].abs();
                    if !x.is_zero() && x < best.2 {
                        best = (i, t, x);
                    }
                }
                for j in t + 1..n {
                    let x = w.a[(t, j)].abs();
                    if !x.is_zero() && x < best.2 {
                        best = (t, j, x);
                    }
                }
                w.row_swap(t, best.0);
                w.col_swap(t, best.1);
                continue;
            }
            let pivot = w.a[(t, t)].clone();
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a[(i, j)].is_multiple_of(&pivot));
            match bad {
                Some((i, _)) => w.row_add(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.row_negate(t);
        }
        t += 1;
    }
    SmithForm { d: w.a, u: w.u, u_inv: w.u_inv, v: w.v, v_inv: w.v_inv, rank: t }
}

/// Z-basis (as columns) of the saturated kernel `{x ∈ Zⁿ : a·x = 0}`,
/// together with a left inverse: `coords(x) = proj · x` recovers the
/// kernel coordinates of any kernel vector.
#[derive(Clone, Debug)]
pub struct IntegerKernel {
    pub basis: IntMatrix,
    pub proj: IntMatrix,
}

pub fn integer_kernel(a: &IntMatrix) -> IntegerKernel {
    let snf = smith_normal_form(a);
    let n = a.cols();
    let cols: Vec<usize> = (snf.rank..n).collect();
    let all_rows: Vec<usize> = (0..n).collect();
    IntegerKernel {
        basis: snf.v.submatrix(&all_rows, &cols),
        proj: snf.v_inv.submatrix(&cols, &all_rows),
    }
}
