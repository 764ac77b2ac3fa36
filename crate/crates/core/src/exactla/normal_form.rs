use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Int, IntMatrix};

/// Column Hermite normal form: `m * u = h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// `(row, col)` of each pivot, in order.
    pub pivots: Vec<(usize, usize)>,
}

/// Smith normal form: `u * m * v = s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Nonzero diagonal entries `d1 | d2 | ...`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, f: &Int) {
    if f.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let t = &m[(i, src)] * f;
        m[(i, dst)] -= t;
    }
}

fn col_swap(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

fn col_neg(m: &mut IntMatrix, a: usize) {
    for i in 0..m.rows() {
        let t = -m[(i, a)].clone();
        m[(i, a)] = t;
    }
}

fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, f: &Int) {
    if f.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let t = &m[(src, j)] * f;
        m[(dst, j)] -= t;
    }
}

fn row_swap(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
}

fn row_neg(m: &mut IntMatrix, a: usize) {
    for j in 0..m.cols() {
        let t = -m[(a, j)].clone();
        m[(a, j)] = t;
    }
}

/// Column-style Hermite normal form.
///
/// `h` is lower-triangular echelon: each pivot is positive, lies strictly
/// right of the previous one, entries right of a pivot in its row are zero
/// and entries left of it (in pivot columns) are reduced into `[0, pivot)`.
/// Each row is cleared by a Euclidean sweep that always pivots on the entry
/// of least absolute value (leftmost on ties).
pub fn hnf(m: &IntMatrix) -> Hnf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(cols);
    let mut pivots = Vec::new();
    let mut pc = 0;
    for i in 0..rows {
        if pc == cols {
            break;
        }
        loop {
            let best = (pc..cols)
                .filter(|&j| !h[(i, j)].is_zero())
                .min_by(|&a, &b| h[(i, a)].abs().cmp(&h[(i, b)].abs()).then(a.cmp(&b)));
            let Some(b) = best else { break };
            col_swap(&mut h, pc, b);
            col_swap(&mut u, pc, b);
            let p = h[(i, pc)].clone();
            let mut done = true;
            for j in pc + 1..cols {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = h[(i, j)].div_floor(&p);
                col_axpy(&mut h, j, pc, &q);
                col_axpy(&mut u, j, pc, &q);
                if !h[(i, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(i, pc)].is_zero() {
            continue;
        }
        if h[(i, pc)].is_negative() {
            col_neg(&mut h, pc);
            col_neg(&mut u, pc);
        }
        let p = h[(i, pc)].clone();
        for &(_, j) in &pivots {
            let q = h[(i, j)].div_floor(&p);
            col_axpy(&mut h, j, pc, &q);
            col_axpy(&mut u, j, pc, &q);
        }
        pivots.push((i, pc));
        pc += 1;
    }
    Hnf { h, u, pivots }
}

/// Smith normal form with nonnegative diagonal `d1 | d2 | ...`.
pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if s[(i, j)].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        row_swap(&mut s, t, bi);
        row_swap(&mut u, t, bi);
        col_swap(&mut s, t, bj);
        col_swap(&mut v, t, bj);
        loop {
            let p = s[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&p);
                row_axpy(&mut s, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&p);
                col_axpy(&mut s, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // the pivot must divide the whole remaining block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !(&s[(i, j)] % &p).is_zero());
                match bad {
                    None => break,
                    Some((i, _)) => {
                        // add row i into row t and keep reducing
                        row_axpy(&mut s, t, i, &-Int::one());
                        row_axpy(&mut u, t, i, &-Int::one());
                    }
                }
                continue;
            }
            // move the smallest entry of row/col t into the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !s[(i, t)].is_zero() && s[(i, t)].abs() < s[best].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !s[(t, j)].is_zero() && s[(t, j)].abs() < s[best].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                row_swap(&mut s, t, best.0);
                row_swap(&mut u, t, best.0);
            } else if best.1 != t {
                col_swap(&mut s, t, best.1);
                col_swap(&mut v, t, best.1);
            }
        }
        if s[(t, t)].is_negative() {
            row_neg(&mut s, t);
            row_neg(&mut u, t);
        }
        t += 1;
    }
    Snf { s, u, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows.first().map_or(0, Vec::len), rows)
    }

    #[test]
    fn hnf_identity() {
        let r = hnf(&IntMatrix::identity(2));
        assert_eq!(r.h, IntMatrix::identity(2));
        assert_eq!(r.u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_two_by_two() {
        let a = m(&[vec![2, 4], vec![0, 2]]);
        let r = hnf(&a);
        assert_eq!(r.h, m(&[vec![2, 0], vec![0, 2]]));
        assert_eq!(a.mul(&r.u), r.h);
        assert!(r.u.is_unimodular());
    }

    #[test]
    fn hnf_zero() {
        let r = hnf(&IntMatrix::zeros(2, 2));
        assert!(r.h.is_zero());
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn hnf_reduces_left_of_pivot() {
        let a = m(&[vec![3, 5, 7], vec![1, 4, 2], vec![6, 0, 9]]);
        let r = hnf(&a);
        assert_eq!(a.mul(&r.u), r.h);
        for (k, &(i, j)) in r.pivots.iter().enumerate() {
            let p = &r.h[(i, j)];
            assert!(p > &Int::zero());
            for &(_, jj) in &r.pivots[..k] {
                assert!(r.h[(i, jj)] >= Int::zero() && &r.h[(i, jj)] < p);
            }
            for jj in j + 1..a.cols() {
                assert!(r.h[(i, jj)].is_zero());
            }
        }
    }

    /// d1 = gcd of entries, d1 * d2 = |det|.
    #[test]
    fn snf_diag_2_3() {
        let a = m(&[vec![2, 0], vec![0, 3]]);
        let r = snf(&a);
        assert_eq!(r.s, m(&[vec![1, 0], vec![0, 6]]));
        assert_eq!(r.u.mul(&a).mul(&r.v), r.s);
        let d1 = crate::exactla::content(a.entries());
        assert_eq!(r.s[(0, 0)], d1);
        assert_eq!(&r.s[(0, 0)] * &r.s[(1, 1)], a.det().abs());
    }

    #[test]
    fn snf_identity_and_row() {
        assert_eq!(snf(&IntMatrix::identity(3)).s, IntMatrix::identity(3));
        let r = snf(&m(&[vec![1, 1]]));
        assert_eq!(r.s, m(&[vec![1, 0]]));
    }
}
