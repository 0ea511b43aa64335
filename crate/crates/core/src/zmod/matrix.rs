//! Integer matrices: Smith normal form and row Hermite bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix; rows are relations, columns are generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= factor * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * factor;
            self[(dst, j)] -= v;
        }
    }

    fn col_sub(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * factor;
            self[(i, dst)] -= v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// `a - q·b` is at most `|b|/2` in absolute value.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(b);
    if (&r + &r).abs() > b.abs() {
        q += 1;
    }
    q
}

/// Nonzero diagonal entries (positive, each dividing the next) of the Smith
/// normal form.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                if !a[(i, j)].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some(mut at) = pivot else { break };
        loop {
            a.swap_rows(t, at.0);
            a.swap_cols(t, at.1);
            let p = a[(t, t)].clone();
            for i in t + 1..rows {
                let q = nearest_quotient(&a[(i, t)], &p);
                a.row_sub(i, t, &q);
            }
            for j in t + 1..cols {
                let q = nearest_quotient(&a[(t, j)], &p);
                a.col_sub(j, t, &q);
            }
            // remainders become the next pivot candidates
            let mut next: Option<(usize, usize)> = None;
            let mut consider = |pos: (usize, usize), a: &IntMatrix| {
                if !a[pos].is_zero() && next.is_none_or(|n| a[pos].abs() < a[n].abs()) {
                    next = Some(pos);
                }
            };
            for i in t + 1..rows {
                consider((i, t), &a);
            }
            for j in t + 1..cols {
                consider((t, j), &a);
            }
            if let Some(n) = next {
                at = n;
                continue;
            }
            // the pivot must divide the whole trailing block
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&a[(i, j)] % &a[(t, t)]).is_zero()));
            match offender {
                Some(i) => {
                    a.row_sub(t, i, &BigInt::from(-1));
                    at = (t, t);
                }
                None => break,
            }
        }
        diag.push(a[(t, t)].abs());
    }
    diag
}

/// Row-echelon basis of the lattice spanned by the rows of `m`, with
/// positive pivots.
pub fn hermite_basis(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut r = 0;
    for j in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut best = None;
            for i in r..rows {
                if !a[(i, j)].is_zero()
                    && best.is_none_or(|b: usize| a[(i, j)].abs() < a[(b, j)].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..rows {
                if a[(i, j)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&a[(i, j)], &a[(r, j)]);
                a.row_sub(i, r, &q);
                if !a[(i, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                if a[(r, j)].is_negative() {
                    a.negate_row(r);
                }
                r += 1;
                break;
            }
        }
    }
    let kept: Vec<Vec<BigInt>> = (0..r).map(|i| a.row(i).to_vec()).collect();
    IntMatrix::from_rows(cols, &kept)
}

/// Coordinates of `v` in an echelon basis, or `None` if `v` is not in the
/// lattice.
pub fn lattice_coordinates(basis: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(basis.rows());
    for k in 0..basis.rows() {
        let row = basis.row(k);
        let pivot = row.iter().position(|x| !x.is_zero())?;
        // entries left of this pivot must already be cleared
        if rest[..pivot].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = rest[pivot].div_rem(&row[pivot]);
        if !r.is_zero() {
            return None;
        }
        for (x, b) in rest.iter_mut().zip(row) {
            *x -= &q * b;
        }
        coords.push(q);
    }
    if rest.iter().all(Zero::is_zero) {
        Some(coords)
    } else {
        None
    }
}

pub(crate) fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(m: &IntMatrix) -> Vec<i64> {
        smith_diagonal(m).iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn smith_small_cases() {
        assert_eq!(diag(&IntMatrix::from_rows(1, &[vec![6]])), vec![6]);
        assert_eq!(diag(&IntMatrix::zeros(0, 2)), Vec::<i64>::new());
        assert_eq!(diag(&IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 4]])), vec![2, 4]);
        assert_eq!(diag(&IntMatrix::from_rows(2, &[vec![4, 0], vec![0, 6]])), vec![2, 12]);
        assert_eq!(diag(&IntMatrix::from_rows(2, &[vec![2, 4], vec![6, 8]])), vec![2, 4]);
        assert_eq!(
            diag(&IntMatrix::from_rows(3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]])),
            vec![2, 6, 12]
        );
    }

    #[test]
    fn hermite_and_coordinates() {
        let m = IntMatrix::from_rows(1, &[vec![8], vec![2]]);
        let b = hermite_basis(&m);
        assert_eq!(b, IntMatrix::from_rows(1, &[vec![2]]));
        assert_eq!(lattice_coordinates(&b, &[BigInt::from(8)]), Some(vec![BigInt::from(4)]));
        assert_eq!(lattice_coordinates(&b, &[BigInt::from(3)]), None);

        let m = IntMatrix::from_rows(3, &[vec![2, 4, 6], vec![1, 1, 1], vec![3, 5, 7]]);
        let b = hermite_basis(&m);
        assert_eq!(b.rows(), 2);
        for row in m.to_rows() {
            assert!(lattice_coordinates(&b, &row).is_some());
        }
    }
}
