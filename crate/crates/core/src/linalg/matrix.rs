use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::Rat;

/// Dense row-major matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Row echelon form: the nonzero rows and their pivot columns. Produced by
/// [`QMatrix::rref`] it is the reduced form, with pivot entries equal to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub cols: usize,
    pub rows: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Panics if the rows have differing lengths.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rat>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend(r);
        }
        QMatrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    fn row_vecs(&self) -> Vec<Vec<Rat>> {
        self.data
            .chunks(self.cols.max(1))
            .map(<[Rat]>::to_vec)
            .collect()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        if self.cols == 0 {
            return 0;
        }
        eliminate(self.row_vecs(), self.cols, false).pivots.len()
    }

    pub fn rref(&self) -> Rref {
        if self.cols == 0 {
            return Rref {
                cols: 0,
                rows: Vec::new(),
                pivots: Vec::new(),
            };
        }
        eliminate(self.row_vecs(), self.cols, true)
    }

    /// Basis of the right kernel. One vector per free column, in increasing
    /// column order; each has a 1 in its free column, zeros in the other free
    /// columns, and minus the reduced pivot-row entries elsewhere.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        self.rref().nullspace()
    }
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Rat::zero(); self.cols];
                v[free] = Rat::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if !row[free].is_zero() {
                        v[p] = -row[free].clone();
                    }
                }
                v
            })
            .collect()
    }
}

/// Fraction-free Gaussian elimination on primitive integer rows.
///
/// Rows are scaled to coprime integers up front. For each column the pivot is
/// the sparsest remaining row with a nonzero entry there (lowest index on
/// ties), and eliminated rows are divided by their content after each step.
/// With `reduce`, entries above the pivots are cleared too and the rows are
/// finally divided by their pivots, giving the (unique) reduced echelon form.
fn eliminate(rows: Vec<Vec<Rat>>, cols: usize, reduce: bool) -> Rref {
    let mut rows: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| primitive_row(&r))
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| rows[r][col..].iter().filter(|v| !v.is_zero()).count())
        else {
            continue;
        };
        rows.swap(next, found);
        let pivot: Vec<(usize, BigInt)> = (col..cols)
            .filter(|&c| !rows[next][c].is_zero())
            .map(|c| (c, rows[next][c].clone()))
            .collect();
        let p = pivot[0].1.clone();
        let (head, tail) = rows.split_at_mut(next + 1);
        let clear = |row: &mut Vec<BigInt>| {
            if row[col].is_zero() {
                return;
            }
            let f = std::mem::take(&mut row[col]);
            let g = f.gcd(&p);
            let (f, scale) = (&f / &g, &p / &g);
            if !scale.is_one() {
                for v in row.iter_mut().filter(|v| !v.is_zero()) {
                    *v *= &scale;
                }
            }
            for (c, v) in &pivot[1..] {
                row[*c] -= &f * v;
            }
            make_primitive(row);
        };
        tail.par_iter_mut().for_each(clear);
        if reduce {
            head[..next].par_iter_mut().for_each(clear);
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    let rows = if reduce {
        rows.into_iter()
            .zip(&pivots)
            .map(|(r, &pc)| {
                let p = r[pc].clone();
                r.into_iter().map(|v| Rat::new(v, p.clone())).collect()
            })
            .collect()
    } else {
        rows.into_iter()
            .map(|r| r.into_iter().map(Rat::from_integer).collect())
            .collect()
    };
    Rref { cols, rows, pivots }
}

fn primitive_row(r: &[Rat]) -> Vec<BigInt> {
    let l = r
        .iter()
        .filter(|v| !v.is_zero())
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut out: Vec<BigInt> = r
        .iter()
        .map(|v| {
            if v.is_zero() {
                BigInt::zero()
            } else {
                v.numer() * (&l / v.denom())
            }
        })
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter().filter(|v| !v.is_zero()) {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut().filter(|v| !v.is_zero()) {
        *v /= &g;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use proptest::prelude::*;

    fn m(cols: usize, rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_examples() {
        assert_eq!(m(2, &[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(QMatrix::identity(3).rank(), 3);
        assert_eq!(QMatrix::zeros(2, 5).rank(), 0);
        assert_eq!(QMatrix::zeros(0, 0).rank(), 0);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(m(2, &[&[1, 1]]).nullspace(), vec![vec![rat(-1), rat(1)]]);
        assert!(QMatrix::identity(2).nullspace().is_empty());
        let z = QMatrix::zeros(1, 3).nullspace();
        assert_eq!(z.len(), 3);
        assert_eq!(z[0], vec![rat(1), rat(0), rat(0)]);
        assert_eq!(z[2], vec![rat(0), rat(0), rat(1)]);
    }

    #[test]
    fn nullspace_of_empty_row_set() {
        let ns = QMatrix::zeros(0, 2).nullspace();
        assert_eq!(ns.len(), 2);
    }

    fn arb_matrix() -> impl Strategy<Value = QMatrix> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            prop::collection::vec(
                prop::sample::select(vec![-3i64, -1, 0, 0, 0, 1, 2, 5]),
                r * c,
            )
            .prop_map(move |v| {
                QMatrix::from_rows(
                    c,
                    v.chunks(c)
                        .map(|ch| ch.iter().map(|&x| rat(x)).collect())
                        .collect(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in arb_matrix()) {
            let ns = a.nullspace();
            prop_assert_eq!(ns.len() + a.rank(), a.cols());
            for v in &ns {
                prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn elimination_is_deterministic(a in arb_matrix()) {
            prop_assert_eq!(a.nullspace(), a.clone().nullspace());
            prop_assert_eq!(a.rref(), a.rref());
        }
    }
}
