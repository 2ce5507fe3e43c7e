//! Small exact linear algebra: sparse gl_N matrices and rational elimination.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::params::{fmt_rat, Rat};

/// Sparse N×N rational matrix, i.e. an element Σ c_ij E_ij of gl_N.
/// Indices are 0-based.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GlMat {
    pub n: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl fmt::Debug for GlMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(&(i, j), c)| format!("{}*E{}{}", fmt_rat(c), i + 1, j + 1))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl GlMat {
    pub fn zero(n: usize) -> Self {
        GlMat { n, entries: BTreeMap::new() }
    }

    /// The matrix unit E_ij (0-based).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries.insert((i, j), Rat::one());
        m
    }

    pub fn from_entries(n: usize, items: impl IntoIterator<Item = ((usize, usize), Rat)>) -> Self {
        let mut m = Self::zero(n);
        for ((i, j), c) in items {
            m.add_entry(i, j, &c);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rat)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_entry(&mut self, i: usize, j: usize, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.entries.entry((i, j)).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn add(&self, other: &GlMat) -> GlMat {
        let mut out = self.clone();
        for (&(i, j), c) in &other.entries {
            out.add_entry(i, j, c);
        }
        out
    }

    pub fn sub(&self, other: &GlMat) -> GlMat {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> GlMat {
        if k.is_zero() {
            return GlMat::zero(self.n);
        }
        GlMat { n: self.n, entries: self.entries.iter().map(|(&p, c)| (p, c * k)).collect() }
    }

    pub fn mul(&self, other: &GlMat) -> GlMat {
        let mut out = GlMat::zero(self.n);
        for (&(i, k), a) in &self.entries {
            for (&(k2, j), b) in other.entries.range((k, 0)..(k + 1, 0)) {
                debug_assert_eq!(k, k2);
                out.add_entry(i, j, &(a * b));
            }
        }
        out
    }

    pub fn bracket(&self, other: &GlMat) -> GlMat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn transpose(&self) -> GlMat {
        GlMat { n: self.n, entries: self.entries.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    pub fn trace(&self) -> Rat {
        let mut t = Rat::zero();
        for (&(i, j), c) in &self.entries {
            if i == j {
                t += c;
            }
        }
        t
    }

    /// Row-major dense coordinates of length N².
    pub fn to_vec(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.n * self.n];
        for (&(i, j), c) in &self.entries {
            v[i * self.n + j] = c.clone();
        }
        v
    }
}

/// Reduces `rows` to reduced row echelon form in place and returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rat>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel {x : A x = 0} of a matrix given by rows.
pub fn kernel(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut x = vec![Rat::zero(); ncols];
        x[f] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = -m[r][f].clone();
        }
        out.push(x);
    }
    out
}

/// Expresses vectors as combinations of a fixed linearly independent family.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    dim: usize,
    /// RREF rows of the family.
    reduced: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
    /// `reduced[k] = Σ_a transform[k][a] * family[a]`.
    transform: Vec<Vec<Rat>>,
}

impl SpanSolver {
    /// Fails with the rank if the family is dependent.
    pub fn new(family: &[Vec<Rat>]) -> std::result::Result<Self, usize> {
        let d = family.len();
        let dim = family.first().map_or(0, |v| v.len());
        let mut aug: Vec<Vec<Rat>> = family
            .iter()
            .enumerate()
            .map(|(a, v)| {
                let mut row = v.clone();
                row.extend((0..d).map(|b| if a == b { Rat::one() } else { Rat::zero() }));
                row
            })
            .collect();
        // Pivot only within the first `dim` columns.
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..dim {
            if r == d {
                break;
            }
            let Some(p) = (r..d).find(|&i| !aug[i][c].is_zero()) else {
                continue;
            };
            aug.swap(r, p);
            let inv = aug[r][c].recip();
            for x in aug[r].iter_mut() {
                *x *= &inv;
            }
            let pr = aug[r].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(pr.iter()) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if r < d {
            return Err(r);
        }
        let reduced = aug.iter().map(|row| row[..dim].to_vec()).collect();
        let transform = aug.iter().map(|row| row[dim..].to_vec()).collect();
        Ok(SpanSolver { dim, reduced, pivots, transform })
    }

    /// Coordinates of `v` in the family, or `None` if `v` is outside the span.
    pub fn solve(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(v.len(), self.dim);
        let d = self.transform.len();
        let mut residual = v.to_vec();
        let mut coeffs = vec![Rat::zero(); d];
        for (k, &p) in self.pivots.iter().enumerate() {
            let w = residual[p].clone();
            if w.is_zero() {
                continue;
            }
            for (x, y) in residual.iter_mut().zip(self.reduced[k].iter()) {
                if !y.is_zero() {
                    *x -= &w * y;
                }
            }
            for (c, t) in coeffs.iter_mut().zip(self.transform[k].iter()) {
                if !t.is_zero() {
                    *c += &w * t;
                }
            }
        }
        residual.iter().all(|x| x.is_zero()).then_some(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::rat;

    #[test]
    fn bracket_of_units() {
        let e12 = GlMat::unit(2, 0, 1);
        let e21 = GlMat::unit(2, 1, 0);
        let h = GlMat::unit(2, 0, 0).sub(&GlMat::unit(2, 1, 1));
        assert_eq!(e12.bracket(&e21), h);
    }

    #[test]
    fn solver_roundtrip() {
        let fam = vec![vec![rat(1), rat(1), rat(0)], vec![rat(0), rat(1), rat(1)]];
        let s = SpanSolver::new(&fam).unwrap();
        let v = vec![rat(2), rat(5), rat(3)];
        assert_eq!(s.solve(&v).unwrap(), vec![rat(2), rat(3)]);
        assert!(s.solve(&[rat(1), rat(0), rat(0)]).is_none());
        assert!(SpanSolver::new(&[vec![rat(1), rat(2)], vec![rat(2), rat(4)]]).is_err());
    }

    #[test]
    fn kernel_dimension() {
        let rows = vec![vec![rat(1), rat(1), rat(0)], vec![rat(0), rat(0), rat(1)]];
        let k = kernel(&rows, 3);
        assert_eq!(k, vec![vec![rat(-1), rat(1), rat(0)]]);
    }
}
