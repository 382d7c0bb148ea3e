//! Dense boxes of small (ρ, τ)-polynomials indexed by t-exponents, used to
//! multiply truncated series by binomials in place.

use super::poly::MultiPoly;
use num_bigint::BigInt;

pub type Cell = Vec<((u32, u32), i64)>;

fn cell_add(cell: &mut Cell, key: (u32, u32), c: i64) {
    match cell.iter().position(|(k, _)| *k == key) {
        Some(p) => {
            cell[p].1 += c;
            if cell[p].1 == 0 {
                cell.swap_remove(p);
            }
        }
        None => cell.push((key, c)),
    }
}

#[derive(Debug, Clone)]
pub struct DenseBox {
    dims: Vec<usize>,
    strides: Vec<usize>,
    pub cells: Vec<Cell>,
}

impl DenseBox {
    /// `dims[i]` is the number of allowed exponents of t_i (0..dims[i]).
    pub fn new(dims: Vec<usize>) -> Self {
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let size = dims.iter().product();
        DenseBox { dims, strides, cells: vec![Vec::new(); size] }
    }

    /// Fill every cell from its exponent vector.
    pub fn fill(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> Cell) -> Self {
        let mut b = Self::new(dims);
        let mut d = vec![0; b.dims.len()];
        for idx in 0..b.cells.len() {
            b.cells[idx] = f(&d);
            b.advance(&mut d);
        }
        b
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    fn advance(&self, d: &mut [usize]) {
        for k in (0..d.len()).rev() {
            d[k] += 1;
            if d[k] < self.dims[k] {
                return;
            }
            d[k] = 0;
        }
    }

    pub fn index(&self, d: &[usize]) -> usize {
        d.iter().zip(&self.strides).map(|(a, b)| a * b).sum()
    }

    pub fn exponents(&self, mut idx: usize) -> Vec<usize> {
        let mut d = vec![0; self.dims.len()];
        for k in 0..d.len() {
            d[k] = idx / self.strides[k];
            idx %= self.strides[k];
        }
        d
    }

    /// Multiply in place by (1 − ρ^r τ^s t^shift); exact on the box since the
    /// factor only moves mass to larger exponents.
    pub fn mul_binomial(&mut self, r: u32, s: u32, shift: &[usize]) {
        let offset = self.index(shift);
        if offset == 0 || shift.iter().zip(&self.dims).any(|(a, b)| a >= b) {
            return;
        }
        for idx in (0..self.cells.len()).rev() {
            let below = (0..self.dims.len()).any(|k| (idx / self.strides[k]) % self.dims[k] < shift[k]);
            if below {
                continue;
            }
            let (lo, hi) = self.cells.split_at_mut(idx);
            let src = &lo[idx - offset];
            for &((a, b), c) in src.iter() {
                cell_add(&mut hi[0], (a + r, b + s), -c);
            }
        }
    }

    /// Cells whose exponent vector satisfies `outside` and are nonzero.
    pub fn nonzero_where(&self, mut outside: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
        (0..self.cells.len())
            .find(|&idx| !self.cells[idx].is_empty() && outside(&self.exponents(idx)))
            .map(|idx| self.exponents(idx))
    }

    pub fn to_poly(&self, keep: impl Fn(&[usize]) -> bool) -> MultiPoly {
        let nt = self.dims.len();
        let mut p = MultiPoly::zero(nt);
        for (idx, cell) in self.cells.iter().enumerate() {
            if cell.is_empty() {
                continue;
            }
            let d = self.exponents(idx);
            if !keep(&d) {
                continue;
            }
            for &((a, b), c) in cell {
                let mut e = vec![a, b];
                e.extend(d.iter().map(|&x| x as u32));
                p.add_term(e, BigInt::from(c));
            }
        }
        p
    }
}

pub fn normalized(mut c: Cell) -> Cell {
    c.retain(|x| x.1 != 0);
    c.sort_unstable();
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_collapses() {
        // Σ t^k times (1 − t) is 1 on the box.
        let mut b = DenseBox::fill(vec![5], |_| vec![((0, 0), 1)]);
        b.mul_binomial(0, 0, &[1]);
        assert_eq!(b.to_poly(|_| true), MultiPoly::one(1));
    }
}
