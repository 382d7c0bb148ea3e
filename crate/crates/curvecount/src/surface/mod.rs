//! Cox presentations of intrinsic linear hypersurfaces.
//!
//! A presentation lists generators with their classes in a fixed basis of the
//! Picard lattice, one relation Σ_j s_j Π_{i∈I_j} s_i^{b_ij} that is linear in
//! the distinguished variables s_j, the incidence complex (as maximal faces)
//! and generators of the effective cone.

mod document;

pub use document::{load_surface, load_surface_file, Format, SurfaceDocument};

use crate::error::{Error, Result};
use crate::linalg::{det_int, q_int, solve_unique, Q};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

/// Subsets of generators as bitmasks. Presentations are capped at this many
/// generators so Möbius tables over {0,1}^n stay small.
pub const MAX_GENERATORS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PicClass(pub Vec<i64>);

impl PicClass {
    pub fn zero(rank: usize) -> Self {
        PicClass(vec![0; rank])
    }

    pub fn plus(&self, other: &PicClass) -> PicClass {
        PicClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &PicClass) -> PicClass {
        PicClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, k: i64) -> PicClass {
        PicClass(self.0.iter().map(|a| a * k).collect())
    }

    /// Pairing with a degree vector given in the dual of the fixed basis.
    pub fn pair(&self, y: &[i64]) -> i64 {
        self.0.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// Coordinates in another basis (rows of `basis`), if integral.
    pub fn in_basis(&self, basis: &[PicClass]) -> Option<Vec<i64>> {
        let rho = self.0.len();
        let a: Vec<Vec<Q>> = (0..rho).map(|r| basis.iter().map(|b| q_int(b.0[r])).collect()).collect();
        let rhs: Vec<Q> = self.0.iter().map(|&x| q_int(x)).collect();
        let x = solve_unique(&a, &rhs)?;
        x.iter().map(|v| v.is_integer().then(|| v.to_integer().to_i64()).flatten()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub class: PicClass,
}

/// One monomial s_linear · Π s_i^{b_i} of the relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub linear: usize,
    pub factors: Vec<(usize, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxPresentation {
    pub name: String,
    pub picard_rank: usize,
    pub basis_labels: Vec<String>,
    pub generators: Vec<Generator>,
    pub relation: Vec<Monomial>,
    /// Maximal faces of the incidence complex as generator bitmasks.
    pub incidence_maximal: Vec<u32>,
    pub effective_cone: Vec<PicClass>,
}

/// A choice of the linear variable in every monomial, with the data needed to
/// express everything in the basis of complementary classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleChoice {
    /// Linear generator of each monomial, in relation order.
    pub j: Vec<usize>,
    /// I_j with exponents, aligned with `j`.
    pub blocks: Vec<Vec<(usize, u32)>>,
    /// Complement of J, sorted; its classes form a lattice basis.
    pub i: Vec<usize>,
    /// `a[jpos][ipos]` with class(j) = Σ_i a · class(i).
    pub a: Vec<Vec<i64>>,
}

impl AdmissibleChoice {
    pub fn i_mask(&self) -> u32 {
        self.i.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn j_mask(&self) -> u32 {
        self.j.iter().fold(0, |m, &j| m | 1 << j)
    }

    pub fn block_mask(&self, jpos: usize) -> u32 {
        self.blocks[jpos].iter().fold(0, |m, &(i, _)| m | 1 << i)
    }

    /// Position of generator `i` inside `self.i`.
    pub fn ipos(&self, i: usize) -> Option<usize> {
        self.i.iter().position(|&x| x == i)
    }

    pub fn label(&self, cox: &CoxPresentation) -> String {
        let names: Vec<&str> = self.j.iter().map(|&j| cox.generators[j].label.as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceHypothesisReport {
    pub holds: bool,
    pub max_face_size: usize,
    pub dim: usize,
    /// Faces larger than dim + 1.
    pub oversized: Vec<Vec<String>>,
    /// Transversal faces inside I whose exponents all exceed one.
    pub bad_transversals: Vec<Vec<String>>,
}

impl CoxPresentation {
    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn class(&self, i: usize) -> &PicClass {
        &self.generators[i].class
    }

    pub fn labels_of(&self, mask: u32) -> Vec<String> {
        (0..self.n_generators())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.generators[i].label.clone())
            .collect()
    }

    /// Is the subset in the incidence complex?
    pub fn in_incidence(&self, mask: u32) -> bool {
        mask == 0 || self.incidence_maximal.iter().any(|&f| mask & !f == 0)
    }

    /// dim X = #generators − 1 − ρ.
    pub fn dim(&self) -> usize {
        self.n_generators() - 1 - self.picard_rank
    }

    pub fn monomial_degree(&self, m: &Monomial) -> PicClass {
        m.factors
            .iter()
            .fold(self.class(m.linear).clone(), |acc, &(i, b)| acc.plus(&self.class(i).scaled(b as i64)))
    }

    /// Common degree of the relation.
    pub fn d_tot(&self) -> PicClass {
        self.monomial_degree(&self.relation[0])
    }

    /// Σ classes of generators minus the degree of the relation.
    pub fn anticanonical(&self) -> PicClass {
        let sum = self
            .generators
            .iter()
            .fold(PicClass::zero(self.picard_rank), |acc, g| acc.plus(&g.class));
        sum.minus(&self.d_tot())
    }

    /// gcd of the coordinates of the canonical class.
    pub fn kx_divisibility(&self) -> Result<i64> {
        kx_divisibility(&self.anticanonical())
    }

    fn choice_from(&self, linear: &[usize]) -> Option<AdmissibleChoice> {
        let n = self.n_generators();
        let mut blocks = Vec::new();
        for (m, &lin) in self.relation.iter().zip(linear) {
            let mut vars: Vec<(usize, u32)> = std::iter::once((m.linear, 1)).chain(m.factors.iter().copied()).collect();
            let pos = vars.iter().position(|&(v, _)| v == lin)?;
            if vars[pos].1 != 1 {
                return None;
            }
            vars.remove(pos);
            blocks.push(vars);
        }
        let jmask: u32 = linear.iter().fold(0, |m, &j| m | 1 << j);
        let i: Vec<usize> = (0..n).filter(|x| jmask >> x & 1 == 0).collect();
        if i.len() != self.picard_rank {
            return None;
        }
        let mat: Vec<Vec<i64>> =
            (0..self.picard_rank).map(|r| i.iter().map(|&g| self.class(g).0[r]).collect()).collect();
        if !det_int(&mat).abs().is_one() {
            return None;
        }
        let basis: Vec<PicClass> = i.iter().map(|&g| self.class(g).clone()).collect();
        let a = linear.iter().map(|&j| self.class(j).in_basis(&basis)).collect::<Option<Vec<_>>>()?;
        Some(AdmissibleChoice { j: linear.to_vec(), blocks, i, a })
    }

    /// The choice in which each monomial keeps its recorded linear variable.
    pub fn default_choice(&self) -> Result<AdmissibleChoice> {
        let lin: Vec<usize> = self.relation.iter().map(|m| m.linear).collect();
        self.choice_from(&lin)
            .ok_or_else(|| Error::input("relation", "complement of the linear variables is not a unimodular basis"))
    }

    /// Every admissible choice: one exponent-one variable per monomial as the
    /// linear one, with unimodular complement. Ordered lexicographically by
    /// the per-monomial selection.
    pub fn admissible_choices(&self) -> Vec<AdmissibleChoice> {
        let options: Vec<Vec<usize>> = self
            .relation
            .iter()
            .map(|m| {
                std::iter::once(m.linear)
                    .chain(m.factors.iter().filter(|&&(_, b)| b == 1).map(|&(i, _)| i))
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut pick = vec![0usize; options.len()];
        loop {
            let lin: Vec<usize> = pick.iter().zip(&options).map(|(&k, o)| o[k]).collect();
            if let Some(c) = self.choice_from(&lin) {
                out.push(c);
            }
            let mut k = 0;
            loop {
                if k == pick.len() {
                    return out;
                }
                pick[k] += 1;
                if pick[k] < options[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
        }
    }

    /// All faces of the incidence complex (downward closure of the maximal ones).
    pub fn incidence_faces(&self) -> Vec<u32> {
        let mut faces: Vec<u32> = Vec::new();
        for &f in &self.incidence_maximal {
            let mut sub = f;
            loop {
                faces.push(sub);
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & f;
            }
        }
        faces.sort_unstable();
        faces.dedup();
        faces
    }

    /// Hypothesis on the incidence complex that makes the local series controlled.
    pub fn check_face_hypothesis(&self, choice: &AdmissibleChoice) -> FaceHypothesisReport {
        let dim = self.dim();
        let faces = self.incidence_faces();
        let max_face_size = faces.iter().map(|f| f.count_ones() as usize).max().unwrap_or(0);
        let oversized = faces
            .iter()
            .filter(|f| f.count_ones() as usize > dim + 1)
            .map(|&f| self.labels_of(f))
            .collect::<Vec<_>>();
        let imask = choice.i_mask();
        let mut bad = Vec::new();
        for &f in &faces {
            if f & !imask != 0 {
                continue;
            }
            let transversal = (0..choice.j.len()).all(|jp| (f & choice.block_mask(jp)).count_ones() == 1);
            if !transversal {
                continue;
            }
            let has_unit = choice
                .blocks
                .iter()
                .flatten()
                .any(|&(i, b)| f >> i & 1 == 1 && b == 1);
            if !has_unit {
                bad.push(self.labels_of(f));
            }
        }
        FaceHypothesisReport {
            holds: oversized.is_empty() && bad.is_empty(),
            max_face_size,
            dim,
            oversized,
            bad_transversals: bad,
        }
    }

    /// The built-in degree-6 surface with an A1 singularity.
    pub fn builtin_sextic_a1() -> CoxPresentation {
        load_surface(include_str!("../../catalog/sextic_a1.toml"), Format::Toml)
            .expect("built-in catalog entry is valid")
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let rho = self.picard_rank;
        let n = self.n_generators();
        if self.relation.is_empty() {
            return Err(Error::input("relation", "relation has no monomials"));
        }
        let mut seen = 0u32;
        for (k, m) in self.relation.iter().enumerate() {
            for v in std::iter::once(m.linear).chain(m.factors.iter().map(|f| f.0)) {
                if seen >> v & 1 == 1 {
                    return Err(Error::input(
                        format!("relation[{k}]"),
                        format!("variable {} appears in more than one place", self.generators[v].label),
                    ));
                }
                seen |= 1 << v;
            }
            if m.factors.is_empty() {
                return Err(Error::input(format!("relation[{k}].factors"), "I_j must be nonempty"));
            }
        }
        let d0 = self.d_tot();
        for (k, m) in self.relation.iter().enumerate() {
            let d = self.monomial_degree(m);
            if d != d0 {
                return Err(Error::input(
                    format!("relation[{k}]"),
                    format!("monomial degree {:?} differs from {:?}", d.0, d0.0),
                ));
            }
        }
        if n < rho + 1 {
            return Err(Error::input("generators", "fewer generators than picard_rank + 1"));
        }
        for (k, c) in self.effective_cone.iter().enumerate() {
            if c.0.len() != rho {
                return Err(Error::input(format!("effective_cone[{k}]"), "wrong length"));
            }
        }
        self.default_choice()?;
        Ok(())
    }
}

pub fn kx_divisibility(k: &PicClass) -> Result<i64> {
    let g = k.0.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return Err(Error::input("anticanonical", "anticanonical is zero"));
    }
    Ok(g)
}

pub fn builtin_sextic_a1() -> CoxPresentation {
    CoxPresentation::builtin_sextic_a1()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sextic_basics() {
        let s = builtin_sextic_a1();
        assert_eq!(s.picard_rank, 4);
        assert_eq!(s.n_generators(), 7);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.anticanonical().0, vec![3, -1, -1, -1]);
        assert_eq!(s.kx_divisibility().unwrap(), 1);
        let ell = PicClass(vec![1, -1, -1, -1]);
        let e = |i: usize| {
            let mut v = vec![0; 4];
            v[i] = 1;
            PicClass(v)
        };
        assert_eq!(s.anticanonical().in_basis(&[ell, e(1), e(2), e(3)]), Some(vec![3, 2, 2, 2]));
    }

    #[test]
    fn sextic_incidence() {
        let s = builtin_sextic_a1();
        let idx = |l: &str| 1u32 << s.index_of(l).unwrap();
        assert!(!s.in_incidence(idx("eta1") | idx("eta2") | idx("eta3")));
        assert!(s.in_incidence(idx("m1") | idx("m2") | idx("m3")));
        assert!(!s.in_incidence(idx("m1") | idx("lambda")));
    }

    #[test]
    fn kx_divisibility_cases() {
        assert_eq!(kx_divisibility(&PicClass(vec![2, 4, 6])).unwrap(), 2);
        assert!(kx_divisibility(&PicClass(vec![0, 0])).is_err());
    }
}
