//! Finite-dimensional right comodules over a truncated [`GradedHopf`].
//!
//! A comodule `F` with basis `v_0, …, v_{r-1}` is stored through its
//! coefficient matrix `C`, whose entries lie in `H`:
//! `Δ_F(v_j) = Σ_i v_i ⊗ C[i][j]`. The comodule laws say that `C` is a
//! multiplicative matrix: `ε(C_ij) = δ_ij` and `Δ(C_kj) = Σ_i C_ki ⊗ C_ij`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coalgebra::{reduced_coproduct, ConilFiltration};
use crate::error::{Error, Result};
use crate::exactlin::{
    kernel_sparse, rat, solve_sparse, to_dense, to_sparse, Matrix, Quotient, Rational, SparseRow,
    Subspace,
};
use crate::hopfcore::GradedHopf;
use crate::parallel::Exec;

fn add_to<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, value: Rational) {
    if !value.is_zero() {
        *map.entry(key).or_insert_with(Rational::zero) += value;
    }
}

fn collect_sparse(map: BTreeMap<usize, Rational>) -> SparseRow {
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn normalize(row: &SparseRow) -> SparseRow {
    let mut acc = BTreeMap::new();
    for (k, v) in row {
        add_to(&mut acc, *k, v.clone());
    }
    collect_sparse(acc)
}

fn unit_element() -> SparseRow {
    vec![(GradedHopf::UNIT, Rational::one())]
}

/// Part of a sparse element outside the unit.
fn augmentation_part(x: &SparseRow) -> impl Iterator<Item = &(usize, Rational)> {
    x.iter().filter(|(k, _)| *k != GradedHopf::UNIT)
}

#[derive(Clone, PartialEq, Eq)]
pub struct Comodule {
    hopf: Arc<GradedHopf>,
    dim: usize,
    /// `dim * dim` entries, `coeffs[i * dim + j] = C[i][j]`.
    coeffs: Vec<SparseRow>,
}

impl fmt::Debug for Comodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Comodule(dim {}) [", self.dim)?;
        for j in 0..self.dim {
            let terms: Vec<String> = self
                .coaction(j)
                .iter()
                .map(|(i, h, c)| format!("{c} v{i}⊗{}", self.hopf.label(*h)))
                .collect();
            writeln!(f, "  v{j} ↦ {}", terms.join(" + "))?;
        }
        write!(f, "]")
    }
}

impl Comodule {
    /// Builds a comodule from its coefficient matrix, given row-major.
    /// Only shapes are validated; the laws are checked by [`check_comodule`].
    pub fn new(hopf: Arc<GradedHopf>, dim: usize, coeffs: Vec<SparseRow>) -> Result<Self> {
        if coeffs.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: coeffs.len(),
            });
        }
        if let Some((k, _)) = coeffs.iter().flatten().find(|(k, _)| *k >= hopf.dim()) {
            return Err(Error::InvalidComodule(format!(
                "coefficient refers to basis element {k} beyond the truncation"
            )));
        }
        let coeffs = coeffs.iter().map(normalize).collect();
        Ok(Self { hopf, dim, coeffs })
    }

    /// Builds a comodule from `coaction[j]`, the terms `(i, h, c)` of
    /// `Δ_F(v_j) = Σ c · v_i ⊗ b_h`.
    pub fn from_coaction(hopf: Arc<GradedHopf>, coaction: &[Vec<(usize, usize, Rational)>]) -> Result<Self> {
        let dim = coaction.len();
        let mut coeffs = vec![SparseRow::new(); dim * dim];
        for (j, terms) in coaction.iter().enumerate() {
            for (i, h, c) in terms {
                if *i >= dim {
                    return Err(Error::InvalidComodule(format!("vector index {i} out of range")));
                }
                coeffs[i * dim + j].push((*h, c.clone()));
            }
        }
        Self::new(hopf, dim, coeffs)
    }

    /// `Δ_F(v) = v ⊗ 1` on a space of the given dimension.
    pub fn trivial(hopf: Arc<GradedHopf>, dim: usize) -> Self {
        let mut coeffs = vec![SparseRow::new(); dim * dim];
        for i in 0..dim {
            coeffs[i * dim + i] = unit_element();
        }
        Self { hopf, dim, coeffs }
    }

    pub fn hopf(&self) -> &Arc<GradedHopf> {
        &self.hopf
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficient(&self, i: usize, j: usize) -> &SparseRow {
        &self.coeffs[i * self.dim + j]
    }

    /// Terms `(i, h, c)` of `Δ_F(v_j)`.
    pub fn coaction(&self, j: usize) -> Vec<(usize, usize, Rational)> {
        (0..self.dim)
            .flat_map(|i| {
                self.coefficient(i, j)
                    .iter()
                    .map(move |(h, c)| (i, *h, c.clone()))
            })
            .collect()
    }

    fn same_hopf(&self, other: &Comodule) -> Result<()> {
        if Arc::ptr_eq(&self.hopf, &other.hopf) || self.hopf == other.hopf {
            Ok(())
        } else {
            Err(Error::InvalidComodule("comodules over different Hopf algebras".into()))
        }
    }

    /// Coefficients in a new basis `w_j = Σ_i P_ij v_i`: `C' = P⁻¹ C P`.
    pub fn change_basis(&self, p: &Matrix) -> Result<Comodule> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n {
            return Err(Error::Shape(format!("change of basis must be {n}x{n}")));
        }
        let inv = p
            .inverse()
            .ok_or_else(|| Error::InvalidInput("change of basis is singular".into()))?;
        let mut coeffs = Vec::with_capacity(n * n);
        for l in 0..n {
            for j in 0..n {
                let mut acc = BTreeMap::new();
                for k in 0..n {
                    let a = inv.get(l, k);
                    if a.is_zero() {
                        continue;
                    }
                    for i in 0..n {
                        let b = p.get(i, j);
                        if b.is_zero() {
                            continue;
                        }
                        for (h, c) in self.coefficient(k, i) {
                            add_to(&mut acc, *h, a * c * b);
                        }
                    }
                }
                coeffs.push(collect_sparse(acc));
            }
        }
        Ok(Self {
            hopf: self.hopf.clone(),
            dim: n,
            coeffs,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComoduleLaw {
    Counit,
    Coassociativity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComoduleViolation {
    pub law: ComoduleLaw,
    /// The offending coefficient `C[row][col]`.
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for ComoduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let law = match self.law {
            ComoduleLaw::Counit => "counit",
            ComoduleLaw::Coassociativity => "coassociativity",
        };
        write!(f, "{law} law fails at coefficient ({}, {})", self.row, self.col)
    }
}

/// Checks `ε(C_ij) = δ_ij` and `Δ(C_kj) = Σ_i C_ki ⊗ C_ij` exactly.
pub fn check_comodule(f: &Comodule) -> std::result::Result<(), ComoduleViolation> {
    let n = f.dim;
    let h = &f.hopf;
    for i in 0..n {
        for j in 0..n {
            let unit_coeff = f
                .coefficient(i, j)
                .iter()
                .find(|(k, _)| *k == GradedHopf::UNIT)
                .map_or_else(Rational::zero, |(_, c)| c.clone());
            let expected = if i == j { Rational::one() } else { Rational::zero() };
            if unit_coeff != expected {
                return Err(ComoduleViolation {
                    law: ComoduleLaw::Counit,
                    row: i,
                    col: j,
                });
            }
        }
    }
    for k in 0..n {
        for j in 0..n {
            let mut lhs = BTreeMap::new();
            for (x, c) in f.coefficient(k, j) {
                for (a, b, v) in h.coproduct_terms(*x) {
                    add_to(&mut lhs, (*a, *b), c * v);
                }
            }
            let mut rhs = BTreeMap::new();
            for i in 0..n {
                for (a, ca) in f.coefficient(k, i) {
                    for (b, cb) in f.coefficient(i, j) {
                        add_to(&mut rhs, (*a, *b), ca * cb);
                    }
                }
            }
            lhs.retain(|_, v: &mut Rational| !v.is_zero());
            rhs.retain(|_, v: &mut Rational| !v.is_zero());
            if lhs != rhs {
                return Err(ComoduleViolation {
                    law: ComoduleLaw::Coassociativity,
                    row: k,
                    col: j,
                });
            }
        }
    }
    Ok(())
}

fn apply_antipode(h: &GradedHopf, x: &SparseRow) -> SparseRow {
    let mut acc = BTreeMap::new();
    for (k, c) in x {
        for (m, v) in h.antipode_terms(*k) {
            add_to(&mut acc, *m, c * v);
        }
    }
    collect_sparse(acc)
}

/// The dual comodule on the dual basis: `C^∨[i][j] = S(C[j][i])`.
pub fn dual_comodule(f: &Comodule) -> Comodule {
    let n = f.dim;
    let coeffs = (0..n * n)
        .map(|idx| apply_antipode(&f.hopf, f.coefficient(idx % n, idx / n)))
        .collect();
    Comodule {
        hopf: f.hopf.clone(),
        dim: n,
        coeffs,
    }
}

/// `A ⊗ B` with basis `v_i ⊗ w_k` at index `i * dim B + k` and coefficients
/// `C[(i,k)][(j,l)] = C^A_ij · C^B_kl`.
pub fn tensor_comodule(a: &Comodule, b: &Comodule) -> Result<Comodule> {
    a.same_hopf(b)?;
    let (na, nb) = (a.dim, b.dim);
    let n = na * nb;
    let mut coeffs = vec![SparseRow::new(); n * n];
    for i in 0..na {
        for j in 0..na {
            let ca = a.coefficient(i, j);
            if ca.is_empty() {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    let cb = b.coefficient(k, l);
                    if cb.is_empty() {
                        continue;
                    }
                    coeffs[(i * nb + k) * n + (j * nb + l)] = a.hopf.mul_sparse(ca, cb)?;
                }
            }
        }
    }
    Ok(Comodule {
        hopf: a.hopf.clone(),
        dim: n,
        coeffs,
    })
}

/// `A ⊕ B` with the basis of `A` first.
pub fn direct_sum(a: &Comodule, b: &Comodule) -> Result<Comodule> {
    a.same_hopf(b)?;
    let n = a.dim + b.dim;
    let mut coeffs = vec![SparseRow::new(); n * n];
    for i in 0..a.dim {
        for j in 0..a.dim {
            coeffs[i * n + j] = a.coefficient(i, j).clone();
        }
    }
    for i in 0..b.dim {
        for j in 0..b.dim {
            coeffs[(a.dim + i) * n + a.dim + j] = b.coefficient(i, j).clone();
        }
    }
    Ok(Comodule {
        hopf: a.hopf.clone(),
        dim: n,
        coeffs,
    })
}

/// `{v : ρ̄(v) ∈ S ⊗ H̄}` where `ρ̄(v) = Δ_F(v) − v ⊗ 1`.
fn preimage_of_trivial(f: &Comodule, s: &Subspace) -> Subspace {
    let n = f.dim;
    let functionals = s.annihilator().sparse_basis();
    let mut rows: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
    for (qi, q) in functionals.iter().enumerate() {
        for (i, qv) in q {
            for j in 0..n {
                for (h, c) in augmentation_part(f.coefficient(*i, j)) {
                    add_to(rows.entry((qi, *h)).or_default(), j, qv * c);
                }
            }
        }
    }
    kernel_sparse(n, rows.into_values().map(collect_sparse))
}

/// `{v : Δ_F(v) = v ⊗ 1}`.
pub fn coinvariants(f: &Comodule) -> Subspace {
    preimage_of_trivial(f, &Subspace::zero(f.dim))
}

/// The socle filtration `0 ⊂ S_1 ⊂ … ⊂ S_m = F`, where `S_{k+1}/S_k` are the
/// coinvariants of `F/S_k`. Returns `S_1, …, S_m`.
pub fn socle_filtration(f: &Comodule) -> Result<Vec<Subspace>> {
    let mut levels = Vec::new();
    let mut current = Subspace::zero(f.dim);
    while current.dim() < f.dim {
        let next = preimage_of_trivial(f, &current);
        if next.dim() == current.dim() {
            return Err(Error::NotNilpotent {
                reached: current.dim(),
                dim: f.dim,
            });
        }
        levels.push(next.clone());
        current = next;
    }
    Ok(levels)
}

/// Length of the shortest filtration with trivial quotients.
pub fn depth(f: &Comodule) -> Result<usize> {
    Ok(socle_filtration(f)?.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factorization {
    Holds,
    /// The coefficient `C[row][col]` lies outside the filtration level.
    Witness { row: usize, col: usize },
}

/// Checks that every coefficient of `f` lies in `C_{depth-1}`.
pub fn verify_conil_factorization(
    f: &Comodule,
    filtration: &ConilFiltration,
    depth: usize,
) -> Result<Factorization> {
    let level = depth
        .checked_sub(1)
        .and_then(|l| filtration.level(l))
        .ok_or_else(|| {
            Error::InvalidInput(format!("filtration level for depth {depth} is not available"))
        })?;
    let dim = f.hopf.dim();
    for i in 0..f.dim {
        for j in 0..f.dim {
            if !level.contains(&to_dense(dim, f.coefficient(i, j)))? {
                return Ok(Factorization::Witness { row: i, col: j });
            }
        }
    }
    Ok(Factorization::Holds)
}

/// Degree-one cohomology of a comodule `F`, computed on the cochains
/// `F ⊗ H̄`, indexed by `j * (dim H − 1) + (h − 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComoduleCohomology {
    pub module_dim: usize,
    pub hopf_dim: usize,
    pub quotient: Quotient,
}

impl ComoduleCohomology {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn cocycles(&self) -> &Subspace {
        &self.quotient.numerator
    }

    pub fn coboundaries(&self) -> &Subspace {
        &self.quotient.denominator
    }

    /// Splits a cochain into its components `h_j ∈ H̄` (total-basis indices).
    pub fn components(&self, cochain: &[Rational]) -> Vec<SparseRow> {
        let reduced = self.hopf_dim - 1;
        (0..self.module_dim)
            .map(|j| {
                cochain[j * reduced..(j + 1) * reduced]
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(h, v)| (h + 1, v.clone()))
                    .collect()
            })
            .collect()
    }

    /// Components of the `k`-th canonical class representative.
    pub fn representative(&self, k: usize) -> Vec<SparseRow> {
        self.components(self.quotient.representatives.basis_vector(k))
    }

    /// Class coordinates of a cochain given by components; `None` if it is
    /// not a cocycle.
    pub fn class_of(&self, components: &[SparseRow]) -> Option<Vec<Rational>> {
        let reduced = self.hopf_dim - 1;
        let mut row = SparseRow::new();
        for (j, comp) in components.iter().enumerate() {
            for (h, v) in augmentation_part(comp) {
                row.push((j * reduced + h - 1, v.clone()));
            }
        }
        row.sort_by_key(|(c, _)| *c);
        self.quotient.class_coordinates_sparse(&row)
    }
}

/// `H¹(F)` for the complex `F → F⊗H̄ → F⊗H̄⊗H̄` with
/// `d⁰(v) = ρ̄(v)` and `d¹(v⊗h) = ρ̄(v)⊗h − v⊗Δ̄h`.
pub fn cohomology_with_coefficients(f: &Comodule, degree: usize) -> Result<ComoduleCohomology> {
    if degree != 1 {
        return Err(Error::InvalidInput(format!(
            "comodule cohomology is available in degree 1 only, got {degree}"
        )));
    }
    let n = f.dim;
    let hd = f.hopf.dim();
    let reduced = hd - 1;
    let cols = n * reduced;
    let reduced_coproducts: Vec<_> = (0..hd).map(|h| reduced_coproduct(&f.hopf, h)).collect();

    let mut rows: BTreeMap<(usize, usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
    for j in 0..n {
        for h in 1..hd {
            let col = j * reduced + h - 1;
            for i in 0..n {
                for (c, v) in augmentation_part(f.coefficient(i, j)) {
                    add_to(rows.entry((i, *c, h)).or_default(), col, v.clone());
                }
            }
            for (a, b, v) in &reduced_coproducts[h] {
                add_to(rows.entry((j, *a, *b)).or_default(), col, -v.clone());
            }
        }
    }
    let cocycles = kernel_sparse(cols, rows.into_values().map(collect_sparse));
    let boundaries = (0..n).map(|j| {
        let mut row: SparseRow = (0..n)
            .flat_map(|i| {
                augmentation_part(f.coefficient(i, j))
                    .map(move |(c, v)| (i * reduced + c - 1, v.clone()))
            })
            .collect();
        row.sort_by_key(|(c, _)| *c);
        row
    });
    let coboundaries = Subspace::from_sparse_spanning(cols, boundaries);
    let quotient = Quotient::new(cocycles, coboundaries)?;
    Ok(ComoduleCohomology {
        module_dim: n,
        hopf_dim: hd,
        quotient,
    })
}

/// Extends `e` by trivial vectors `k_p`, one per cocycle of `e^∨` given by its
/// components `h^{(p)}`: `Δ(v_j) += Σ_p k_p ⊗ S(h^{(p)}_j)`.
pub fn extend_by_cocycles(e: &Comodule, cocycles: &[Vec<SparseRow>]) -> Result<Comodule> {
    let (n, r) = (e.dim, cocycles.len());
    let total = n + r;
    let mut coeffs = vec![SparseRow::new(); total * total];
    for i in 0..n {
        for j in 0..n {
            coeffs[i * total + j] = e.coefficient(i, j).clone();
        }
    }
    for (p, h) in cocycles.iter().enumerate() {
        if h.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: h.len(),
            });
        }
        for j in 0..n {
            coeffs[(n + p) * total + j] = apply_antipode(&e.hopf, &h[j]);
        }
        coeffs[(n + p) * total + n + p] = unit_element();
    }
    let u = Comodule {
        hopf: e.hopf.clone(),
        dim: total,
        coeffs,
    };
    check_comodule(&u).map_err(|v| Error::Consistency(format!("extension by cocycles: {v}")))?;
    Ok(u)
}

#[derive(Clone, Debug)]
pub struct UniversalExtension {
    /// `U(E) = E ⊕ Ext¹(E,1)^∨`, basis of `E` first.
    pub module: Comodule,
    /// `Ext¹(E,1) = H¹(E^∨)` with its canonical representatives.
    pub ext: ComoduleCohomology,
    /// `Ext¹(E,1)^∨ → U(E)`.
    pub inclusion: Matrix,
    /// `U(E) → E`.
    pub projection: Matrix,
}

pub fn universal_extension(e: &Comodule) -> Result<UniversalExtension> {
    let ext = cohomology_with_coefficients(&dual_comodule(e), 1)?;
    let reps: Vec<Vec<SparseRow>> = (0..ext.dim()).map(|k| ext.representative(k)).collect();
    let module = extend_by_cocycles(e, &reps)?;
    let (n, r) = (e.dim, ext.dim());
    let mut inclusion = Matrix::zeros(n + r, r);
    let mut projection = Matrix::zeros(n, n + r);
    for p in 0..r {
        inclusion.set(n + p, p, Rational::one());
    }
    for i in 0..n {
        projection.set(i, i, Rational::one());
    }
    Ok(UniversalExtension {
        module,
        ext,
        inclusion,
        projection,
    })
}

#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub module: Comodule,
    pub point: Vec<Rational>,
    /// `π : E_n → E_{n-1}`; absent on the first level.
    pub projection: Option<Matrix>,
    /// `Ext¹(E_{n-1},1)` used to build this level; absent on the first level.
    pub ext_of_previous: Option<ComoduleCohomology>,
}

/// The pointed system `(E_1, e_1) ← (E_2, e_2) ← …` of iterated universal
/// extensions.
#[derive(Clone, Debug)]
pub struct PointedTower {
    hopf: Arc<GradedHopf>,
    levels: Vec<TowerLevel>,
}

impl PointedTower {
    pub fn hopf(&self) -> &Arc<GradedHopf> {
        &self.hopf
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// Level `E_n`, for `1 ≤ n ≤ height`.
    pub fn level(&self, n: usize) -> Result<&TowerLevel> {
        n.checked_sub(1)
            .and_then(|k| self.levels.get(k))
            .ok_or(Error::WeightOutOfRange {
                weight: n,
                max: self.height(),
            })
    }

    pub fn levels(&self) -> &[TowerLevel] {
        &self.levels
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.module.dim()).collect()
    }

    /// `Ext¹(E_n,1)`, available for `n < height`.
    pub fn ext(&self, n: usize) -> Result<&ComoduleCohomology> {
        Ok(self
            .level(n + 1)?
            .ext_of_previous
            .as_ref()
            .expect("levels above the first carry their extension data"))
    }
}

/// Builds `E_1, …, E_{n_max}` with `E_1` trivial of dimension 1,
/// `E_n = U(E_{n-1})` and `e_n = (e_{n-1}, 0)`.
pub fn iterated_tower(hopf: Arc<GradedHopf>, n_max: usize) -> Result<PointedTower> {
    if n_max == 0 {
        return Err(Error::InvalidInput("tower height must be at least 1".into()));
    }
    if n_max - 1 > hopf.truncation() {
        return Err(Error::TruncationOverflow {
            weight: n_max - 1,
            truncation: hopf.truncation(),
        });
    }
    let mut levels = vec![TowerLevel {
        module: Comodule::trivial(hopf.clone(), 1),
        point: vec![Rational::one()],
        projection: None,
        ext_of_previous: None,
    }];
    for _ in 1..n_max {
        let prev = levels.last().expect("nonempty");
        let u = universal_extension(&prev.module)?;
        let mut point = prev.point.clone();
        point.resize(u.module.dim(), Rational::zero());
        levels.push(TowerLevel {
            module: u.module,
            point,
            projection: Some(u.projection),
            ext_of_previous: Some(u.ext),
        });
    }
    Ok(PointedTower { hopf, levels })
}

/// Solution set of the pointed morphism problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointedHom {
    Empty,
    Unique(Matrix),
    /// A particular solution plus the dimension of the homogeneous solutions.
    Family { particular: Matrix, kernel_dim: usize },
}

impl PointedHom {
    pub fn is_unique(&self) -> bool {
        matches!(self, PointedHom::Unique(_))
    }
}

/// All comodule maps `φ : A → B` with `φ(a) = b`, as a `dim B × dim A` matrix.
pub fn hom_pointed(a: &Comodule, pa: &[Rational], b: &Comodule, pb: &[Rational]) -> Result<PointedHom> {
    a.same_hopf(b)?;
    let (na, nb) = (a.dim, b.dim);
    for (expected, found) in [(na, pa.len()), (nb, pb.len())] {
        if expected != found {
            return Err(Error::DimensionMismatch { expected, found });
        }
    }
    let unknowns = na * nb;
    let var = |r: usize, j: usize| r * na + j;
    // Σ_r φ_rj C^B_sr[h] − Σ_i φ_si C^A_ij[h] = 0
    let mut rows: BTreeMap<(usize, usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
    for s in 0..nb {
        for j in 0..na {
            for r in 0..nb {
                for (h, c) in b.coefficient(s, r) {
                    add_to(rows.entry((s, j, *h)).or_default(), var(r, j), c.clone());
                }
            }
            for i in 0..na {
                for (h, c) in a.coefficient(i, j) {
                    add_to(rows.entry((s, j, *h)).or_default(), var(s, i), -c.clone());
                }
            }
        }
    }
    let mut system: Vec<SparseRow> = rows.into_values().map(collect_sparse).collect();
    for s in 0..nb {
        let mut row: SparseRow = (0..na)
            .filter(|&j| !pa[j].is_zero())
            .map(|j| (var(s, j), pa[j].clone()))
            .collect();
        if !pb[s].is_zero() {
            row.push((unknowns, pb[s].clone()));
        }
        system.push(row);
    }
    let Some((x, ker)) = solve_sparse(unknowns, system) else {
        return Ok(PointedHom::Empty);
    };
    let phi = Matrix::new(nb, na, x)?;
    Ok(if ker.dim() == 0 {
        PointedHom::Unique(phi)
    } else {
        PointedHom::Family {
            particular: phi,
            kernel_dim: ker.dim(),
        }
    })
}

/// Matrix (`dim H × dim F`) of `φ ↦ Σ_{i,j} φ_i C_ij p_j`, the coefficient
/// functions of `F` at the point `p`.
pub fn coefficient_map(f: &Comodule, point: &[Rational]) -> Result<Matrix> {
    if point.len() != f.dim {
        return Err(Error::DimensionMismatch {
            expected: f.dim,
            found: point.len(),
        });
    }
    let hd = f.hopf.dim();
    let mut m = Matrix::zeros(hd, f.dim);
    for i in 0..f.dim {
        for (j, pj) in point.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
            for (h, c) in f.coefficient(i, j) {
                let v = m.get(*h, i) + c * pj;
                m.set(*h, i, v);
            }
        }
    }
    Ok(m)
}

/// The unique pointed morphism `E_{m+n} → E_m ⊗ E_n` sending `e_{m+n}` to
/// `e_m ⊗ e_n`.
pub fn tower_product(t: &PointedTower, m: usize, n: usize) -> Result<Matrix> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("tower levels start at 1".into()));
    }
    let top = t.level(m + n)?;
    let (lm, ln) = (t.level(m)?, t.level(n)?);
    let target = tensor_comodule(&lm.module, &ln.module)?;
    let point = Matrix::from_rows(1, lm.point.iter().map(|x| vec![x.clone()]).collect())?
        .kron(&Matrix::from_rows(1, ln.point.iter().map(|x| vec![x.clone()]).collect())?)
        .column(0);
    match hom_pointed(&top.module, &top.point, &target, &point)? {
        PointedHom::Unique(mu) => Ok(mu),
        PointedHom::Empty => Err(Error::PointedMorphism(format!(
            "E_{} → E_{m} ⊗ E_{n} does not exist",
            m + n
        ))),
        PointedHom::Family { kernel_dim, .. } => Err(Error::PointedMorphism(format!(
            "E_{} → E_{m} ⊗ E_{n} is not unique ({kernel_dim}-dimensional freedom)",
            m + n
        ))),
    }
}

/// Recovers products of coefficient functions through [`tower_product`] and
/// compares them with the multiplication table of the Hopf algebra. For each
/// pair of canonical basis vectors `x ∈ c(E_m^∨)`, `y ∈ c(E_n^∨)` the product
/// is computed as `c_{E_{m+n}}(μ^T (φ ⊗ ψ))` with `c(φ) = x`, `c(ψ) = y`.
/// Returns the number of entries compared.
pub fn verify_tower_product(t: &PointedTower, m: usize, n: usize) -> Result<usize> {
    let mu = tower_product(t, m, n)?;
    let h = t.hopf();
    let (lm, ln, top) = (t.level(m)?, t.level(n)?, t.level(m + n)?);
    let (cm, cn) = (coefficient_map(&lm.module, &lm.point)?, coefficient_map(&ln.module, &ln.point)?);
    let ctop = coefficient_map(&top.module, &top.point)?;
    let preimages = |c: &Matrix| -> Result<Vec<(Vec<Rational>, Vec<Rational>)>> {
        let img = Subspace::row_space(&c.transpose());
        (0..img.dim())
            .map(|k| {
                let x = img.basis_vector(k).to_vec();
                let rows = (0..c.rows()).map(|r| {
                    let mut row = to_sparse(c.row(r));
                    if !x[r].is_zero() {
                        row.push((c.cols(), x[r].clone()));
                    }
                    row
                });
                let (phi, _) = solve_sparse(c.cols(), rows)
                    .ok_or_else(|| Error::Consistency("image vector without preimage".into()))?;
                Ok((x, phi))
            })
            .collect()
    };
    let left = preimages(&cm)?;
    let right = preimages(&cn)?;
    let mu_t = mu.transpose();
    let mut compared = 0;
    for (x, phi) in &left {
        for (y, psi) in &right {
            let pair: Vec<Rational> = phi
                .iter()
                .flat_map(|a| psi.iter().map(move |b| a * b))
                .collect();
            let pulled = mu_t.mul_vec(&pair)?;
            let reconstructed = ctop.mul_vec(&pulled)?;
            let expected = h.multiply(x, y)?;
            if reconstructed != expected {
                return Err(Error::Consistency(format!(
                    "reconstructed product through E_{} differs from the table",
                    m + n
                )));
            }
            compared += 1;
        }
    }
    Ok(compared)
}

/// A random pointed comodule of depth at most `max_depth`: a trivial
/// comodule extended `max_depth - 1` times by random cocycles (not just
/// class representatives), optionally written in a random basis.
pub fn random_nilpotent_comodule<R: Rng>(
    hopf: &Arc<GradedHopf>,
    max_depth: usize,
    rng: &mut R,
) -> Result<(Comodule, Vec<Rational>)> {
    let mut f = Comodule::trivial(hopf.clone(), rng.gen_range(1..=2));
    for _ in 1..max_depth {
        let coh = cohomology_with_coefficients(&dual_comodule(&f), 1)?;
        let z = coh.cocycles();
        if z.dim() == 0 {
            break;
        }
        let count = rng.gen_range(1..=2);
        let cocycles: Vec<Vec<SparseRow>> = (0..count)
            .map(|_| {
                let coords: Vec<Rational> = (0..z.dim()).map(|_| rat(rng.gen_range(-2..=2))).collect();
                let v = z.combine(&coords)?;
                Ok(coh.components(&v))
            })
            .collect::<Result<_>>()?;
        f = extend_by_cocycles(&f, &cocycles)?;
    }
    if rng.gen_bool(0.5) {
        let n = f.dim();
        loop {
            let entries = (0..n * n).map(|_| rat(rng.gen_range(-1..=1))).collect();
            let p = Matrix::new(n, n, entries)?;
            if p.inverse().is_some() {
                f = f.change_basis(&p)?;
                break;
            }
        }
    }
    let point = loop {
        let p: Vec<Rational> = (0..f.dim()).map(|_| rat(rng.gen_range(-2..=2))).collect();
        if p.iter().any(|x| !x.is_zero()) {
            break p;
        }
    };
    Ok((f, point))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzOutcome {
    pub seed: u64,
    pub dim: usize,
    pub depth: usize,
    pub unique: bool,
}

/// Samples `count` random pointed comodules of depth at most `n` and solves
/// the pointed morphism problem from `(E_n, e_n)` into each.
pub fn universal_property_fuzz(
    tower: &PointedTower,
    n: usize,
    count: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<FuzzOutcome>> {
    let level = tower.level(n)?;
    let seeds: Vec<u64> = (0..count as u64)
        .map(|k| seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((n as u64) << 32 | k))
        .collect();
    exec.map(&seeds, |&s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let (f, p) = random_nilpotent_comodule(tower.hopf(), n, &mut rng)?;
        let unique = hom_pointed(&level.module, &level.point, &f, &p)?.is_unique();
        Ok(FuzzOutcome {
            seed: s,
            dim: f.dim(),
            depth: depth(&f)?,
            unique,
        })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::conil_filtration;
    use crate::hopfcore::{build_free_shuffle_hopf, free_index};
    use crate::tensorspace::Word;

    fn free(d: usize, n: usize) -> Arc<GradedHopf> {
        Arc::new(build_free_shuffle_hopf(d, n))
    }

    fn letter(d: usize, l: usize) -> usize {
        free_index(d, &Word::from_letters(d, &[l]).unwrap())
    }

    /// `v ↦ v⊗1 + w⊗x`, `w ↦ w⊗1`.
    fn two_step(h: &Arc<GradedHopf>) -> Comodule {
        let x = letter(h.weight_range(1).len(), 1);
        Comodule::from_coaction(
            h.clone(),
            &[
                vec![(0, 0, rat(1)), (1, x, rat(1))],
                vec![(1, 0, rat(1))],
            ],
        )
        .unwrap()
    }

    #[test]
    fn trivial_and_two_step_laws() {
        let h = free(2, 3);
        assert_eq!(check_comodule(&Comodule::trivial(h.clone(), 3)), Ok(()));
        assert_eq!(check_comodule(&two_step(&h)), Ok(()));
        assert_eq!(depth(&Comodule::trivial(h.clone(), 2)).unwrap(), 1);
        assert_eq!(depth(&two_step(&h)).unwrap(), 2);
    }

    #[test]
    fn dropped_term_breaks_coassociativity() {
        let h = free(2, 3);
        let t = iterated_tower(h.clone(), 3).unwrap();
        let e3 = &t.level(3).unwrap().module;
        let mut coeffs: Vec<SparseRow> = (0..e3.dim() * e3.dim())
            .map(|k| e3.coefficient(k / e3.dim(), k % e3.dim()).clone())
            .collect();
        let pos = coeffs
            .iter()
            .position(|c| c.iter().any(|(k, _)| h.weight(*k) == 2))
            .unwrap();
        coeffs[pos].retain(|(k, _)| h.weight(*k) != 2);
        let broken = Comodule::new(h.clone(), e3.dim(), coeffs).unwrap();
        let v = check_comodule(&broken).unwrap_err();
        assert_eq!(v.law, ComoduleLaw::Coassociativity);
    }

    #[test]
    fn dual_is_an_involution() {
        let h = free(2, 3);
        let f = two_step(&h);
        assert_eq!(dual_comodule(&dual_comodule(&f)), f);
        let t = Comodule::trivial(h, 2);
        assert_eq!(dual_comodule(&t), t);
        assert_eq!(check_comodule(&dual_comodule(&f)), Ok(()));
    }

    #[test]
    fn tensor_with_trivial() {
        let h = free(2, 3);
        let f = two_step(&h);
        let one = Comodule::trivial(h.clone(), 1);
        assert_eq!(tensor_comodule(&one, &f).unwrap(), f);
        let ff = tensor_comodule(&f, &f).unwrap();
        assert_eq!(ff.dim(), 4);
        assert_eq!(check_comodule(&ff), Ok(()));
        assert_eq!(depth(&ff).unwrap(), 3);
    }

    #[test]
    fn tensor_overflow() {
        let h = free(2, 1);
        let f = two_step(&h);
        assert!(matches!(
            tensor_comodule(&f, &f),
            Err(Error::TruncationOverflow { .. })
        ));
    }

    #[test]
    fn non_nilpotent_is_rejected() {
        // v ↦ v ⊗ (1 + x) violates the counit law but exercises the socle loop
        let h = free(1, 2);
        let f = Comodule::from_coaction(h, &[vec![(0, 0, rat(1)), (0, 1, rat(1))]]).unwrap();
        assert!(check_comodule(&f).is_err());
        assert_eq!(depth(&f), Err(Error::NotNilpotent { reached: 0, dim: 1 }));
    }

    #[test]
    fn trivial_cohomology_is_v() {
        let h = free(3, 3);
        let coh = cohomology_with_coefficients(&Comodule::trivial(h, 1), 1).unwrap();
        assert_eq!(coh.dim(), 3);
        assert!(cohomology_with_coefficients(&two_step(&free(2, 2)), 2).is_err());
    }

    #[test]
    fn tower_dims_and_points() {
        let h = free(2, 3);
        let t = iterated_tower(h.clone(), 4).unwrap();
        assert_eq!(t.dims(), vec![1, 3, 7, 15]);
        assert_eq!(t.ext(2).unwrap().dim(), 4);
        for n in 2..=4 {
            let level = t.level(n).unwrap();
            let proj = level.projection.as_ref().unwrap();
            assert_eq!(proj.mul_vec(&level.point).unwrap(), t.level(n - 1).unwrap().point);
        }
        assert!(iterated_tower(free(2, 1), 3).is_err());
    }

    #[test]
    fn coinvariants_of_e2() {
        let h = free(2, 3);
        let t = iterated_tower(h, 2).unwrap();
        let e2 = &t.level(2).unwrap().module;
        let inv = coinvariants(e2);
        assert_eq!(inv.dim(), 2);
        assert_eq!(inv.pivots(), &[1, 2]);
        assert_eq!(coinvariants(&dual_comodule(e2)).dim(), 1);
    }

    #[test]
    fn factorization_levels() {
        let h = free(2, 3);
        let c = conil_filtration(&h, 3);
        let t = iterated_tower(h, 3).unwrap();
        let e3 = &t.level(3).unwrap().module;
        assert_eq!(verify_conil_factorization(e3, &c, 3).unwrap(), Factorization::Holds);
        assert!(matches!(
            verify_conil_factorization(e3, &c, 2).unwrap(),
            Factorization::Witness { .. }
        ));
    }

    #[test]
    fn trivial_pointed_hom_is_scaling() {
        let h = free(1, 2);
        let one = Comodule::trivial(h, 1);
        let r = hom_pointed(&one, &[rat(2)], &one, &[rat(3)]).unwrap();
        assert_eq!(r, PointedHom::Unique(Matrix::new(1, 1, vec![crate::exactlin::ratio(3, 2)]).unwrap()));
        let zero = hom_pointed(&one, &[rat(0)], &one, &[rat(1)]).unwrap();
        assert_eq!(zero, PointedHom::Empty);
    }

    #[test]
    fn change_basis_preserves_laws() {
        let h = free(2, 2);
        let f = two_step(&h);
        let p = Matrix::from_i64(&[&[1, 1], &[0, 1]]);
        let g = f.change_basis(&p).unwrap();
        assert_eq!(check_comodule(&g), Ok(()));
        assert_eq!(depth(&g).unwrap(), 2);
    }

    #[test]
    fn product_of_levels_one_and_one() {
        let h = free(2, 3);
        let t = iterated_tower(h, 2).unwrap();
        assert_eq!(verify_tower_product(&t, 1, 1).unwrap(), 1);
    }
}
