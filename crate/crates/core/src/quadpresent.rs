//! Quadratic data `(V, H², ∪)`, the kernel tower `T_n ⊆ V^⊗n`, the
//! sub-Hopf algebra `H(V,J) = ⊕ T_n` of the shuffle algebra, geometric
//! presets, and the grading maps `ζ_n`, `ξ_n` read off an iterated universal
//! extension tower.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::Rng;

use crate::coalgebra::{cobar_cohomology, primitives, TupleSum};
use crate::comodule::{iterated_tower, PointedTower};
use crate::error::{Error, Result};
use crate::exactlin::{kernel, rat, to_sparse, Matrix, Rational, SparseRow, Subspace};
use crate::hopfcore::{build_free_shuffle_hopf, GradedHopf};
use crate::tensorspace::{induced_positional_map, restrict_map, tensor_subspaces, GradedVector, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticData {
    d1: usize,
    d2: usize,
    /// `d2 × d1²`; column `i * d1 + j` is the image of `e_i ⊗ e_j` (0-based).
    cup: Matrix,
}

impl QuadraticData {
    /// Checks the shape of the cup matrix only; see [`validate_quadratic`].
    pub fn new(d1: usize, d2: usize, cup: Matrix) -> Result<Self> {
        if cup.rows() != d2 || cup.cols() != d1 * d1 {
            return Err(Error::Shape(format!(
                "cup matrix is {}x{}, expected {}x{}",
                cup.rows(),
                cup.cols(),
                d2,
                d1 * d1
            )));
        }
        Ok(Self { d1, d2, cup })
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn cup(&self) -> &Matrix {
        &self.cup
    }

    /// Quadratic data `(H¹, H², ∪)` of a Hopf algebra, read from its cobar
    /// complex. `V` is the space of primitives with its canonical basis
    /// `p_1, …`; `∪(p_i ⊗ p_j)` is the class of the cocycle `p_i ⊗ p_j` in
    /// `H²` of weight `wt p_i + wt p_j`, and `H²` is the sum of the weight
    /// pieces reached this way.
    pub fn from_hopf(h: &GradedHopf) -> Result<(Self, Subspace)> {
        let prims = primitives(h);
        let d1 = prims.dim();
        let prim_rows: Vec<SparseRow> = (0..d1).map(|i| to_sparse(prims.basis_vector(i))).collect();
        let prim_weight: Vec<usize> = prim_rows.iter().map(|r| h.weight(r[0].0)).collect();
        let max_weight = prim_weight.iter().map(|w| 2 * w).max().unwrap_or(0);
        if max_weight > h.truncation() {
            return Err(Error::WeightOutOfRange {
                weight: max_weight,
                max: h.truncation(),
            });
        }
        let report = cobar_cohomology(h, 2, max_weight)?;
        let mut targets: BTreeMap<usize, usize> = BTreeMap::new();
        for &a in &prim_weight {
            for &b in &prim_weight {
                targets.insert(a + b, 0);
            }
        }
        let mut d2 = 0;
        for (w, offset) in targets.iter_mut() {
            *offset = d2;
            d2 += report.weights[*w].dim();
        }
        let mut cup = Matrix::zeros(d2, d1 * d1);
        for i in 0..d1 {
            for j in 0..d1 {
                let w = prim_weight[i] + prim_weight[j];
                let mut x = TupleSum::new();
                for (a, ca) in &prim_rows[i] {
                    for (b, cb) in &prim_rows[j] {
                        x.insert(vec![*a, *b], ca * cb);
                    }
                }
                let class = report.weights[w]
                    .class_of(&x)
                    .ok_or_else(|| Error::Consistency("product of primitives is not a cocycle".into()))?;
                for (k, c) in class.into_iter().enumerate() {
                    cup.set(targets[&w] + k, i * d1 + j, c);
                }
            }
        }
        Ok((Self::new(d1, d2, cup)?, prims))
    }
}

/// Checks that the cup product kills every symmetric tensor; on failure
/// names the first pair `(i, j)` (1-based, `i ≤ j`) with
/// `∪(e_i⊗e_j + e_j⊗e_i) ≠ 0`.
pub fn validate_quadratic(q: &QuadraticData) -> Result<()> {
    let d = q.d1;
    for i in 0..d {
        for j in i..d {
            let bad = (0..q.d2).any(|r| !(q.cup.get(r, i * d + j) + q.cup.get(r, j * d + i)).is_zero());
            if bad {
                return Err(Error::SymmetricTensorViolation { i: i + 1, j: j + 1 });
            }
        }
    }
    Ok(())
}

/// `J = ker ∪ ⊆ V^⊗2`.
pub fn kernel_j(q: &QuadraticData) -> Result<Subspace> {
    validate_quadratic(q)?;
    Ok(kernel(&q.cup))
}

/// Antisymmetrization `V^⊗2 → Λ²V`, `e_i⊗e_j ↦ e_i∧e_j`, with `Λ²V` based by
/// the pairs `i < j` in lexicographic order.
pub fn antisymmetrization(g: usize) -> Matrix {
    let pairs: Vec<(usize, usize)> = (0..g).flat_map(|i| (i + 1..g).map(move |j| (i, j))).collect();
    let mut m = Matrix::zeros(pairs.len(), g * g);
    for (r, (i, j)) in pairs.into_iter().enumerate() {
        m.set(r, i * g + j, rat(1));
        m.set(r, j * g + i, rat(-1));
    }
    m
}

/// A smooth proper curve with `dim H¹ = g`: `H² = 0`, cup product zero.
pub fn preset_curve(g: usize) -> QuadraticData {
    QuadraticData {
        d1: g,
        d2: 0,
        cup: Matrix::zeros(0, g * g),
    }
}

/// An abelian variety with `dim H¹ = g`: `H² = Λ²H¹`, cup = antisymmetrization.
pub fn preset_abelian(g: usize) -> QuadraticData {
    let cup = antisymmetrization(g);
    QuadraticData {
        d1: g,
        d2: cup.rows(),
        cup,
    }
}

/// Named presets: `curve` and `abelian`.
pub fn preset(name: &str, g: usize) -> Result<QuadraticData> {
    match name {
        "curve" => Ok(preset_curve(g)),
        "abelian" => Ok(preset_abelian(g)),
        other => Err(Error::InvalidInput(format!("unknown preset {other:?}"))),
    }
}

/// Validated custom data.
pub fn preset_custom(d1: usize, d2: usize, cup: Matrix) -> Result<QuadraticData> {
    let q = QuadraticData::new(d1, d2, cup)?;
    validate_quadratic(&q)?;
    Ok(q)
}

/// Random valid data: `cup = R · A` with `A` the antisymmetrization and `R`
/// a random integer matrix, so symmetric tensors are killed by construction.
pub fn random_quadratic<R: Rng>(d1: usize, d2: usize, rng: &mut R) -> QuadraticData {
    let a = antisymmetrization(d1);
    let entries = (0..d2 * a.rows()).map(|_| rat(rng.gen_range(-2..=2))).collect();
    let r = Matrix::new(d2, a.rows(), entries).expect("shape");
    let cup = r.mul(&a).expect("shape");
    QuadraticData { d1, d2, cup }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TnTower {
    quadratic: QuadraticData,
    spaces: Vec<Subspace>,
}

impl TnTower {
    pub fn quadratic(&self) -> &QuadraticData {
        &self.quadratic
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn space(&self, n: usize) -> Result<&Subspace> {
        self.spaces.get(n).ok_or(Error::WeightOutOfRange {
            weight: n,
            max: self.spaces.len() - 1,
        })
    }

    pub fn max_weight(&self) -> usize {
        self.spaces.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }
}

/// `T_0 = k`, `T_1 = V`, and `T_n = ker(T_{n-1}⊗V → T_{n-2}⊗(V^⊗2/J))`, the
/// quotient acting on the last two factors.
pub fn tn_tower(q: &QuadraticData, n_max: usize) -> Result<TnTower> {
    let j = kernel_j(q)?;
    let d = q.d1;
    // V^⊗2 → V^⊗2/J ≅ k^r through a basis of the annihilator of J
    let quotient = j.annihilator().basis().clone();
    let r = quotient.rows();
    let mut spaces = vec![Subspace::full(1)];
    if n_max >= 1 {
        spaces.push(Subspace::full(d));
    }
    for n in 2..=n_max {
        let source = tensor_subspaces(&spaces[n - 1], &Subspace::full(d));
        let target = tensor_subspaces(&spaces[n - 2], &Subspace::full(r));
        let map = induced_positional_map(&quotient, n - 2, 0, d)?;
        let restricted = restrict_map(&map, &source, &target)?;
        let ker = kernel(&restricted);
        let vectors: Vec<Vec<Rational>> = (0..ker.dim())
            .map(|k| source.combine(ker.basis_vector(k)))
            .collect::<Result<_>>()?;
        spaces.push(Subspace::span(d.pow(n as u32), &vectors)?);
    }
    Ok(TnTower {
        quadratic: q.clone(),
        spaces,
    })
}

pub fn graded_dims(h: &GradedHopf) -> Vec<usize> {
    h.weight_dims()
}

/// `H(V,J)` and its embedding into `H(V)`, as the matrix
/// `dim H(V) × dim H(V,J)` whose columns are the basis elements.
#[derive(Clone, Debug)]
pub struct QuadHopf {
    pub hopf: GradedHopf,
    pub ambient: GradedHopf,
    pub embedding: Matrix,
}

pub fn build_quad_hopf(tower: &TnTower, n_max: usize) -> Result<GradedHopf> {
    Ok(build_quad_hopf_with_embedding(tower, n_max)?.hopf)
}

/// Restricts the tables of `H(V)` to `⊕_{n ≤ N} T_n`. Any product, coproduct
/// or antipode leaving the tower raises a closure violation.
pub fn build_quad_hopf_with_embedding(tower: &TnTower, n_max: usize) -> Result<QuadHopf> {
    if n_max > tower.max_weight() {
        return Err(Error::WeightOutOfRange {
            weight: n_max,
            max: tower.max_weight(),
        });
    }
    let d = tower.quadratic.d1;
    let amb = build_free_shuffle_hopf(d, n_max);
    let mut basis: Vec<SparseRow> = Vec::new();
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    for n in 0..=n_max {
        let offset = amb.weight_range(n).start;
        let t = &tower.spaces[n];
        for k in 0..t.dim() {
            let v = t.basis_vector(k);
            basis.push(to_sparse(v).into_iter().map(|(c, x)| (c + offset, x)).collect());
            let gv = GradedVector::from_dense(d, n, v);
            let single = gv.terms().iter().next().filter(|(_, c)| gv.terms().len() == 1 && c.is_one());
            labels.push(match single {
                Some((w, _)) => w.to_string(),
                None if n == 0 => Word::empty().to_string(),
                None => gv.to_string(),
            });
            weights.push(n);
        }
    }
    let dim = basis.len();
    let pivots: Vec<usize> = basis.iter().map(|r| r[0].0).collect();
    let sub = Subspace::from_sparse_spanning(amb.dim(), basis.iter().cloned());
    debug_assert_eq!(sub.pivots(), &pivots[..]);

    let coords = |x: &SparseRow, what: &str| -> Result<SparseRow> {
        let c = sub
            .coordinates_sparse(x)
            .ok_or_else(|| Error::ClosureViolation(format!("{what} leaves the tower")))?;
        Ok(to_sparse(&c))
    };

    let mut products = BTreeMap::new();
    for i in 0..dim {
        for j in 0..dim {
            if weights[i] + weights[j] <= n_max {
                let x = amb.mul_sparse(&basis[i], &basis[j])?;
                products.insert((i, j), coords(&x, &format!("product ({}, {})", labels[i], labels[j]))?);
            }
        }
    }

    let pivot_pos: BTreeMap<usize, usize> = pivots.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let mut coproducts = Vec::with_capacity(dim);
    for (k, u) in basis.iter().enumerate() {
        let mut full: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (i, c) in u {
            for (a, b, v) in amb.coproduct_terms(*i) {
                *full.entry((*a, *b)).or_insert_with(Rational::zero) += c * v;
            }
        }
        full.retain(|_, v| !v.is_zero());
        // the coefficient on u_p ⊗ u_q is the value at the pivot pair
        let terms: Vec<(usize, usize, Rational)> = full
            .iter()
            .filter_map(|((a, b), v)| Some((*pivot_pos.get(a)?, *pivot_pos.get(b)?, v.clone())))
            .collect();
        let mut rebuilt: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (p, q, v) in &terms {
            for (a, ca) in &basis[*p] {
                for (b, cb) in &basis[*q] {
                    *rebuilt.entry((*a, *b)).or_insert_with(Rational::zero) += v * ca * cb;
                }
            }
        }
        rebuilt.retain(|_, v| !v.is_zero());
        if rebuilt != full {
            return Err(Error::ClosureViolation(format!("coproduct of {} leaves the tower", labels[k])));
        }
        coproducts.push(terms);
    }

    let mut antipodes = Vec::with_capacity(dim);
    for (k, u) in basis.iter().enumerate() {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, c) in u {
            for (m, v) in amb.antipode_terms(*i) {
                *acc.entry(*m).or_insert_with(Rational::zero) += c * v;
            }
        }
        let x: SparseRow = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        antipodes.push(coords(&x, &format!("antipode of {}", labels[k]))?);
    }

    let hopf = GradedHopf::from_tables(n_max, labels, weights, products, coproducts, antipodes)?;
    let embedding = Matrix::from_sparse_rows(amb.dim(), &basis).transpose();
    Ok(QuadHopf {
        hopf,
        ambient: amb,
        embedding,
    })
}

/// Target of the grading map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XiTarget {
    /// `ζ_n : Ext¹(E_n,1) → V^⊗n`.
    Full,
    /// `ξ_n : Ext¹(E_n,1) → T_n`.
    Tn,
}

/// Everything needed for `τ_n`, `ζ_n` and `ξ_n` over one Hopf algebra: its
/// pointed tower, its primitives `V`, and the `T_n` of its own quadratic data.
#[derive(Clone, Debug)]
pub struct GradingContext {
    pub tower: PointedTower,
    pub primitives: Subspace,
    pub quadratic: QuadraticData,
    pub tn: TnTower,
}

impl GradingContext {
    /// Supports weights `n ≤ n_max`; needs truncation at least `n_max`.
    pub fn new(hopf: Arc<GradedHopf>, n_max: usize) -> Result<Self> {
        if n_max == 0 || n_max > hopf.truncation() {
            return Err(Error::WeightOutOfRange {
                weight: n_max,
                max: hopf.truncation(),
            });
        }
        let (quadratic, primitives) = QuadraticData::from_hopf(&hopf)?;
        let tn = tn_tower(&quadratic, n_max)?;
        let tower = iterated_tower(hopf, n_max + 1)?;
        Ok(Self {
            tower,
            primitives,
            quadratic,
            tn,
        })
    }

    pub fn max_weight(&self) -> usize {
        self.tower.height() - 1
    }

    fn prim_coords(&self, x: &SparseRow) -> Result<Vec<Rational>> {
        self.primitives
            .coordinates_sparse(x)
            .ok_or_else(|| Error::Consistency("cocycle component on a trivial summand is not primitive".into()))
    }

    /// `τ_n : Ext¹(E_n,1) → Ext¹(E_{n-1},1) ⊗ V`, restriction of cocycles to
    /// the trivial part `K_n ⊂ E_n`; rows indexed `p * dim V + r`. For
    /// `n = 1` it is the map to `V` itself.
    pub fn tau(&self, n: usize) -> Result<Matrix> {
        self.check_weight(n)?;
        let ext = self.tower.ext(n)?;
        let dv = self.primitives.dim();
        let (start, k_dim) = if n == 1 {
            (0, 1)
        } else {
            let prev = self.tower.level(n - 1)?.module.dim();
            (prev, self.tower.level(n)?.module.dim() - prev)
        };
        let mut m = Matrix::zeros(k_dim * dv, ext.dim());
        for q in 0..ext.dim() {
            let rep = ext.representative(q);
            for p in 0..k_dim {
                for (r, c) in self.prim_coords(&rep[start + p])?.into_iter().enumerate() {
                    m.set(p * dv + r, q, c);
                }
            }
        }
        Ok(m)
    }

    /// `ζ_1 = τ_1` and `ζ_n = (ζ_{n-1} ⊗ id_V) ∘ τ_n`.
    pub fn zeta(&self, n: usize) -> Result<Matrix> {
        self.check_weight(n)?;
        let mut z = self.tau(1)?;
        for k in 2..=n {
            z = z.kron(&Matrix::identity(self.primitives.dim())).mul(&self.tau(k)?)?;
        }
        Ok(z)
    }

    pub fn xi(&self, n: usize, target: XiTarget) -> Result<Matrix> {
        let z = self.zeta(n)?;
        match target {
            XiTarget::Full => Ok(z),
            XiTarget::Tn => restrict_map(&z, &Subspace::full(z.cols()), self.tn.space(n)?),
        }
    }

    fn check_weight(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.max_weight() {
            return Err(Error::WeightOutOfRange {
                weight: n,
                max: self.max_weight(),
            });
        }
        Ok(())
    }
}

/// `τ_n` for a Hopf algebra, building the tower up to `E_{n+1}`.
pub fn tau_map(h: Arc<GradedHopf>, n: usize) -> Result<Matrix> {
    GradingContext::new(h, n)?.tau(n)
}

pub fn xi_map(ctx: &GradingContext, n: usize, target: XiTarget) -> Result<Matrix> {
    ctx.xi(n, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Matrix;
    use crate::hopfcore::{check_hopf_axioms, HopfReport};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Oracle: `T_n = (T_{n-1}⊗V) ∩ (V^⊗(n-2) ⊗ J)` by direct intersection.
    fn tn_by_intersection(q: &QuadraticData, n_max: usize) -> Vec<Subspace> {
        let d = q.d1();
        let j = kernel(q.cup());
        let mut out = vec![Subspace::full(1), Subspace::full(d)];
        for n in 2..=n_max {
            let left = tensor_subspaces(&out[n - 1], &Subspace::full(d));
            let right = tensor_subspaces(&Subspace::full(d.pow(n as u32 - 2)), &j);
            out.push(left.intersect(&right).unwrap());
        }
        out
    }

    #[test]
    fn validation_cases() {
        assert!(validate_quadratic(&preset_curve(3)).is_ok());
        let zero = QuadraticData::new(2, 1, Matrix::zeros(1, 4)).unwrap();
        assert!(validate_quadratic(&zero).is_ok());
        let ab = QuadraticData::new(2, 1, Matrix::from_i64(&[&[0, 1, -1, 0]])).unwrap();
        assert!(validate_quadratic(&ab).is_ok());
        let bad = QuadraticData::new(2, 1, Matrix::from_i64(&[&[1, 0, 0, 0]])).unwrap();
        assert_eq!(validate_quadratic(&bad), Err(Error::SymmetricTensorViolation { i: 1, j: 1 }));
        assert!(QuadraticData::new(2, 1, Matrix::zeros(1, 3)).is_err());
    }

    #[test]
    fn presets() {
        assert_eq!(preset_abelian(2).cup(), &Matrix::from_i64(&[&[0, 1, -1, 0]]));
        assert_eq!(preset_abelian(1), preset_curve(1));
        assert_eq!(preset("curve", 3).unwrap().d1(), 3);
        assert!(preset("surface", 1).is_err());
        assert_eq!(kernel_j(&preset_abelian(2)).unwrap().dim(), 3);
        assert_eq!(kernel_j(&preset_curve(2)).unwrap(), Subspace::full(4));
    }

    #[test]
    fn tower_dims() {
        assert_eq!(tn_tower(&preset_curve(2), 3).unwrap().dims(), vec![1, 2, 4, 8]);
        assert_eq!(tn_tower(&preset_abelian(2), 3).unwrap().dims(), vec![1, 2, 3, 4]);
        assert_eq!(tn_tower(&preset_curve(0), 3).unwrap().dims(), vec![1, 0, 0, 0]);
        for g in 1..=3 {
            let dims = tn_tower(&preset_abelian(g), 4).unwrap().dims();
            let expected: Vec<usize> = (0..=4).map(|n| binom(g + n - 1, n)).collect();
            assert_eq!(dims, expected);
        }
    }

    #[test]
    fn recursion_matches_intersection_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let q = random_quadratic(3, rng.gen_range(1..=2), &mut rng);
            assert_eq!(tn_tower(&q, 4).unwrap().spaces(), &tn_by_intersection(&q, 4)[..]);
        }
    }

    #[test]
    fn curve_hopf_equals_free() {
        let t = tn_tower(&preset_curve(2), 3).unwrap();
        assert_eq!(build_quad_hopf(&t, 3).unwrap(), build_free_shuffle_hopf(2, 3));
    }

    #[test]
    fn abelian_hopf_is_a_hopf_algebra() {
        let t = tn_tower(&preset_abelian(2), 3).unwrap();
        let h = build_quad_hopf(&t, 3).unwrap();
        assert_eq!(graded_dims(&h), vec![1, 2, 3, 4]);
        assert!(matches!(check_hopf_axioms(&h), HopfReport::Pass { .. }));
    }

    #[test]
    fn one_letter_square() {
        let t = tn_tower(&preset_curve(1), 3).unwrap();
        let h = build_quad_hopf(&t, 3).unwrap();
        assert_eq!(graded_dims(&h), vec![1, 1, 1, 1]);
        let x = h.basis_element(1);
        let sq = h.multiply(&x, &x).unwrap();
        assert_eq!(sq[2], rat(2));
    }

    #[test]
    fn closure_failure_is_reported() {
        // a subspace that is not closed under the product
        let q = preset_abelian(2);
        let mut t = tn_tower(&q, 2).unwrap();
        t.spaces[2] = Subspace::span(4, &[vec![rat(1), rat(0), rat(0), rat(0)]]).unwrap();
        assert!(matches!(
            build_quad_hopf(&t, 2),
            Err(Error::ClosureViolation(_))
        ));
    }

    #[test]
    fn quadratic_data_of_free_and_abelian() {
        let (q, _) = QuadraticData::from_hopf(&build_free_shuffle_hopf(2, 2)).unwrap();
        assert_eq!(q.d1(), 2);
        assert_eq!(q.d2(), 0);
        let t = tn_tower(&preset_abelian(2), 2).unwrap();
        let h = build_quad_hopf(&t, 2).unwrap();
        let (q, _) = QuadraticData::from_hopf(&h).unwrap();
        assert_eq!((q.d1(), q.d2()), (2, 1));
        assert_eq!(kernel_j(&q).unwrap(), kernel_j(&preset_abelian(2)).unwrap());
    }

    #[test]
    fn zeta_one_is_identity() {
        let ctx = GradingContext::new(Arc::new(build_free_shuffle_hopf(2, 2)), 2).unwrap();
        assert_eq!(ctx.zeta(1).unwrap(), Matrix::identity(2));
        let xi2 = ctx.xi(2, XiTarget::Tn).unwrap();
        assert_eq!(xi2.rank(), 4);
        assert!(ctx.xi(3, XiTarget::Tn).is_err());
    }

    #[test]
    fn random_data_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let q = random_quadratic(3, 2, &mut rng);
            assert!(validate_quadratic(&q).is_ok());
        }
    }
}
