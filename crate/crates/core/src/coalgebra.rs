//! Conilpotency filtration, primitives and cobar cohomology of a
//! [`GradedHopf`], all computed weight by weight.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{kernel_sparse, Matrix, Quotient, Rational, SparseRow, Subspace};
use crate::hopfcore::GradedHopf;
use crate::parallel::Exec;

/// A finite sum of basis tuples `b_{i1}⊗…⊗b_{ik}`.
pub type TupleSum = BTreeMap<Vec<usize>, Rational>;

fn add_to<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, value: Rational) {
    if value.is_zero() {
        return;
    }
    let entry = map.entry(key).or_insert_with(Rational::zero);
    *entry += value;
}

fn prune<K: Ord>(map: &mut BTreeMap<K, Rational>) {
    map.retain(|_, v| !v.is_zero());
}

/// Terms of `Δ̄(b_i)`: the coproduct with both tensor factors in the
/// augmentation ideal.
pub fn reduced_coproduct(h: &GradedHopf, i: usize) -> Vec<(usize, usize, Rational)> {
    if i == GradedHopf::UNIT {
        return Vec::new();
    }
    h.coproduct_terms(i)
        .iter()
        .filter(|(a, b, _)| *a != GradedHopf::UNIT && *b != GradedHopf::UNIT)
        .cloned()
        .collect()
}

/// `Δ̄` applied at position `pos` of every tuple in `x`.
fn reduced_coproduct_at(h: &GradedHopf, x: &TupleSum, pos: usize) -> TupleSum {
    let mut out = TupleSum::new();
    for (t, c) in x {
        for (a, b, v) in reduced_coproduct(h, t[pos]) {
            let mut key = Vec::with_capacity(t.len() + 1);
            key.extend_from_slice(&t[..pos]);
            key.push(a);
            key.push(b);
            key.extend_from_slice(&t[pos + 1..]);
            add_to(&mut out, key, c * v);
        }
    }
    prune(&mut out);
    out
}

/// `Δ̄^(m)(b_i) ∈ H̄^{⊗m}`, with `Δ̄^(1)` the identity on `H̄`.
pub fn iterated_reduced_coproduct(h: &GradedHopf, i: usize, m: usize) -> TupleSum {
    let mut x = TupleSum::new();
    if i == GradedHopf::UNIT || m == 0 {
        return x;
    }
    x.insert(vec![i], Rational::one());
    for _ in 1..m {
        x = reduced_coproduct_at(h, &x, 0);
    }
    x
}

/// Tuples of non-unit basis elements with `parts` factors and total weight `w`,
/// in lexicographic order.
pub fn augmented_tuples(h: &GradedHopf, parts: usize, w: usize) -> Vec<Vec<usize>> {
    fn go(h: &GradedHopf, parts: usize, w: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if w == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        // the remaining factors need weight at least 1 each
        for first in 1..=w.saturating_sub(parts - 1) {
            for i in h.weight_range(first) {
                prefix.push(i);
                go(h, parts - 1, w - first, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(h, parts, w, &mut Vec::new(), &mut out);
    out
}

/// Kernel of a linear map given on a list of source vectors' images, in the
/// local coordinates `0..sources.len()`.
fn kernel_of_images(n: usize, images: &[TupleSum]) -> Subspace {
    let mut rows: BTreeMap<&Vec<usize>, SparseRow> = BTreeMap::new();
    for (col, img) in images.iter().enumerate() {
        for (key, v) in img {
            rows.entry(key).or_default().push((col, v.clone()));
        }
    }
    kernel_sparse(n, rows.into_values())
}

/// Shifts a subspace of local weight coordinates into the total basis.
fn embed_rows(offset: usize, sub: &Subspace) -> Vec<SparseRow> {
    sub.sparse_basis()
        .into_iter()
        .map(|r| r.into_iter().map(|(c, v)| (c + offset, v)).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConilFiltration {
    truncation: usize,
    levels: Vec<Subspace>,
}

impl ConilFiltration {
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn levels(&self) -> &[Subspace] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Option<&Subspace> {
        self.levels.get(n)
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Subspace::dim).collect()
    }
}

pub fn conil_filtration(h: &GradedHopf, max_level: usize) -> ConilFiltration {
    conil_filtration_with(h, max_level, Exec::default())
}

/// `C_n = k·1 ⊕ ker Δ̄^(n+1)` on the augmentation ideal.
pub fn conil_filtration_with(h: &GradedHopf, max_level: usize, exec: Exec) -> ConilFiltration {
    let n_max = h.truncation();
    // kernels[w][n] = ker Δ̄^(n+1) on the weight-w component
    let kernels: Vec<Vec<Subspace>> = exec.map_range(1..n_max + 1, |w| {
        let range = h.weight_range(w);
        (0..=max_level)
            .map(|n| {
                if n >= w {
                    return Subspace::full(range.len());
                }
                let images: Vec<TupleSum> = range
                    .clone()
                    .map(|i| iterated_reduced_coproduct(h, i, n + 1))
                    .collect();
                kernel_of_images(range.len(), &images)
            })
            .collect()
    });
    let levels = (0..=max_level)
        .map(|n| {
            let mut rows = vec![vec![(GradedHopf::UNIT, Rational::one())]];
            for (k, per_level) in kernels.iter().enumerate() {
                rows.extend(embed_rows(h.weight_range(k + 1).start, &per_level[n]));
            }
            Subspace::from_sparse_spanning(h.dim(), rows)
        })
        .collect();
    ConilFiltration {
        truncation: n_max,
        levels,
    }
}

/// Convolution algebra `H^∨` in the dual basis `f_i`: `f_i·f_j` has
/// coefficient on `f_k` equal to the coefficient of `b_i⊗b_j` in `Δ(b_k)`.
fn dual_product_table(h: &GradedHopf) -> BTreeMap<(usize, usize), SparseRow> {
    let mut acc: BTreeMap<(usize, usize), BTreeMap<usize, Rational>> = BTreeMap::new();
    for k in 0..h.dim() {
        for (a, b, c) in h.coproduct_terms(k) {
            add_to(acc.entry((*a, *b)).or_default(), k, c.clone());
        }
    }
    acc.into_iter()
        .map(|(key, mut row)| {
            prune(&mut row);
            (key, row.into_iter().collect())
        })
        .collect()
}

/// `C_n = Ann_H((I^∨)^{n+1})`, computed in the dual convolution algebra.
pub fn conil_filtration_annihilator(h: &GradedHopf, max_level: usize) -> ConilFiltration {
    let dim = h.dim();
    let table = dual_product_table(h);
    let ideal_gens: Vec<usize> = (0..dim).filter(|&i| i != GradedHopf::UNIT).collect();
    let mut power = Subspace::from_sparse_spanning(
        dim,
        ideal_gens.iter().map(|&i| vec![(i, Rational::one())]),
    );
    let mut levels = Vec::with_capacity(max_level + 1);
    for _ in 0..=max_level {
        levels.push(power.annihilator());
        let products = power.sparse_basis().into_iter().flat_map(|p| {
            ideal_gens
                .iter()
                .map(|&j| {
                    let mut out = BTreeMap::new();
                    for (i, c) in &p {
                        if let Some(row) = table.get(&(*i, j)) {
                            for (k, v) in row {
                                add_to(&mut out, *k, c * v);
                            }
                        }
                    }
                    prune(&mut out);
                    out.into_iter().collect::<SparseRow>()
                })
                .collect::<Vec<_>>()
        });
        power = Subspace::from_sparse_spanning(dim, products);
    }
    ConilFiltration {
        truncation: h.truncation(),
        levels,
    }
}

/// Primitive elements `{h ∈ H̄ : Δ̄h = 0}` as a subspace of the total space.
pub fn primitives(h: &GradedHopf) -> Subspace {
    let mut rows = Vec::new();
    for w in 1..=h.truncation() {
        let range = h.weight_range(w);
        let images: Vec<TupleSum> = range
            .clone()
            .map(|i| iterated_reduced_coproduct(h, i, 2))
            .collect();
        rows.extend(embed_rows(range.start, &kernel_of_images(range.len(), &images)));
    }
    Subspace::from_sparse_spanning(h.dim(), rows)
}

/// One weight of a cobar cohomology group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightCohomology {
    pub weight: usize,
    /// Cochain basis: tuples of non-unit basis elements of total weight `weight`.
    pub cochain_basis: Vec<Vec<usize>>,
    /// Cocycles modulo coboundaries, in the coordinates of `cochain_basis`.
    pub quotient: Quotient,
}

impl WeightCohomology {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    fn local(&self, x: &TupleSum) -> Option<SparseRow> {
        let mut row = SparseRow::new();
        for (key, v) in x {
            if v.is_zero() {
                continue;
            }
            let pos = self.cochain_basis.binary_search(key).ok()?;
            row.push((pos, v.clone()));
        }
        row.sort_by_key(|(c, _)| *c);
        Some(row)
    }

    /// Coordinates of the class of a cocycle; `None` when `x` is not a
    /// cocycle of this weight.
    pub fn class_of(&self, x: &TupleSum) -> Option<Vec<Rational>> {
        self.quotient.class_coordinates_sparse(&self.local(x)?)
    }

    /// The `k`-th canonical cocycle representative.
    pub fn representative(&self, k: usize) -> TupleSum {
        self.quotient
            .representatives
            .basis_vector(k)
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (self.cochain_basis[c].clone(), v.clone()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub degree: usize,
    /// Entries for weights `0..=up_to_weight`.
    pub weights: Vec<WeightCohomology>,
}

impl CohomologyReport {
    pub fn dims(&self) -> Vec<usize> {
        self.weights.iter().map(WeightCohomology::dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }
}

/// `d(x) = Σ_k (-1)^k Δ̄ applied at slot k`, the reduced cobar differential.
pub fn cobar_differential(h: &GradedHopf, x: &TupleSum) -> TupleSum {
    let mut out = TupleSum::new();
    let Some(len) = x.keys().next().map(Vec::len) else {
        return out;
    };
    for pos in 0..len {
        let sign = if pos % 2 == 0 { Rational::one() } else { -Rational::one() };
        for (k, v) in reduced_coproduct_at(h, x, pos) {
            add_to(&mut out, k, v * &sign);
        }
    }
    prune(&mut out);
    out
}

pub fn cobar_cohomology(h: &GradedHopf, degree: usize, up_to_weight: usize) -> Result<CohomologyReport> {
    cobar_cohomology_with(h, degree, up_to_weight, Exec::default())
}

pub fn cobar_cohomology_with(
    h: &GradedHopf,
    degree: usize,
    up_to_weight: usize,
    exec: Exec,
) -> Result<CohomologyReport> {
    if !(1..=2).contains(&degree) {
        return Err(Error::InvalidInput(format!(
            "cobar degree must be 1 or 2, got {degree}"
        )));
    }
    if up_to_weight > h.truncation() {
        return Err(Error::WeightOutOfRange {
            weight: up_to_weight,
            max: h.truncation(),
        });
    }
    let weights = exec.map_range(0..up_to_weight + 1, |w| cobar_weight(h, degree, w));
    Ok(CohomologyReport { degree, weights })
}

fn single(key: Vec<usize>) -> TupleSum {
    TupleSum::from([(key, Rational::one())])
}

fn cobar_weight(h: &GradedHopf, degree: usize, w: usize) -> WeightCohomology {
    let basis = augmented_tuples(h, degree, w);
    let n = basis.len();
    let images: Vec<TupleSum> = basis.iter().map(|t| cobar_differential(h, &single(t.clone()))).collect();
    let cocycles = kernel_of_images(n, &images);
    let coboundaries = if degree == 1 {
        Subspace::zero(n)
    } else {
        let index: BTreeMap<&Vec<usize>, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let rows = h.weight_range(w).map(|k| {
            cobar_differential(h, &single(vec![k]))
                .into_iter()
                .map(|(t, v)| (index[&t], v))
                .collect::<BTreeMap<_, _>>()
                .into_iter()
                .collect::<SparseRow>()
        });
        Subspace::from_sparse_spanning(n, rows)
    };
    let quotient = Quotient::new(cocycles, coboundaries).expect("coboundaries are cocycles");
    WeightCohomology {
        weight: w,
        cochain_basis: basis,
        quotient,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionLevel {
    pub level: usize,
    /// `dim C_n(H_sub)`, pushed through the embedding.
    pub pushed_dim: usize,
    /// `dim (C_n(H_amb) ∩ image)`.
    pub intersection_dim: usize,
    pub equal: bool,
}

/// Compares `ι(C_n(H_sub))` with `C_n(H_amb) ∩ ι(H_sub)` for `n ≤ max_level`.
/// `embedding` has shape `dim H_amb × dim H_sub`.
pub fn conil_intersection_check(
    sub: &GradedHopf,
    amb: &GradedHopf,
    embedding: &Matrix,
    max_level: usize,
) -> Result<Vec<IntersectionLevel>> {
    if embedding.rows() != amb.dim() || embedding.cols() != sub.dim() {
        return Err(Error::Shape(format!(
            "embedding is {}x{}, expected {}x{}",
            embedding.rows(),
            embedding.cols(),
            amb.dim(),
            sub.dim()
        )));
    }
    let rank = embedding.rank();
    if rank < sub.dim() {
        return Err(Error::EmbeddingNotInjective { rank, dim: sub.dim() });
    }
    let cols: Vec<SparseRow> = embedding.transpose().sparse_rows();
    for j in 0..sub.dim() {
        let mut lhs = BTreeMap::new();
        for (k, c) in &cols[j] {
            for (a, b, v) in amb.coproduct_terms(*k) {
                add_to(&mut lhs, (*a, *b), c * v);
            }
        }
        let mut rhs = BTreeMap::new();
        for (a, b, v) in sub.coproduct_terms(j) {
            for (x, cx) in &cols[*a] {
                for (y, cy) in &cols[*b] {
                    add_to(&mut rhs, (*x, *y), v * cx * cy);
                }
            }
        }
        prune(&mut lhs);
        prune(&mut rhs);
        if lhs != rhs {
            return Err(Error::EmbeddingNotCoalgebraMap(j));
        }
    }
    let image = Subspace::from_sparse_spanning(amb.dim(), cols.iter().cloned());
    let c_sub = conil_filtration(sub, max_level);
    let c_amb = conil_filtration(amb, max_level);
    (0..=max_level)
        .map(|n| {
            let pushed = c_sub.levels[n].map(embedding)?;
            let inter = c_amb.levels[n].intersect(&image)?;
            Ok(IntersectionLevel {
                level: n,
                pushed_dim: pushed.dim(),
                intersection_dim: inter.dim(),
                equal: pushed == inter,
            })
        })
        .collect()
}
