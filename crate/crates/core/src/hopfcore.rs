//! Weight-truncated connected graded Hopf algebras given by structure
//! constants, with builders for the shuffle Hopf algebra `H(V)` and the
//! coordinate ring of the Heisenberg group, and a mechanical axiom checker.
//!
//! Elements are dense coordinate vectors over the total basis. Basis element
//! 0 is always the unit, and basis elements are sorted by weight.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{format_rational, parse_rational, rat, Rational, SparseRow};
use crate::parallel::Exec;
use crate::tensorspace::{enumerate_words, shuffle_words, Word};

/// Dense coordinates in the total basis.
pub type Element = Vec<Rational>;

/// A finite sum `Σ c · (b_i ⊗ b_j)`, keyed by basis pairs; no zero entries.
pub type Tensor = BTreeMap<(usize, usize), Rational>;

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, value: Rational) {
    if value.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(value);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += value;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn sparse_of(map: BTreeMap<usize, Rational>) -> SparseRow {
    map.into_iter().collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct GradedHopf {
    truncation: usize,
    labels: Vec<String>,
    weights: Vec<usize>,
    offsets: Vec<usize>,
    /// `dim * dim` table; entries with weight sum above the truncation are empty.
    products: Vec<SparseRow>,
    coproducts: Vec<Vec<(usize, usize, Rational)>>,
    antipodes: Vec<SparseRow>,
}

impl fmt::Debug for GradedHopf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedHopf")
            .field("truncation", &self.truncation)
            .field("weight_dims", &self.weight_dims())
            .finish()
    }
}

impl GradedHopf {
    /// Assembles a Hopf algebra from its tables, validating shapes and
    /// weight-homogeneity. The Hopf axioms themselves are checked separately
    /// by [`check_hopf_axioms`].
    pub fn from_tables(
        truncation: usize,
        labels: Vec<String>,
        weights: Vec<usize>,
        products: BTreeMap<(usize, usize), SparseRow>,
        coproducts: Vec<Vec<(usize, usize, Rational)>>,
        antipodes: Vec<SparseRow>,
    ) -> Result<Self> {
        let dim = labels.len();
        let bad = |msg: String| Err(Error::InvalidHopfTable(msg));
        if weights.len() != dim || coproducts.len() != dim || antipodes.len() != dim {
            return bad("table lengths disagree with the basis".into());
        }
        if dim == 0 || weights[0] != 0 || weights.iter().filter(|&&w| w == 0).count() != 1 {
            return bad("weight 0 must be spanned by the unit alone".into());
        }
        if weights.windows(2).any(|w| w[0] > w[1]) {
            return bad("basis must be sorted by weight".into());
        }
        if let Some(&w) = weights.iter().find(|&&w| w > truncation) {
            return bad(format!("basis element of weight {w} beyond truncation {truncation}"));
        }
        let offsets: Vec<usize> = (0..=truncation + 1)
            .map(|w| weights.iter().filter(|&&x| x < w).count())
            .collect();
        let mut table = vec![SparseRow::new(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let total = weights[i] + weights[j];
                match products.get(&(i, j)) {
                    Some(terms) if total <= truncation => {
                        if terms.iter().any(|(k, _)| *k >= dim || weights[*k] != total) {
                            return bad(format!("product of {i} and {j} is not homogeneous"));
                        }
                        table[i * dim + j] = terms.clone();
                    }
                    None if total <= truncation => {
                        return bad(format!("missing product entry ({i}, {j})"));
                    }
                    _ => {}
                }
            }
        }
        for (i, terms) in coproducts.iter().enumerate() {
            if terms
                .iter()
                .any(|(a, b, _)| *a >= dim || *b >= dim || weights[*a] + weights[*b] != weights[i])
            {
                return bad(format!("coproduct of {i} is not homogeneous"));
            }
        }
        for (i, terms) in antipodes.iter().enumerate() {
            if terms.iter().any(|(k, _)| *k >= dim || weights[*k] != weights[i]) {
                return bad(format!("antipode of {i} is not homogeneous"));
            }
        }
        Ok(Self {
            truncation,
            labels,
            weights,
            offsets,
            products: table,
            coproducts,
            antipodes,
        })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weight(&self, i: usize) -> usize {
        self.weights[i]
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    pub const UNIT: usize = 0;

    /// Indices of the basis elements of weight `w`.
    pub fn weight_range(&self, w: usize) -> std::ops::Range<usize> {
        if w > self.truncation {
            return self.dim()..self.dim();
        }
        self.offsets[w]..self.offsets[w + 1]
    }

    /// Dimensions of the weight components `0..=N`.
    pub fn weight_dims(&self) -> Vec<usize> {
        (0..=self.truncation).map(|w| self.weight_range(w).len()).collect()
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::one();
        v
    }

    pub fn zero_element(&self) -> Element {
        vec![Rational::zero(); self.dim()]
    }

    pub fn product_terms(&self, i: usize, j: usize) -> Result<&SparseRow> {
        let total = self.weights[i] + self.weights[j];
        if total > self.truncation {
            return Err(Error::TruncationOverflow {
                weight: total,
                truncation: self.truncation,
            });
        }
        Ok(&self.products[i * self.dim() + j])
    }

    pub fn coproduct_terms(&self, i: usize) -> &[(usize, usize, Rational)] {
        &self.coproducts[i]
    }

    pub fn antipode_terms(&self, i: usize) -> &SparseRow {
        &self.antipodes[i]
    }

    pub(crate) fn mul_sparse(&self, x: &SparseRow, y: &SparseRow) -> Result<SparseRow> {
        let mut acc = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                for (k, c) in self.product_terms(*i, *j)? {
                    accumulate(&mut acc, *k, &ab * c);
                }
            }
        }
        Ok(sparse_of(acc))
    }

    /// Bilinear extension of the product table.
    pub fn multiply(&self, x: &[Rational], y: &[Rational]) -> Result<Element> {
        self.check_len(x)?;
        self.check_len(y)?;
        let prod = self.mul_sparse(&crate::exactlin::to_sparse(x), &crate::exactlin::to_sparse(y))?;
        Ok(crate::exactlin::to_dense(self.dim(), &prod))
    }

    pub fn comultiply(&self, x: &[Rational]) -> Result<Tensor> {
        self.check_len(x)?;
        let mut out = Tensor::new();
        for (i, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (a, b, v) in &self.coproducts[i] {
                accumulate(&mut out, (*a, *b), c * v);
            }
        }
        Ok(out)
    }

    pub fn antipode(&self, x: &[Rational]) -> Result<Element> {
        self.check_len(x)?;
        let mut out = self.zero_element();
        for (i, c) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (k, v) in &self.antipodes[i] {
                out[*k] += c * v;
            }
        }
        Ok(out)
    }

    /// Projection onto weight 0.
    pub fn counit(&self, x: &[Rational]) -> Result<Rational> {
        self.check_len(x)?;
        Ok(x[Self::UNIT].clone())
    }

    fn check_len(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Replaces the antipode table; the result is not checked for the
    /// antipode axiom.
    pub fn with_antipode_table(mut self, antipodes: Vec<SparseRow>) -> Result<Self> {
        if antipodes.len() != self.dim() {
            return Err(Error::InvalidHopfTable("antipode table length".into()));
        }
        self.antipodes = antipodes;
        Ok(self)
    }

    pub fn to_json(&self) -> String {
        let dim = self.dim();
        let fmt_terms = |t: &SparseRow| -> Vec<(usize, String)> {
            t.iter().map(|(k, v)| (*k, format_rational(v))).collect()
        };
        let mut product = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                if self.weights[i] + self.weights[j] <= self.truncation {
                    product.push(ProductEntry {
                        left: i,
                        right: j,
                        terms: fmt_terms(&self.products[i * dim + j]),
                    });
                }
            }
        }
        let file = HopfFile {
            format: HOPF_FORMAT.to_string(),
            truncation: self.truncation,
            basis: self
                .labels
                .iter()
                .zip(&self.weights)
                .map(|(label, &weight)| BasisEntry {
                    label: label.clone(),
                    weight,
                })
                .collect(),
            product,
            coproduct: self
                .coproducts
                .iter()
                .map(|t| t.iter().map(|(a, b, v)| (*a, *b, format_rational(v))).collect())
                .collect(),
            antipode: self.antipodes.iter().map(fmt_terms).collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: HopfFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.format != HOPF_FORMAT {
            return Err(Error::Parse(format!("unknown format tag {:?}", file.format)));
        }
        let parse_terms = |t: &[(usize, String)]| -> Result<SparseRow> {
            let mut acc = BTreeMap::new();
            for (k, v) in t {
                accumulate(&mut acc, *k, parse_rational(v)?);
            }
            Ok(sparse_of(acc))
        };
        let mut products = BTreeMap::new();
        for e in &file.product {
            products.insert((e.left, e.right), parse_terms(&e.terms)?);
        }
        let coproducts = file
            .coproduct
            .iter()
            .map(|t| {
                t.iter()
                    .map(|(a, b, v)| Ok((*a, *b, parse_rational(v)?)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let antipodes = file
            .antipode
            .iter()
            .map(|t| parse_terms(t))
            .collect::<Result<Vec<_>>>()?;
        Self::from_tables(
            file.truncation,
            file.basis.iter().map(|b| b.label.clone()).collect(),
            file.basis.iter().map(|b| b.weight).collect(),
            products,
            coproducts,
            antipodes,
        )
    }
}

const HOPF_FORMAT: &str = "graded-hopf/1";

/// Text form of a [`GradedHopf`]: JSON with rationals written as strings.
#[derive(Serialize, Deserialize)]
struct HopfFile {
    format: String,
    truncation: usize,
    basis: Vec<BasisEntry>,
    product: Vec<ProductEntry>,
    coproduct: Vec<Vec<(usize, usize, String)>>,
    antipode: Vec<Vec<(usize, String)>>,
}

#[derive(Serialize, Deserialize)]
struct BasisEntry {
    label: String,
    weight: usize,
}

#[derive(Serialize, Deserialize)]
struct ProductEntry {
    left: usize,
    right: usize,
    terms: Vec<(usize, String)>,
}

/// Sign convention for the antipode of the shuffle algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AntipodeSign {
    /// `S(x1…xn) = (-1)^n xn…x1`, the one satisfying the antipode axiom.
    Signed,
    /// Plain reversal `S(x1…xn) = xn…x1`; kept as a negative control.
    Unsigned,
}

/// Index of a word in the total basis of `H(V)` with `dim V = d`.
pub fn free_index(d: usize, word: &Word) -> usize {
    let n = word.weight();
    (0..n).map(|i| d.pow(i as u32)).sum::<usize>() + word.index(d)
}

/// The shuffle Hopf algebra `H(V)` on `d` letters, truncated at weight `n_max`.
pub fn build_free_shuffle_hopf(d: usize, n_max: usize) -> GradedHopf {
    build_free_shuffle_hopf_with(d, n_max, AntipodeSign::Signed)
}

pub fn build_free_shuffle_hopf_with(d: usize, n_max: usize, sign: AntipodeSign) -> GradedHopf {
    let words: Vec<Word> = (0..=n_max).flat_map(|n| enumerate_words(d, n)).collect();
    let labels = words.iter().map(|w| w.to_string()).collect();
    let weights: Vec<usize> = words.iter().map(Word::weight).collect();

    let mut products = BTreeMap::new();
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            if a.weight() + b.weight() > n_max {
                continue;
            }
            let terms: SparseRow = shuffle_words(a, b)
                .into_iter()
                .map(|(w, mult)| (free_index(d, &w), rat(mult as i64)))
                .collect::<BTreeMap<_, _>>()
                .into_iter()
                .collect();
            products.insert((i, j), terms);
        }
    }
    let coproducts = words
        .iter()
        .map(|w| {
            (0..=w.weight())
                .map(|cut| {
                    let (l, r) = w.split_at(cut);
                    (free_index(d, &l), free_index(d, &r), Rational::one())
                })
                .collect()
        })
        .collect();
    let antipodes = words
        .iter()
        .map(|w| {
            let s = match sign {
                AntipodeSign::Signed if w.weight() % 2 == 1 => rat(-1),
                _ => rat(1),
            };
            vec![(free_index(d, &w.reversed()), s)]
        })
        .collect();
    GradedHopf::from_tables(n_max, labels, weights, products, coproducts, antipodes)
        .expect("shuffle tables are well formed")
}

/// Exponents `(a, b, c)` of `x^a y^b z^c`, graded by `a + b + 2c`.
fn heisenberg_monomials(n_max: usize) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for w in 0..=n_max {
        for c in 0..=w / 2 {
            for a in (0..=w - 2 * c).rev() {
                let b = w - 2 * c - a;
                out.push([a as u32, b as u32, c as u32]);
            }
        }
    }
    out
}

fn monomial_label(e: &[u32]) -> String {
    let mut s = String::new();
    for (var, &k) in ["x", "y", "z"].iter().zip(e) {
        match k {
            0 => {}
            1 => s.push_str(var),
            _ => s.push_str(&format!("{var}^{k}")),
        }
    }
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

/// Small commutative polynomial arithmetic over exponent vectors.
type Poly<const K: usize> = BTreeMap<[u32; K], Rational>;

fn poly_mul<const K: usize>(p: &Poly<K>, q: &Poly<K>) -> Poly<K> {
    let mut out = Poly::new();
    for (e1, c1) in p {
        for (e2, c2) in q {
            let mut e = *e1;
            for (x, y) in e.iter_mut().zip(e2) {
                *x += y;
            }
            accumulate(&mut out, e, c1 * c2);
        }
    }
    out
}

fn poly_pow<const K: usize>(p: &Poly<K>, k: u32) -> Poly<K> {
    let mut out = Poly::new();
    out.insert([0; K], Rational::one());
    for _ in 0..k {
        out = poly_mul(&out, p);
    }
    out
}

fn poly_from(terms: &[([u32; 6], i64)]) -> Poly<6> {
    terms.iter().map(|(e, c)| (*e, rat(*c))).collect()
}

/// Coordinate Hopf algebra of the group of upper unitriangular 3×3 matrices
/// with coordinates `x = a12`, `y = a23`, `z = a13`, graded by
/// `wt(x) = wt(y) = 1`, `wt(z) = 2`.
pub fn build_heisenberg_hopf(n_max: usize) -> GradedHopf {
    let monos = heisenberg_monomials(n_max);
    let index: BTreeMap<[u32; 3], usize> = monos.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let weight = |e: &[u32; 3]| (e[0] + e[1] + 2 * e[2]) as usize;

    let mut products = BTreeMap::new();
    for (i, a) in monos.iter().enumerate() {
        for (j, b) in monos.iter().enumerate() {
            if weight(a) + weight(b) <= n_max {
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                products.insert((i, j), vec![(index[&e], Rational::one())]);
            }
        }
    }

    // variables: x⊗1, y⊗1, z⊗1, 1⊗x, 1⊗y, 1⊗z
    let dx = poly_from(&[([1, 0, 0, 0, 0, 0], 1), ([0, 0, 0, 1, 0, 0], 1)]);
    let dy = poly_from(&[([0, 1, 0, 0, 0, 0], 1), ([0, 0, 0, 0, 1, 0], 1)]);
    let dz = poly_from(&[
        ([0, 0, 1, 0, 0, 0], 1),
        ([0, 0, 0, 0, 0, 1], 1),
        ([1, 0, 0, 0, 1, 0], 1),
    ]);
    let coproducts = monos
        .iter()
        .map(|e| {
            let p = poly_mul(&poly_mul(&poly_pow(&dx, e[0]), &poly_pow(&dy, e[1])), &poly_pow(&dz, e[2]));
            p.into_iter()
                .map(|(m, c)| (index[&[m[0], m[1], m[2]]], index[&[m[3], m[4], m[5]]], c))
                .collect()
        })
        .collect();

    // inverse of (a, b, c) is (-a, -b, -c + ab)
    let sx: Poly<3> = [([1, 0, 0], rat(-1))].into_iter().collect();
    let sy: Poly<3> = [([0, 1, 0], rat(-1))].into_iter().collect();
    let sz: Poly<3> = [([0, 0, 1], rat(-1)), ([1, 1, 0], rat(1))].into_iter().collect();
    let antipodes = monos
        .iter()
        .map(|e| {
            let p = poly_mul(&poly_mul(&poly_pow(&sx, e[0]), &poly_pow(&sy, e[1])), &poly_pow(&sz, e[2]));
            let mut row: SparseRow = p.into_iter().map(|(m, c)| (index[&m], c)).collect();
            row.sort_by_key(|(k, _)| *k);
            row
        })
        .collect();

    GradedHopf::from_tables(
        n_max,
        monos.iter().map(|e| monomial_label(e)).collect(),
        monos.iter().map(weight).collect(),
        products,
        coproducts,
        antipodes,
    )
    .expect("Heisenberg tables are well formed")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    Unit,
    Counit,
    Associativity,
    Commutativity,
    Coassociativity,
    Bialgebra,
    Antipode,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Unit => "unit",
            Axiom::Counit => "counit",
            Axiom::Associativity => "associativity",
            Axiom::Commutativity => "commutativity",
            Axiom::Coassociativity => "coassociativity",
            Axiom::Bialgebra => "bialgebra compatibility",
            Axiom::Antipode => "antipode",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    /// Total weight of the witness tuple.
    pub weight: usize,
    /// Labels of the basis elements involved.
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HopfReport {
    Pass { checks: usize },
    Fail(AxiomFailure),
}

impl HopfReport {
    pub fn passed(&self) -> bool {
        matches!(self, HopfReport::Pass { .. })
    }
}

pub fn check_hopf_axioms(h: &GradedHopf) -> HopfReport {
    check_hopf_axioms_with(h, Exec::default())
}

/// Verifies every Hopf axiom on basis tuples of total weight at most the
/// truncation. Axioms are tried in a fixed order and, within one axiom, by
/// increasing weight; the first failure is reported.
pub fn check_hopf_axioms_with(h: &GradedHopf, exec: Exec) -> HopfReport {
    let dim = h.dim();
    let n = h.truncation();
    let w = |i: usize| h.weight(i);
    let by_weight = |mut v: Vec<Vec<usize>>| {
        v.sort_by_key(|t| (t.iter().map(|&i| w(i)).sum::<usize>(), t.clone()));
        v
    };
    let singles = by_weight((0..dim).map(|i| vec![i]).collect());
    let pairs = by_weight(
        (0..dim)
            .flat_map(|i| (0..dim).map(move |j| vec![i, j]))
            .filter(|t| w(t[0]) + w(t[1]) <= n)
            .collect(),
    );
    let triples = by_weight(
        pairs
            .iter()
            .flat_map(|t| (0..dim).map(move |k| vec![t[0], t[1], k]))
            .filter(|t| w(t[0]) + w(t[1]) + w(t[2]) <= n)
            .collect(),
    );

    let checks: [(Axiom, &Vec<Vec<usize>>); 7] = [
        (Axiom::Unit, &singles),
        (Axiom::Counit, &singles),
        (Axiom::Associativity, &triples),
        (Axiom::Commutativity, &pairs),
        (Axiom::Coassociativity, &singles),
        (Axiom::Bialgebra, &pairs),
        (Axiom::Antipode, &singles),
    ];
    let mut total = 0;
    for (axiom, cases) in checks {
        let failure = exec.find_first(cases, |t| (!holds(h, axiom, t)).then(|| t.clone()));
        if let Some(t) = failure {
            return HopfReport::Fail(AxiomFailure {
                axiom,
                weight: t.iter().map(|&i| w(i)).sum(),
                witness: t.iter().map(|&i| h.label(i).to_string()).collect(),
            });
        }
        total += cases.len();
    }
    HopfReport::Pass { checks: total }
}

fn unit_row(i: usize) -> SparseRow {
    vec![(i, Rational::one())]
}

fn holds(h: &GradedHopf, axiom: Axiom, t: &[usize]) -> bool {
    let u = GradedHopf::UNIT;
    let mul = |a: &SparseRow, b: &SparseRow| h.mul_sparse(a, b).ok();
    match axiom {
        Axiom::Unit => {
            let i = t[0];
            h.products[u * h.dim() + i] == unit_row(i) && h.products[i * h.dim() + u] == unit_row(i)
        }
        Axiom::Counit => {
            let i = t[0];
            let mut left = BTreeMap::new();
            let mut right = BTreeMap::new();
            for (a, b, c) in h.coproduct_terms(i) {
                if *a == u {
                    accumulate(&mut left, *b, c.clone());
                }
                if *b == u {
                    accumulate(&mut right, *a, c.clone());
                }
            }
            sparse_of(left) == unit_row(i) && sparse_of(right) == unit_row(i)
        }
        Axiom::Associativity => {
            let (a, b, c) = (unit_row(t[0]), unit_row(t[1]), unit_row(t[2]));
            let lhs = mul(&a, &b).and_then(|ab| mul(&ab, &c));
            let rhs = mul(&b, &c).and_then(|bc| mul(&a, &bc));
            lhs.is_some() && lhs == rhs
        }
        Axiom::Commutativity => h.products[t[0] * h.dim() + t[1]] == h.products[t[1] * h.dim() + t[0]],
        Axiom::Coassociativity => {
            let mut lhs = BTreeMap::new();
            let mut rhs = BTreeMap::new();
            for (a, b, c) in h.coproduct_terms(t[0]) {
                for (a1, a2, c1) in h.coproduct_terms(*a) {
                    accumulate(&mut lhs, (*a1, *a2, *b), c * c1);
                }
                for (b1, b2, c2) in h.coproduct_terms(*b) {
                    accumulate(&mut rhs, (*a, *b1, *b2), c * c2);
                }
            }
            lhs == rhs
        }
        Axiom::Bialgebra => {
            let Some(prod) = mul(&unit_row(t[0]), &unit_row(t[1])) else {
                return false;
            };
            let mut lhs = Tensor::new();
            for (k, c) in &prod {
                for (a, b, v) in h.coproduct_terms(*k) {
                    accumulate(&mut lhs, (*a, *b), c * v);
                }
            }
            let mut rhs = Tensor::new();
            for (a1, b1, c1) in h.coproduct_terms(t[0]) {
                for (a2, b2, c2) in h.coproduct_terms(t[1]) {
                    let coeff = c1 * c2;
                    let (Some(aa), Some(bb)) = (
                        mul(&unit_row(*a1), &unit_row(*a2)),
                        mul(&unit_row(*b1), &unit_row(*b2)),
                    ) else {
                        return false;
                    };
                    for (x, cx) in &aa {
                        for (y, cy) in &bb {
                            accumulate(&mut rhs, (*x, *y), &coeff * cx * cy);
                        }
                    }
                }
            }
            lhs == rhs
        }
        Axiom::Antipode => {
            let i = t[0];
            let expected: SparseRow = if i == u { unit_row(u) } else { Vec::new() };
            let mut left = BTreeMap::new();
            let mut right = BTreeMap::new();
            for (a, b, c) in h.coproduct_terms(i) {
                let (Some(l), Some(r)) = (
                    mul(h.antipode_terms(*a), &unit_row(*b)),
                    mul(&unit_row(*a), h.antipode_terms(*b)),
                ) else {
                    return false;
                };
                for (k, v) in l {
                    accumulate(&mut left, k, c * v);
                }
                for (k, v) in r {
                    accumulate(&mut right, k, c * v);
                }
            }
            sparse_of(left) == expected && sparse_of(right) == expected
        }
    }
}
