//! Word bases of tensor powers `V^⊗n`, shuffle permutations, and the
//! positional maps `id^⊗k ⊗ M ⊗ id^⊗l`.
//!
//! Letters are 0-based internally and printed 1-based. Words of a fixed
//! length are ordered lexicographically, so the index of a word is its
//! mixed-radix value in base `d`; every matrix over `V^⊗n` in this crate uses
//! that layout.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rational, Subspace};

/// A basis word `x_{i1} ⊗ ... ⊗ x_{in}` of `V^⊗n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// From 0-based letters.
    pub fn from_indices(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    /// From 1-based letters, checking each against the alphabet size.
    pub fn from_letters(d: usize, letters: &[usize]) -> Result<Self> {
        letters
            .iter()
            .map(|&l| {
                if l == 0 || l > d {
                    Err(Error::InvalidInput(format!(
                        "letter {l} outside alphabet 1..={d}"
                    )))
                } else {
                    Ok(l - 1)
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn letters(&self) -> Vec<usize> {
        self.0.iter().map(|l| l + 1).collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn split_at(&self, i: usize) -> (Word, Word) {
        (Word(self.0[..i].to_vec()), Word(self.0[i..].to_vec()))
    }

    /// Position among the `d^n` words of the same length.
    pub fn index(&self, d: usize) -> usize {
        self.0.iter().fold(0, |acc, &l| acc * d + l)
    }

    pub fn from_index(d: usize, n: usize, mut index: usize) -> Word {
        let mut letters = vec![0; n];
        for slot in letters.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        Word(letters)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.letters().iter().map(|l| l.to_string()).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All `d^n` words of length `n`, lexicographically.
pub fn enumerate_words(d: usize, n: usize) -> Vec<Word> {
    let count = d.pow(n as u32);
    (0..count).map(|i| Word::from_index(d, n, i)).collect()
}

/// The `(m, n)`-shuffles: permutations σ of `{1..m+n}` increasing on `1..=m`
/// and on `m+1..=m+n`, given as the list `[σ(1), ..., σ(m+n)]`.
pub fn shuffle_set(m: usize, n: usize) -> Vec<Vec<usize>> {
    let total = m + n;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(m);
    fn rec(
        start: usize,
        m: usize,
        total: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if chosen.len() == m {
            let rest = (1..=total).filter(|p| !chosen.contains(p));
            out.push(chosen.iter().copied().chain(rest).collect());
            return;
        }
        for p in start..=total {
            chosen.push(p);
            rec(p + 1, m, total, chosen, out);
            chosen.pop();
        }
    }
    rec(1, m, total, &mut chosen, &mut out);
    out
}

/// Shuffle product of two words with multiplicities.
pub fn shuffle_words(a: &Word, b: &Word) -> BTreeMap<Word, usize> {
    let (m, n) = (a.weight(), b.weight());
    let letters: Vec<usize> = a.0.iter().chain(b.0.iter()).copied().collect();
    let mut out = BTreeMap::new();
    for sigma in shuffle_set(m, n) {
        let mut w = vec![0; m + n];
        for (i, &pos) in sigma.iter().enumerate() {
            w[pos - 1] = letters[i];
        }
        *out.entry(Word(w)).or_insert(0) += 1;
    }
    out
}

/// A finite rational combination of words, possibly of mixed weight.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedVector {
    alphabet_size: usize,
    terms: BTreeMap<Word, Rational>,
}

impl GradedVector {
    pub fn zero(alphabet_size: usize) -> Self {
        Self {
            alphabet_size,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_word(alphabet_size: usize, word: Word) -> Self {
        let mut v = Self::zero(alphabet_size);
        v.add_term(word, Rational::one());
        v
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn add_term(&mut self, word: Word, coeff: Rational) {
        debug_assert!(word.0.iter().all(|&l| l < self.alphabet_size));
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(word.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add(&self, other: &GradedVector) -> GradedVector {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> GradedVector {
        let mut out = Self::zero(self.alphabet_size);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Word, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, word: &Word) -> Rational {
        self.terms.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    /// Weight-`n` component.
    pub fn component(&self, n: usize) -> GradedVector {
        Self {
            alphabet_size: self.alphabet_size,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coordinates of the weight-`n` component in the word basis of `V^⊗n`.
    pub fn to_dense(&self, n: usize) -> Vec<Rational> {
        let d = self.alphabet_size;
        let mut v = vec![Rational::zero(); d.pow(n as u32)];
        for (w, c) in self.terms.iter().filter(|(w, _)| w.weight() == n) {
            v[w.index(d)] = c.clone();
        }
        v
    }

    pub fn from_dense(alphabet_size: usize, n: usize, coords: &[Rational]) -> Self {
        let mut out = Self::zero(alphabet_size);
        for (i, c) in coords.iter().enumerate() {
            out.add_term(Word::from_index(alphabet_size, n, i), c.clone());
        }
        out
    }
}

impl fmt::Display for GradedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{}*{}", crate::exactlin::format_rational(c), w))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Matrix of `id^⊗k ⊗ M ⊗ id^⊗l` on `V^⊗(k+2+l)`, where `M : V^⊗2 → W`.
pub fn induced_positional_map(m: &Matrix, k: usize, l: usize, d: usize) -> Result<Matrix> {
    if m.cols() != d * d {
        return Err(Error::Shape(format!(
            "positional map needs {} columns, found {}",
            d * d,
            m.cols()
        )));
    }
    let left = Matrix::identity(d.pow(k as u32));
    let right = Matrix::identity(d.pow(l as u32));
    Ok(left.kron(&m.kron(&right)))
}

/// Matrix of `M` restricted to `source` and corestricted to `target`, in
/// their canonical bases.
pub fn restrict_map(m: &Matrix, source: &Subspace, target: &Subspace) -> Result<Matrix> {
    if m.cols() != source.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: source.ambient_dim(),
            found: m.cols(),
        });
    }
    if m.rows() != target.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: target.ambient_dim(),
            found: m.rows(),
        });
    }
    let mut out = Matrix::zeros(target.dim(), source.dim());
    for j in 0..source.dim() {
        let image = m.mul_vec(source.basis_vector(j))?;
        let coords = target
            .membership(&image)?
            .ok_or(Error::ImageNotContained { index: j })?;
        for (i, c) in coords.into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    Ok(out)
}

/// `A ⊗ B` as a subspace of the Kronecker ambient space.
pub fn tensor_subspaces(a: &Subspace, b: &Subspace) -> Subspace {
    Subspace::row_space(&a.basis().kron(b.basis()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{kernel, rat};

    #[test]
    fn enumeration_small_cases() {
        assert_eq!(enumerate_words(2, 0), vec![Word::empty()]);
        let w: Vec<String> = enumerate_words(2, 2).iter().map(|w| w.to_string()).collect();
        assert_eq!(w, ["<1,1>", "<1,2>", "<2,1>", "<2,2>"]);
    }

    #[test]
    fn mixed_radix_position() {
        let words = enumerate_words(3, 3);
        assert_eq!(words.len(), 27);
        let target = Word::from_letters(3, &[2, 1, 3]).unwrap();
        // digits 1,0,2 in base 3; 0-based position 11, i.e. the 12th word
        let pos = words.iter().position(|w| *w == target).unwrap();
        assert_eq!(pos, 9 + 2);
        assert_eq!(pos, 11);
        assert_eq!(target.index(3), pos);
    }

    #[test]
    fn letter_range_checked() {
        assert!(Word::from_letters(2, &[3]).is_err());
        assert!(Word::from_letters(2, &[0]).is_err());
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffle_set(1, 1), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(shuffle_set(2, 1).len(), 3);
        assert_eq!(shuffle_set(0, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn shuffle_two_by_two_matches_brute_force_filter() {
        let fast: std::collections::BTreeSet<Vec<usize>> = shuffle_set(2, 2).into_iter().collect();
        let mut brute = std::collections::BTreeSet::new();
        let mut perm = vec![1, 2, 3, 4];
        permutations(&mut perm, 0, &mut |p| {
            if p[0] < p[1] && p[2] < p[3] {
                brute.insert(p.to_vec());
            }
        });
        assert_eq!(brute.len(), 6);
        assert_eq!(fast, brute);
    }

    fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permutations(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn positional_map_identity_and_zero() {
        let d = 2;
        let id = induced_positional_map(&Matrix::identity(4), 1, 1, d).unwrap();
        assert_eq!(id, Matrix::identity(16));
        let z = induced_positional_map(&Matrix::zeros(3, 4), 2, 0, d).unwrap();
        assert!(z.is_zero());
        assert!(induced_positional_map(&Matrix::zeros(1, 3), 0, 0, d).is_err());
    }

    #[test]
    fn positional_quotient_by_symmetric_tensors() {
        // q kills 11, 22 and 12+21 on V^⊗2, d = 2
        let q = Matrix::from_i64(&[&[0, 1, -1, 0]]);
        let p = induced_positional_map(&q, 1, 0, 2).unwrap();
        assert_eq!((p.rows(), p.cols()), (2, 8));
        assert_eq!(kernel(&p).dim(), 6);
        // word-by-word evaluation: x_a ⊗ (x_b x_c) -> e_a ⊗ q(bc)
        for w in enumerate_words(2, 3) {
            let col = w.index(2);
            let (a, b, c) = (w.indices()[0], w.indices()[1], w.indices()[2]);
            let qv = q.get(0, b * 2 + c).clone();
            for row in 0..2 {
                let expected = if row == a { qv.clone() } else { rat(0) };
                assert_eq!(p.get(row, col), &expected);
            }
        }
    }

    #[test]
    fn restrict_map_cases() {
        let s = Subspace::span(3, &[vec![rat(1), rat(1), rat(0)]]).unwrap();
        assert_eq!(restrict_map(&Matrix::identity(3), &s, &s).unwrap(), Matrix::identity(1));
        let zero = Subspace::zero(3);
        let r = restrict_map(&Matrix::identity(3), &zero, &s).unwrap();
        assert_eq!((r.rows(), r.cols()), (1, 0));
        let swap = Matrix::from_i64(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]);
        assert!(matches!(
            restrict_map(&swap, &s, &s),
            Err(Error::ImageNotContained { index: 0 })
        ));
    }

    #[test]
    fn graded_vector_components() {
        let mut v = GradedVector::zero(2);
        v.add_term(Word::empty(), rat(3));
        v.add_term(Word::from_indices(vec![0, 1]), rat(2));
        v.add_term(Word::from_indices(vec![0, 1]), rat(-2));
        v.add_term(Word::from_indices(vec![1]), rat(1));
        assert_eq!(v.terms().len(), 2);
        assert_eq!(v.component(1).to_dense(1), vec![rat(0), rat(1)]);
        assert_eq!(GradedVector::from_dense(2, 1, &[rat(0), rat(1)]), v.component(1));
    }
}
