//! Substitutions on a finite alphabet, their rose train track maps, and the
//! invariant measures attached to distinguished eigenvectors of the
//! incidence matrix.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::graph::{Edge, Graph, Path};
use crate::interval::{Interval, Precision};
use crate::map::{is_expanding, GraphMap, MapError};
use crate::matrix::IntMatrix;
use crate::measure::{KolmogorovFunction, Measure, MeasureError, MeasureTable};
use crate::spectra::{distinguished_eigenvectors, Eigenpair, SpectraError};
use crate::tower::{StationaryTower, TowerError, VectorTower};

pub type Word = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstitutionError {
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("duplicate letter {0}")]
    DuplicateLetter(String),
    #[error("image of {0} is empty")]
    EmptyImage(String),
    #[error("unknown letter {0}")]
    UnknownLetter(String),
    #[error("some letter does not grow under iteration")]
    NotExpanding,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Vec<String>,
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(
        alphabet: Vec<String>,
        images: Vec<Word>,
    ) -> Result<Substitution, SubstitutionError> {
        if alphabet.is_empty() {
            return Err(SubstitutionError::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        for a in &alphabet {
            if !seen.insert(a) {
                return Err(SubstitutionError::DuplicateLetter(a.clone()));
            }
        }
        assert_eq!(alphabet.len(), images.len(), "one image per letter");
        for (i, w) in images.iter().enumerate() {
            if w.is_empty() {
                return Err(SubstitutionError::EmptyImage(alphabet[i].clone()));
            }
            if let Some(&x) = w.iter().find(|&&x| x >= alphabet.len()) {
                return Err(SubstitutionError::UnknownLetter(x.to_string()));
            }
        }
        Ok(Substitution { alphabet, images })
    }

    /// From `(letter, "space separated image")` pairs.
    pub fn parse(rules: &[(&str, &str)]) -> Result<Substitution, SubstitutionError> {
        let alphabet: Vec<String> = rules.iter().map(|(a, _)| a.to_string()).collect();
        let mut images = Vec::new();
        for (_, w) in rules {
            let mut img = Vec::new();
            for tok in w.split_whitespace() {
                let i = alphabet
                    .iter()
                    .position(|a| a == tok)
                    .ok_or_else(|| SubstitutionError::UnknownLetter(tok.to_string()))?;
                img.push(i);
            }
            images.push(img);
        }
        Substitution::new(alphabet, images)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.alphabet.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphabet.is_empty()
    }

    pub fn letter(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == name)
    }

    pub fn word_string(&self, w: &[usize]) -> String {
        w.iter()
            .map(|&i| self.alphabet[i].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn apply(&self, w: &[usize]) -> Word {
        w.iter()
            .flat_map(|&i| self.images[i].iter().copied())
            .collect()
    }

    pub fn iterate(&self, w: &[usize], n: u32) -> Word {
        let mut w = w.to_vec();
        for _ in 0..n {
            w = self.apply(&w);
        }
        w
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        assert_eq!(self.alphabet, other.alphabet, "same alphabet");
        Substitution {
            alphabet: self.alphabet.clone(),
            images: other.images.iter().map(|w| self.apply(w)).collect(),
        }
    }

    /// Entry `(i, j)` counts `a_i` in `σ(a_j)`.
    pub fn incidence_matrix(&self) -> IntMatrix {
        let n = self.len();
        let mut m = IntMatrix::zeros(n, n);
        for (j, w) in self.images.iter().enumerate() {
            for &i in w {
                m.add_to(i, j, 1);
            }
        }
        m
    }

    /// The rose with one petal per letter and `f(e_i) = σ(a_i)` read as a
    /// positive edge path.
    pub fn to_train_track(&self) -> GraphMap {
        let names: Vec<&str> = self.alphabet.iter().map(String::as_str).collect();
        let g = Graph::rose(&names);
        let images = self
            .images
            .iter()
            .map(|w| w.iter().map(|&i| Edge::positive(i)).collect())
            .collect();
        GraphMap::self_map(&g, images).expect("positive words are loops at the rose vertex")
    }

    pub fn is_expanding(&self) -> bool {
        is_expanding(&self.to_train_track()).unwrap_or(false)
    }

    /// Factors of length at most `max_len` of the words `σ^n(a)`, `n >= 1`.
    pub fn language(&self, max_len: usize) -> Result<BTreeSet<Word>, SubstitutionError> {
        if !self.is_expanding() {
            return Err(SubstitutionError::NotExpanding);
        }
        let factors = |w: &[usize], out: &mut BTreeSet<Word>| {
            for l in 1..=max_len.min(w.len()) {
                for x in w.windows(l) {
                    out.insert(x.to_vec());
                }
            }
        };
        let mut base = BTreeSet::new();
        for w in &self.images {
            factors(w, &mut base);
        }
        let mut acc = base.clone();
        loop {
            let mut next = base.clone();
            for u in &acc {
                factors(&self.apply(u), &mut next);
            }
            if next.len() == acc.len() {
                return Ok(acc);
            }
            acc = next;
        }
    }

    /// Primitive words `w` with `|w| <= bound` whose powers of length up
    /// to `4 * bound` all lie in the language: candidates for periodic
    /// points of the subshift.
    pub fn periodic_scan(&self, bound: usize) -> Result<Vec<Word>, SubstitutionError> {
        let reach = 4 * bound.max(1);
        let lang = self.language(reach)?;
        let mut out = Vec::new();
        for w in lang.iter().filter(|w| w.len() <= bound) {
            if (1..w.len()).any(|d| w.len() % d == 0 && w.chunks(d).all(|c| c == &w[..d])) {
                continue;
            }
            let power: Word = w.iter().copied().cycle().take(reach).collect();
            if lang.contains(&power) {
                out.push(w.clone());
            }
        }
        Ok(out)
    }
}

/// An invariant measure attached to one distinguished eigenvector.
#[derive(Debug)]
pub struct ErgodicMeasure {
    pub eigenpair: Eigenpair,
    /// Letter frequencies: the eigenvector normalized to sum one.
    pub frequencies: Vec<Interval>,
    /// The Kolmogorov function, present when `λ > 1`.
    pub measure: Option<KolmogorovFunction>,
}

#[derive(Debug)]
pub struct ErgodicReport {
    pub measures: Vec<ErgodicMeasure>,
    /// Distinguished eigenvalues not certified to exceed one.
    pub small_eigenvalues: Vec<f64>,
    /// Short periodic words found in the language.
    pub periodic_words: Vec<Word>,
}

/// Measures in correspondence with the distinguished eigenvectors of the
/// incidence matrix. Ergodicity is not re-proved here; aperiodicity of the
/// subshift is only scanned for short periods.
pub fn ergodic_measures(
    sigma: &Substitution,
    prec: Precision,
) -> Result<ErgodicReport, SubstitutionError> {
    if !sigma.is_expanding() {
        return Err(SubstitutionError::NotExpanding);
    }
    let f = sigma.to_train_track();
    let pairs = distinguished_eigenvectors(&sigma.incidence_matrix(), prec)?;
    let tower = match StationaryTower::new(&f) {
        Ok(t) => Some(Arc::new(t)),
        Err(TowerError::Map(MapError::HasValenceTwo)) => None,
        Err(e) => return Err(e.into()),
    };
    let mut measures = Vec::new();
    let mut small = Vec::new();
    for ep in pairs {
        let total: Interval = ep.vector.iter().cloned().sum();
        let inv = total.recip().expect("non-negative eigenvector is nonzero");
        let frequencies: Vec<Interval> = ep.vector.iter().map(|x| x * &inv).collect();
        let big = ep.lambda.cmp_rational(&BigRational::one()) == std::cmp::Ordering::Greater;
        if !big {
            small.push(ep.lambda.to_f64());
        }
        let measure = match (&tower, big) {
            (Some(t), true) => {
                let vt = VectorTower::from_eigenpair(&ep);
                Some(KolmogorovFunction::from_vector(t.clone(), &vt)?)
            }
            _ => None,
        };
        measures.push(ErgodicMeasure {
            eigenpair: ep,
            frequencies,
            measure,
        });
    }
    Ok(ErgodicReport {
        measures,
        small_eigenvalues: small,
        periodic_words: sigma.periodic_scan(4)?,
    })
}

/// Letter frequencies in a word.
pub fn letter_frequencies(sigma: &Substitution, w: &[usize]) -> Vec<f64> {
    let mut c = vec![0usize; sigma.len()];
    for &i in w {
        c[i] += 1;
    }
    c.into_iter().map(|k| k as f64 / w.len() as f64).collect()
}

/// Values on positive words up to `max_len`, read off a measure on the rose.
pub fn to_classic(
    sigma: &Substitution,
    m: &dyn Measure,
    max_len: usize,
) -> Result<Vec<(Word, Interval)>, MeasureError> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = (0..sigma.len()).map(|i| vec![i]).collect();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in layer {
            let p: Path = w.iter().map(|&i| Edge::positive(i)).collect();
            out.push((w.clone(), m.value(&p)?));
            for i in 0..sigma.len() {
                let mut x = w.clone();
                x.push(i);
                next.push(x);
            }
        }
        layer = next;
    }
    Ok(out)
}

/// The measure on the rose determined by values on positive words: inverse
/// words mirror them and words mixing both orientations carry zero.
pub fn from_classic(
    sigma: &Substitution,
    values: &[(Word, Interval)],
    complete_to: usize,
) -> MeasureTable {
    let g = sigma.to_train_track().domain().clone();
    let mut t = MeasureTable::new(g, complete_to, true);
    for (w, v) in values {
        t.insert(w.iter().map(|&i| Edge::positive(i)).collect(), v.clone());
    }
    t
}
