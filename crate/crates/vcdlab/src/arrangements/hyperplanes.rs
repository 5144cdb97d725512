use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactq::{QMatrix, Rational};
use crate::{Error, Result};

/// How many times the generator re-draws a single coefficient vector before
/// giving up; hitting this means the coordinate range is badly configured.
const RETRY_BUDGET: usize = 1_000;

/// A family of hyperplanes in projective `m`-space, given by coefficient
/// vectors in `Q^{m+1}`, together with the seed that produced it.
///
/// Carries a genericity certificate when produced by
/// [`gen_generic_hyperplanes`]: every subset of at most `m + 1` coefficient
/// vectors has full rank.
#[derive(Clone, Debug)]
pub struct HyperplaneFamily {
    m: usize,
    hyperplanes: Vec<Vec<Rational>>,
    seed: u64,
}

impl HyperplaneFamily {
    /// Wraps explicit coefficient vectors without any genericity claim.
    pub fn from_coefficients(m: usize, hyperplanes: Vec<Vec<Rational>>) -> Result<Self> {
        for h in &hyperplanes {
            if h.len() != m + 1 {
                return Err(Error::InvalidInstance(format!(
                    "coefficient vector of length {} in P^{m}",
                    h.len()
                )));
            }
            if h.iter().all(Rational::is_zero) {
                return Err(Error::InvalidInstance("zero coefficient vector".into()));
            }
        }
        Ok(HyperplaneFamily {
            m,
            hyperplanes,
            seed: 0,
        })
    }

    pub fn projective_dim(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn coefficients(&self) -> &[Vec<Rational>] {
        &self.hyperplanes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Rank certificate: every subset of size `min(len, m+1)` has full rank
    /// (smaller subsets are then automatically independent).
    pub fn is_generic(&self) -> bool {
        let k = self.hyperplanes.len().min(self.m + 1);
        subsets_of_size(self.hyperplanes.len(), k).all(|subset| {
            let rows: Vec<Vec<Rational>> = subset
                .iter()
                .map(|&i| self.hyperplanes[i].clone())
                .collect();
            QMatrix::from_rows(rows).rank() == k
        })
    }
}

fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = current.clone();
        // Advance to the next k-combination of 0..n.
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if current[i] < n - (k - i) {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Rejection-samples `count` hyperplanes in `P^m` with small integer
/// coefficients until the genericity certificate holds. Deterministic in the
/// seed.
pub fn gen_generic_hyperplanes(m: usize, count: usize, seed: u64) -> Result<HyperplaneFamily> {
    if m < 1 {
        return Err(Error::InvalidParameter(
            "projective dimension must be >= 1".into(),
        ));
    }
    if count < 1 {
        return Err(Error::InvalidParameter(
            "need at least one hyperplane".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = (count as i64 + 4) * (m as i64 + 4);
    let mut chosen: Vec<Vec<Rational>> = Vec::with_capacity(count);
    for _ in 0..count {
        let mut attempts = 0;
        loop {
            attempts += 1;
            if attempts > RETRY_BUDGET {
                return Err(Error::GenericityBudget { attempts });
            }
            let candidate: Vec<Rational> = (0..=m)
                .map(|_| Rational::from_int(rng.gen_range(-range..=range)))
                .collect();
            if candidate.iter().all(Rational::is_zero) {
                continue;
            }
            chosen.push(candidate);
            if extension_is_generic(&chosen, m) {
                break;
            }
            chosen.pop();
        }
    }
    Ok(HyperplaneFamily {
        m,
        hyperplanes: chosen,
        seed,
    })
}

/// Checks only the subsets involving the most recently added vector.
fn extension_is_generic(vectors: &[Vec<Rational>], m: usize) -> bool {
    let n = vectors.len();
    let last = n - 1;
    let k = n.min(m + 1);
    if k == 1 {
        return true;
    }
    subsets_of_size(n - 1, k - 1).all(|mut subset| {
        subset.push(last);
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| vectors[i].clone()).collect();
        QMatrix::from_rows(rows).rank() == k
    })
}

/// A 0/1-pattern over an indexed family of sets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    bits: Vec<bool>,
}

impl Pattern {
    pub fn new(bits: Vec<bool>) -> Self {
        Pattern { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Enumerates exactly the realizable 0/1-patterns of the family over `P^m`.
///
/// A pattern with on-set `S` is realizable iff the flat cut out by `S` is
/// nonempty (its coefficient rank is at most `m`) and is not contained in any
/// off hyperplane (appending an off vector strictly increases the rank). Both
/// conditions are pure rank computations; no points are sampled.
pub fn enumerate_realizable_patterns(family: &HyperplaneFamily) -> BTreeSet<Pattern> {
    let n = family.len();
    let m = family.projective_dim();
    let mut out = BTreeSet::new();
    let mut bits = vec![false; n];
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    recurse(family, m, 0, &mut bits, &mut basis, &mut out);
    out
}

fn recurse(
    family: &HyperplaneFamily,
    m: usize,
    idx: usize,
    bits: &mut Vec<bool>,
    basis: &mut Vec<Vec<Rational>>,
    out: &mut BTreeSet<Pattern>,
) {
    // The intersection flat is empty once the on-set rank exceeds m.
    if basis.len() > m {
        return;
    }
    if idx == family.len() {
        let off_ok = (0..family.len())
            .filter(|&j| !bits[j])
            .all(|j| !in_span(basis, &family.coefficients()[j]));
        if off_ok {
            out.insert(Pattern::new(bits.clone()));
        }
        return;
    }

    // Off branch.
    bits[idx] = false;
    recurse(family, m, idx + 1, bits, basis, out);

    // On branch: extend the echelon basis when the vector is independent.
    bits[idx] = true;
    let reduced = reduce_against(basis, &family.coefficients()[idx]);
    match reduced {
        Some(row) => {
            basis.push(row);
            recurse(family, m, idx + 1, bits, basis, out);
            basis.pop();
        }
        None => {
            // Dependent: the flat is unchanged.
            recurse(family, m, idx + 1, bits, basis, out);
        }
    }
    bits[idx] = false;
}

/// Reduces `v` against normalized echelon rows; `None` means dependent,
/// otherwise the normalized remainder to append.
fn reduce_against(basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let mut w = v.to_vec();
    for row in basis {
        let pivot = row.iter().position(|x| !x.is_zero()).unwrap();
        if w[pivot].is_zero() {
            continue;
        }
        let factor = w[pivot].clone();
        for (wc, rc) in w.iter_mut().zip(row) {
            if !rc.is_zero() {
                *wc -= &factor * rc;
            }
        }
    }
    let pivot = w.iter().position(|x| !x.is_zero())?;
    let inv = w[pivot].recip();
    if inv != Rational::one() {
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
    }
    Some(w)
}

fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    reduce_against(basis, v).is_none()
}

/// Σ_{i=0}^{m} C(n, i): the generic realizable-pattern count.
pub fn generic_pattern_count(n: usize, m: usize) -> u128 {
    (0..=m.min(n)).map(|i| binomial(n, i)).sum()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
