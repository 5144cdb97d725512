//! The counting layer: shatter functions and the Sauer-Shelah bound,
//! realizable-pattern counts, sets of distinct restriction kernels, and
//! log-log slope fits of count growth against the expected exponent.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{cohomology_space, restriction_kernel, Complex, Subcomplex};
use crate::exactq::Subspace;
use crate::{Error, Result};

/// Brute-force shatter computations are capped at this ground size.
pub const MAX_BRUTE_FORCE_GROUND: usize = 20;

/// A finite set system: subsets of `{0, .., ground-1}` as bit masks.
#[derive(Clone, Debug)]
pub struct SetSystem {
    ground: usize,
    sets: Vec<u64>,
}

impl SetSystem {
    pub fn new(ground: usize, sets: Vec<u64>) -> Result<Self> {
        if ground > 64 {
            return Err(Error::InvalidParameter("ground set larger than 64".into()));
        }
        let mask = full_mask(ground);
        if sets.iter().any(|s| s & !mask != 0) {
            return Err(Error::InvalidParameter(
                "set exceeds the ground mask".into(),
            ));
        }
        Ok(SetSystem { ground, sets })
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn sets(&self) -> &[u64] {
        &self.sets
    }

    /// Number of distinct traces `Y' ∩ X` over the members, for `Y'` given
    /// as a bit mask.
    pub fn shatter_count(&self, subset: u64) -> usize {
        let mut traces: Vec<u64> = self.sets.iter().map(|s| s & subset).collect();
        traces.sort_unstable();
        traces.dedup();
        traces.len()
    }

    /// The shatter function `n -> max_{|Y'| = n} |traces(Y')|`, computed by
    /// brute force over all subsets of the ground set.
    pub fn shatter_profile(&self) -> Result<Vec<usize>> {
        if self.ground > MAX_BRUTE_FORCE_GROUND {
            return Err(Error::InvalidParameter(format!(
                "brute-force shatter profile capped at ground size {MAX_BRUTE_FORCE_GROUND}"
            )));
        }
        let mut profile = vec![0usize; self.ground + 1];
        for subset in 0..(1u64 << self.ground) {
            let n = subset.count_ones() as usize;
            let c = self.shatter_count(subset);
            if c > profile[n] {
                profile[n] = c;
            }
        }
        Ok(profile)
    }

    /// Exact VC dimension: the largest `n` with `nu(n) = 2^n`.
    pub fn vc_dimension(&self) -> Result<usize> {
        let profile = self.shatter_profile()?;
        Ok(profile
            .iter()
            .enumerate()
            .rev()
            .find(|&(n, &c)| c == 1usize << n)
            .map(|(n, _)| n)
            .unwrap_or(0))
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Checks the quantitative Sauer-Shelah bound
/// `nu(n) <= sum_{i=0}^{d} C(n, i)` for every `n` up to the ground size,
/// where `d` must be the exact VC dimension.
pub fn sauer_shelah_check(s: &SetSystem, d: usize) -> Result<bool> {
    let profile = s.shatter_profile()?;
    Ok(profile.iter().enumerate().all(|(n, &count)| {
        let bound: u128 = (0..=d.min(n))
            .map(|i| crate::arrangements::binomial(n, i))
            .sum();
        (count as u128) <= bound
    }))
}

/// Number of distinct realizable 0/1-patterns of the members over the
/// carrier: the number of distinct membership signatures of carrier points.
pub fn pattern_count(s: &SetSystem) -> usize {
    let mut signatures: HashSet<Vec<bool>> = HashSet::new();
    for point in 0..s.ground_size() {
        let sig: Vec<bool> = s.sets().iter().map(|m| m >> point & 1 == 1).collect();
        signatures.insert(sig);
    }
    signatures.len()
}

/// The distinct restriction kernels observed over a family of test
/// subcomplexes, all expressed in the fixed `H^p` coordinates of the parent.
#[derive(Clone, Debug)]
pub struct KernelSet {
    ambient_hp_dim: usize,
    kernels: BTreeSet<Subspace>,
    /// One witness test index per distinct kernel (the first that produced it).
    witness: HashMap<Subspace, usize>,
}

impl KernelSet {
    pub fn ambient_hp_dim(&self) -> usize {
        self.ambient_hp_dim
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    pub fn kernels(&self) -> impl Iterator<Item = &Subspace> {
        self.kernels.iter()
    }

    pub fn witness(&self, kernel: &Subspace) -> Option<usize> {
        self.witness.get(kernel).copied()
    }

    /// Sorted list of the dimensions of the distinct kernels.
    pub fn dimensions(&self) -> Vec<usize> {
        let mut dims: Vec<usize> = self.kernels.iter().map(Subspace::dim).collect();
        dims.sort_unstable();
        dims
    }

    /// The distinct kernel dimensions as a set.
    pub fn dimension_set(&self) -> BTreeSet<usize> {
        self.kernels.iter().map(Subspace::dim).collect()
    }
}

/// Computes the set of distinct kernels of `H^p(K) -> H^p(L)` over the given
/// tests. Evaluation is parallel over tests; the result does not depend on
/// the order in which tests are processed, except that each kernel's witness
/// is the smallest test index that produced it.
pub fn kernel_set(k: &Complex, tests: &[Subcomplex], p: usize) -> Result<KernelSet> {
    let parent = cohomology_space(k, p)?;
    let computed: Vec<Subspace> = tests
        .par_iter()
        .map(|l| restriction_kernel(k, &parent, l))
        .collect::<Result<_>>()?;
    let mut kernels = BTreeSet::new();
    let mut witness = HashMap::new();
    for (i, kernel) in computed.into_iter().enumerate() {
        if kernels.insert(kernel.clone()) {
            witness.insert(kernel, i);
        }
    }
    Ok(KernelSet {
        ambient_hp_dim: parent.quotient_dim(),
        kernels,
        witness,
    })
}

/// Runs a generator for each `n` and records the exact kernel-set size of
/// the generated instance. Each count is a certified lower-bound witness for
/// the supremum over all size-`n` subfamilies; the supremum itself is not
/// computable, and the generated families are the ones that realize the
/// growth order of interest.
pub fn nu_p_sweep<F>(generate: F, p: usize, n_values: &[usize]) -> Result<Vec<(usize, usize)>>
where
    F: Fn(usize) -> Result<(Complex, Vec<Subcomplex>)>,
{
    n_values
        .iter()
        .map(|&n| {
            let (complex, tests) = generate(n)?;
            let ks = kernel_set(&complex, &tests, p)?;
            Ok((n, ks.len()))
        })
        .collect()
}

/// Least-squares fit of `log(count)` against `log(n)`.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeFit {
    pub points: Vec<(usize, usize)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits a line through `(log n, log count)`; the slope is the empirical
/// growth exponent over the sampled window.
pub fn fit_vcd_slope(points: &[(usize, usize)]) -> Result<SlopeFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    if points.iter().any(|&(n, count)| n == 0 || count == 0) {
        return Err(Error::DegenerateFit("zero coordinate in a fit point"));
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, c)| (c as f64).ln()).collect();
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all n values are equal"));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(SlopeFit {
        points: points.to_vec(),
        slope,
        intercept,
        r_squared,
    })
}

/// Number of distinct traces of the cuts on the product grid
/// `z0 x z1`. Cuts are sets of index pairs over arbitrary universes; only
/// their intersections with the given grid matter.
pub fn higher_order_pattern_count(
    z0: &[usize],
    z1: &[usize],
    cuts: &[BTreeSet<(usize, usize)>],
) -> usize {
    let mut traces: HashSet<Vec<bool>> = HashSet::new();
    for cut in cuts {
        let trace: Vec<bool> = z0
            .iter()
            .flat_map(|&a| z1.iter().map(move |&b| cut.contains(&(a, b))))
            .collect();
        traces.insert(trace);
    }
    traces.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::ComplexBuilder;

    #[test]
    fn shatter_counts_collapse_duplicates() {
        // All singletons of a 3-element ground: traces of the full ground
        // are the three singletons plus nothing else; adding the empty set
        // member would contribute the empty trace.
        let s = SetSystem::new(3, vec![0b001, 0b010, 0b100, 0b000]).unwrap();
        assert_eq!(s.shatter_count(0b111), 4);
        let t = SetSystem::new(3, vec![0b001, 0b010, 0b100]).unwrap();
        assert_eq!(t.shatter_count(0b111), 3);
        assert_eq!(t.shatter_count(0b000), 1);
    }

    #[test]
    fn single_empty_set_has_one_trace() {
        let s = SetSystem::new(5, vec![0]).unwrap();
        for subset in [0b00000u64, 0b10101, 0b11111] {
            assert_eq!(s.shatter_count(subset), 1);
        }
    }

    #[test]
    fn powerset_shatters_everything() {
        let ground = 4;
        let sets: Vec<u64> = (0..(1u64 << ground)).collect();
        let s = SetSystem::new(ground, sets).unwrap();
        let profile = s.shatter_profile().unwrap();
        for (n, &c) in profile.iter().enumerate() {
            assert_eq!(c, 1 << n);
        }
        assert_eq!(s.vc_dimension().unwrap(), ground);
        assert!(sauer_shelah_check(&s, ground).unwrap());
    }

    #[test]
    fn half_line_thresholds() {
        // Prefix sets {0..k} on 10 points: VC dimension 1, nu(n) = n + 1.
        let ground = 10;
        let sets: Vec<u64> = (0..=ground as u64).map(|k| full_mask(k as usize)).collect();
        let s = SetSystem::new(ground, sets).unwrap();
        assert_eq!(s.vc_dimension().unwrap(), 1);
        let profile = s.shatter_profile().unwrap();
        for (n, &c) in profile.iter().enumerate() {
            assert_eq!(c, n + 1);
        }
        assert!(sauer_shelah_check(&s, 1).unwrap());
    }

    #[test]
    fn intervals_on_a_line() {
        // All intervals [a, b) over 12 points: VC dimension 2 and
        // nu(n) = C(n,2) + n + 1.
        let ground = 12;
        let mut sets = vec![0u64];
        for a in 0..ground {
            for b in a + 1..=ground {
                sets.push(full_mask(b) & !full_mask(a));
            }
        }
        let s = SetSystem::new(ground, sets).unwrap();
        assert_eq!(s.vc_dimension().unwrap(), 2);
        let profile = s.shatter_profile().unwrap();
        for (n, &c) in profile.iter().enumerate() {
            assert_eq!(
                c as u128,
                crate::arrangements::binomial(n, 2) + n as u128 + 1
            );
        }
        assert!(sauer_shelah_check(&s, 2).unwrap());
    }

    #[test]
    fn pattern_count_basics() {
        let one = SetSystem::new(4, vec![0b0011]).unwrap();
        assert_eq!(pattern_count(&one), 2);
        // k disjoint nonempty sets covering the carrier: k signatures.
        let disjoint = SetSystem::new(6, vec![0b000011, 0b001100, 0b110000]).unwrap();
        assert_eq!(pattern_count(&disjoint), 3);
        // Leave a point uncovered: one more signature.
        let partial = SetSystem::new(6, vec![0b000011, 0b001100]).unwrap();
        assert_eq!(pattern_count(&partial), 3);
    }

    #[test]
    fn kernel_set_of_full_test_is_single_zero() {
        let k = Complex::cycle_graph(4);
        let ks = kernel_set(&k, &[Subcomplex::full(&k)], 1).unwrap();
        assert_eq!(ks.len(), 1);
        assert_eq!(ks.dimensions(), vec![0]);
        assert_eq!(ks.witness(ks.kernels().next().unwrap()), Some(0));
    }

    #[test]
    fn kernel_set_is_order_invariant() {
        let mut b = ComplexBuilder::new();
        b.add_edge(0, 1).add_edge(1, 2).add_edge(0, 2);
        b.add_edge(2, 3).add_edge(3, 4).add_edge(2, 4);
        let k = b.build();
        let tests: Vec<Subcomplex> = vec![
            Subcomplex::full(&k),
            Subcomplex::induced_on_vertices(&k, |v| v <= 2),
            Subcomplex::induced_on_vertices(&k, |v| v >= 2),
            Subcomplex::empty(&k),
        ];
        let forward = kernel_set(&k, &tests, 1).unwrap();
        let mut reversed = tests.clone();
        reversed.reverse();
        let backward = kernel_set(&k, &reversed, 1).unwrap();
        assert_eq!(forward.len(), backward.len());
        assert_eq!(forward.dimensions(), backward.dimensions());
        let fw: Vec<&Subspace> = forward.kernels().collect();
        let bw: Vec<&Subspace> = backward.kernels().collect();
        assert_eq!(fw, bw);
    }

    #[test]
    fn degree_zero_kernels_count_the_same_as_patterns() {
        // Dual route for the hyperplane family: model the n+1 points as
        // isolated vertices; each realizable pattern selects a vertex
        // subset, and distinct subsets must give distinct kernels of
        // H^0(points) -> H^0(subset). The cohomological count has to match
        // the rank-based enumeration exactly.
        for (m, count) in [(1usize, 4usize), (2, 5), (2, 6)] {
            let family = crate::arrangements::gen_generic_hyperplanes(m, count, 13).unwrap();
            let patterns = crate::arrangements::enumerate_realizable_patterns(&family);

            let mut b = crate::cohomology::ComplexBuilder::new();
            for v in 0..count {
                b.add_vertex(v);
            }
            let points = b.build();
            let tests: Vec<Subcomplex> = patterns
                .iter()
                .map(|pat| {
                    let bits = pat.bits().to_vec();
                    Subcomplex::induced_on_vertices(&points, |v| bits[v])
                })
                .collect();
            let ks = kernel_set(&points, &tests, 0).unwrap();
            assert_eq!(ks.len(), patterns.len(), "m={m} count={count}");
        }
    }

    #[test]
    fn nu_sweep_counts_are_monotone_for_nested_families() {
        let grid_counts = nu_p_sweep(
            |n| {
                let g = crate::arrangements::GridInstance::generate(n)?;
                Ok((g.complex().clone(), g.sweep_subcomplexes()))
            },
            1,
            &[2, 3, 4],
        )
        .unwrap();
        assert!(grid_counts.windows(2).all(|w| w[0].1 <= w[1].1));
        assert_eq!(grid_counts[2].1, 10);

        let hyper_counts: Vec<usize> = (3..=8)
            .map(|count| {
                let f = crate::arrangements::gen_generic_hyperplanes(2, count, 7).unwrap();
                crate::arrangements::enumerate_realizable_patterns(&f).len()
            })
            .collect();
        assert!(hyper_counts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn nu_sweep_of_constant_test_family_is_one() {
        let counts = nu_p_sweep(
            |n| {
                let k = Complex::cycle_graph(n.max(3));
                let full = Subcomplex::full(&k);
                Ok((k, vec![full.clone(), full.clone(), full]))
            },
            1,
            &[3, 4, 5],
        )
        .unwrap();
        assert!(counts.iter().all(|&(_, c)| c == 1));
    }

    #[test]
    fn slope_of_exact_power_law() {
        let points: Vec<(usize, usize)> = (2..10).map(|n| (n, n * n)).collect();
        let fit = fit_vcd_slope(&points).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slope_of_constant_counts() {
        let points: Vec<(usize, usize)> = (3..9).map(|n| (n, 17)).collect();
        let fit = fit_vcd_slope(&points).unwrap();
        assert!(fit.slope.abs() < 1e-12);
    }

    #[test]
    fn slope_fit_error_paths() {
        assert!(matches!(
            fit_vcd_slope(&[(2, 4), (3, 9)]),
            Err(Error::TooFewPoints { .. })
        ));
        assert!(matches!(
            fit_vcd_slope(&[(2, 4), (2, 5), (2, 6)]),
            Err(Error::DegenerateFit(_))
        ));
        assert!(matches!(
            fit_vcd_slope(&[(2, 4), (3, 0), (4, 6)]),
            Err(Error::DegenerateFit(_))
        ));
    }

    #[test]
    fn higher_order_product_structure() {
        let z0: Vec<usize> = (0..4).collect();
        let z1: Vec<usize> = (0..3).collect();
        // All products of nonempty intervals.
        let mut cuts = Vec::new();
        let mut marg0 = HashSet::new();
        let mut marg1 = HashSet::new();
        for a in 0..4 {
            for b in a..4 {
                for c in 0..3 {
                    for d in c..3 {
                        let cut: BTreeSet<(usize, usize)> =
                            (a..=b).flat_map(|x| (c..=d).map(move |y| (x, y))).collect();
                        marg0.insert((a, b));
                        marg1.insert((c, d));
                        cuts.push(cut);
                    }
                }
            }
        }
        assert_eq!(
            higher_order_pattern_count(&z0, &z1, &cuts),
            marg0.len() * marg1.len()
        );
        // A single cut has a single trace.
        assert_eq!(higher_order_pattern_count(&z0, &z1, &cuts[..1]), 1);
    }
}
