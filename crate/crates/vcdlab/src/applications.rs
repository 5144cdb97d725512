//! Degree-`p` membership, general position certificates, the kernel
//! splitting that makes membership recoverable from a single global kernel,
//! and the two combinatorial consumers of that machinery: random epsilon-net
//! construction with exhaustive verification, and fractional-Helly checks.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{
    cohomology_space, restriction_kernel, Complex, ComplexBuilder, Subcomplex,
};
use crate::exactq::{Rational, Subspace};
use crate::{Error, Result};

/// A named test set: for each member `Z` of the family, the subcomplex
/// modeling `X ∩ Z`.
#[derive(Clone, Debug)]
pub struct TestSet {
    pub name: String,
    /// `caps[i]` is the model of `X ∩ Z_i`; must be contained in `Z_i`.
    pub caps: Vec<Subcomplex>,
}

/// An ambient complex, a family of member subcomplexes, and a family of test
/// sets given by their intersections with each member.
#[derive(Clone, Debug)]
pub struct Triple {
    ambient: Complex,
    z_family: Vec<Subcomplex>,
    x_family: Vec<TestSet>,
}

impl Triple {
    pub fn new(
        ambient: Complex,
        z_family: Vec<Subcomplex>,
        x_family: Vec<TestSet>,
    ) -> Result<Self> {
        for (xi, x) in x_family.iter().enumerate() {
            if x.caps.len() != z_family.len() {
                return Err(Error::InvalidInstance(format!(
                    "test set {xi} has {} intersections for {} members",
                    x.caps.len(),
                    z_family.len()
                )));
            }
            for (zi, cap) in x.caps.iter().enumerate() {
                if !cap.is_subset_of(&z_family[zi]) {
                    return Err(Error::InvalidInstance(format!(
                        "intersection {xi}/{zi} is not contained in its member"
                    )));
                }
            }
        }
        for (zi, z) in z_family.iter().enumerate() {
            if !z.is_closed(&ambient) {
                return Err(Error::InvalidInstance(format!("member {zi} is not closed")));
            }
        }
        Ok(Triple {
            ambient,
            z_family,
            x_family,
        })
    }

    pub fn ambient(&self) -> &Complex {
        &self.ambient
    }

    pub fn members(&self) -> &[Subcomplex] {
        &self.z_family
    }

    pub fn tests(&self) -> &[TestSet] {
        &self.x_family
    }
}

/// `Z ∈_p X`: the restriction `H^p(Z) -> H^p(X ∩ Z)` is nonzero.
///
/// Both arguments are subcomplexes of the same ambient complex, with
/// `x_cap_z ⊆ z`. For a point member and `p = 0` this is ordinary
/// membership.
pub fn in_p(ambient: &Complex, z: &Subcomplex, x_cap_z: &Subcomplex, p: usize) -> Result<bool> {
    if !x_cap_z.is_subset_of(z) {
        return Err(Error::InvalidInstance(
            "intersection is not contained in the member".into(),
        ));
    }
    let z_complex = z.extract(ambient);
    let relative = z.relative_mask(ambient, x_cap_z);
    let space = cohomology_space(&z_complex, p)?;
    if space.quotient_dim() == 0 {
        return Ok(false);
    }
    let kernel = restriction_kernel(&z_complex, &space, &relative)?;
    Ok(kernel.dim() < space.quotient_dim())
}

/// Result of checking the intersection-dimension conditions needed for the
/// degree-`p` Mayer-Vietoris splitting: for `1 <= j <= p`, every
/// `(j+1)`-fold intersection of distinct members has model dimension
/// `< p - j` (empty intersections pass vacuously).
#[derive(Clone, Debug, Serialize)]
pub struct GeneralPositionCertificate {
    pub degree: usize,
    pub checked_tuples: usize,
    /// Indices of the first violating tuple, if any.
    pub violation: Option<Vec<usize>>,
}

impl GeneralPositionCertificate {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Verifies `p`-general position combinatorially. `dims[i]` is the model
/// dimension of member `i` as supplied by the instance generator; it is
/// cross-checked against the subcomplex, while intersection dimensions are
/// computed from the masks directly.
pub fn check_p_general_position(
    t: &Triple,
    p: usize,
    dims: &[usize],
) -> GeneralPositionCertificate {
    let members = t.members();
    assert_eq!(dims.len(), members.len(), "one dimension per member");
    for (i, z) in members.iter().enumerate() {
        let declared = if z.vertex_count() > 0 {
            Some(dims[i])
        } else {
            None
        };
        debug_assert_eq!(z.model_dimension(), declared);
    }
    let mut checked = 0usize;
    for j in 1..=p {
        let mut violation = None;
        for_each_tuple(members.len(), j + 1, &mut |tuple| {
            if violation.is_some() {
                return;
            }
            checked += 1;
            let mut inter = members[tuple[0]].clone();
            for &idx in &tuple[1..] {
                inter = inter.intersect(&members[idx]);
            }
            // Needs dim < p - j; an empty intersection passes vacuously.
            if let Some(d) = inter.model_dimension() {
                if d + j >= p {
                    violation = Some(tuple.to_vec());
                }
            }
        });
        if let Some(v) = violation {
            return GeneralPositionCertificate {
                degree: p,
                checked_tuples: checked,
                violation: Some(v),
            };
        }
    }
    GeneralPositionCertificate {
        degree: p,
        checked_tuples: checked,
        violation: None,
    }
}

fn for_each_tuple(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut tuple: Vec<usize> = (0..k).collect();
    loop {
        f(&tuple);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if tuple[i] < n - (k - i) {
                tuple[i] += 1;
                for j in i + 1..k {
                    tuple[j] = tuple[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Outcome of the Mayer-Vietoris kernel splitting for one test set.
#[derive(Clone, Debug)]
pub struct MvSplit {
    /// Kernel of `H^p(⊔ Z) -> H^p(⊔ X ∩ Z)` on the disjoint-union model.
    pub global_kernel: Subspace,
    /// Per-member kernels of `H^p(Z) -> H^p(X ∩ Z)`.
    pub summands: Vec<Subspace>,
    /// Whether the global kernel equals the direct sum of the summands and
    /// the membership set recovered from the summands matches direct
    /// evaluation.
    pub agrees: bool,
    /// `recovered[i]` is `Z_i ∈_p X` as read off the summand kernels.
    pub recovered: Vec<bool>,
}

/// Computes the global restriction kernel on the disjoint-union model and
/// its per-member splitting, verifying both preconditions first: the members
/// must be in `p`-general position, and every `H^p(Z) -> H^p(X ∩ Z)` must be
/// surjective.
pub fn mv_kernel_split(t: &Triple, x_index: usize, p: usize) -> Result<MvSplit> {
    let dims: Vec<usize> = t
        .members()
        .iter()
        .map(|z| z.model_dimension().unwrap_or(0))
        .collect();
    let cert = check_p_general_position(t, p, &dims);
    if let Some(v) = cert.violation {
        return Err(Error::GeneralPosition(v));
    }
    let test = &t.tests()[x_index];

    let mut parts: Vec<Complex> = Vec::new();
    let mut summands: Vec<Subspace> = Vec::new();
    let mut recovered: Vec<bool> = Vec::new();
    for (zi, z) in t.members().iter().enumerate() {
        let z_complex = z.extract(t.ambient());
        let relative = z.relative_mask(t.ambient(), &test.caps[zi]);
        let space = cohomology_space(&z_complex, p)?;
        let cap_space = cohomology_space(&relative.extract(&z_complex), p)?;
        let kernel = restriction_kernel(&z_complex, &space, &relative)?;
        // Surjectivity: rank of the induced map must fill the target.
        let rank = space.quotient_dim() - kernel.dim();
        if rank != cap_space.quotient_dim() {
            return Err(Error::NotSurjective {
                degree: p,
                index: zi,
            });
        }
        recovered.push(kernel.dim() < space.quotient_dim());
        summands.push(kernel);
        parts.push(z_complex);
    }

    // Global kernel on the disjoint-union model. Unions are built from the
    // same part complexes, so the union's cohomology coordinates are the
    // concatenation of the per-part coordinates.
    let union = Complex::disjoint_union(&parts);
    let union_space = cohomology_space(&union, p)?;
    let expected: usize = summands.iter().map(Subspace::ambient_dim).sum();
    if union_space.quotient_dim() != expected {
        return Err(Error::InvalidInstance(
            "disjoint union cohomology does not split by parts".into(),
        ));
    }
    let union_caps = union_cap_mask(&union, &parts, t, test)?;
    let global_kernel = restriction_kernel(&union, &union_space, &union_caps)?;

    let summand_refs: Vec<&Subspace> = summands.iter().collect();
    let direct_sum = Subspace::direct_sum(&summand_refs);
    let direct: Vec<bool> = t
        .members()
        .iter()
        .enumerate()
        .map(|(zi, z)| in_p(t.ambient(), z, &test.caps[zi], p))
        .collect::<Result<_>>()?;
    let agrees = global_kernel == direct_sum && recovered == direct;
    Ok(MvSplit {
        global_kernel,
        summands,
        agrees,
        recovered,
    })
}

/// Mask of `⊔ (X ∩ Z_i)` inside the disjoint union of the members, using
/// the same part order and offsets as `Complex::disjoint_union`.
fn union_cap_mask(
    union: &Complex,
    parts: &[Complex],
    t: &Triple,
    test: &TestSet,
) -> Result<Subcomplex> {
    let mut b = ComplexBuilder::new();
    let mut offset = 0usize;
    for (zi, part) in parts.iter().enumerate() {
        let relative = t.members()[zi].relative_mask(t.ambient(), &test.caps[zi]);
        for (i, &v) in part.vertices().iter().enumerate() {
            if relative.vertex_mask[i] {
                b.add_vertex(v + offset);
            }
        }
        for (i, &(u, v)) in part.edges().iter().enumerate() {
            if relative.edge_mask[i] {
                b.add_edge(u + offset, v + offset);
            }
        }
        for (i, &(u, v, w)) in part.triangles().iter().enumerate() {
            if relative.triangle_mask[i] {
                b.add_triangle(u + offset, v + offset, w + offset);
            }
        }
        offset += part.vertices().iter().max().map_or(0, |m| m + 1);
    }
    let cap_union = b.build();
    let vset: BTreeSet<usize> = cap_union.vertices().iter().copied().collect();
    let eset: BTreeSet<(usize, usize)> = cap_union.edges().iter().copied().collect();
    let tset: BTreeSet<(usize, usize, usize)> = cap_union.triangles().iter().copied().collect();
    let sub = Subcomplex {
        vertex_mask: union.vertices().iter().map(|v| vset.contains(v)).collect(),
        edge_mask: union.edges().iter().map(|e| eset.contains(e)).collect(),
        triangle_mask: union.triangles().iter().map(|t| tset.contains(t)).collect(),
    };
    if !sub.is_closed(union) {
        return Err(Error::InvalidInstance(
            "union intersection mask not closed".into(),
        ));
    }
    Ok(sub)
}

/// Outcome of the randomized epsilon-net experiment.
#[derive(Clone, Debug, Serialize)]
pub struct EpsNetOutcome {
    /// Sampled member indices of the final trial.
    pub net: Vec<usize>,
    /// Whether the final trial's net verified.
    pub verified: bool,
    /// Fraction of trials whose net verified.
    pub success_rate: f64,
    pub net_size: usize,
    pub trials: usize,
}

/// Samples nets of size `ceil(c_const * d * (1/eps) * ln(1/eps))` uniformly
/// with replacement and verifies the net property exhaustively: every test
/// set that is `∈_p`-heavy on an `eps`-fraction of the family must contain a
/// sampled member in the `∈_p` sense. Trials are seeded individually, so the
/// outcome is independent of scheduling.
pub fn epsilon_net_sample(
    t: &Triple,
    p: usize,
    eps: &Rational,
    c_const: &Rational,
    density_bound: usize,
    trials: usize,
    seed: u64,
) -> Result<EpsNetOutcome> {
    if eps <= &Rational::zero() || eps >= &Rational::one() {
        return Err(Error::InvalidParameter("eps must lie in (0, 1)".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let dims: Vec<usize> = t
        .members()
        .iter()
        .map(|z| z.model_dimension().unwrap_or(0))
        .collect();
    let cert = check_p_general_position(t, p, &dims);
    if let Some(v) = cert.violation {
        return Err(Error::GeneralPosition(v));
    }

    let family_size = t.members().len();
    let inv_eps = eps.recip();
    let size_estimate =
        c_const.to_f64() * density_bound as f64 * inv_eps.to_f64() * inv_eps.to_f64().ln();
    let net_size = size_estimate.ceil().max(1.0) as usize;
    if net_size > family_size {
        return Err(Error::NetTooLarge {
            needed: net_size,
            available: family_size,
        });
    }

    let membership = membership_matrix(t, p)?;
    let heavy = heavy_rows(&membership, eps, family_size);

    let verdicts: Vec<(Vec<usize>, bool)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            let net: Vec<usize> = (0..net_size)
                .map(|_| rng.gen_range(0..family_size))
                .collect();
            let ok = heavy.iter().all(|row| net.iter().any(|&z| row[z]));
            (net, ok)
        })
        .collect();

    let successes = verdicts.iter().filter(|(_, ok)| *ok).count();
    let (net, verified) = verdicts.last().cloned().expect("at least one trial");
    Ok(EpsNetOutcome {
        net,
        verified,
        success_rate: successes as f64 / trials as f64,
        net_size,
        trials,
    })
}

fn heavy_rows<'a>(
    membership: &'a [Vec<bool>],
    eps: &Rational,
    family_size: usize,
) -> Vec<&'a Vec<bool>> {
    let threshold = eps * &Rational::from(family_size);
    membership
        .iter()
        .filter(|row| Rational::from(row.iter().filter(|&&b| b).count()) >= threshold)
        .collect()
}

/// Checks the net property of an explicit candidate net: every test set that
/// is `∈_p`-heavy on an `eps`-fraction of the family must contain a net
/// member in the `∈_p` sense.
pub fn verify_epsilon_net(t: &Triple, p: usize, eps: &Rational, net: &[usize]) -> Result<bool> {
    let membership = membership_matrix(t, p)?;
    let heavy = heavy_rows(&membership, eps, t.members().len());
    Ok(heavy.iter().all(|row| net.iter().any(|&z| row[z])))
}

/// `membership[x][z]` = `Z_z ∈_p X_x`.
pub fn membership_matrix(t: &Triple, p: usize) -> Result<Vec<Vec<bool>>> {
    t.tests()
        .par_iter()
        .map(|x| {
            t.members()
                .iter()
                .enumerate()
                .map(|(zi, z)| in_p(t.ambient(), z, &x.caps[zi], p))
                .collect::<Result<Vec<bool>>>()
        })
        .collect()
}

/// Outcome of the fractional-Helly census for tuple size `k`.
#[derive(Clone, Debug, Serialize)]
pub struct HellyOutcome {
    /// Number of `k`-tuples covered by some test set in the `∈_p` sense.
    pub covered_tuples: usize,
    pub tuple_count: usize,
    /// Whether covered_tuples >= alpha * C(n+1, k).
    pub hypothesis_holds: bool,
    /// Largest fraction of the family `∈_p`-contained in one test set;
    /// computed unconditionally, so it does not depend on `alpha`.
    pub beta_achieved: Rational,
}

/// Counts the `k`-tuples of members covered by a single test set and the
/// best coverage fraction any test set achieves. Exhaustive over all
/// `C(n+1, k)` tuples, so the family is expected to be small.
pub fn fractional_helly_check(
    t: &Triple,
    p: usize,
    k: usize,
    alpha: &Rational,
) -> Result<HellyOutcome> {
    let n_plus_1 = t.members().len();
    if k == 0 || k > n_plus_1 {
        return Err(Error::InvalidParameter("tuple size out of range".into()));
    }
    let membership = membership_matrix(t, p)?;
    let mut covered = 0usize;
    let mut total = 0usize;
    for_each_tuple(n_plus_1, k, &mut |tuple| {
        total += 1;
        if membership.iter().any(|row| tuple.iter().all(|&i| row[i])) {
            covered += 1;
        }
    });
    let best = membership
        .iter()
        .map(|row| row.iter().filter(|&&b| b).count())
        .max()
        .unwrap_or(0);
    let hypothesis_holds = Rational::from(covered) >= alpha * &Rational::from(total);
    Ok(HellyOutcome {
        covered_tuples: covered,
        tuple_count: total,
        hypothesis_holds,
        beta_achieved: Rational::new(best as i64, n_plus_1 as i64),
    })
}

// ---------------------------------------------------------------------------
// Instance generators for the experiments.

/// How a test set meets one circle member.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CircleCut {
    Full,
    Arc,
    Empty,
}

/// A family of disjoint simplicial circles with test sets given by a cut
/// shape per circle. Circles are squares (4-cycles); an `Arc` keeps three of
/// the four vertices.
pub fn circles_triple(cuts_per_test: &[Vec<CircleCut>]) -> Result<Triple> {
    let n = cuts_per_test
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidParameter("need at least one test set".into()))?;
    let parts: Vec<Complex> = (0..n).map(|_| Complex::cycle_graph(4)).collect();
    let ambient = Complex::disjoint_union(&parts);
    let circle =
        |i: usize| -> Subcomplex { Subcomplex::induced_on_vertices(&ambient, move |v| v / 4 == i) };
    let z_family: Vec<Subcomplex> = (0..n).map(circle).collect();
    let x_family = cuts_per_test
        .iter()
        .enumerate()
        .map(|(xi, cuts)| {
            if cuts.len() != n {
                return Err(Error::InvalidParameter("ragged cut specification".into()));
            }
            let caps = cuts
                .iter()
                .enumerate()
                .map(|(zi, cut)| match cut {
                    CircleCut::Full => circle(zi),
                    CircleCut::Arc => Subcomplex::induced_on_vertices(&ambient, move |v| {
                        v / 4 == zi && v % 4 != 0
                    }),
                    CircleCut::Empty => Subcomplex::empty(&ambient),
                })
                .collect();
            Ok(TestSet {
                name: format!("X{xi}"),
                caps,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Triple::new(ambient, z_family, x_family)
}

/// Disjoint circles laid out along a line, swept by half-planes: circle `i`
/// occupies the slab `[2i, 2i+1]`, and for each circle three thresholds are
/// generated (touch a point of it, cut it in an arc, contain it fully).
/// Models the standard picture of a half-plane family over a row of circles.
pub fn halfplane_circles_triple(n: usize) -> Result<Triple> {
    let mut tests: Vec<Vec<CircleCut>> = Vec::new();
    let cut_row = |cover: usize, partial: Option<CircleCut>| -> Vec<CircleCut> {
        (0..n)
            .map(|i| {
                if i < cover {
                    CircleCut::Full
                } else if i == cover {
                    partial.unwrap_or(CircleCut::Empty)
                } else {
                    CircleCut::Empty
                }
            })
            .collect()
    };
    tests.push(vec![CircleCut::Empty; n]);
    for i in 0..n {
        tests.push(cut_row(i, Some(CircleCut::Arc)));
        tests.push(cut_row(i + 1, None));
    }
    circles_triple(&tests)
}

/// Random containment assignment (full / arc / empty per circle), for the
/// randomized splitting experiments. Deterministic in the seed.
pub fn random_circles_triple(n: usize, tests: usize, seed: u64) -> Result<Triple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cuts: Vec<Vec<CircleCut>> = (0..tests)
        .map(|_| {
            (0..n)
                .map(|_| match rng.gen_range(0..3) {
                    0 => CircleCut::Full,
                    1 => CircleCut::Arc,
                    _ => CircleCut::Empty,
                })
                .collect()
        })
        .collect();
    circles_triple(&cuts)
}

/// Crafted family for the fractional-Helly experiment: one test set covering
/// most members plus random ones. Guarantees the covered-tuple hypothesis at
/// `alpha = 1/2` while keeping the instance nontrivial.
pub fn crafted_helly_triple(n_plus_1: usize, tests: usize, seed: u64) -> Result<Triple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cuts: Vec<Vec<CircleCut>> = Vec::new();
    let big_cover = (4 * n_plus_1).div_ceil(5);
    cuts.push(
        (0..n_plus_1)
            .map(|i| {
                if i < big_cover {
                    CircleCut::Full
                } else {
                    CircleCut::Arc
                }
            })
            .collect(),
    );
    for _ in 1..tests {
        cuts.push(
            (0..n_plus_1)
                .map(|_| match rng.gen_range(0..3) {
                    0 => CircleCut::Full,
                    1 => CircleCut::Arc,
                    _ => CircleCut::Empty,
                })
                .collect(),
        );
    }
    circles_triple(&cuts)
}
