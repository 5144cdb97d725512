use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{Complex, ComplexBuilder, Simplex, Subcomplex};
use crate::exactq::Rational;
use crate::{Error, Result};

const RETRY_BUDGET: usize = 2_000;

/// A parameter of the pencil construction at which a restriction kernel is
/// sampled: either a pencil line through one of the special double points
/// (indexed by the unordered pair of base lines, `i < j`, 0-based), or a
/// generic pencil line through none of them.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum PencilTestPoint {
    Generic,
    Pair(usize, usize),
}

impl PencilTestPoint {
    pub fn label(&self) -> String {
        match self {
            PencilTestPoint::Generic => "generic".into(),
            PencilTestPoint::Pair(i, j) => format!("pair_{i}_{j}"),
        }
    }
}

/// The tightness construction in degree one.
///
/// `n` base lines in the projective plane (no three concurrent, none through
/// the pencil center, and no two of their pairwise intersection points
/// collinear with the center) select `C(n, 2)` special pencil lines. The
/// union whose cohomology is restricted is the arrangement of `2n` generic
/// companion lines, modeled by its incidence graph: a node per line, a node
/// per pairwise intersection point, an edge per incidence. Each test point
/// carries the subcomplex modeling the fiber over it: the four companion
/// lines of the two base lines glued along all six of their pairwise points,
/// plus one gluing point for every other companion pair.
#[derive(Clone, Debug)]
pub struct PencilInstance {
    n: usize,
    base_lines: Vec<Vec<Rational>>,
    companion_lines: Vec<Vec<Rational>>,
    incidence_graph: Complex,
    fibers: BTreeMap<PencilTestPoint, Subcomplex>,
    seed: u64,
}

impl PencilInstance {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn base_lines(&self) -> &[Vec<Rational>] {
        &self.base_lines
    }

    pub fn companion_lines(&self) -> &[Vec<Rational>] {
        &self.companion_lines
    }

    /// Incidence graph of the union of the `2n` companion lines.
    pub fn incidence_graph(&self) -> &Complex {
        &self.incidence_graph
    }

    pub fn test_points(&self) -> impl Iterator<Item = &PencilTestPoint> {
        self.fibers.keys()
    }

    pub fn fiber(&self, t: &PencilTestPoint) -> &Subcomplex {
        &self.fibers[t]
    }

    pub fn fibers(&self) -> &BTreeMap<PencilTestPoint, Subcomplex> {
        &self.fibers
    }
}

fn det3(a: &[Rational], b: &[Rational], c: &[Rational]) -> Rational {
    &a[0] * &(&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * &(&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * &(&b[0] * &c[1] - &b[1] * &c[0])
}

fn cross(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn independent2(a: &[Rational], b: &[Rational]) -> bool {
    cross(a, b).iter().any(|x| !x.is_zero())
}

/// Samples the base and companion lines with all genericity conditions
/// certified by exact rank checks, then builds the incidence-graph model and
/// the fiber subcomplexes. Deterministic in the seed.
pub fn gen_pencil_instance(n: usize, seed: u64) -> Result<PencilInstance> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "pencil needs at least two base lines".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let range = 8 * (n as i64) + 8;
    let draw = |rng: &mut ChaCha8Rng| -> Vec<Rational> {
        (0..3)
            .map(|_| Rational::from_int(rng.gen_range(-range..=range)))
            .collect()
    };
    let center = [Rational::one(), Rational::zero(), Rational::zero()];

    // Base lines: none through the pencil center, no three concurrent, and
    // no two double points collinear with the center (so the special pencil
    // lines are pairwise distinct).
    let mut base: Vec<Vec<Rational>> = Vec::with_capacity(n);
    let mut attempts = 0;
    while base.len() < n {
        attempts += 1;
        if attempts > RETRY_BUDGET {
            return Err(Error::GenericityBudget { attempts });
        }
        let cand = draw(&mut rng);
        if cand[0].is_zero() {
            continue; // passes through the center
        }
        if !base.iter().all(|l| independent2(l, &cand)) {
            continue;
        }
        let mut ok = true;
        'triples: for i in 0..base.len() {
            for j in i + 1..base.len() {
                if det3(&base[i], &base[j], &cand).is_zero() {
                    ok = false;
                    break 'triples;
                }
            }
        }
        if !ok {
            continue;
        }
        base.push(cand);
        if !double_points_separated(&base, &center) {
            base.pop();
        }
    }

    // Companion lines: 2n of them, pairwise distinct, no three concurrent.
    let mut companions: Vec<Vec<Rational>> = Vec::with_capacity(2 * n);
    attempts = 0;
    while companions.len() < 2 * n {
        attempts += 1;
        if attempts > RETRY_BUDGET {
            return Err(Error::GenericityBudget { attempts });
        }
        let cand = draw(&mut rng);
        if cand.iter().all(Rational::is_zero) {
            continue;
        }
        if !companions.iter().all(|l| independent2(l, &cand)) {
            continue;
        }
        let mut ok = true;
        'triples: for i in 0..companions.len() {
            for j in i + 1..companions.len() {
                if det3(&companions[i], &companions[j], &cand).is_zero() {
                    ok = false;
                    break 'triples;
                }
            }
        }
        if ok {
            companions.push(cand);
        }
    }

    let incidence_graph = incidence_graph_of(2 * n);
    let mut fibers = BTreeMap::new();
    fibers.insert(PencilTestPoint::Generic, generic_fiber(&incidence_graph, n));
    for i in 0..n {
        for j in i + 1..n {
            fibers.insert(
                PencilTestPoint::Pair(i, j),
                pair_fiber(&incidence_graph, n, i, j),
            );
        }
    }

    Ok(PencilInstance {
        n,
        base_lines: base,
        companion_lines: companions,
        incidence_graph,
        fibers,
        seed,
    })
}

/// All double points of the base arrangement must be pairwise non-collinear
/// with the center, so each lies on its own pencil line.
fn double_points_separated(base: &[Vec<Rational>], center: &[Rational; 3]) -> bool {
    let mut points = Vec::new();
    for i in 0..base.len() {
        for j in i + 1..base.len() {
            points.push(cross(&base[i], &base[j]));
        }
    }
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            if det3(&points[a], &points[b], center.as_slice()).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Node `k` in `0..lines` is the k-th line; node `lines + pair_index(a, b)`
/// is the intersection point of lines `a` and `b`; each point node is joined
/// to its two line nodes. Companion lines come in consecutive pairs:
/// lines `2t` and `2t + 1` accompany base line `t`.
fn incidence_graph_of(lines: usize) -> Complex {
    let mut b = ComplexBuilder::new();
    for k in 0..lines {
        b.add_vertex(k);
        let name = if k % 2 == 0 {
            format!("M{}", k / 2)
        } else {
            format!("M{}'", k / 2)
        };
        b.label(Simplex::Vertex(k), name);
    }
    for a in 0..lines {
        for c in a + 1..lines {
            let p = lines + pair_index(lines, a, c);
            b.add_edge(a, p);
            b.add_edge(c, p);
            b.label(Simplex::Vertex(p), format!("x({a},{c})"));
        }
    }
    b.build()
}

/// Lexicographic rank of the pair `(a, b)`, `a < b`, among all pairs.
fn pair_index(lines: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < lines);
    a * lines - a * (a + 1) / 2 + (b - a - 1)
}

fn fiber_with_points(graph: &Complex, lines: usize, point_pairs: &[(usize, usize)]) -> Subcomplex {
    let mut keep = vec![false; graph.vertex_count()];
    for k in 0..lines {
        keep[graph.vertex_index(k).unwrap()] = true;
    }
    for &(a, b) in point_pairs {
        let node = lines + pair_index(lines, a, b);
        keep[graph.vertex_index(node).unwrap()] = true;
    }
    Subcomplex::induced_on_vertices(graph, |v| keep[graph.vertex_index(v).unwrap()])
}

/// Over a generic pencil line each companion pair is glued only at its own
/// double point: a forest, so nothing of degree-one cohomology survives.
fn generic_fiber(graph: &Complex, n: usize) -> Subcomplex {
    let pairs: Vec<(usize, usize)> = (0..n).map(|t| (2 * t, 2 * t + 1)).collect();
    fiber_with_points(graph, 2 * n, &pairs)
}

/// Over the special point of base lines `i < j`, the four companion lines of
/// `i` and `j` are glued along all six pairwise points (three independent
/// cycles); the other companion pairs stay glued at single points.
fn pair_fiber(graph: &Complex, n: usize, i: usize, j: usize) -> Subcomplex {
    let quad = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            pairs.push((quad[a].min(quad[b]), quad[a].max(quad[b])));
        }
    }
    for t in 0..n {
        if t != i && t != j {
            pairs.push((2 * t, 2 * t + 1));
        }
    }
    fiber_with_points(graph, 2 * n, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cohomology_space;

    fn betti1(k: &Complex) -> usize {
        cohomology_space(k, 1).unwrap().quotient_dim()
    }

    #[test]
    fn incidence_graph_betti_matches_euler_count() {
        for n in [2usize, 3, 4] {
            let inst = gen_pencil_instance(n, 11).unwrap();
            let k = inst.incidence_graph();
            let lines = 2 * n;
            let expected = lines * (lines - 1) / 2 - lines + 1;
            assert_eq!(betti1(k), expected, "n = {n}");
        }
    }

    #[test]
    fn fiber_betti_numbers() {
        let inst = gen_pencil_instance(3, 5).unwrap();
        let k = inst.incidence_graph();
        let generic = inst.fiber(&PencilTestPoint::Generic).extract(k);
        assert_eq!(betti1(&generic), 0);
        for i in 0..3 {
            for j in i + 1..3 {
                let f = inst.fiber(&PencilTestPoint::Pair(i, j)).extract(k);
                assert_eq!(betti1(&f), 3, "pair ({i},{j})");
            }
        }
    }

    #[test]
    fn base_lines_satisfy_certificates() {
        let inst = gen_pencil_instance(4, 23).unwrap();
        let base = inst.base_lines();
        for l in base {
            assert!(!l[0].is_zero());
        }
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                for k in j + 1..base.len() {
                    assert!(!det3(&base[i], &base[j], &base[k]).is_zero());
                }
            }
        }
        let comps = inst.companion_lines();
        assert_eq!(comps.len(), 8);
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                for k in j + 1..comps.len() {
                    assert!(!det3(&comps[i], &comps[j], &comps[k]).is_zero());
                }
            }
        }
    }

    #[test]
    fn deterministic_in_seed() {
        let a = gen_pencil_instance(3, 9).unwrap();
        let b = gen_pencil_instance(3, 9).unwrap();
        assert_eq!(a.base_lines(), b.base_lines());
        assert_eq!(a.companion_lines(), b.companion_lines());
    }
}
