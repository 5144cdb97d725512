use crate::cohomology::{Complex, ComplexBuilder, Subcomplex};
use crate::exactq::Rational;
use crate::{Error, Result};

/// The union of `n` vertical and `n` horizontal lines, clipped to the box
/// `[0, n+1]^2` and modeled as a 1-complex: a vertex at every intersection
/// and at every clipped endpoint, an edge per segment between consecutive
/// vertices along a line.
///
/// A sweep functional `value(x, y) = x + y/(n+1)` is attached; it separates
/// the `n^2` interior intersection vertices, which is all the sweep needs.
/// (A genuinely irrational direction is not expressible in exact rational
/// arithmetic, and separation of the grid vertices is the only property the
/// construction uses.)
#[derive(Clone, Debug)]
pub struct GridInstance {
    n: usize,
    complex: Complex,
    sweep_normal: (Rational, Rational),
    /// Sweep value per vertex, indexed like `complex.vertices()`.
    vertex_values: Vec<Rational>,
    /// Sorted distinct values at which the sweep subcomplex changes.
    critical_values: Vec<Rational>,
}

/// One representative sweep position per constancy interval of the sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepPosition {
    /// Index into the interval list: 0 is "before everything".
    pub interval: usize,
    pub value: Rational,
}

impl GridInstance {
    /// Builds the grid of lines `x = i`, `y = j` for `i, j` in `1..=n`.
    pub fn generate(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(
                "grid needs at least two lines per direction".into(),
            ));
        }
        let span = n + 2; // coordinates range over 0..=n+1
        let vid = |x: usize, y: usize| x * span + y;

        let mut b = ComplexBuilder::new();
        // Vertical line x = i: vertices (i, 0), (i, 1), ..., (i, n+1).
        for i in 1..=n {
            for y in 0..=n {
                b.add_edge(vid(i, y), vid(i, y + 1));
            }
        }
        // Horizontal line y = j: vertices (0, j), ..., (n+1, j).
        for j in 1..=n {
            for x in 0..=n {
                b.add_edge(vid(x, j), vid(x + 1, j));
            }
        }
        let complex = b.build();

        let sweep_normal = (Rational::one(), Rational::new(1, (n + 1) as i64));
        let vertex_values: Vec<Rational> = complex
            .vertices()
            .iter()
            .map(|&v| {
                let (x, y) = (v / span, v % span);
                &sweep_normal.0 * &Rational::from(x) + &sweep_normal.1 * &Rational::from(y)
            })
            .collect();

        let mut critical_values = vertex_values.clone();
        critical_values.sort();
        critical_values.dedup();

        Ok(GridInstance {
            n,
            complex,
            sweep_normal,
            vertex_values,
            critical_values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn sweep_normal(&self) -> &(Rational, Rational) {
        &self.sweep_normal
    }

    pub fn vertex_values(&self) -> &[Rational] {
        &self.vertex_values
    }

    pub fn critical_values(&self) -> &[Rational] {
        &self.critical_values
    }

    /// Grid coordinates `(x, y)` of a stored vertex id.
    pub fn coordinates(&self, vertex: usize) -> (usize, usize) {
        let span = self.n + 2;
        (vertex / span, vertex % span)
    }

    /// Sweep values at the `n^2` interior intersection vertices.
    pub fn interior_values(&self) -> Vec<Rational> {
        self.complex
            .vertices()
            .iter()
            .zip(&self.vertex_values)
            .filter(|(&v, _)| {
                let (x, y) = self.coordinates(v);
                (1..=self.n).contains(&x) && (1..=self.n).contains(&y)
            })
            .map(|(_, val)| val.clone())
            .collect()
    }

    /// The part of the arrangement inside the half-plane `value <= x`:
    /// vertices below the threshold and edges with both endpoints selected
    /// (an edge cut by the sweep line deformation-retracts onto its kept
    /// endpoint, so the induced subcomplex has the right homotopy type).
    pub fn halfplane_subcomplex(&self, x: &Rational) -> Subcomplex {
        let values = &self.vertex_values;
        let complex = &self.complex;
        let keep = |v: usize| {
            let idx = complex.vertex_index(v).expect("grid vertex");
            &values[idx] <= x
        };
        Subcomplex::induced_on_vertices(complex, keep)
    }

    /// One position per constancy interval of the sweep: strictly below the
    /// smallest critical value, then each critical value itself (the
    /// subcomplex is constant on `[v_k, v_{k+1})`).
    pub fn sweep_positions(&self) -> Vec<SweepPosition> {
        let mut out = Vec::with_capacity(self.critical_values.len() + 1);
        let below = self.critical_values[0].clone() - Rational::one();
        out.push(SweepPosition {
            interval: 0,
            value: below,
        });
        for (i, v) in self.critical_values.iter().enumerate() {
            out.push(SweepPosition {
                interval: i + 1,
                value: v.clone(),
            });
        }
        out
    }

    /// All sweep subcomplexes, one per interval, in sweep order.
    pub fn sweep_subcomplexes(&self) -> Vec<Subcomplex> {
        self.sweep_positions()
            .iter()
            .map(|p| self.halfplane_subcomplex(&p.value))
            .collect()
    }

    /// First Betti number of every sweep subcomplex, in sweep order,
    /// computed combinatorially (edges - vertices + components).
    pub fn sweep_betti_profile(&self) -> Vec<usize> {
        self.sweep_positions()
            .iter()
            .map(|p| {
                let sub = self.halfplane_subcomplex(&p.value);
                subgraph_betti1(&self.complex, &sub)
            })
            .collect()
    }

    /// Exact number of distinct restriction kernels over the full sweep.
    ///
    /// The sweep family is nested, and restriction kernels of nested
    /// subcomplexes are nested (the restriction to the smaller one factors
    /// through the larger), so two sweep kernels are equal exactly when
    /// their dimensions agree. The kernel dimension at a position is
    /// `dim H^1(K) - dim H^1(L)` because the restriction of `H^1` to a graph
    /// subcomplex is onto (cycle spaces include). This collapses the count
    /// to the number of distinct sweep Betti numbers, which is cheap at any
    /// size; the tests cross-check it against the canonical-subspace count
    /// from `kernel_set` on small instances.
    pub fn sweep_distinct_kernel_count(&self) -> usize {
        let mut dims: Vec<usize> = self.sweep_betti_profile();
        dims.sort_unstable();
        dims.dedup();
        dims.len()
    }
}

/// `E - V + C` of the selected 1-skeleton, via union-find over the masks.
fn subgraph_betti1(parent: &Complex, sub: &Subcomplex) -> usize {
    let n = parent.vertex_count();
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    let mut edges = 0usize;
    for (i, &(u, v)) in parent.edges().iter().enumerate() {
        if !sub.edge_mask[i] {
            continue;
        }
        edges += 1;
        let iu = parent.vertex_index(u).unwrap();
        let iv = parent.vertex_index(v).unwrap();
        let (ru, rv) = (find(&mut uf, iu), find(&mut uf, iv));
        if ru != rv {
            uf[ru] = rv;
        }
    }
    let mut vertices = 0usize;
    let mut components = 0usize;
    for (i, &b) in sub.vertex_mask.iter().enumerate() {
        if b {
            vertices += 1;
            if find(&mut uf, i) == i {
                components += 1;
            }
        }
    }
    edges + components - vertices
}
