//! Finite simplicial complexes of dimension at most two, their rational
//! cochain complexes, and the maps induced on cohomology by inclusions of
//! subcomplexes.
//!
//! Simplices are stored in a deterministic sorted order, which fixes the
//! layout of every coboundary matrix. Because of that, the cohomology
//! coordinates of a complex are reproducible across runs and insertion
//! orders, and restriction kernels computed against different subcomplexes of
//! one parent live in a single fixed coordinate space where they can be
//! compared and counted.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::exactq::{induced_map_on_quotient, QMatrix, Rational, Subspace};
use crate::{Error, Result};

/// A simplex of dimension 0, 1 or 2, with vertices in ascending order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Simplex {
    Vertex(usize),
    Edge(usize, usize),
    Triangle(usize, usize, usize),
}

/// A finite simplicial complex with vertices identified by `usize` ids.
///
/// Invariants: every face of every stored simplex is stored (closure), and
/// the vertex/edge/triangle lists are sorted. Construct through
/// [`ComplexBuilder`] or the checked [`Complex::from_parts`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Complex {
    vertices: Vec<usize>,
    edges: Vec<(usize, usize)>,
    triangles: Vec<(usize, usize, usize)>,
    labels: BTreeMap<Simplex, String>,
}

/// Incremental builder; adding a simplex adds all of its faces.
#[derive(Default, Clone)]
pub struct ComplexBuilder {
    vertices: BTreeSet<usize>,
    edges: BTreeSet<(usize, usize)>,
    triangles: BTreeSet<(usize, usize, usize)>,
    labels: BTreeMap<Simplex, String>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: usize) -> &mut Self {
        self.vertices.insert(v);
        self
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> &mut Self {
        assert_ne!(u, v, "degenerate edge");
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.vertices.insert(a);
        self.vertices.insert(b);
        self.edges.insert((a, b));
        self
    }

    pub fn add_triangle(&mut self, u: usize, v: usize, w: usize) -> &mut Self {
        let mut t = [u, v, w];
        t.sort_unstable();
        let [a, b, c] = t;
        assert!(a < b && b < c, "degenerate triangle");
        self.add_edge(a, b);
        self.add_edge(a, c);
        self.add_edge(b, c);
        self.triangles.insert((a, b, c));
        self
    }

    pub fn label(&mut self, s: Simplex, text: impl Into<String>) -> &mut Self {
        self.labels.insert(s, text.into());
        self
    }

    pub fn build(&self) -> Complex {
        Complex {
            vertices: self.vertices.iter().copied().collect(),
            edges: self.edges.iter().copied().collect(),
            triangles: self.triangles.iter().copied().collect(),
            labels: self.labels.clone(),
        }
    }
}

impl Complex {
    pub fn empty() -> Self {
        ComplexBuilder::new().build()
    }

    /// Validates closure and ordering of raw simplex lists.
    pub fn from_parts(
        vertices: Vec<usize>,
        edges: Vec<(usize, usize)>,
        triangles: Vec<(usize, usize, usize)>,
    ) -> Result<Self> {
        let vset: BTreeSet<usize> = vertices.iter().copied().collect();
        if vset.len() != vertices.len() {
            return Err(Error::InvalidInstance("duplicate vertices".into()));
        }
        let mut builder = ComplexBuilder::new();
        for v in vertices {
            builder.add_vertex(v);
        }
        for (u, v) in &edges {
            if !vset.contains(u) || !vset.contains(v) || u >= v {
                return Err(Error::InvalidInstance(format!("bad edge ({u},{v})")));
            }
            builder.add_edge(*u, *v);
        }
        let eset: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
        for (u, v, w) in &triangles {
            if !(u < v && v < w) {
                return Err(Error::InvalidInstance(format!(
                    "bad triangle ({u},{v},{w})"
                )));
            }
            for e in [(*u, *v), (*u, *w), (*v, *w)] {
                if !eset.contains(&e) {
                    return Err(Error::InvalidInstance(format!(
                        "triangle ({u},{v},{w}) missing edge ({},{})",
                        e.0, e.1
                    )));
                }
            }
            builder.add_triangle(*u, *v, *w);
        }
        Ok(builder.build())
    }

    /// A cycle graph on `n >= 3` vertices `0..n`: the simplicial circle.
    pub fn cycle_graph(n: usize) -> Self {
        assert!(n >= 3, "a simplicial circle needs at least 3 vertices");
        let mut b = ComplexBuilder::new();
        for i in 0..n {
            b.add_edge(i, (i + 1) % n);
        }
        b.build()
    }

    /// A path with `n >= 1` edges on vertices `0..=n`.
    pub fn path_graph(n: usize) -> Self {
        assert!(n >= 1);
        let mut b = ComplexBuilder::new();
        for i in 0..n {
            b.add_edge(i, i + 1);
        }
        b.build()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn triangles(&self) -> &[(usize, usize, usize)] {
        &self.triangles
    }

    pub fn label_of(&self, s: &Simplex) -> Option<&str> {
        self.labels.get(s).map(String::as_str)
    }

    pub fn vertex_index(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok()
    }

    /// Number of `p`-simplices, i.e. the dimension of `C^p`.
    pub fn cochain_dim(&self, p: usize) -> usize {
        match p {
            0 => self.vertex_count(),
            1 => self.edge_count(),
            2 => self.triangle_count(),
            _ => 0,
        }
    }

    /// Largest dimension of a simplex present, or `None` for the empty complex.
    pub fn model_dimension(&self) -> Option<usize> {
        if self.triangle_count() > 0 {
            Some(2)
        } else if self.edge_count() > 0 {
            Some(1)
        } else if self.vertex_count() > 0 {
            Some(0)
        } else {
            None
        }
    }

    /// Number of connected components (via the 1-skeleton).
    pub fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(u, v) in &self.edges {
            let (iu, iv) = (self.vertex_index(u).unwrap(), self.vertex_index(v).unwrap());
            let (ru, rv) = (find(&mut parent, iu), find(&mut parent, iv));
            if ru != rv {
                parent[ru] = rv;
            }
        }
        (0..n).filter(|&i| find(&mut parent, i) == i).count()
    }

    /// Coproduct of complexes with vertices relabeled by increasing offsets,
    /// so the simplices of later summands sort after earlier ones.
    pub fn disjoint_union(parts: &[Complex]) -> Complex {
        let mut b = ComplexBuilder::new();
        let mut offset = 0usize;
        for part in parts {
            for &v in &part.vertices {
                b.add_vertex(v + offset);
            }
            for &(u, v) in &part.edges {
                b.add_edge(u + offset, v + offset);
            }
            for &(u, v, w) in &part.triangles {
                b.add_triangle(u + offset, v + offset, w + offset);
            }
            offset += part.vertices.iter().max().map_or(0, |m| m + 1);
        }
        b.build()
    }
}

/// A selection of simplices of a parent complex, stored as masks over the
/// parent's sorted simplex lists. Always interpreted relative to the complex
/// it was built from.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Subcomplex {
    pub vertex_mask: Vec<bool>,
    pub edge_mask: Vec<bool>,
    pub triangle_mask: Vec<bool>,
}

impl Subcomplex {
    pub fn empty(parent: &Complex) -> Self {
        Subcomplex {
            vertex_mask: vec![false; parent.vertex_count()],
            edge_mask: vec![false; parent.edge_count()],
            triangle_mask: vec![false; parent.triangle_count()],
        }
    }

    pub fn full(parent: &Complex) -> Self {
        Subcomplex {
            vertex_mask: vec![true; parent.vertex_count()],
            edge_mask: vec![true; parent.edge_count()],
            triangle_mask: vec![true; parent.triangle_count()],
        }
    }

    /// Induced subcomplex on the vertices selected by the predicate: an edge
    /// or triangle is kept iff all of its vertices are kept.
    pub fn induced_on_vertices(parent: &Complex, keep: impl Fn(usize) -> bool) -> Self {
        let vertex_mask: Vec<bool> = parent.vertices().iter().map(|&v| keep(v)).collect();
        let in_mask =
            |v: usize| vertex_mask[parent.vertex_index(v).expect("vertex of stored simplex")];
        let edge_mask = parent
            .edges()
            .iter()
            .map(|&(u, v)| in_mask(u) && in_mask(v))
            .collect();
        let triangle_mask = parent
            .triangles()
            .iter()
            .map(|&(u, v, w)| in_mask(u) && in_mask(v) && in_mask(w))
            .collect();
        Subcomplex {
            vertex_mask,
            edge_mask,
            triangle_mask,
        }
    }

    /// Checks that the selected simplices form a closed subcomplex and that
    /// the mask lengths match the parent.
    pub fn is_closed(&self, parent: &Complex) -> bool {
        if self.vertex_mask.len() != parent.vertex_count()
            || self.edge_mask.len() != parent.edge_count()
            || self.triangle_mask.len() != parent.triangle_count()
        {
            return false;
        }
        let vertex_on = |v: usize| self.vertex_mask[parent.vertex_index(v).unwrap()];
        for (i, &(u, v)) in parent.edges().iter().enumerate() {
            if self.edge_mask[i] && !(vertex_on(u) && vertex_on(v)) {
                return false;
            }
        }
        for (i, &(u, v, w)) in parent.triangles().iter().enumerate() {
            if self.triangle_mask[i] {
                let edge_on = |a: usize, b: usize| self.edge_mask[parent.edge_index(a, b).unwrap()];
                if !(edge_on(u, v) && edge_on(u, w) && edge_on(v, w)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_mask.iter().filter(|&&b| b).count()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_mask.iter().filter(|&&b| b).count()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangle_mask.iter().filter(|&&b| b).count()
    }

    pub fn is_subset_of(&self, other: &Subcomplex) -> bool {
        let le = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(&x, &y)| !x || y);
        le(&self.vertex_mask, &other.vertex_mask)
            && le(&self.edge_mask, &other.edge_mask)
            && le(&self.triangle_mask, &other.triangle_mask)
    }

    pub fn intersect(&self, other: &Subcomplex) -> Subcomplex {
        let and = |a: &[bool], b: &[bool]| -> Vec<bool> {
            a.iter().zip(b).map(|(&x, &y)| x && y).collect()
        };
        Subcomplex {
            vertex_mask: and(&self.vertex_mask, &other.vertex_mask),
            edge_mask: and(&self.edge_mask, &other.edge_mask),
            triangle_mask: and(&self.triangle_mask, &other.triangle_mask),
        }
    }

    /// Max simplex dimension present, `None` if the selection is empty.
    pub fn model_dimension(&self) -> Option<usize> {
        if self.triangle_mask.iter().any(|&b| b) {
            Some(2)
        } else if self.edge_mask.iter().any(|&b| b) {
            Some(1)
        } else if self.vertex_mask.iter().any(|&b| b) {
            Some(0)
        } else {
            None
        }
    }

    /// The selected simplices as a complex of their own, keeping the parent's
    /// vertex ids (and hence the parent's relative ordering).
    pub fn extract(&self, parent: &Complex) -> Complex {
        let mut b = ComplexBuilder::new();
        for (i, &v) in parent.vertices().iter().enumerate() {
            if self.vertex_mask[i] {
                b.add_vertex(v);
            }
        }
        for (i, &(u, v)) in parent.edges().iter().enumerate() {
            if self.edge_mask[i] {
                b.add_edge(u, v);
            }
        }
        for (i, &(u, v, w)) in parent.triangles().iter().enumerate() {
            if self.triangle_mask[i] {
                b.add_triangle(u, v, w);
            }
        }
        b.build()
    }

    /// Re-expresses a finer selection `inner ⊆ self` as a subcomplex of
    /// `self.extract(parent)`.
    pub fn relative_mask(&self, parent: &Complex, inner: &Subcomplex) -> Subcomplex {
        assert!(inner.is_subset_of(self), "inner selection not contained");
        let pick = |mask_outer: &[bool], mask_inner: &[bool]| -> Vec<bool> {
            mask_outer
                .iter()
                .zip(mask_inner)
                .filter(|(&o, _)| o)
                .map(|(_, &i)| i)
                .collect()
        };
        let _ = parent;
        Subcomplex {
            vertex_mask: pick(&self.vertex_mask, &inner.vertex_mask),
            edge_mask: pick(&self.edge_mask, &inner.edge_mask),
            triangle_mask: pick(&self.triangle_mask, &inner.triangle_mask),
        }
    }
}

/// The matrix of the coboundary map `δ^p : C^p -> C^{p+1}` in the standard
/// alternating-sign convention on sorted simplices.
pub fn coboundary(k: &Complex, p: usize) -> Result<QMatrix> {
    match p {
        0 => {
            let mut m = QMatrix::zeros(k.edge_count(), k.vertex_count());
            for (e, &(u, v)) in k.edges().iter().enumerate() {
                let iu = k.vertex_index(u).unwrap();
                let iv = k.vertex_index(v).unwrap();
                m.set(e, iu, -Rational::one());
                m.set(e, iv, Rational::one());
            }
            Ok(m)
        }
        1 => {
            let mut m = QMatrix::zeros(k.triangle_count(), k.edge_count());
            for (t, &(u, v, w)) in k.triangles().iter().enumerate() {
                // (δf)(u,v,w) = f(v,w) - f(u,w) + f(u,v)
                m.set(t, k.edge_index(v, w).unwrap(), Rational::one());
                m.set(t, k.edge_index(u, w).unwrap(), -Rational::one());
                m.set(t, k.edge_index(u, v).unwrap(), Rational::one());
            }
            Ok(m)
        }
        _ => Err(Error::InvalidParameter(format!(
            "coboundary degree must be 0 or 1, got {p}"
        ))),
    }
}

/// `H^p` of a complex presented as cocycles, coboundaries and a deterministic
/// representative basis for the quotient.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    degree: usize,
    cocycles: Subspace,
    coboundaries: Subspace,
    representatives: QMatrix,
}

impl CohomologySpace {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cocycles(&self) -> &Subspace {
        &self.cocycles
    }

    pub fn coboundaries(&self) -> &Subspace {
        &self.coboundaries
    }

    /// Rows are cochain-coordinate representatives of a basis of `H^p`.
    pub fn representatives(&self) -> &QMatrix {
        &self.representatives
    }

    /// `dim H^p`, the `p`-th Betti number.
    pub fn quotient_dim(&self) -> usize {
        self.representatives.rows()
    }
}

/// Computes `H^p = ker δ^p / im δ^{p-1}` for `p` in `{0, 1, 2}`.
pub fn cohomology_space(k: &Complex, p: usize) -> Result<CohomologySpace> {
    if p > 2 {
        return Err(Error::InvalidParameter(format!(
            "cohomology degree must be at most 2, got {p}"
        )));
    }
    let dim = k.cochain_dim(p);
    let cocycles = if p < 2 {
        Subspace::kernel_of(&coboundary(k, p)?)
    } else {
        Subspace::full(dim)
    };
    let coboundaries = if p == 0 {
        Subspace::zero(dim)
    } else {
        let delta = coboundary(k, p - 1)?;
        Subspace::from_spanning(&delta.transpose().row_vecs(), dim)
    };
    let representatives = crate::exactq::quotient_representatives(&cocycles, &coboundaries);
    Ok(CohomologySpace {
        degree: p,
        cocycles,
        coboundaries,
        representatives,
    })
}

fn cochain_projection(parent: &Complex, sub: &Complex, p: usize) -> QMatrix {
    let index_in_parent: Vec<usize> = match p {
        0 => sub
            .vertices()
            .iter()
            .map(|&v| parent.vertex_index(v).expect("sub vertex in parent"))
            .collect(),
        1 => sub
            .edges()
            .iter()
            .map(|&(u, v)| parent.edge_index(u, v).expect("sub edge in parent"))
            .collect(),
        2 => sub
            .triangles()
            .iter()
            .map(|&t| {
                parent
                    .triangles()
                    .binary_search(&t)
                    .expect("sub triangle in parent")
            })
            .collect(),
        _ => Vec::new(),
    };
    let mut m = QMatrix::zeros(index_in_parent.len(), parent.cochain_dim(p));
    for (r, &c) in index_in_parent.iter().enumerate() {
        m.set(r, c, Rational::one());
    }
    m
}

/// The map `H^p(K) -> H^p(L)` induced by restriction to a closed subcomplex,
/// together with its kernel in the fixed `H^p(K)` coordinates.
pub fn restriction_on_hp(k: &Complex, l: &Subcomplex, p: usize) -> Result<(QMatrix, Subspace)> {
    if !l.is_closed(k) {
        return Err(Error::NotClosed);
    }
    let sub = l.extract(k);
    let proj = cochain_projection(k, &sub, p);
    let hk = cohomology_space(k, p)?;
    let hl = cohomology_space(&sub, p)?;
    let map = induced_map_on_quotient(
        &proj,
        hk.cocycles(),
        hk.coboundaries(),
        hl.cocycles(),
        hl.coboundaries(),
    )?;
    let kernel = Subspace::kernel_of(&map);
    Ok((map, kernel))
}

/// Kernel of `H^p(K) -> H^p(L)` without constructing quotient coordinates on
/// `L`: a class dies iff its restricted representative is a coboundary of
/// `L`. Requires the precomputed `H^p(K)`; this is the path the counting
/// loops take, and it must agree with [`restriction_on_hp`] (checked by the
/// property tests).
pub fn restriction_kernel(
    k: &Complex,
    parent_space: &CohomologySpace,
    l: &Subcomplex,
) -> Result<Subspace> {
    if !l.is_closed(k) {
        return Err(Error::NotClosed);
    }
    let p = parent_space.degree();
    let h = parent_space.quotient_dim();
    if h == 0 {
        return Ok(Subspace::zero(0));
    }
    let sub = l.extract(k);
    let proj = cochain_projection(k, &sub, p);
    let dim_l = sub.cochain_dim(p);
    if dim_l == 0 {
        return Ok(Subspace::full(h));
    }
    let coboundaries_l = if p == 0 {
        Subspace::zero(dim_l)
    } else {
        let delta = coboundary(&sub, p - 1)?;
        Subspace::from_spanning(&delta.transpose().row_vecs(), dim_l)
    };
    // Solve proj(reps) x = B_L y: stack [P | B] and project the kernel onto
    // the x block.
    let images = QMatrix::from_fn(dim_l, h, |r, c| {
        proj.apply(parent_space.representatives().row(c))[r].clone()
    });
    let stacked = images.hstack(&coboundaries_l.basis().transpose());
    Ok(Subspace::kernel_of(&stacked).project_prefix(h))
}
