//! JSON serialization of generated instances.
//!
//! The on-disk format is versioned as `vcdlab-instance/1`: rationals are
//! strings of the form `p/q` (or `p` for integers), complexes are explicit
//! simplex lists, and named subcomplexes are boolean masks over the parent's
//! sorted simplex order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GridInstance, HyperplaneFamily, PencilInstance};
use crate::cohomology::{Complex, Subcomplex};
use crate::exactq::Rational;
use crate::{Error, Result};

pub const INSTANCE_SCHEMA: &str = "vcdlab-instance/1";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexData {
    pub vertices: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

impl From<&Complex> for ComplexData {
    fn from(k: &Complex) -> Self {
        ComplexData {
            vertices: k.vertices().to_vec(),
            edges: k.edges().iter().map(|&(u, v)| [u, v]).collect(),
            triangles: k.triangles().iter().map(|&(u, v, w)| [u, v, w]).collect(),
        }
    }
}

impl ComplexData {
    pub fn to_complex(&self) -> Result<Complex> {
        Complex::from_parts(
            self.vertices.clone(),
            self.edges.iter().map(|e| (e[0], e[1])).collect(),
            self.triangles.iter().map(|t| (t[0], t[1], t[2])).collect(),
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaskData {
    pub vertices: Vec<bool>,
    pub edges: Vec<bool>,
    pub triangles: Vec<bool>,
}

impl From<&Subcomplex> for MaskData {
    fn from(s: &Subcomplex) -> Self {
        MaskData {
            vertices: s.vertex_mask.clone(),
            edges: s.edge_mask.clone(),
            triangles: s.triangle_mask.clone(),
        }
    }
}

impl MaskData {
    pub fn to_subcomplex(&self, parent: &Complex) -> Result<Subcomplex> {
        let s = Subcomplex {
            vertex_mask: self.vertices.clone(),
            edge_mask: self.edges.clone(),
            triangle_mask: self.triangles.clone(),
        };
        if !s.is_closed(parent) {
            return Err(Error::InvalidInstance(
                "mask is not a closed subcomplex".into(),
            ));
        }
        Ok(s)
    }
}

/// Envelope for every serialized instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: String,
    #[serde(flatten)]
    pub payload: InstancePayload,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstancePayload {
    Hyperplanes {
        m: usize,
        seed: u64,
        hyperplanes: Vec<Vec<Rational>>,
    },
    Grid {
        n: usize,
        sweep_normal: [Rational; 2],
        complex: ComplexData,
        /// Sweep value per vertex, in the complex's vertex order.
        vertex_values: Vec<Rational>,
        critical_values: Vec<Rational>,
    },
    Pencil {
        n: usize,
        seed: u64,
        base_lines: Vec<Vec<Rational>>,
        companion_lines: Vec<Vec<Rational>>,
        complex: ComplexData,
        subcomplexes: BTreeMap<String, MaskData>,
    },
}

impl InstanceFile {
    pub fn new(payload: InstancePayload) -> Self {
        InstanceFile {
            schema: INSTANCE_SCHEMA.to_string(),
            payload,
        }
    }

    pub fn from_hyperplanes(f: &HyperplaneFamily) -> Self {
        InstanceFile::new(InstancePayload::Hyperplanes {
            m: f.projective_dim(),
            seed: f.seed(),
            hyperplanes: f.coefficients().to_vec(),
        })
    }

    pub fn from_grid(g: &GridInstance) -> Self {
        InstanceFile::new(InstancePayload::Grid {
            n: g.n(),
            sweep_normal: [g.sweep_normal().0.clone(), g.sweep_normal().1.clone()],
            complex: ComplexData::from(g.complex()),
            vertex_values: g.vertex_values().to_vec(),
            critical_values: g.critical_values().to_vec(),
        })
    }

    pub fn from_pencil(p: &PencilInstance) -> Self {
        let subcomplexes = p
            .fibers()
            .iter()
            .map(|(t, s)| (t.label(), MaskData::from(s)))
            .collect();
        InstanceFile::new(InstancePayload::Pencil {
            n: p.n(),
            seed: p.seed(),
            base_lines: p.base_lines().to_vec(),
            companion_lines: p.companion_lines().to_vec(),
            complex: ComplexData::from(p.incidence_graph()),
            subcomplexes,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serialization");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInstance(format!("bad instance JSON: {e}")))?;
        if file.schema != INSTANCE_SCHEMA {
            return Err(Error::InvalidInstance(format!(
                "unsupported schema {:?}, expected {INSTANCE_SCHEMA:?}",
                file.schema
            )));
        }
        Ok(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangements::{gen_generic_hyperplanes, gen_pencil_instance};

    #[test]
    fn grid_round_trips() {
        let g = GridInstance::generate(3).unwrap();
        let json = InstanceFile::from_grid(&g).to_json();
        let back = InstanceFile::from_json(&json).unwrap();
        match back.payload {
            InstancePayload::Grid {
                n,
                complex,
                critical_values,
                ..
            } => {
                assert_eq!(n, 3);
                assert_eq!(complex.to_complex().unwrap(), *g.complex());
                assert_eq!(critical_values, g.critical_values());
            }
            _ => panic!("wrong payload kind"),
        }
    }

    #[test]
    fn pencil_masks_stay_closed() {
        let p = gen_pencil_instance(3, 4).unwrap();
        let json = InstanceFile::from_pencil(&p).to_json();
        let back = InstanceFile::from_json(&json).unwrap();
        match back.payload {
            InstancePayload::Pencil {
                complex,
                subcomplexes,
                ..
            } => {
                let k = complex.to_complex().unwrap();
                assert_eq!(subcomplexes.len(), 3 + 1);
                for mask in subcomplexes.values() {
                    mask.to_subcomplex(&k).unwrap();
                }
            }
            _ => panic!("wrong payload kind"),
        }
    }

    #[test]
    fn schema_version_is_checked() {
        let f = gen_generic_hyperplanes(2, 3, 1).unwrap();
        let mut json = InstanceFile::from_hyperplanes(&f).to_json();
        json = json.replace("vcdlab-instance/1", "vcdlab-instance/9");
        assert!(InstanceFile::from_json(&json).is_err());
    }
}
