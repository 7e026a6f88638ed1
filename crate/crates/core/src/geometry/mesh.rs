use std::collections::HashSet;

use crate::error::{Error, Result};

/// A finite cell complex given by explicit boundary incidences: cell `c` of
/// dimension `k` lists the indices of its `(k−1)`-dimensional faces.
#[derive(Clone, Debug, Default)]
pub struct SimplicialMesh {
    /// `cells[k][c]` = face indices into `cells[k − 1]`; vertices have none.
    pub cells: Vec<Vec<Vec<usize>>>,
}

impl SimplicialMesh {
    /// Builds the complex from top simplices given by vertex lists; every
    /// face is generated and deduplicated.
    pub fn from_simplices(top: &[Vec<usize>]) -> Result<Self> {
        let dim = top.first().map_or(0, |s| s.len() - 1);
        if top.iter().any(|s| s.len() != dim + 1) {
            return Err(Error::Config("simplices of mixed dimension".into()));
        }
        // layer k holds sorted vertex sets of k-simplices
        let mut layers: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
        let mut seen: Vec<HashSet<Vec<usize>>> = vec![HashSet::new(); dim + 1];
        for s in top {
            let mut s = s.clone();
            s.sort_unstable();
            let n = s.len();
            for mask in 1u32..(1 << n) {
                let sub: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
                let k = sub.len() - 1;
                if seen[k].insert(sub.clone()) {
                    layers[k].push(sub);
                }
            }
        }
        for layer in &mut layers {
            layer.sort();
        }
        let cells = (0..=dim)
            .map(|k| {
                layers[k]
                    .iter()
                    .map(|s| {
                        if k == 0 {
                            return Vec::new();
                        }
                        (0..s.len())
                            .map(|drop| {
                                let mut f = s.clone();
                                f.remove(drop);
                                layers[k - 1].binary_search(&f).expect("face generated")
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(SimplicialMesh { cells })
    }

    /// Boundary of the octahedron: 6 vertices, 12 edges, 8 triangles.
    pub fn octahedron() -> Self {
        // vertices ±e1 = 0/1, ±e2 = 2/3, ±e3 = 4/5
        let mut top = Vec::new();
        for a in [0, 1] {
            for b in [2, 3] {
                for c in [4, 5] {
                    top.push(vec![a, b, c]);
                }
            }
        }
        Self::from_simplices(&top).expect("octahedron")
    }

    /// The 3×3 grid triangulation of the torus (9 vertices, 27 edges,
    /// 18 triangles).
    pub fn torus() -> Self {
        let v = |i: usize, j: usize| 3 * (i % 3) + (j % 3);
        let mut top = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                top.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
                top.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
            }
        }
        Self::from_simplices(&top).expect("torus")
    }

    /// Product cell structure: cells are pairs `(σ, τ)` with boundary
    /// `∂σ × τ ∪ σ × ∂τ`.
    pub fn product(a: &Self, b: &Self) -> Self {
        let da = a.cells.len();
        let db = b.cells.len();
        let dim = da + db - 2;
        // index of (k-cell of a, l-cell of b) within the (k+l)-layer
        let mut index = vec![vec![Vec::new(); db]; da];
        let mut cells: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
        for k in 0..da {
            for l in 0..db {
                index[k][l] = (0..a.cells[k].len() * b.cells[l].len())
                    .map(|i| cells[k + l].len() + i)
                    .collect();
                cells[k + l].extend((0..a.cells[k].len() * b.cells[l].len()).map(|_| Vec::new()));
            }
        }
        for k in 0..da {
            for l in 0..db {
                let nb = b.cells[l].len();
                for (s, sf) in a.cells[k].iter().enumerate() {
                    for (t, tf) in b.cells[l].iter().enumerate() {
                        let mut faces = Vec::new();
                        if k > 0 {
                            faces.extend(sf.iter().map(|&f| index[k - 1][l][f * nb + t]));
                        }
                        if l > 0 {
                            let nb_lower = b.cells[l - 1].len();
                            faces.extend(tf.iter().map(|&g| index[k][l - 1][s * nb_lower + g]));
                        }
                        cells[k + l][index[k][l][s * nb + t]] = faces;
                    }
                }
            }
        }
        SimplicialMesh { cells }
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// Every face reference must point at an existing lower cell, and
    /// vertices carry no faces.
    pub fn validate(&self) -> Result<()> {
        for (k, layer) in self.cells.iter().enumerate() {
            for (c, faces) in layer.iter().enumerate() {
                if k == 0 && !faces.is_empty() {
                    return Err(Error::Config(format!("vertex {c} lists faces")));
                }
                if k > 0 && faces.is_empty() {
                    return Err(Error::Config(format!("{k}-cell {c} has no faces")));
                }
                if k > 0 && faces.iter().any(|&f| f >= self.cells[k - 1].len()) {
                    return Err(Error::Config(format!("{k}-cell {c} cites a missing face")));
                }
            }
        }
        Ok(())
    }
}

/// Alternating sum of cell counts after checking incidence data.
pub fn euler_char_oracle(mesh: &SimplicialMesh) -> Result<i64> {
    mesh.validate()?;
    Ok(mesh
        .counts()
        .iter()
        .enumerate()
        .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum())
}
