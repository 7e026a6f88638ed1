//! Scenario manifolds as chart atlases: partition of unity, product
//! quadrature, coordinate spheres for degree integrals, and a cell-count
//! Euler characteristic oracle.

mod atlas;
mod integrate;
pub mod manifold;
mod mesh;
mod sphere;

pub use atlas::{Atlas, ChartGrid};
pub use integrate::{integrate_density, integrate_many, integrate_region, integrate_top_form};
pub use manifold::ManifoldId;
pub use mesh::{euler_char_oracle, SimplicialMesh};
pub use sphere::{integrate_boundary_sphere, omit_axis, BoundarySphere};

/// Oracle triangulation matching a scenario manifold.
pub fn oracle_mesh(m: ManifoldId) -> SimplicialMesh {
    match m {
        ManifoldId::S2 => SimplicialMesh::octahedron(),
        ManifoldId::T2 => SimplicialMesh::torus(),
        ManifoldId::S2xS2 => {
            let o = SimplicialMesh::octahedron();
            SimplicialMesh::product(&o, &o)
        }
    }
}
