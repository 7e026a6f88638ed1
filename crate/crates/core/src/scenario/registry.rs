use super::config::{ComponentSpec, Expected, ScenarioConfig, SectionSpec, Tolerances};
use crate::error::{Error, Result};
use crate::geometry::ManifoldId;
use crate::localization::Locus;

/// Built-in scenario names, sorted.
pub const SCENARIOS: [&str; 5] =
    ["s2_corollary1", "s2_rotation_isolated", "s2xs2_nonisolated", "t2_nonvanishing", "t2_oriented_frame"];

fn point(name: &str, home: usize) -> ComponentSpec {
    ComponentSpec { name: name.into(), locus: Locus::Point, home, center: vec![0.0, 0.0] }
}

fn slice(name: &str, home: usize) -> ComponentSpec {
    ComponentSpec { name: name.into(), locus: Locus::Slice, home, center: vec![0.0, 0.0] }
}

fn expect(quantity: &str, value: f64, source: &str) -> Expected {
    Expected { quantity: quantity.into(), value, source: source.into() }
}

fn base(name: &str, summary: &str, manifold: ManifoldId, resolution: usize, section: SectionSpec) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        summary: summary.into(),
        manifold,
        n: manifold.dim() / 2,
        resolution,
        tube_radius: 0.8,
        truncation: [0.4, 0.72],
        tolerances: Tolerances::for_manifold(manifold),
        section,
        components: vec![],
        expected: vec![],
        seed: 20_240_601,
    }
}

/// Loads a built-in scenario by name.
pub fn builtin(name: &str) -> Result<ScenarioConfig> {
    let mut c = match name {
        "s2_corollary1" => {
            let mut c = base(
                name,
                "section of the degree-one line bundle on S², one zero at the south pole",
                ManifoldId::S2,
                96,
                SectionSpec::LineSection,
            );
            c.components = vec![point("south", 1)];
            c.expected = vec![
                expect("global graded character", -1.0, "first Chern number of the line bundle"),
                expect("local degree", 1.0, "winding of z at the origin"),
            ];
            c
        }
        "s2_rotation_isolated" => {
            let mut c = base(
                name,
                "rotation field on S², isolated zeros at both poles",
                ManifoldId::S2,
                96,
                SectionSpec::Rotation,
            );
            c.components = vec![point("north", 0), point("south", 1)];
            c.expected = vec![
                expect("euler characteristic", 2.0, "octahedron cell counts"),
                expect("global graded character", -4.0, "(-2)^n times the euler characteristic"),
            ];
            c
        }
        "s2xs2_nonisolated" => {
            let mut c = base(
                name,
                "rotation of the second factor on S²×S², zero set two copies of S²",
                ManifoldId::S2xS2,
                24,
                SectionSpec::Rotation,
            );
            c.components = vec![slice("S2 x north", 0), slice("S2 x south", 1)];
            c.expected = vec![
                expect("euler characteristic", 4.0, "product octahedron cell counts"),
                expect("global graded character", 16.0, "(-2)^n times the euler characteristic"),
            ];
            c
        }
        "t2_nonvanishing" => {
            let mut c = base(
                name,
                "constant nonvanishing ξ on the flat torus, η = 0",
                ManifoldId::T2,
                32,
                SectionSpec::ConstantFrame { xi: vec![1.0, 0.0], eta: vec![0.0, 0.0] },
            );
            c.expected = vec![expect("euler characteristic", 0.0, "torus cell counts")];
            c
        }
        "t2_oriented_frame" => {
            let mut c = base(
                name,
                "oriented orthonormal frame on the flat torus: h ≡ 0 yet v_K invertible",
                ManifoldId::T2,
                32,
                SectionSpec::ConstantFrame { xi: vec![1.0, 0.0], eta: vec![0.0, 1.0] },
            );
            c.expected = vec![expect("euler characteristic", 0.0, "torus cell counts")];
            c
        }
        _ => return Err(Error::UnknownScenario(name.to_string())),
    };
    c.name = name.to_string();
    Ok(c)
}

/// `(name, summary)` for every built-in scenario, sorted by name.
pub fn list_scenarios() -> Vec<(String, String)> {
    SCENARIOS
        .iter()
        .map(|n| {
            let c = builtin(n).expect("built-in scenario");
            (c.name, c.summary)
        })
        .collect()
}
