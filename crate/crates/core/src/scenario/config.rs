use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bundle::{BlockConnection, FlatConnection, SphereLineConnection, TruncationProfile, VectorFieldPair};
use crate::error::{Error, Result};
use crate::geometry::{Atlas, ManifoldId};
use crate::localization::verify::INJECTIVITY_BOUND;
use crate::localization::{ConstantFrame, LineSection, Locus, Problem, RotationField, Tubes, ZeroComponent};

/// Smallest accepted grid resolution per axis.
pub const MIN_RESOLUTION: usize = 16;

/// The section defining the bundle map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SectionSpec {
    /// Rotation about the polar axis (second factor on S²×S²), `η = 0`.
    Rotation,
    /// Constant orthonormal-frame components on T².
    ConstantFrame { xi: Vec<f64>, eta: Vec<f64> },
    /// A section of the degree-one line bundle on S², as a map from the
    /// trivial line bundle.
    LineSection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub name: String,
    pub locus: Locus,
    pub home: usize,
    pub center: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tube_localization: f64,
    pub complement_vanishing: f64,
    pub localized_pairings: f64,
    pub degree_sum: f64,
    pub exterior_algebra_character: f64,
    pub euler_characteristic_recovery: f64,
    pub transgression: f64,
    pub gauss_bonnet: f64,
    pub normal_euler_identity: f64,
}

impl Tolerances {
    pub fn for_manifold(m: ManifoldId) -> Self {
        let (tube, exterior, chi, gb) = match m {
            ManifoldId::S2 => (1e-2, 2e-2, 2e-2, 1e-3),
            ManifoldId::T2 => (1e-2, 1e-6, 1e-6, 1e-6),
            ManifoldId::S2xS2 => (5e-2, 0.5, 0.25, 5e-2),
        };
        Tolerances {
            tube_localization: tube,
            complement_vanishing: 1e-8,
            localized_pairings: tube,
            degree_sum: 1e-2,
            exterior_algebra_character: exterior,
            euler_characteristic_recovery: chi,
            transgression: 1e-4,
            gauss_bonnet: gb,
            normal_euler_identity: 5e-2,
        }
    }

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "tube_localization" => &mut self.tube_localization,
            "complement_vanishing" => &mut self.complement_vanishing,
            "localized_pairings" => &mut self.localized_pairings,
            "degree_sum" => &mut self.degree_sum,
            "exterior_algebra_character" => &mut self.exterior_algebra_character,
            "euler_characteristic_recovery" => &mut self.euler_characteristic_recovery,
            "transgression" => &mut self.transgression,
            "gauss_bonnet" => &mut self.gauss_bonnet,
            "normal_euler_identity" => &mut self.normal_euler_identity,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = self.slot(name).ok_or_else(|| Error::Config(format!("tolerances: unknown check `{name}`")))?;
        *slot = value;
        Ok(())
    }

    pub fn set_all(&mut self, value: f64) {
        let names = [
            "tube_localization",
            "complement_vanishing",
            "localized_pairings",
            "degree_sum",
            "exterior_algebra_character",
            "euler_characteristic_recovery",
            "transgression",
            "gauss_bonnet",
            "normal_euler_identity",
        ];
        for n in names {
            *self.slot(n).expect("known name") = value;
        }
    }
}

/// An expected value and where it comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub quantity: String,
    pub value: f64,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub summary: String,
    pub manifold: ManifoldId,
    pub n: usize,
    pub resolution: usize,
    pub tube_radius: f64,
    pub truncation: [f64; 2],
    pub tolerances: Tolerances,
    pub section: SectionSpec,
    pub components: Vec<ComponentSpec>,
    pub expected: Vec<Expected>,
    pub seed: u64,
}

/// Partial override read from a JSON file.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverride {
    pub resolution: Option<usize>,
    pub tube_radius: Option<f64>,
    pub truncation: Option<[f64; 2]>,
    pub tolerance: Option<f64>,
    pub tolerances: Option<BTreeMap<String, f64>>,
    pub section: Option<SectionSpec>,
    pub components: Option<Vec<ComponentSpec>>,
    pub seed: Option<u64>,
}

impl ScenarioConfig {
    pub fn apply(&mut self, o: ConfigOverride) -> Result<()> {
        if let Some(r) = o.resolution {
            self.resolution = r;
        }
        if let Some(r) = o.tube_radius {
            // truncation radii follow the tube unless given explicitly
            let scale = r / self.tube_radius;
            self.truncation = self.truncation.map(|t| t * scale);
            self.tube_radius = r;
        }
        if let Some(t) = o.truncation {
            self.truncation = t;
        }
        if let Some(t) = o.tolerance {
            self.tolerances.set_all(t);
        }
        for (k, v) in o.tolerances.unwrap_or_default() {
            self.tolerances.set(&k, v)?;
        }
        if let Some(s) = o.section {
            self.section = s;
        }
        if let Some(c) = o.components {
            self.components = c;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let err = |field: &str, msg: String| Err(Error::Config(format!("{field}: {msg}")));
        if self.n * 2 != self.manifold.dim() {
            return err("n", format!("{} does not match a manifold of dimension {}", self.n, self.manifold.dim()));
        }
        if self.resolution < MIN_RESOLUTION {
            return err("resolution", format!("must be at least {MIN_RESOLUTION}, got {}", self.resolution));
        }
        let [a, b] = self.truncation;
        if !(0.0 < a && a < b && b <= self.tube_radius) {
            return err("truncation", format!("need 0 < a < b ≤ tube radius, got ({a}, {b}) with radius {}", self.tube_radius));
        }
        if !(self.tube_radius < INJECTIVITY_BOUND) {
            return err("tube_radius", format!("{} is not below the injectivity bound {INJECTIVITY_BOUND}", self.tube_radius));
        }
        let t = &self.tolerances;
        for v in [
            t.tube_localization,
            t.complement_vanishing,
            t.localized_pairings,
            t.degree_sum,
            t.exterior_algebra_character,
            t.euler_characteristic_recovery,
            t.transgression,
            t.gauss_bonnet,
            t.normal_euler_identity,
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return err("tolerances", format!("{v} is not a finite non-negative number"));
            }
        }
        match (&self.section, self.manifold) {
            (SectionSpec::Rotation, ManifoldId::S2 | ManifoldId::S2xS2) => {}
            (SectionSpec::ConstantFrame { xi, eta }, ManifoldId::T2) if xi.len() == 2 && eta.len() == 2 => {}
            (SectionSpec::LineSection, ManifoldId::S2) => {}
            (s, m) => return err("section", format!("{s:?} cannot be resolved on {m:?}")),
        }
        for c in &self.components {
            let ok = match c.locus {
                Locus::Point => c.center.len() == self.manifold.dim() && c.home < self.manifold.chart_count(),
                Locus::Slice => self.manifold == ManifoldId::S2xS2 && c.center.len() == 2 && c.home < 2,
            };
            if !ok {
                return err("components", format!("`{}` does not fit {:?}", c.name, self.manifold));
            }
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<TruncationProfile> {
        TruncationProfile::new(self.truncation[0], self.truncation[1])
    }

    pub fn zero_components(&self) -> Vec<ZeroComponent> {
        self.components
            .iter()
            .map(|c| ZeroComponent {
                name: c.name.clone(),
                locus: c.locus,
                home: c.home,
                center: c.center.clone(),
                tube_radius: self.tube_radius,
            })
            .collect()
    }

    /// Validates and assembles the bundle, map and tubes.
    pub fn build(&self) -> Result<Problem> {
        self.validate()?;
        let atlas = Atlas::new(self.manifold, self.resolution)?;
        let tubes = Tubes::new(self.manifold, self.zero_components(), self.profile()?, INJECTIVITY_BOUND)?;
        match &self.section {
            SectionSpec::Rotation => {
                let field: Arc<dyn VectorFieldPair> = Arc::new(RotationField { manifold: self.manifold });
                Problem::signature(atlas, field, tubes)
            }
            SectionSpec::ConstantFrame { xi, eta } => {
                let field: Arc<dyn VectorFieldPair> = Arc::new(ConstantFrame { xi: xi.clone(), eta: eta.clone() });
                Problem::signature(atlas, field, tubes)
            }
            SectionSpec::LineSection => {
                let block = BlockConnection::new(
                    Arc::new(FlatConnection { dim: 2, rank: 1 }),
                    Arc::new(SphereLineConnection { power: 1 }),
                )?;
                Problem::new(atlas, block, Arc::new(LineSection), tubes)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::builtin;

    #[test]
    fn tube_override_carries_truncation_along() {
        let mut c = builtin("s2_rotation_isolated").unwrap();
        c.apply(ConfigOverride { tube_radius: Some(0.6), ..Default::default() }).unwrap();
        assert!((c.truncation[0] - 0.3).abs() < 1e-12 && (c.truncation[1] - 0.54).abs() < 1e-12);
        c.apply(ConfigOverride { tube_radius: Some(0.7), truncation: Some([0.2, 0.5]), ..Default::default() })
            .unwrap();
        assert_eq!(c.truncation, [0.2, 0.5]);
        c.validate().unwrap();
    }

    #[test]
    fn validation_names_the_field() {
        let mut c = builtin("t2_nonvanishing").unwrap();
        c.resolution = 8;
        assert!(matches!(c.validate(), Err(Error::Config(m)) if m.starts_with("resolution")));
        let mut c = builtin("s2_corollary1").unwrap();
        c.truncation = [0.5, 0.9];
        assert!(matches!(c.validate(), Err(Error::Config(m)) if m.starts_with("truncation")));
        let mut c = builtin("s2_corollary1").unwrap();
        assert!(c.apply(ConfigOverride { tolerances: Some([("bogus".to_string(), 1.0)].into()), ..Default::default() }).is_err());
        let o: std::result::Result<ConfigOverride, _> = serde_json::from_str(r#"{"resolutoin": 32}"#);
        assert!(o.is_err());
    }
}
