//! Connections, bundle maps, the deformed connection and the characteristic
//! forms built from them.

pub mod chern;
pub mod connection;
pub mod deformed;
pub mod degree;
pub mod map;
pub mod transgression;

pub use chern::{chern_character, chern_character_form, chern_constant, chern_top, euler_form, graded_chern_top, top_part};
pub use connection::{
    Connection, ConnectionJet, ExteriorConnection, FlatConnection, FnConnection, Half, LeviCivita,
    SphereLineConnection,
};
pub use deformed::{
    AsConnection, BlockConnection, ConstantTruncation, DeformedConnection, DeformedPoint, GradedConnection, Pullback,
    GradedJet, TruncationField, TruncationProfile,
};
pub use degree::{degree_at_zero, degree_value};
pub use map::{BundleMap, FieldJet, FnMap, MapJet, SymbolMap, VectorFieldPair};
pub use transgression::{beta_coefficient, transgression_form, transgression_value};
