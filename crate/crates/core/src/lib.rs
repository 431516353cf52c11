//! Two-handed abstract tile assembly: model types, τ-stability via global
//! min-cut, combination sets, bounded producibility exploration, and the
//! fuzzy-temperature fault-tolerance verifier, plus generators and the text
//! formats used by the command line.

// Supertiles are used as map keys throughout; their hash and equality read
// only the immutable canonical assembly, never the memoized caches behind
// the shared pointer.
#![allow(clippy::mutable_key_type)]

pub mod combine;
pub mod constructions;
pub mod explore;
pub mod fuzzy;
pub mod model;
pub mod render;
pub mod stability;
pub mod tdsl;

pub use combine::{combinations, combinations_by_window_scan, has_combination, Attachment};
pub use explore::{
    explore, strictly_self_assembles, terminals, witness_sequence, ExploreConfig, ExploreError,
    ExploreReport, ProducibleSet, Trace,
};
pub use fuzzy::{compute_sets, fuzzy_check, grow_closure, FuzzyReport, FuzzySets, Verdict};
pub use model::{
    canonicalize, translate, union_disjoint, Assembly, Direction, Glue, ModelError, Offset, Point,
    Supertile, Temperature, TileIx, TileSet, TileType,
};
pub use stability::{
    binding_graph, interface_strength, is_stable, stable_union, BindingGraph, StabilityError,
};
