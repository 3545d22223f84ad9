//! Fixtures, generators and a reference evaluator shared by integration tests.
#![allow(dead_code)]

pub mod gen;
pub mod reference;

use std::path::PathBuf;

use bocl_core::io::{load_objects, load_structural};
use bocl_core::model::{ObjectModel, StructuralModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn corpus(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file)
}

pub fn library_model() -> StructuralModel {
    load_structural(corpus("library.model.json")).expect("corpus model loads").value
}

pub fn library_objects(model: &StructuralModel) -> ObjectModel {
    load_objects(corpus("library.objects.json"), model).expect("corpus objects load").value
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
