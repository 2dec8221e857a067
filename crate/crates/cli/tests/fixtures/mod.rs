//! Test-only catalog entries. The corrupted instance is `lin-sym-O(2)`
//! registered with the wrong covering degree, so every fiber check on it must fail.

#![allow(dead_code)]

use std::path::PathBuf;

use weylcover::registry::Catalog;

pub const CORRUPT_ID: &str = "corrupt-lin-sym-O(2)";

pub fn corrupted_catalog() -> Catalog {
    let mut catalog = Catalog::builtin();
    let base = catalog.lookup("lin-sym-O(2)").expect("builtin entry").clone();
    catalog.push(base.with_expected_degree(CORRUPT_ID, 3));
    catalog
}

pub fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}
