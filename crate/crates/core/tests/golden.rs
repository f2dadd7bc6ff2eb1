//! Generator sets against the JSON snapshots shipped in `tests/golden`.

use std::path::Path;

use serde_json::Value;
use subregw::wgen::{Family, GeneratorSet};
use subregw::{Engine, KMode};

fn check(file: &str, n: usize, k: KMode) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(file);
    let text = std::fs::read_to_string(&path).unwrap();
    let golden: Value = serde_json::from_str(&text).unwrap();
    let e = Engine::new(n, k.clone()).unwrap();
    let built = GeneratorSet::build(&e, &Family::defaults(&k)).unwrap();
    assert_eq!(built.to_json(), golden, "{file}");
    let parsed = GeneratorSet::from_json(&golden).unwrap();
    for name in ["E", "H", "F", "W2"] {
        assert_eq!(parsed.get(name), built.get(name), "{file}: {name}");
    }
}

#[test]
fn n2_symbolic() {
    check("generators_n2_symbolic.json", 2, KMode::Symbolic);
}

#[test]
fn n3_symbolic() {
    check("generators_n3_symbolic.json", 3, KMode::Symbolic);
}

#[test]
fn n2_critical() {
    check("generators_n2_k0.json", 2, KMode::at_int(0));
}

#[test]
fn n3_critical() {
    check("generators_n3_k0.json", 3, KMode::at_int(0));
}
