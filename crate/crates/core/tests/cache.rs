use num_bigint::BigUint;
use serde_json::Value;

use cglab::io::{canonical_json, read_table, table_to_json, Cache, ENGINE_VERSION};
use cglab::{Engine, Error, GroupModel, GrowthKind, GrowthTable, Mode};

fn big_table() -> GrowthTable {
    GrowthTable {
        group: "zm*zn:3,4".into(),
        kind: GrowthKind::Comm,
        mode: Mode::Cumulative,
        engine: Engine::Enumerate,
        coeffs: vec![BigUint::from(1u8), BigUint::from(u64::MAX) * 7u8, BigUint::from(10u8).pow(30)],
    }
}

#[test]
fn round_trip_beyond_u64() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let t = big_table();
    let path = cache.store(&t).unwrap();
    assert_eq!(path.file_name().unwrap(), "zm-zn-3-4_comm_cumulative.json");
    let (back, version) = cache.load(&t.group, t.kind, t.mode).unwrap().unwrap();
    assert_eq!(back, t);
    assert_eq!(version, ENGINE_VERSION);
    assert_eq!(read_table(&path).unwrap(), t);
    // no temporary files left behind
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 1);

    // a plain table file reads the same
    let plain = dir.path().join("plain.json");
    std::fs::write(&plain, canonical_json(&table_to_json(&t))).unwrap();
    assert_eq!(read_table(&plain).unwrap(), t);
    assert!(cache.load("free:2", GrowthKind::Conj, Mode::Strict).unwrap().is_none());
}

#[test]
fn reuse_only_on_exact_match() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let g = GroupModel::free(2).unwrap();
    let (t, hit) = cache.get_or_compute(&g, GrowthKind::Pconj, Mode::Strict, 9, Engine::Formula).unwrap();
    assert!(!hit);
    let (again, hit) = cache.get_or_compute(&g, GrowthKind::Pconj, Mode::Strict, 9, Engine::Formula).unwrap();
    assert!(hit);
    assert_eq!(again, t);
    let (other, hit) = cache.get_or_compute(&g, GrowthKind::Pconj, Mode::Strict, 10, Engine::Formula).unwrap();
    assert!(!hit);
    assert_eq!(other.coeffs[..10], t.coeffs[..]);
    let (_, hit) = cache.get_or_compute(&g, GrowthKind::Pconj, Mode::Strict, 10, Engine::Enumerate).unwrap();
    assert!(!hit);

    // an entry from another engine version is recomputed, not trusted
    let path = cache.path_for("free:2", GrowthKind::Pconj, Mode::Strict);
    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    file["body"]["engine_version"] = "cglab-0.0.0/growth-0".into();
    file["body"]["table"]["coeffs"][3] = "999".into();
    let body = file["body"].clone();
    file["checksum"] = sha_hex(&canonical_json(&body)).into();
    std::fs::write(&path, canonical_json(&file)).unwrap();
    let (fresh, hit) = cache.get_or_compute(&g, GrowthKind::Pconj, Mode::Strict, 10, Engine::Enumerate).unwrap();
    assert!(!hit);
    assert_eq!(fresh.coeffs, other.coeffs);
}

#[test]
fn corruption_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let t = big_table();
    let path = cache.store(&t).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replace("1000000000000000000000000000000", "1000000000000000000000000000001")).unwrap();
    assert!(matches!(cache.load(&t.group, t.kind, t.mode), Err(Error::Checksum { .. })));
    assert!(matches!(read_table(&path), Err(Error::Checksum { .. })));
    std::fs::write(&path, "{ not json").unwrap();
    assert!(matches!(cache.load(&t.group, t.kind, t.mode), Err(Error::Checksum { .. })));
}

fn sha_hex(s: &str) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(s.as_bytes()))
}
