//! Table serialization and the on-disk series cache.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::GroupModel;
use crate::growth::{count_growth, Engine, GrowthKind, GrowthTable, Mode};

pub const SCHEMA: u64 = 1;

/// Bumped whenever a counting algorithm changes; stale cache entries are ignored.
pub const ENGINE_VERSION: &str = concat!("cglab-", env!("CARGO_PKG_VERSION"), "/growth-1");

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "CGLAB_CACHE";

/// `{schema, group, kind, mode, engine, coeffs}` with coefficients as decimal strings.
pub fn table_to_json(t: &GrowthTable) -> Value {
    json!({
        "schema": SCHEMA,
        "group": t.group,
        "kind": t.kind.to_string(),
        "mode": t.mode.to_string(),
        "engine": t.engine.to_string(),
        "coeffs": t.coeffs.iter().map(|c| c.to_str_radix(10)).collect::<Vec<_>>(),
    })
}

pub fn table_from_json(v: &Value) -> Result<GrowthTable> {
    let field = |k: &str| v.get(k).ok_or_else(|| Error::Malformed(format!("table is missing {k:?}")));
    let text = |k: &str| -> Result<&str> {
        field(k)?.as_str().ok_or_else(|| Error::Malformed(format!("{k:?} must be a string")))
    };
    match field("schema")?.as_u64() {
        Some(SCHEMA) => {}
        other => return Err(Error::Malformed(format!("unsupported table schema {other:?}"))),
    }
    let group = text("group")?;
    group.parse::<GroupModel>()?;
    let coeffs = field("coeffs")?
        .as_array()
        .ok_or_else(|| Error::Malformed("\"coeffs\" must be an array".into()))?
        .iter()
        .map(|c| {
            c.as_str()
                .and_then(|s| BigUint::parse_bytes(s.as_bytes(), 10))
                .ok_or_else(|| Error::Malformed(format!("bad coefficient {c}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GrowthTable {
        group: group.to_string(),
        kind: text("kind")?.parse()?,
        mode: text("mode")?.parse()?,
        engine: text("engine")?.parse()?,
        coeffs,
    })
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_json(v: &Value) -> String {
    // serde_json's default map is ordered by key
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// One `n,value` row per coefficient.
pub fn table_csv(t: &GrowthTable) -> String {
    t.coeffs.iter().enumerate().map(|(n, c)| format!("{n},{c}\n")).collect()
}

/// Float formatting shared by every report: 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.') } else { &s };
        s.to_string()
    } else {
        format!("{x:.11e}")
    }
}

/// Round every float in a JSON value to 12 significant digits.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x: f64 = fmt_float(n.as_f64().unwrap_or(f64::NAN)).parse().unwrap_or(f64::NAN);
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        v => v,
    }
}

/// A table file, or a cache entry (checked against its checksum).
pub fn read_table(path: &Path) -> Result<GrowthTable> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    if v.get("body").is_some() {
        let body = verified_body(&v).ok_or_else(|| Error::Checksum { path: path.into() })?;
        return table_from_json(body.get("table").unwrap_or(&Value::Null));
    }
    table_from_json(&v)
}

fn verified_body(file: &Value) -> Option<&Value> {
    let sum = file.get("checksum")?.as_str()?;
    let body = file.get("body")?;
    (Cache::checksum(body) == sum).then_some(body)
}

/// Write through a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |source| Error::Io { path: path.into(), source };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents).map_err(|source| Error::Io { path: tmp.clone(), source })?;
    fs::rename(&tmp, path).map_err(io)
}

/// Directory of cached growth tables, one file per (group, kind, mode).
#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The cache named by `CGLAB_CACHE`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()).map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, group: &str, kind: GrowthKind, mode: Mode) -> PathBuf {
        let g: String = group.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '-' }).collect();
        self.dir.join(format!("{g}_{kind}_{mode}.json"))
    }

    fn checksum(body: &Value) -> String {
        hex::encode(Sha256::digest(canonical_json(body).as_bytes()))
    }

    pub fn store(&self, t: &GrowthTable) -> Result<PathBuf> {
        let body = json!({
            "engine_version": ENGINE_VERSION,
            "n_max": t.n_max(),
            "table": table_to_json(t),
        });
        let file = json!({ "schema": SCHEMA, "checksum": Self::checksum(&body), "body": body });
        let path = self.path_for(&t.group, t.kind, t.mode);
        write_atomic(&path, &canonical_json(&file))?;
        Ok(path)
    }

    /// The stored table for (group, kind, mode), verified against its checksum.
    /// Also returns the engine version it was written with.
    pub fn load(&self, group: &str, kind: GrowthKind, mode: Mode) -> Result<Option<(GrowthTable, String)>> {
        let path = self.path_for(group, kind, mode);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(Error::Io { path, source }),
        };
        let bad = || Error::Checksum { path: path.clone() };
        let file: Value = serde_json::from_str(&text).map_err(|_| bad())?;
        let body = verified_body(&file).ok_or_else(bad)?;
        let version = body.get("engine_version").and_then(Value::as_str).ok_or_else(bad)?;
        let table = table_from_json(body.get("table").ok_or_else(bad)?)?;
        Ok(Some((table, version.to_string())))
    }

    /// Reuse the cached table when group, kind, mode, engine, n_max and
    /// engine version all match; otherwise compute and store.
    pub fn get_or_compute(
        &self,
        model: &GroupModel,
        kind: GrowthKind,
        mode: Mode,
        n_max: usize,
        engine: Engine,
    ) -> Result<(GrowthTable, bool)> {
        let group = model.descriptor();
        if let Some((t, version)) = self.load(&group, kind, mode)? {
            if version == ENGINE_VERSION && t.engine == engine && t.n_max() == n_max && t.group == group {
                return Ok((t, true));
            }
        }
        let t = count_growth(model, kind, mode, n_max, engine)?;
        self.store(&t)?;
        Ok((t, false))
    }
}
