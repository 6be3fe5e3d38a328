//! On-disk cache of group enumerations.
//!
//! Closures are the slow part of a cold run, so `build` persists them as
//! plain-text dumps keyed by (p, s, d, subgroup label, artifact version) —
//! a version bump invalidates every entry by construction.  Writes go
//! through a temporary file and an atomic rename, so a crashed run never
//! leaves a truncated dump behind.

use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process;

use hdx_core::error::GroupError;
use hdx_core::group::GroupEnumeration;

/// Cache file for one enumeration.
pub fn dump_path(cache: &Path, p: u32, s: u32, d: u32, label: &str) -> PathBuf {
    cache.join(format!(
        "group_p{p}_s{s}_d{d}_{label}_{}.txt",
        env!("CARGO_PKG_VERSION")
    ))
}

/// Persist an enumeration atomically; returns the final path.
pub fn store(cache: &Path, g: &GroupEnumeration) -> std::io::Result<PathBuf> {
    fs::create_dir_all(cache)?;
    let (p, s, d) = g.params();
    let path = dump_path(cache, p, s, d, &g.label());
    let tmp = path.with_extension(format!("tmp{}", process::id()));
    let mut f = fs::File::create(&tmp)?;
    g.write_dump(&mut f)?;
    f.flush()?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Load one enumeration, or explain exactly which command would create it.
pub fn load(
    cache: &Path,
    p: u32,
    s: u32,
    d: u32,
    omitted: &[u32],
    label: &str,
) -> Result<GroupEnumeration, String> {
    let path = dump_path(cache, p, s, d, label);
    let file = fs::File::open(&path).map_err(|_| {
        format!(
            "no cached enumeration at {}; run `hdx build --p {p} --s {s} --d {d} --cache {}` first",
            path.display(),
            cache.display()
        )
    })?;
    GroupEnumeration::read_dump(p, s, d, omitted, BufReader::new(file))
        .map_err(|e: GroupError| format!("cache file {} is corrupt: {e}", path.display()))
}
