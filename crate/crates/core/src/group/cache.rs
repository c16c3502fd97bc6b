//! On-disk cache of distance tables, keyed by a content hash of the group
//! spec and the template body.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::finite::FiniteGroup;
use super::wlength::{wlength_table, DistanceTable};
use crate::error::{Error, Result};
use crate::verbal::WordTemplate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Hit,
    Miss,
    /// The cached file was unreadable and has been rebuilt.
    Recomputed { warning: String },
}

pub fn cache_key(group_spec: &str, t: &WordTemplate) -> String {
    let mut h = Sha256::new();
    h.update(group_spec.as_bytes());
    h.update([0]);
    for v in t.variables() {
        h.update(v.to_le_bytes());
    }
    h.update([0]);
    for l in t.body().signed() {
        h.update(l.to_le_bytes());
    }
    hex::encode(h.finalize())
}

pub fn cache_path(dir: &Path, group_spec: &str, t: &WordTemplate) -> PathBuf {
    dir.join(format!("{}.dist", cache_key(group_spec, t)))
}

pub fn serialize_table(table: &DistanceTable) -> String {
    let reachable: Vec<_> = table.reachable().collect();
    let mut out = format!(
        "GROUP {} TEMPLATE {} COUNT {}\n",
        table.group_spec(),
        table.template_name(),
        reachable.len()
    );
    for id in reachable {
        out.push_str(&format!("{} {}\n", id, table.distance(id).unwrap()));
    }
    out
}

/// Parse a cache file for a group of the given order.
pub fn parse_table(text: &str, order: usize) -> Result<DistanceTable> {
    let corrupt = |m: &str| Error::InvalidArgument(format!("corrupt distance table: {m}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| corrupt("empty file"))?;
    let rest = header.strip_prefix("GROUP ").ok_or_else(|| corrupt("missing GROUP"))?;
    let (group, rest) = rest.split_once(" TEMPLATE ").ok_or_else(|| corrupt("missing TEMPLATE"))?;
    let (template, count) = rest.rsplit_once(" COUNT ").ok_or_else(|| corrupt("missing COUNT"))?;
    let count: usize = count.trim().parse().map_err(|_| corrupt("bad COUNT"))?;
    let mut distance = vec![None; order];
    let mut seen = 0;
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let mut parts = line.split_whitespace();
        let (Some(id), Some(d), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(corrupt("bad entry line"));
        };
        let id: usize = id.parse().map_err(|_| corrupt("bad id"))?;
        let d: u32 = d.parse().map_err(|_| corrupt("bad distance"))?;
        if id >= order || distance[id].is_some() {
            return Err(corrupt("id out of range or repeated"));
        }
        distance[id] = Some(d);
        seen += 1;
    }
    if seen != count {
        return Err(corrupt("entry count does not match header"));
    }
    Ok(DistanceTable::new(group, template, distance))
}

pub fn write_cached(dir: &Path, g: &FiniteGroup, t: &WordTemplate, table: &DistanceTable) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = cache_path(dir, g.spec(), t);
    fs::write(&path, serialize_table(table)).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Load the table from the cache or compute and store it.
pub fn load_or_compute(
    dir: &Path,
    g: &FiniteGroup,
    t: &WordTemplate,
    budget: u128,
) -> Result<(DistanceTable, CacheOutcome)> {
    let path = cache_path(dir, g.spec(), t);
    let outcome = match fs::read_to_string(&path) {
        Ok(text) => match parse_table(&text, g.order()) {
            Ok(table) if table.group_spec() == g.spec() && table.template_name() == t.name() => {
                return Ok((table, CacheOutcome::Hit));
            }
            Ok(_) => CacheOutcome::Recomputed {
                warning: format!("{}: header does not match request", path.display()),
            },
            Err(e) => CacheOutcome::Recomputed {
                warning: format!("{}: {e}", path.display()),
            },
        },
        Err(_) => CacheOutcome::Miss,
    };
    let table = wlength_table(g, t, budget)?;
    write_cached(dir, g, t, &table)?;
    Ok((table, outcome))
}

/// Number of cache files and their total size in bytes.
pub fn cache_info(dir: &Path) -> Result<(usize, u64)> {
    let Ok(entries) = fs::read_dir(dir) else {
        return Ok((0, 0));
    };
    let mut count = 0;
    let mut bytes = 0;
    for e in entries {
        let e = e.map_err(|err| Error::io(dir, err))?;
        if e.path().extension().is_some_and(|x| x == "dist") {
            count += 1;
            bytes += e.metadata().map(|m| m.len()).unwrap_or(0);
        }
    }
    Ok((count, bytes))
}

pub fn cache_clear(dir: &Path) -> Result<usize> {
    let Ok(entries) = fs::read_dir(dir) else {
        return Ok(0);
    };
    let mut removed = 0;
    for e in entries {
        let p = e.map_err(|err| Error::io(dir, err))?.path();
        if p.extension().is_some_and(|x| x == "dist") {
            fs::remove_file(&p).map_err(|err| Error::io(&p, err))?;
            removed += 1;
        }
    }
    Ok(removed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verbal::{gamma_word, DEFAULT_ENUMERATION_BUDGET};
    use crate::word::Word;

    #[test]
    fn write_then_read() {
        let dir = tempfile::tempdir().unwrap();
        let g = FiniteGroup::alternating(5).unwrap();
        let t = gamma_word(2).unwrap();
        let (first, o1) = load_or_compute(dir.path(), &g, &t, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(o1, CacheOutcome::Miss);
        let (second, o2) = load_or_compute(dir.path(), &g, &t, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(o2, CacheOutcome::Hit);
        assert_eq!(first, second);
        assert_eq!(cache_info(dir.path()).unwrap().0, 1);
    }

    #[test]
    fn template_edit_misses() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let a = WordTemplate::from_word("w", Word::generator(1).pow(2));
        let b = WordTemplate::from_word("w", Word::generator(1).pow(3));
        assert_ne!(cache_key(g.spec(), &a), cache_key(g.spec(), &b));
        assert_ne!(cache_key("S3", &a), cache_key("S4", &a));
    }

    #[test]
    fn corrupt_file_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let g = FiniteGroup::symmetric(3).unwrap();
        let t = gamma_word(2).unwrap();
        fs::write(cache_path(dir.path(), g.spec(), &t), "GROUP S3 TEMPLATE gamma2 COUNT 9\n0 x\n").unwrap();
        let (table, outcome) = load_or_compute(dir.path(), &g, &t, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(matches!(outcome, CacheOutcome::Recomputed { .. }));
        assert_eq!(table.reachable().count(), 3);
        assert_eq!(cache_clear(dir.path()).unwrap(), 1);
        assert_eq!(cache_info(dir.path()).unwrap(), (0, 0));
    }
}
