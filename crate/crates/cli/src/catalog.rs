//! Turns command line strings into modular data and invariants.

use anyhow::{anyhow, bail, Result};
use minv_core::branching::Embedding;
use minv_core::exact::{IntMatrix, PrecisionConfig};
use minv_core::invariants::{
    ade_invariant, su3_invariant, su7_invariants, zn_invariants, Diagram, ModularInvariant,
    Su3Series,
};
use minv_core::modular::{level_one, su_n_k, zn_anyon, LevelOneFamily, ModularData};
use std::sync::Arc;

/// Accepts SU(n)_k, SO(m)_1, (G2)_1, (E6)_1, (E7)_1, (E8)_1, Z_n(a=x).
pub fn parse_theory(name: &str, cfg: &PrecisionConfig) -> Result<Arc<ModularData>> {
    if let Some(rest) = name.strip_prefix("SU(") {
        let (n, k) = group_params(rest)?;
        return Ok(Arc::new(su_n_k(n, k, cfg)?));
    }
    if let Some(rest) = name.strip_prefix("SO(") {
        let (m, k) = group_params(rest)?;
        if k != 1 {
            bail!("only level one orthogonal data is built in, got level {k}");
        }
        return Ok(Arc::new(level_one(LevelOneFamily::So(m), cfg)?));
    }
    let exceptional = [
        ("(G2)_1", LevelOneFamily::G2),
        ("(E6)_1", LevelOneFamily::E6),
        ("(E7)_1", LevelOneFamily::E7),
        ("(E8)_1", LevelOneFamily::E8),
    ];
    for (tag, fam) in exceptional {
        if name == tag {
            return Ok(Arc::new(level_one(fam, cfg)?));
        }
    }
    if let Some(rest) = name.strip_prefix("Z_") {
        let (n_s, a_s) = rest
            .split_once("(a=")
            .ok_or_else(|| anyhow!("cyclic data is written Z_n(a=x), got Z_{rest}"))?;
        let n: u32 = n_s.trim().parse()?;
        let a: i64 = a_s
            .strip_suffix(')')
            .ok_or_else(|| anyhow!("missing ')' in {name}"))?
            .trim()
            .parse()?;
        return Ok(Arc::new(zn_anyon(n, a, cfg)?));
    }
    bail!(
        "unrecognized theory {name}; expected SU(n)_k, SO(m)_1, (G2)_1, \
         (E6)_1, (E7)_1, (E8)_1, or Z_n(a=x)"
    )
}

fn group_params(rest: &str) -> Result<(u32, u32)> {
    let (n_s, k_s) = rest
        .split_once(")_")
        .ok_or_else(|| anyhow!("group data is written like SU(2)_16"))?;
    Ok((n_s.trim().parse()?, k_s.trim().parse()?))
}

fn su_level(md: &ModularData, rank: u32) -> Option<u32> {
    md.name()
        .strip_prefix(&format!("SU({})_", rank))
        .and_then(|s| s.parse().ok())
}

/// The invariants this tool knows by name for the given data.
pub fn named_invariants(
    md: &Arc<ModularData>,
    cfg: &PrecisionConfig,
) -> Result<Vec<ModularInvariant>> {
    if let Some(k) = su_level(md, 2) {
        let mut out = vec![ade_invariant(md, Diagram::A(k + 1))?];
        if k % 2 == 0 && k >= 4 {
            out.push(ade_invariant(md, Diagram::D(k / 2 + 2))?);
        }
        match k {
            10 => out.push(ade_invariant(md, Diagram::E6)?),
            16 => out.push(ade_invariant(md, Diagram::E7)?),
            28 => out.push(ade_invariant(md, Diagram::E8)?),
            _ => {}
        }
        return Ok(out);
    }
    if let Some(k) = su_level(md, 3) {
        let n = md.n();
        let mut out = vec![ModularInvariant::new(
            Arc::clone(md),
            "A",
            IntMatrix::identity(n),
        )?];
        let conj: Vec<usize> = (0..n).map(|i| md.conj(i)).collect();
        let c = IntMatrix::from_permutation(&conj);
        if c != IntMatrix::identity(n) {
            out.push(ModularInvariant::new(Arc::clone(md), "C", c)?);
        }
        let series: &[Su3Series] = match k {
            5 => &[Su3Series::E8],
            9 => &[Su3Series::D12, Su3Series::E12],
            21 => &[Su3Series::E24],
            _ => &[],
        };
        for &s in series {
            out.push(su3_invariant(md, s)?);
        }
        return Ok(out);
    }
    if md.name() == "SU(7)_7" {
        let (z1, zs) = su7_invariants(md)?;
        return Ok(vec![z1, zs]);
    }
    if md.name().starts_with("Z_") {
        return Ok(zn_invariants(md, cfg)?
            .into_iter()
            .map(|(_, z)| z)
            .collect());
    }
    bail!("no named invariants catalogued for {}", md.name())
}

fn normalize(name: &str) -> String {
    name.chars().filter(|c| !"^()".contains(*c)).collect()
}

/// Resolve an invariant by name; a trailing * takes the adjoint.
/// Names are matched ignoring the ^( ) decorations, so E^(12) and E12
/// are the same thing.
pub fn find_invariant(
    md: &Arc<ModularData>,
    cfg: &PrecisionConfig,
    query: &str,
) -> Result<ModularInvariant> {
    let (base, star) = match query.strip_suffix('*') {
        Some(b) => (b, true),
        None => (query, false),
    };
    let want = normalize(base);
    let all = named_invariants(md, cfg)?;
    let names: Vec<String> = all.iter().map(|z| z.name().to_string()).collect();
    let hit = all
        .into_iter()
        .find(|z| normalize(z.name()) == want)
        .ok_or_else(|| {
            anyhow!(
                "no invariant {} for {}; known: {}",
                base,
                md.name(),
                names.join(", ")
            )
        })?;
    Ok(if star { hit.adjoint() } else { hit })
}

/// Match a resolved matrix back to a catalogued name, trying plain
/// names and adjoints.
pub fn identify(
    md: &Arc<ModularData>,
    cfg: &PrecisionConfig,
    m: &IntMatrix,
) -> Option<String> {
    let all = named_invariants(md, cfg).ok()?;
    for z in &all {
        if z.matrix() == m {
            return Some(z.name().to_string());
        }
        let t = z.matrix().transpose();
        if t != *z.matrix() && t == *m {
            return Some(format!("{}*", z.name()));
        }
    }
    None
}

pub fn parse_diagram(s: &str) -> Result<Diagram> {
    let d = match s {
        "E6" => Diagram::E6,
        "E7" => Diagram::E7,
        "E8" => Diagram::E8,
        _ => {
            if s.len() < 2 || !s.is_ascii() {
                bail!("diagrams are written A17, D10, E6, E7, E8");
            }
            let (kind, num) = s.split_at(1);
            let l: u32 = num
                .parse()
                .map_err(|_| anyhow!("diagrams are written A17, D10, E6, E7, E8"))?;
            match kind {
                "A" => Diagram::A(l),
                "D" => Diagram::D(l),
                _ => bail!("diagrams are written A17, D10, E6, E7, E8"),
            }
        }
    };
    Ok(d)
}

pub fn parse_embedding(s: &str) -> Result<Embedding> {
    let e = match s.to_ascii_lowercase().as_str() {
        "so5" => Embedding::Su2_10InSo5,
        "g2" => Embedding::Su2_28InG2,
        "su6" => Embedding::Su3_5InSu6,
        "e6" => Embedding::Su3_9InE6,
        "e7" => Embedding::Su3_21InE7,
        "so48" => Embedding::Su7_7InSo48,
        other => bail!(
            "unknown embedding {other}; known: so5, g2, su6, e6, e7, so48"
        ),
    };
    Ok(e)
}
