//! Serializable views of the main objects. Exact rationals travel as
//! "p/q" strings; invariants travel sparse and are re-verified when
//! read back, so stored files cannot smuggle in a bad matrix.

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::fusion::SectorVector;
use crate::invariants::ModularInvariant;
use crate::modular::ModularData;
use crate::nimrep::Graph;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabelDto {
    pub name: String,
    pub weight: Vec<i64>,
    /// Conformal weight as an exact fraction.
    pub h: String,
    /// Quantum dimension, approximate.
    pub dim: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModularDataDto {
    pub name: String,
    pub sectors: usize,
    pub central_charge: String,
    pub precision_digits: u32,
    pub labels: Vec<LabelDto>,
}

pub fn modular_dto(md: &ModularData) -> ModularDataDto {
    ModularDataDto {
        name: md.name().to_string(),
        sectors: md.n(),
        central_charge: md.central_charge().to_string(),
        precision_digits: md.cfg().digits(),
        labels: (0..md.n())
            .map(|i| {
                let l = md.label(i);
                LabelDto {
                    name: l.name.clone(),
                    weight: l.weight.clone(),
                    h: l.h.to_string(),
                    dim: md.dim(i).to_f64(),
                }
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvariantDto {
    pub base: String,
    pub name: String,
    pub size: usize,
    pub trace: i64,
    /// Nonzero entries as [row, col, value].
    pub entries: Vec<[i64; 3]>,
}

pub fn invariant_dto(z: &ModularInvariant) -> InvariantDto {
    InvariantDto {
        base: z.md().name().to_string(),
        name: z.name().to_string(),
        size: z.n(),
        trace: z.trace(),
        entries: z
            .matrix()
            .iter_nonzero()
            .map(|(i, j, v)| [i as i64, j as i64, v])
            .collect(),
    }
}

/// Rebuild and fully re-verify an invariant from its stored form.
pub fn invariant_from_dto(md: &Arc<ModularData>, dto: &InvariantDto) -> Result<ModularInvariant> {
    if dto.base != md.name() {
        return Err(Error::BadInput(format!(
            "stored invariant is over {}, data is {}",
            dto.base,
            md.name()
        )));
    }
    if dto.size != md.n() {
        return Err(Error::BadInput(format!(
            "stored size {} does not match {} sectors",
            dto.size,
            md.n()
        )));
    }
    let mut m = IntMatrix::zeros(dto.size, dto.size);
    for &[i, j, v] in &dto.entries {
        let (i, j) = bounds_checked(i, j, dto.size)?;
        m.set(i, j, v);
    }
    let z = ModularInvariant::new(Arc::clone(md), &dto.name, m)?;
    if z.trace() != dto.trace {
        return Err(Error::BadInput(format!(
            "stored trace {} disagrees with the entries ({})",
            dto.trace,
            z.trace()
        )));
    }
    Ok(z)
}

fn bounds_checked(i: i64, j: i64, size: usize) -> Result<(usize, usize)> {
    let cast = |x: i64| -> Result<usize> {
        usize::try_from(x)
            .ok()
            .filter(|&u| u < size)
            .ok_or_else(|| Error::BadInput(format!("entry index {} out of range", x)))
    };
    Ok((cast(i)?, cast(j)?))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermDto {
    pub name: String,
    pub coeff: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectorSumDto {
    pub base: String,
    pub terms: Vec<TermDto>,
}

pub fn sector_sum_dto(md: &ModularData, v: &SectorVector) -> SectorSumDto {
    SectorSumDto {
        base: md.name().to_string(),
        terms: v
            .support()
            .map(|(i, c)| TermDto {
                name: md.label(i).name.clone(),
                coeff: c,
            })
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDto {
    pub name: String,
    pub directed: bool,
    pub vertices: Vec<String>,
    /// [from, to, multiplicity]; undirected graphs list each edge once.
    pub edges: Vec<[i64; 3]>,
}

pub fn graph_dto(g: &Graph) -> GraphDto {
    let directed = !g.adjacency().is_symmetric();
    GraphDto {
        name: g.name().to_string(),
        directed,
        vertices: (0..g.vertex_count())
            .map(|v| g.vertex_name(v).to_string())
            .collect(),
        edges: g
            .adjacency()
            .iter_nonzero()
            .filter(|&(i, j, _)| directed || i <= j)
            .map(|(i, j, m)| [i as i64, j as i64, m])
            .collect(),
    }
}
