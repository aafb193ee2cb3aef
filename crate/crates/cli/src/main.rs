//! minv: build modular data, fuse sectors, verify and multiply modular
//! invariants, branch through extensions, and run nimrep checks.

mod catalog;

use anyhow::{anyhow, bail, Result};
use catalog::{
    find_invariant, identify, named_invariants, parse_diagram, parse_embedding, parse_theory,
};
use clap::{Parser, Subcommand, ValueEnum};
use minv_core::branching::{
    embedding_branching, heterotic_invariant, pull_back, restrict_invariant,
    simple_current_extension, BranchingMatrix,
};
use minv_core::exact::{IntMatrix, PrecisionConfig};
use minv_core::fusion::{associativity_check, global_data, FusionRing, SectorVector};
use minv_core::invariants::{counts, decompose, enumerate_physical, verify_invariant, Diagram, ModularInvariant};
use minv_core::json::{graph_dto, invariant_dto, invariant_from_dto, modular_dto, sector_sum_dto, InvariantDto};
use minv_core::modular::{verify_modular, ModularData};
use minv_core::nimrep::{
    candidate_theta, dynkin, fusion_graph, spectrum_check, su2_nimrep, theta_at_vertex,
    theta_sum_check, ThetaFilter,
};
use minv_core::report::ReportSet;
use serde_json::json;
use std::path::PathBuf;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "minv",
    version,
    about = "Modular data, Verlinde fusion, and the arithmetic of modular invariants"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Working precision in decimal digits
    #[arg(long, global = true, default_value_t = 50)]
    digits: u32,

    /// Use the minimum precision (15 digits); faster, checks stay on
    #[arg(long, global = true)]
    fast: bool,

    /// Machine readable output
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Show the sectors, conformal weights, and central charge
    Data { theory: String },

    /// Fuse two sectors given by label name
    Fusion {
        theory: String,
        left: String,
        right: String,
    },

    /// List, enumerate, or re-verify invariants
    Invariants {
        theory: String,
        #[command(subcommand)]
        action: InvAction,
    },

    /// Multiply two invariants (trailing * takes the adjoint) and
    /// decompose the product over the named ones
    Product {
        theory: String,
        left: String,
        right: String,
    },

    /// Form Z Z* and decompose it over the named invariants
    Decompose { theory: String, invariant: String },

    /// The counting numbers of one invariant
    Counts { theory: String, invariant: String },

    /// Branching matrices of simple-current and embedding extensions
    Branching {
        #[arg(value_enum)]
        action: BranchVerb,
        theory: String,

        /// Simple current, as a label name or index
        #[arg(long)]
        current: Option<String>,

        /// Order of the simple current group
        #[arg(long, default_value_t = 2)]
        order: usize,

        /// Conformal embedding: so5, g2, su6, e6, e7, so48
        #[arg(long)]
        embedding: Option<String>,
    },

    /// Nimreps on ADE graphs and their spectra
    Nimrep {
        #[arg(value_enum)]
        action: NimVerb,
        theory: String,

        /// Graph name: A17, D10, E6, E7, E8
        #[arg(long)]
        diagram: Option<String>,

        /// Invariant to check against (defaults to the diagram name)
        #[arg(long)]
        invariant: Option<String>,

        /// Restrict theta output to one vertex (0-based)
        #[arg(long)]
        vertex: Option<usize>,

        /// Dot-export the fusion graph of this label instead
        #[arg(long)]
        generator: Option<String>,
    },

    /// Run the full verification battery for a theory
    Report { theory: String },
}

#[derive(Subcommand)]
enum InvAction {
    /// The invariants known by name
    List,
    /// Search the commutant for every physical invariant
    Enumerate,
    /// Re-verify a stored invariant, or all named ones
    Verify {
        /// JSON file holding a stored invariant
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchVerb {
    /// Extended sectors and their restriction rows
    Show,
    /// B B^T over the extended sectors
    Sandwich,
    /// Split the sandwich into weight-preserving permutations
    Decompose,
    /// The invariant B^T B of the base
    Restrict,
    /// Pull the heterotic invariant of the ambient theory back
    Pullback,
}

#[derive(Clone, Copy, ValueEnum)]
enum NimVerb {
    /// Build the nimrep and show traces
    Build,
    /// Spectrum and trace-identity checks against an invariant
    Check,
    /// Diagonal sector sums at each vertex
    Theta,
    /// Graphviz source for the graph
    Dot,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let digits = if cli.fast { 15 } else { cli.digits };
    let cfg = PrecisionConfig::with_digits(digits)?;
    let json = cli.json;
    match cli.cmd {
        Cmd::Data { theory } => cmd_data(&parse_theory(&theory, &cfg)?, json),
        Cmd::Fusion {
            theory,
            left,
            right,
        } => cmd_fusion(&parse_theory(&theory, &cfg)?, &left, &right, json),
        Cmd::Invariants { theory, action } => {
            cmd_invariants(&parse_theory(&theory, &cfg)?, &cfg, action, json)
        }
        Cmd::Product {
            theory,
            left,
            right,
        } => cmd_product(&parse_theory(&theory, &cfg)?, &cfg, &left, &right, json),
        Cmd::Decompose { theory, invariant } => {
            cmd_decompose(&parse_theory(&theory, &cfg)?, &cfg, &invariant, json)
        }
        Cmd::Counts { theory, invariant } => {
            cmd_counts(&parse_theory(&theory, &cfg)?, &cfg, &invariant, json)
        }
        Cmd::Branching {
            action,
            theory,
            current,
            order,
            embedding,
        } => cmd_branching(
            &parse_theory(&theory, &cfg)?,
            &cfg,
            action,
            current.as_deref(),
            order,
            embedding.as_deref(),
            json,
        ),
        Cmd::Nimrep {
            action,
            theory,
            diagram,
            invariant,
            vertex,
            generator,
        } => cmd_nimrep(
            &parse_theory(&theory, &cfg)?,
            &cfg,
            action,
            diagram.as_deref(),
            invariant.as_deref(),
            vertex,
            generator.as_deref(),
            json,
        ),
        Cmd::Report { theory } => cmd_report(&parse_theory(&theory, &cfg)?, &cfg, json),
    }
}

fn cmd_data(md: &Arc<ModularData>, json: bool) -> Result<i32> {
    if json {
        println!("{}", serde_json::to_string_pretty(&modular_dto(md))?);
        return Ok(0);
    }
    println!(
        "{}: {} sectors, c = {}, precision {} digits",
        md.name(),
        md.n(),
        md.central_charge(),
        md.cfg().digits()
    );
    println!("{:>5}  {:<14} {:<18} {:<10} {}", "idx", "name", "weight", "h", "dim");
    for i in 0..md.n() {
        let l = md.label(i);
        println!(
            "{:>5}  {:<14} {:<18} {:<10} {:.6}",
            i,
            l.name,
            format!("{:?}", l.weight),
            l.h.to_string(),
            md.dim(i).to_f64()
        );
    }
    Ok(0)
}

fn label_index(md: &ModularData, s: &str) -> Result<usize> {
    if let Some(i) = md.index_of(s) {
        return Ok(i);
    }
    if let Ok(i) = s.parse::<usize>() {
        if i < md.n() {
            return Ok(i);
        }
    }
    bail!("no sector named {} in {}", s, md.name())
}

fn format_sum(md: &ModularData, v: &SectorVector) -> String {
    let terms: Vec<String> = v
        .support()
        .map(|(i, c)| {
            if c == 1 {
                md.label(i).name.clone()
            } else {
                format!("{}*{}", c, md.label(i).name)
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn cmd_fusion(md: &Arc<ModularData>, left: &str, right: &str, json: bool) -> Result<i32> {
    let ring = FusionRing::new(Arc::clone(md));
    let (i, j) = (label_index(md, left)?, label_index(md, right)?);
    let prod = ring.verlinde(i, j)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&sector_sum_dto(md, &prod))?);
    } else {
        println!(
            "{} x {} = {}",
            md.label(i).name,
            md.label(j).name,
            format_sum(md, &prod)
        );
    }
    Ok(0)
}

fn invariant_line(z: &ModularInvariant) -> String {
    let m = z.matrix();
    format!(
        "{:<12} trace {:<5} |Z|^2 {:<6} {}",
        z.name(),
        z.trace(),
        m.sq_sum(),
        if *m == m.transpose() {
            "symmetric"
        } else {
            "asymmetric"
        }
    )
}

fn cmd_invariants(
    md: &Arc<ModularData>,
    cfg: &PrecisionConfig,
    action: InvAction,
    json: bool,
) -> Result<i32> {
    match action {
        InvAction::List => {
            let all = named_invariants(md, cfg)?;
            if json {
                let dtos: Vec<InvariantDto> = all.iter().map(invariant_dto).collect();
                println!("{}", serde_json::to_string_pretty(&dtos)?);
            } else {
                for z in &all {
                    println!("{}", invariant_line(z));
                }
            }
            Ok(0)
        }
        InvAction::Enumerate => {
            let found = enumerate_physical(md, cfg)?;
            if json {
                let dtos: Vec<InvariantDto> =
                    found.invariants.iter().map(invariant_dto).collect();
                println!("{}", serde_json::to_string_pretty(&dtos)?);
            } else {
                for z in &found.invariants {
                    println!("{}", invariant_line(z));
                }
                println!("{} physical invariants", found.invariants.len());
                if found.bound_saturated {
                    println!("note: an entry reached its search bound; completeness is relative to the bound");
                }
            }
            Ok(0)
        }
        InvAction::Verify { file: Some(path) } => {
            let text = std::fs::read_to_string(&path)?;
            let dto: InvariantDto = serde_json::from_str(&text)?;
            let z = invariant_from_dto(md, &dto)?;
            println!(
                "OK: {} verified over {} (trace {})",
                z.name(),
                md.name(),
                z.trace()
            );
            Ok(0)
        }
        InvAction::Verify { file: None } => {
            let mut set = ReportSet::new();
            for z in named_invariants(md, cfg)? {
                set.run(&format!("verify_{}", z.name()), || {
                    let report = verify_invariant(md, z.matrix(), cfg);
                    if report.pass() {
                        Ok(format!("max residual {:.1e}", report.max_residual()))
                    } else {
                        Err(report.to_error())
                    }
                });
            }
            finish_report(set, json)
        }
    }
}

/// Named invariants plus any distinct adjoints: the basis products are
/// decomposed over.
fn basis_with_adjoints(
    md: &Arc<ModularData>,
    cfg: &PrecisionConfig,
) -> Result<Vec<ModularInvariant>> {
    let mut out = named_invariants(md, cfg)?;
    let extra: Vec<ModularInvariant> = out
        .iter()
        .filter(|z| *z.matrix() != z.matrix().transpose())
        .map(|z| z.adjoint())
        .collect();
    out.extend(extra);
    Ok(out)
}

fn combo_string(coeffs: &[i64], basis: &[ModularInvariant]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .zip(basis)
        .filter(|(&c, _)| c != 0)
        .map(|(&c, z)| {
            if c == 1 {
                z.name().to_string()
            } else {
                format!("{}*{}", c, z.name())
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn print_decompositions(
    m: &IntMatrix,
    basis: &[ModularInvariant],
    lhs: &str,
    json: bool,
) -> Result<i32> {
    let refs: Vec<&ModularInvariant> = basis.iter().collect();
    let combos = decompose(m, &refs);
    if json {
        let names: Vec<&str> = basis.iter().map(|z| z.name()).collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "lhs": lhs,
                "trace": m.trace(),
                "basis": names,
                "decompositions": combos,
            }))?
        );
        return Ok(0);
    }
    if combos.is_empty() {
        println!("{} has no decomposition over the named invariants", lhs);
    } else {
        for c in &combos {
            println!("{} = {}", lhs, combo_string(c, basis));
        }
    }
    Ok(0)
}

fn cmd_product(
    md: &Arc<ModularData>,
    cfg: &PrecisionConfig,
    left: &str,
    right: &str,
    json: bool,
) -> Result<i32> {
    let za = find_invariant(md, cfg, left)?;
    let zb = find_invariant(md, cfg, right)?;
    let m = za.product(&zb);
    let basis = basis_with_adjoints(md, cfg)?;
    print_decompositions(&m, &basis, &format!("{} . {}", za.name(), zb.name()), json)
}

fn cmd_decompose(
    md: &Arc<ModularData>,
    cfg: &PrecisionConfig,
    name: &str,
    json: bool,
) -> Result<i32> {
    let z = find_invariant(md, cfg, name)?;
    let m = z.product(&z.adjoint());
    let basis = basis_with_adjoints(md, cfg)?;
    print_decompositions(&m, &basis, &format!("{} {}*", z.name(), z.name()), json)
}

fn cmd_counts(
    md: &Arc<ModularData>,
    cfg: &PrecisionConfig,
    name: &str,
    json: bool,
) -> Result<i32> {
    let z = find_invariant(md, cfg, name)?;
    let c = counts(&z);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "invariant": z.name(),
                "trace": c.trace,
                "full_pairs": c.full_pairs,
                "row0_sq": c.row0_sq,
                "col0_sq": c.col0_sq,
                "zzstar_00": c.zzstar_00,
            }))?
        );
    } else {
        println!("{} over {}", z.name(), md.name());
        println!("{}", c);
    }
    Ok(0)
}

fn cycle_string(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut x = perm[start];
        while x != start {
            seen[x] = true;
            cyc.push(x);
            x = perm[x];
        }
        let body: Vec<String> = cyc.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("({})", body.join(" ")));
    }
    if out.is_empty() {
        "id".into()
    } else {
        out
    }
}

fn matrix_lines(m: &IntMatrix, names: &[String]) -> String {
    let name_w = names.iter().map(|s| s.len()).max().unwrap_or(0);
    let cell_w = m
        .iter_nonzero()
        .map(|(_, _, v)| v.to_string().len())
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for i in 0..m.rows() {
        out.push_str(&format!("{:>name_w$}  ", names[i]));
        let cells: Vec<String> = (0..m.cols())
            .map(|j| format!("{:>cell_w$}", m.get(i, j)))
            .collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

fn build_branching(
    md: &Arc<ModularData>,
    current: Option<&str>,
    order: usize,
    embedding: Option<&str>,
) -> Result<(BranchingMatrix, String)> {
    match (current, embedding) {
        (Some(cur), None) => {
            let j = label_index(md, cur)?;
            let b = simple_current_extension(md, j, order)?;
            Ok((
                b,
                format!("{} extended by {}^{}", md.name(), md.label(j).name, order),
            ))
        }
        (None, Some(e)) => {
            let emb = parse_embedding(e)?;
            let b = embedding_branching(md, emb)?;
            Ok((b, emb.to_string()))
        }
        _ => bail!("pick exactly one of --current or --embedding"),
    }
}

fn cmd_branching(
    md: &Arc<ModularData>,
    cfg: &PrecisionConfig,
    action: BranchVerb,
    current: Option<&str>,
    order: usize,
    embedding: Option<&str>,
    json: bool,
) -> Result<i32> {
    let (b, desc) = build_branching(md, current, order, embedding)?;
    if let Some(w) = b.warning() {
        eprintln!("warning: {}", w);
    }
    let ext_names: Vec<String> = b.ext_labels().to_vec();
    match action {
        BranchVerb::Show => {
            if json {
                let rows: Vec<serde_json::Value> = (0..b.ext_count())
                    .map(|t| {
                        let row: Vec<serde_json::Value> = b
                            .matrix()
                            .row(t)
                            .iter()
                            .enumerate()
                            .filter(|(_, &m)| m != 0)
                            .map(|(l, &m)| json!({"label": md.label(l).name, "mult": m}))
                            .collect();
                        json!({"sector": ext_names[t], "restricts_to": row})
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "extension": desc,
                        "local": b.is_local(),
                        "sectors": rows,
                    }))?
                );
                return Ok(0);
            }
            println!("{} ({} extended sectors)", desc, b.ext_count());
            for t in 0..b.ext_count() {
                let v = SectorVector::from_coeffs(b.matrix().row(t).to_vec());
                println!("{:<10} -> {}", ext_names[t], format_sum(md, &v));
            }
            Ok(0)
        }
        BranchVerb::Sandwich => {
            let s = b.sandwich()?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "extension": desc,
                        "sectors": ext_names,
                        "matrix": (0..s.rows()).map(|i| s.row(i).to_vec()).collect::<Vec<_>>(),
                    }))?
                );
                return Ok(0);
            }
            println!("B B^T for {}", desc);
            print!("{}", matrix_lines(&s, &ext_names));
            if b.ext_md().is_some() {
                println!("commutes with the extended S and T");
            }
            Ok(0)
        }
        BranchVerb::Decompose => {
            let parts = b.sandwich_decomposition()?;
            if json {
                let items: Vec<serde_json::Value> = parts
                    .iter()
                    .map(|(p, m)| json!({"permutation": p, "multiplicity": m}))
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "extension": desc,
                        "parts": items,
                    }))?
                );
                return Ok(0);
            }
            println!("B B^T for {} splits as", desc);
            for (p, mult) in &parts {
                println!("  {} x {}", mult, cycle_string(p));
            }
            Ok(0)
        }
        BranchVerb::Restrict => {
            let z = restrict_invariant(&b, &b)?;
            let tag = identify(md, cfg, z.matrix())
                .map(|n| format!(" = {}", n))
                .unwrap_or_default();
            if json {
                println!("{}", serde_json::to_string_pretty(&invariant_dto(&z))?);
                return Ok(0);
            }
            println!(
                "B^T B over {} verified (trace {}){}",
                md.name(),
                z.trace(),
                tag
            );
            Ok(0)
        }
        BranchVerb::Pullback => {
            let ext = b
                .ext_md()
                .ok_or_else(|| anyhow!("pullback needs an embedding with extended data"))?;
            let q = heterotic_invariant(ext)?;
            let z = pull_back(&b, q.matrix())?;
            let tag = identify(md, cfg, z.matrix())
                .map(|n| format!(" = {}", n))
                .unwrap_or_default();
            if json {
                println!("{}", serde_json::to_string_pretty(&invariant_dto(&z))?);
                return Ok(0);
            }
            println!(
                "pullback of {} through {} verified (trace {}){}",
                q.name(),
                desc,
                z.trace(),
                tag
            );
            Ok(0)
        }
    }
}

fn theta_string(md: &ModularData, coeffs: &[i64]) -> String {
    format_sum(md, &SectorVector::from_coeffs(coeffs.to_vec()))
}

fn cmd_nimrep(
    md: &Arc<ModularData>,
    cfg: &PrecisionConfig,
    action: NimVerb,
    diagram: Option<&str>,
    invariant: Option<&str>,
    vertex: Option<usize>,
    generator: Option<&str>,
    json: bool,
) -> Result<i32> {
    if let (NimVerb::Dot, Some(g)) = (action, generator) {
        let ring = FusionRing::new(Arc::clone(md));
        let graph = fusion_graph(&ring, label_index(md, g)?)?;
        print!("{}", graph.dot());
        return Ok(0);
    }
    let dname = diagram.ok_or_else(|| anyhow!("--diagram is required"))?;
    let d = parse_diagram(dname)?;
    match action {
        NimVerb::Dot => {
            print!("{}", dynkin(d).dot());
            Ok(0)
        }
        NimVerb::Build => {
            let nim = su2_nimrep(md, d)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&graph_dto(nim.graph()))?);
                return Ok(0);
            }
            let (pf, _) = nim.graph().perron_frobenius();
            println!(
                "{} nimrep of {}: {} vertices, Perron-Frobenius value {:.6}",
                nim.graph().name(),
                md.name(),
                nim.vertex_count(),
                pf
            );
            let traces: Vec<String> = (0..md.n())
                .map(|nu| format!("{}", nim.matrix(nu).trace()))
                .collect();
            println!("traces: [{}]", traces.join(", "));
            Ok(0)
        }
        NimVerb::Check => {
            let nim = su2_nimrep(md, d)?;
            let z = find_invariant(md, cfg, invariant.unwrap_or(dname))?;
            let mut set = ReportSet::new();
            set.run("spectrum", || {
                spectrum_check(&nim, &z)?;
                Ok(format!(
                    "generator eigenvalues match the diagonal of {}",
                    z.name()
                ))
            });
            set.run("trace_identity", || {
                let sums = theta_sum_check(&nim, &z)?;
                Ok(format!(
                    "graph, fusion, and spectral sums agree on {} sectors",
                    sums.len()
                ))
            });
            finish_report(set, json)
        }
        NimVerb::Theta => {
            let nim = su2_nimrep(md, d)?;
            if json {
                let items: Vec<serde_json::Value> = (0..nim.vertex_count())
                    .map(|v| json!({"vertex": v, "theta": theta_at_vertex(&nim, v)}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&items)?);
                return Ok(0);
            }
            let verts: Vec<usize> = match vertex {
                Some(v) if v < nim.vertex_count() => vec![v],
                Some(v) => bail!("vertex {} out of range", v),
                None => (0..nim.vertex_count()).collect(),
            };
            for v in verts {
                println!(
                    "theta[{}] = {}",
                    nim.graph().vertex_name(v),
                    theta_string(md, &theta_at_vertex(&nim, v))
                );
            }
            if let Some(iname) = invariant {
                let z = find_invariant(md, cfg, iname)?;
                println!(
                    "candidate (even spins of {}) = {}",
                    z.name(),
                    theta_string(md, &candidate_theta(&z, ThetaFilter::EvenWeightSum))
                );
            }
            Ok(0)
        }
    }
}

fn diagram_for_name(name: &str) -> Option<Diagram> {
    parse_diagram(name).ok()
}

fn cmd_report(md: &Arc<ModularData>, cfg: &PrecisionConfig, json: bool) -> Result<i32> {
    let mut set = ReportSet::new();
    set.run("modular_axioms", || {
        let r = verify_modular(md, cfg);
        if r.pass() {
            Ok(format!("max residual {:.1e}", r.max_residual()))
        } else {
            Err(r.to_error())
        }
    });
    let ring = FusionRing::new(Arc::clone(md));
    set.run("central_charge_mod_8", || {
        let (_, _, c) = global_data(&ring)?;
        Ok(format!("c = {}", c))
    });
    set.run("fusion_associativity", || {
        associativity_check(&ring, 40)?;
        Ok("40 sampled triples".into())
    });

    let named = match named_invariants(md, cfg) {
        Ok(v) => v,
        Err(e) => {
            set.run("named_invariants", || Err(minv_core::error::Error::BadInput(e.to_string())));
            return finish_report(set, json);
        }
    };
    for z in &named {
        set.run(&format!("invariant_{}", z.name()), || {
            let report = verify_invariant(md, z.matrix(), cfg);
            if report.pass() {
                Ok(format!("trace {}, |Z|^2 {}", z.trace(), z.matrix().sq_sum()))
            } else {
                Err(report.to_error())
            }
        });
    }

    let basis = basis_with_adjoints(md, cfg)?;
    set.run("products_decompose", || {
        let refs: Vec<&ModularInvariant> = basis.iter().collect();
        let mut pairs = 0;
        for a in &basis {
            for b in &basis {
                let m = a.product(b);
                if decompose(&m, &refs).is_empty() {
                    return Err(minv_core::error::Error::NotDecomposable(format!(
                        "{} . {} leaves the span of the named invariants",
                        a.name(),
                        b.name()
                    )));
                }
                pairs += 1;
            }
        }
        Ok(format!("{} products stay inside the named set", pairs))
    });

    for z in &named {
        let Some(d) = diagram_for_name(z.name()) else {
            continue;
        };
        set.run(&format!("nimrep_{}", z.name()), || {
            let nim = su2_nimrep(md, d)?;
            spectrum_check(&nim, z)?;
            theta_sum_check(&nim, z)?;
            Ok("spectrum and trace identity hold".into())
        });
    }
    finish_report(set, json)
}

fn finish_report(set: ReportSet, json: bool) -> Result<i32> {
    if json {
        println!("{}", serde_json::to_string_pretty(&set)?);
    } else {
        println!("{}", set);
    }
    Ok(if set.all_pass() { 0 } else { 1 })
}
