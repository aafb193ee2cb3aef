//! Graphs representing Verlinde rings by nonnegative integer matrices.
//! The su(2) series is built from ADE Dynkin diagrams via the Chebyshev
//! recursion; checks tie a graph to a modular invariant through its
//! spectrum and through the trace identity
//!   tr G_nu = sum_{la,mu} Z_{la,mu} N_{nu,mu}^la
//!           = sum_rho Z_{rho,rho} S_{rho,nu} / S_{rho,0}.

use crate::error::{Error, Result};
use crate::exact::{Complex, IntMatrix, Real};
use crate::fusion::FusionRing;
use crate::invariants::{Diagram, ModularInvariant};
use crate::modular::ModularData;
use std::sync::Arc;

/// Finite multigraph with named vertices. Directed when the adjacency
/// matrix is not symmetric (fusion graphs of non-self-conjugate
/// generators).
pub struct Graph {
    name: String,
    vertices: Vec<String>,
    adj: IntMatrix,
}

impl Graph {
    pub fn new(name: &str, vertices: Vec<String>, adj: IntMatrix) -> Graph {
        assert_eq!(adj.rows(), adj.cols(), "adjacency must be square");
        assert_eq!(vertices.len(), adj.rows(), "one name per vertex");
        Graph {
            name: name.into(),
            vertices,
            adj,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn adjacency(&self) -> &IntMatrix {
        &self.adj
    }

    pub fn degree(&self, v: usize) -> i64 {
        self.adj.row(v).iter().sum()
    }

    pub fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut parts = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            parts += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for w in 0..n {
                    if !seen[w] && (self.adj.get(v, w) != 0 || self.adj.get(w, v) != 0) {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        parts
    }

    /// Largest eigenvalue and a positive eigenvector, by power iteration
    /// on A + 1 (the shift keeps bipartite spectra from oscillating).
    pub fn perron_frobenius(&self) -> (f64, Vec<f64>) {
        let n = self.vertex_count();
        if n == 0 {
            return (0.0, Vec::new());
        }
        let mut v = vec![1.0f64 / (n as f64).sqrt(); n];
        let mut val = 0.0f64;
        for _ in 0..1000 {
            let mut w = v.clone();
            for (i, j, m) in self.adj.iter_nonzero() {
                w[i] += m as f64 * v[j];
            }
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in &mut w {
                *x /= norm;
            }
            let prev = val;
            val = norm - 1.0;
            v = w;
            if (val - prev).abs() < 1e-14 * (val.abs() + 1.0) {
                break;
            }
        }
        (val, v)
    }

    /// Graphviz source; vertex ids v0.. in fixed order, undirected
    /// edges once, parallel edges repeated.
    pub fn dot(&self) -> String {
        let symmetric = self.adj.is_symmetric();
        let mut out = String::new();
        out.push_str(if symmetric { "graph " } else { "digraph " });
        out.push_str(&format!("\"{}\" {{\n", self.name));
        for (i, name) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  v{} [label=\"{}\"];\n", i, name));
        }
        let arrow = if symmetric { "--" } else { "->" };
        for (i, j, m) in self.adj.iter_nonzero() {
            if symmetric && j < i {
                continue;
            }
            for _ in 0..m {
                out.push_str(&format!("  v{} {} v{};\n", i, arrow, j));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The simply laced Dynkin diagram as a graph. Vertex order: the long
/// arm first, then the short prongs.
pub fn dynkin(d: Diagram) -> Graph {
    let n = match d {
        Diagram::A(l) => {
            assert!(l >= 1, "A diagrams start at one node");
            l as usize
        }
        Diagram::D(l) => {
            assert!(l >= 4, "D diagrams start at four nodes");
            l as usize
        }
        Diagram::E6 => 6,
        Diagram::E7 => 7,
        Diagram::E8 => 8,
    };
    let mut adj = IntMatrix::zeros(n, n);
    {
        let mut join = |a: usize, b: usize| {
            adj.set(a, b, 1);
            adj.set(b, a, 1);
        };
        match d {
            Diagram::A(_) => {
                for i in 0..n - 1 {
                    join(i, i + 1);
                }
            }
            Diagram::D(_) => {
                for i in 0..n - 3 {
                    join(i, i + 1);
                }
                join(n - 3, n - 2);
                join(n - 3, n - 1);
            }
            Diagram::E6 => {
                for i in 0..4 {
                    join(i, i + 1);
                }
                join(2, 5);
            }
            Diagram::E7 => {
                for i in 0..5 {
                    join(i, i + 1);
                }
                join(2, 6);
            }
            Diagram::E8 => {
                for i in 0..6 {
                    join(i, i + 1);
                }
                join(2, 7);
            }
        }
    }
    let vertices = (1..=n).map(|i| i.to_string()).collect();
    Graph::new(&d.to_string(), vertices, adj)
}

/// The graph whose adjacency is the fusion matrix of one generator.
pub fn fusion_graph(ring: &FusionRing, generator: usize) -> Result<Graph> {
    let md = ring.md();
    let adj = ring.fusion_matrix(generator)?;
    let vertices = (0..md.n()).map(|i| md.label(i).name.clone()).collect();
    Ok(Graph::new(
        &format!("fusion({}, {})", md.name(), md.label(generator).name),
        vertices,
        adj,
    ))
}

/// A family of nonnegative integer matrices G_la on a graph's vertices
/// obeying the fusion rules of the modular data, with G_0 = 1 and G_1
/// the adjacency matrix of the graph.
pub struct Nimrep {
    md: Arc<ModularData>,
    graph: Graph,
    mats: Vec<IntMatrix>,
}

impl Nimrep {
    pub fn md(&self) -> &ModularData {
        &self.md
    }

    pub fn md_arc(&self) -> Arc<ModularData> {
        Arc::clone(&self.md)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn matrix(&self, la: usize) -> &IntMatrix {
        &self.mats[la]
    }

    pub fn matrices(&self) -> &[IntMatrix] {
        &self.mats
    }
}

/// Build the su(2) nimrep on an ADE diagram by the Chebyshev recursion
///   G_0 = 1, G_1 = adjacency, G_{m+1} = G_1 G_m - G_{m-1}.
/// The diagram's Coxeter number must equal the level plus two; the
/// recursion then closes (the step past the top vanishes) and stays
/// nonnegative, both of which are checked.
pub fn su2_nimrep(md: &Arc<ModularData>, d: Diagram) -> Result<Nimrep> {
    let k = md.n().saturating_sub(1);
    if md.name() != format!("SU(2)_{}", k) {
        return Err(Error::BadInput(format!(
            "nimreps on Dynkin diagrams need SU(2) data, got {}",
            md.name()
        )));
    }
    if d.level() as usize != k {
        return Err(Error::CoxeterMismatch {
            got: d.level() + 2,
            expected: k as u32 + 2,
            level: k as u32,
        });
    }
    let graph = dynkin(d);
    let mut mats = vec![IntMatrix::identity(graph.vertex_count())];
    if k >= 1 {
        mats.push(graph.adjacency().clone());
    }
    for m in 2..=k {
        let next = graph.adjacency().mul(&mats[m - 1]).sub(&mats[m - 2]);
        if !next.is_nonnegative() {
            return Err(Error::NegativeEntry(format!("G_{} on {}", m, d)));
        }
        mats.push(next);
    }
    let beyond = graph.adjacency().mul(&mats[k]).sub(&mats[k - 1]);
    if beyond.nnz() != 0 {
        return Err(Error::ValidationFailed(format!(
            "recursion on {} does not close at the Coxeter number",
            d
        )));
    }
    Ok(Nimrep {
        md: Arc::clone(md),
        graph,
        mats,
    })
}

/// sum_rho Z_rho_rho S_rho_nu / S_rho_0 in working precision.
fn spectral_sum(md: &ModularData, z: &ModularInvariant, nu: usize) -> Complex {
    let cfg = md.cfg();
    let mut acc = Complex::zero(cfg);
    for rho in 0..md.n() {
        let m = z.entry(rho, rho);
        if m == 0 {
            continue;
        }
        let row = md.s_row(rho);
        let ratio = row[nu].div(&row[0]);
        acc += &ratio.scale(&cfg.real_i64(m));
    }
    acc
}

fn same_base(md: &ModularData, z: &ModularInvariant) -> Result<()> {
    if md.name() != z.md().name() {
        return Err(Error::BadInput(format!(
            "graph lives over {}, invariant over {}",
            md.name(),
            z.md().name()
        )));
    }
    Ok(())
}

/// Match the graph's spectrum against the diagonal of an invariant:
/// vertex count, traces of every G_la, and the exact eigenvalue
/// multiplicities of the generator (eigenvalue S_rho_1/S_rho_0 with
/// multiplicity Z_rho_rho, via the characteristic polynomial).
pub fn spectrum_check(nim: &Nimrep, z: &ModularInvariant) -> Result<()> {
    let md = nim.md();
    same_base(md, z)?;
    let cfg = md.cfg();
    let bits = cfg.bits();
    let bound = cfg.residual_bound();
    let n = md.n();

    let diag: i64 = (0..n).map(|r| z.entry(r, r)).sum();
    if diag != nim.vertex_count() as i64 {
        return Err(Error::SpectrumMismatch(format!(
            "invariant diagonal sums to {}, graph has {} vertices",
            diag,
            nim.vertex_count()
        )));
    }

    for nu in 0..n {
        let tr = nim.matrix(nu).trace();
        let spec = spectral_sum(md, z, nu);
        let want = cfg.real_i64(tr);
        let resid = Real::with_val(bits, &spec.re - &want)
            .abs()
            .to_f64()
            .max(spec.im.to_f64().abs());
        if resid > bound {
            return Err(Error::SpectrumMismatch(format!(
                "tr G_{} = {} but the spectral sum gives {}",
                md.label(nu).name,
                tr,
                spec.re.to_f64()
            )));
        }
    }

    let g1 = nim.matrix(1);
    for rho in 0..n {
        let row = md.s_row(rho);
        let x = row[1].div(&row[0]).re;
        let mult = g1.eigen_multiplicity(&x, cfg) as i64;
        let want = z.entry(rho, rho);
        if mult != want {
            return Err(Error::SpectrumMismatch(format!(
                "eigenvalue at exponent {} has multiplicity {} in the graph, {} in the invariant",
                md.label(rho).name,
                mult,
                want
            )));
        }
    }
    Ok(())
}

/// Diagonal of the nimrep matrices at one vertex, as coefficients over
/// the sectors. At a marked vertex of a type I graph this is the dual
/// canonical endomorphism of the extension.
pub fn theta_at_vertex(nim: &Nimrep, v: usize) -> Vec<i64> {
    (0..nim.md().n()).map(|nu| nim.matrix(nu).get(v, v)).collect()
}

/// Which sectors may enter a dual canonical endomorphism read off an
/// invariant's conjugate diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaFilter {
    All,
    SelfConjugate,
    /// Dynkin labels summing to an even number; for su(2) these are the
    /// integer spins.
    EvenWeightSum,
}

/// Coefficients Z_{la, conj(la)} over the filtered sectors.
pub fn candidate_theta(z: &ModularInvariant, filter: ThetaFilter) -> Vec<i64> {
    let md = z.md();
    (0..md.n())
        .map(|la| {
            let keep = match filter {
                ThetaFilter::All => true,
                ThetaFilter::SelfConjugate => md.conj(la) == la,
                ThetaFilter::EvenWeightSum => {
                    md.label(la).weight.iter().sum::<i64>() % 2 == 0
                }
            };
            if keep {
                z.entry(la, md.conj(la))
            } else {
                0
            }
        })
        .collect()
}

/// Verify, for every sector nu, the three-way trace identity between
/// the graph trace, the fusion-weighted sum over the invariant, and the
/// spectral sum. Returns the common values.
pub fn theta_sum_check(nim: &Nimrep, z: &ModularInvariant) -> Result<Vec<i64>> {
    let md = nim.md();
    same_base(md, z)?;
    let cfg = md.cfg();
    let bits = cfg.bits();
    let bound = cfg.residual_bound();
    let ring = FusionRing::new(nim.md_arc());
    let mut out = Vec::with_capacity(md.n());
    for nu in 0..md.n() {
        let graph_tr = nim.matrix(nu).trace();
        let fusion_tr = z.matrix().mul(&ring.fusion_matrix(nu)?).trace();
        let spec = spectral_sum(md, z, nu);
        let want = cfg.real_i64(graph_tr);
        let resid = Real::with_val(bits, &spec.re - &want)
            .abs()
            .to_f64()
            .max(spec.im.to_f64().abs());
        if graph_tr != fusion_tr || resid > bound {
            return Err(Error::IdentityViolated {
                sector: md.label(nu).name.clone(),
                graph: graph_tr,
                fusion: fusion_tr,
                spectral: spec.re.to_f64(),
            });
        }
        out.push(graph_tr);
    }
    Ok(out)
}
