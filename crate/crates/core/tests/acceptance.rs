//! Twelve end-to-end checks, one printed PASS/FAIL line each: the SU(2)
//! invariant algebras, nimrep multiplicity identities, theta tables, the
//! exotic E8 and SU(3) hom counts, sandwich splits, the SU(7) pair with
//! its heterotic pullback, the cyclic-model suite, and the always-on
//! exactness guarantees.

use minv_core::branching::{
    embedding_branching, heterotic_invariant, pull_back, restrict_invariant,
    simple_current_extension, BranchingMatrix, Embedding,
};
use minv_core::error::{Error, Result};
use minv_core::exact::{IntMatrix, PrecisionConfig};
use minv_core::fusion::{alpha_hom, associativity_check, FusionRing, SectorVector};
use minv_core::invariants::{
    ade_invariant, counts, decompose, enumerate_physical, su3_invariant, su7_invariants,
    zn_invariants, Diagram, ModularInvariant, Su3Series,
};
use minv_core::modular::{level_one, su_n_k, verify_modular, zn_anyon, LevelOneFamily, ModularData};
use minv_core::nimrep::{
    candidate_theta, spectrum_check, su2_nimrep, theta_at_vertex, theta_sum_check, ThetaFilter,
};
use minv_core::report::ReportSet;
use std::cell::RefCell;
use std::sync::Arc;

fn fail(msg: String) -> Error {
    Error::ValidationFailed(msg)
}

fn expect<T: PartialEq + std::fmt::Debug>(got: T, want: T, what: &str) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(fail(format!("{what}: got {got:?}, want {want:?}")))
    }
}

fn su2(k: u32, cfg: &PrecisionConfig) -> Result<Arc<ModularData>> {
    Ok(Arc::new(su_n_k(2, k, cfg)?))
}

fn even_spins(n: usize) -> Vec<i64> {
    (0..n).map(|l| (l % 2 == 0) as i64).collect()
}

fn spins(n: usize, at: &[usize]) -> Vec<i64> {
    let mut v = vec![0i64; n];
    for &i in at {
        v[i] = 1;
    }
    v
}

fn vector(n: usize, terms: &[(usize, i64)]) -> SectorVector {
    let mut v = vec![0i64; n];
    for &(i, c) in terms {
        v[i] = c;
    }
    SectorVector::from_coeffs(v)
}

fn run_check<F: FnOnce() -> Result<String>>(set: &mut ReportSet, name: &str, f: F) {
    set.run(name, f);
    println!("{}", set.checks.last().expect("just ran"));
}

/// The split must consist of distinct multiplicity-one permutations:
/// the identity plus maps that move exactly the fixed-point copies
/// (labels carrying '#') among themselves.
fn check_fixed_point_split(b: &BranchingMatrix, terms: usize, what: &str) -> Result<()> {
    let parts = b.sandwich_decomposition()?;
    let n = b.ext_count();
    let fp: Vec<usize> = (0..n).filter(|&t| b.ext_labels()[t].contains('#')).collect();
    if parts.len() != terms {
        return Err(fail(format!(
            "{what}: expected {terms} permutation terms, got {}",
            parts.len()
        )));
    }
    let id: Vec<usize> = (0..n).collect();
    if !parts.iter().any(|(p, _)| *p == id) {
        return Err(fail(format!("{what}: identity term missing")));
    }
    for (a, (p, m)) in parts.iter().enumerate() {
        if *m != 1 {
            return Err(fail(format!("{what}: multiplicity {m} != 1")));
        }
        if parts.iter().skip(a + 1).any(|(q, _)| q == p) {
            return Err(fail(format!("{what}: repeated permutation term")));
        }
        if *p == id {
            continue;
        }
        for v in 0..n {
            if fp.contains(&v) {
                if p[v] == v || !fp.contains(&p[v]) {
                    return Err(fail(format!(
                        "{what}: a non-identity term must move every fixed-point copy within the copies"
                    )));
                }
            } else if p[v] != v {
                return Err(fail(format!(
                    "{what}: a non-identity term moved an unsplit sector"
                )));
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let c = PrecisionConfig::with_digits(50).expect("workable precision");
    let mut set = ReportSet::new();
    let su7_cell: RefCell<Option<(ModularInvariant, BranchingMatrix)>> = RefCell::new(None);

    run_check(&mut set, "su2_16_invariant_algebra", || {
        let md = su2(16, &c)?;
        let a = ade_invariant(&md, Diagram::A(17))?;
        let d = ade_invariant(&md, Diagram::D(10))?;
        let e = ade_invariant(&md, Diagram::E7)?;
        if *a.matrix() != IntMatrix::identity(17) {
            return Err(fail("A17 is not the identity".into()));
        }
        expect(d.trace(), 10, "tr D10")?;
        expect(d.matrix().sq_sum(), 20, "|D10|^2")?;
        expect(e.trace(), 7, "tr E7")?;
        expect(e.matrix().sq_sum(), 17, "|E7|^2")?;
        if d.product(&d) != d.matrix().scale(2) {
            return Err(fail("D10 . D10 != 2 D10".into()));
        }
        if d.product(&e) != e.matrix().scale(2) || e.product(&d) != e.matrix().scale(2) {
            return Err(fail("D10 . E7 != 2 E7".into()));
        }
        if e.product(&e) != d.matrix().add(e.matrix()) {
            return Err(fail("E7 . E7 != D10 + E7".into()));
        }
        Ok("D.D = 2D, D.E = E.D = 2E, E.E = D + E on {A17, D10, E7}".into())
    });

    run_check(&mut set, "su2_even_level_fusion_rules", || {
        let mut rules = 0;
        for k in (4..=28).step_by(2) {
            let md = su2(k, &c)?;
            let ell = k / 2 + 2;
            let d = ade_invariant(&md, Diagram::D(ell))?;
            let dd = d.product(&d);
            if k % 4 == 0 {
                if dd != d.matrix().scale(2) {
                    return Err(fail(format!("D{ell}^2 != 2 D{ell} at level {k}")));
                }
            } else if dd != IntMatrix::identity(md.n()) {
                return Err(fail(format!("D{ell}^2 != A{} at level {k}", k + 1)));
            }
            rules += 1;
        }
        let e6 = ade_invariant(&su2(10, &c)?, Diagram::E6)?;
        if e6.product(&e6) != e6.matrix().scale(2) {
            return Err(fail("E6^2 != 2 E6".into()));
        }
        let e8 = ade_invariant(&su2(28, &c)?, Diagram::E8)?;
        if e8.product(&e8) != e8.matrix().scale(4) {
            return Err(fail("E8^2 != 4 E8".into()));
        }
        Ok(format!(
            "{rules} D-series rules at levels 4..28 plus E6^2 = 2 E6 and E8^2 = 4 E8"
        ))
    });

    run_check(&mut set, "su2_16_enumeration_complete", || {
        let md = su2(16, &c)?;
        let found = enumerate_physical(&md, &c)?;
        expect(found.invariants.len(), 3, "number of physical invariants")?;
        if found.bound_saturated {
            return Err(fail("entry bound saturated during the search".into()));
        }
        for d in [Diagram::A(17), Diagram::D(10), Diagram::E7] {
            let want = ade_invariant(&md, d)?;
            if !found.invariants.iter().any(|z| z.matrix() == want.matrix()) {
                return Err(fail(format!("{} missing from the enumeration", want.name())));
            }
        }
        Ok("exactly {A17, D10, E7}, search bound untouched".into())
    });

    run_check(&mut set, "nimrep_multiplicity_identities", || {
        let cases = [
            (16, Diagram::A(17)),
            (16, Diagram::D(10)),
            (16, Diagram::E7),
            (10, Diagram::E6),
            (28, Diagram::E8),
        ];
        let mut sectors = 0;
        for (k, d) in cases {
            let md = su2(k, &c)?;
            let z = ade_invariant(&md, d)?;
            let nim = su2_nimrep(&md, d)?;
            spectrum_check(&nim, &z)?;
            sectors += theta_sum_check(&nim, &z)?.len();
        }
        Ok(format!(
            "graph, fusion, and spectral multiplicities agree on {sectors} sectors over 5 nimreps"
        ))
    });

    run_check(&mut set, "theta_tables_at_marked_vertices", || {
        let mut d10_theta = even_spins(17);
        d10_theta[8] = 2;
        let cases: Vec<(&str, u32, Diagram, usize, Vec<i64>)> = vec![
            ("A17", 16, Diagram::A(17), 8, even_spins(17)),
            ("D10", 16, Diagram::D(10), 4, d10_theta),
            ("D7", 10, Diagram::D(7), 2, even_spins(11)),
            ("E6", 10, Diagram::E6, 5, spins(11, &[0, 4, 6, 10])),
            ("E7", 16, Diagram::E7, 6, spins(17, &[0, 4, 6, 8, 10, 12, 16])),
            ("E8", 28, Diagram::E8, 0, spins(29, &[0, 6, 10, 12, 16, 18, 22, 28])),
        ];
        for (name, k, d, v, want) in cases {
            let md = su2(k, &c)?;
            let z = ade_invariant(&md, d)?;
            let nim = su2_nimrep(&md, d)?;
            if theta_at_vertex(&nim, v) != want {
                return Err(fail(format!("theta of {name} at vertex {v} disagrees")));
            }
            if candidate_theta(&z, ThetaFilter::EvenWeightSum) != want {
                return Err(fail(format!("even-spin diagonal of {name} disagrees")));
            }
        }
        Ok("six vertex decompositions, each equal to the even-spin diagonal of Z".into())
    });

    run_check(&mut set, "e8_exotic_sector_identification", || {
        let md = su2(28, &c)?;
        let n = md.n();
        let ring = FusionRing::new(Arc::clone(&md));
        let x = vector(n, &[(3, 1), (5, 1), (7, -1)]);
        let x2 = ring.fuse(&x, &x)?;
        let want = vector(
            n,
            &[(0, 3), (2, 3), (4, 1), (6, 1), (10, -2), (12, -1), (14, 1)],
        );
        if x2.coeffs() != want.coeffs() {
            return Err(fail("(l3 + l5 - l7)^2 expansion disagrees".into()));
        }
        let theta = SectorVector::from_indices(n, &[0, 10, 18, 28]);
        expect(ring.fuse(&theta, &x2)?.coeff(0), 1, "<theta x^2, id>")?;
        let z = ade_invariant(&md, Diagram::E8)?;
        let id = SectorVector::label(n, 0);
        let l1 = SectorVector::label(n, 1);
        let l2 = SectorVector::label(n, 2);
        expect(alpha_hom(&z, &ring, (&x, &x), (&x, &x))?, 1, "self pairing")?;
        expect(alpha_hom(&z, &ring, (&x, &x), (&id, &id))?, 0, "pairing with id")?;
        expect(alpha_hom(&z, &ring, (&x, &x), (&l1, &l1))?, 0, "pairing with (1,1)")?;
        expect(alpha_hom(&z, &ring, (&x, &x), (&l2, &l2))?, 0, "pairing with (2,2)")?;
        // the level 16 companion: <b^2, theta> for b = l2 + l4 + l6
        let md16 = su2(16, &c)?;
        let ring16 = FusionRing::new(Arc::clone(&md16));
        let b = SectorVector::from_indices(17, &[2, 4, 6]);
        let bb = ring16.fuse(&b, &b)?;
        expect(
            bb.pairing(&SectorVector::from_indices(17, &[0, 8, 16])),
            9,
            "<b^2, theta_E7>",
        )?;
        Ok("the virtual square pairs to 1 with theta and is disjoint from id, (1,1), (2,2)".into())
    });

    run_check(&mut set, "su3_9_exceptional_hom_counts", || {
        let md = Arc::new(su_n_k(3, 9, &c)?);
        expect(md.n(), 55, "label count")?;
        let z = su3_invariant(&md, Su3Series::E12)?;
        let ring = FusionRing::new(Arc::clone(&md));
        let at = |name: &str| {
            md.index_of(name)
                .ok_or_else(|| fail(format!("no label {name}")))
        };
        let p10 = SectorVector::label(55, at("(1,0)")?);
        let p20 = SectorVector::label(55, at("(2,0)")?);
        let sq = ring.fuse(&p10, &p10)?;
        expect(alpha_hom(&z, &ring, (&p10, &p10), (&p10, &p10))?, 1, "first hom count")?;
        expect(alpha_hom(&z, &ring, (&p10, &sq), (&p10, &sq))?, 2, "second hom count")?;
        expect(alpha_hom(&z, &ring, (&p20, &p10), (&p20, &p10))?, 1, "third hom count")?;
        expect(alpha_hom(&z, &ring, (&p20, &sq), (&p20, &sq))?, 4, "fourth hom count")?;
        let ct = counts(&z);
        expect(ct.trace, 12, "tr Z")?;
        expect(ct.full_pairs, 72, "tr Z^T Z")?;
        expect(ct.row0_sq, 6, "negative chiral orbits")?;
        expect(ct.col0_sq, 6, "positive chiral orbits")?;
        expect(ct.zzstar_00, 6, "(Z Z*)_00")?;
        if z.adjoint().product(&z) != z.matrix().scale(6) {
            return Err(fail("Z* Z != 6 Z".into()));
        }
        Ok("hom counts 1, 2, 1, 4; six chiral orbits; Z* Z = 6 Z on 55 labels".into())
    });

    run_check(&mut set, "sandwich_permutation_splits", || {
        let md16 = su2(16, &c)?;
        let bp = simple_current_extension(&md16, 16, 2)?;
        check_fixed_point_split(&bp, 2, "level 16 orbifold")?;

        let md39 = Arc::new(su_n_k(3, 9, &c)?);
        let j = md39
            .index_of("(9,0)")
            .ok_or_else(|| fail("no label (9,0)".into()))?;
        let b3 = simple_current_extension(&md39, j, 3)?;
        check_fixed_point_split(&b3, 3, "level 9 orbifold")?;

        let b6 = embedding_branching(&md39, Embedding::Su3_9InE6)?;
        let parts = b6.sandwich_decomposition()?;
        let id3: Vec<usize> = vec![0, 1, 2];
        let swap3: Vec<usize> = vec![0, 2, 1];
        if parts.len() != 2
            || !parts.iter().any(|p| *p == (id3.clone(), 3))
            || !parts.iter().any(|p| *p == (swap3.clone(), 3))
        {
            return Err(fail("embedded pair should split as 3 id + 3 conjugation".into()));
        }

        let bm = bp.permuted_rows(&[0, 4, 2, 3, 1, 5]);
        let e7 = ade_invariant(&md16, Diagram::E7)?;
        if restrict_invariant(&bp, &bm)?.matrix() != e7.matrix() {
            return Err(fail("ladder restriction is not E7".into()));
        }
        let parts = bm.sandwich_decomposition()?;
        let id6: Vec<usize> = (0..6).collect();
        let mut tswap = id6.clone();
        tswap.swap(1, 5);
        if parts.len() != 2
            || !parts.iter().any(|p| *p == (id6.clone(), 1))
            || !parts.iter().any(|p| *p == (tswap.clone(), 1))
        {
            return Err(fail("ladder sandwich should split as id + one transposition".into()));
        }
        Ok("orbifold, embedded, and ladder sandwiches split into permutation sums".into())
    });

    run_check(&mut set, "su7_7_pair_structure", || {
        let md = Arc::new(su_n_k(7, 7, &c)?);
        expect(md.n(), 1716, "label count")?;
        let (z1, zs) = su7_invariants(&md)?;
        let fp = md
            .index_of("(1,1,1,1,1,1)")
            .ok_or_else(|| fail("missing the symmetric fixed point".into()))?;
        expect(z1.trace(), 96, "tr Z1")?;
        expect(zs.trace(), 60, "tr Zs")?;
        expect(z1.matrix().sq_sum(), 3168, "tr Z1^T Z1")?;
        expect(zs.matrix().sq_sum(), 3600, "tr Zs^T Zs")?;
        expect(z1.entry(fp, fp), 33, "Z1 corner")?;
        expect(zs.entry(fp, fp), 25, "Zs corner")?;
        expect(zs.entry(0, fp), 5, "Zs top border")?;
        expect(zs.entry(fp, 0), 5, "Zs left border")?;
        let z1sq = z1.product(&z1);
        if z1sq != z1.matrix().scale(28).add(&zs.matrix().scale(8)) {
            return Err(fail("Z1^2 != 28 Z1 + 8 Zs".into()));
        }
        if zs.product(&zs) != zs.matrix().scale(60) {
            return Err(fail("Zs^2 != 60 Zs".into()));
        }
        expect(decompose(&z1sq, &[&z1, &zs]), vec![vec![28, 8]], "Z1^2 over {Z1, Zs}")?;
        let b = embedding_branching(&md, Embedding::Su7_7InSo48)?;
        let s = b.sandwich()?;
        let want = [[36, 0, 4, 4], [0, 28, 0, 0], [4, 0, 16, 16], [4, 0, 16, 16]];
        for (i, row) in want.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                if s.get(i, j) != w {
                    return Err(fail(format!("boundary sandwich entry ({i}, {j})")));
                }
            }
        }
        if b.sandwich_decomposition().is_ok() {
            return Err(fail(
                "the boundary sandwich must not split into permutations".into(),
            ));
        }
        *su7_cell.borrow_mut() = Some((zs, b));
        Ok("traces 96/60, corners 33/25, Z1^2 = 28 Z1 + 8 Zs, Zs^2 = 60 Zs on 1716 labels".into())
    });

    run_check(&mut set, "so48_heterotic_pullback", || {
        let guard = su7_cell.borrow();
        let (zs, b) = guard
            .as_ref()
            .ok_or_else(|| fail("needs the structures from the previous check".into()))?;
        let ext = b
            .ext_md()
            .ok_or_else(|| fail("embedding carries no extended data".into()))?;
        let q = heterotic_invariant(ext)?;
        expect(q.entry(0, 0), 1, "vacuum normalization")?;
        if q.matrix().is_symmetric() {
            return Err(fail("the twisted invariant should be asymmetric".into()));
        }
        let found = enumerate_physical(ext, &c)?;
        if !found.invariants.iter().any(|z| z.matrix() == q.matrix()) {
            return Err(fail("twisted invariant missing from the enumeration".into()));
        }
        if pull_back(b, q.matrix())?.matrix() != zs.matrix() {
            return Err(fail("pullback through the branching is not Zs".into()));
        }
        Ok(format!(
            "asymmetric invariant found among {} physical ones; pullback equals Zs",
            found.invariants.len()
        ))
    });

    run_check(&mut set, "zn_divisor_suite", || {
        let cases: [(u32, &[i64]); 3] = [(5, &[1, 5]), (9, &[1, 3, 9]), (15, &[1, 3, 5, 15])];
        let mut total = 0;
        for (n, divs) in cases {
            let md = Arc::new(zn_anyon(n, 2, &c)?);
            let list = zn_invariants(&md, &c)?;
            let deltas: Vec<i64> = list.iter().map(|(d, _)| *d).collect();
            expect(deltas.as_slice(), divs, &format!("divisors at n = {n}"))?;
            for (delta, z) in &list {
                for l in 0..md.n() {
                    let want = (l as i64 % delta == 0) as i64;
                    if z.entry(l, md.conj(l)) != want {
                        return Err(fail(format!(
                            "conjugate diagonal of delta = {delta} at n = {n}"
                        )));
                    }
                }
                let partner = n as i64 / delta;
                let (_, zp) = list
                    .iter()
                    .find(|(e, _)| *e == partner)
                    .ok_or_else(|| fail(format!("no partner divisor {partner}")))?;
                for l in 0..md.n() {
                    if z.entry(l, md.conj(l)) != zp.entry(l, l) {
                        return Err(fail(format!(
                            "delta <-> n/delta duality at n = {n}, delta = {delta}"
                        )));
                    }
                }
                total += 1;
            }
        }
        Ok(format!(
            "{total} invariants over Z_5, Z_9, Z_15: divisor diagonals and the delta duality"
        ))
    });

    run_check(&mut set, "always_on_verification", || {
        let mut roster: Vec<Arc<ModularData>> = Vec::new();
        for k in (4..=28).step_by(2) {
            roster.push(su2(k, &c)?);
        }
        roster.push(Arc::new(su_n_k(3, 9, &c)?));
        for n in [5, 9, 15] {
            roster.push(Arc::new(zn_anyon(n, 2, &c)?));
        }
        for fam in [
            LevelOneFamily::Su(6),
            LevelOneFamily::So(5),
            LevelOneFamily::So(48),
            LevelOneFamily::G2,
            LevelOneFamily::E6,
            LevelOneFamily::E7,
            LevelOneFamily::E8,
        ] {
            roster.push(Arc::new(level_one(fam, &c)?));
        }
        let mut worst = 0.0f64;
        for md in &roster {
            let r = verify_modular(md, &c);
            if !r.pass() {
                return Err(r.to_error());
            }
            worst = worst.max(r.max_residual());
            let ring = FusionRing::new(Arc::clone(md));
            associativity_check(&ring, 40)?;
            ring.fusion_matrix(md.n() - 1)?;
        }

        let md16 = su2(16, &c)?;
        let ring = FusionRing::new(Arc::clone(&md16));
        let nim = su2_nimrep(&md16, Diagram::D(10))?;
        let mut identities = 0;
        for nu in 0..md16.n() {
            for mu in 0..md16.n() {
                let lhs = nim.matrix(nu).mul(nim.matrix(mu));
                let mut rhs = IntMatrix::zeros(10, 10);
                for (rho, m) in ring.verlinde(nu, mu)?.support() {
                    rhs = rhs.add(&nim.matrix(rho).scale(m));
                }
                if lhs != rhs {
                    return Err(fail(format!("nimrep fusion identity at ({nu}, {mu})")));
                }
                identities += 1;
            }
        }

        let basis = [
            ade_invariant(&md16, Diagram::A(17))?,
            ade_invariant(&md16, Diagram::D(10))?,
            ade_invariant(&md16, Diagram::E7)?,
        ];
        let refs: Vec<&ModularInvariant> = basis.iter().collect();
        let mut recomposed = 0;
        for a in &basis {
            for b in &basis {
                let m = a.product(b);
                let combos = decompose(&m, &refs);
                if combos.is_empty() {
                    return Err(fail(format!(
                        "{} . {} has no decomposition",
                        a.name(),
                        b.name()
                    )));
                }
                for combo in &combos {
                    let mut sum = IntMatrix::zeros(17, 17);
                    for (z, &cf) in basis.iter().zip(combo) {
                        sum = sum.add(&z.matrix().scale(cf));
                    }
                    if sum != m {
                        return Err(fail("a reported decomposition fails to recompose".into()));
                    }
                    recomposed += 1;
                }
            }
        }
        Ok(format!(
            "{} systems at residual <= {:.1e}; {identities} nimrep fusion identities; {recomposed} decompositions recomposed",
            roster.len(),
            worst
        ))
    });

    println!("{}", set.summary());
    assert!(set.all_pass(), "\n{}", set.summary());
}
