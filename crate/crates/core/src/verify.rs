//! Self-checks against known values and independent oracles.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::assemble::{
    assemble_ghilb, assemble_geometric, assemble_punctual, assemble_severi, evaluate, structural_summary,
    AlgebraSpec, GeometricSubsetSpec,
};
use crate::chern::{BundleModel, ChernPoly, PlaneSpecialization, SurfaceModel};
use crate::diagram::{bell_transform, set_partitions, sieve_coefficient, symbolic_coefficients, DiagramND};
use crate::multidegree::{weight_context, MonomialIdeal};
use crate::poly::{rat, LinearForm, MPoly, Monomial, Rational, VariableContext};
use crate::residue::{
    block_monomial, grassmann_fixed_point_sum, grassmann_residue_problem, iterated_residue, ResidueProblem,
};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    /// Empty on success; otherwise the exact mismatches.
    pub detail: Vec<String>,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub results: Vec<CriterionResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn get(&self, id: usize) -> Option<&CriterionResult> {
        self.results.iter().find(|r| r.id == id)
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {} ({} ms)", self.id, self.name, self.millis)?;
        for d in &self.detail {
            write!(f, "\n       {d}")?;
        }
        Ok(())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        let passed = self.results.iter().filter(|r| r.passed).count();
        write!(f, "{passed}/{} passed", self.results.len())
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Surface used for the one-node check; swap in perturbed Segre values
    /// for a negative control.
    pub surface: SurfaceModel,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            surface: SurfaceModel::generic_surface(),
            seed: 0x5eed,
        }
    }
}

pub fn verify_suite() -> VerifyReport {
    verify_suite_with(&VerifyOptions::default())
}

type CheckFn = Box<dyn Fn(&VerifyOptions) -> Vec<String> + Sync>;
type Check = (usize, &'static str, CheckFn);

pub fn verify_suite_with(opts: &VerifyOptions) -> VerifyReport {
    let checks: Vec<Check> = vec![
        (1, "one-node coefficient a1", Box::new(|o| check_a1(&o.surface))),
        (2, "two-node coefficient a2", Box::new(|_| check_a2())),
        (3, "exponential transform", Box::new(|_| check_bell())),
        (4, "one-nodal plane curves", Box::new(|_| check_plane())),
        (5, "Grassmannian fixed points", Box::new(|o| check_grassmann(o.seed, 20))),
        (6, "residue orientation", Box::new(|_| check_orientation(4))),
        (7, "multidegree axioms", Box::new(|o| check_multidegree(o.seed, 25))),
        (8, "curvilinear sums", Box::new(|o| check_curvilinear(o.seed, 50, 2))),
        (9, "sieve identity", Box::new(|_| check_sieve(6))),
        (10, "geometric vs GHilb structure", Box::new(|_| check_specialization(4))),
    ];
    let results = checks
        .into_iter()
        .map(|(id, name, f)| {
            let t = Instant::now();
            let detail = f(opts);
            CriterionResult {
                id,
                name: name.to_string(),
                passed: detail.is_empty(),
                detail,
                millis: t.elapsed().as_millis(),
            }
        })
        .collect();
    VerifyReport { results }
}

/// Exact coefficient diffs `key: expected e, got g (delta g−e)`.
pub fn diff_maps(expected: &BTreeMap<String, Rational>, got: &BTreeMap<String, Rational>) -> Vec<String> {
    let mut keys: Vec<&String> = expected.keys().chain(got.keys()).collect();
    keys.sort();
    keys.dedup();
    let zero = Rational::zero();
    keys.into_iter()
        .filter_map(|k| {
            let e = expected.get(k).unwrap_or(&zero);
            let g = got.get(k).unwrap_or(&zero);
            (e != g).then(|| format!("{k}: expected {e}, got {g} (delta {})", g - e))
        })
        .collect()
}

fn coefficient_map(pairs: &[(&str, i64)]) -> BTreeMap<String, Rational> {
    pairs
        .iter()
        .filter(|(_, v)| *v != 0)
        .map(|(k, v)| (k.to_string(), Rational::from_integer((*v).into())))
        .collect()
}

fn err(e: impl fmt::Display) -> Vec<String> {
    vec![format!("error: {e}")]
}

/// The one-node problem on `surface`, compared with `3L² + 2Lc1 + c2`.
pub fn check_a1(surface: &SurfaceModel) -> Vec<String> {
    let run = || -> Result<BTreeMap<String, Rational>, String> {
        let g = DiagramND::from_partition(&[2, 1]).map_err(|e| e.to_string())?;
        let a = AlgebraSpec::from_diagram(&g).with_prefactor(rat(1, 2));
        let p = assemble_punctual(&a, &BundleModel::line("L"), surface, &ChernPoly::class(2)).map_err(|e| e.to_string())?;
        Ok(evaluate(&p, surface).map_err(|e| e.to_string())?.coefficients)
    };
    match run() {
        Ok(got) => diff_maps(&coefficient_map(&[("L^2", 3), ("L*c1", 2), ("c2", 1)]), &got),
        Err(e) => err(e),
    }
}

pub fn check_a2() -> Vec<String> {
    let run = || -> Result<(BTreeMap<String, Rational>, MPoly), String> {
        let a = assemble_severi(2, None).map_err(|e| e.to_string())?;
        let e = evaluate(&a, &SurfaceModel::generic_surface()).map_err(|e| e.to_string())?;
        Ok((e.coefficients, e.top.remainder))
    };
    match run() {
        Ok((got, rem)) => {
            let mut d = diff_maps(
                &coefficient_map(&[("L^2", -42), ("L*c1", -39), ("c1^2", -6), ("c2", -7)]),
                &got,
            );
            if !rem.is_zero() {
                d.push(format!("nonzero off-top remainder {rem}"));
            }
            d
        }
        Err(e) => err(e),
    }
}

pub fn check_bell() -> Vec<String> {
    let a = symbolic_coefficients(3);
    let p = bell_transform(&a);
    let ctx = a[0].ctx();
    let mut out = Vec::new();
    for (i, expect) in [(1, "a1^2 + a2"), (2, "a1^3 + 3*a1*a2 + a3")] {
        match MPoly::parse(ctx, expect) {
            Ok(e) if e == p[i] => {}
            Ok(_) => out.push(format!("P{}: expected {expect}, got {}", i + 1, p[i])),
            Err(e) => out.push(format!("error: {e}")),
        }
    }
    out
}

/// `a1` on the plane with `L = dH` equals `3(d−1)²`.
pub fn check_plane() -> Vec<String> {
    let x = SurfaceModel::p2();
    let g = match DiagramND::from_partition(&[2, 1]) {
        Ok(g) => g,
        Err(e) => return err(e),
    };
    let a = AlgebraSpec::from_diagram(&g).with_prefactor(rat(1, 2));
    let e = match assemble_punctual(&a, &BundleModel::line("L"), &x, &ChernPoly::class(2)).and_then(|p| evaluate(&p, &x)) {
        Ok(e) => e,
        Err(e) => return err(e),
    };
    let mut out = Vec::new();
    for d in 3..=6i64 {
        let spec = PlaneSpecialization::new(d);
        let expect = Rational::from_integer((3 * (d - 1) * (d - 1)).into());
        match spec.integrate(e.residue.ctx(), &e.top, "L") {
            Some(v) if v == expect => {}
            Some(v) => out.push(format!("d={d}: expected {expect}, got {v}")),
            None => out.push(format!("d={d}: top degree has classes without plane values")),
        }
    }
    out
}

/// Random exponent vector of length `d` summing to `total`.
fn random_composition(rng: &mut ChaCha8Rng, d: usize, total: usize) -> Vec<i32> {
    let mut e = vec![0; d];
    for _ in 0..total {
        e[rng.gen_range(0..d)] += 1;
    }
    e
}

pub fn check_grassmann(seed: u64, samples: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (n, d) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
        for _ in 0..samples {
            let exps = random_composition(&mut rng, d, d * (n - d));
            let alpha = block_monomial(&exps);
            let res = grassmann_residue_problem(n, d, &alpha)
                .and_then(|p| iterated_residue(&p))
                .and_then(|r| grassmann_fixed_point_sum(n, d, &alpha).map(|f| (r, f)));
            match res {
                Ok((r, f)) => match r.embed_by_name(f.ctx()) {
                    Ok(r) if r == f => {}
                    Ok(r) => out.push(format!("(n,d)=({n},{d}) alpha=z^{exps:?}: residue {r}, fixed points {f}")),
                    Err(e) => out.push(format!("error: {e}")),
                },
                Err(e) => out.push(format!("(n,d)=({n},{d}) alpha=z^{exps:?}: {e}")),
            }
        }
    }
    out
}

/// `Res dz/(z1⋯zk) = (−1)^k`.
pub fn check_orientation(max_k: usize) -> Vec<String> {
    let mut out = Vec::new();
    for k in 1..=max_k {
        let ctx = VariableContext::block(k);
        let mut p = ResidueProblem::new(&ctx, MPoly::one(&ctx));
        for v in 0..k {
            let mut z = std::collections::BTreeMap::new();
            z.insert(v, Rational::one());
            match LinearForm::new(z, MPoly::zero(&ctx), 1) {
                Ok(f) => p.denominator.push(f),
                Err(e) => return err(e),
            }
        }
        let expect = if k % 2 == 0 { 1 } else { -1 };
        match iterated_residue(&p) {
            Ok(r) if r == MPoly::integer(&ctx, expect) => {}
            Ok(r) => out.push(format!("k={k}: expected {expect}, got {r}")),
            Err(e) => out.push(format!("k={k}: {e}")),
        }
    }
    out
}

fn mdeg(gens: Vec<Vec<u32>>, names: &[&str]) -> Result<MPoly, String> {
    let ctx = weight_context(&["a", "b", "c", "d"]);
    MonomialIdeal::with_symbols(gens, names)
        .and_then(|i| i.multidegree())
        .map_err(|e| e.to_string())?
        .embed_by_name(&ctx)
        .map_err(|e| e.to_string())
}

pub fn check_multidegree(seed: u64, samples: usize) -> Vec<String> {
    const NAMES: [&str; 4] = ["a", "b", "c", "d"];
    let ctx = weight_context(&NAMES);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d64);
    let mut out = Vec::new();

    // Complete intersections: monomials on disjoint supports.
    for _ in 0..samples {
        let n = rng.gen_range(1..=4usize);
        let names = &NAMES[..n];
        let mut vars: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            vars.swap(i, rng.gen_range(0..=i));
        }
        let c = rng.gen_range(1..=n);
        // Cut the shuffled variables into c nonempty supports.
        let mut cuts: Vec<usize> = (1..n).collect();
        for i in (1..cuts.len()).rev() {
            cuts.swap(i, rng.gen_range(0..=i));
        }
        let mut cuts: Vec<usize> = cuts.into_iter().take(c - 1).collect();
        cuts.sort_unstable();
        let mut bounds = vec![0];
        bounds.extend(cuts);
        bounds.push(n);
        let mut gens = Vec::new();
        let mut expect = MPoly::one(&ctx);
        for w in bounds.windows(2) {
            let mut g = vec![0u32; n];
            let mut factor = MPoly::zero(&ctx);
            for &v in &vars[w[0]..w[1]] {
                let e = rng.gen_range(1..=3u32);
                g[v] = e;
                factor = &factor + &MPoly::monomial(&ctx, Monomial::var(v, 1), Rational::from_integer(e.into()));
            }
            gens.push(g);
            expect = &expect * &factor;
        }
        match mdeg(gens.clone(), names) {
            Ok(got) if got == expect => {}
            Ok(got) => out.push(format!("generators {gens:?}: expected {expect}, got {got}")),
            Err(e) => out.push(format!("generators {gens:?}: {e}")),
        }
    }

    let parse = |s: &str| MPoly::parse(&ctx, s).expect("fixed expression");
    type Desk<'a> = (&'a str, Vec<Vec<u32>>, &'a [&'a str], &'a str);
    let desk: [Desk; 4] = [
        // (xy) = (x) ∩ (y): components add.
        ("additivity (xy)", vec![vec![1, 1]], &NAMES[..2], "a + b"),
        ("additivity (xz, yz)", vec![vec![1, 0, 1], vec![0, 1, 1]], &NAMES[..3], "c"),
        ("(x^2, xy, y^2)", vec![vec![2, 0], vec![1, 1], vec![0, 2]], &NAMES[..2], "3*a*b"),
        ("(x^2, y^3)", vec![vec![2, 0], vec![0, 3]], &NAMES[..2], "6*a*b"),
    ];
    for (label, gens, names, expect) in desk {
        match mdeg(gens, names) {
            Ok(got) if got == parse(expect) => {}
            Ok(got) => out.push(format!("{label}: expected {expect}, got {got}")),
            Err(e) => out.push(format!("{label}: {e}")),
        }
    }
    // (x) ∩ (y, z) has a single top component.
    let union = MonomialIdeal::with_symbols(vec![vec![1, 0, 0]], &NAMES[..3])
        .and_then(|x| x.intersect(&MonomialIdeal::with_symbols(vec![vec![0, 1, 0], vec![0, 0, 1]], &NAMES[..3])?))
        .and_then(|i| i.multidegree())
        .map_err(|e| e.to_string())
        .and_then(|p| p.embed_by_name(&ctx).map_err(|e| e.to_string()));
    match union {
        Ok(got) if got == parse("a") => {}
        Ok(got) => out.push(format!("(x) ∩ (y,z): expected a, got {got}")),
        Err(e) => out.push(format!("(x) ∩ (y,z): {e}")),
    }

    // Positivity on random ideals.
    for _ in 0..samples {
        let n = rng.gen_range(1..=4usize);
        let gens: Vec<Vec<u32>> = (0..rng.gen_range(1..=4))
            .map(|_| (0..n).map(|_| rng.gen_range(0..=2)).collect())
            .collect();
        if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
            continue;
        }
        match mdeg(gens.clone(), &NAMES[..n]) {
            Ok(got) => {
                if got.is_zero() || got.terms().any(|(_, c)| *c <= Rational::zero()) {
                    out.push(format!("generators {gens:?}: multidegree {got} is not positive"));
                }
            }
            Err(e) => out.push(format!("generators {gens:?}: {e}")),
        }
    }
    out
}

/// Random `dim`-dimensional diagram with at most `max_boxes` boxes, grown
/// by adding addable boxes.
pub fn random_diagram(rng: &mut impl Rng, dim: usize, max_boxes: usize) -> DiagramND {
    let mut boxes: std::collections::BTreeSet<Vec<u32>> = [vec![0; dim]].into();
    let target = rng.gen_range(1..=max_boxes);
    while boxes.len() < target {
        let addable: Vec<Vec<u32>> = boxes
            .iter()
            .flat_map(|b| {
                (0..dim).map(move |a| {
                    let mut c = b.clone();
                    c[a] += 1;
                    c
                })
            })
            .filter(|c| !boxes.contains(c))
            .filter(|c| {
                (0..dim).all(|a| {
                    if c[a] == 0 {
                        return true;
                    }
                    let mut p = c.clone();
                    p[a] -= 1;
                    boxes.contains(&p)
                })
            })
            .collect();
        let pick = addable[rng.gen_range(0..addable.len())].clone();
        boxes.insert(pick);
    }
    DiagramND::new(dim, boxes).expect("grown diagrams are downward closed")
}

pub fn check_curvilinear(seed: u64, samples: usize, dim: usize) -> Vec<String> {
    let mut out = Vec::new();
    let sum = |ds: &[DiagramND]| DiagramND::curvilinear_sum(ds).map_err(|e| e.to_string());
    let fixed = || -> Result<Vec<String>, String> {
        let mut out = Vec::new();
        let one = DiagramND::from_partition(&[1]).map_err(|e| e.to_string())?;
        let g = DiagramND::from_partition(&[2, 1]).map_err(|e| e.to_string())?;
        for s in 1..=6u32 {
            let got = sum(&vec![one.clone(); s as usize])?;
            if got.to_partition() != Some(vec![s]) {
                out.push(format!("{s}·(1): got {got}"));
            }
            let got = sum(&vec![g.clone(); s as usize])?;
            if got.to_partition() != Some(vec![2 * s, s]) {
                out.push(format!("{s}·(2,1): expected ({},{s}), got {got}", 2 * s));
            }
        }
        Ok(out)
    };
    match fixed() {
        Ok(d) => out.extend(d),
        Err(e) => out.push(e),
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6376);
    for _ in 0..samples {
        let [a, b, c] = [0; 3].map(|_| random_diagram(&mut rng, dim, 6));
        let checks = || -> Result<Vec<String>, String> {
            let mut out = Vec::new();
            let ab = sum(&[a.clone(), b.clone()])?;
            let ba = sum(&[b.clone(), a.clone()])?;
            if ab != ba {
                out.push(format!("a={a} b={b}: a+b={ab}, b+a={ba}"));
            }
            let left = sum(&[ab, c.clone()])?;
            let right = sum(&[a.clone(), sum(&[b.clone(), c.clone()])?])?;
            if left != right {
                out.push(format!("a={a} b={b} c={c}: (a+b)+c={left}, a+(b+c)={right}"));
            }
            Ok(out)
        };
        match checks() {
            Ok(d) => out.extend(d),
            Err(e) => out.push(e),
        }
    }
    out
}

pub fn check_sieve(max_s: usize) -> Vec<String> {
    (1..=max_s)
        .filter_map(|s| {
            let total: BigInt = set_partitions(s).iter().map(sieve_coefficient).sum();
            let expect = BigInt::from((s == 1) as i32);
            (total != expect).then(|| format!("s={s}: sum {total}, expected {expect}"))
        })
        .collect()
}

/// Trivial-algebra geometric terms and GHilb terms agree in variable
/// counts, denominator multisets and Segre factor counts.
pub fn check_specialization(max_k: usize) -> Vec<String> {
    let f = BundleModel::line("L");
    let x = SurfaceModel::generic_surface();
    let phi = ChernPoly::class(2);
    let mut out = Vec::new();
    for k in 1..=max_k {
        let g = assemble_geometric(&GeometricSubsetSpec::trivial(k, x.dim()), &f, &x, &phi);
        let h = assemble_ghilb(k, &f, &x, &phi, &BTreeMap::new());
        let (g, h) = match (g, h) {
            (Ok(g), Ok(h)) => (g, h),
            (Err(e), _) | (_, Err(e)) => {
                out.push(format!("k={k}: {e}"));
                continue;
            }
        };
        if g.len() != h.len() {
            out.push(format!("k={k}: {} geometric terms, {} GHilb terms", g.len(), h.len()));
            continue;
        }
        for (a, b) in g.iter().zip(&h) {
            if a.partition != b.partition {
                out.push(format!("k={k}: partition order {} vs {}", a.partition, b.partition));
                continue;
            }
            let expected_vars: usize = a.partition.blocks().iter().map(|bl| bl.len() - 1).sum();
            let sa = structural_summary(&a.assembled.problem);
            let sb = structural_summary(&b.assembled.problem);
            if sa.num_vars != expected_vars {
                out.push(format!("k={k} {}: {} variables, expected {expected_vars}", a.partition, sa.num_vars));
            }
            if sa != sb {
                out.push(format!("k={k} {}: geometric {sa:?} vs GHilb {sb:?}", a.partition));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perturbed_segre_fails_a1_with_delta() {
        let bad = SurfaceModel::custom(2, &["c1", "c1^2"]).unwrap();
        let d = check_a1(&bad);
        assert!(!d.is_empty());
        assert!(d.iter().any(|l| l.contains("delta")), "{d:?}");
    }

    #[test]
    fn fast_criteria_pass() {
        assert!(check_a1(&SurfaceModel::generic_surface()).is_empty());
        assert!(check_bell().is_empty());
        assert!(check_plane().is_empty());
        assert!(check_orientation(4).is_empty());
        assert!(check_sieve(6).is_empty());
    }

    #[test]
    fn diffs_are_exact() {
        let e = coefficient_map(&[("L^2", 3)]);
        let g = coefficient_map(&[("L^2", 2), ("c2", 1)]);
        assert_eq!(
            diff_maps(&e, &g),
            ["L^2: expected 3, got 2 (delta -1)", "c2: expected 0, got 1 (delta 1)"]
        );
    }
}
