//! End-to-end acceptance checks. Runs without the test harness so that every
//! criterion prints its own line; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hilbres::assemble::{
    assemble_geometric, assemble_ghilb, assemble_severi, evaluate, structural_summary, GeometricSubsetSpec,
};
use hilbres::chern::{BundleModel, ChernPoly, PlaneSpecialization, SurfaceModel};
use hilbres::diagram::{bell_transform, set_partitions, sieve_coefficient, symbolic_coefficients, DiagramND};
use hilbres::multidegree::{weight_context, MonomialIdeal};
use hilbres::poly::{LinearForm, MPoly, Monomial, Rational, VariableContext};
use hilbres::residue::{
    block_monomial, grassmann_fixed_point_sum, grassmann_residue_problem, iterated_residue, ResidueProblem,
};
use hilbres::verify::random_diagram;

type Outcome = Result<(), String>;

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn expect_map(got: &BTreeMap<String, Rational>, want: &[(&str, i64)]) -> Outcome {
    let want: BTreeMap<String, Rational> = want.iter().filter(|(_, v)| *v != 0).map(|(k, v)| (k.to_string(), int(*v))).collect();
    if *got == want {
        Ok(())
    } else {
        Err(format!("expected {want:?}, got {got:?}"))
    }
}

fn a1() -> Outcome {
    let e = evaluate(&assemble_severi(1, None).map_err(|e| e.to_string())?, &SurfaceModel::generic_surface())
        .map_err(|e| e.to_string())?;
    expect_map(&e.coefficients, &[("L^2", 3), ("L*c1", 2), ("c1^2", 0), ("c2", 1)])?;
    if !e.top.remainder.is_zero() {
        return Err(format!("off-top remainder {}", e.top.remainder));
    }
    Ok(())
}

fn a2() -> Outcome {
    let e = evaluate(&assemble_severi(2, None).map_err(|e| e.to_string())?, &SurfaceModel::generic_surface())
        .map_err(|e| e.to_string())?;
    expect_map(&e.coefficients, &[("L^2", -42), ("L*c1", -39), ("c1^2", -6), ("c2", -7)])?;
    if !e.top.remainder.is_zero() {
        return Err(format!("off-top remainder {}", e.top.remainder));
    }
    Ok(())
}

fn bell() -> Outcome {
    let a = symbolic_coefficients(3);
    let ctx = a[0].ctx().clone();
    let p = bell_transform(&a);
    let (a1, a2, a3) = (&a[0], &a[1], &a[2]);
    let p2 = &(a1 * a1) + a2;
    let p3 = &(&(&(a1 * a1) * a1) + &(&(a2 * a1) * &MPoly::integer(&ctx, 3))) + a3;
    if p[0] != *a1 || p[1] != p2 || p[2] != p3 {
        return Err(format!("got P1={}, P2={}, P3={}", p[0], p[1], p[2]));
    }
    Ok(())
}

fn plane() -> Outcome {
    // The ℙ² preset evaluated through the generic one-node problem.
    let x = SurfaceModel::p2();
    let g = DiagramND::from_partition(&[2, 1]).map_err(|e| e.to_string())?;
    let a = hilbres::assemble::AlgebraSpec::from_diagram(&g).with_prefactor(hilbres::poly::rat(1, 2));
    let p = hilbres::assemble::assemble_punctual(&a, &BundleModel::line("L"), &x, &ChernPoly::class(2))
        .map_err(|e| e.to_string())?;
    let e = evaluate(&p, &x).map_err(|e| e.to_string())?;
    for d in 3..=6i64 {
        let v = PlaneSpecialization::new(d)
            .integrate(e.residue.ctx(), &e.top, "L")
            .ok_or("unspecializable class")?;
        if v != int(3 * (d - 1) * (d - 1)) {
            return Err(format!("d={d}: got {v}, expected {}", 3 * (d - 1) * (d - 1)));
        }
    }
    Ok(())
}

fn grassmann() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for (n, d) in [(2usize, 1usize), (3, 1), (3, 2), (4, 2)] {
        for _ in 0..20 {
            let mut exps = vec![0i32; d];
            for _ in 0..d * (n - d) {
                exps[rng.gen_range(0..d)] += 1;
            }
            let alpha = block_monomial(&exps);
            let p = grassmann_residue_problem(n, d, &alpha).map_err(|e| e.to_string())?;
            let res = iterated_residue(&p).map_err(|e| e.to_string())?;
            let fixed = grassmann_fixed_point_sum(n, d, &alpha).map_err(|e| e.to_string())?;
            let res = res.embed_by_name(fixed.ctx()).map_err(|e| e.to_string())?;
            if res != fixed {
                return Err(format!("(n,d)=({n},{d}) z^{exps:?}: residue {res} vs fixed points {fixed}"));
            }
        }
    }
    Ok(())
}

fn orientation() -> Outcome {
    for k in 1..=4usize {
        let ctx = VariableContext::block(k);
        let mut p = ResidueProblem::new(&ctx, MPoly::one(&ctx));
        for v in 0..k {
            let f = LinearForm::parse(&ctx, &format!("z{}", v + 1), 1).map_err(|e| e.to_string())?;
            p.denominator.push(f);
        }
        let r = iterated_residue(&p).map_err(|e| e.to_string())?;
        let want = MPoly::integer(&ctx, if k % 2 == 0 { 1 } else { -1 });
        if r != want {
            return Err(format!("k={k}: got {r}"));
        }
    }
    Ok(())
}

/// Standard monomials of an Artinian monomial ideal in two variables.
fn standard_monomials(gens: &[[u32; 2]]) -> u64 {
    let bound = gens.iter().flat_map(|g| g.iter()).max().copied().unwrap_or(0) + 1;
    let mut count = 0;
    for i in 0..bound {
        for j in 0..bound {
            if !gens.iter().any(|g| g[0] <= i && g[1] <= j) {
                count += 1;
            }
        }
    }
    count
}

fn multidegree() -> Outcome {
    let names = ["a", "b", "c", "d"];
    let ctx = weight_context(&names);
    let eta: Vec<MPoly> = (0..4).map(|i| MPoly::var(&ctx, i)).collect();
    let mdeg = |gens: Vec<Vec<u32>>, n: usize| -> Result<MPoly, String> {
        MonomialIdeal::new(gens, eta[..n].to_vec())
            .and_then(|i| i.multidegree())
            .map_err(|e| e.to_string())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..25 {
        let n = rng.gen_range(1..=4usize);
        // Each variable joins a random support (or none); supports are disjoint.
        let c = rng.gen_range(1..=n);
        let mut owner: Vec<Option<usize>> = (0..n)
            .map(|v| if v < c { Some(v) } else { rng.gen_range(0..=c).checked_sub(1) })
            .collect();
        for i in (1..n).rev() {
            owner.swap(i, rng.gen_range(0..=i));
        }
        let mut gens = vec![vec![0u32; n]; c];
        let mut want = MPoly::one(&ctx);
        for (s, g) in gens.iter_mut().enumerate() {
            let mut lin = MPoly::zero(&ctx);
            for v in 0..n {
                if owner[v] == Some(s) {
                    g[v] = rng.gen_range(1..=3);
                    lin = &lin + &(&eta[v] * &MPoly::integer(&ctx, g[v] as i64));
                }
            }
            want = &want * &lin;
        }
        let got = mdeg(gens.clone(), n)?;
        if got != want {
            return Err(format!("{gens:?}: got {got}, expected {want}"));
        }
    }
    // Additivity over top components: (xy) = (x) ∩ (y).
    if mdeg(vec![vec![1, 1]], 2)? != &eta[0] + &eta[1] {
        return Err("mdeg(xy) != a + b".into());
    }
    // Positivity: nonzero with positive coefficients.
    for gens in [vec![vec![1, 1, 0], vec![0, 1, 1]], vec![vec![2, 1], vec![0, 3]], vec![vec![1, 2, 1]]] {
        let n = gens[0].len();
        let p = mdeg(gens.clone(), n)?;
        if p.is_zero() || p.terms().any(|(_, c)| *c <= Rational::zero()) {
            return Err(format!("{gens:?}: {p} is not positive"));
        }
    }
    // Artinian ideals in two variables: the standard-monomial count times ab.
    for gens in [vec![[2, 0], [1, 1], [0, 2]], vec![[3, 0], [1, 2], [0, 4]], vec![[2, 0], [0, 5]]] {
        let want = &(&eta[0] * &eta[1]) * &MPoly::integer(&ctx, standard_monomials(&gens) as i64);
        let got = mdeg(gens.iter().map(|g| g.to_vec()).collect(), 2)?;
        if got != want {
            return Err(format!("{gens:?}: got {got}, expected {want}"));
        }
    }
    let m2 = mdeg(vec![vec![2, 0], vec![1, 1], vec![0, 2]], 2)?;
    let three_ab = MPoly::monomial(&ctx, Monomial::from_pairs([(0, 1), (1, 1)]), int(3));
    if m2 != three_ab {
        return Err(format!("mdeg(m^2) = {m2}"));
    }
    Ok(())
}

fn curvilinear() -> Outcome {
    let part = |p: &[u32]| DiagramND::from_partition(p).map_err(|e| e.to_string());
    let sum = |ds: &[DiagramND]| DiagramND::curvilinear_sum(ds).map_err(|e| e.to_string());
    for s in 1..=5u32 {
        if sum(&vec![part(&[1])?; s as usize])? != part(&[s])? {
            return Err(format!("{s}·(1) != ({s})"));
        }
        if sum(&vec![part(&[2, 1])?; s as usize])? != part(&[2 * s, s])? {
            return Err(format!("{s}·(2,1) != ({},{s})", 2 * s));
        }
    }
    if sum(&[part(&[2, 1])?, part(&[2, 1])?])? != part(&[4, 2])? {
        return Err("2·(2,1) != (4,2)".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let [a, b, c] = [0; 3].map(|_| random_diagram(&mut rng, 2, 7));
        if sum(&[a.clone(), b.clone()])? != sum(&[b.clone(), a.clone()])? {
            return Err(format!("not commutative on {a} / {b}"));
        }
        let left = sum(&[sum(&[a.clone(), b.clone()])?, c.clone()])?;
        let right = sum(&[a.clone(), sum(&[b.clone(), c.clone()])?])?;
        if left != right {
            return Err(format!("not associative on {a} / {b} / {c}"));
        }
    }
    Ok(())
}

fn sieve() -> Outcome {
    for s in 1..=6usize {
        let total: BigInt = set_partitions(s).iter().map(sieve_coefficient).sum();
        let want = if s == 1 { BigInt::one() } else { BigInt::zero() };
        if total != want {
            return Err(format!("s={s}: {total}"));
        }
    }
    Ok(())
}

fn specialization() -> Outcome {
    let f = BundleModel::line("L");
    let x = SurfaceModel::generic_surface();
    let phi = ChernPoly::class(2);
    for k in 1..=4usize {
        let g = assemble_geometric(&GeometricSubsetSpec::trivial(k, 2), &f, &x, &phi).map_err(|e| e.to_string())?;
        let h = assemble_ghilb(k, &f, &x, &phi, &BTreeMap::new()).map_err(|e| e.to_string())?;
        if g.len() != h.len() {
            return Err(format!("k={k}: {} vs {} terms", g.len(), h.len()));
        }
        for (a, b) in g.iter().zip(&h) {
            let (sa, sb) = (structural_summary(&a.assembled.problem), structural_summary(&b.assembled.problem));
            let vars: usize = a.partition.blocks().iter().map(|bl| bl.len() - 1).sum();
            if a.partition != b.partition
                || sa.num_vars != sb.num_vars
                || sa.num_vars != vars
                || sa.denominators != sb.denominators
                || sa.segre_factors != sb.segre_factors
            {
                return Err(format!("k={k} {}: {sa:?} vs {sb:?}", a.partition));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("a1 = 3L^2 + 2Lc1 + c2", a1),
        ("a2 = -42L^2 - 39Lc1 - 6c1^2 - 7c2", a2),
        ("P2, P3 from the exponential transform", bell),
        ("one-nodal plane curves 3(d-1)^2, d=3..6", plane),
        ("Grassmannian residues vs fixed points", grassmann),
        ("Res dz/(z1...zk) = (-1)^k", orientation),
        ("multidegree axioms", multidegree),
        ("curvilinear sums", curvilinear),
        ("set-partition sieve", sieve),
        ("geometric vs GHilb structure, k<=4", specialization),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = check();
        let ms = t.elapsed().as_millis();
        match r {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({ms} ms)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({ms} ms): {e}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
