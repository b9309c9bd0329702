//! Residue problems for the connected nodal-curve coefficients `a_r`.
//!
//! Two readings are provided for `r = 1, 2`:
//!
//! - [`assemble_severi`] builds the problems that reproduce the known
//!   `a_1 = 3L² + 2L·c1 + c2` and `a_2 = −42L² − 39L·c1 − 6c1² − 7c2`. For `r = 1` this is the punctual formula for the
//!   algebra of the diagram `(2,1)` with its canonical filtration (both
//!   variables of weight 1) and prefactor ½. For `r = 2` it is the test-curve
//!   integrand on the boxes of `(4,2)`, with the contour and the
//!   Vandermonde product both taken in canonical-filtration order
//!   `z10, z01, z20, z11, z30` and prefactor 1.
//! - [`severi_example_verbatim`] builds the literal integrands
//!   (`(z10 − z01)²` for `r = 1`; prefactor ⅙ and the refined box weights for
//!   `r = 2`). They evaluate to `−a_1` and to
//!   `8L² + 8L·c1 + 4/3·c1² + 4/3·c2` respectively, which is why they are not
//!   the default.
//!
//! For `r ≥ 3` the general box template is emitted with a warning; its
//! conventions are not calibrated against any known value.

use num_traits::One;

use super::block::embed_block_poly;
use super::punctual::{assemble_punctual, AlgebraSpec};
use super::{AssembleError, Assembled};
use crate::chern::{add_geometry, segre_factor, twisted_roots, BundleModel, ChernPoly, SurfaceModel};
use crate::diagram::DiagramND;
use crate::poly::{rat, LinearForm, MPoly, Monomial, Rational, VariableContext};
use crate::residue::ResidueProblem;

const R2_DENOMINATORS: [&str; 6] = [
    "2*z10 - z20",
    "z10 + z20 - z30",
    "2*z10 - z30",
    "z10 + z01 - z30",
    "z10 + z01 - z11",
    "2*z10 - z11",
];

fn box_name(a: usize, b: usize, r: usize) -> String {
    if 2 * r > 10 {
        format!("z{a}_{b}")
    } else {
        format!("z{a}{b}")
    }
}

/// Box variables `z_{a0}` (1 ≤ a ≤ 2r−1) and `z_{b1}` (0 ≤ b ≤ r−1), with
/// weights `w(z_{a0}) = a`, `w(z_{b1}) = b + 2r`, in weight order.
pub fn severi_variable_names(r: usize) -> Vec<(String, u32)> {
    let mut v: Vec<(String, u32)> = (1..2 * r).map(|a| (box_name(a, 0, r), a as u32)).collect();
    v.extend((0..r).map(|b| (box_name(b, 1, r), (b + 2 * r) as u32)));
    v
}

fn surface_context(names: &[(String, u32)], weighted: bool) -> Result<std::sync::Arc<VariableContext>, AssembleError> {
    let mut b = VariableContext::builder();
    for (n, w) in names {
        b = if weighted { b.weighted(n.clone(), *w) } else { b.residue(n.clone()) };
    }
    Ok(add_geometry(b, &BundleModel::line("L"), &SurfaceModel::generic_surface(), 1).build()?)
}

/// `Π_{i<j}(z_i − z_j)` in context order, times `e_{2r}` of the roots
/// `L, L + z`, with Segre factors on every variable.
fn vandermonde_problem(
    ctx: &std::sync::Arc<VariableContext>,
    r: usize,
    epd: Option<&MPoly>,
) -> Result<ResidueProblem, AssembleError> {
    let k = ctx.num_residue();
    let z: Vec<MPoly> = (0..k).map(|i| MPoly::var(ctx, i)).collect();
    let mut num = MPoly::one(ctx);
    for i in 0..k {
        for j in i + 1..k {
            num = &num * &(&z[i] - &z[j]);
        }
    }
    if let Some(e) = epd {
        let vars: Vec<usize> = (0..k).collect();
        num = &num * &embed_block_poly(e, ctx, &vars)?;
    }
    let roots = twisted_roots(&[MPoly::named(ctx, "L")], &z);
    num = &num * &ChernPoly::class(2 * r).evaluate(ctx, &roots)?;
    let mut p = ResidueProblem::new(ctx, num);
    let surface = SurfaceModel::generic_surface();
    for v in 0..k {
        p.laurent_prefactors.push(segre_factor(ctx, v, &surface, 0, 1)?);
    }
    Ok(p)
}

fn push_r2_denominators(p: &mut ResidueProblem) -> Result<(), AssembleError> {
    let ctx = p.context.clone();
    for d in R2_DENOMINATORS {
        p.denominator.push(LinearForm::parse(&ctx, d, 1)?);
    }
    // z10 · (z10 z20 z30 z01 z11)²
    let mut mono = Monomial::one();
    for v in 0..ctx.num_residue() {
        let e = if ctx.name(v) == "z10" { -3 } else { -2 };
        mono = mono.mul(&Monomial::var(v, e));
    }
    p.laurent_prefactors.push(MPoly::monomial(&ctx, mono, Rational::one()));
    Ok(())
}

fn wrap(problem: ResidueProblem, warnings: Vec<String>) -> Assembled {
    let names = problem.context.residue_vars().to_vec();
    Assembled {
        problem,
        copies: 1,
        blocks: vec![names],
        line: Some("L".into()),
        warnings,
    }
}

/// Problem whose residue is `a_r` on a generic surface with line bundle `L`.
///
/// `epd` multiplies the numerator; it is written in `z1..z{3r−1}` for the
/// variables in contour order (defaults to 1).
pub fn assemble_severi(r: usize, epd: Option<&MPoly>) -> Result<Assembled, AssembleError> {
    match r {
        0 => Err(AssembleError::SeveriRange(r)),
        1 => {
            let g = DiagramND::from_partition(&[2, 1])?;
            let mut a = AlgebraSpec::from_diagram(&g).with_prefactor(rat(1, 2));
            a.epd = epd.cloned();
            assemble_punctual(&a, &BundleModel::line("L"), &SurfaceModel::generic_surface(), &ChernPoly::class(2))
        }
        2 => {
            let g = DiagramND::from_partition(&[4, 2])?;
            let a = AlgebraSpec::from_diagram(&g);
            let names: Vec<(String, u32)> = a.names().into_iter().zip(a.filtration.weight_map()).collect();
            let ctx = surface_context(&names, true)?;
            let mut p = vandermonde_problem(&ctx, 2, epd)?;
            push_r2_denominators(&mut p)?;
            Ok(wrap(p, Vec::new()))
        }
        _ => {
            let names = severi_variable_names(r);
            let ctx = surface_context(&names, true)?;
            let mut p = vandermonde_problem(&ctx, r, epd)?;
            let idx = |a: usize, b: usize| ctx.index_of(&box_name(a, b, r)).expect("box variable");
            let form = |i: usize, j: usize, m: usize| -> Result<LinearForm, AssembleError> {
                let f = &(&MPoly::var(&ctx, i) + &MPoly::var(&ctx, j)) - &MPoly::var(&ctx, m);
                Ok(LinearForm::from_poly(&f, 1)?)
            };
            for a in 1..2 * r {
                for b in a..2 * r {
                    for c in a + b..2 * r {
                        p.denominator.push(form(idx(a, 0), idx(b, 0), idx(c, 0))?);
                    }
                }
            }
            for a in 1..r {
                for b in 0..r {
                    for c in a + b..r {
                        p.denominator.push(form(idx(a, 0), idx(b, 1), idx(c, 1))?);
                    }
                }
            }
            let mut mono = Monomial::one();
            for v in 0..ctx.num_residue() {
                mono = mono.mul(&Monomial::var(v, -2));
            }
            for a in 1..r {
                mono = mono.mul(&Monomial::var(idx(a, 0), -1));
            }
            p.laurent_prefactors.push(MPoly::monomial(&ctx, mono, Rational::one()));
            let mut warnings = vec![format!(
                "Severi conventions are calibrated only for r <= 2; the r = {r} template uses prefactor 1, \
                 refined box weights as contour order, and the supplied ePD"
            )];
            if epd.is_none() {
                warnings.push("no ePD supplied; using 1".into());
            }
            Ok(wrap(p, warnings))
        }
    }
}

/// The literal `r = 1` and `r = 2` integrands, for comparison.
pub fn severi_example_verbatim(r: usize) -> Result<Assembled, AssembleError> {
    match r {
        1 => {
            let names = vec![("z10".to_string(), 1), ("z01".to_string(), 2)];
            let ctx = surface_context(&names, false)?;
            let num = MPoly::parse(&ctx, "(z10 - z01)^2")?;
            let roots = twisted_roots(&[MPoly::named(&ctx, "L")], &[MPoly::named(&ctx, "z10"), MPoly::named(&ctx, "z01")]);
            let num = &num * &ChernPoly::class(2).evaluate(&ctx, &roots)?;
            let mut p = ResidueProblem::new(&ctx, num);
            p.prefactor = rat(1, 2);
            p.laurent_prefactors.push(MPoly::parse(&ctx, "z10^-2 * z01^-2")?);
            let surface = SurfaceModel::generic_surface();
            for v in 0..2 {
                p.laurent_prefactors.push(segre_factor(&ctx, v, &surface, 0, 1)?);
            }
            Ok(wrap(p, Vec::new()))
        }
        2 => {
            let ctx = surface_context(&severi_variable_names(2), true)?;
            let mut p = vandermonde_problem(&ctx, 2, None)?;
            p.prefactor = rat(1, 6);
            push_r2_denominators(&mut p)?;
            Ok(wrap(p, Vec::new()))
        }
        _ => Err(AssembleError::InvalidSpec(format!("no literal integrand for r = {r}"))),
    }
}
