use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::geometric::GeometricTerm;
use super::{AssembleError, Assembled};
use crate::chern::{intersection_basis, select_top_degree, SurfaceModel, TopDegree};
use crate::poly::{monomial_string, MPoly, Monomial, Rational, VariableContext};
use crate::residue::{iterated_residue_with, ResidueOptions, ResidueStats};

/// Result of integrating one assembled problem over `X^t`.
#[derive(Debug, Clone)]
pub struct Evaluation {
    /// The iterated residue, before degree selection.
    pub residue: MPoly,
    pub top: TopDegree,
    /// Top-degree coefficients keyed by canonical monomial text. With
    /// several copies of `X` each key is a product of per-copy intersection
    /// numbers such as `[L^2]*[c2]`.
    pub coefficients: BTreeMap<String, Rational>,
    pub warnings: Vec<String>,
    pub stats: ResidueStats,
}

impl Evaluation {
    /// Coefficients in basis order, zeros included (single copy only).
    pub fn ordered(&self) -> Vec<(String, Rational)> {
        let ctx = self.residue.ctx();
        self.top
            .coefficients
            .iter()
            .map(|(m, c)| (monomial_string(ctx, m), c.clone()))
            .collect()
    }

    /// The top-degree part as a polynomial.
    pub fn top_poly(&self) -> MPoly {
        MPoly::from_terms(self.residue.ctx(), self.top.coefficients.iter().cloned())
    }
}

pub fn evaluate(a: &Assembled, surface: &SurfaceModel) -> Result<Evaluation, AssembleError> {
    evaluate_with(a, surface, &ResidueOptions::default())
}

/// `iterated_residue`, then the degree-`n` part on every copy of `X`.
pub fn evaluate_with(
    a: &Assembled,
    surface: &SurfaceModel,
    opts: &ResidueOptions,
) -> Result<Evaluation, AssembleError> {
    let (residue, stats) = iterated_residue_with(&a.problem, opts)?;
    let ctx = residue.ctx().clone();
    let basis = intersection_basis(&ctx, surface.dim());
    let top = select_top_degree(&residue, surface.dim(), &basis)?;
    let mut warnings = a.warnings.clone();
    if !top.remainder.is_zero() {
        warnings.push(format!("off-top-degree remainder {}", top.remainder));
    }
    let coefficients = if a.copies > 1 {
        collapse_copies(&ctx, &top)
    } else {
        top.coefficients
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (monomial_string(&ctx, m), c.clone()))
            .collect()
    };
    Ok(Evaluation {
        residue,
        top,
        coefficients,
        warnings,
        stats,
    })
}

/// Rewrites per-copy monomials as products of intersection numbers on one
/// copy: `L_1^2 * c2_2` becomes `[L^2]*[c2]`.
fn collapse_copies(ctx: &VariableContext, top: &TopDegree) -> BTreeMap<String, Rational> {
    let mut out: BTreeMap<String, Rational> = BTreeMap::new();
    for (m, c) in &top.coefficients {
        if c.is_zero() {
            continue;
        }
        let mut by_group: BTreeMap<u32, Vec<(usize, i32)>> = BTreeMap::new();
        for (v, e) in m.iter() {
            if let Some(g) = ctx.group_of(v) {
                by_group.entry(g).or_default().push((v, e));
            }
        }
        let mut factors: Vec<String> = by_group
            .values()
            .map(|vs| {
                let s = monomial_string(ctx, &Monomial::from_pairs(vs.iter().copied()));
                format!("[{}]", strip_copy_suffixes(&s))
            })
            .collect();
        factors.sort();
        *out.entry(factors.join("*")).or_insert_with(Rational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn strip_copy_suffixes(s: &str) -> String {
    // Names look like `L_3` or `c1_3`; drop the trailing `_<digits>`.
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars().peekable();
    while let Some(ch) = chars.next() {
        if ch == '_' && chars.peek().is_some_and(|c| c.is_ascii_digit()) {
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                chars.next();
            }
            continue;
        }
        out.push(ch);
    }
    out
}

/// Per-term evaluations of a multi-point formula and their sum.
#[derive(Debug, Clone)]
pub struct TermsEvaluation {
    pub terms: Vec<Evaluation>,
    pub total: BTreeMap<String, Rational>,
}

/// Evaluates terms in parallel; the total is summed in partition order.
pub fn evaluate_terms(
    terms: &[GeometricTerm],
    surface: &SurfaceModel,
    opts: &ResidueOptions,
) -> Result<TermsEvaluation, AssembleError> {
    let evals: Vec<Evaluation> = terms
        .par_iter()
        .map(|t| {
            let mut e = evaluate_with(&t.assembled, surface, opts)?;
            if t.assembled.copies <= 1 {
                e.coefficients = e
                    .coefficients
                    .into_iter()
                    .map(|(k, v)| (format!("[{k}]"), v))
                    .collect();
            }
            Ok(e)
        })
        .collect::<Result<_, AssembleError>>()?;
    let mut total: BTreeMap<String, Rational> = BTreeMap::new();
    for e in &evals {
        for (k, v) in &e.coefficients {
            *total.entry(k.clone()).or_insert_with(Rational::zero) += v;
        }
    }
    total.retain(|_, c| !c.is_zero());
    Ok(TermsEvaluation { terms: evals, total })
}
