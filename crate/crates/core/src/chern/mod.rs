//! Formal Chern-root calculus: twisted roots, elementary symmetric
//! polynomials, Segre factors and top-degree selection.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{monomial_string, ContextBuilder, MPoly, Monomial, PolyError, Rational, VariableContext};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error("e_{m} requested from {roots} roots")]
    DegreeOutOfRange { m: usize, roots: usize },
    #[error("top-degree part contains {0}, which is not in the basis")]
    NotInBasis(String),
    #[error("residue variable '{0}' left in an integrated expression")]
    ResidueVariableLeft(String),
    #[error("unknown surface preset '{0}' (expected generic-surface, P2, point or curve)")]
    UnknownPreset(String),
    #[error("Segre class s{index} must be homogeneous of degree {index}, got {poly}")]
    SegreDegree { index: usize, poly: String },
    #[error("Segre values given for {given} classes, the model has dimension {dim}")]
    SegreCount { given: usize, dim: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Chern roots of `F`; each is a degree-one geometry symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleModel {
    pub roots: Vec<String>,
}

impl BundleModel {
    pub fn line(name: &str) -> Self {
        BundleModel {
            roots: vec![name.to_string()],
        }
    }

    pub fn rank(&self) -> usize {
        self.roots.len()
    }
}

/// The base variety `X` at symbol level: Chern classes `c1..cn` of degrees
/// `1..n` and the Segre values `s1..sn` used in the Segre factors.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceModel {
    dim: usize,
    ctx: Arc<VariableContext>,
    segre: Vec<MPoly>,
}

impl SurfaceModel {
    fn chern_context(dim: usize) -> Arc<VariableContext> {
        let mut b = VariableContext::builder();
        for i in 1..=dim {
            b = b.geometry(format!("c{i}"), i as u32);
        }
        b.build().expect("distinct generated names")
    }

    /// Model with explicit Segre values, parsed over `c1..cn`.
    pub fn custom(dim: usize, segre: &[&str]) -> Result<Self, ChernError> {
        if segre.len() != dim {
            return Err(ChernError::SegreCount {
                given: segre.len(),
                dim,
            });
        }
        let ctx = Self::chern_context(dim);
        let mut values = Vec::with_capacity(dim);
        for (i, s) in segre.iter().enumerate() {
            let p = MPoly::parse(&ctx, s)?;
            if p.terms().any(|(m, _)| ctx.geometry_degree(m) != i as i64 + 1) {
                return Err(ChernError::SegreDegree {
                    index: i + 1,
                    poly: p.to_string(),
                });
            }
            values.push(p);
        }
        Ok(SurfaceModel { dim, ctx, segre: values })
    }

    /// Fully symbolic surface with `s1 = c1`, `s2 = c1² − c2`.
    pub fn generic_surface() -> Self {
        Self::custom(2, &["c1", "c1^2 - c2"]).expect("valid preset")
    }

    /// The projective plane: symbolically a generic surface; numbers come
    /// from [`PlaneSpecialization`].
    pub fn p2() -> Self {
        Self::generic_surface()
    }

    pub fn point() -> Self {
        Self::custom(0, &[]).expect("valid preset")
    }

    pub fn curve() -> Self {
        Self::custom(1, &["c1"]).expect("valid preset")
    }

    /// Segre values from the series inverse of `1 + c1 + … + cn`
    /// (so `s1 = −c1`, `s2 = c1² − c2`).
    pub fn inverse_segre(dim: usize) -> Self {
        let ctx = Self::chern_context(dim);
        // s_k = −Σ_{i=1..k} c_i s_{k−i}
        let mut s = vec![MPoly::one(&ctx)];
        for k in 1..=dim {
            let mut acc = MPoly::zero(&ctx);
            for i in 1..=k {
                acc = &acc - &(&MPoly::var(&ctx, i - 1) * &s[k - i]);
            }
            s.push(acc);
        }
        s.remove(0);
        SurfaceModel { dim, ctx, segre: s }
    }

    pub fn preset(name: &str) -> Result<Self, ChernError> {
        name.parse::<SurfacePreset>().map(|p| p.model())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn chern_names(&self) -> Vec<String> {
        (1..=self.dim).map(|i| format!("c{i}")).collect()
    }

    /// `s1..sn` over `c1..cn`.
    pub fn segre_values(&self) -> &[MPoly] {
        &self.segre
    }

    pub fn chern_ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfacePreset {
    GenericSurface,
    P2,
    Point,
    Curve,
}

impl SurfacePreset {
    pub fn model(self) -> SurfaceModel {
        match self {
            SurfacePreset::GenericSurface => SurfaceModel::generic_surface(),
            SurfacePreset::P2 => SurfaceModel::p2(),
            SurfacePreset::Point => SurfaceModel::point(),
            SurfacePreset::Curve => SurfaceModel::curve(),
        }
    }
}

impl FromStr for SurfacePreset {
    type Err = ChernError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "generic-surface" | "surface" => Ok(SurfacePreset::GenericSurface),
            "P2" | "p2" => Ok(SurfacePreset::P2),
            "point" => Ok(SurfacePreset::Point),
            "curve" => Ok(SurfacePreset::Curve),
            other => Err(ChernError::UnknownPreset(other.to_string())),
        }
    }
}

/// Name of a geometry symbol on copy `copy` (0-based) of `X` among `copies`.
/// A single copy keeps the bare name.
pub fn copy_name(base: &str, copy: usize, copies: usize) -> String {
    if copies <= 1 {
        base.to_string()
    } else {
        format!("{base}_{}", copy + 1)
    }
}

/// Adds the bundle roots and Chern classes of each copy of `X` to a
/// context under construction, one truncation group per copy.
pub fn add_geometry(
    mut b: ContextBuilder,
    bundle: &BundleModel,
    surface: &SurfaceModel,
    copies: usize,
) -> ContextBuilder {
    for c in 0..copies.max(1) {
        for r in &bundle.roots {
            b = b.geometry_in_group(copy_name(r, c, copies), 1, c as u32);
        }
        for (i, n) in surface.chern_names().iter().enumerate() {
            b = b.geometry_in_group(copy_name(n, c, copies), i as u32 + 1, c as u32);
        }
    }
    b.grading(surface.dim() as u32)
}

/// `{θ_j} ∪ {θ_j + z_i}`, roots first, then one batch per offset.
pub fn twisted_roots(roots: &[MPoly], offsets: &[MPoly]) -> Vec<MPoly> {
    let mut out: Vec<MPoly> = roots.to_vec();
    for z in offsets {
        for t in roots {
            out.push(t + z);
        }
    }
    out
}

/// Elementary symmetric polynomial `e_m` of a multiset of roots.
pub fn elementary_symmetric(m: usize, roots: &[MPoly]) -> Result<MPoly, ChernError> {
    if m > roots.len() {
        return Err(ChernError::DegreeOutOfRange { m, roots: roots.len() });
    }
    // An empty multiset has no context to build e_0 in.
    let ctx = roots.first().ok_or(ChernError::DegreeOutOfRange { m, roots: 0 })?.ctx().clone();
    Ok(all_elementary(&ctx, roots, m).swap_remove(m))
}

/// `e_0..e_{top}` of `roots`, by the usual one-root-at-a-time recurrence.
pub fn all_elementary(ctx: &Arc<VariableContext>, roots: &[MPoly], top: usize) -> Vec<MPoly> {
    let mut e = vec![MPoly::zero(ctx); top + 1];
    e[0] = MPoly::one(ctx);
    for r in roots {
        for k in (1..=top).rev() {
            let add = &e[k - 1] * r;
            e[k] = &e[k] + &add;
        }
    }
    e
}

/// A polynomial `Φ(c_1, c_2, …)` in the Chern classes of a tautological
/// bundle, written with symbols `e1, e2, …` (class `c_m` is `e{m}`).
#[derive(Debug, Clone, PartialEq)]
pub struct ChernPoly {
    poly: MPoly,
}

impl ChernPoly {
    fn context(max: usize) -> Arc<VariableContext> {
        let mut b = VariableContext::builder();
        for m in 1..=max {
            b = b.geometry(format!("e{m}"), m as u32);
        }
        b.build().expect("distinct generated names")
    }

    /// The single class `c_m`.
    pub fn class(m: usize) -> Self {
        let ctx = Self::context(m);
        let poly = if m == 0 { MPoly::one(&ctx) } else { MPoly::var(&ctx, m - 1) };
        ChernPoly { poly }
    }

    /// Parses e.g. `e4` or `e2^2 - 2*e1*e3`.
    pub fn parse(src: &str, max_class: usize) -> Result<Self, ChernError> {
        Ok(ChernPoly {
            poly: MPoly::parse(&Self::context(max_class), src)?,
        })
    }

    pub fn as_poly(&self) -> &MPoly {
        &self.poly
    }

    /// Highest class index that occurs.
    pub fn max_class(&self) -> usize {
        self.poly
            .terms()
            .flat_map(|(m, _)| m.iter().map(|(v, _)| v + 1))
            .max()
            .unwrap_or(0)
    }

    /// Total degree, with `c_m` of degree `m`; `None` if inhomogeneous.
    pub fn degree(&self) -> Option<i64> {
        let ctx = self.poly.ctx();
        let mut it = self.poly.terms().map(|(m, _)| ctx.geometry_degree(m));
        let d = it.next().unwrap_or(0);
        it.all(|x| x == d).then_some(d)
    }

    /// Substitutes `c_m = e_m(roots)`; the result lives in the roots'
    /// context.
    pub fn evaluate(&self, target: &Arc<VariableContext>, roots: &[MPoly]) -> Result<MPoly, ChernError> {
        let top = self.max_class();
        let e = all_elementary(target, roots, top.min(roots.len()));
        let images: Vec<Option<MPoly>> = (1..=self.poly.ctx().num_vars())
            .map(|m| Some(e.get(m).cloned().unwrap_or_else(|| MPoly::zero(target))))
            .collect();
        Ok(self.poly.substitute(target, &images)?)
    }
}

impl fmt::Display for ChernPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// `1 + s1/z + … + sn/zⁿ` for the residue variable `var`, with the Chern
/// classes of copy `copy` of `X`.
pub fn segre_factor(
    ctx: &Arc<VariableContext>,
    var: usize,
    surface: &SurfaceModel,
    copy: usize,
    copies: usize,
) -> Result<MPoly, ChernError> {
    let names: Vec<Option<MPoly>> = surface
        .chern_names()
        .iter()
        .map(|n| ctx.require(&copy_name(n, copy, copies)).map(|i| Some(MPoly::var(ctx, i))))
        .collect::<Result<_, _>>()?;
    let mut out = MPoly::one(ctx);
    for (i, s) in surface.segre_values().iter().enumerate() {
        let s = s.substitute(ctx, &names)?;
        out = &out + &s.shift(&Monomial::var(var, -(i as i32 + 1)));
    }
    Ok(out)
}

/// Degree-`n` part of an integrated expression in a chosen basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TopDegree {
    pub coefficients: Vec<(Monomial, Rational)>,
    /// Everything outside the top degree, reported rather than silently
    /// dropped.
    pub remainder: MPoly,
}

impl TopDegree {
    pub fn get(&self, m: &Monomial) -> Rational {
        self.coefficients
            .iter()
            .find(|(k, _)| k == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }
}

/// True if `m` has degree exactly `n` in every truncation group that
/// occurs in `ctx`.
fn is_top(ctx: &VariableContext, m: &Monomial, n: usize, groups: u32) -> bool {
    let mut by_group = vec![0i64; groups as usize];
    for (v, e) in m.iter() {
        if let Some(g) = ctx.group_of(v) {
            by_group[g as usize] += ctx.degree_of(v) as i64 * e as i64;
        }
    }
    by_group.iter().all(|&d| d == n as i64)
}

/// Splits `p` into its top-degree part (degree `n` on every copy of `X`),
/// expressed in `basis`, and the rest.
pub fn select_top_degree(p: &MPoly, n: usize, basis: &[Monomial]) -> Result<TopDegree, ChernError> {
    let ctx = p.ctx();
    let groups = ctx.num_groups().max(1);
    let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut rest = Vec::new();
    for (m, c) in p.terms() {
        if let Some((v, _)) = m.iter().find(|(v, _)| ctx.is_residue(*v)) {
            return Err(ChernError::ResidueVariableLeft(ctx.name(v).to_string()));
        }
        if is_top(ctx, m, n, groups) {
            let i = basis
                .iter()
                .position(|b| b == m)
                .ok_or_else(|| ChernError::NotInBasis(monomial_string(ctx, m)))?;
            *coeffs.entry(i).or_insert_with(Rational::zero) += c;
        } else {
            rest.push((m.clone(), c.clone()));
        }
    }
    Ok(TopDegree {
        coefficients: basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), coeffs.remove(&i).unwrap_or_else(Rational::zero)))
            .collect(),
        remainder: MPoly::from_terms(ctx, rest),
    })
}

/// All monomials of degree `n` on every copy of `X`, in canonical order.
/// For one copy of a surface with a line bundle `L` this is
/// `L², L·c1, c1², c2`.
pub fn intersection_basis(ctx: &Arc<VariableContext>, n: usize) -> Vec<Monomial> {
    let groups = ctx.num_groups().max(1);
    let per_group: Vec<Vec<Monomial>> = (0..groups)
        .map(|g| {
            let symbols: Vec<(usize, u32)> = (0..ctx.num_vars())
                .filter(|&v| ctx.group_of(v) == Some(g) && ctx.degree_of(v) > 0)
                .map(|v| (v, ctx.degree_of(v)))
                .collect();
            let mut out = Vec::new();
            degree_monomials(&symbols, n as u32, &mut Vec::new(), &mut out);
            out
        })
        .collect();
    let mut acc = vec![Monomial::one()];
    for g in per_group {
        acc = acc.iter().flat_map(|a| g.iter().map(move |b| a.mul(b))).collect();
    }
    // Order by the polynomial's canonical term order.
    let sorter = MPoly::from_terms(ctx, acc.iter().map(|m| (m.clone(), Rational::one())));
    sorter.terms().map(|(m, _)| m.clone()).collect()
}

fn degree_monomials(symbols: &[(usize, u32)], n: u32, cur: &mut Vec<(usize, i32)>, out: &mut Vec<Monomial>) {
    let Some((&(v, d), rest)) = symbols.split_first() else {
        if n == 0 {
            out.push(Monomial::from_pairs(cur.iter().copied()));
        }
        return;
    };
    let mut e = 0;
    loop {
        if e > 0 {
            cur.push((v, e as i32));
        }
        degree_monomials(rest, n - e * d, cur, out);
        if e > 0 {
            cur.pop();
        }
        e += 1;
        if e * d > n {
            break;
        }
    }
}

/// Which sign the pairing `L·c1` takes on the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneConvention {
    /// `L·c1 = L·K = −3d`; reproduces the classical one-nodal count.
    CanonicalClass,
    /// `L·c1 = L·c1(T) = +3d`.
    Tangent,
}

/// Numeric pairings on `ℙ²` with `L = dH`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaneSpecialization {
    pub degree: i64,
    pub convention: PlaneConvention,
}

impl PlaneSpecialization {
    pub fn new(degree: i64) -> Self {
        PlaneSpecialization {
            degree,
            convention: PlaneConvention::CanonicalClass,
        }
    }

    /// Value of a degree-two monomial in `line`, `c1`, `c2`, or `None`.
    pub fn pairing(&self, ctx: &VariableContext, m: &Monomial, line: &str) -> Option<Rational> {
        let d = self.degree;
        let lc1 = match self.convention {
            PlaneConvention::CanonicalClass => -3 * d,
            PlaneConvention::Tangent => 3 * d,
        };
        let e = |name: &str| ctx.index_of(name).map(|i| m.exponent(i)).unwrap_or(0);
        let (l, c1, c2) = (e(line), e("c1"), e("c2"));
        let nvars = m.iter().count();
        let known = (l > 0) as usize + (c1 > 0) as usize + (c2 > 0) as usize;
        if nvars != known {
            return None;
        }
        let v = match (l, c1, c2) {
            (2, 0, 0) => d * d,
            (1, 1, 0) => lc1,
            (0, 2, 0) => 9,
            (0, 0, 1) => 3,
            _ => return None,
        };
        Some(Rational::from_integer(v.into()))
    }

    /// `∫_{ℙ²}` of a top-degree expansion.
    pub fn integrate(&self, ctx: &VariableContext, top: &TopDegree, line: &str) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &top.coefficients {
            if c.is_zero() {
                continue;
            }
            acc += c * self.pairing(ctx, m, line)?;
        }
        Some(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<VariableContext> {
        let b = VariableContext::builder().residue("z10").residue("z01");
        add_geometry(b, &BundleModel::line("L"), &SurfaceModel::generic_surface(), 1)
            .build()
            .unwrap()
    }

    #[test]
    fn twisted_roots_and_e2() {
        let c = ctx();
        let l = MPoly::named(&c, "L");
        let z = [MPoly::named(&c, "z10"), MPoly::named(&c, "z01")];
        let roots = twisted_roots(std::slice::from_ref(&l), &z);
        let names: Vec<String> = roots.iter().map(|r| r.to_string()).collect();
        assert_eq!(names, ["L", "z10 + L", "z01 + L"]);
        let e2 = elementary_symmetric(2, &roots).unwrap();
        assert_eq!(e2, MPoly::parse(&c, "3*L^2 + 2*L*(z10 + z01) + z10*z01").unwrap());
        assert_eq!(twisted_roots(std::slice::from_ref(&l), &[]), vec![l]);
    }

    #[test]
    fn elementary_edge_cases() {
        let c = ctx();
        let r: Vec<MPoly> = ["z10", "z01", "L"].iter().map(|n| MPoly::named(&c, n)).collect();
        assert!(elementary_symmetric(0, &r).unwrap().as_constant().unwrap().is_one());
        assert_eq!(elementary_symmetric(3, &r).unwrap().to_string(), "z10*z01*L");
        assert!(matches!(
            elementary_symmetric(4, &r),
            Err(ChernError::DegreeOutOfRange { m: 4, roots: 3 })
        ));
    }

    #[test]
    fn segre_factors() {
        let c = ctx();
        let s = segre_factor(&c, 0, &SurfaceModel::generic_surface(), 0, 1).unwrap();
        assert_eq!(s, MPoly::parse(&c, "1 + c1*z10^-1 + (c1^2 - c2)*z10^-2").unwrap());
        let point = VariableContext::builder().residue("z").build().unwrap();
        assert!(segre_factor(&point, 0, &SurfaceModel::point(), 0, 1).unwrap().as_constant().unwrap().is_one());
    }

    #[test]
    fn inverse_mode_flips_s1() {
        let s = SurfaceModel::inverse_segre(2);
        assert_eq!(s.segre_values()[0].to_string(), "-c1");
        assert_eq!(s.segre_values()[1].to_string(), "c1^2 - c2");
    }

    #[test]
    fn surface_basis_and_selection() {
        let c = ctx();
        let basis = intersection_basis(&c, 2);
        let names: Vec<String> = basis.iter().map(|m| monomial_string(&c, m)).collect();
        assert_eq!(names, ["L^2", "L*c1", "c1^2", "c2"]);
        let p = MPoly::parse(&c, "3*L^2 + 2*L*c1 + c2 + 7*L").unwrap();
        let top = select_top_degree(&p, 2, &basis).unwrap();
        let coeffs: Vec<String> = top.coefficients.iter().map(|(_, q)| q.to_string()).collect();
        assert_eq!(coeffs, ["3", "2", "0", "1"]);
        assert_eq!(top.remainder.to_string(), "7*L");
        let zero = select_top_degree(&MPoly::zero(&c), 2, &basis).unwrap();
        assert!(zero.coefficients.iter().all(|(_, q)| q.is_zero()));
        assert!(select_top_degree(&MPoly::named(&c, "z10"), 2, &basis).is_err());
    }

    #[test]
    fn chern_poly_substitution() {
        let c = ctx();
        let roots = twisted_roots(&[MPoly::named(&c, "L")], &[MPoly::named(&c, "z10")]);
        let phi = ChernPoly::parse("e1^2 - 2*e2", 2).unwrap();
        assert_eq!(phi.degree(), Some(2));
        // p2 power sum of {L, L+z}
        assert_eq!(phi.evaluate(&c, &roots).unwrap(), MPoly::parse(&c, "L^2 + (L+z10)^2").unwrap());
        assert_eq!(ChernPoly::class(3).evaluate(&c, &roots).unwrap().to_string(), "0");
    }

    #[test]
    fn plane_pairing() {
        let c = ctx();
        let p = MPoly::parse(&c, "3*L^2 + 2*L*c1 + c2").unwrap();
        let top = select_top_degree(&p, 2, &intersection_basis(&c, 2)).unwrap();
        for d in 3..=6 {
            let v = PlaneSpecialization::new(d).integrate(&c, &top, "L").unwrap();
            assert_eq!(v, Rational::from_integer((3 * (d - 1) * (d - 1)).into()));
        }
    }
}
