//! Line-oriented problem files.
//!
//! ```text
//! # one-nodal curves
//! [vars]
//! z10 1
//! z01 1
//! [bundle] roots=L
//! [numerator]
//! -(z10 - z01)^2
//! chern 2
//! [denominator]
//! z10^2*z01^2
//! [segre] order=2 vars=z10,z01
//! [prefactor] 1/2
//! [surface] generic-surface
//! ```
//!
//! Sections:
//!
//! - `[vars]`: residue variables in contour order (innermost first), one
//!   per line as `name` or `name weight`.
//! - `[bundle]`: `roots=a,b,…`, the Chern roots of `F` (default `L`).
//! - `[numerator]`: one factor per line; either a polynomial expression or
//!   a clause `chern m` / `chern <poly in e1,e2,…>` evaluated on the twisted
//!   roots `θ, θ+z` over all variables.
//! - `[denominator]`: one factor per line; an affine linear form, a linear
//!   form raised to a power `(…)^m`, or a monomial in the variables.
//! - `[segre]`: `order=n vars=…`; both optional (defaults: dimension of the
//!   surface, all variables).
//! - `[prefactor]`: a rational `p/q`.
//! - `[surface]`: a preset (`generic-surface`, `P2`, `point`, `curve`) or
//!   `custom s1=… s2=…`.
//! - `[symbols]`: extra geometry symbols, `name degree` per line.
//!
//! Text after the closing bracket of a header is read as the section's
//! first line. `#` starts a comment.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::assemble::Assembled;
use crate::chern::{segre_factor, twisted_roots, BundleModel, ChernError, ChernPoly, SurfaceModel};
use crate::poly::{LinearForm, MPoly, PolyError, Rational, VariableContext};
use crate::residue::ResidueProblem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("empty configuration: nothing to evaluate")]
    Empty,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Poly { line: usize, source: PolyError },
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error("invalid context: {0}")]
    Context(PolyError),
}

const SECTIONS: [&str; 8] = [
    "vars",
    "bundle",
    "numerator",
    "denominator",
    "segre",
    "prefactor",
    "surface",
    "symbols",
];

/// A parsed problem file: the raw lines of each section, with line numbers.
#[derive(Debug, Clone, Default)]
pub struct ProblemConfig {
    sections: BTreeMap<String, Vec<(usize, String)>>,
}

fn syntax(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError::Syntax { line, msg: msg.into() }
}

fn key_values(line: usize, s: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    s.split_whitespace()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| syntax(line, format!("expected key=value, found '{kv}'")))
        })
        .collect()
}

impl ProblemConfig {
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        let mut cfg = ProblemConfig::default();
        let mut current: Option<String> = None;
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let body = if let Some(rest) = text.strip_prefix('[') {
                let (name, after) = rest
                    .split_once(']')
                    .ok_or_else(|| syntax(line, "unterminated section header"))?;
                let name = name.trim().to_ascii_lowercase();
                if !SECTIONS.contains(&name.as_str()) {
                    return Err(syntax(line, format!("unknown section [{name}]")));
                }
                if cfg.sections.contains_key(&name) {
                    return Err(syntax(line, format!("section [{name}] appears twice")));
                }
                cfg.sections.insert(name.clone(), Vec::new());
                current = Some(name);
                after.trim()
            } else {
                text
            };
            if body.is_empty() {
                continue;
            }
            let sec = current
                .as_ref()
                .ok_or_else(|| syntax(line, "content before the first section"))?;
            cfg.sections.get_mut(sec).expect("inserted above").push((line, body.to_string()));
        }
        if cfg.sections.values().all(|v| v.is_empty()) {
            return Err(ConfigError::Empty);
        }
        Ok(cfg)
    }

    fn lines(&self, section: &str) -> &[(usize, String)] {
        self.sections.get(section).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// The surface model named in `[surface]` (generic surface by default).
    pub fn surface(&self) -> Result<SurfaceModel, ConfigError> {
        let lines = self.lines("surface");
        let Some((line, text)) = lines.first() else {
            return Ok(SurfaceModel::generic_surface());
        };
        if let Some(rest) = text.strip_prefix("custom") {
            let kv = key_values(*line, rest)?;
            let mut values = Vec::new();
            for i in 1..=kv.len() {
                let v = kv
                    .get(&format!("s{i}"))
                    .ok_or_else(|| syntax(*line, format!("custom surface is missing s{i}")))?;
                values.push(v.as_str());
            }
            return Ok(SurfaceModel::custom(values.len(), &values)?);
        }
        Ok(SurfaceModel::preset(text)?)
    }

    pub fn bundle(&self) -> Result<BundleModel, ConfigError> {
        let mut roots = vec!["L".to_string()];
        for (line, text) in self.lines("bundle") {
            let kv = key_values(*line, text)?;
            if let Some(r) = kv.get("roots") {
                roots = r.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            }
        }
        Ok(BundleModel { roots })
    }

    fn context(&self, bundle: &BundleModel, surface: &SurfaceModel) -> Result<Arc<VariableContext>, ConfigError> {
        let mut b = VariableContext::builder();
        for (line, text) in self.lines("vars") {
            let parts: Vec<&str> = text.split_whitespace().collect();
            b = match parts.as_slice() {
                [name] => b.residue(*name),
                [name, w] => {
                    let w: u32 = w.parse().map_err(|_| syntax(*line, format!("bad weight '{w}'")))?;
                    b.weighted(*name, w)
                }
                _ => return Err(syntax(*line, "expected 'name' or 'name weight'")),
            };
        }
        b = crate::chern::add_geometry(b, bundle, surface, 1);
        for (line, text) in self.lines("symbols") {
            let parts: Vec<&str> = text.split_whitespace().collect();
            let [name, deg] = parts.as_slice() else {
                return Err(syntax(*line, "expected 'name degree'"));
            };
            let deg: u32 = deg.parse().map_err(|_| syntax(*line, format!("bad degree '{deg}'")))?;
            b = b.geometry(*name, deg);
        }
        b.build().map_err(ConfigError::Context)
    }

    /// Builds the residue problem described by the file.
    pub fn to_assembled(&self) -> Result<(Assembled, SurfaceModel), ConfigError> {
        let surface = self.surface()?;
        let bundle = self.bundle()?;
        let ctx = self.context(&bundle, &surface)?;
        let poly = |line: usize, s: &str| MPoly::parse(&ctx, s).map_err(|source| ConfigError::Poly { line, source });
        let k = ctx.num_residue();
        let zs: Vec<MPoly> = (0..k).map(|i| MPoly::var(&ctx, i)).collect();

        let mut numerator = MPoly::one(&ctx);
        for (line, text) in self.lines("numerator") {
            let factor = if let Some(rest) = text.strip_prefix("chern ") {
                let rest = rest.trim();
                let phi = match rest.parse::<usize>() {
                    Ok(m) => ChernPoly::class(m),
                    Err(_) => ChernPoly::parse(rest, bundle.rank() * (k + 1))?,
                };
                let theta: Vec<MPoly> = bundle.roots.iter().map(|r| MPoly::named(&ctx, r)).collect();
                phi.evaluate(&ctx, &twisted_roots(&theta, &zs))?
            } else {
                poly(*line, text)?
            };
            numerator = &numerator * &factor;
        }

        let mut problem = ResidueProblem::new(&ctx, numerator);
        for (line, text) in self.lines("denominator") {
            self.push_denominator(&mut problem, *line, text)?;
        }

        if let Some((line, text)) = self.lines("prefactor").first() {
            problem.prefactor = text
                .parse::<Rational>()
                .map_err(|_| syntax(*line, format!("bad rational '{text}'")))?;
        }

        if let Some((line, text)) = self.lines("segre").first() {
            let kv = key_values(*line, text)?;
            let order = match kv.get("order") {
                Some(o) => o.parse::<usize>().map_err(|_| syntax(*line, format!("bad order '{o}'")))?,
                None => surface.dim(),
            };
            if order > surface.dim() {
                return Err(syntax(*line, format!("Segre order {order} exceeds the surface dimension")));
            }
            let vars: Vec<usize> = match kv.get("vars") {
                Some(v) => v
                    .split(',')
                    .map(|n| ctx.require(n.trim()).map_err(|source| ConfigError::Poly { line: *line, source }))
                    .collect::<Result<_, _>>()?,
                None => (0..k).collect(),
            };
            let truncated = truncate_segre(&surface, order);
            for v in vars {
                problem.laurent_prefactors.push(segre_factor(&ctx, v, &truncated, 0, 1)?);
            }
        }

        let names = ctx.residue_vars().to_vec();
        Ok((
            Assembled {
                problem,
                copies: 1,
                blocks: vec![names],
                line: bundle.roots.first().cloned(),
                warnings: Vec::new(),
            },
            surface,
        ))
    }

    fn push_denominator(&self, p: &mut ResidueProblem, line: usize, text: &str) -> Result<(), ConfigError> {
        let ctx = p.context.clone();
        let perr = |source| ConfigError::Poly { line, source };
        let value = MPoly::parse(&ctx, text).map_err(perr)?;
        let terms: Vec<_> = value.terms().collect();
        if let [(m, c)] = terms.as_slice() {
            if m.iter().any(|(v, _)| !ctx.is_residue(v)) {
                return Err(syntax(line, "monomial denominators may only involve residue variables"));
            }
            let inv = MPoly::monomial(&ctx, m.pow(-1), Rational::one() / *c);
            p.laurent_prefactors.push(inv);
            return Ok(());
        }
        if let Ok(f) = LinearForm::from_poly(&value, 1) {
            p.denominator.push(f);
            return Ok(());
        }
        // `(linear)^m`
        let (base, exp) = text
            .rsplit_once('^')
            .ok_or_else(|| syntax(line, format!("'{text}' is neither linear nor a monomial")))?;
        let m: u32 = exp
            .trim()
            .parse()
            .map_err(|_| syntax(line, format!("'{text}' is neither linear nor a monomial")))?;
        let inner = MPoly::parse(&ctx, base).map_err(perr)?;
        let f = LinearForm::from_poly(&inner, m).map_err(perr)?;
        p.denominator.push(f);
        Ok(())
    }
}

fn truncate_segre(surface: &SurfaceModel, order: usize) -> SurfaceModel {
    if order == surface.dim() {
        return surface.clone();
    }
    // Same classes, Segre terms beyond `order` set to zero.
    let values: Vec<String> = (0..surface.dim())
        .map(|i| {
            if i < order {
                surface.segre_values()[i].to_string()
            } else {
                "0".to_string()
            }
        })
        .collect();
    let refs: Vec<&str> = values.iter().map(|s| s.as_str()).collect();
    SurfaceModel::custom(surface.dim(), &refs).expect("truncation keeps degrees")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::evaluate;

    const ONE_NODE: &str = "
# one-nodal curves
[vars]
z10 1
z01 1
[bundle] roots=L
[numerator]
-(z10 - z01)^2     # ordered pair product
chern 2
[denominator]
z10^2*z01^2
[segre] order=2 vars=z10,z01
[prefactor] 1/2
[surface] generic-surface
";

    #[test]
    fn one_node_file_gives_a1() {
        let (a, x) = ProblemConfig::parse(ONE_NODE).unwrap().to_assembled().unwrap();
        let e = evaluate(&a, &x).unwrap();
        assert_eq!(e.top_poly().to_string(), "3*L^2 + 2*L*c1 + c2");
    }

    #[test]
    fn empty_and_malformed() {
        assert_eq!(ProblemConfig::parse("# nothing\n").unwrap_err(), ConfigError::Empty);
        assert!(matches!(ProblemConfig::parse("z1\n"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(ProblemConfig::parse("[bogus]\nx\n"), Err(ConfigError::Syntax { .. })));
        let bad = "[vars]\nz\n[denominator]\nz^2 + 1\n";
        let err = ProblemConfig::parse(bad).unwrap().to_assembled().unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 4, .. }));
    }

    #[test]
    fn powered_linear_denominator() {
        let src = "[vars]\nz\n[symbols]\nlambda 1\n[denominator]\n(lambda - z)^2\n";
        let (a, _) = ProblemConfig::parse(src).unwrap().to_assembled().unwrap();
        assert_eq!(a.problem.denominator.len(), 1);
        assert_eq!(a.problem.denominator[0].multiplicity(), 2);
    }

    #[test]
    fn custom_surface() {
        let src = "[surface] custom s1=-c1 s2=c1^2-c2\n";
        let x = ProblemConfig::parse(src).unwrap().surface().unwrap();
        assert_eq!(x.segre_values()[0].to_string(), "-c1");
    }
}
