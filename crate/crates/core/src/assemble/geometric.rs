use std::collections::BTreeMap;

use num_traits::One;

use super::block::{build_problem, BlockShape};
use super::punctual::AlgebraSpec;
use super::{AssembleError, Assembled};
use crate::chern::{BundleModel, ChernPoly, SurfaceModel};
use crate::diagram::{set_partitions, DiagramND, DimensionVector, SetPartition};
use crate::multidegree::{nakajima_dual, NakajimaDual};
use crate::poly::{MPoly, Rational, VariableContext};

/// Where the duals `ePD⟦α_l⟧` of merged blocks come from.
#[derive(Debug, Clone, Default)]
pub enum BlockDuals {
    /// Balanced blocks get `z1⋯z_{|α_l|−1}`; blocks of Morin algebras use
    /// the Nakajima table; anything else is missing.
    #[default]
    Automatic,
    /// Explicit duals keyed by block (sorted 1-based indices), falling back
    /// to [`BlockDuals::Automatic`].
    Explicit(BTreeMap<Vec<usize>, MPoly>),
}

/// The algebras `A_1..A_s` of a geometric subset `Hilb^{A_1,…,A_s}(X)`.
#[derive(Debug, Clone)]
pub struct GeometricSubsetSpec {
    pub algebras: Vec<AlgebraSpec>,
    pub duals: BlockDuals,
    /// `ePD[Q(A_S) ⊂ Alg]` of sum algebras, keyed by block; 1 when absent.
    pub sum_epds: BTreeMap<Vec<usize>, MPoly>,
}

impl GeometricSubsetSpec {
    pub fn new(algebras: Vec<AlgebraSpec>) -> Self {
        GeometricSubsetSpec {
            algebras,
            duals: BlockDuals::Automatic,
            sum_epds: BTreeMap::new(),
        }
    }

    /// `s` copies of the one-point algebra: the geometric Hilbert scheme.
    pub fn trivial(s: usize, dim: usize) -> Self {
        Self::new(vec![AlgebraSpec::trivial(dim); s])
    }

    fn block_dual(&self, block: &[usize]) -> Result<MPoly, AssembleError> {
        if let BlockDuals::Explicit(map) = &self.duals {
            if let Some(p) = map.get(block) {
                return Ok(p.clone());
            }
        }
        let algs: Vec<&AlgebraSpec> = block.iter().map(|&i| &self.algebras[i - 1]).collect();
        let dims: Vec<usize> = algs.iter().map(|a| a.k).collect();
        let missing = || AssembleError::MissingDual {
            block: block.to_vec(),
            dims: dims.clone(),
        };
        let total: usize = dims.iter().sum();
        if dims.windows(2).all(|w| w[0] == w[1]) {
            let ctx = VariableContext::block(total - 1);
            let mut p = MPoly::one(&ctx);
            for i in 0..block.len() - 1 {
                p = &p * &MPoly::var(&ctx, i);
            }
            return Ok(p);
        }
        if algs.iter().all(|a| a.is_morin()) {
            let orders: Vec<u32> = dims.iter().map(|&d| d as u32).collect();
            return match nakajima_dual(&orders) {
                NakajimaDual::Known(p) => Ok(p),
                NakajimaDual::Unknown => Err(missing()),
            };
        }
        Err(missing())
    }

    /// The sum algebra `A_{α_l}`: the algebra itself for a singleton, the
    /// curvilinear sum of the diagrams otherwise.
    fn block_algebra(&self, block: &[usize]) -> Result<AlgebraSpec, AssembleError> {
        if let [i] = block {
            return Ok(self.algebras[i - 1].clone());
        }
        let diagrams: Vec<DiagramND> = block
            .iter()
            .map(|&i| self.algebras[i - 1].diagram.clone())
            .collect::<Option<_>>()
            .ok_or_else(|| AssembleError::UnresolvableSum(block.to_vec()))?;
        let sum = DiagramND::curvilinear_sum(&diagrams)?;
        let mut a = AlgebraSpec::new(sum.len(), DimensionVector::canonical(&sum));
        a.diagram = Some(sum);
        a.epd = self.sum_epds.get(block).cloned();
        Ok(a)
    }
}

/// One summand of a multi-point formula, indexed by a set partition.
#[derive(Debug, Clone)]
pub struct GeometricTerm {
    pub partition: SetPartition,
    pub assembled: Assembled,
}

/// Residue variable name `z{i}` of block `l` (0-based) among `t` blocks.
fn block_var(i: usize, l: usize, t: usize) -> String {
    if t <= 1 {
        format!("z{i}")
    } else {
        format!("z{i}_{}", l + 1)
    }
}

/// One term per `α ∈ Π(s)`, in canonical partition order. Each block uses
/// its sum algebra's filtration, ePD and Segre factors, the monomial
/// `(z_1⋯z_{k−1})ⁿ` as for a single point, and its block dual in the
/// denominator; `Φ` sees the direct sum over blocks on `t` copies of `X`.
pub fn assemble_geometric(
    g: &GeometricSubsetSpec,
    bundle: &BundleModel,
    surface: &SurfaceModel,
    phi: &ChernPoly,
) -> Result<Vec<GeometricTerm>, AssembleError> {
    if g.algebras.is_empty() {
        return Err(AssembleError::InvalidSpec("no algebras given".into()));
    }
    for a in &g.algebras {
        a.validate()?;
    }
    let n = surface.dim() as i32;
    let mut out = Vec::new();
    for alpha in set_partitions(g.algebras.len()) {
        let t = alpha.num_blocks();
        let mut shapes = Vec::with_capacity(t);
        let mut warnings = Vec::new();
        for (l, block) in alpha.blocks().iter().enumerate() {
            let a = g.block_algebra(block)?;
            a.validate()?;
            let names = if t == 1 && block.len() == 1 {
                a.names()
            } else {
                (1..a.k).map(|i| block_var(i, l, t)).collect()
            };
            if block.len() > 1 && a.epd.is_none() {
                warnings.push(format!("ePD of the sum algebra for block {block:?} not supplied; using 1"));
            }
            let mut shape = a.block_shape(names, l, n);
            let dual = g.block_dual(block)?;
            if !dual.as_constant().is_some_and(|c| c.is_one()) {
                shape.denominator_monomials.push(dual);
            }
            shapes.push(shape);
        }
        let mut assembled = build_problem(&shapes, bundle, surface, phi, t, t == 1)?;
        assembled.warnings.extend(warnings);
        out.push(GeometricTerm {
            partition: alpha,
            assembled,
        });
    }
    Ok(out)
}

/// Terms of the formula for `GHilb^k(X)`: per block of size `m`, sign
/// `(−1)^{m−1}`, `Π_{i<j}(z_i − z_j)`, the block polynomial `Q_{m−1}`,
/// denominators `Π_{i+j≤l≤m−1}(z_i+z_j−z_l)` and `(z_1⋯z_{m−1})^{n+1}`.
///
/// `q` supplies `Q_{m−1}` keyed by `m − 1` as a polynomial in
/// `z1..z{m−1}`; missing entries are taken as 1 with a warning.
pub fn assemble_ghilb(
    k: usize,
    bundle: &BundleModel,
    surface: &SurfaceModel,
    phi: &ChernPoly,
    q: &BTreeMap<usize, MPoly>,
) -> Result<Vec<GeometricTerm>, AssembleError> {
    if k == 0 {
        return Err(AssembleError::InvalidSpec("k must be at least 1".into()));
    }
    let n = surface.dim() as i32;
    let mut out = Vec::new();
    for alpha in set_partitions(k) {
        let t = alpha.num_blocks();
        let mut shapes = Vec::with_capacity(t);
        let mut warnings = Vec::new();
        for (l, block) in alpha.blocks().iter().enumerate() {
            let m = block.len();
            let names: Vec<String> = (1..m).map(|i| block_var(i, l, t)).collect();
            let weights: Vec<u32> = (1..m as u32).collect();
            let mut shape = BlockShape::new(names, weights, l, n + 1);
            if m % 2 == 0 {
                shape.prefactor = -Rational::one();
            }
            if m > 1 {
                match q.get(&(m - 1)) {
                    Some(p) => shape.numerator_extras.push(p.clone()),
                    None => warnings.push(format!("block polynomial Q_{} not supplied; using 1", m - 1)),
                }
            }
            shapes.push(shape);
        }
        let mut assembled = build_problem(&shapes, bundle, surface, phi, t, t == 1)?;
        assembled.warnings.extend(warnings);
        out.push(GeometricTerm {
            partition: alpha,
            assembled,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::{assemble_punctual, structural_summary};

    fn setup() -> (BundleModel, SurfaceModel) {
        (BundleModel::line("L"), SurfaceModel::generic_surface())
    }

    #[test]
    fn two_points() {
        let (f, x) = setup();
        let g = GeometricSubsetSpec::trivial(2, 2);
        let terms = assemble_geometric(&g, &f, &x, &ChernPoly::parse("e2^2", 2).unwrap()).unwrap();
        assert_eq!(terms.len(), 2);
        let merged = &terms[0];
        assert_eq!(merged.partition, SetPartition::single_block(2));
        assert_eq!(merged.assembled.copies, 1);
        let s = structural_summary(&merged.assembled.problem);
        assert_eq!(s.num_vars, 1);
        // (z1)^n from the punctual part times the dual z1.
        assert_eq!(s.monomial_denominator, vec![3]);
        let discrete = &terms[1];
        assert_eq!(discrete.assembled.copies, 2);
        assert_eq!(discrete.assembled.problem.num_vars(), 0);
    }

    #[test]
    fn single_algebra_reduces_to_punctual() {
        let (f, x) = setup();
        let a = AlgebraSpec::from_diagram(&DiagramND::from_partition(&[2, 1]).unwrap());
        let phi = ChernPoly::class(2);
        let terms = assemble_geometric(&GeometricSubsetSpec::new(vec![a.clone()]), &f, &x, &phi).unwrap();
        let p = assemble_punctual(&a, &f, &x, &phi).unwrap();
        assert_eq!(terms.len(), 1);
        let t = &terms[0].assembled.problem;
        assert_eq!(t.numerator, p.problem.numerator);
        assert_eq!(structural_summary(t), structural_summary(&p.problem));
        assert_eq!(t.laurent_prefactors, p.problem.laurent_prefactors);
    }

    #[test]
    fn ghilb_three_merged_block() {
        let (f, x) = setup();
        let terms = assemble_ghilb(3, &f, &x, &ChernPoly::class(2), &BTreeMap::new()).unwrap();
        assert_eq!(terms.len(), 5);
        let s = structural_summary(&terms[0].assembled.problem);
        assert_eq!(s.denominators, vec!["(2*z1 - z2)".to_string()]);
        assert_eq!(s.monomial_denominator, vec![3, 3]);
        assert_eq!(terms[0].assembled.problem.prefactor, Rational::one());
        let k2 = assemble_ghilb(2, &f, &x, &ChernPoly::class(2), &BTreeMap::new()).unwrap();
        assert_eq!(k2[0].assembled.problem.prefactor, -Rational::one());
    }

    #[test]
    fn unknown_dual_is_reported() {
        let (f, x) = setup();
        let a2 = AlgebraSpec::from_diagram(&DiagramND::row(2, 2).unwrap());
        let a4 = AlgebraSpec::from_diagram(&DiagramND::row(2, 4).unwrap());
        let g = GeometricSubsetSpec::new(vec![a2, a4]);
        let err = assemble_geometric(&g, &f, &x, &ChernPoly::class(2)).unwrap_err();
        assert!(matches!(err, AssembleError::MissingDual { .. }));
    }

    #[test]
    fn morin_pair_uses_table() {
        let (f, x) = setup();
        let a1 = AlgebraSpec::trivial(2);
        let a2 = AlgebraSpec::from_diagram(&DiagramND::row(2, 2).unwrap());
        let g = GeometricSubsetSpec::new(vec![a1, a2]);
        let terms = assemble_geometric(&g, &f, &x, &ChernPoly::class(2)).unwrap();
        // (1,2) → z2 on top of (z1 z2)^2
        let s = structural_summary(&terms[0].assembled.problem);
        assert_eq!(s.monomial_denominator, vec![2, 3]);
    }
}
