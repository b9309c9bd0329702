//! Multidegrees (equivariant Poincaré duals) of monomial ideals, and the
//! table of duals of Nakajima geometric subsets.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::poly::{MPoly, Monomial, Rational, VariableContext};

/// Largest ring the brute-force prime search will handle.
pub const MAX_VARIABLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultidegreeError {
    #[error("the unit ideal has no multidegree")]
    UnitIdeal,
    #[error("the zero ideal has codimension 0 and multidegree 1; give at least one generator")]
    ZeroIdeal,
    #[error("generator {index} has {found} exponents, ring has {expected} variables")]
    Arity { index: usize, expected: usize, found: usize },
    #[error("{found} weights for {expected} variables")]
    WeightCount { expected: usize, found: usize },
    #[error("weights must share one context")]
    MixedContexts,
    #[error("at most {MAX_VARIABLES} variables are supported, got {0}")]
    TooManyVariables(usize),
}

/// Monomial ideal in `ℂ[x_1..x_N]` with torus weights `η_1..η_N`.
/// Generators are kept minimal and sorted.
#[derive(Debug, Clone)]
pub struct MonomialIdeal {
    num_vars: usize,
    generators: Vec<Vec<u32>>,
    weights: Vec<MPoly>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(mut gens: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    gens.sort();
    gens.dedup();
    let keep: Vec<bool> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| !gens.iter().enumerate().any(|(j, h)| j != i && divides(h, g)))
        .collect();
    gens.into_iter().zip(keep).filter_map(|(g, k)| k.then_some(g)).collect()
}

impl MonomialIdeal {
    pub fn new(generators: Vec<Vec<u32>>, weights: Vec<MPoly>) -> Result<Self, MultidegreeError> {
        let n = weights.len();
        if n > MAX_VARIABLES {
            return Err(MultidegreeError::TooManyVariables(n));
        }
        for (index, g) in generators.iter().enumerate() {
            if g.len() != n {
                return Err(MultidegreeError::Arity {
                    index,
                    expected: n,
                    found: g.len(),
                });
            }
        }
        if let Some(w0) = weights.first() {
            if weights.iter().any(|w| !w.same_context(w0)) {
                return Err(MultidegreeError::MixedContexts);
            }
        }
        Ok(MonomialIdeal {
            num_vars: n,
            generators: minimalize(generators),
            weights,
        })
    }

    /// Ideal with abstract weights named after `names`.
    pub fn with_symbols(generators: Vec<Vec<u32>>, names: &[&str]) -> Result<Self, MultidegreeError> {
        let ctx = weight_context(names);
        let weights = (0..names.len()).map(|i| MPoly::var(&ctx, i)).collect();
        Self::new(generators, weights)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn weights(&self) -> &[MPoly] {
        &self.weights
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(|g| g.iter().all(|&e| e == 0))
    }

    /// Generators are `lcm`s of pairs; weights are taken from `self`.
    pub fn intersect(&self, other: &MonomialIdeal) -> Result<MonomialIdeal, MultidegreeError> {
        if other.num_vars != self.num_vars {
            return Err(MultidegreeError::WeightCount {
                expected: self.num_vars,
                found: other.num_vars,
            });
        }
        let mut gens = Vec::new();
        for g in &self.generators {
            for h in &other.generators {
                gens.push(g.iter().zip(h).map(|(a, b)| *a.max(b)).collect());
            }
        }
        MonomialIdeal::new(gens, self.weights.clone())
    }

    fn supports(&self) -> Vec<u32> {
        self.generators
            .iter()
            .map(|g| {
                g.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(0u32, |acc, (i, _)| acc | (1 << i))
            })
            .collect()
    }

    /// Variable subsets `S` with `P_S ⊇ I` of the smallest size, i.e. the
    /// minimal primes of maximal dimension, as bitmasks.
    fn top_primes(&self) -> Result<(usize, Vec<u32>), MultidegreeError> {
        if self.is_unit() {
            return Err(MultidegreeError::UnitIdeal);
        }
        if self.generators.is_empty() {
            return Err(MultidegreeError::ZeroIdeal);
        }
        let supports = self.supports();
        let n = self.num_vars;
        for size in 1..=n {
            let covers: Vec<u32> = (0u32..(1 << n))
                .filter(|m| m.count_ones() as usize == size)
                .filter(|m| supports.iter().all(|s| s & m != 0))
                .collect();
            if !covers.is_empty() {
                return Ok((size, covers));
            }
        }
        unreachable!("the full variable set meets every non-unit generator")
    }

    /// `N` minus the largest number of variables avoiding every generator.
    pub fn codimension(&self) -> Result<usize, MultidegreeError> {
        self.top_primes().map(|(c, _)| c)
    }

    /// Length of `(ℂ[x]/I)` localised at `P_S`: generators restricted to the
    /// `S` variables (others set to 1), then standard monomials counted.
    fn multiplicity(&self, mask: u32) -> u64 {
        let vars: Vec<usize> = (0..self.num_vars).filter(|i| mask & (1 << i) != 0).collect();
        let local: Vec<Vec<u32>> =
            minimalize(self.generators.iter().map(|g| vars.iter().map(|&i| g[i]).collect()).collect());
        // Each S-variable has a pure power among the local generators since
        // P_S is a minimal prime; those powers bound the staircase.
        let bounds: Vec<u32> = (0..vars.len())
            .map(|j| {
                local
                    .iter()
                    .filter(|g| g.iter().enumerate().all(|(i, &e)| i == j || e == 0))
                    .map(|g| g[j])
                    .min()
                    .expect("minimal prime forces a pure power")
            })
            .collect();
        let mut count = 0u64;
        let mut e = vec![0u32; vars.len()];
        loop {
            if !local.iter().any(|g| divides(g, &e)) {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == e.len() {
                    return count;
                }
                e[i] += 1;
                if e[i] < bounds[i] {
                    break;
                }
                e[i] = 0;
                i += 1;
            }
        }
    }

    /// `Σ_S mult_{P_S}(I) · Π_{i∈S} η_i` over the minimal primes of maximal
    /// dimension.
    pub fn multidegree(&self) -> Result<MPoly, MultidegreeError> {
        let (_, primes) = self.top_primes()?;
        let ctx = self.weights[0].ctx().clone();
        let mut out = MPoly::zero(&ctx);
        for mask in primes {
            let mult = self.multiplicity(mask);
            let mut term = MPoly::integer(&ctx, mult as i64);
            for i in 0..self.num_vars {
                if mask & (1 << i) != 0 {
                    term = &term * &self.weights[i];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }
}

/// Context of abstract weight symbols, each of degree 1.
pub fn weight_context(names: &[&str]) -> Arc<VariableContext> {
    let mut b = VariableContext::builder();
    for n in names {
        b = b.geometry(*n, 1);
    }
    b.build().expect("weight names must be distinct identifiers")
}

/// A looked-up dual: a polynomial in `z1..z{Σd−1}` or an acknowledged gap.
#[derive(Debug, Clone, PartialEq)]
pub enum NakajimaDual {
    Known(MPoly),
    Unknown,
}

impl NakajimaDual {
    pub fn known(&self) -> Option<&MPoly> {
        match self {
            NakajimaDual::Known(p) => Some(p),
            NakajimaDual::Unknown => None,
        }
    }
}

// Sorted Morin orders → exponents of z1.., or None where the dual is not
// known. The (1,5) row is keyed by its entries even though it is listed
// among the sums equal to 5.
fn table() -> BTreeMap<Vec<u32>, Option<Vec<usize>>> {
    let rows: &[(&[u32], Option<&[usize]>)] = &[
        (&[1, 1], Some(&[1])),
        (&[1, 2], Some(&[2])),
        (&[1, 1, 1], Some(&[1, 2])),
        (&[1, 3], Some(&[3])),
        (&[2, 2], Some(&[1])),
        (&[1, 1, 2], Some(&[1, 2])),
        (&[1, 1, 1, 1], Some(&[1, 2, 3])),
        (&[1, 4], Some(&[4])),
        (&[2, 3], Some(&[1])),
        (&[1, 2, 2], Some(&[1, 2])),
        (&[1, 1, 3], Some(&[1, 3])),
        (&[1, 1, 1, 2], Some(&[1, 2, 3])),
        (&[1, 1, 1, 1, 1], Some(&[1, 2, 3, 4])),
        (&[1, 5], Some(&[1])),
        (&[2, 4], None),
        (&[3, 3], Some(&[1])),
        (&[2, 2, 2], Some(&[1, 2])),
    ];
    rows.iter()
        .map(|(k, v)| (k.to_vec(), v.map(|s| s.to_vec())))
        .collect()
}

/// Dual of `Nak(d_1+…+d_s) ⊂ Nak(d_1,…,d_s)` as a polynomial on
/// [`VariableContext::block`]`(Σd − 1)`.
///
/// Table entries take precedence; otherwise balanced tuples `(d,…,d)`
/// give `z_1⋯z_{s−1}`. Anything else is [`NakajimaDual::Unknown`].
pub fn nakajima_dual(d: &[u32]) -> NakajimaDual {
    let mut key = d.to_vec();
    key.sort_unstable();
    let total: u32 = key.iter().sum();
    if key.is_empty() || key.contains(&0) {
        return NakajimaDual::Unknown;
    }
    let ctx = VariableContext::block(total as usize - 1);
    let product = |vars: &[usize]| {
        MPoly::monomial(
            &ctx,
            Monomial::from_pairs(vars.iter().map(|&v| (v - 1, 1))),
            Rational::from_integer(1.into()),
        )
    };
    if let Some(entry) = table().get(&key) {
        return match entry {
            Some(vars) => NakajimaDual::Known(product(vars)),
            None => NakajimaDual::Unknown,
        };
    }
    if key.windows(2).all(|w| w[0] == w[1]) {
        let vars: Vec<usize> = (1..key.len()).collect();
        return NakajimaDual::Known(product(&vars));
    }
    NakajimaDual::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(gens: &[&[u32]], names: &[&str]) -> MonomialIdeal {
        MonomialIdeal::with_symbols(gens.iter().map(|g| g.to_vec()).collect(), names).unwrap()
    }

    #[test]
    fn codimensions() {
        assert_eq!(ideal(&[&[1, 0], &[0, 1]], &["a", "b"]).codimension().unwrap(), 2);
        assert_eq!(ideal(&[&[2, 0]], &["a", "b"]).codimension().unwrap(), 1);
        assert_eq!(ideal(&[&[2, 0], &[1, 1], &[0, 2]], &["a", "b"]).codimension().unwrap(), 2);
    }

    #[test]
    fn multidegrees() {
        assert_eq!(ideal(&[&[3]], &["eta1"]).multidegree().unwrap().to_string(), "3*eta1");
        assert_eq!(ideal(&[&[2, 0], &[0, 1]], &["a", "b"]).multidegree().unwrap().to_string(), "2*a*b");
        assert_eq!(
            ideal(&[&[2, 0], &[1, 1], &[0, 2]], &["a", "b"]).multidegree().unwrap().to_string(),
            "3*a*b"
        );
        // (xy): two components of codimension one.
        assert_eq!(ideal(&[&[1, 1]], &["a", "b"]).multidegree().unwrap().to_string(), "a + b");
    }

    #[test]
    fn unit_and_zero_ideals_are_errors() {
        assert_eq!(ideal(&[&[0, 0]], &["a", "b"]).multidegree(), Err(MultidegreeError::UnitIdeal));
        assert_eq!(ideal(&[], &["a"]).codimension(), Err(MultidegreeError::ZeroIdeal));
    }

    #[test]
    fn generators_are_minimalized() {
        let i = ideal(&[&[2, 1], &[1, 0], &[1, 0]], &["a", "b"]);
        assert_eq!(i.generators(), &[vec![1, 0]]);
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let i = ideal(&[&[1, 0]], &["a", "b"]);
        let j = ideal(&[&[0, 1]], &["a", "b"]);
        assert_eq!(i.intersect(&j).unwrap().generators(), &[vec![1, 1]]);
    }

    #[test]
    fn nakajima_table() {
        let s = |d: &[u32]| nakajima_dual(d).known().map(|p| p.to_string());
        assert_eq!(s(&[1, 1]).as_deref(), Some("z1"));
        assert_eq!(s(&[2, 1, 1]).as_deref(), Some("z1*z2"));
        assert_eq!(s(&[1, 4]).as_deref(), Some("z4"));
        assert_eq!(s(&[5, 1]).as_deref(), Some("z1"));
        assert_eq!(nakajima_dual(&[2, 4]), NakajimaDual::Unknown);
        // balanced rule beyond the table
        assert_eq!(s(&[4, 4]).as_deref(), Some("z1"));
        assert_eq!(s(&[1; 7]).as_deref(), Some("z1*z2*z3*z4*z5*z6"));
        assert_eq!(s(&[3]).as_deref(), Some("1"));
        assert_eq!(nakajima_dual(&[1, 6]), NakajimaDual::Unknown);
    }
}
