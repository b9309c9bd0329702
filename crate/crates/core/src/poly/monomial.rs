use std::cmp::Ordering;

use smallvec::SmallVec;

/// Sparse exponent vector: `(variable index, exponent)` pairs sorted by
/// index, with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[(u16, i32); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(var: usize, exp: i32) -> Self {
        let mut m = Monomial::one();
        if exp != 0 {
            m.0.push((var as u16, exp));
        }
        m
    }

    /// Builds from arbitrary pairs; repeated variables are merged.
    pub fn from_pairs<I: IntoIterator<Item = (usize, i32)>>(pairs: I) -> Self {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            m = m.mul(&Monomial::var(v, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.0.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn exponent(&self, var: usize) -> i32 {
        match self.0.binary_search_by_key(&(var as u16), |p| p.0) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|p| p.1 as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn pow(&self, n: i32) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * n)).collect())
    }

    /// Drops `var` from the monomial.
    pub fn without(&self, var: usize) -> Monomial {
        Monomial(self.0.iter().copied().filter(|p| p.0 as usize != var).collect())
    }

    /// Renames variables through `map` (old index to new index).
    pub fn remap(&self, map: &[usize]) -> Monomial {
        Monomial::from_pairs(self.iter().map(|(v, e)| (map[v], e)))
    }

    /// Emission order: higher total degree first, then lexicographically
    /// larger exponent vector first (variables in context order).
    pub fn canonical_cmp(&self, other: &Monomial) -> Ordering {
        other
            .total_degree()
            .cmp(&self.total_degree())
            .then_with(|| lex_desc(&self.0, &other.0))
    }
}

fn lex_desc(a: &[(u16, i32)], b: &[(u16, i32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        let next = match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(x), None) => (x.1, 0, true, false),
            (None, Some(y)) => (0, y.1, false, true),
            (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                Ordering::Less => (x.1, 0, true, false),
                Ordering::Greater => (0, y.1, false, true),
                Ordering::Equal => (x.1, y.1, true, true),
            },
        };
        let (ea, eb, adv_a, adv_b) = next;
        if ea != eb {
            return eb.cmp(&ea);
        }
        if adv_a {
            i += 1;
        }
        if adv_b {
            j += 1;
        }
    }
}
