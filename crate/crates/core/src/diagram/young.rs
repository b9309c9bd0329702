use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::DiagramError;

/// Finite downward-closed set of boxes in `ℤ≥0^dim`.
///
/// A classical partition `(λ₁ ≥ λ₂ ≥ …)` is stored in French convention:
/// row `j` holds the boxes `(i, j)` with `i < λ_{j+1}`.
type SliceTable = Vec<(Vec<u32>, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramND {
    dim: usize,
    boxes: BTreeSet<Vec<u32>>,
}

impl DiagramND {
    pub fn new<I>(dim: usize, boxes: I) -> Result<Self, DiagramError>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        if dim == 0 {
            return Err(DiagramError::ZeroDimension);
        }
        let boxes: BTreeSet<Vec<u32>> = boxes.into_iter().collect();
        if boxes.is_empty() {
            return Err(DiagramError::Empty);
        }
        for b in &boxes {
            if b.len() != dim {
                return Err(DiagramError::DimensionMismatch {
                    expected: dim,
                    found: b.len(),
                });
            }
            // Closure under single-step decrements implies full closure.
            for j in 0..dim {
                if b[j] > 0 {
                    let mut p = b.clone();
                    p[j] -= 1;
                    if !boxes.contains(&p) {
                        return Err(DiagramError::NotDownwardClosed(b.clone()));
                    }
                }
            }
        }
        Ok(DiagramND { dim, boxes })
    }

    /// Two-dimensional diagram of a classical partition.
    pub fn from_partition(parts: &[u32]) -> Result<Self, DiagramError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(DiagramError::NotAPartition(parts.to_vec()));
        }
        let boxes = parts
            .iter()
            .enumerate()
            .flat_map(|(j, &len)| (0..len).map(move |i| vec![i, j as u32]));
        Self::new(2, boxes)
    }

    /// Single box.
    pub fn point(dim: usize) -> Self {
        DiagramND {
            dim,
            boxes: [vec![0; dim]].into_iter().collect(),
        }
    }

    /// Row of `len` boxes along the first axis (the Morin algebra `ℂ[t]/tˡᵉⁿ`).
    pub fn row(dim: usize, len: u32) -> Result<Self, DiagramError> {
        Self::new(
            dim,
            (0..len).map(|i| {
                let mut b = vec![0; dim];
                b[0] = i;
                b
            }),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn boxes(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.boxes.iter()
    }

    pub fn contains(&self, b: &[u32]) -> bool {
        self.boxes.contains(b)
    }

    /// `r_j` = largest `j`-th coordinate of a box (0-based).
    pub fn lengths(&self) -> Vec<u32> {
        let mut r = vec![0; self.dim];
        for b in &self.boxes {
            for (rj, &c) in r.iter_mut().zip(b) {
                *rj = (*rj).max(c);
            }
        }
        r
    }

    /// Length of the diagram, i.e. `r₁` in well-oriented position.
    pub fn length(&self) -> u32 {
        self.lengths().into_iter().max().unwrap_or(0)
    }

    /// Number of boxes on each slice parallel to the first axis, keyed by
    /// the remaining coordinates.
    pub fn slice_lengths(&self) -> BTreeMap<Vec<u32>, u32> {
        let mut out: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        for b in &self.boxes {
            let e = out.entry(b[1..].to_vec()).or_default();
            *e = (*e).max(b[0] + 1);
        }
        out
    }

    /// Classical partition of a two-dimensional diagram.
    pub fn to_partition(&self) -> Option<Vec<u32>> {
        if self.dim != 2 {
            return None;
        }
        Some(self.slice_lengths().into_values().collect())
    }

    fn permuted(&self, perm: &[usize]) -> DiagramND {
        DiagramND {
            dim: self.dim,
            boxes: self
                .boxes
                .iter()
                .map(|b| perm.iter().map(|&p| b[p]).collect())
                .collect(),
        }
    }

    /// Axis-permuted copy with `r₁ ≥ … ≥ r_d`.
    ///
    /// Among the admissible permutations the one with the lexicographically
    /// largest slice-length profile wins, so the result only depends on the
    /// diagram up to axis permutation.
    pub fn orient_well(&self) -> DiagramND {
        let r = self.lengths();
        let mut best: Option<(SliceTable, DiagramND)> = None;
        for perm in axis_permutations(self.dim) {
            if perm.windows(2).any(|w| r[w[0]] < r[w[1]]) {
                continue;
            }
            let cand = self.permuted(&perm);
            let key: SliceTable = cand.slice_lengths().into_iter().collect();
            let profile = profile_key(&key);
            match &best {
                Some((k, _)) if profile_key(k) >= profile => {}
                _ => best = Some((key, cand)),
            }
        }
        best.expect("identity permutation sorts after reordering").1
    }

    pub fn is_well_oriented(&self) -> bool {
        self.lengths().windows(2).all(|w| w[0] >= w[1])
    }

    /// Sum along the first axis: slice cardinalities add. No reorientation.
    pub fn sum_along_first_axis(diagrams: &[DiagramND]) -> Result<DiagramND, DiagramError> {
        let dim = diagrams.first().ok_or(DiagramError::Empty)?.dim;
        let mut slices: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
        for d in diagrams {
            if d.dim != dim {
                return Err(DiagramError::DimensionMismatch {
                    expected: dim,
                    found: d.dim,
                });
            }
            for (k, v) in d.slice_lengths() {
                *slices.entry(k).or_default() += v;
            }
        }
        let boxes = slices.into_iter().flat_map(|(rest, n)| {
            (0..n).map(move |i| {
                let mut b = Vec::with_capacity(rest.len() + 1);
                b.push(i);
                b.extend_from_slice(&rest);
                b
            })
        });
        DiagramND::new(dim, boxes)
    }

    /// Curvilinear sum: well-orient every summand, add along the first
    /// axis, and well-orient the result.
    pub fn curvilinear_sum(diagrams: &[DiagramND]) -> Result<DiagramND, DiagramError> {
        let oriented: Vec<DiagramND> = diagrams.iter().map(|d| d.orient_well()).collect();
        Ok(Self::sum_along_first_axis(&oriented)?.orient_well())
    }

    /// Non-origin boxes sorted by total degree, ties by descending
    /// coordinates. This is the order of the residue variables for the
    /// canonical filtration `N_i = 𝔪ⁱ/I`.
    pub fn nilpotent_boxes(&self) -> Vec<Vec<u32>> {
        let mut v: Vec<Vec<u32>> = self
            .boxes
            .iter()
            .filter(|b| b.iter().any(|&c| c > 0))
            .cloned()
            .collect();
        v.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        v
    }

    /// Parses either classical notation `(2,1)` or whitespace-separated
    /// box tuples such as `(0,0) (1,0) (0,1)`.
    pub fn parse(src: &str) -> Result<DiagramND, DiagramError> {
        let s = src.trim();
        let groups = tuple_groups(s).ok_or_else(|| DiagramError::Parse(src.to_string()))?;
        if groups.len() == 1 && !s.contains(") ") && !s.contains(")(") {
            // A single tuple is a classical partition, unless it can only
            // be read as the origin box of a higher-dimensional diagram.
            let g = &groups[0];
            if g.iter().any(|&x| x > 0) {
                return DiagramND::from_partition(g);
            }
        }
        let dim = groups[0].len();
        DiagramND::new(dim, groups)
    }
}

// Slice lengths in slice order first; the full slice table breaks the
// remaining ties, so the winner is unique.
fn profile_key(key: &[(Vec<u32>, u32)]) -> (Vec<u32>, Vec<(Vec<u32>, u32)>) {
    (key.iter().map(|(_, n)| *n).collect(), key.to_vec())
}

fn tuple_groups(s: &str) -> Option<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    let mut rest = s;
    while let Some(start) = rest.find('(') {
        if !rest[..start].trim().is_empty() {
            return None;
        }
        let end = rest[start..].find(')')? + start;
        let inner = &rest[start + 1..end];
        let nums = inner
            .split(',')
            .map(|t| t.trim().parse::<u32>().ok())
            .collect::<Option<Vec<_>>>()?;
        out.push(nums);
        rest = &rest[end + 1..];
    }
    if !rest.trim().is_empty() || out.is_empty() {
        return None;
    }
    Some(out)
}

fn axis_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl fmt::Display for DiagramND {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.to_partition() {
            let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            return write!(f, "({})", parts.join(","));
        }
        let tuples: Vec<String> = self
            .boxes
            .iter()
            .map(|b| {
                let c: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                format!("({})", c.join(","))
            })
            .collect();
        write!(f, "{}", tuples.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(p: &[u32]) -> DiagramND {
        DiagramND::from_partition(p).unwrap()
    }

    #[test]
    fn lengths_examples() {
        assert_eq!(DiagramND::point(2).lengths(), vec![0, 0]);
        assert_eq!(part(&[2, 1]).lengths(), vec![1, 1]);
        assert_eq!(part(&[6, 3]).lengths(), vec![5, 1]);
    }

    #[test]
    fn rejects_non_staircase() {
        assert!(matches!(
            DiagramND::new(2, vec![vec![0, 0], vec![2, 0]]),
            Err(DiagramError::NotDownwardClosed(_))
        ));
        assert!(DiagramND::new(2, Vec::<Vec<u32>>::new()).is_err());
    }

    #[test]
    fn column_orients_to_row() {
        let col = part(&[1, 1, 1]);
        assert_eq!(col.orient_well(), part(&[3]));
        let row = part(&[3, 1]);
        assert_eq!(row.orient_well(), row);
    }

    #[test]
    fn orient_sorts_three_dim_lengths() {
        let d = DiagramND::new(3, vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 2, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(d.lengths(), vec![0, 2, 1]);
        assert_eq!(d.orient_well().lengths(), vec![2, 1, 0]);
    }

    #[test]
    fn repeated_sums() {
        let one = DiagramND::point(2);
        assert_eq!(DiagramND::curvilinear_sum(&vec![one; 4]).unwrap(), part(&[4]));
        let g = part(&[2, 1]);
        assert_eq!(DiagramND::curvilinear_sum(&[g.clone(), g]).unwrap(), part(&[4, 2]));
        assert_eq!(
            DiagramND::curvilinear_sum(&[part(&[3]), part(&[2, 1])]).unwrap(),
            part(&[5, 1])
        );
    }

    #[test]
    fn parse_both_notations() {
        assert_eq!(DiagramND::parse("(2,1)").unwrap(), part(&[2, 1]));
        assert_eq!(DiagramND::parse("(0,0) (1,0) (0,1)").unwrap(), part(&[2, 1]));
        assert_eq!(DiagramND::parse("(0,0,0)").unwrap(), DiagramND::point(3));
        assert_eq!(part(&[4, 2]).to_string(), "(4,2)");
        assert!(DiagramND::parse("2,1").is_err());
    }

    #[test]
    fn nilpotent_box_order() {
        let names: Vec<Vec<u32>> = part(&[4, 2]).nilpotent_boxes();
        assert_eq!(
            names,
            vec![vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![3, 0]]
        );
    }
}
