//! Subsets `M ⊂ {1..n}` and their correspondence with spin sequences.

use std::fmt;

/// Strictly increasing 0-based indices; displayed 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    elems: Vec<usize>,
}

impl Subset {
    pub fn new(mut elems: Vec<usize>) -> Self {
        elems.sort_unstable();
        elems.dedup();
        Self { elems }
    }

    /// From 1-based labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        Self::new(labels.iter().map(|l| l - 1).collect())
    }

    pub fn empty() -> Self {
        Self { elems: Vec::new() }
    }

    /// `{0, …, k−1}`
    pub fn first(k: usize) -> Self {
        Self { elems: (0..k).collect() }
    }

    /// `{n−k, …, n−1}`
    pub fn last(n: usize, k: usize) -> Self {
        Self { elems: (n - k..n).collect() }
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elems.binary_search(&i).is_ok()
    }

    pub fn with(&self, i: usize) -> Self {
        let mut e = self.elems.clone();
        e.push(i);
        Self::new(e)
    }

    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|i| !self.contains(*i)).collect()
    }

    /// `self ⩽⩽ other`: equal sizes and elementwise `m_i ≤ n_i`.
    pub fn precedes(&self, other: &Subset) -> bool {
        self.len() == other.len() && self.elems.iter().zip(&other.elems).all(|(a, b)| a <= b)
    }

    /// Index into `V^{⊗n}`: bit `i` set iff site `i` carries a minus sign.
    pub fn mask(&self) -> usize {
        self.elems.iter().fold(0, |acc, &i| acc | (1 << i))
    }

    pub fn from_mask(mask: usize, n: usize) -> Self {
        Self { elems: (0..n).filter(|i| mask & (1 << i) != 0).collect() }
    }

    /// Image under the transposition of sites `i` and `i+1`.
    pub fn swap_sites(&self, i: usize) -> Self {
        Self::new(
            self.elems
                .iter()
                .map(|&e| if e == i { i + 1 } else if e == i + 1 { i } else { e })
                .collect(),
        )
    }
}

/// All `k`-subsets of `{0..n−1}` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Subset>) {
        if cur.len() == k {
            out.push(Subset { elems: cur.clone() });
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.elems.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_binomial() {
        assert_eq!(subsets(5, 2).len(), 10);
        assert_eq!(subsets(6, 3).len(), 20);
        assert_eq!(subsets(3, 0), vec![Subset::empty()]);
    }

    #[test]
    fn order_and_masks() {
        let a = Subset::from_labels(&[1, 3]);
        let b = Subset::from_labels(&[2, 3]);
        assert!(a.precedes(&b));
        assert!(!b.precedes(&a));
        assert_eq!(Subset::from_mask(a.mask(), 4), a);
        assert_eq!(a.to_string(), "{1,3}");
    }
}
