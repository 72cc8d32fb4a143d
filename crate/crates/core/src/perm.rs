//! Permutations in one-line notation and pattern containment.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection on `[n]` written as `(a_1, ..., a_n)` with `a_i = π(i)`.
///
/// Positions and values are 1-based everywhere in the public API.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

/// Result of a pattern search that may give up at a deadline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// Sorted 1-based positions of an occurrence.
    Found(Vec<usize>),
    Absent,
    TimedOut,
}

impl Permutation {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidSize {
                what: "permutation",
                size: 0,
                min: 1,
            });
        }
        let mut seen = vec![false; n + 1];
        for &a in &entries {
            if a == 0 || a > n || std::mem::replace(&mut seen[a], true) {
                return Err(Error::invalid(format!(
                    "{entries:?} is not a permutation of 1..={n}"
                )));
            }
        }
        Ok(Permutation(entries))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((1..=n).collect())
    }

    /// The permutation order-isomorphic to `values`, which must be distinct.
    pub fn standardize(values: &[usize]) -> Result<Self> {
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by_key(|&i| values[i]);
        let mut entries = vec![0; values.len()];
        for (rank, &i) in idx.iter().enumerate() {
            entries[i] = rank + 1;
        }
        if idx.windows(2).any(|w| values[w[0]] == values[w[1]]) {
            return Err(Error::invalid("values to standardize must be distinct"));
        }
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// `π(i)` for 1-based `i`.
    pub fn image(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// 1-based position of each value: `inverse()[a - 1] = i` when `π(i) = a`.
    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &a) in self.0.iter().enumerate() {
            inv[a - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// `π[A]`: the permutation order-isomorphic to the images of the
    /// positions in `positions`, read in increasing position order.
    pub fn restrict(&self, positions: &[usize]) -> Result<Permutation> {
        let set: BTreeSet<usize> = positions.iter().copied().collect();
        if set.is_empty() {
            return Err(Error::invalid("restriction needs a non-empty position set"));
        }
        if let Some(&bad) = set.iter().find(|&&p| p == 0 || p > self.len()) {
            return Err(Error::invalid(format!(
                "position {bad} is outside 1..={}",
                self.len()
            )));
        }
        let values: Vec<usize> = set.iter().map(|&p| self.image(p)).collect();
        Self::standardize(&values)
    }

    /// Lexicographically least set of positions `A` with `π[A] = pattern`,
    /// or `None` when the pattern does not occur.
    pub fn contains_pattern(&self, pattern: &Permutation) -> Option<Vec<usize>> {
        match self.search_pattern(pattern, None) {
            SearchOutcome::Found(w) => Some(w),
            SearchOutcome::Absent => None,
            SearchOutcome::TimedOut => unreachable!("no deadline was set"),
        }
    }

    /// Backtracking search for `pattern`, extending a partial embedding one
    /// pattern entry at a time in increasing position order.
    pub fn search_pattern(
        &self,
        pattern: &Permutation,
        deadline: Option<Instant>,
    ) -> SearchOutcome {
        let (n, m) = (self.len(), pattern.len());
        if m > n {
            return SearchOutcome::Absent;
        }
        let pat = pattern.entries();
        // For pattern entry k, the earlier entries holding the nearest smaller
        // and nearest larger value; the image of k must lie strictly between
        // their images.
        let mut below = vec![None; m];
        let mut above = vec![None; m];
        for k in 0..m {
            for j in 0..k {
                if pat[j] < pat[k] && below[k].is_none_or(|b: usize| pat[j] > pat[b]) {
                    below[k] = Some(j);
                }
                if pat[j] > pat[k] && above[k].is_none_or(|a: usize| pat[j] < pat[a]) {
                    above[k] = Some(j);
                }
            }
        }
        let text = &self.0;
        let mut chosen: Vec<usize> = Vec::with_capacity(m);
        // Next candidate position (0-based) for the entry being placed.
        let mut next = 0usize;
        let mut steps: u64 = 0;
        loop {
            let k = chosen.len();
            if k == m {
                return SearchOutcome::Found(chosen.iter().map(|p| p + 1).collect());
            }
            let last = n - (m - k);
            let mut placed = false;
            while next <= last {
                let p = next;
                next += 1;
                let v = text[p];
                let ok_low = below[k].is_none_or(|j| text[chosen[j]] < v);
                let ok_high = above[k].is_none_or(|j| text[chosen[j]] > v);
                if ok_low && ok_high {
                    chosen.push(p);
                    placed = true;
                    break;
                }
            }
            steps += 1;
            if steps & 0xffff == 0 {
                if let Some(d) = deadline {
                    if Instant::now() >= d {
                        return SearchOutcome::TimedOut;
                    }
                }
            }
            if !placed {
                match chosen.pop() {
                    Some(p) => next = p + 1,
                    None => return SearchOutcome::Absent,
                }
            } else {
                next = chosen[chosen.len() - 1] + 1;
            }
        }
    }

    fn require_two(&self, what: &'static str) -> Result<()> {
        if self.len() < 2 {
            return Err(Error::InvalidSize {
                what,
                size: self.len(),
                min: 2,
            });
        }
        Ok(())
    }

    /// Swaps the images of the last two positions.
    pub fn hat(&self) -> Result<Permutation> {
        self.require_two("hat")?;
        let mut e = self.0.clone();
        let n = e.len();
        e.swap(n - 2, n - 1);
        Ok(Permutation(e))
    }

    /// Swaps the values `n - 1` and `n` wherever they occur.
    pub fn tilde(&self) -> Result<Permutation> {
        self.require_two("tilde")?;
        let n = self.len();
        let e = self
            .0
            .iter()
            .map(|&a| match a {
                a if a == n => n - 1,
                a if a == n - 1 => n,
                a => a,
            })
            .collect();
        Ok(Permutation(e))
    }

    pub fn star(&self) -> Result<Permutation> {
        self.tilde()?.hat()
    }

    /// `{π, hat, tilde, star}`: every permutation encoding the same catergram.
    pub fn bar_set(&self) -> Result<BTreeSet<Permutation>> {
        Ok([self.clone(), self.hat()?, self.tilde()?, self.star()?]
            .into_iter()
            .collect())
    }

    /// The four bar-set members tagged by how they were obtained, including
    /// duplicates when the set collapses to two elements.
    pub fn bar_variants(&self) -> Result<[(BarTag, Permutation); 4]> {
        Ok([
            (BarTag::Id, self.clone()),
            (BarTag::Hat, self.hat()?),
            (BarTag::Tilde, self.tilde()?),
            (BarTag::Star, self.star()?),
        ])
    }

    /// Replaces every entry `j` by `n + 1 - j`.
    pub fn upside_down(&self) -> Permutation {
        let n = self.len();
        Permutation(self.0.iter().map(|&a| n + 1 - a).collect())
    }

    pub fn is_unimodal(&self) -> bool {
        is_unimodal(&self.0)
    }

    pub fn is_cater_good(&self) -> bool {
        is_cater_good(&self.0)
    }

    pub fn inversions(&self) -> u64 {
        count_inversions(&self.0)
    }
}

/// Which bar-set operator produced a permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BarTag {
    Id,
    Hat,
    Tilde,
    Star,
}

impl fmt::Display for BarTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BarTag::Id => "id",
            BarTag::Hat => "hat",
            BarTag::Tilde => "tilde",
            BarTag::Star => "star",
        })
    }
}

/// Increasing then decreasing; either run may be empty.
pub fn is_unimodal(seq: &[usize]) -> bool {
    let peak = seq.windows(2).take_while(|w| w[0] < w[1]).count();
    seq[peak..].windows(2).all(|w| w[0] > w[1])
}

/// For every entry, all larger entries sit on one side of it.
pub fn is_cater_good(seq: &[usize]) -> bool {
    let n = seq.len();
    let mut pos = vec![0; n + 1];
    for (i, &a) in seq.iter().enumerate() {
        pos[a] = i;
    }
    // Walk values downwards, tracking the span of positions holding larger values.
    let (mut lo, mut hi) = (usize::MAX, 0);
    for v in (1..=n).rev() {
        let p = pos[v];
        if lo != usize::MAX && lo < p && p < hi {
            return false;
        }
        lo = lo.min(p);
        hi = hi.max(p);
    }
    true
}

/// Number of pairs `i < j` with `seq[i] > seq[j]`, by merge sort.
pub fn count_inversions<T: Ord + Copy>(seq: &[T]) -> u64 {
    fn sort<T: Ord + Copy>(v: &mut [T], buf: &mut Vec<T>) -> u64 {
        let n = v.len();
        if n < 2 {
            return 0;
        }
        let mid = n / 2;
        let mut count = sort(&mut v[..mid], buf) + sort(&mut v[mid..], buf);
        buf.clear();
        let (mut i, mut j) = (0, mid);
        while i < mid && j < n {
            if v[j] < v[i] {
                count += (mid - i) as u64;
                buf.push(v[j]);
                j += 1;
            } else {
                buf.push(v[i]);
                i += 1;
            }
        }
        buf.extend_from_slice(&v[i..mid]);
        buf.extend_from_slice(&v[j..]);
        v.copy_from_slice(buf);
        count
    }
    let mut work = seq.to_vec();
    let mut buf = Vec::with_capacity(seq.len());
    sort(&mut work, &mut buf)
}

impl Permutation {
    /// Parses `(v1,...,vk)` where the values are distinct positive integers
    /// but need not form `[k]`, returning the order-isomorphic permutation.
    /// Pattern containment and restriction are unchanged by this step.
    pub fn parse_sequence(s: &str) -> Result<Permutation> {
        let values = parse_values(s)?;
        if values.is_empty() {
            return Err(Error::parse(0, "empty sequence"));
        }
        Permutation::standardize(&values)
    }
}

fn parse_values(s: &str) -> Result<Vec<usize>> {
    let t = s.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::parse(0, "permutation must be written as `(a1,...,an)`"))?;
    inner
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| {
                    Error::parse(0, format!("`{}` is not a positive integer", tok.trim()))
                })
        })
        .collect()
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(entries: Vec<usize>) -> Result<Self> {
        Permutation::new(entries)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::new(parse_values(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(p("(2,3,5,1,4)").to_string(), "(2,3,5,1,4)");
        assert_eq!(p(" ( 2, 1 ) ").entries(), &[2, 1]);
        for bad in ["2,1", "(2,2)", "(0,1)", "(1,3)", "()", "(a,1)"] {
            assert!(bad.parse::<Permutation>().is_err(), "{bad}");
        }
        assert_eq!(
            Permutation::parse_sequence("(2,3,5,1)").unwrap(),
            p("(2,3,4,1)")
        );
        for bad in ["(2,2)", "(0,1)", "()"] {
            assert!(Permutation::parse_sequence(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn restrict_examples() {
        let pi = p("(2,3,5,1,4)");
        assert_eq!(pi.restrict(&[1, 2, 3, 4, 5]).unwrap(), pi);
        // (2,3,5,1) is a sequence, not a permutation; its standardization is
        // order-isomorphic, so restriction gives the same result.
        let seq = Permutation::standardize(&[2, 3, 5, 1]).unwrap();
        assert_eq!(seq, p("(2,3,4,1)"));
        assert_eq!(seq.restrict(&[1, 3, 4]).unwrap(), p("(2,3,1)"));
        assert!(pi.restrict(&[]).is_err());
        assert!(pi.restrict(&[0, 1]).is_err());
        assert!(pi.restrict(&[6]).is_err());
    }

    #[test]
    fn pattern_examples() {
        assert_eq!(p("(2,3,1)").contains_pattern(&p("(1,2)")), Some(vec![1, 2]));
        let seq = Permutation::standardize(&[2, 3, 5, 1]).unwrap();
        assert_eq!(seq.contains_pattern(&p("(3,2,1)")), None);
        assert_eq!(p("(1,2)").contains_pattern(&p("(1,2,3)")), None);
        // least witness, not the first found by a greedy scan of values
        assert_eq!(
            p("(3,1,4,2)").contains_pattern(&p("(2,1)")),
            Some(vec![1, 2])
        );
        assert_eq!(
            p("(1,4,2,3)").contains_pattern(&p("(1,3,2)")),
            Some(vec![1, 2, 3])
        );
    }

    #[test]
    fn hat_tilde_star() {
        let pi = p("(2,3,1)");
        assert_eq!(pi.hat().unwrap(), p("(2,1,3)"));
        assert_eq!(pi.tilde().unwrap(), p("(3,2,1)"));
        assert_eq!(pi.star().unwrap(), p("(3,1,2)"));
        let bar = p("(1,2)").bar_set().unwrap();
        assert_eq!(
            bar.into_iter().collect::<Vec<_>>(),
            vec![p("(1,2)"), p("(2,1)")]
        );
        assert!(matches!(p("(1)").hat(), Err(Error::InvalidSize { .. })));
        assert!(p("(1)").bar_set().is_err());
    }

    #[test]
    fn upside_down_examples() {
        assert_eq!(
            Permutation::identity(3).unwrap().upside_down(),
            p("(3,2,1)")
        );
        let x = p("(4,1,3,2)");
        assert_eq!(x.upside_down().upside_down(), x);
    }

    #[test]
    fn unimodal_and_cater_good() {
        assert!(is_unimodal(&[1, 3, 2]) && is_cater_good(&[1, 3, 2]));
        assert!(!is_cater_good(&[2, 1, 3]));
        assert!(is_unimodal(&[1, 2, 3, 4]) && is_cater_good(&[1, 2, 3, 4]));
        assert!(is_unimodal(&[3, 2, 1]));
        assert!(!is_unimodal(&[2, 1, 3]));
        assert!(is_cater_good(&[1, 3, 4, 2]));
        assert!(!is_unimodal(&[2, 4, 3, 1, 5]));
    }

    #[test]
    fn inversions_match_pair_scan() {
        let seq = [5usize, 1, 4, 2, 3, 7, 6];
        let naive = (0..seq.len())
            .flat_map(|i| (i + 1..seq.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| seq[i] > seq[j])
            .count() as u64;
        assert_eq!(count_inversions(&seq), naive);
        assert_eq!(count_inversions::<usize>(&[]), 0);
    }

    #[test]
    fn search_respects_deadline() {
        let big = Permutation::identity(40).unwrap();
        let pat = p("(2,1)");
        let past = Instant::now();
        // Absent patterns in an identity permutation are rejected quickly; a
        // deadline in the past must still yield a definite or timed-out answer.
        let out = big.search_pattern(&pat, Some(past));
        assert!(matches!(
            out,
            SearchOutcome::Absent | SearchOutcome::TimedOut
        ));
    }
}
