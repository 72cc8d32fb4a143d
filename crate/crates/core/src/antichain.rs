//! The `rho` and `pi` permutation families and finite-prefix checks of the
//! antichain and chain statements about their catergrams.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{BarTag, Permutation, SearchOutcome};
use crate::registry::Registry;
use crate::tanglegram::catergram_contains;

/// 1-based index into a permutation family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FamilyIndex(usize);

impl FamilyIndex {
    pub fn new(i: usize) -> Result<Self> {
        if i == 0 {
            return Err(Error::InvalidIndex(i));
        }
        Ok(FamilyIndex(i))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Size of `rho(i)` and `pi(i)`: `12 + 2i`.
    pub fn permutation_size(self) -> usize {
        12 + 2 * self.0
    }
}

/// `rho_i` on `[12 + 2i]`: starts `(2,3,5,1)`, ends
/// `(10+2i, 11+2i, 12+2i, 8+2i)`, and in between sends odd `j` to `j + 2`
/// and even `j` to `j - 2`.
pub fn rho(i: FamilyIndex) -> Permutation {
    let i = i.get();
    let n = 12 + 2 * i;
    let mut e = Vec::with_capacity(n);
    e.extend([2, 3, 5, 1]);
    for j in 5..=8 + 2 * i {
        e.push(if j % 2 == 1 { j + 2 } else { j - 2 });
    }
    e.extend([10 + 2 * i, 11 + 2 * i, 12 + 2 * i, 8 + 2 * i]);
    Permutation::new(e).expect("rho is a permutation")
}

/// `rho_i` turned upside down.
pub fn pi_seq(i: FamilyIndex) -> Permutation {
    rho(i).upside_down()
}

/// Values of the entries preceded by at least `threshold` larger entries.
pub fn heavy_entries(perm: &Permutation, threshold: usize) -> Vec<usize> {
    let e = perm.entries();
    (0..e.len())
        .filter(|&k| e[..k].iter().filter(|&&x| x > e[k]).count() >= threshold)
        .map(|k| e[k])
        .collect()
}

/// An indexed family of permutations whose catergrams are compared.
pub trait SequenceFamily: Send + Sync {
    fn member(&self, i: FamilyIndex) -> Permutation;
}

pub struct RhoFamily;

impl SequenceFamily for RhoFamily {
    fn member(&self, i: FamilyIndex) -> Permutation {
        rho(i)
    }
}

pub struct PiFamily;

impl SequenceFamily for PiFamily {
    fn member(&self, i: FamilyIndex) -> Permutation {
        pi_seq(i)
    }
}

impl<F> SequenceFamily for F
where
    F: Fn(FamilyIndex) -> Permutation + Send + Sync,
{
    fn member(&self, i: FamilyIndex) -> Permutation {
        self(i)
    }
}

/// Families selectable by name: `rho` and `pi`.
pub fn families() -> Registry<dyn SequenceFamily> {
    let mut reg: Registry<dyn SequenceFamily> = Registry::new("family");
    reg.register("rho", Box::new(RhoFamily));
    reg.register("pi", Box::new(PiFamily));
    reg
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairFilter {
    AllPairs,
    AdjacentOnly,
}

impl PairFilter {
    pub fn pairs(self, max: usize) -> Vec<(usize, usize)> {
        match self {
            PairFilter::AllPairs => (1..=max)
                .flat_map(|i| (i + 1..=max).map(move |j| (i, j)))
                .collect(),
            PairFilter::AdjacentOnly => (1..max).map(|i| (i, i + 1)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Timeout,
}

impl Verdict {
    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Timeout => "TIMEOUT",
        }
    }
}

/// One pattern check: is `sigma` (a bar-set member of member `i`) a pattern
/// of member `j`?
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    pub sigma: BarTag,
    pub result: Verdict,
    /// 1-based positions in member `j` of an occurrence, on failure.
    pub witness: Option<Vec<usize>>,
    pub elapsed_us: u64,
}

impl PairRecord {
    pub fn text_line(&self) -> String {
        let mut line = format!(
            "pair i={} j={} sigma={} result={} elapsed_us={}",
            self.i,
            self.j,
            self.sigma,
            self.result.as_str(),
            self.elapsed_us
        );
        if let Some(w) = &self.witness {
            let w: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            line.push_str(&format!(" witness={{{}}}", w.join(",")));
        }
        line
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AntichainReport {
    pub max: usize,
    pub filter: PairFilter,
    pub records: Vec<PairRecord>,
}

impl AntichainReport {
    pub fn verdict(&self) -> Verdict {
        if self.records.iter().any(|r| r.result == Verdict::Fail) {
            Verdict::Fail
        } else if self.records.iter().any(|r| r.result == Verdict::Timeout) {
            Verdict::Timeout
        } else {
            Verdict::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    pub fn summary_line(&self) -> String {
        format!(
            "antichain max={} pairs={} checks={} result={}",
            self.max,
            self.filter.pairs(self.max).len(),
            self.records.len(),
            self.verdict().as_str()
        )
    }
}

/// For each selected pair `i < j <= max` and each bar-set member `σ` of
/// member `i`, checks that `σ` is not a pattern of member `j`. This decides
/// that the catergrams of members `i` and `j` are incomparable in the
/// direction `i ⪯ j`; the reverse direction is excluded by size.
///
/// Pair checks run in parallel; records come back in `(i, j, σ)` order.
pub fn verify_antichain(
    family: &dyn SequenceFamily,
    max: usize,
    filter: PairFilter,
    timeout: Option<Duration>,
) -> Result<AntichainReport> {
    if max < 2 {
        return Err(Error::InvalidSize {
            what: "antichain prefix",
            size: max,
            min: 2,
        });
    }
    let members: Vec<Permutation> = (1..=max).map(|i| family.member(FamilyIndex(i))).collect();
    let pairs = filter.pairs(max);
    let nested: Vec<Result<Vec<PairRecord>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let small = &members[i - 1];
            let big = &members[j - 1];
            small
                .bar_variants()?
                .into_iter()
                .map(|(tag, sigma)| {
                    let start = Instant::now();
                    let deadline = timeout.map(|t| start + t);
                    let outcome = big.search_pattern(&sigma, deadline);
                    let elapsed_us = start.elapsed().as_micros() as u64;
                    let (result, witness) = match outcome {
                        SearchOutcome::Absent => (Verdict::Pass, None),
                        SearchOutcome::Found(w) => (Verdict::Fail, Some(w)),
                        SearchOutcome::TimedOut => (Verdict::Timeout, None),
                    };
                    Ok(PairRecord {
                        i,
                        j,
                        sigma: tag,
                        result,
                        witness,
                        elapsed_us,
                    })
                })
                .collect()
        })
        .collect();
    let mut records = Vec::new();
    for r in nested {
        records.extend(r?);
    }
    Ok(AntichainReport {
        max,
        filter,
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainRecord {
    pub i: usize,
    /// `member(i+1)[A_i] == tilde(member(i))` with `A_i = [n_{i+1}] \ {2,4}`.
    pub restriction_holds: bool,
    /// The catergram of member `i` is an induced subtanglegram of that of `i+1`.
    pub induced_holds: bool,
    pub elapsed_us: u64,
}

impl ChainRecord {
    pub fn passed(&self) -> bool {
        self.restriction_holds && self.induced_holds
    }

    pub fn text_line(&self) -> String {
        format!(
            "step i={} restriction={} induced={} result={} elapsed_us={}",
            self.i,
            self.restriction_holds,
            self.induced_holds,
            if self.passed() { "PASS" } else { "FAIL" },
            self.elapsed_us
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub max: usize,
    pub records: Vec<ChainRecord>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(ChainRecord::passed)
    }

    pub fn summary_line(&self) -> String {
        format!(
            "chain max={} steps={} result={}",
            self.max,
            self.records.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Checks consecutive members `i < max` for the explicit restriction identity
/// and, independently, for catergram containment via pattern matching.
pub fn verify_chain(family: &dyn SequenceFamily, max: usize) -> Result<ChainReport> {
    if max < 2 {
        return Err(Error::InvalidSize {
            what: "chain prefix",
            size: max,
            min: 2,
        });
    }
    let records = (1..max)
        .into_par_iter()
        .map(|i| {
            let start = Instant::now();
            let small = family.member(FamilyIndex(i));
            let big = family.member(FamilyIndex(i + 1));
            let keep: Vec<usize> = (1..=big.len()).filter(|&p| p != 2 && p != 4).collect();
            let restriction_holds = big.restrict(&keep)? == small.tilde()?;
            let induced_holds = catergram_contains(&big, &small);
            Ok(ChainRecord {
                i,
                restriction_holds,
                induced_holds,
                elapsed_us: start.elapsed().as_micros() as u64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainReport { max, records })
}
