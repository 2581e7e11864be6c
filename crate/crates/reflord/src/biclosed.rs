//! Closure and biclosedness in a finite root system, the positive-system
//! family `(psi \ sub(pi1)) u sub(pi2)`, enumeration oracles, and admissible
//! chains with their 0/1 signatures.

use crate::error::{Error, Result};
use crate::rootsys::{FiniteRoot, PositiveSystem, RootSet, RootSystem};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// A finite 0/1 word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(bits: Vec<u8>) -> Result<Word> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::BadAlphabet);
        }
        Ok(Word(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|&&b| b == 0).count()
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::BadAlphabet),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

/// Result of the two-sided closure test.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct BiclosedCheck {
    pub closed: bool,
    pub co_closed: bool,
}

impl BiclosedCheck {
    pub fn both(&self) -> bool {
        self.closed && self.co_closed
    }
}

/// Tests whether `s` is closed and co-closed inside `ambient`: every root
/// `k1*x + k2*y` (`k1, k2 > 0` rational, `x, y` in the side being tested)
/// that lies in `ambient` must lie in that side.
pub fn is_biclosed(
    rs: &RootSystem,
    s: &BTreeSet<FiniteRoot>,
    ambient: &BTreeSet<FiniteRoot>,
) -> Result<BiclosedCheck> {
    let amb = rs.set_from_roots(ambient)?;
    let set = rs.set_from_roots(s)?;
    if !set.is_subset(&amb) {
        return Err(Error::NotInAmbient);
    }
    Ok(BiclosedCheck {
        closed: rs.is_closed_in(&set, &amb),
        co_closed: rs.is_closed_in(&amb.minus(&set), &amb),
    })
}

/// A biclosed subset of the full root system, optionally carrying the
/// `(psi, pi1, pi2)` triple it was built from.
#[derive(Clone, Debug)]
pub struct FiniteBiclosed {
    pub(crate) set: RootSet,
    pub canonical: Option<CanonicalTriple>,
}

#[derive(Clone, Debug)]
pub struct CanonicalTriple {
    pub psys: PositiveSystem,
    pub pi1: BTreeSet<FiniteRoot>,
    pub pi2: BTreeSet<FiniteRoot>,
}

impl FiniteBiclosed {
    pub fn roots(&self, rs: &RootSystem) -> BTreeSet<FiniteRoot> {
        rs.roots_from_set(&self.set)
    }

    pub fn set(&self) -> &RootSet {
        &self.set
    }

    pub fn from_roots(rs: &RootSystem, roots: &BTreeSet<FiniteRoot>) -> Result<FiniteBiclosed> {
        Ok(FiniteBiclosed {
            set: rs.set_from_roots(roots)?,
            canonical: None,
        })
    }
}

impl PartialEq for FiniteBiclosed {
    fn eq(&self, other: &Self) -> bool {
        self.set == other.set
    }
}
impl Eq for FiniteBiclosed {}

fn orthogonal(rs: &RootSystem, a: &[usize], b: &[usize]) -> bool {
    use num::Zero;
    a.iter().all(|&x| b.iter().all(|&y| rs.bilinear(x, y).is_zero()))
}

/// `(psys \ sub(pi1)) u sub(pi2)` for orthogonal subsets `pi1, pi2` of the
/// simple system of `psys`. The result is biclosed in the full system.
pub fn psi_sub(
    rs: &RootSystem,
    psys: &PositiveSystem,
    pi1: &BTreeSet<FiniteRoot>,
    pi2: &BTreeSet<FiniteRoot>,
) -> Result<FiniteBiclosed> {
    let simples = psys.simples(rs);
    if !pi1.is_subset(&simples) || !pi2.is_subset(&simples) {
        return Err(Error::NotOrthogonal {
            pi1: pi1.iter().map(|r| r.0.clone()).collect(),
            pi2: pi2.iter().map(|r| r.0.clone()).collect(),
        });
    }
    let ids1: Vec<usize> = pi1.iter().map(|r| rs.require_id(r)).collect::<Result<_>>()?;
    let ids2: Vec<usize> = pi2.iter().map(|r| rs.require_id(r)).collect::<Result<_>>()?;
    if !orthogonal(rs, &ids1, &ids2) {
        return Err(Error::NotOrthogonal {
            pi1: pi1.iter().map(|r| r.0.clone()).collect(),
            pi2: pi2.iter().map(|r| r.0.clone()).collect(),
        });
    }
    let sub1 = rs.root_subsystem(pi1)?;
    let sub2 = rs.root_subsystem(pi2)?;
    let set = psys.set().minus(&sub1.roots).union(&sub2.roots);

    let ambient = rs.all_roots_set();
    if !rs.is_closed_in(&set, &ambient) || !rs.is_closed_in(&ambient.minus(&set), &ambient) {
        return Err(Error::Internal("psi_sub produced a non-biclosed set".into()));
    }
    Ok(FiniteBiclosed {
        set,
        canonical: Some(CanonicalTriple {
            psys: psys.clone(),
            pi1: pi1.clone(),
            pi2: pi2.clone(),
        }),
    })
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum EnumMethod {
    Brute,
    Formula,
}

pub const BRUTE_GUARD: usize = 20;

/// Enumerates all biclosed sets in the full root system, either by scanning
/// every subset or by running `psi_sub` over all positive systems and
/// orthogonal pairs. Results are deduplicated as sets and sorted.
pub fn enumerate_biclosed(rs: &RootSystem, method: EnumMethod) -> Result<Vec<FiniteBiclosed>> {
    let n = rs.num_roots();
    match method {
        EnumMethod::Brute => {
            if n > BRUTE_GUARD {
                return Err(Error::GuardExceeded(format!(
                    "brute enumeration over {n} roots needs 2^{n} subsets (guard: {BRUTE_GUARD})"
                )));
            }
            let table = rs.pair_table();
            // sum_masks[i][j]: roots reachable as positive combinations
            let mut sum_masks = vec![vec![0u64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    for sol in &table.sums[i][j] {
                        sum_masks[i][j] |= 1u64 << sol.k;
                    }
                }
            }
            let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let closed = |mask: u64| -> bool {
                let mut rest = mask;
                while rest != 0 {
                    let i = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let mut others = rest;
                    while others != 0 {
                        let j = others.trailing_zeros() as usize;
                        others &= others - 1;
                        if sum_masks[i][j] & !mask != 0 {
                            return false;
                        }
                    }
                }
                true
            };
            let mut out = Vec::new();
            for mask in 0..=full {
                if closed(mask) && closed(full & !mask) {
                    out.push(FiniteBiclosed {
                        set: RootSet::from_ids(
                            n,
                            (0..n).filter(|&i| mask & (1u64 << i) != 0),
                        ),
                        canonical: None,
                    });
                }
            }
            out.sort_by(|a, b| (a.set.len(), &a.set).cmp(&(b.set.len(), &b.set)));
            Ok(out)
        }
        EnumMethod::Formula => {
            let mut seen: std::collections::BTreeMap<RootSet, FiniteBiclosed> =
                Default::default();
            for psys in rs.positive_systems() {
                let simples: Vec<usize> = psys.simple_ids().to_vec();
                let r = simples.len();
                for m1 in 0..(1usize << r) {
                    let ids1: Vec<usize> = (0..r)
                        .filter(|&b| m1 & (1 << b) != 0)
                        .map(|b| simples[b])
                        .collect();
                    for m2 in 0..(1usize << r) {
                        if m1 & m2 != 0 {
                            continue;
                        }
                        let ids2: Vec<usize> = (0..r)
                            .filter(|&b| m2 & (1 << b) != 0)
                            .map(|b| simples[b])
                            .collect();
                        if !orthogonal(rs, &ids1, &ids2) {
                            continue;
                        }
                        let pi1: BTreeSet<FiniteRoot> =
                            ids1.iter().map(|&i| rs.root(i).clone()).collect();
                        let pi2: BTreeSet<FiniteRoot> =
                            ids2.iter().map(|&i| rs.root(i).clone()).collect();
                        let b = psi_sub(rs, &psys, &pi1, &pi2)?;
                        seen.entry(b.set.clone()).or_insert(b);
                    }
                }
            }
            let mut out: Vec<FiniteBiclosed> = seen.into_values().collect();
            out.sort_by(|a, b| (a.set.len(), &a.set).cmp(&(b.set.len(), &b.set)));
            Ok(out)
        }
    }
}

/// Which admissibility case a nested pair of biclosed sets falls into:
/// tag 1 when the difference lies inside `-b1`, tag 0 when it avoids it.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct AdmissiblePair {
    pub admissible: bool,
    pub tag: Option<u8>,
}

pub fn is_admissible_pair(
    rs: &RootSystem,
    b1: &FiniteBiclosed,
    b2: &FiniteBiclosed,
) -> Result<AdmissiblePair> {
    if !b1.set.is_subset(&b2.set) {
        return Err(Error::NotNested);
    }
    let diff = b2.set.minus(&b1.set);
    if diff.is_empty() {
        // both cases hold vacuously; reported as 0
        return Ok(AdmissiblePair {
            admissible: true,
            tag: Some(0),
        });
    }
    let neg_b1 = RootSet::from_ids(rs.num_roots(), b1.set.iter().map(|i| rs.neg(i)));
    let inside = diff.iter().all(|i| neg_b1.contains(i));
    let outside = diff.iter().all(|i| !neg_b1.contains(i));
    let tag = if inside {
        Some(1)
    } else if outside {
        Some(0)
    } else {
        None
    };
    Ok(AdmissiblePair {
        admissible: tag.is_some(),
        tag,
    })
}

/// One step of an admissible chain in canonical form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainStep {
    pub delta1: BTreeSet<FiniteRoot>,
    pub delta2: BTreeSet<FiniteRoot>,
}

/// An admissible chain of biclosed sets `B_0 = {} < B_1 < ... < B_k = Phi`
/// presented in canonical `(base, delta1, delta2)` form.
#[derive(Clone)]
pub struct AdmissibleChain {
    rs: Arc<RootSystem>,
    base: PositiveSystem,
    steps: Vec<ChainStep>,
    sets: Vec<FiniteBiclosed>,
}

impl AdmissibleChain {
    /// Validates the canonical-form invariants and admissibility of every
    /// consecutive pair.
    pub fn new(
        rs: Arc<RootSystem>,
        base: PositiveSystem,
        steps: Vec<ChainStep>,
    ) -> Result<AdmissibleChain> {
        if steps.len() < 2 {
            return Err(Error::InvalidChain("need at least the two endpoints".into()));
        }
        let delta = base.simples(&rs);
        let first = &steps[0];
        let last = &steps[steps.len() - 1];
        if first.delta1 != delta || !first.delta2.is_empty() {
            return Err(Error::InvalidChain("chain must start at (Delta, {})".into()));
        }
        if !last.delta1.is_empty() || last.delta2 != delta {
            return Err(Error::InvalidChain("chain must end at ({}, Delta)".into()));
        }
        for w in steps.windows(2) {
            let (prev, next) = (&w[0], &w[1]);
            if !next.delta1.is_subset(&prev.delta1) || !prev.delta2.is_subset(&next.delta2) {
                return Err(Error::InvalidChain("step moves the wrong way".into()));
            }
            let s1 = prev.delta1 != next.delta1;
            let s2 = prev.delta2 != next.delta2;
            if s1 == s2 {
                return Err(Error::InvalidChain(
                    "each step must change exactly one of the two sides".into(),
                ));
            }
        }
        let mut sets = Vec::with_capacity(steps.len());
        for step in &steps {
            sets.push(psi_sub(&rs, &base, &step.delta1, &step.delta2)?);
        }
        if !sets[0].set.is_empty() {
            return Err(Error::InvalidChain("B_0 must be empty".into()));
        }
        if sets[sets.len() - 1].set.len() != rs.num_roots() {
            return Err(Error::InvalidChain("B_k must be the whole system".into()));
        }
        for w in sets.windows(2) {
            if !w[0].set.is_subset(&w[1].set) || w[0].set.len() >= w[1].set.len() {
                return Err(Error::InvalidChain("sets must strictly increase".into()));
            }
        }
        let chain = AdmissibleChain { rs, base, steps, sets };
        signature_of_chain(&chain)?;
        Ok(chain)
    }

    pub fn rs(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn base(&self) -> &PositiveSystem {
        &self.base
    }

    pub fn steps(&self) -> &[ChainStep] {
        &self.steps
    }

    pub fn sets(&self) -> &[FiniteBiclosed] {
        &self.sets
    }

    /// Number of steps `k` (the chain has `k + 1` sets).
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Debug for AdmissibleChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdmissibleChain({}, k={})", self.rs.ctype(), self.len())
    }
}

/// The 0/1 word recording which admissibility case each step falls into.
pub fn signature_of_chain(chain: &AdmissibleChain) -> Result<Word> {
    signature_of_biclosed_sequence(&chain.rs, &chain.sets)
}

pub(crate) fn signature_of_biclosed_sequence(
    rs: &RootSystem,
    sets: &[FiniteBiclosed],
) -> Result<Word> {
    let mut bits = Vec::with_capacity(sets.len().saturating_sub(1));
    for (i, w) in sets.windows(2).enumerate() {
        let pair = is_admissible_pair(rs, &w[0], &w[1])?;
        match pair.tag {
            Some(t) => bits.push(t),
            None => return Err(Error::InadmissiblePair { step: i }),
        }
    }
    Word::new(bits)
}

pub const CHAIN_ENUM_RANK_GUARD: usize = 3;

/// All maximal admissible chains anchored at the standard positive system,
/// moving one simple root per step.
pub fn enumerate_maximal_admissible_chains(
    rs: &Arc<RootSystem>,
) -> Result<Vec<AdmissibleChain>> {
    use num::Zero;
    let rank = rs.rank();
    if rank > CHAIN_ENUM_RANK_GUARD {
        return Err(Error::GuardExceeded(format!(
            "maximal-chain enumeration guarded at rank {CHAIN_ENUM_RANK_GUARD}, got {rank}"
        )));
    }
    let base = rs
        .positive_system_from_set(rs.standard_positive_set())
        .expect("standard positives form a positive system");
    let simples: Vec<usize> = base.simple_ids().to_vec();

    let mut chains = Vec::new();
    let mut path: Vec<(BTreeSet<usize>, BTreeSet<usize>)> =
        vec![(simples.iter().copied().collect(), BTreeSet::new())];

    fn dfs(
        rs: &Arc<RootSystem>,
        base: &PositiveSystem,
        simples: &[usize],
        path: &mut Vec<(BTreeSet<usize>, BTreeSet<usize>)>,
        chains: &mut Vec<AdmissibleChain>,
    ) -> Result<()> {
        let (d1, d2) = path.last().unwrap().clone();
        if d1.is_empty() && d2.len() == simples.len() {
            let steps: Vec<ChainStep> = path
                .iter()
                .map(|(a, b)| ChainStep {
                    delta1: a.iter().map(|&i| rs.root(i).clone()).collect(),
                    delta2: b.iter().map(|&i| rs.root(i).clone()).collect(),
                })
                .collect();
            chains.push(AdmissibleChain::new(rs.clone(), base.clone(), steps)?);
            return Ok(());
        }
        for &x in &d1 {
            let mut n1 = d1.clone();
            n1.remove(&x);
            path.push((n1, d2.clone()));
            dfs(rs, base, simples, path, chains)?;
            path.pop();
        }
        for &y in simples {
            if d2.contains(&y) {
                continue;
            }
            if !d1.iter().all(|&x| rs.bilinear(x, y).is_zero()) {
                continue;
            }
            let mut n2 = d2.clone();
            n2.insert(y);
            path.push((d1.clone(), n2));
            dfs(rs, base, simples, path, chains)?;
            path.pop();
        }
        Ok(())
    }

    dfs(rs, &base, &simples, &mut path, &mut chains)?;
    Ok(chains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, CoxeterType, Family};

    fn sys(f: Family, n: usize) -> Arc<RootSystem> {
        Arc::new(build_root_system(CoxeterType::new(f, n).unwrap()).unwrap())
    }

    fn root(v: &[i64]) -> FiniteRoot {
        FiniteRoot(v.to_vec())
    }

    #[test]
    fn missing_sum_of_simples_is_not_closed() {
        let rs = sys(Family::A, 2);
        let s = BTreeSet::from([root(&[1, 0]), root(&[0, 1])]);
        let amb = rs.roots_from_set(&rs.standard_positive_set());
        let chk = is_biclosed(&rs, &s, &amb).unwrap();
        assert!(!chk.closed);
    }

    #[test]
    fn empty_set_is_biclosed() {
        let rs = sys(Family::B, 2);
        let amb = rs.roots_from_set(&rs.all_roots_set());
        let chk = is_biclosed(&rs, &BTreeSet::new(), &amb).unwrap();
        assert!(chk.closed && chk.co_closed);
    }

    #[test]
    fn reflected_positive_system_is_biclosed() {
        // s_{a1}(Phi+) in A2
        let rs = sys(Family::A, 2);
        let s = BTreeSet::from([root(&[0, 1]), root(&[1, 1]), root(&[-1, 0])]);
        let amb = rs.roots_from_set(&rs.all_roots_set());
        let chk = is_biclosed(&rs, &s, &amb).unwrap();
        assert!(chk.closed && chk.co_closed);
    }

    #[test]
    fn is_biclosed_rejects_bad_nesting() {
        let rs = sys(Family::A, 2);
        let s = BTreeSet::from([root(&[-1, 0])]);
        let amb = rs.roots_from_set(&rs.standard_positive_set());
        assert!(is_biclosed(&rs, &s, &amb).is_err());
    }

    fn std_psys(rs: &RootSystem) -> PositiveSystem {
        rs.positive_system_from_set(rs.standard_positive_set()).unwrap()
    }

    #[test]
    fn psi_sub_extremes() {
        let rs = sys(Family::A, 3);
        let psys = std_psys(&rs);
        let delta: BTreeSet<FiniteRoot> = psys.simples(&rs);

        let empty = psi_sub(&rs, &psys, &delta, &BTreeSet::new()).unwrap();
        assert!(empty.set().is_empty());

        let full = psi_sub(&rs, &psys, &BTreeSet::new(), &delta).unwrap();
        assert_eq!(full.set().len(), rs.num_roots());
    }

    #[test]
    fn psi_sub_a3_example() {
        let rs = sys(Family::A, 3);
        let psys = std_psys(&rs);
        let pi1 = BTreeSet::from([root(&[1, 0, 0])]);
        let pi2 = BTreeSet::from([root(&[0, 0, 1])]);
        let b = psi_sub(&rs, &psys, &pi1, &pi2).unwrap();
        let mut expect: BTreeSet<FiniteRoot> =
            rs.roots_from_set(&rs.standard_positive_set());
        expect.remove(&root(&[1, 0, 0]));
        expect.insert(root(&[0, 0, -1]));
        assert_eq!(b.roots(&rs), expect);
    }

    #[test]
    fn psi_sub_rejects_non_orthogonal() {
        let rs = sys(Family::A, 2);
        let psys = std_psys(&rs);
        let pi1 = BTreeSet::from([root(&[1, 0])]);
        let pi2 = BTreeSet::from([root(&[0, 1])]);
        assert!(psi_sub(&rs, &psys, &pi1, &pi2).is_err());
    }

    #[test]
    fn a1_biclosed_family() {
        let rs = sys(Family::A, 1);
        for method in [EnumMethod::Brute, EnumMethod::Formula] {
            let fam = enumerate_biclosed(&rs, method).unwrap();
            let sets: BTreeSet<BTreeSet<FiniteRoot>> =
                fam.iter().map(|b| b.roots(&rs)).collect();
            assert_eq!(
                sets,
                BTreeSet::from([
                    BTreeSet::new(),
                    BTreeSet::from([root(&[-1])]),
                    BTreeSet::from([root(&[1])]),
                    BTreeSet::from([root(&[-1]), root(&[1])]),
                ])
            );
        }
    }

    #[test]
    fn brute_guard_refuses_large_systems() {
        let rs = sys(Family::B, 4); // 32 roots
        assert!(matches!(
            enumerate_biclosed(&rs, EnumMethod::Brute),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn brute_equals_formula_small_ranks() {
        for (f, n) in [(Family::A, 2), (Family::B, 2), (Family::G, 2)] {
            let rs = sys(f, n);
            let brute = enumerate_biclosed(&rs, EnumMethod::Brute).unwrap();
            let formula = enumerate_biclosed(&rs, EnumMethod::Formula).unwrap();
            let bs: Vec<&RootSet> = brute.iter().map(|b| b.set()).collect();
            let fs: Vec<&RootSet> = formula.iter().map(|b| b.set()).collect();
            assert_eq!(bs, fs, "{}{}", f.letter(), n);
        }
    }

    #[test]
    fn admissible_pair_examples() {
        let rs = sys(Family::A, 2);
        let empty = FiniteBiclosed::from_roots(&rs, &BTreeSet::new()).unwrap();
        let pos = FiniteBiclosed {
            set: rs.standard_positive_set(),
            canonical: None,
        };
        let full = FiniteBiclosed {
            set: rs.all_roots_set(),
            canonical: None,
        };
        assert_eq!(
            is_admissible_pair(&rs, &empty, &pos).unwrap(),
            AdmissiblePair { admissible: true, tag: Some(0) }
        );
        assert_eq!(
            is_admissible_pair(&rs, &pos, &full).unwrap(),
            AdmissiblePair { admissible: true, tag: Some(1) }
        );
        assert!(is_admissible_pair(&rs, &pos, &empty).is_err());
    }

    #[test]
    fn admissible_pair_by_definition() {
        // b1 = {a1}, b2 = s_{a2}(Phi+) u {a1} checked against -b1
        let rs = sys(Family::A, 2);
        let b1 = FiniteBiclosed::from_roots(&rs, &BTreeSet::from([root(&[1, 0])])).unwrap();
        let b2 = FiniteBiclosed::from_roots(
            &rs,
            &BTreeSet::from([root(&[1, 0]), root(&[1, 1]), root(&[0, -1])]),
        )
        .unwrap();
        let p = is_admissible_pair(&rs, &b1, &b2).unwrap();
        assert_eq!(p, AdmissiblePair { admissible: true, tag: Some(0) });
    }

    #[test]
    fn a1_single_maximal_chain() {
        let rs = sys(Family::A, 1);
        let chains = enumerate_maximal_admissible_chains(&rs).unwrap();
        assert_eq!(chains.len(), 1);
        let sets = chains[0].sets();
        assert!(sets[0].set().is_empty());
        assert_eq!(sets[1].roots(&rs), BTreeSet::from([root(&[1])]));
        assert_eq!(sets[2].set().len(), 2);
        assert_eq!(signature_of_chain(&chains[0]).unwrap().to_string(), "01");
    }

    #[test]
    fn a2_chain_signatures() {
        let rs = sys(Family::A, 2);
        let chains = enumerate_maximal_admissible_chains(&rs).unwrap();
        assert!(!chains.is_empty());
        for c in &chains {
            let sig = signature_of_chain(c).unwrap().to_string();
            assert!(sig == "0011" || sig == "0101", "unexpected signature {sig}");
        }
    }

    #[test]
    fn chain_enumeration_guard() {
        let rs = sys(Family::A, 4);
        assert!(enumerate_maximal_admissible_chains(&rs).is_err());
    }

    #[test]
    fn run_contraction_lemma_rank2() {
        // equal-tag consecutive admissible pairs contract to an admissible
        // pair with the same tag
        for (f, n) in [(Family::A, 2), (Family::B, 2), (Family::G, 2)] {
            let rs = sys(f, n);
            for chain in enumerate_maximal_admissible_chains(&rs).unwrap() {
                let sets = chain.sets();
                for i in 0..sets.len() - 2 {
                    let t1 = is_admissible_pair(&rs, &sets[i], &sets[i + 1]).unwrap();
                    let t2 = is_admissible_pair(&rs, &sets[i + 1], &sets[i + 2]).unwrap();
                    if t1.tag == t2.tag {
                        let merged = is_admissible_pair(&rs, &sets[i], &sets[i + 2]).unwrap();
                        assert_eq!(merged.tag, t1.tag);
                    }
                }
            }
        }
    }
}
