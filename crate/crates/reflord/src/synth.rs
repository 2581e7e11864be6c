//! The constructive direction: trimmed Dyck word to admissible chain, chain
//! to reflection order on the affine positive system (a concatenation of
//! ascending, descending, and finite pieces), finite-block insertion
//! surgery, truncation, and full verification.

use crate::affine::{
    affine_decompositions, affine_sums, is_biclosed_affine, reflect_raw, signed_from_parts,
    theta_generators, window, AffineAudit, AffineRoot, HatSetDescriptor, ThetaGenerators,
};
use crate::biclosed::{signature_of_chain, AdmissibleChain, ChainStep, Word};
use crate::dyck::{classify_word, insertable_indices};
use crate::error::{Error, Result};
use crate::rootsys::{Family, FiniteRoot, RootSet, RootSystem};
use crate::DEFAULT_LEVEL_BOUND;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum PieceKind {
    Ascending,
    Descending,
    Finite,
}

/// How a piece's emission sequence was obtained.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum SynthPath {
    /// Inversion sequence of the periodic word cycling the theta generators.
    Periodic,
    /// Verified greedy selection (minimal level, then height, then lex).
    Greedy,
    /// Finite block relocated by insertion surgery.
    Block,
}

/// One piece of a structured order. `emitted` lists the materialized
/// members: from the bottom for ascending pieces, from the top for
/// descending ones, in order for finite blocks.
#[derive(Clone, Debug)]
pub struct OrderPiece {
    pub kind: PieceKind,
    /// Chain step this piece realizes (for blocks: the step it precedes).
    pub step: usize,
    pub membership: HatSetDescriptor,
    pub emitted: Vec<AffineRoot>,
    pub path: SynthPath,
}

/// A reflection order on the affine positive system, represented as a
/// finite concatenation of pieces. Deterministic for fixed chain, block
/// assignments, and audit bound; `level` only controls materialization.
#[derive(Clone)]
pub struct StructuredOrder {
    chain: AdmissibleChain,
    assignments: BTreeMap<usize, u64>,
    pieces: Vec<OrderPiece>,
    audit_bound: u32,
    level: u32,
}

impl std::fmt::Debug for StructuredOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "StructuredOrder({}, word={}, blocks={:?}, level={})",
            self.chain.rs().ctype(),
            signature_of_chain(&self.chain).map(|w| w.to_string()).unwrap_or_default(),
            self.assignments,
            self.level
        )
    }
}

// ---------------------------------------------------------------------------
// chain_from_word

enum GrowEnd {
    HighestFree,
    LowestFree,
}

struct StepMachine {
    drop_order: Vec<usize>,
    grow: GrowEnd,
}

impl StepMachine {
    fn for_family(family: Family, n: usize) -> StepMachine {
        match family {
            Family::D => StepMachine {
                drop_order: (1..=n).collect(),
                grow: GrowEnd::LowestFree,
            },
            Family::E => {
                let mut order: Vec<usize> = (4..=n).rev().collect();
                order.extend([2, 3, 1]);
                StepMachine { drop_order: order, grow: GrowEnd::HighestFree }
            }
            _ => StepMachine {
                drop_order: (1..=n).rev().collect(),
                grow: GrowEnd::HighestFree,
            },
        }
    }
}

/// Runs the per-family construction for an extended word: on 0 the next
/// simple leaves delta1 in the family's fixed order, on 1 delta2 gains the
/// extreme free simple orthogonal to delta1.
fn extended_chain_steps(
    rs: &RootSystem,
    w: &Word,
) -> Result<Vec<(BTreeSet<usize>, BTreeSet<usize>)>> {
    use num::Zero;
    let n = rs.rank();
    let machine = StepMachine::for_family(rs.ctype().family(), n);
    let mut d1: BTreeSet<usize> = (1..=n).collect();
    let mut d2: BTreeSet<usize> = BTreeSet::new();
    let mut steps = vec![(d1.clone(), d2.clone())];
    let mut dropped = 0usize;
    let simple = |i: usize| rs.simple_ids()[i - 1];
    for &bit in w.bits() {
        if bit == 0 {
            let x = machine.drop_order[dropped];
            dropped += 1;
            if !d1.remove(&x) {
                return Err(Error::Internal("drop order left delta1".into()));
            }
        } else {
            let orth = |p: &usize| {
                d1.iter().all(|&q| rs.bilinear(simple(p.to_owned()), simple(q)).is_zero())
            };
            let free: Vec<usize> = (1..=n).filter(|i| !d2.contains(i)).collect();
            let pick = match machine.grow {
                GrowEnd::HighestFree => free.iter().rev().find(|p| orth(p)).copied(),
                GrowEnd::LowestFree => free.iter().find(|p| orth(p)).copied(),
            };
            match pick {
                Some(p) => {
                    d2.insert(p);
                }
                None => {
                    return Err(Error::Internal(
                        "no orthogonal simple available for a 1-step".into(),
                    ))
                }
            }
        }
        steps.push((d1.clone(), d2.clone()));
    }
    Ok(steps)
}

/// Lexicographically least extended word contracting to `w`, together with
/// the letter multiplicities realizing it.
fn least_expansion(w: &Word, n: usize) -> Option<(Word, Vec<usize>)> {
    fn go(
        bits: &[u8],
        idx: usize,
        zeros_left: i64,
        ones_left: i64,
        balance: i64,
        mults: &mut Vec<usize>,
        best: &mut Option<(String, Vec<usize>)>,
    ) {
        if idx == bits.len() {
            if zeros_left == 0 && ones_left == 0 {
                let mut s = String::new();
                for (i, &m) in mults.iter().enumerate() {
                    for _ in 0..m {
                        s.push(if bits[i] == 0 { '0' } else { '1' });
                    }
                }
                if best.as_ref().is_none_or(|(b, _)| s < *b) {
                    *best = Some((s, mults.clone()));
                }
            }
            return;
        }
        if bits[idx] == 0 {
            let reserve = bits[idx + 1..].iter().filter(|&&b| b == 0).count() as i64;
            for m in 1..=(zeros_left - reserve) {
                mults.push(m as usize);
                go(bits, idx + 1, zeros_left - m, ones_left, balance + m, mults, best);
                mults.pop();
            }
        } else {
            let reserve = bits[idx + 1..].iter().filter(|&&b| b == 1).count() as i64;
            for m in 1..=(ones_left - reserve) {
                let closes = idx == bits.len() - 1 && m == ones_left && zeros_left == 0;
                if !closes && balance - m < 1 {
                    continue;
                }
                mults.push(m as usize);
                go(bits, idx + 1, zeros_left, ones_left - m, balance - m, mults, best);
                mults.pop();
            }
        }
    }
    let mut best = None;
    go(w.bits(), 0, n as i64, n as i64, 0, &mut Vec::new(), &mut best);
    best.map(|(s, m)| (s.parse::<Word>().unwrap(), m))
}

/// Builds the admissible chain a trimmed word names: the per-family
/// construction for extended words, and the contraction of the chain of the
/// lexicographically least expansion otherwise. The signature of the result
/// is the input word.
pub fn chain_from_word(rs: &Arc<RootSystem>, w: &Word) -> Result<AdmissibleChain> {
    let n = rs.rank();
    let class = classify_word(w, n)?;
    if !class.trimmed {
        return Err(Error::NotTrimmed {
            word: w.to_string(),
            rank: n,
        });
    }

    let index_steps = if class.extended {
        extended_chain_steps(rs, w)?
    } else {
        let (expansion, mults) =
            least_expansion(w, n).ok_or_else(|| Error::NotTrimmed {
                word: w.to_string(),
                rank: n,
            })?;
        let maximal = extended_chain_steps(rs, &expansion)?;
        let mut picks = vec![0usize];
        let mut acc = 0;
        for m in mults {
            acc += m;
            picks.push(acc);
        }
        picks.into_iter().map(|i| maximal[i].clone()).collect()
    };

    let base = rs
        .positive_system_from_set(rs.standard_positive_set())
        .expect("standard positives");
    let steps: Vec<ChainStep> = index_steps
        .into_iter()
        .map(|(a, b)| ChainStep {
            delta1: a.iter().map(|&i| rs.root(rs.simple_ids()[i - 1]).clone()).collect(),
            delta2: b.iter().map(|&i| rs.root(rs.simple_ids()[i - 1]).clone()).collect(),
        })
        .collect();
    let chain = AdmissibleChain::new(rs.clone(), base, steps)?;
    let sig = signature_of_chain(&chain)?;
    if &sig != w {
        return Err(Error::Internal(format!(
            "construction signature {sig} differs from requested {w}"
        )));
    }
    Ok(chain)
}

// ---------------------------------------------------------------------------
// piece synthesis

/// Membership snapshot of an initial interval over the bounded window.
struct Interval<'a> {
    rs: &'a RootSystem,
    bound: u32,
    set: HashSet<AffineRoot>,
}

impl<'a> Interval<'a> {
    /// Both sides stay closed when `z0` joins the set.
    fn can_add(&self, z0: AffineRoot) -> bool {
        for &t in &self.set {
            for z in affine_sums(self.rs, z0, t, self.bound) {
                if !self.set.contains(&z) && z != z0 {
                    return false;
                }
            }
        }
        for (x, y) in affine_decompositions(self.rs, z0, self.bound) {
            if x != z0 && y != z0 && !self.set.contains(&x) && !self.set.contains(&y) {
                return false;
            }
        }
        true
    }

    /// Both sides stay closed when `z0` leaves the set.
    fn can_remove(&self, win: &[AffineRoot], z0: AffineRoot) -> bool {
        for (x, y) in affine_decompositions(self.rs, z0, self.bound) {
            if x != z0 && y != z0 && self.set.contains(&x) && self.set.contains(&y) {
                return false;
            }
        }
        for &c in win {
            if c == z0 || self.set.contains(&c) {
                continue;
            }
            for z in affine_sums(self.rs, z0, c, self.bound) {
                if z != z0 && self.set.contains(&z) {
                    return false;
                }
            }
        }
        true
    }
}

fn emission_sort_key(rs: &RootSystem, x: &AffineRoot) -> (u32, i64, Vec<i64>) {
    (x.level, rs.root(x.gamma).height(), rs.root(x.gamma).0.clone())
}

/// Periodic cycle over the theta generators: reversed finite simples before
/// the affine generators for ascending pieces, after them for descending.
fn periodic_cycle(rs: &RootSystem, theta: &ThetaGenerators, kind: PieceKind) -> Vec<AffineRoot> {
    let simple_pos: BTreeMap<usize, usize> = rs
        .simple_ids()
        .iter()
        .enumerate()
        .map(|(pos, &id)| (id, pos))
        .collect();
    let mut finite: Vec<usize> = theta.finite_part.clone();
    finite.sort_by_key(|id| {
        (
            simple_pos.get(id).copied().unwrap_or(usize::MAX),
            rs.root(*id).0.clone(),
        )
    });
    finite.reverse();
    let finite: Vec<AffineRoot> = finite
        .into_iter()
        .map(|gamma| AffineRoot { gamma, level: 0 })
        .collect();
    let mut cycle = Vec::new();
    match kind {
        PieceKind::Ascending => {
            cycle.extend(finite);
            cycle.extend(theta.affine_part.iter().copied());
        }
        _ => {
            cycle.extend(theta.affine_part.iter().copied());
            cycle.extend(finite);
        }
    }
    cycle
}

struct PieceBuild {
    emitted: Vec<AffineRoot>,
    path: SynthPath,
}

/// Tries the periodic word, falling back to verified greedy selection.
/// `cur` enters as the initial interval before the piece and leaves as the
/// one after it.
#[allow(clippy::too_many_arguments)]
fn synthesize_piece(
    rs: &RootSystem,
    win: &[AffineRoot],
    audit_bound: u32,
    level: u32,
    cur: &mut Interval<'_>,
    kind: PieceKind,
    membership: &HatSetDescriptor,
    theta: &ThetaGenerators,
    step: usize,
) -> Result<PieceBuild> {
    let target: Vec<AffineRoot> = membership.members_up_to(rs, level);
    let target_set: HashSet<AffineRoot> = target.iter().copied().collect();

    let after: HashSet<AffineRoot> = cur.set.union(&target_set).copied().collect();

    let periodic = try_periodic(
        rs, win, audit_bound, level, cur, kind, membership, theta, &target_set,
    );
    if let Some(emitted) = periodic {
        cur.set = after;
        return Ok(PieceBuild {
            emitted,
            path: SynthPath::Periodic,
        });
    }

    let emitted = greedy_piece(rs, win, audit_bound, cur, kind, &target, step)?;
    cur.set = after;
    Ok(PieceBuild {
        emitted,
        path: SynthPath::Greedy,
    })
}

#[allow(clippy::too_many_arguments)]
fn try_periodic(
    rs: &RootSystem,
    win: &[AffineRoot],
    audit_bound: u32,
    level: u32,
    cur: &Interval<'_>,
    kind: PieceKind,
    membership: &HatSetDescriptor,
    theta: &ThetaGenerators,
    target_set: &HashSet<AffineRoot>,
) -> Option<Vec<AffineRoot>> {
    let cycle = periodic_cycle(rs, theta, kind);
    if cycle.is_empty() {
        return None;
    }
    let mut scratch = Interval {
        rs,
        bound: audit_bound,
        set: match kind {
            PieceKind::Descending => cur.set.union(target_set).copied().collect(),
            _ => cur.set.clone(),
        },
    };
    let mut emitted: Vec<AffineRoot> = Vec::new();
    let mut seen: HashSet<AffineRoot> = HashSet::new();
    let mut collected = 0usize;
    let mut prefix: Vec<AffineRoot> = Vec::new();
    let cap = target_set.len() + cycle.len() * (level as usize + 3) + 16;
    for k in 0..cap {
        if collected == target_set.len() {
            return Some(emitted);
        }
        let gen = cycle[k % cycle.len()];
        // iota_k = r_1 ... r_{k-1}(alpha_{r_k})
        let mut g = gen.gamma;
        let mut l = gen.level as i64;
        for &r in prefix.iter().rev() {
            let (ng, nl) = reflect_raw(rs, r, g, l);
            g = ng;
            l = nl;
        }
        prefix.push(gen);
        let signed = signed_from_parts(rs, g, l);
        if !signed.positive {
            return None; // word not reduced here
        }
        let iota = signed.root;
        if !membership.contains(rs, iota) || !seen.insert(iota) {
            return None;
        }
        if iota.level <= audit_bound {
            let ok = match kind {
                PieceKind::Descending => scratch.can_remove(win, iota),
                _ => scratch.can_add(iota),
            };
            if !ok {
                return None;
            }
            match kind {
                PieceKind::Descending => {
                    scratch.set.remove(&iota);
                }
                _ => {
                    scratch.set.insert(iota);
                }
            }
        }
        if iota.level <= level {
            collected += 1;
        }
        emitted.push(iota);
    }
    if collected == target_set.len() {
        Some(emitted)
    } else {
        None
    }
}

fn greedy_piece(
    rs: &RootSystem,
    win: &[AffineRoot],
    audit_bound: u32,
    cur: &Interval<'_>,
    kind: PieceKind,
    target: &[AffineRoot],
    step: usize,
) -> Result<Vec<AffineRoot>> {
    let mut candidates: Vec<AffineRoot> = target.to_vec();
    candidates.sort_by_key(|x| emission_sort_key(rs, x));
    let mut scratch = Interval {
        rs,
        bound: audit_bound,
        set: match kind {
            PieceKind::Descending => {
                cur.set.union(&candidates.iter().copied().collect()).copied().collect()
            }
            _ => cur.set.clone(),
        },
    };
    let mut emitted: Vec<AffineRoot> = Vec::new();
    let mut remaining: Vec<AffineRoot> = candidates;
    while !remaining.is_empty() {
        let mut picked = None;
        for (idx, &x) in remaining.iter().enumerate() {
            let ok = if x.level > audit_bound {
                true
            } else {
                match kind {
                    PieceKind::Descending => scratch.can_remove(win, x),
                    _ => scratch.can_add(x),
                }
            };
            if ok {
                picked = Some(idx);
                break;
            }
        }
        let Some(idx) = picked else {
            return Err(Error::SynthesisStuck {
                step,
                emitted: emitted.len(),
            });
        };
        let x = remaining.remove(idx);
        if x.level <= audit_bound {
            match kind {
                PieceKind::Descending => {
                    scratch.set.remove(&x);
                }
                _ => {
                    scratch.set.insert(x);
                }
            }
        }
        emitted.push(x);
    }
    Ok(emitted)
}

// ---------------------------------------------------------------------------
// order construction

fn build_pieces(
    chain: &AdmissibleChain,
    audit_bound: u32,
    level: u32,
) -> Result<Vec<OrderPiece>> {
    let rs = chain.rs().clone();
    let win = window(&rs, audit_bound);
    let sig = signature_of_chain(chain)?;
    let sets = chain.sets();
    let steps = chain.steps();
    let mut cur = Interval {
        rs: &rs,
        bound: audit_bound,
        set: HashSet::new(),
    };
    let mut pieces = Vec::new();
    for i in 0..chain.len() {
        let tag = sig.bits()[i];
        let core = sets[i + 1].set().minus(sets[i].set());
        let membership = HatSetDescriptor::new(&rs, core, BTreeSet::new(), BTreeSet::new());
        let (kind, delta_ref) = if tag == 0 {
            (PieceKind::Ascending, &steps[i].delta1)
        } else {
            (PieceKind::Descending, &steps[i + 1].delta2)
        };
        let theta = theta_generators(&rs, delta_ref)?;
        let built = synthesize_piece(
            &rs,
            &win,
            audit_bound,
            level,
            &mut cur,
            kind,
            &membership,
            &theta,
            i,
        )?;
        pieces.push(OrderPiece {
            kind,
            step: i,
            membership,
            emitted: built.emitted,
            path: built.path,
        });
    }
    Ok(pieces)
}

fn apply_block(
    rs: &RootSystem,
    pieces: &mut Vec<OrderPiece>,
    sig: &Word,
    insertables: &BTreeSet<usize>,
    index: usize,
    n: u64,
) -> Result<()> {
    let n = n as usize;
    let first_insertable = *insertables.iter().next().unwrap();
    let bits = sig.bits();
    let piece_pos = |pieces: &Vec<OrderPiece>, step: usize| -> Result<usize> {
        pieces
            .iter()
            .position(|p| p.step == step && p.path != SynthPath::Block)
            .ok_or_else(|| Error::Internal("piece for step missing".into()))
    };

    let (donor_step, take_from_top) = if index == first_insertable {
        // first insertable index: initial segment of the ascending piece at
        // the first later 0
        let q = (index..=bits.len())
            .find(|&q| bits[q - 1] == 0)
            .ok_or_else(|| Error::Internal("no ascending donor after the 1-run".into()))?;
        (q - 1, false)
    } else {
        // later insertable index: final segment of the preceding descending
        // structure
        let m = (1..index)
            .rev()
            .find(|&m| bits[m - 1] == 1)
            .ok_or_else(|| Error::Internal("no descending donor before the index".into()))?;
        (m - 1, true)
    };

    let donor_pos = piece_pos(pieces, donor_step)?;
    if pieces[donor_pos].emitted.len() < n + 1 {
        return Err(Error::GuardExceeded(format!(
            "block of {n} exceeds materialized donor ({} roots)",
            pieces[donor_pos].emitted.len()
        )));
    }
    let drained: Vec<AffineRoot> = pieces[donor_pos].emitted.drain(0..n).collect();
    {
        let donor = &mut pieces[donor_pos];
        let mut removed = donor.membership.removed().clone();
        removed.extend(drained.iter().copied());
        donor.membership = HatSetDescriptor::new(
            rs,
            donor.membership.core().clone(),
            donor.membership.added().clone(),
            removed,
        );
    }
    let block_in_order: Vec<AffineRoot> = if take_from_top {
        drained.iter().rev().copied().collect()
    } else {
        drained
    };
    let target_pos = piece_pos(pieces, index - 1)?;
    let membership = HatSetDescriptor::new(
        rs,
        RootSet::default(),
        block_in_order.iter().copied().collect(),
        BTreeSet::new(),
    );
    pieces.insert(
        target_pos,
        OrderPiece {
            kind: PieceKind::Finite,
            step: index - 1,
            membership,
            emitted: block_in_order,
            path: SynthPath::Block,
        },
    );
    Ok(())
}

impl StructuredOrder {
    fn build(
        chain: AdmissibleChain,
        assignments: BTreeMap<usize, u64>,
        audit_bound: u32,
        level: u32,
    ) -> Result<StructuredOrder> {
        let level = level.max(audit_bound);
        let mut pieces = build_pieces(&chain, audit_bound, level)?;
        if !assignments.is_empty() {
            let sig = signature_of_chain(&chain)?;
            let insertables = insertable_indices(&sig)?;
            for &idx in assignments.keys() {
                if !insertables.contains(&idx) {
                    return Err(Error::NotInsertable(idx));
                }
            }
            let rs = chain.rs().clone();
            for (&idx, &n) in &assignments {
                if n > 0 {
                    apply_block(&rs, &mut pieces, &sig, &insertables, idx, n)?;
                }
            }
        }
        Ok(StructuredOrder {
            chain,
            assignments,
            pieces,
            audit_bound,
            level,
        })
    }

    pub fn chain(&self) -> &AdmissibleChain {
        &self.chain
    }

    pub fn rs(&self) -> &Arc<RootSystem> {
        self.chain.rs()
    }

    pub fn pieces(&self) -> &[OrderPiece] {
        &self.pieces
    }

    pub fn assignments(&self) -> &BTreeMap<usize, u64> {
        &self.assignments
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn audit_bound(&self) -> u32 {
        self.audit_bound
    }

    /// Same order materialized to at least `level`.
    pub fn materialized_to(&self, level: u32) -> Result<StructuredOrder> {
        if level <= self.level {
            return Ok(self.clone());
        }
        StructuredOrder::build(
            self.chain.clone(),
            self.assignments.clone(),
            self.audit_bound,
            level,
        )
    }
}

/// Builds the reflection order realizing an admissible chain: one ascending
/// piece per 0-step, one descending piece per 1-step. The result passes
/// `verify_reflection_order` at the default bound.
pub fn synthesize_order(chain: &AdmissibleChain) -> Result<StructuredOrder> {
    synthesize_order_bounded(chain, DEFAULT_LEVEL_BOUND)
}

pub fn synthesize_order_bounded(
    chain: &AdmissibleChain,
    audit_bound: u32,
) -> Result<StructuredOrder> {
    let order = StructuredOrder::build(chain.clone(), BTreeMap::new(), audit_bound, audit_bound)?;
    let report = verify_reflection_order(&order, audit_bound)?;
    if !report.ok() {
        return Err(Error::VerificationFailed(report.summary()));
    }
    Ok(order)
}

/// Relocates finite blocks to the insertable indices: the first insertable
/// index borrows the initial segment of the ascending piece after its
/// 1-run, later ones the final segment of the preceding descending
/// structure. Processing is in increasing index order.
pub fn insert_blocks(
    order: &StructuredOrder,
    assignments: &BTreeMap<usize, u64>,
) -> Result<StructuredOrder> {
    let sig = signature_of_chain(&order.chain)?;
    let insertables = insertable_indices(&sig)?;
    for (&idx, _) in assignments {
        if !insertables.contains(&idx) {
            return Err(Error::NotInsertable(idx));
        }
        if order.assignments.contains_key(&idx) {
            return Err(Error::BlockAlreadyAssigned(idx));
        }
    }
    let mut merged = order.assignments.clone();
    merged.extend(assignments.iter().map(|(&k, &v)| (k, v)));

    let max_block = merged.values().copied().max().unwrap_or(0) as u32;
    let mut level = order.level.max(order.audit_bound + max_block.div_ceil(1));
    let new_order = loop {
        match StructuredOrder::build(
            order.chain.clone(),
            merged.clone(),
            order.audit_bound,
            level,
        ) {
            Ok(o) => break o,
            Err(Error::GuardExceeded(_)) if level < order.audit_bound + 4 * (max_block + 2) => {
                level += max_block.max(1);
            }
            Err(e) => return Err(e),
        }
    };
    let floor = new_order
        .pieces
        .iter()
        .map(|p| 2 * (1 + p.membership.max_adjustment_level()))
        .max()
        .unwrap_or(DEFAULT_LEVEL_BOUND);
    let bound = new_order.audit_bound.max(floor);
    let new_order = new_order.materialized_to(bound.max(new_order.level))?;
    let report = verify_reflection_order(&new_order, bound)?;
    if !report.ok() {
        return Err(Error::VerificationFailed(report.summary()));
    }
    Ok(new_order)
}

/// The restriction of the order to levels at most `L`, as a finite list.
pub fn truncate(order: &StructuredOrder, level: u32) -> Result<Vec<AffineRoot>> {
    let order = order.materialized_to(level)?;
    let mut out = Vec::new();
    for piece in &order.pieces {
        match piece.kind {
            PieceKind::Ascending | PieceKind::Finite => {
                out.extend(piece.emitted.iter().copied().filter(|x| x.level <= level));
            }
            PieceKind::Descending => {
                out.extend(piece.emitted.iter().rev().copied().filter(|x| x.level <= level));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// verification

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub level: u32,
    pub partition_ok: bool,
    pub betweenness_violation: Option<(AffineRoot, AffineRoot, AffineRoot)>,
    pub boundary_audits: Vec<AffineAudit>,
    pub dihedral_violation: Option<FiniteRoot>,
    pub piece_paths: Vec<SynthPath>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.partition_ok
            && self.betweenness_violation.is_none()
            && self.boundary_audits.iter().all(|a| a.ok)
            && self.dihedral_violation.is_none()
    }

    pub fn summary(&self) -> String {
        if self.ok() {
            format!("ok at level {}", self.level)
        } else {
            let mut parts = Vec::new();
            if !self.partition_ok {
                parts.push("pieces do not partition the window".to_string());
            }
            if let Some((x, y, z)) = self.betweenness_violation {
                parts.push(format!(
                    "betweenness violated at ({},{})->({},{})->({},{})",
                    x.gamma, x.level, z.gamma, z.level, y.gamma, y.level
                ));
            }
            if self.boundary_audits.iter().any(|a| !a.ok) {
                parts.push("a piece-boundary interval is not biclosed".to_string());
            }
            if let Some(d) = &self.dihedral_violation {
                parts.push(format!("dihedral pattern violated in direction {d}"));
            }
            parts.join("; ")
        }
    }
}

/// Audits the order at level `L`: betweenness on the truncation, piece
/// boundary intervals biclosed, the dihedral pattern in every direction,
/// and the pieces partitioning the window.
pub fn verify_reflection_order(order: &StructuredOrder, level: u32) -> Result<VerifyReport> {
    let floor = order
        .pieces
        .iter()
        .map(|p| 2 * (1 + p.membership.max_adjustment_level()))
        .max()
        .unwrap_or(2);
    if level < floor {
        return Err(Error::LevelBoundTooLow { given: level, floor });
    }
    let order = order.materialized_to(level)?;
    let rs = order.rs().clone();
    let win = window(&rs, level);

    // pieces partition the window
    let mut partition_ok = true;
    for &x in &win {
        let hits = order
            .pieces
            .iter()
            .filter(|p| p.membership.contains(&rs, x))
            .count();
        if hits != 1 {
            partition_ok = false;
            break;
        }
    }

    // betweenness on the truncation
    let trunc = truncate(&order, level)?;
    let pos: std::collections::HashMap<AffineRoot, usize> =
        trunc.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut betweenness_violation = None;
    'outer: for (i, &x) in trunc.iter().enumerate() {
        for &y in &trunc[i + 1..] {
            for z in affine_sums(&rs, x, y, level) {
                let Some(&pz) = pos.get(&z) else {
                    betweenness_violation = Some((x, y, z));
                    break 'outer;
                };
                if !(i < pz && pz < pos[&y]) {
                    betweenness_violation = Some((x, y, z));
                    break 'outer;
                }
            }
        }
    }

    // piece-boundary initial intervals
    let mut boundary_audits = Vec::new();
    let mut acc = HatSetDescriptor::empty(&rs);
    for piece in order.pieces.iter() {
        acc = acc.union(&rs, &piece.membership);
        boundary_audits.push(is_biclosed_affine(&rs, &acc, level)?);
    }

    // dihedral pattern per direction
    let mut dihedral_violation = None;
    for g in 0..rs.num_positive() {
        let neg = rs.neg(g);
        let side = |dir: usize| -> Vec<(usize, u32)> {
            let mut v: Vec<(usize, u32)> = trunc
                .iter()
                .enumerate()
                .filter(|(_, x)| x.gamma == dir)
                .map(|(i, x)| (i, x.level))
                .collect();
            v.sort();
            v
        };
        let a = side(g);
        let b = side(neg);
        let ascending = |v: &[(usize, u32)]| v.windows(2).all(|w| w[0].1 < w[1].1);
        let descending = |v: &[(usize, u32)]| v.windows(2).all(|w| w[0].1 > w[1].1);
        let before = |u: &[(usize, u32)], v: &[(usize, u32)]| match (u.last(), v.first()) {
            (Some(&(lu, _)), Some(&(fv, _))) => lu < fv,
            _ => true,
        };
        let pattern1 = ascending(&a) && descending(&b) && before(&a, &b);
        let pattern2 = ascending(&b) && descending(&a) && before(&b, &a);
        if !pattern1 && !pattern2 {
            dihedral_violation = Some(rs.root(g).clone());
            break;
        }
    }

    Ok(VerifyReport {
        level,
        partition_ok,
        betweenness_violation,
        boundary_audits,
        dihedral_violation,
        piece_paths: order.pieces.iter().map(|p| p.path).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, CoxeterType};

    fn sys(f: Family, n: usize) -> Arc<RootSystem> {
        Arc::new(build_root_system(CoxeterType::new(f, n).unwrap()).unwrap())
    }

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn root(v: &[i64]) -> FiniteRoot {
        FiniteRoot(v.to_vec())
    }

    #[test]
    fn a3_golden_chain() {
        let rs = sys(Family::A, 3);
        let chain = chain_from_word(&rs, &word("001011")).unwrap();
        let expect: Vec<(Vec<&[i64]>, Vec<&[i64]>)> = vec![
            (vec![&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], vec![]),
            (vec![&[1, 0, 0], &[0, 1, 0]], vec![]),
            (vec![&[1, 0, 0]], vec![]),
            (vec![&[1, 0, 0]], vec![&[0, 0, 1]]),
            (vec![], vec![&[0, 0, 1]]),
            (vec![], vec![&[0, 1, 0], &[0, 0, 1]]),
            (vec![], vec![&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        ];
        assert_eq!(chain.steps().len(), expect.len());
        for (step, (d1, d2)) in chain.steps().iter().zip(&expect) {
            let d1: BTreeSet<FiniteRoot> = d1.iter().map(|v| root(v)).collect();
            let d2: BTreeSet<FiniteRoot> = d2.iter().map(|v| root(v)).collect();
            assert_eq!(step.delta1, d1);
            assert_eq!(step.delta2, d2);
        }
    }

    #[test]
    fn a2_0011_chain_sets() {
        let rs = sys(Family::A, 2);
        let chain = chain_from_word(&rs, &word("0011")).unwrap();
        let sets: Vec<BTreeSet<FiniteRoot>> =
            chain.sets().iter().map(|b| b.roots(&rs)).collect();
        assert_eq!(sets[0], BTreeSet::new());
        assert_eq!(sets[1], [root(&[0, 1]), root(&[1, 1])].into());
        assert_eq!(sets[2], rs.roots_from_set(&rs.standard_positive_set()));
        let mut b3 = rs.roots_from_set(&rs.standard_positive_set());
        b3.insert(root(&[0, -1]));
        assert_eq!(sets[3], b3);
        assert_eq!(sets[4].len(), 6);
    }

    #[test]
    fn contraction_chain_signature() {
        let rs = sys(Family::A, 3);
        let chain = chain_from_word(&rs, &word("01")).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(signature_of_chain(&chain).unwrap(), word("01"));
        assert_eq!(chain.sets()[1].set().len(), 6); // the standard positives
    }

    #[test]
    fn a1_dihedral_order() {
        let rs = sys(Family::A, 1);
        let chain = chain_from_word(&rs, &word("01")).unwrap();
        let order = synthesize_order(&chain).unwrap();
        let t = truncate(&order, 2).unwrap();
        let a = rs.id_of(&root(&[1])).unwrap();
        let na = rs.id_of(&root(&[-1])).unwrap();
        assert_eq!(
            t,
            vec![
                AffineRoot { gamma: a, level: 0 },
                AffineRoot { gamma: a, level: 1 },
                AffineRoot { gamma: a, level: 2 },
                AffineRoot { gamma: na, level: 2 },
                AffineRoot { gamma: na, level: 1 },
            ]
        );
    }

    #[test]
    fn a3_golden_level0_prefix() {
        let rs = sys(Family::A, 3);
        let chain = chain_from_word(&rs, &word("001011")).unwrap();
        let order = synthesize_order(&chain).unwrap();
        let t = truncate(&order, 0).unwrap();
        let expect: Vec<AffineRoot> = [
            &[0, 0, 1],
            &[0, 1, 1],
            &[1, 1, 1],
            &[0, 1, 0],
            &[1, 1, 0],
            &[1, 0, 0],
        ]
        .iter()
        .map(|v| AffineRoot {
            gamma: rs.id_of(&root(*v)).unwrap(),
            level: 0,
        })
        .collect();
        assert_eq!(t, expect);
    }

    #[test]
    fn truncation_size_formula() {
        let rs = sys(Family::A, 2);
        let chain = chain_from_word(&rs, &word("0011")).unwrap();
        let order = synthesize_order(&chain).unwrap();
        for level in [0u32, 1, 3, 6] {
            let t = truncate(&order, level).unwrap();
            let expect = rs.num_roots() * (level as usize + 1) - rs.num_positive();
            assert_eq!(t.len(), expect, "level {level}");
        }
    }

    #[test]
    fn verify_passes_and_detects_mutation() {
        let rs = sys(Family::A, 2);
        let chain = chain_from_word(&rs, &word("0011")).unwrap();
        let order = synthesize_order(&chain).unwrap();
        let report = verify_reflection_order(&order, 6).unwrap();
        assert!(report.ok(), "{}", report.summary());

        // swapping two adjacent roots of one ascending piece breaks
        // betweenness
        let mut broken = order.clone();
        let p = broken
            .pieces
            .iter()
            .position(|p| p.kind == PieceKind::Ascending && p.emitted.len() > 2)
            .unwrap();
        broken.pieces[p].emitted.swap(0, 1);
        let report = verify_reflection_order(&broken, 6).unwrap();
        assert!(!report.ok());
    }

    #[test]
    fn insert_blocks_identity_and_paper_blocks() {
        let rs = sys(Family::A, 3);
        let chain = chain_from_word(&rs, &word("001011")).unwrap();
        let order = synthesize_order(&chain).unwrap();

        let same = insert_blocks(&order, &BTreeMap::new()).unwrap();
        assert_eq!(same.pieces().len(), order.pieces().len());

        let blocked = insert_blocks(&order, &BTreeMap::from([(3, 2), (5, 1)])).unwrap();
        let kinds: Vec<PieceKind> = blocked.pieces().iter().map(|p| p.kind).collect();
        assert_eq!(
            kinds,
            vec![
                PieceKind::Ascending,
                PieceKind::Ascending,
                PieceKind::Finite,
                PieceKind::Descending,
                PieceKind::Ascending,
                PieceKind::Finite,
                PieceKind::Descending,
                PieceKind::Descending,
            ]
        );
        // the [2] block is alpha, alpha + delta
        let a1 = rs.id_of(&root(&[1, 0, 0])).unwrap();
        assert_eq!(
            blocked.pieces()[2].emitted,
            vec![
                AffineRoot { gamma: a1, level: 0 },
                AffineRoot { gamma: a1, level: 1 }
            ]
        );
        // the [1] block is -gamma + delta
        let ng = rs.id_of(&root(&[0, 0, -1])).unwrap();
        assert_eq!(
            blocked.pieces()[5].emitted,
            vec![AffineRoot { gamma: ng, level: 1 }]
        );
    }

    #[test]
    fn insert_blocks_rejects_non_insertable() {
        let rs = sys(Family::A, 3);
        let chain = chain_from_word(&rs, &word("000111")).unwrap();
        let order = synthesize_order(&chain).unwrap();
        for idx in 1..=6 {
            assert!(
                insert_blocks(&order, &BTreeMap::from([(idx, 1)])).is_err(),
                "index {idx}"
            );
        }
    }
}
