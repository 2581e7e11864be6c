//! The analytic direction: from a structured order, compute the initial
//! roots, interval-finiteness data, equivalence classes with their markers,
//! the condensation into J-sets, the signature, and the order type.

use crate::affine::{AffineRoot, HatSetDescriptor};
use crate::biclosed::{signature_of_biclosed_sequence, FiniteBiclosed, Word};
use crate::error::{Error, Result};
use crate::ordertype::{OrderTerm, OrderType};
use crate::rootsys::{FiniteRoot, PositiveSystem, RootSet, RootSystem};
use crate::synth::{OrderPiece, PieceKind, StructuredOrder};
use std::collections::{BTreeMap, BTreeSet};

pub use crate::ordertype::{normalize, types_equal};

/// One equivalence class of initial roots, with its representative (the
/// member whose marker root is greatest) and that marker.
#[derive(Clone, Debug)]
pub struct CondClass {
    pub members: Vec<FiniteRoot>,
    pub representative: FiniteRoot,
    pub marker: AffineRoot,
}

/// A member of the condensation chain, tagged by which initial roots name
/// it as `J(alpha)` and which classes as `J'([alpha])`.
#[derive(Clone, Debug)]
pub struct JSet {
    pub descriptor: HatSetDescriptor,
    pub j_witnesses: Vec<FiniteRoot>,
    pub jprime_witnesses: Vec<FiniteRoot>,
}

#[derive(Clone, Debug)]
pub struct CondensationData {
    pub initial_roots: PositiveSystem,
    pub n_map: BTreeMap<FiniteRoot, u32>,
    pub classes: Vec<CondClass>,
    pub j_sets: Vec<JSet>,
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct Pos {
    piece: usize,
    key: i64,
}

struct Analyzer<'a> {
    rs: &'a RootSystem,
    pieces: &'a [OrderPiece],
}

impl<'a> Analyzer<'a> {
    fn position(&self, x: AffineRoot) -> Result<Pos> {
        let piece = self
            .pieces
            .iter()
            .position(|p| p.membership.contains(self.rs, x))
            .ok_or_else(|| {
                Error::Internal(format!("root {} in no piece", x.render(self.rs)))
            })?;
        let rank = self.pieces[piece]
            .emitted
            .iter()
            .position(|&e| e == x)
            .ok_or_else(|| {
                Error::Internal(format!("root {} not materialized", x.render(self.rs)))
            })?;
        let key = match self.pieces[piece].kind {
            PieceKind::Descending => -(rank as i64),
            _ => rank as i64,
        };
        Ok(Pos { piece, key })
    }

    /// Finiteness of the closed interval between two positions; empty or
    /// reversed intervals count as finite.
    fn interval_finite(&self, a: Pos, b: Pos) -> bool {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if lo.piece == hi.piece {
            return true;
        }
        let suffix_finite = self.pieces[lo.piece].kind != PieceKind::Ascending;
        let prefix_finite = self.pieces[hi.piece].kind != PieceKind::Descending;
        suffix_finite
            && prefix_finite
            && (lo.piece + 1..hi.piece).all(|p| self.pieces[p].kind == PieceKind::Finite)
    }

    /// `(gamma)_0 + q * delta` as an affine root.
    fn base_point(&self, gamma: usize, q: u32) -> AffineRoot {
        let level = q + if self.rs.is_positive_id(gamma) { 0 } else { 1 };
        AffineRoot { gamma, level }
    }

    fn max_adjustment(&self) -> u32 {
        self.pieces
            .iter()
            .map(|p| p.membership.max_adjustment_level())
            .max()
            .unwrap_or(0)
    }

    /// Initial interval up to `x` inclusive.
    fn prefix_through(&self, x: AffineRoot) -> Result<HatSetDescriptor> {
        let pos = self.position(x)?;
        let mut acc = HatSetDescriptor::empty(self.rs);
        for p in &self.pieces[..pos.piece] {
            acc = acc.union(self.rs, &p.membership);
        }
        let piece = &self.pieces[pos.piece];
        let rank = piece.emitted.iter().position(|&e| e == x).unwrap();
        let part = match piece.kind {
            PieceKind::Descending => {
                // everything in the piece except the elements above x
                let mut removed = piece.membership.removed().clone();
                removed.extend(piece.emitted[..rank].iter().copied());
                let mut added = piece.membership.added().clone();
                for e in &piece.emitted[..rank] {
                    added.remove(e);
                }
                HatSetDescriptor::new(self.rs, piece.membership.core().clone(), added, removed)
            }
            _ => HatSetDescriptor::new(
                self.rs,
                RootSet::default(),
                piece.emitted[..=rank].iter().copied().collect(),
                BTreeSet::new(),
            ),
        };
        Ok(acc.union(self.rs, &part))
    }

    fn prefix_of_pieces(&self, through: usize) -> HatSetDescriptor {
        let mut acc = HatSetDescriptor::empty(self.rs);
        for p in &self.pieces[..=through] {
            acc = acc.union(self.rs, &p.membership);
        }
        acc
    }
}

/// A root is initial when the restriction of the order to its dihedral
/// direction ascends from its base point; initial roots form a positive
/// system.
pub fn initial_roots(order: &StructuredOrder) -> Result<PositiveSystem> {
    let rs = order.rs().clone();
    let an = Analyzer {
        rs: &rs,
        pieces: order.pieces(),
    };
    let mut set = RootSet::with_capacity(rs.num_roots());
    for g in 0..rs.num_positive() {
        let neg = rs.neg(g);
        let p_pos = an.position(an.base_point(g, 0))?;
        let p_neg = an.position(an.base_point(neg, 0))?;
        set.insert(if p_pos < p_neg { g } else { neg });
    }
    rs.positive_system_from_set(set)
        .map_err(|_| Error::Internal("initial roots do not form a positive system".into()))
}

/// Full condensation data: n-values, classes, markers, and the inclusion
/// chain of J-sets with their tags.
pub fn condensation(order: &StructuredOrder) -> Result<CondensationData> {
    let rs = order.rs().clone();
    let an = Analyzer {
        rs: &rs,
        pieces: order.pieces(),
    };
    let psi = initial_roots(order)?;
    let psi_ids: Vec<usize> = psi.set().iter().collect();

    // n(alpha): least p with every later interval between consecutive
    // negated base points finite
    let q_max = an.max_adjustment() + 1;
    let mut n_map_ids: BTreeMap<usize, u32> = BTreeMap::new();
    for &a in &psi_ids {
        let neg = rs.neg(a);
        let mut n = 0u32;
        for q in 0..=q_max {
            let hi = an.position(an.base_point(neg, q + 1))?;
            let lo = an.position(an.base_point(neg, q))?;
            let finite = if hi < lo { an.interval_finite(hi, lo) } else { true };
            if !finite {
                n = q + 1;
            }
        }
        n_map_ids.insert(a, n);
    }

    // classes: components of the finite-marker-interval relation
    let markers: BTreeMap<usize, AffineRoot> = psi_ids
        .iter()
        .map(|&a| (a, an.base_point(rs.neg(a), n_map_ids[&a])))
        .collect();
    let mut class_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut classes_ids: Vec<Vec<usize>> = Vec::new();
    for &a in &psi_ids {
        if class_of.contains_key(&a) {
            continue;
        }
        let cid = classes_ids.len();
        let mut stack = vec![a];
        class_of.insert(a, cid);
        let mut members = vec![a];
        while let Some(x) = stack.pop() {
            for &b in &psi_ids {
                if class_of.contains_key(&b) {
                    continue;
                }
                let px = an.position(markers[&x])?;
                let pb = an.position(markers[&b])?;
                if an.interval_finite(px, pb) {
                    class_of.insert(b, cid);
                    members.push(b);
                    stack.push(b);
                }
            }
        }
        classes_ids.push(members);
    }

    let mut classes = Vec::new();
    for members in &classes_ids {
        let rep = *members
            .iter()
            .max_by_key(|&&a| an.position(markers[&a]).unwrap())
            .unwrap();
        classes.push(CondClass {
            members: members.iter().map(|&a| rs.root(a).clone()).collect(),
            representative: rs.root(rep).clone(),
            marker: markers[&rep],
        });
    }

    // J(alpha): prefix through the piece whose core holds alpha;
    // J'([alpha]): prefix through the class marker
    let mut j_sets: Vec<JSet> = Vec::new();
    let mut push = |descriptor: HatSetDescriptor,
                    j_w: Option<FiniteRoot>,
                    jp_w: Option<FiniteRoot>| {
        if let Some(existing) = j_sets.iter_mut().find(|s| s.descriptor == descriptor) {
            existing.j_witnesses.extend(j_w);
            existing.jprime_witnesses.extend(jp_w);
        } else {
            j_sets.push(JSet {
                descriptor,
                j_witnesses: j_w.into_iter().collect(),
                jprime_witnesses: jp_w.into_iter().collect(),
            });
        }
    };
    for &a in &psi_ids {
        let piece = order
            .pieces()
            .iter()
            .position(|p| p.membership.core().contains(a))
            .ok_or_else(|| Error::Internal("core piece missing".into()))?;
        if order.pieces()[piece].kind != PieceKind::Ascending {
            return Err(Error::Internal(format!(
                "initial root {} has a non-ascending core piece",
                rs.root(a)
            )));
        }
        push(an.prefix_of_pieces(piece), Some(rs.root(a).clone()), None);
    }
    for class in &classes {
        let descriptor = an.prefix_through(class.marker)?;
        push(descriptor, None, Some(class.representative.clone()));
    }

    // order by inclusion and check the chain shape
    let bound = order.level();
    j_sets.sort_by_key(|s| s.descriptor.members_up_to(&rs, bound).len());
    for w in j_sets.windows(2) {
        let a = w[0].descriptor.members_up_to(&rs, bound);
        let b: BTreeSet<AffineRoot> =
            w[1].descriptor.members_up_to(&rs, bound).into_iter().collect();
        if !a.iter().all(|x| b.contains(x)) || a.len() >= b.len() {
            return Err(Error::Internal("J-sets do not form a strict chain".into()));
        }
        if !w[0].descriptor.core().is_subset(w[1].descriptor.core())
            || w[0].descriptor.core().len() >= w[1].descriptor.core().len()
        {
            return Err(Error::Internal("consecutive B_0 sets must strictly grow".into()));
        }
    }
    match j_sets.first() {
        Some(first) if !first.j_witnesses.is_empty() => {}
        _ => return Err(Error::Internal("least J-set must be a J(alpha)".into())),
    }
    match j_sets.last() {
        Some(last)
            if !last.jprime_witnesses.is_empty()
                && last.descriptor.core().len() == rs.num_roots()
                && last.descriptor.added().is_empty()
                && last.descriptor.removed().is_empty() => {}
        _ => {
            return Err(Error::Internal(
                "greatest J-set must be J'([alpha]) = all of the affine positives".into(),
            ))
        }
    }
    check_layer_structure(&rs, order, &an, &j_sets)?;

    let n_map = n_map_ids
        .into_iter()
        .map(|(a, n)| (rs.root(a).clone(), n))
        .collect();
    Ok(CondensationData {
        initial_roots: psi,
        n_map,
        classes,
        j_sets,
    })
}

/// Structural form of the condensation layers: every J-set is a prefix of
/// whole pieces, each layer is one ascending piece or an optional finite
/// block before one descending piece, and no layer meets both a direction
/// and its negative.
fn check_layer_structure(
    rs: &RootSystem,
    order: &StructuredOrder,
    an: &Analyzer<'_>,
    j_sets: &[JSet],
) -> Result<()> {
    let mut ends = Vec::new();
    for s in j_sets {
        let end = (0..order.pieces().len())
            .find(|&e| an.prefix_of_pieces(e) == s.descriptor)
            .ok_or_else(|| Error::Internal("J-set is not piece-aligned".into()))?;
        ends.push(end);
    }
    let mut prev_end: i64 = -1;
    for (i, &end) in ends.iter().enumerate() {
        let kinds: Vec<PieceKind> = ((prev_end + 1) as usize..=end)
            .map(|p| order.pieces()[p].kind)
            .collect();
        let tag1_shape = matches!(kinds.as_slice(), [PieceKind::Descending])
            || matches!(kinds.as_slice(), [PieceKind::Finite, PieceKind::Descending]);
        let tag0_shape = matches!(kinds.as_slice(), [PieceKind::Ascending]);
        if !tag0_shape && !tag1_shape {
            return Err(Error::Internal(format!(
                "layer {i} has unexpected piece kinds {kinds:?}"
            )));
        }
        let mut dirs = BTreeSet::new();
        for p in (prev_end + 1) as usize..=end {
            for g in order.pieces()[p].membership.core().iter() {
                dirs.insert(g);
            }
            for x in order.pieces()[p]
                .membership
                .added()
                .iter()
                .chain(order.pieces()[p].membership.removed().iter())
            {
                dirs.insert(x.gamma);
            }
        }
        if dirs.iter().any(|&g| dirs.contains(&rs.neg(g))) {
            return Err(Error::Internal(format!(
                "layer {i} meets a direction and its negative"
            )));
        }
        prev_end = end as i64;
    }
    Ok(())
}

/// Signature of the order: `b_zero` of each J-set, assembled into a chain
/// of biclosed sets in the finite system whose step tags give the word.
pub fn signature_of_order(order: &StructuredOrder) -> Result<Word> {
    let rs = order.rs().clone();
    let cond = condensation(order)?;
    let mut sets = vec![FiniteBiclosed {
        set: RootSet::with_capacity(rs.num_roots()),
        canonical: None,
    }];
    for s in &cond.j_sets {
        sets.push(FiniteBiclosed {
            set: crate::affine::b_zero(&s.descriptor),
            canonical: None,
        });
    }
    signature_of_biclosed_sequence(&rs, &sets)
}

/// Order type read off the piece kinds, in normal form.
pub fn order_type_of(order: &StructuredOrder) -> OrderType {
    let terms: Vec<OrderTerm> = order
        .pieces()
        .iter()
        .map(|p| match p.kind {
            PieceKind::Ascending => OrderTerm::Omega,
            PieceKind::Descending => OrderTerm::OmegaStar,
            PieceKind::Finite => OrderTerm::Fin(p.emitted.len() as u64),
        })
        .collect();
    normalize(&OrderType::new(terms).expect("pieces are nonempty"))
}
