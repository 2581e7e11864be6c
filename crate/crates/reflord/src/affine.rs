//! Real affine positive roots `gamma + level * delta` over a finite system,
//! hat descriptors for infinite root sets with finite adjustments, a
//! level-bounded biclosedness audit, and reflection-subgroup generators.

use crate::error::{Error, Result};
use crate::rootsys::{FiniteRoot, RootSet, RootSystem};
use num::rational::Rational64;
use num::Zero;
use std::collections::BTreeSet;
use std::fmt;

/// A real affine positive root, as a finite-root id plus a level. Negative
/// finite parts need level >= 1; positive ones allow level 0.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AffineRoot {
    pub gamma: usize,
    pub level: u32,
}

impl AffineRoot {
    pub fn new(rs: &RootSystem, gamma: usize, level: u32) -> Result<AffineRoot> {
        if !rs.is_positive_id(gamma) && level == 0 {
            return Err(Error::Internal(format!(
                "negative finite part {} needs level >= 1",
                rs.root(gamma)
            )));
        }
        Ok(AffineRoot { gamma, level })
    }

    pub fn finite_root<'a>(&self, rs: &'a RootSystem) -> &'a FiniteRoot {
        rs.root(self.gamma)
    }

    pub fn render(&self, rs: &RootSystem) -> String {
        format!("{}@{}", rs.root(self.gamma), self.level)
    }

    pub fn parse(rs: &RootSystem, s: &str) -> Result<AffineRoot> {
        let (vec_part, lvl_part) = s
            .rsplit_once('@')
            .ok_or_else(|| Error::Parse(format!("bad affine root '{s}'")))?;
        let coeffs: Vec<i64> = vec_part
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("bad affine root '{s}'")))?;
        let level: u32 = lvl_part
            .parse()
            .map_err(|_| Error::Parse(format!("bad affine root '{s}'")))?;
        let gamma = rs.require_id(&FiniteRoot(coeffs))?;
        AffineRoot::new(rs, gamma, level)
    }
}

/// An affine root with a sign, as returned by reflections that may leave
/// the positive system.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct SignedAffineRoot {
    pub root: AffineRoot,
    pub positive: bool,
}

/// `hat(core)` with finitely many single roots added or removed:
/// the set is `hat(core) u added \ removed`, where `added` is disjoint from
/// `hat(core)` and `removed` contained in it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HatSetDescriptor {
    core: RootSet,
    added: BTreeSet<AffineRoot>,
    removed: BTreeSet<AffineRoot>,
}

fn in_hat(rs: &RootSystem, core: &RootSet, x: AffineRoot) -> bool {
    core.contains(x.gamma) && (rs.is_positive_id(x.gamma) || x.level >= 1)
}

impl HatSetDescriptor {
    pub fn new(
        rs: &RootSystem,
        core: RootSet,
        added: BTreeSet<AffineRoot>,
        removed: BTreeSet<AffineRoot>,
    ) -> HatSetDescriptor {
        // normalize so the invariants hold structurally
        let added = added
            .into_iter()
            .filter(|&x| !in_hat(rs, &core, x))
            .collect();
        let removed = removed
            .into_iter()
            .filter(|&x| in_hat(rs, &core, x))
            .collect();
        HatSetDescriptor { core, added, removed }
    }

    pub fn empty(rs: &RootSystem) -> HatSetDescriptor {
        HatSetDescriptor {
            core: RootSet::with_capacity(rs.num_roots()),
            added: BTreeSet::new(),
            removed: BTreeSet::new(),
        }
    }

    pub fn core(&self) -> &RootSet {
        &self.core
    }

    pub fn added(&self) -> &BTreeSet<AffineRoot> {
        &self.added
    }

    pub fn removed(&self) -> &BTreeSet<AffineRoot> {
        &self.removed
    }

    pub fn contains(&self, rs: &RootSystem, x: AffineRoot) -> bool {
        if in_hat(rs, &self.core, x) {
            !self.removed.contains(&x)
        } else {
            self.added.contains(&x)
        }
    }

    pub fn max_adjustment_level(&self) -> u32 {
        self.added
            .iter()
            .chain(self.removed.iter())
            .map(|x| x.level)
            .max()
            .unwrap_or(0)
    }

    /// Members with level at most `bound`, sorted.
    pub fn members_up_to(&self, rs: &RootSystem, bound: u32) -> Vec<AffineRoot> {
        let mut out = Vec::new();
        for g in self.core.iter() {
            let start = if rs.is_positive_id(g) { 0 } else { 1 };
            for level in start..=bound {
                let x = AffineRoot { gamma: g, level };
                if !self.removed.contains(&x) {
                    out.push(x);
                }
            }
        }
        out.extend(self.added.iter().copied().filter(|x| x.level <= bound));
        out.sort();
        out
    }

    pub fn union(&self, rs: &RootSystem, other: &HatSetDescriptor) -> HatSetDescriptor {
        let core = self.core.union(&other.core);
        let mut added: BTreeSet<AffineRoot> =
            self.added.union(&other.added).copied().collect();
        // removals survive only if the other part does not supply the root
        let mut removed = BTreeSet::new();
        for &x in self.removed.iter().chain(other.removed.iter()) {
            if !self.contains(rs, x) && !other.contains(rs, x) {
                removed.insert(x);
            }
        }
        added.retain(|&x| !in_hat(rs, &core, x));
        HatSetDescriptor { core, added, removed }
    }
}

/// The hat of a finite root set: all levels of each member permitted by the
/// level rule, with no adjustments.
pub fn hat(rs: &RootSystem, core: &BTreeSet<FiniteRoot>) -> Result<HatSetDescriptor> {
    Ok(HatSetDescriptor {
        core: rs.set_from_roots(core)?,
        added: BTreeSet::new(),
        removed: BTreeSet::new(),
    })
}

/// Finite roots whose hat meets the described set infinitely often. Finite
/// adjustments never change infinitude, so this is exactly the core.
pub fn b_zero(d: &HatSetDescriptor) -> RootSet {
    d.core.clone()
}

/// All affine positive roots with level at most `bound`, sorted.
pub fn window(rs: &RootSystem, bound: u32) -> Vec<AffineRoot> {
    let mut out = Vec::new();
    for g in 0..rs.num_roots() {
        let start = if rs.is_positive_id(g) { 0 } else { 1 };
        for level in start..=bound {
            out.push(AffineRoot { gamma: g, level });
        }
    }
    out.sort();
    out
}

/// Roots `k1 x + k2 y` (`k1, k2 > 0` rational) that are affine positive
/// roots of level at most `bound`. Imaginary combinations (multiples of
/// delta) are discarded.
pub fn affine_sums(rs: &RootSystem, x: AffineRoot, y: AffineRoot, bound: u32) -> Vec<AffineRoot> {
    let mut out = Vec::new();
    if x == y {
        return out;
    }
    if x.gamma == y.gamma {
        // same direction: strictly intermediate levels
        let (lo, hi) = (x.level.min(y.level), x.level.max(y.level));
        for level in lo + 1..hi {
            out.push(AffineRoot { gamma: x.gamma, level });
        }
        return out;
    }
    if y.gamma == rs.neg(x.gamma) {
        // opposite directions: everything strictly above each end
        for level in x.level + 1..=bound {
            out.push(AffineRoot { gamma: x.gamma, level });
        }
        for level in y.level + 1..=bound {
            out.push(AffineRoot { gamma: y.gamma, level });
        }
        return out;
    }
    let table = rs.pair_table();
    for sol in &table.sums[x.gamma][y.gamma] {
        let level = sol.k1 * Rational64::from_integer(x.level as i64)
            + sol.k2 * Rational64::from_integer(y.level as i64);
        if !level.is_integer() {
            continue;
        }
        let level = level.to_integer();
        if level < 0 || level > bound as i64 {
            continue;
        }
        let level = level as u32;
        if !rs.is_positive_id(sol.k) && level == 0 {
            continue;
        }
        out.push(AffineRoot { gamma: sol.k, level });
    }
    out
}

/// Decompositions `z = k1 x + k2 y` with both parts affine positive roots
/// of level at most `bound`, reported as pairs.
pub fn affine_decompositions(
    rs: &RootSystem,
    z: AffineRoot,
    bound: u32,
) -> Vec<(AffineRoot, AffineRoot)> {
    let mut out = Vec::new();
    let zl = z.level as i64;
    // same-direction pairs straddling z
    let start = if rs.is_positive_id(z.gamma) { 0 } else { 1 };
    for lo in start..z.level {
        for hi in z.level + 1..=bound {
            out.push((
                AffineRoot { gamma: z.gamma, level: lo },
                AffineRoot { gamma: z.gamma, level: hi },
            ));
        }
    }
    // opposite-direction pairs: z arises from (z.gamma, m) with m < z.level
    // and any level of the negated direction
    let neg = rs.neg(z.gamma);
    let neg_start = if rs.is_positive_id(neg) { 0 } else { 1 };
    for m in start..z.level {
        for m2 in neg_start..=bound {
            out.push((
                AffineRoot { gamma: z.gamma, level: m },
                AffineRoot { gamma: neg, level: m2 },
            ));
        }
    }
    // independent finite decompositions
    let table = rs.pair_table();
    for &(i, j, k1, k2) in &table.decomps[z.gamma] {
        let i_start = if rs.is_positive_id(i) { 0 } else { 1 };
        for mi in i_start..=bound {
            // k1 * mi + k2 * mj = z.level
            let rem = Rational64::from_integer(zl) - k1 * Rational64::from_integer(mi as i64);
            let mj = rem / k2;
            if !mj.is_integer() {
                continue;
            }
            let mj = mj.to_integer();
            let j_min = if rs.is_positive_id(j) { 0 } else { 1 };
            if mj < j_min || mj > bound as i64 {
                continue;
            }
            out.push((
                AffineRoot { gamma: i, level: mi },
                AffineRoot { gamma: j, level: mj as u32 },
            ));
        }
    }
    out
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ViolationSide {
    Closed,
    CoClosed,
}

/// Outcome of the level-bounded biclosedness audit. The bound is part of
/// the result: this is a desk-scale audit, not a proof.
#[derive(Clone, Debug)]
pub struct AffineAudit {
    pub ok: bool,
    pub bound: u32,
    pub witness: Option<(AffineRoot, AffineRoot, AffineRoot, ViolationSide)>,
}

pub fn audit_floor(d: &HatSetDescriptor) -> u32 {
    2 * (1 + d.max_adjustment_level())
}

/// Checks closure of the described set and of its complement over all
/// affine positive roots of level at most `bound`. Levels add under
/// positive combinations, so low-level violations are never masked.
pub fn is_biclosed_affine(
    rs: &RootSystem,
    d: &HatSetDescriptor,
    bound: u32,
) -> Result<AffineAudit> {
    let floor = audit_floor(d);
    if bound < floor {
        return Err(Error::LevelBoundTooLow { given: bound, floor });
    }
    let win = window(rs, bound);
    let members: Vec<AffineRoot> = win
        .iter()
        .copied()
        .filter(|&x| d.contains(rs, x))
        .collect();
    let complement: Vec<AffineRoot> = win
        .iter()
        .copied()
        .filter(|&x| !d.contains(rs, x))
        .collect();
    for (side, list, inside) in [
        (ViolationSide::Closed, &members, true),
        (ViolationSide::CoClosed, &complement, false),
    ] {
        for (i, &x) in list.iter().enumerate() {
            for &y in &list[i + 1..] {
                for z in affine_sums(rs, x, y, bound) {
                    if d.contains(rs, z) != inside {
                        return Ok(AffineAudit {
                            ok: false,
                            bound,
                            witness: Some((x, y, z, side)),
                        });
                    }
                }
            }
        }
    }
    Ok(AffineAudit {
        ok: true,
        bound,
        witness: None,
    })
}

/// Coxeter generators of the reflection subgroup attached to a simple
/// subset: the finite simple system of its positive part plus `delta - rho`
/// for the highest root `rho` of each irreducible component.
#[derive(Clone, Debug)]
pub struct ThetaGenerators {
    pub finite_part: Vec<usize>,
    pub affine_part: Vec<AffineRoot>,
}

pub fn theta_generators(
    rs: &RootSystem,
    delta_prime: &BTreeSet<FiniteRoot>,
) -> Result<ThetaGenerators> {
    if delta_prime.is_empty() {
        return Ok(ThetaGenerators {
            finite_part: Vec::new(),
            affine_part: Vec::new(),
        });
    }
    for a in delta_prime {
        for b in delta_prime {
            if a < b {
                let (ia, ib) = (rs.require_id(a)?, rs.require_id(b)?);
                if rs.bilinear(ia, ib) > Rational64::zero() {
                    return Err(Error::Internal(format!(
                        "{a} and {b} pair positively; not part of one simple system"
                    )));
                }
            }
        }
    }
    let sub = rs.root_subsystem(delta_prime)?;
    let positive_part = RootSet::from_ids(
        rs.num_roots(),
        sub.roots.iter().filter(|&i| rs.is_positive_id(i)),
    );
    let finite_part = rs.indecomposables(&positive_part);
    let mut affine_part: Vec<AffineRoot> = sub
        .component_highest
        .iter()
        .map(|&rho| AffineRoot {
            gamma: rs.neg(rho),
            level: 1,
        })
        .collect();
    affine_part.sort();
    Ok(ThetaGenerators {
        finite_part,
        affine_part,
    })
}

/// Reflection of one affine root in another, computed on the finite part
/// and level jointly; the result may be a negative affine root.
pub fn affine_reflect(rs: &RootSystem, t: AffineRoot, x: AffineRoot) -> SignedAffineRoot {
    let c = rs.cartan_pairing(&rs.root(x.gamma).0, t.gamma);
    let gamma = rs.reflect_id(t.gamma, x.gamma);
    let level = x.level as i64 - c * t.level as i64;
    signed_from_parts(rs, gamma, level)
}

/// Same reflection on raw (finite id, level) data that may already be a
/// negative affine root.
pub(crate) fn reflect_raw(rs: &RootSystem, t: AffineRoot, gamma: usize, level: i64) -> (usize, i64) {
    let c = rs.cartan_pairing(&rs.root(gamma).0, t.gamma);
    (rs.reflect_id(t.gamma, gamma), level - c * t.level as i64)
}

pub(crate) fn signed_from_parts(rs: &RootSystem, gamma: usize, level: i64) -> SignedAffineRoot {
    let is_pos_dir = rs.is_positive_id(gamma);
    let positive = if is_pos_dir { level >= 0 } else { level >= 1 };
    if positive {
        SignedAffineRoot {
            root: AffineRoot { gamma, level: level as u32 },
            positive: true,
        }
    } else {
        SignedAffineRoot {
            root: AffineRoot {
                gamma: rs.neg(gamma),
                level: (-level) as u32,
            },
            positive: false,
        }
    }
}

impl fmt::Display for ViolationSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationSide::Closed => write!(f, "closed"),
            ViolationSide::CoClosed => write!(f, "co-closed"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{build_root_system, CoxeterType, Family};

    fn sys(f: Family, n: usize) -> RootSystem {
        build_root_system(CoxeterType::new(f, n).unwrap()).unwrap()
    }

    fn root(v: &[i64]) -> FiniteRoot {
        FiniteRoot(v.to_vec())
    }

    #[test]
    fn hat_membership_rules() {
        let rs = sys(Family::A, 2);
        let d = hat(&rs, &BTreeSet::from([root(&[-1, 0])])).unwrap();
        let neg = rs.id_of(&root(&[-1, 0])).unwrap();
        assert!(!d.contains(&rs, AffineRoot { gamma: neg, level: 0 }));
        assert!(d.contains(&rs, AffineRoot { gamma: neg, level: 1 }));
        assert!(AffineRoot::new(&rs, neg, 0).is_err());
    }

    #[test]
    fn hat_of_everything_is_the_affine_positive_system() {
        let rs = sys(Family::A, 2);
        let d = hat(&rs, &rs.roots_from_set(&rs.all_roots_set())).unwrap();
        for x in window(&rs, 4) {
            assert!(d.contains(&rs, x));
        }
        assert_eq!(
            d.members_up_to(&rs, 4).len(),
            rs.num_roots() * 5 - rs.num_positive()
        );
    }

    #[test]
    fn b_zero_ignores_adjustments() {
        let rs = sys(Family::A, 2);
        let core = rs.standard_positive_set();
        let a1 = rs.id_of(&root(&[1, 0])).unwrap();
        let neg2 = rs.id_of(&root(&[0, -1])).unwrap();
        let d = HatSetDescriptor::new(
            &rs,
            core.clone(),
            BTreeSet::from([AffineRoot { gamma: neg2, level: 1 }]),
            BTreeSet::from([AffineRoot { gamma: a1, level: 0 }]),
        );
        assert_eq!(b_zero(&d), core);
    }

    #[test]
    fn empty_descriptor_audits_clean() {
        let rs = sys(Family::A, 2);
        let d = HatSetDescriptor::empty(&rs);
        assert!(is_biclosed_affine(&rs, &d, 3).unwrap().ok);
        assert!(b_zero(&d).is_empty());
    }

    #[test]
    fn hat_of_standard_positives_is_biclosed() {
        let rs = sys(Family::A, 2);
        let d = hat(&rs, &rs.roots_from_set(&rs.standard_positive_set())).unwrap();
        assert!(is_biclosed_affine(&rs, &d, 4).unwrap().ok);
    }

    #[test]
    fn stray_added_root_breaks_the_audit() {
        // hat({a1}) plus (a1+a2, 0): the complement holds (a2, 0) and cannot
        // stay closed
        let rs = sys(Family::A, 2);
        let sum = rs.id_of(&root(&[1, 1])).unwrap();
        let d = HatSetDescriptor::new(
            &rs,
            rs.set_from_roots(&BTreeSet::from([root(&[1, 0])])).unwrap(),
            BTreeSet::from([AffineRoot { gamma: sum, level: 0 }]),
            BTreeSet::new(),
        );
        let audit = is_biclosed_affine(&rs, &d, 4).unwrap();
        assert!(!audit.ok);
        assert!(audit.witness.is_some());
    }

    #[test]
    fn audit_floor_enforced() {
        let rs = sys(Family::A, 2);
        let a1 = rs.id_of(&root(&[1, 0])).unwrap();
        let d = HatSetDescriptor::new(
            &rs,
            rs.standard_positive_set(),
            BTreeSet::new(),
            BTreeSet::from([AffineRoot { gamma: a1, level: 2 }]),
        );
        assert!(matches!(
            is_biclosed_affine(&rs, &d, 3),
            Err(Error::LevelBoundTooLow { .. })
        ));
    }

    #[test]
    fn theta_generator_examples() {
        let rs = sys(Family::A, 3);
        let delta: BTreeSet<FiniteRoot> =
            [root(&[1, 0, 0]), root(&[0, 1, 0]), root(&[0, 0, 1])].into();
        let th = theta_generators(&rs, &delta).unwrap();
        assert_eq!(th.finite_part.len(), 3);
        assert_eq!(th.affine_part.len(), 1);
        assert_eq!(
            th.affine_part[0],
            AffineRoot {
                gamma: rs.id_of(&root(&[-1, -1, -1])).unwrap(),
                level: 1
            }
        );

        let th = theta_generators(&rs, &BTreeSet::from([root(&[1, 0, 0])])).unwrap();
        assert_eq!(th.finite_part, vec![rs.id_of(&root(&[1, 0, 0])).unwrap()]);
        assert_eq!(
            th.affine_part,
            vec![AffineRoot {
                gamma: rs.id_of(&root(&[-1, 0, 0])).unwrap(),
                level: 1
            }]
        );

        let th =
            theta_generators(&rs, &BTreeSet::from([root(&[1, 0, 0]), root(&[0, 0, 1])]))
                .unwrap();
        assert_eq!(th.finite_part.len(), 2);
        assert_eq!(th.affine_part.len(), 2);

        let th = theta_generators(&rs, &BTreeSet::new()).unwrap();
        assert!(th.finite_part.is_empty() && th.affine_part.is_empty());
    }

    #[test]
    fn affine_reflection_examples() {
        let rs = sys(Family::A, 2);
        let a1 = rs.id_of(&root(&[1, 0])).unwrap();
        let a2 = rs.id_of(&root(&[0, 1])).unwrap();
        let sum = rs.id_of(&root(&[1, 1])).unwrap();
        let neg_sum = rs.id_of(&root(&[-1, -1])).unwrap();
        let neg2 = rs.id_of(&root(&[0, -1])).unwrap();

        let t = AffineRoot { gamma: a1, level: 0 };
        let r = affine_reflect(&rs, t, t);
        assert!(!r.positive);
        assert_eq!(r.root, t);

        let r = affine_reflect(&rs, t, AffineRoot { gamma: a2, level: 0 });
        assert!(r.positive);
        assert_eq!(r.root, AffineRoot { gamma: sum, level: 0 });

        // s_{(-(a1+a2), 1)}((a1, 0)) = (-a2, 1)
        let t = AffineRoot { gamma: neg_sum, level: 1 };
        let r = affine_reflect(&rs, t, AffineRoot { gamma: a1, level: 0 });
        assert!(r.positive);
        assert_eq!(r.root, AffineRoot { gamma: neg2, level: 1 });
    }

    #[test]
    fn affine_reflect_is_an_involution() {
        let rs = sys(Family::B, 2);
        for t in window(&rs, 2) {
            for x in window(&rs, 2) {
                let once = affine_reflect(&rs, t, x);
                let (g, l) = reflect_raw(
                    &rs,
                    t,
                    if once.positive { once.root.gamma } else { rs.neg(once.root.gamma) },
                    if once.positive {
                        once.root.level as i64
                    } else {
                        -(once.root.level as i64)
                    },
                );
                let back = signed_from_parts(&rs, g, l);
                assert!(back.positive, "double reflection returns to positive");
                assert_eq!(back.root, x);
            }
        }
    }

    #[test]
    fn render_and_parse() {
        let rs = sys(Family::A, 3);
        let x = AffineRoot {
            gamma: rs.id_of(&root(&[0, 0, 1])).unwrap(),
            level: 2,
        };
        assert_eq!(x.render(&rs), "[0,0,1]@2");
        assert_eq!(AffineRoot::parse(&rs, "[0,0,1]@2").unwrap(), x);
        assert!(AffineRoot::parse(&rs, "[0,0,9]@2").is_err());
    }
}
