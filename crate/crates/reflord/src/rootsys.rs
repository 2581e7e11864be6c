//! Finite irreducible crystallographic root systems with exact arithmetic.
//!
//! Roots are integer coefficient vectors in the simple-root basis of the
//! standard positive system. The bilinear form is the symmetrized Cartan
//! matrix over rationals, normalized so short roots have squared length 2.

use crate::error::{Error, Result};
use num::rational::Rational64;
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

/// The seven families of finite irreducible crystallographic root systems.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        match c.to_ascii_uppercase() {
            'A' => Some(Family::A),
            'B' => Some(Family::B),
            'C' => Some(Family::C),
            'D' => Some(Family::D),
            'E' => Some(Family::E),
            'F' => Some(Family::F),
            'G' => Some(Family::G),
            _ => None,
        }
    }
}

/// A Cartan type: family letter plus rank, validated on construction.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoxeterType {
    family: Family,
    rank: usize,
}

impl CoxeterType {
    pub fn new(family: Family, rank: usize) -> Result<CoxeterType> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(Error::InvalidType {
                family: family.letter(),
                rank,
                reason: match family {
                    Family::A => "rank must be >= 1".into(),
                    Family::B | Family::C => "rank must be >= 2".into(),
                    Family::D => "rank must be >= 4".into(),
                    Family::E => "rank must be 6, 7 or 8".into(),
                    Family::F => "rank must be 4".into(),
                    Family::G => "rank must be 2".into(),
                },
            });
        }
        Ok(CoxeterType { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Cartan matrix with entries `c[i][j] = 2(a_i, a_j) / (a_j, a_j)`.
    ///
    /// Simple roots are numbered along the Dynkin diagram path so that
    /// consecutive indices pair negatively; in type D the fork hangs off
    /// node `n-2`, in type E node 2 hangs off node 4.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        let bond = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
            c[i][j] = -1;
            c[j][i] = -1;
        };
        match self.family {
            Family::A => {
                for i in 0..n - 1 {
                    bond(&mut c, i, i + 1);
                }
            }
            Family::B => {
                for i in 0..n - 1 {
                    bond(&mut c, i, i + 1);
                }
                // short last root
                c[n - 2][n - 1] = -2;
            }
            Family::C => {
                for i in 0..n - 1 {
                    bond(&mut c, i, i + 1);
                }
                // long last root
                c[n - 1][n - 2] = -2;
            }
            Family::D => {
                for i in 0..n - 3 {
                    bond(&mut c, i, i + 1);
                }
                bond(&mut c, n - 3, n - 2);
                bond(&mut c, n - 3, n - 1);
            }
            Family::E => {
                bond(&mut c, 0, 2);
                bond(&mut c, 1, 3);
                for i in 2..n - 1 {
                    bond(&mut c, i, i + 1);
                }
            }
            Family::F => {
                for i in 0..3 {
                    bond(&mut c, i, i + 1);
                }
                c[1][2] = -2;
            }
            Family::G => {
                bond(&mut c, 0, 1);
                c[1][0] = -3;
            }
        }
        c
    }

    /// Half squared lengths `d_i = (a_i, a_i) / 2`, with short roots at 1.
    fn half_norms(&self) -> Vec<Rational64> {
        let n = self.rank;
        let one = Rational64::one();
        let two = Rational64::from_integer(2);
        match self.family {
            Family::A | Family::D | Family::E => vec![one; n],
            Family::B => {
                let mut d = vec![two; n];
                d[n - 1] = one;
                d
            }
            Family::C => {
                let mut d = vec![one; n];
                d[n - 1] = two;
                d
            }
            Family::F => vec![two, two, one, one],
            Family::G => vec![one, Rational64::from_integer(3)],
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// A root as an integer coefficient vector in the simple-root basis.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FiniteRoot(pub Vec<i64>);

impl FiniteRoot {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|&c| c <= 0) && self.0.iter().any(|&c| c < 0)
    }

    pub fn negated(&self) -> FiniteRoot {
        FiniteRoot(self.0.iter().map(|&c| -c).collect())
    }

    /// Sum of coefficients; negative for negative roots.
    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for FiniteRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// A set of roots of one root system, as a bitset over root ids.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct RootSet {
    bits: Vec<u64>,
    len: usize,
}

impl RootSet {
    pub fn with_capacity(n: usize) -> RootSet {
        RootSet {
            bits: vec![0u64; n.div_ceil(64)],
            len: 0,
        }
    }

    pub fn contains(&self, id: usize) -> bool {
        self.bits
            .get(id / 64)
            .is_some_and(|w| w & (1u64 << (id % 64)) != 0)
    }

    pub fn insert(&mut self, id: usize) -> bool {
        let (w, b) = (id / 64, 1u64 << (id % 64));
        if self.bits.len() <= w {
            self.bits.resize(w + 1, 0);
        }
        let fresh = self.bits[w] & b == 0;
        if fresh {
            self.bits[w] |= b;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, id: usize) -> bool {
        let (w, b) = (id / 64, 1u64 << (id % 64));
        if self.bits.get(w).is_some_and(|x| x & b != 0) {
            self.bits[w] &= !b;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word & (1u64 << b) != 0)
                .map(move |b| w * 64 + b)
        })
    }

    pub fn is_subset(&self, other: &RootSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    pub fn union(&self, other: &RootSet) -> RootSet {
        let mut out = self.clone();
        for i in other.iter() {
            out.insert(i);
        }
        out
    }

    pub fn minus(&self, other: &RootSet) -> RootSet {
        let mut out = RootSet::with_capacity(self.bits.len() * 64);
        for i in self.iter() {
            if !other.contains(i) {
                out.insert(i);
            }
        }
        out
    }

    pub fn from_ids(n: usize, ids: impl IntoIterator<Item = usize>) -> RootSet {
        let mut s = RootSet::with_capacity(n);
        for i in ids {
            s.insert(i);
        }
        s
    }
}

/// One rational solution `root_k = k1 * root_i + k2 * root_j`, `k1, k2 > 0`.
#[derive(Clone, Debug)]
pub struct PairSolution {
    pub k: usize,
    pub k1: Rational64,
    pub k2: Rational64,
}

/// Positive-combination tables for a root system: `sums[i][j]` lists roots
/// expressible as positive rational combinations of roots `i` and `j`, and
/// `decomps[k]` the inverse view.
pub struct PairTable {
    pub sums: Vec<Vec<Vec<PairSolution>>>,
    pub decomps: Vec<Vec<(usize, usize, Rational64, Rational64)>>,
}

/// Half of a root system closed under positive combinations, together with
/// its simple system (the indecomposable members).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PositiveSystem {
    pub(crate) set: RootSet,
    pub(crate) simple_ids: Vec<usize>,
}

impl PositiveSystem {
    pub fn roots(&self, rs: &RootSystem) -> BTreeSet<FiniteRoot> {
        self.set.iter().map(|i| rs.root(i).clone()).collect()
    }

    pub fn simples(&self, rs: &RootSystem) -> BTreeSet<FiniteRoot> {
        self.simple_ids.iter().map(|&i| rs.root(i).clone()).collect()
    }

    pub fn contains_id(&self, id: usize) -> bool {
        self.set.contains(id)
    }

    pub fn set(&self) -> &RootSet {
        &self.set
    }

    pub fn simple_ids(&self) -> &[usize] {
        &self.simple_ids
    }
}

/// A root subsystem generated by a set of roots, split into irreducible
/// components with their highest roots relative to the ambient positives.
#[derive(Clone, Debug)]
pub struct Subsystem {
    pub roots: RootSet,
    pub components: Vec<RootSet>,
    pub component_highest: Vec<usize>,
}

/// A finite irreducible crystallographic root system.
pub struct RootSystem {
    ctype: CoxeterType,
    cartan: Vec<Vec<i64>>,
    half_norms: Vec<Rational64>,
    roots: Vec<FiniteRoot>,
    index: HashMap<Vec<i64>, usize>,
    num_positive: usize,
    simple_ids: Vec<usize>,
    highest_id: usize,
    pair_table: OnceLock<PairTable>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({})", self.ctype)
    }
}

/// Builds the root system of the given type by closing the simple roots
/// under simple reflections.
pub fn build_root_system(ctype: CoxeterType) -> Result<RootSystem> {
    let n = ctype.rank();
    let cartan = ctype.cartan();
    let half_norms = ctype.half_norms();

    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(v) = queue.pop_front() {
        for j in 0..n {
            // s_j(v) = v - <v, a_j^vee> e_j
            let pairing: i64 = (0..n).map(|i| v[i] * cartan[i][j]).sum();
            let mut w = v.clone();
            w[j] -= pairing;
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }

    let mut positives: Vec<FiniteRoot> = seen
        .iter()
        .map(|v| FiniteRoot(v.clone()))
        .filter(|r| r.is_positive())
        .collect();
    positives.sort_by_key(|r| (r.height(), r.0.clone()));
    let m = positives.len();
    if seen.len() != 2 * m {
        return Err(Error::Internal(format!(
            "{ctype}: generated {} roots but {} positives",
            seen.len(),
            m
        )));
    }
    let mut roots = positives;
    for i in 0..m {
        let neg = roots[i].negated();
        roots.push(neg);
    }
    let index: HashMap<Vec<i64>, usize> =
        roots.iter().enumerate().map(|(i, r)| (r.0.clone(), i)).collect();

    let simple_ids: Vec<usize> = (0..n)
        .map(|i| {
            let mut e = vec![0i64; n];
            e[i] = 1;
            index[&e]
        })
        .collect();

    let rs = RootSystem {
        ctype,
        cartan,
        half_norms,
        roots,
        index,
        num_positive: m,
        simple_ids,
        highest_id: 0,
        pair_table: OnceLock::new(),
    };

    let mut highest = None;
    for id in 0..m {
        let ok = rs.simple_ids.iter().all(|&s| {
            let mut sum = rs.roots[id].0.clone();
            for (c, sc) in sum.iter_mut().zip(&rs.roots[s].0) {
                *c += sc;
            }
            !rs.index.contains_key(&sum)
        });
        if ok {
            if highest.is_some() {
                return Err(Error::Internal(format!("{ctype}: highest root not unique")));
            }
            highest = Some(id);
        }
    }
    let highest_id =
        highest.ok_or_else(|| Error::Internal(format!("{ctype}: no highest root")))?;

    Ok(RootSystem { highest_id, ..rs })
}

impl RootSystem {
    pub fn ctype(&self) -> CoxeterType {
        self.ctype
    }

    pub fn rank(&self) -> usize {
        self.ctype.rank()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.num_positive
    }

    pub fn root(&self, id: usize) -> &FiniteRoot {
        &self.roots[id]
    }

    pub fn roots(&self) -> &[FiniteRoot] {
        &self.roots
    }

    pub fn id_of(&self, r: &FiniteRoot) -> Option<usize> {
        self.index.get(&r.0).copied()
    }

    pub fn require_id(&self, r: &FiniteRoot) -> Result<usize> {
        self.id_of(r).ok_or_else(|| Error::NotARoot {
            system: self.ctype.to_string(),
            vector: r.0.clone(),
        })
    }

    pub fn neg(&self, id: usize) -> usize {
        if id < self.num_positive {
            id + self.num_positive
        } else {
            id - self.num_positive
        }
    }

    pub fn is_positive_id(&self, id: usize) -> bool {
        id < self.num_positive
    }

    pub fn simple_ids(&self) -> &[usize] {
        &self.simple_ids
    }

    pub fn simples(&self) -> Vec<FiniteRoot> {
        self.simple_ids.iter().map(|&i| self.roots[i].clone()).collect()
    }

    pub fn highest_root_id(&self) -> usize {
        self.highest_id
    }

    pub fn highest_root(&self) -> &FiniteRoot {
        &self.roots[self.highest_id]
    }

    /// The standard positive system, with the simple roots as its simples.
    pub fn standard_positive_set(&self) -> RootSet {
        RootSet::from_ids(self.roots.len(), 0..self.num_positive)
    }

    pub fn all_roots_set(&self) -> RootSet {
        RootSet::from_ids(self.roots.len(), 0..self.roots.len())
    }

    /// Exact bilinear form on coefficient vectors.
    pub fn bilinear_vec(&self, u: &[i64], v: &[i64]) -> Rational64 {
        let n = self.rank();
        let mut acc = Rational64::zero();
        for i in 0..n {
            if u[i] == 0 {
                continue;
            }
            for j in 0..n {
                if v[j] == 0 {
                    continue;
                }
                // (a_i, a_j) = c[i][j] * d_j
                acc += Rational64::from_integer(u[i] * v[j] * self.cartan[i][j])
                    * self.half_norms[j];
            }
        }
        acc
    }

    pub fn bilinear(&self, a: usize, b: usize) -> Rational64 {
        self.bilinear_vec(&self.roots[a].0, &self.roots[b].0)
    }

    /// Integer Cartan pairing `2(v, t)/(t, t)` of a vector with a root.
    pub fn cartan_pairing(&self, v: &[i64], t: usize) -> i64 {
        let t_vec = &self.roots[t].0;
        let num = self.bilinear_vec(v, t_vec) * Rational64::from_integer(2);
        let den = self.bilinear_vec(t_vec, t_vec);
        let q = num / den;
        debug_assert!(q.is_integer());
        q.to_integer()
    }

    pub fn reflect_vec(&self, t: usize, v: &[i64]) -> Vec<i64> {
        let c = self.cartan_pairing(v, t);
        v.iter()
            .zip(&self.roots[t].0)
            .map(|(&vi, &ti)| vi - c * ti)
            .collect()
    }

    pub fn reflect_id(&self, t: usize, x: usize) -> usize {
        let w = self.reflect_vec(t, &self.roots[x].0);
        self.index[&w]
    }

    /// Lazily-built positive-combination tables.
    pub fn pair_table(&self) -> &PairTable {
        self.pair_table.get_or_init(|| self.build_pair_table())
    }

    fn build_pair_table(&self) -> PairTable {
        let nn = self.roots.len();
        let mut sums = vec![vec![Vec::new(); nn]; nn];
        let mut decomps = vec![Vec::new(); nn];
        let two = Rational64::from_integer(2);
        let one = Rational64::one();
        for i in 0..nn {
            for j in 0..nn {
                if i == j {
                    continue;
                }
                if j == self.neg(i) {
                    // k1 x + k2 (-x) hits x (2,1) and -x (1,2); nothing new.
                    sums[i][j].push(PairSolution { k: i, k1: two, k2: one });
                    sums[i][j].push(PairSolution { k: j, k1: one, k2: two });
                    continue;
                }
                let vi = &self.roots[i].0;
                let vj = &self.roots[j].0;
                let n = self.rank();
                let mut pivot = None;
                'outer: for a in 0..n {
                    for b in a + 1..n {
                        if vi[a] * vj[b] - vi[b] * vj[a] != 0 {
                            pivot = Some((a, b));
                            break 'outer;
                        }
                    }
                }
                let (a, b) = pivot.expect("distinct non-opposite roots are independent");
                let det = vi[a] * vj[b] - vi[b] * vj[a];
                for k in 0..nn {
                    if k == i || k == j {
                        continue;
                    }
                    let vk = &self.roots[k].0;
                    let k1 = Rational64::new(vk[a] * vj[b] - vk[b] * vj[a], det);
                    let k2 = Rational64::new(vi[a] * vk[b] - vi[b] * vk[a], det);
                    if k1 <= Rational64::zero() || k2 <= Rational64::zero() {
                        continue;
                    }
                    let fits = (0..n).all(|c| {
                        k1 * Rational64::from_integer(vi[c])
                            + k2 * Rational64::from_integer(vj[c])
                            == Rational64::from_integer(vk[c])
                    });
                    if fits {
                        sums[i][j].push(PairSolution { k, k1, k2 });
                        if i < j {
                            decomps[k].push((i, j, k1, k2));
                        }
                    }
                }
            }
        }
        PairTable { sums, decomps }
    }

    /// First closure violation of `s` inside `ambient`, if any.
    pub fn closure_witness(
        &self,
        s: &RootSet,
        ambient: &RootSet,
    ) -> Option<(usize, usize, usize)> {
        let table = self.pair_table();
        let members: Vec<usize> = s.iter().collect();
        for (pos, &i) in members.iter().enumerate() {
            for &j in &members[pos + 1..] {
                for sol in &table.sums[i][j] {
                    if ambient.contains(sol.k) && !s.contains(sol.k) {
                        return Some((i, j, sol.k));
                    }
                }
            }
        }
        None
    }

    pub fn is_closed_in(&self, s: &RootSet, ambient: &RootSet) -> bool {
        self.closure_witness(s, ambient).is_none()
    }

    /// Indecomposable members of a root set: those not a positive rational
    /// combination of two other members.
    pub fn indecomposables(&self, s: &RootSet) -> Vec<usize> {
        let table = self.pair_table();
        let members: Vec<usize> = s.iter().collect();
        let mut decomposable = RootSet::with_capacity(self.roots.len());
        for (pos, &i) in members.iter().enumerate() {
            for &j in &members[pos + 1..] {
                for sol in &table.sums[i][j] {
                    if s.contains(sol.k) {
                        decomposable.insert(sol.k);
                    }
                }
            }
        }
        members.into_iter().filter(|&m| !decomposable.contains(m)).collect()
    }

    /// Checks the positive-system property: one root per opposite pair,
    /// closed under positive combinations.
    pub fn is_positive_system(&self, s: &RootSet) -> bool {
        if s.len() != self.num_positive {
            return false;
        }
        if s.iter().any(|i| s.contains(self.neg(i))) {
            return false;
        }
        let ambient = self.all_roots_set();
        self.is_closed_in(s, &ambient)
    }

    pub fn positive_system_from_set(&self, s: RootSet) -> Result<PositiveSystem> {
        if !self.is_positive_system(&s) {
            return Err(Error::Internal("set is not a positive system".into()));
        }
        let simple_ids = self.indecomposables(&s);
        Ok(PositiveSystem { set: s, simple_ids })
    }

    /// All positive systems, enumerated as the orbit of the standard one
    /// under simple reflections.
    pub fn positive_systems(&self) -> Vec<PositiveSystem> {
        let mut seen: BTreeSet<RootSet> = BTreeSet::new();
        let mut queue: VecDeque<RootSet> = VecDeque::new();
        let std = self.standard_positive_set();
        seen.insert(std.clone());
        queue.push_back(std);
        while let Some(ps) = queue.pop_front() {
            for &j in &self.simple_ids {
                let img = RootSet::from_ids(
                    self.roots.len(),
                    ps.iter().map(|i| self.reflect_id(j, i)),
                );
                if !seen.contains(&img) {
                    seen.insert(img.clone());
                    queue.push_back(img);
                }
            }
        }
        seen.into_iter()
            .map(|set| {
                let simple_ids = self.indecomposables(&set);
                PositiveSystem { set, simple_ids }
            })
            .collect()
    }

    /// Smallest subset of roots containing `gens` and closed under its own
    /// reflections, with component data.
    pub fn root_subsystem(&self, gens: &BTreeSet<FiniteRoot>) -> Result<Subsystem> {
        let mut ids = Vec::new();
        for g in gens {
            ids.push(self.require_id(g)?);
        }
        let mut set = RootSet::with_capacity(self.roots.len());
        for &i in &ids {
            set.insert(i);
            set.insert(self.neg(i));
        }
        loop {
            let members: Vec<usize> = set.iter().collect();
            let mut grew = false;
            for &t in &members {
                for &x in &members {
                    grew |= set.insert(self.reflect_id(t, x));
                }
            }
            if !grew {
                break;
            }
        }

        // components by connectivity of nonzero pairing
        let members: Vec<usize> = set.iter().collect();
        let mut comp_of: HashMap<usize, usize> = HashMap::new();
        let mut components: Vec<RootSet> = Vec::new();
        for &m in &members {
            if comp_of.contains_key(&m) {
                continue;
            }
            let cidx = components.len();
            let mut comp = RootSet::with_capacity(self.roots.len());
            let mut stack = vec![m];
            comp_of.insert(m, cidx);
            comp.insert(m);
            while let Some(x) = stack.pop() {
                for &y in &members {
                    if !comp_of.contains_key(&y) && !self.bilinear(x, y).is_zero() {
                        comp_of.insert(y, cidx);
                        comp.insert(y);
                        stack.push(y);
                    }
                }
            }
            components.push(comp);
        }

        let mut component_highest = Vec::new();
        for comp in &components {
            component_highest.push(self.component_highest(comp)?);
        }
        Ok(Subsystem {
            roots: set,
            components,
            component_highest,
        })
    }

    /// Highest root of a component's positive part (relative to the standard
    /// positives of the ambient system).
    fn component_highest(&self, comp: &RootSet) -> Result<usize> {
        let pos: Vec<usize> = comp.iter().filter(|&i| self.is_positive_id(i)).collect();
        let mut highest = None;
        for &r in &pos {
            let ok = pos.iter().all(|&s| {
                let sum: Vec<i64> = self.roots[r]
                    .0
                    .iter()
                    .zip(&self.roots[s].0)
                    .map(|(&a, &b)| a + b)
                    .collect();
                match self.index.get(&sum) {
                    Some(&k) => !comp.contains(k),
                    None => true,
                }
            });
            if ok {
                if highest.is_some() {
                    return Err(Error::Internal("component highest root not unique".into()));
                }
                highest = Some(r);
            }
        }
        highest.ok_or_else(|| Error::Internal("component has no highest root".into()))
    }

    pub fn set_from_roots(&self, roots: &BTreeSet<FiniteRoot>) -> Result<RootSet> {
        let mut s = RootSet::with_capacity(self.roots.len());
        for r in roots {
            s.insert(self.require_id(r)?);
        }
        Ok(s)
    }

    pub fn roots_from_set(&self, s: &RootSet) -> BTreeSet<FiniteRoot> {
        s.iter().map(|i| self.roots[i].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(f: Family, n: usize) -> RootSystem {
        build_root_system(CoxeterType::new(f, n).unwrap()).unwrap()
    }

    #[test]
    fn positive_root_counts() {
        let cases = [
            (Family::A, 1, 1),
            (Family::A, 2, 3),
            (Family::A, 3, 6),
            (Family::A, 4, 10),
            (Family::B, 2, 4),
            (Family::B, 3, 9),
            (Family::B, 4, 16),
            (Family::C, 3, 9),
            (Family::C, 4, 16),
            (Family::D, 4, 12),
            (Family::D, 5, 20),
            (Family::E, 6, 36),
            (Family::E, 7, 63),
            (Family::E, 8, 120),
            (Family::F, 4, 24),
            (Family::G, 2, 6),
        ];
        for (f, n, count) in cases {
            assert_eq!(sys(f, n).num_positive(), count, "{}{}", f.letter(), n);
        }
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(CoxeterType::new(Family::D, 3).is_err());
        assert!(CoxeterType::new(Family::E, 5).is_err());
        assert!(CoxeterType::new(Family::F, 5).is_err());
        assert!(CoxeterType::new(Family::G, 3).is_err());
        assert!(CoxeterType::new(Family::B, 1).is_err());
    }

    #[test]
    fn a3_highest_root() {
        let rs = sys(Family::A, 3);
        assert_eq!(rs.highest_root(), &FiniteRoot(vec![1, 1, 1]));
    }

    #[test]
    fn g2_highest_root() {
        let rs = sys(Family::G, 2);
        assert_eq!(rs.highest_root(), &FiniteRoot(vec![3, 2]));
    }

    #[test]
    fn bilinear_symmetric_and_reproduces_cartan() {
        for (f, n) in [
            (Family::A, 3),
            (Family::B, 3),
            (Family::C, 3),
            (Family::D, 4),
            (Family::F, 4),
            (Family::G, 2),
        ] {
            let rs = sys(f, n);
            let c = rs.ctype().cartan();
            for i in 0..n {
                for j in 0..n {
                    let si = rs.simple_ids()[i];
                    let sj = rs.simple_ids()[j];
                    assert_eq!(rs.bilinear(si, sj), rs.bilinear(sj, si));
                    let q = rs.bilinear(si, sj) * Rational64::from_integer(2)
                        / rs.bilinear(sj, sj);
                    assert_eq!(q, Rational64::from_integer(c[i][j]));
                }
            }
        }
    }

    #[test]
    fn reflections_permute_roots() {
        for (f, n) in [(Family::A, 3), (Family::B, 3), (Family::G, 2), (Family::D, 4)] {
            let rs = sys(f, n);
            for t in 0..rs.num_roots() {
                let mut seen = BTreeSet::new();
                for x in 0..rs.num_roots() {
                    assert!(seen.insert(rs.reflect_id(t, x)));
                }
                assert_eq!(seen.len(), rs.num_roots());
            }
        }
    }

    #[test]
    fn positive_system_counts_match_weyl_order() {
        assert_eq!(sys(Family::A, 1).positive_systems().len(), 2);
        assert_eq!(sys(Family::A, 2).positive_systems().len(), 6);
        assert_eq!(sys(Family::B, 2).positive_systems().len(), 8);
        assert_eq!(sys(Family::G, 2).positive_systems().len(), 12);
        assert_eq!(sys(Family::A, 3).positive_systems().len(), 24);
    }

    #[test]
    fn positive_systems_are_valid() {
        let rs = sys(Family::B, 2);
        for ps in rs.positive_systems() {
            assert!(rs.is_positive_system(ps.set()));
            assert_eq!(ps.simple_ids().len(), rs.rank());
            // the complement is the negation
            for i in ps.set().iter() {
                assert!(!ps.set().contains(rs.neg(i)));
            }
        }
    }

    #[test]
    fn subsystem_examples() {
        let rs = sys(Family::A, 3);
        let a1 = |i: usize| {
            let mut v = vec![0i64; 3];
            v[i] = 1;
            FiniteRoot(v)
        };

        let sub = rs.root_subsystem(&BTreeSet::from([a1(0)])).unwrap();
        assert_eq!(sub.roots.len(), 2);
        assert_eq!(sub.components.len(), 1);

        let sub = rs.root_subsystem(&BTreeSet::from([a1(0), a1(2)])).unwrap();
        assert_eq!(sub.roots.len(), 4);
        assert_eq!(sub.components.len(), 2);

        let sub = rs.root_subsystem(&BTreeSet::from([a1(0), a1(1)])).unwrap();
        assert_eq!(sub.roots.len(), 6);
        assert_eq!(sub.components.len(), 1);
        assert_eq!(rs.root(sub.component_highest[0]), &FiniteRoot(vec![1, 1, 0]));
    }

    #[test]
    fn subsystem_rejects_non_root() {
        let rs = sys(Family::A, 2);
        let bad = BTreeSet::from([FiniteRoot(vec![1, 2])]);
        assert!(rs.root_subsystem(&bad).is_err());
    }
}
