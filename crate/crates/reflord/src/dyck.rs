//! Extended and trimmed Dyck words, insertable indices, and the order-type
//! template a trimmed word induces.

use crate::biclosed::Word;
use crate::error::{Error, Result};
use crate::ordertype::{OrderTerm, OrderType};
use std::collections::{BTreeMap, BTreeSet};

pub const WORD_RANK_GUARD: usize = 10;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum WordKind {
    Extended,
    Trimmed,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct WordClass {
    pub extended: bool,
    pub trimmed: bool,
}

fn check_rank(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::GuardExceeded("rank must be at least 1".into()));
    }
    if n > WORD_RANK_GUARD {
        return Err(Error::GuardExceeded(format!(
            "word enumeration guarded at rank {WORD_RANK_GUARD}, got {n}"
        )));
    }
    Ok(())
}

/// Extended: balanced of length `2n` with every proper prefix holding
/// strictly more 0s than 1s. Trimmed: some assignment of positive letter
/// multiplicities summing to `2n` expands the word to an extended one.
pub fn classify_word(w: &Word, n: usize) -> Result<WordClass> {
    check_rank(n)?;
    Ok(WordClass {
        extended: is_extended(w, n),
        trimmed: is_trimmed(w, n),
    })
}

fn is_extended(w: &Word, n: usize) -> bool {
    if w.len() != 2 * n || w.zeros() != n || w.ones() != n {
        return false;
    }
    let mut zeros = 0i64;
    let mut ones = 0i64;
    for (i, &b) in w.bits().iter().enumerate() {
        if b == 0 {
            zeros += 1;
        } else {
            ones += 1;
        }
        if i + 1 < 2 * n && zeros <= ones {
            return false;
        }
    }
    true
}

fn is_trimmed(w: &Word, n: usize) -> bool {
    let k = w.len();
    if k == 0 || k > 2 * n {
        return false;
    }
    let bits = w.bits();
    if bits[0] != 0 || bits[k - 1] != 1 {
        return false;
    }
    // Search over letter multiplicities. `balance` is zeros minus ones of
    // the expansion so far; every proper prefix needs balance >= 1, which
    // inside a run is tightest at the run's end. The final 1-run closes the
    // word exactly and carries no extra condition.
    fn go(bits: &[u8], idx: usize, zeros_left: i64, ones_left: i64, balance: i64) -> bool {
        if idx == bits.len() {
            return zeros_left == 0 && ones_left == 0;
        }
        if bits[idx] == 0 {
            let reserve = bits[idx + 1..].iter().filter(|&&b| b == 0).count() as i64;
            for m in 1..=(zeros_left - reserve) {
                if go(bits, idx + 1, zeros_left - m, ones_left, balance + m) {
                    return true;
                }
            }
        } else {
            let reserve = bits[idx + 1..].iter().filter(|&&b| b == 1).count() as i64;
            for m in 1..=(ones_left - reserve) {
                let closes_word =
                    idx == bits.len() - 1 && m == ones_left && zeros_left == 0;
                if !closes_word && balance - m < 1 {
                    continue;
                }
                if go(bits, idx + 1, zeros_left, ones_left - m, balance - m) {
                    return true;
                }
            }
        }
        false
    }
    go(bits, 0, n as i64, n as i64, 0)
}

/// All words of the given kind for rank `n`, in lexicographic order.
pub fn enumerate_words(n: usize, kind: WordKind) -> Result<Vec<Word>> {
    check_rank(n)?;
    match kind {
        WordKind::Extended => {
            let mut out = Vec::new();
            let mut cur = Vec::with_capacity(2 * n);
            gen_extended(n, &mut cur, 0, 0, &mut out);
            out.sort_by_key(|w: &Word| w.to_string());
            Ok(out)
        }
        WordKind::Trimmed => {
            let mut seen: BTreeSet<String> = BTreeSet::new();
            for e in enumerate_words(n, WordKind::Extended)? {
                let runs = run_lengths(&e);
                collect_contractions(&runs, 0, &mut String::new(), &mut seen);
            }
            seen.into_iter().map(|s| s.parse::<Word>()).collect()
        }
    }
}

fn gen_extended(n: usize, cur: &mut Vec<u8>, zeros: usize, ones: usize, out: &mut Vec<Word>) {
    if zeros == n && ones == n {
        out.push(Word::new(cur.clone()).unwrap());
        return;
    }
    let complete_next = zeros + ones + 1 == 2 * n;
    if zeros < n && (complete_next || zeros + 1 > ones) {
        cur.push(0);
        gen_extended(n, cur, zeros + 1, ones, out);
        cur.pop();
    }
    if ones < n && (complete_next || zeros > ones + 1) {
        cur.push(1);
        gen_extended(n, cur, zeros, ones + 1, out);
        cur.pop();
    }
}

fn run_lengths(w: &Word) -> Vec<(u8, usize)> {
    let mut runs: Vec<(u8, usize)> = Vec::new();
    for &b in w.bits() {
        match runs.last_mut() {
            Some((l, c)) if *l == b => *c += 1,
            _ => runs.push((b, 1)),
        }
    }
    runs
}

fn collect_contractions(
    runs: &[(u8, usize)],
    idx: usize,
    acc: &mut String,
    out: &mut BTreeSet<String>,
) {
    if idx == runs.len() {
        out.insert(acc.clone());
        return;
    }
    let (letter, len) = runs[idx];
    let ch = if letter == 0 { '0' } else { '1' };
    for take in 1..=len {
        let mark = acc.len();
        for _ in 0..take {
            acc.push(ch);
        }
        collect_contractions(runs, idx + 1, acc, out);
        acc.truncate(mark);
    }
}

/// 1-indexed positions where a finite block may be inserted: `i` with
/// `e_{i-1} = 0`, `e_i = 1`, excluding the all-0s-then-all-1s boundary.
pub fn insertable_indices(w: &Word) -> Result<BTreeSet<usize>> {
    require_trimmed(w)?;
    let bits = w.bits();
    let k = bits.len();
    let mut out = BTreeSet::new();
    for i in 1..k {
        if bits[i - 1] == 0 && bits[i] == 1 {
            let earlier_one = bits[..i].iter().any(|&b| b == 1);
            let later_zero = bits[i..].iter().any(|&b| b == 0);
            if earlier_one || later_zero {
                out.insert(i + 1); // 1-indexed position of e_i
            }
        }
    }
    Ok(out)
}

fn require_trimmed(w: &Word) -> Result<()> {
    // Trimmed-ness is monotone in the rank (grow the first and last letter
    // multiplicities), so checking at the guard rank decides it.
    if !is_trimmed(w, WORD_RANK_GUARD) {
        return Err(Error::NotTrimmed {
            word: w.to_string(),
            rank: w.zeros().max(w.ones()).max(1),
        });
    }
    Ok(())
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum TemplateTerm {
    Omega,
    OmegaStar,
    /// Carries the 1-indexed insertable position: contributes `[n_i] + w*`
    /// for a free `n_i >= 0`.
    Slot(usize),
}

/// The order-type shape induced by a trimmed word, with one term per letter
/// and a slot at every insertable index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderTypeTemplate {
    terms: Vec<TemplateTerm>,
}

impl OrderTypeTemplate {
    pub fn terms(&self) -> &[TemplateTerm] {
        &self.terms
    }

    pub fn slots(&self) -> BTreeSet<usize> {
        self.terms
            .iter()
            .filter_map(|t| match t {
                TemplateTerm::Slot(i) => Some(*i),
                _ => None,
            })
            .collect()
    }

    /// Fills every slot with the assigned block size (missing keys mean 0)
    /// and returns the resulting order type un-normalized.
    pub fn instantiate(&self, blocks: &BTreeMap<usize, u64>) -> Result<OrderType> {
        let slots = self.slots();
        if let Some(&bad) = blocks.keys().find(|k| !slots.contains(k)) {
            return Err(Error::NotInsertable(bad));
        }
        let mut terms = Vec::new();
        for t in &self.terms {
            match t {
                TemplateTerm::Omega => terms.push(OrderTerm::Omega),
                TemplateTerm::OmegaStar => terms.push(OrderTerm::OmegaStar),
                TemplateTerm::Slot(i) => {
                    let n = blocks.get(i).copied().unwrap_or(0);
                    if n > 0 {
                        terms.push(OrderTerm::Fin(n));
                    }
                    terms.push(OrderTerm::OmegaStar);
                }
            }
        }
        OrderType::new(terms)
    }

    /// Renders slots as bracketed letters: `w+w+[a]+w*+w+[b]+w*+w*`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        let mut letter = b'a';
        for t in &self.terms {
            match t {
                TemplateTerm::Omega => parts.push("w".to_string()),
                TemplateTerm::OmegaStar => parts.push("w*".to_string()),
                TemplateTerm::Slot(_) => {
                    parts.push(format!("[{}]", letter as char));
                    parts.push("w*".to_string());
                    letter += 1;
                }
            }
        }
        parts.join("+")
    }
}

/// Template of a trimmed word: one `w` per 0, one `w*` per non-insertable 1,
/// one slot per insertable 1.
pub fn order_type_template(w: &Word) -> Result<OrderTypeTemplate> {
    let slots = insertable_indices(w)?;
    let terms = w
        .bits()
        .iter()
        .enumerate()
        .map(|(i0, &b)| {
            let i = i0 + 1;
            if b == 0 {
                TemplateTerm::Omega
            } else if slots.contains(&i) {
                TemplateTerm::Slot(i)
            } else {
                TemplateTerm::OmegaStar
            }
        })
        .collect();
    Ok(OrderTypeTemplate { terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn paper_words_rank3() {
        let c = classify_word(&w("001011"), 3).unwrap();
        assert!(c.extended && c.trimmed);
        let c = classify_word(&w("0101"), 3).unwrap();
        assert!(!c.extended && c.trimmed);
        let c = classify_word(&w("0110"), 3).unwrap();
        assert!(!c.trimmed);
    }

    #[test]
    fn extended_rank3() {
        let words: Vec<String> = enumerate_words(3, WordKind::Extended)
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(words, vec!["000111", "001011"]);
    }

    #[test]
    fn trimmed_rank3_is_the_paper_list() {
        let got: BTreeSet<String> = enumerate_words(3, WordKind::Trimmed)
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        let expect: BTreeSet<String> = [
            "0111", "00111", "000111", "011", "0011", "00011", "01", "001", "0001",
            "001011", "01011", "00101", "0101",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn catalan_counts() {
        let catalan = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430];
        for n in 2..=8usize {
            let count = enumerate_words(n, WordKind::Extended).unwrap().len() as u64;
            assert_eq!(count, catalan[n - 1], "rank {n}");
        }
    }

    #[test]
    fn every_extended_is_trimmed() {
        for n in 1..=5 {
            for e in enumerate_words(n, WordKind::Extended).unwrap() {
                assert!(classify_word(&e, n).unwrap().trimmed, "{e}");
            }
        }
    }

    #[test]
    fn trimmed_words_shape() {
        for n in 1..=5 {
            for t in enumerate_words(n, WordKind::Trimmed).unwrap() {
                let bits = t.bits();
                assert_eq!(bits[0], 0);
                assert_eq!(bits[t.len() - 1], 1);
                assert!(t.zeros() <= n && t.ones() <= n);
            }
        }
    }

    #[test]
    fn classify_agrees_with_contraction_image_oracle() {
        // oracle: membership in the contraction-image family
        for n in 1..=5usize {
            let images: BTreeSet<String> = enumerate_words(n, WordKind::Trimmed)
                .unwrap()
                .iter()
                .map(|x| x.to_string())
                .collect();
            for len in 1..=2 * n {
                for mask in 0..(1u32 << len) {
                    let s: String = (0..len)
                        .map(|b| if mask & (1 << b) != 0 { '1' } else { '0' })
                        .collect();
                    let word = w(&s);
                    let got = classify_word(&word, n).unwrap().trimmed;
                    assert_eq!(got, images.contains(&s), "word {s} at rank {n}");
                }
            }
        }
    }

    #[test]
    fn insertable_examples() {
        assert_eq!(
            insertable_indices(&w("001011")).unwrap(),
            BTreeSet::from([3, 5])
        );
        assert_eq!(insertable_indices(&w("0001")).unwrap(), BTreeSet::new());
        assert_eq!(
            insertable_indices(&w("01011")).unwrap(),
            BTreeSet::from([2, 4])
        );
        assert!(insertable_indices(&w("0110")).is_err());
    }

    #[test]
    fn template_examples() {
        use TemplateTerm::*;
        let t = order_type_template(&w("0111")).unwrap();
        assert_eq!(t.terms(), &[Omega, OmegaStar, OmegaStar, OmegaStar]);
        assert_eq!(t.render(), "w+w*+w*+w*");

        let t = order_type_template(&w("001011")).unwrap();
        assert_eq!(t.terms(), &[Omega, Omega, Slot(3), Omega, Slot(5), OmegaStar]);
        assert_eq!(t.render(), "w+w+[a]+w*+w+[b]+w*+w*");

        let t = order_type_template(&w("01")).unwrap();
        assert_eq!(t.terms(), &[Omega, OmegaStar]);
    }

    #[test]
    fn template_instantiation() {
        let t = order_type_template(&w("001011")).unwrap();
        let ty = t
            .instantiate(&BTreeMap::from([(3usize, 2u64), (5, 1)]))
            .unwrap();
        assert_eq!(ty.render(), "w+w+[2]+w*+w+[1]+w*+w*");
        let ty0 = t.instantiate(&BTreeMap::new()).unwrap();
        assert_eq!(ty0.render(), "w+w+w*+w+w*+w*");
        assert!(t.instantiate(&BTreeMap::from([(2usize, 1u64)])).is_err());
    }

    #[test]
    fn guard_enforced() {
        assert!(enumerate_words(0, WordKind::Extended).is_err());
        assert!(enumerate_words(11, WordKind::Extended).is_err());
    }
}
