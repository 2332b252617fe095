//! Braid words, braided wiring diagrams, half-twists, strand deletion, and upper-linking
//! numbers read off a diagram.
//!
//! Strand positions are 1-based from the top of the diagram. A letter `i > 0` is a positive
//! crossing of the strands at positions `i` and `i + 1`, a letter `-i` the negative one.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{edges_of, Combinatorics};
use crate::error::{Error, Result};

/// A braid word on `strands` strands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i64>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i64>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&x| x == 0 || x.unsigned_abs() as usize >= strands) {
            return Err(Error::InvalidBraid(format!("letter {bad} on {strands} strands")));
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn empty(strands: usize) -> Self {
        BraidWord { strands, letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&mut self, other: &BraidWord) {
        self.letters.extend_from_slice(&other.letters);
    }
}

/// Which strand passes over at a positive crossing; a negative crossing is the mirror image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OverStrand {
    /// The strand entering at the upper position `i`.
    Upper,
    /// The strand entering at the lower position `i + 1`.
    Lower,
}

/// Convention reproducing the tabulated upper-linking numbers of the ten-line example.
pub const POSITIVE_OVER: OverStrand = OverStrand::Upper;

/// Lines carried by the strands, by position (0-based lines, position 0 at the top).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandState {
    line_at: Vec<usize>,
}

impl StrandState {
    pub fn new(line_at: Vec<usize>) -> Result<Self> {
        let set: BTreeSet<usize> = line_at.iter().copied().collect();
        if set.len() != line_at.len() {
            return Err(Error::InvalidBraid(format!("strand assignment {line_at:?} repeats a line")));
        }
        Ok(StrandState { line_at })
    }

    pub fn lines(&self) -> &[usize] {
        &self.line_at
    }

    pub fn strands(&self) -> usize {
        self.line_at.len()
    }

    /// 0-based position of a line.
    pub fn position(&self, line: usize) -> Option<usize> {
        self.line_at.iter().position(|&l| l == line)
    }

    /// Applies one letter; returns the lines at the upper and lower positions before the swap.
    pub fn apply_letter(&mut self, letter: i64) -> (usize, usize) {
        let i = letter.unsigned_abs() as usize - 1;
        let pair = (self.line_at[i], self.line_at[i + 1]);
        self.line_at.swap(i, i + 1);
        pair
    }

    pub fn apply(&mut self, word: &BraidWord) {
        for &x in &word.letters {
            self.apply_letter(x);
        }
    }

    /// Positions of the lines of `support`, checked to be contiguous; returns the first one.
    pub fn block(&self, support: &[usize]) -> Result<usize> {
        let mut pos = support
            .iter()
            .map(|&l| self.position(l).ok_or(Error::LineAbsent(l + 1)))
            .collect::<Result<Vec<_>>>()?;
        pos.sort_unstable();
        if pos.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(Error::NonContiguousSupport(support.iter().map(|x| x + 1).collect()));
        }
        Ok(pos[0])
    }
}

/// Positive half-twist of the contiguous block carrying `support`:
/// `(σ_k ⋯ σ_{k+m-2})(σ_k ⋯ σ_{k+m-3}) ⋯ (σ_k)`. The state is updated (block reversed).
pub fn half_twist(state: &mut StrandState, support: &[usize]) -> Result<BraidWord> {
    let k = state.block(support)? as i64 + 1;
    let m = support.len() as i64;
    let mut letters = Vec::new();
    for top in (1..m).rev() {
        letters.extend(k..k + top);
    }
    let word = BraidWord { strands: state.strands(), letters };
    state.apply(&word);
    Ok(word)
}

/// A singular-braid presentation: initial strand order and `(braid, support)` events, all with
/// 0-based line indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WiringDiagram {
    pub initial: Vec<usize>,
    pub events: Vec<(BraidWord, Vec<usize>)>,
    /// Line not carried by any strand (sent to infinity), if any.
    pub line_at_infinity: Option<usize>,
}

/// Serialized wiring diagram with 1-based lines and the letters as printed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WiringDoc {
    pub arrangement: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_at_infinity: Option<usize>,
    pub strands: Vec<usize>,
    pub events: Vec<EventDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventDoc {
    pub braid: Vec<i64>,
    pub point: Vec<usize>,
}

impl WiringDiagram {
    /// Builds a diagram and checks that every support is contiguous when reached.
    pub fn from_doc(doc: &WiringDoc) -> Result<Self> {
        let k = doc.strands.len();
        let zero = |v: &[usize]| -> Result<Vec<usize>> {
            v.iter()
                .map(|&x| x.checked_sub(1).ok_or_else(|| Error::Schema("lines are 1-based".into())))
                .collect()
        };
        let initial = zero(&doc.strands)?;
        let events = doc
            .events
            .iter()
            .map(|e| Ok((BraidWord::new(k, e.braid.clone())?, zero(&e.point)?)))
            .collect::<Result<Vec<_>>>()?;
        let line_at_infinity = doc.line_at_infinity.map(|x| x - 1);
        let w = WiringDiagram { initial, events, line_at_infinity };
        w.scan(w.events.len(), |_, _, _| Ok(()))?;
        Ok(w)
    }

    pub fn strands(&self) -> usize {
        self.initial.len()
    }

    /// Runs `b_1 T_1 ⋯ b_{upto}`; `visit(i, state, word)` is called at each event `i < upto`
    /// before its half-twist, with the word accumulated so far.
    fn scan<F>(&self, upto: usize, mut visit: F) -> Result<(StrandState, BraidWord)>
    where
        F: FnMut(usize, &StrandState, &BraidWord) -> Result<()>,
    {
        let mut state = StrandState::new(self.initial.clone())?;
        let mut word = BraidWord::empty(self.strands());
        for (i, (b, support)) in self.events.iter().take(upto).enumerate() {
            state.apply(b);
            word.concat(b);
            state.block(support)?;
            visit(i, &state, &word)?;
            if i + 1 < upto {
                let t = half_twist(&mut state, support)?;
                word.concat(&t);
            }
        }
        Ok((state, word))
    }

    /// Checks that the event supports are exactly the supports of `c` avoiding the line at
    /// infinity, and that the strands carry the other lines.
    pub fn check_against(&self, c: &Combinatorics) -> Result<()> {
        let expected: BTreeSet<Vec<usize>> = c
            .supports()
            .iter()
            .filter(|s| self.line_at_infinity.is_none_or(|l| !s.contains(&l)))
            .cloned()
            .collect();
        let found: BTreeSet<Vec<usize>> = self
            .events
            .iter()
            .map(|(_, s)| {
                let mut s = s.clone();
                s.sort_unstable();
                s
            })
            .collect();
        if found.len() != self.events.len() {
            return Err(Error::InconsistentWiring("a singular point appears twice".into()));
        }
        if found != expected {
            let missing: Vec<_> = expected.difference(&found).map(|s| one_based(s)).collect();
            let extra: Vec<_> = found.difference(&expected).map(|s| one_based(s)).collect();
            return Err(Error::InconsistentWiring(format!("missing {missing:?}, unexpected {extra:?}")));
        }
        let carried: BTreeSet<usize> = self.initial.iter().copied().collect();
        let lines: BTreeSet<usize> =
            (0..c.n()).filter(|&l| self.line_at_infinity != Some(l)).collect();
        if carried != lines {
            return Err(Error::InconsistentWiring("strands do not carry the affine lines".into()));
        }
        Ok(())
    }

    /// Index of the event at the singular point with the given (0-based) support.
    pub fn event_of(&self, support: &[usize]) -> Option<usize> {
        self.events.iter().position(|(_, s)| {
            let mut s = s.clone();
            s.sort_unstable();
            s == support
        })
    }
}

fn one_based(s: &[usize]) -> Vec<usize> {
    s.iter().map(|x| x + 1).collect()
}

/// `B̄_{P_i → L} = b_1 T_1 ⋯ T_{i-1} b_i` with the initial strand state (event index 0-based).
pub fn edge_braid(w: &WiringDiagram, event: usize, line: usize) -> Result<(BraidWord, StrandState)> {
    let support = &w.events[event].1;
    if !support.contains(&line) {
        return Err(Error::LineNotInSupport { line: line + 1, support: one_based(support) });
    }
    let (_, word) = w.scan(event + 1, |_, _, _| Ok(()))?;
    Ok((word, StrandState::new(w.initial.clone())?))
}

/// Removes the strands carrying lines outside `keep`: crossings between two kept strands are
/// re-indexed, all others vanish. Returns the word and the initial state on kept strands.
pub fn strand_delete(word: &BraidWord, state: &StrandState, keep: &BTreeSet<usize>) -> (BraidWord, StrandState) {
    let mut s = state.clone();
    let mut letters = Vec::new();
    for &x in &word.letters {
        let i = x.unsigned_abs() as usize - 1;
        let (a, b) = (s.line_at[i], s.line_at[i + 1]);
        if keep.contains(&a) && keep.contains(&b) {
            let above = s.line_at[..i].iter().filter(|l| keep.contains(l)).count() as i64;
            letters.push(x.signum() * (above + 1));
        }
        s.line_at.swap(i, i + 1);
    }
    let kept: Vec<usize> = state.line_at.iter().copied().filter(|l| keep.contains(l)).collect();
    (BraidWord { strands: kept.len(), letters }, StrandState { line_at: kept })
}

/// An integer combination of meridians, one coefficient per line, read modulo adding the same
/// constant to every coefficient.
#[derive(Clone, Debug)]
pub struct MeridianSum(pub Vec<i64>);

impl MeridianSum {
    pub fn zero(n: usize) -> Self {
        MeridianSum(vec![0; n])
    }

    /// Canonical representative with last coefficient zero.
    pub fn normalized(&self) -> Vec<i64> {
        let last = self.0.last().copied().unwrap_or(0);
        self.0.iter().map(|x| x - last).collect()
    }

    /// Pairing `λ(Σ c_L m_L) = Σ c_L λ(m_L)` with a character modulo `n`.
    pub fn pair(&self, character: &[u64], n: u64) -> u64 {
        let nn = n as i128;
        let s: i128 = self.0.iter().zip(character).map(|(&c, &v)| c as i128 * v as i128).sum();
        s.rem_euclid(nn) as u64
    }

    pub fn negated(&self) -> Self {
        MeridianSum(self.0.iter().map(|x| -x).collect())
    }
}

impl PartialEq for MeridianSum {
    fn eq(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.normalized() == other.normalized()
    }
}

impl Eq for MeridianSum {}

/// `ulk_L(B) = Σ ε_i δ_L(σ_i^{ε_i})`: signed meridians of the strands crossing over the strand
/// of `line`. `n` is the number of lines of the arrangement.
pub fn ulk_braid(word: &BraidWord, state: &StrandState, line: usize, n: usize, over: OverStrand) -> Result<MeridianSum> {
    if state.position(line).is_none() {
        return Err(Error::LineAbsent(line + 1));
    }
    let mut s = state.clone();
    let mut sum = MeridianSum::zero(n);
    for &x in &word.letters {
        let (upper, lower) = s.apply_letter(x);
        let upper_over = (x > 0) == (over == OverStrand::Upper);
        let (top, bottom) = if upper_over { (upper, lower) } else { (lower, upper) };
        if bottom == line {
            sum.0[top] += x.signum();
        }
    }
    Ok(sum)
}

/// Upper-linking number of the edge `P → L` from a diagram: the braid `B̄_{P→L}` with the
/// strands of the other lines through `P` removed.
pub fn ulk_edge(w: &WiringDiagram, support: &[usize], line: usize, n: usize, over: OverStrand) -> Result<MeridianSum> {
    let event = w
        .event_of(support)
        .ok_or_else(|| Error::InconsistentWiring(format!("no event at {:?}", one_based(support))))?;
    let (word, state) = edge_braid(w, event, line)?;
    let keep: BTreeSet<usize> =
        state.lines().iter().copied().filter(|l| *l == line || !support.contains(l)).collect();
    let (word, state) = strand_delete(&word, &state, &keep);
    ulk_braid(&word, &state, line, n, over)
}

/// Upper-linking numbers of every edge of `c`, in edge order.
pub fn ulk_all(w: &WiringDiagram, c: &Combinatorics, over: OverStrand) -> Result<Vec<MeridianSum>> {
    w.check_against(c)?;
    edges_of(c)
        .iter()
        .map(|e| ulk_edge(w, &c.supports()[e.point], e.line, c.n(), over))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_twist_reverses_block() {
        let mut s = StrandState::new(vec![0, 1, 2, 3, 4]).unwrap();
        let w = half_twist(&mut s, &[1, 2, 3, 4]).unwrap();
        assert_eq!(w.letters, vec![2, 3, 4, 2, 3, 2]);
        assert_eq!(s.lines(), &[0, 4, 3, 2, 1]);
        let mut s = StrandState::new(vec![0, 1]).unwrap();
        assert_eq!(half_twist(&mut s, &[0, 1]).unwrap().letters, vec![1]);
        let mut s = StrandState::new(vec![0, 1, 2]).unwrap();
        assert_eq!(half_twist(&mut s, &[0, 2]), Err(Error::NonContiguousSupport(vec![1, 3])));
    }

    #[test]
    fn deletion() {
        let s = StrandState::new(vec![0, 1, 2]).unwrap();
        let w = BraidWord::new(3, vec![1, 2, 1]).unwrap();
        let keep = BTreeSet::from([0, 2]);
        let (d, ds) = strand_delete(&w, &s, &keep);
        assert_eq!(d.letters, vec![1]);
        assert_eq!(ds.lines(), &[0, 2]);
        let all = BTreeSet::from([0, 1, 2]);
        assert_eq!(strand_delete(&w, &s, &all).0, w);
        let s2 = StrandState::new(vec![0, 1]).unwrap();
        let (d, _) = strand_delete(&BraidWord::new(2, vec![1]).unwrap(), &s2, &BTreeSet::from([1]));
        assert!(d.is_empty());
    }

    #[test]
    fn meridian_sums_modulo_relation() {
        assert_eq!(MeridianSum(vec![1, 0, 0]), MeridianSum(vec![2, 1, 1]));
        assert_ne!(MeridianSum(vec![1, 0, 0]), MeridianSum(vec![0, 1, 0]));
    }

    #[test]
    fn letters_validated() {
        assert!(BraidWord::new(3, vec![3]).is_err());
        assert!(BraidWord::new(3, vec![0]).is_err());
        assert!(BraidWord::new(3, vec![-2, 1]).is_ok());
    }
}
