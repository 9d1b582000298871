//! Combinatorics of pair partitions and chord diagrams.
//!
//! A [`PairPartition`] is a perfect matching of the qubit labels `{1, ..., 2m}`
//! into unordered pairs, drawn as chords between `2m` points on a circle. This
//! module enumerates matchings (all of them, or only the non-crossing ones),
//! computes the minimal multi-index of the associated singlet product, converts
//! between non-crossing diagrams and Dyck words, and decides connectivity of
//! chord unions.

use std::fmt;

use thiserror::Error;

/// Default cap on `m` for non-crossing enumeration (Catalan(8) = 1430).
pub const DEFAULT_NONCROSSING_CAP: usize = 8;
/// Default cap on `m` for full matching enumeration (11!! = 10395).
pub const DEFAULT_ALL_MATCHINGS_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChordError {
    #[error("malformed pair token `{0}`, expected `a-b`")]
    MalformedToken(String),
    #[error("qubit label {0} appears more than once")]
    DuplicateLabel(usize),
    #[error("qubit label {label} out of range 1..={max}")]
    LabelOutOfRange { label: usize, max: usize },
    #[error("pair joins label {0} to itself")]
    DegeneratePair(usize),
    #[error("`{0}` is not a Dyck word")]
    NotDyckWord(String),
    #[error("m = {m} exceeds enumeration cap {cap}")]
    CapExceeded { m: usize, cap: usize },
    #[error("ordering is not a permutation of 1..={0}")]
    InvalidOrdering(usize),
    #[error("multi-index length {0} exceeds the supported maximum of 64 bits")]
    IndexTooLong(usize),
}

/// A length-`n` bitstring labelling a computational basis state.
///
/// Qubit 1 is the most significant (leftmost) bit, so comparing two indices of
/// equal length as unsigned integers matches reading the bitstrings left to
/// right. This is the "smallest as a binary number" device used throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    len: u32,
    bits: u64,
}

impl MultiIndex {
    pub fn zeros(len: usize) -> Result<Self, ChordError> {
        if len > 64 {
            return Err(ChordError::IndexTooLong(len));
        }
        Ok(Self { len: len as u32, bits: 0 })
    }

    /// Builds an index from its unsigned value; bit `len-1` of `bits` is qubit 1.
    pub fn from_bits(bits: u64, len: usize) -> Result<Self, ChordError> {
        if len > 64 {
            return Err(ChordError::IndexTooLong(len));
        }
        debug_assert!(len == 64 || bits < (1u64 << len));
        Ok(Self { len: len as u32, bits })
    }

    pub fn parse(text: &str) -> Result<Self, ChordError> {
        if text.len() > 64 || text.is_empty() {
            return Err(ChordError::IndexTooLong(text.len()));
        }
        let mut bits = 0u64;
        for c in text.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => return Err(ChordError::MalformedToken(text.to_string())),
            }
        }
        Ok(Self { len: text.len() as u32, bits })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Value of the bitstring read left to right as an unsigned integer.
    pub fn value(&self) -> u64 {
        self.bits
    }

    /// Bit at 1-based qubit `label`.
    pub fn bit(&self, label: usize) -> u8 {
        debug_assert!(label >= 1 && label <= self.len());
        ((self.bits >> (self.len() - label)) & 1) as u8
    }

    pub fn with_bit(mut self, label: usize, value: u8) -> Self {
        debug_assert!(label >= 1 && label <= self.len());
        let shift = self.len() - label;
        self.bits = (self.bits & !(1u64 << shift)) | (u64::from(value & 1) << shift);
        self
    }

    pub fn flipped(mut self, label: usize) -> Self {
        debug_assert!(label >= 1 && label <= self.len());
        self.bits ^= 1u64 << (self.len() - label);
        self
    }

    /// Number of 1-bits.
    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// The bits permuted so that position `j` holds the bit of qubit `o.label_at(j)`.
    pub fn read_in_ordering(&self, o: &QubitOrdering) -> MultiIndex {
        debug_assert_eq!(self.len(), o.len());
        let mut bits = 0u64;
        for j in 1..=self.len() {
            bits = (bits << 1) | u64::from(self.bit(o.label_at(j)));
        }
        MultiIndex { len: self.len, bits }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for label in 1..=self.len() {
            write!(f, "{}", self.bit(label))?;
        }
        Ok(())
    }
}

/// A perfect matching of `{1, ..., 2m}` into `m` unordered pairs.
///
/// Stored canonically: the smaller label first within each pair, pairs sorted
/// by their smaller label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairPartition {
    pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    /// Validates that the pairs are disjoint and cover `{1, ..., 2m}` exactly.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, ChordError> {
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort_unstable();
        let n = 2 * pairs.len();
        let mut seen = vec![false; n + 1];
        for &(a, b) in &pairs {
            if a == b {
                return Err(ChordError::DegeneratePair(a));
            }
            for label in [a, b] {
                if label < 1 || label > n {
                    return Err(ChordError::LabelOutOfRange { label, max: n });
                }
                if seen[label] {
                    return Err(ChordError::DuplicateLabel(label));
                }
                seen[label] = true;
            }
        }
        Ok(Self { pairs })
    }

    /// Number of pairs `m`.
    pub fn m(&self) -> usize {
        self.pairs.len()
    }

    /// Number of qubit labels `n = 2m`.
    pub fn n(&self) -> usize {
        2 * self.pairs.len()
    }

    /// Pairs in canonical order, smaller label first.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        Ok(())
    }
}

/// A permutation `(k_1, ..., k_n)` of the qubit labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitOrdering {
    order: Vec<usize>,
    // position[label] = 1-based rank of `label` in the ordering
    position: Vec<usize>,
}

impl QubitOrdering {
    pub fn new(order: Vec<usize>) -> Result<Self, ChordError> {
        let n = order.len();
        let mut position = vec![0usize; n + 1];
        for (j, &label) in order.iter().enumerate() {
            if label < 1 || label > n || position[label] != 0 {
                return Err(ChordError::InvalidOrdering(n));
            }
            position[label] = j + 1;
        }
        Ok(Self { order, position })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (1..=n).collect(),
            position: (0..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Label at 1-based position `j`.
    pub fn label_at(&self, j: usize) -> usize {
        self.order[j - 1]
    }

    /// 1-based position of `label` in the ordering.
    pub fn position_of(&self, label: usize) -> usize {
        self.position[label]
    }
}

/// True iff no two chords of `p` cross.
///
/// Chords `{a,b}` and `{c,d}` (with `a < b`, `c < d`) cross exactly when
/// `a < c < b < d` or `c < a < d < b`, which for points in label order on a
/// circle is geometric chord intersection.
pub fn is_noncrossing(p: &PairPartition) -> bool {
    let pairs = p.pairs();
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[i + 1..] {
            // canonical order guarantees a < c here
            debug_assert!(a < c);
            if c < b && b < d {
                return false;
            }
        }
    }
    true
}

/// Whether two individual chords cross, for rendering and diagnostics.
pub fn chords_cross(x: (usize, usize), y: (usize, usize)) -> bool {
    let (a, b) = if x.0 <= x.1 { x } else { (x.1, x.0) };
    let (c, d) = if y.0 <= y.1 { y } else { (y.1, y.0) };
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

/// All non-crossing pair partitions of `{1, ..., 2m}`, sorted ascending by
/// [`minimal_index`]. The count is the mth Catalan number.
pub fn enumerate_noncrossing(m: usize) -> Result<Vec<PairPartition>, ChordError> {
    enumerate_noncrossing_capped(m, DEFAULT_NONCROSSING_CAP)
}

pub fn enumerate_noncrossing_capped(m: usize, cap: usize) -> Result<Vec<PairPartition>, ChordError> {
    if m > cap {
        return Err(ChordError::CapExceeded { m, cap });
    }
    let labels: Vec<usize> = (1..=2 * m).collect();
    let mut out: Vec<PairPartition> = noncrossing_rec(&labels)
        .into_iter()
        .map(|pairs| PairPartition::new(pairs).expect("recursive construction yields valid matchings"))
        .collect();
    out.sort_by_key(|p| minimal_index(p).value());
    Ok(out)
}

// The first label must pair with a label at odd offset, otherwise one of the
// two regions it separates has odd size and cannot be matched internally.
fn noncrossing_rec(labels: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if labels.is_empty() {
        return vec![Vec::new()];
    }
    let first = labels[0];
    let mut out = Vec::new();
    let mut j = 1;
    while j < labels.len() {
        let partner = labels[j];
        let inside = &labels[1..j];
        let outside = &labels[j + 1..];
        for inner in noncrossing_rec(inside) {
            for outer in noncrossing_rec(outside) {
                let mut pairs = Vec::with_capacity(labels.len() / 2);
                pairs.push((first, partner));
                pairs.extend(inner.iter().copied());
                pairs.extend(outer.iter().copied());
                out.push(pairs);
            }
        }
        j += 2;
    }
    out
}

/// All `(2m-1)!!` perfect matchings of `{1, ..., 2m}`, crossing or not.
pub fn enumerate_all(m: usize) -> Result<Vec<PairPartition>, ChordError> {
    enumerate_all_capped(m, DEFAULT_ALL_MATCHINGS_CAP)
}

pub fn enumerate_all_capped(m: usize, cap: usize) -> Result<Vec<PairPartition>, ChordError> {
    if m > cap {
        return Err(ChordError::CapExceeded { m, cap });
    }
    let mut out = Vec::new();
    let mut labels: Vec<usize> = (1..=2 * m).collect();
    let mut acc = Vec::with_capacity(m);
    all_matchings_rec(&mut labels, &mut acc, &mut out);
    Ok(out)
}

fn all_matchings_rec(
    labels: &mut Vec<usize>,
    acc: &mut Vec<(usize, usize)>,
    out: &mut Vec<PairPartition>,
) {
    if labels.is_empty() {
        out.push(PairPartition::new(acc.iter().copied()).expect("recursion yields valid matchings"));
        return;
    }
    let first = labels[0];
    for j in 1..labels.len() {
        let partner = labels[j];
        let mut rest: Vec<usize> = labels[1..].to_vec();
        rest.remove(j - 1);
        acc.push((first, partner));
        all_matchings_rec(&mut rest, acc, out);
        acc.pop();
    }
}

/// The smallest multi-index in the support of the singlet product of `p`,
/// under the identity qubit ordering: the smaller member of each pair gets
/// bit 0, the larger gets bit 1.
pub fn minimal_index(p: &PairPartition) -> MultiIndex {
    minimal_index_with_ordering(p, &QubitOrdering::identity(p.n()))
}

/// Minimal multi-index relative to an ordering `o`: for each pair, the member
/// occurring earlier in `o` gets bit 0, the later member bit 1. The returned
/// bitstring is indexed by qubit label as usual; reading it *through* `o`
/// (see [`MultiIndex::read_in_ordering`]) gives the smallest such value.
pub fn minimal_index_with_ordering(p: &PairPartition, o: &QubitOrdering) -> MultiIndex {
    debug_assert_eq!(p.n(), o.len());
    let mut ix = MultiIndex::zeros(p.n()).expect("partition sizes are far below 64 labels");
    for &(a, b) in p.pairs() {
        let (zero, one) = if o.position_of(a) < o.position_of(b) {
            (a, b)
        } else {
            (b, a)
        };
        ix = ix.with_bit(zero, 0).with_bit(one, 1);
    }
    ix
}

/// Inverse of [`minimal_index`] on non-crossing partitions: each 1-bit closes
/// the most recent unmatched 0-bit, as in balanced parentheses.
///
/// Fails with [`ChordError::NotDyckWord`] when some prefix has more 1s than
/// 0s or the totals differ; such an index is not the minimal index of any
/// non-crossing partition.
pub fn dyck_to_partition(ix: MultiIndex) -> Result<PairPartition, ChordError> {
    let mut stack: Vec<usize> = Vec::with_capacity(ix.len() / 2);
    let mut pairs = Vec::with_capacity(ix.len() / 2);
    for label in 1..=ix.len() {
        if ix.bit(label) == 0 {
            stack.push(label);
        } else {
            let open = stack.pop().ok_or_else(|| ChordError::NotDyckWord(ix.to_string()))?;
            pairs.push((open, label));
        }
    }
    if !stack.is_empty() {
        return Err(ChordError::NotDyckWord(ix.to_string()));
    }
    PairPartition::new(pairs)
}

/// True iff the multigraph on `{1, ..., 2m}` whose edges are the chords of
/// all given diagrams is connected. An empty collection is disconnected.
///
/// Connectivity of the chord union is the graph form of the star condition:
/// no proper subset of labels is saturated by every diagram.
pub fn chord_union_connected(diagrams: &[PairPartition]) -> bool {
    let Some(first) = diagrams.first() else {
        return false;
    };
    let n = first.n();
    debug_assert!(diagrams.iter().all(|p| p.n() == n));
    let mut uf = UnionFind::new(n);
    for p in diagrams {
        for &(a, b) in p.pairs() {
            uf.union(a - 1, b - 1);
        }
    }
    uf.component_count() == 1
}

/// Connected components of the chord-union multigraph, each sorted ascending,
/// components ordered by smallest member.
pub fn chord_union_components(diagrams: &[PairPartition]) -> Vec<Vec<usize>> {
    let Some(first) = diagrams.first() else {
        return Vec::new();
    };
    let n = first.n();
    let mut uf = UnionFind::new(n);
    for p in diagrams {
        for &(a, b) in p.pairs() {
            uf.union(a - 1, b - 1);
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for label in 1..=n {
        by_root.entry(uf.find(label - 1)).or_default().push(label);
    }
    let mut components: Vec<Vec<usize>> = by_root.into_values().collect();
    components.sort_by_key(|c| c[0]);
    components
}

/// Parses whitespace-separated `a-b` tokens into a pair partition.
pub fn parse_diagram(text: &str) -> Result<PairPartition, ChordError> {
    let mut pairs = Vec::new();
    for token in text.split_whitespace() {
        let (a, b) = token
            .split_once('-')
            .ok_or_else(|| ChordError::MalformedToken(token.to_string()))?;
        let a: usize = a.parse().map_err(|_| ChordError::MalformedToken(token.to_string()))?;
        let b: usize = b.parse().map_err(|_| ChordError::MalformedToken(token.to_string()))?;
        pairs.push((a, b));
    }
    PairPartition::new(pairs)
}

/// Canonical text form, inverse of [`parse_diagram`].
pub fn format_diagram(p: &PairPartition) -> String {
    p.to_string()
}

/// The mth Catalan number `C(2m, m) / (m + 1)`.
pub fn catalan(m: usize) -> u64 {
    let mut value: u128 = 1;
    // binomial(2m, m) built incrementally: value stays integral at each step
    for k in 1..=m {
        value = value * (m + k) as u128 / k as u128;
    }
    (value / (m as u128 + 1)) as u64
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, i: usize, j: usize) {
        let (mut a, mut b) = (self.find(i), self.find(j));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.components -= 1;
    }

    fn component_count(&self) -> usize {
        self.components
    }
}
