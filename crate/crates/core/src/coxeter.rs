//! Finite Coxeter groups as fully enumerated element tables.
//!
//! Type A systems are enumerated through one-line permutations; every other
//! system goes through Todd-Coxeter coset enumeration of the Coxeter
//! presentation over the trivial subgroup. Either way the result is an
//! immutable [`CoxeterGroup`] whose elements are indexed in
//! `(length, normal form)` order.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Default maximum number of group elements an enumeration may produce.
pub const DEFAULT_ELEMENT_CAP: usize = 50_000;

static NEXT_SYSTEM_ID: AtomicU32 = AtomicU32::new(1);

/// Identifies one enumerated group; elements of different groups never mix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SystemId(u32);

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeTag {
    /// `A_n`, realised as the symmetric group on `n + 1` letters.
    TypeA(usize),
    General,
}

/// A Coxeter matrix together with its type tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterSystem {
    rank: usize,
    matrix: Vec<Vec<u32>>,
    type_tag: TypeTag,
    name: String,
}

impl CoxeterSystem {
    /// `A_n`: generators `s_1..s_n` of `S_{n+1}`.
    pub fn type_a(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 1,
                        1 => 3,
                        _ => 2,
                    })
                    .collect()
            })
            .collect();
        Self {
            rank: n,
            matrix,
            type_tag: TypeTag::TypeA(n),
            name: format!("A{n}"),
        }
    }

    pub fn from_matrix(matrix: Vec<Vec<u32>>) -> Result<Self, Error> {
        let rank = matrix.len();
        if rank == 0 {
            return Err(Error::InvalidCoxeterMatrix("rank must be positive".into()));
        }
        if rank > 64 {
            return Err(Error::InvalidCoxeterMatrix("rank above 64".into()));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidCoxeterMatrix(format!("row {i} has wrong length")));
            }
            for (j, &m) in row.iter().enumerate() {
                if i == j && m != 1 {
                    return Err(Error::InvalidCoxeterMatrix(format!("m[{i}][{i}] must be 1")));
                }
                if i != j && m < 2 {
                    return Err(Error::InvalidCoxeterMatrix(format!(
                        "m[{i}][{j}] must be at least 2 (0 for infinity is not supported)"
                    )));
                }
                if matrix[j][i] != m {
                    return Err(Error::InvalidCoxeterMatrix(format!("m[{i}][{j}] != m[{j}][{i}]")));
                }
            }
        }
        let type_tag = if matrix == Self::type_a(rank).matrix {
            TypeTag::TypeA(rank)
        } else {
            TypeTag::General
        };
        let name = match type_tag {
            TypeTag::TypeA(n) => format!("A{n}"),
            TypeTag::General => "custom".to_string(),
        };
        Ok(Self {
            rank,
            matrix,
            type_tag,
            name,
        })
    }

    /// Parses Cartan-type names such as `A3`, `B4`, `D5`, `E6`, `F4`, `G2`,
    /// `H3`, `H4` or `I2(5)`.
    pub fn parse_type(name: &str) -> Result<Self, Error> {
        let name = name.trim();
        let bad = || Error::Parse(format!("unknown Coxeter type `{name}`"));
        if let Some(rest) = name.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            let m: u32 = rest.parse().map_err(|_| bad())?;
            if m < 2 {
                return Err(bad());
            }
            let mut sys = Self::from_matrix(vec![vec![1, m], vec![m, 1]])?;
            sys.name = format!("I2({m})");
            return Ok(sys);
        }
        let (letter, n) = name.split_at(1);
        let n: usize = n.parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        let linear = |edges: &[(usize, usize, u32)], rank: usize| -> Vec<Vec<u32>> {
            let mut m = vec![vec![2; rank]; rank];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = 1;
            }
            for &(i, j, w) in edges {
                m[i][j] = w;
                m[j][i] = w;
            }
            m
        };
        let path = |rank: usize| -> Vec<(usize, usize, u32)> {
            (0..rank.saturating_sub(1)).map(|i| (i, i + 1, 3)).collect()
        };
        let mut sys = match letter {
            "A" => return Ok(Self::type_a(n)),
            "B" | "C" if n >= 2 => {
                let mut e = path(n);
                e[n - 2].2 = 4;
                Self::from_matrix(linear(&e, n))?
            }
            "D" if n >= 4 => {
                let mut e = path(n - 1);
                e.push((n - 3, n - 1, 3));
                Self::from_matrix(linear(&e, n))?
            }
            "E" if (6..=8).contains(&n) => {
                // Bourbaki labelling: 1-3-4-5-6(-7-8) with 2 attached to 4.
                let mut e = vec![(0, 2, 3), (1, 3, 3), (2, 3, 3)];
                for i in 3..n - 1 {
                    e.push((i, i + 1, 3));
                }
                Self::from_matrix(linear(&e, n))?
            }
            "F" if n == 4 => Self::from_matrix(linear(&[(0, 1, 3), (1, 2, 4), (2, 3, 3)], 4))?,
            "G" if n == 2 => Self::from_matrix(linear(&[(0, 1, 6)], 2))?,
            "H" if n == 3 || n == 4 => {
                let mut e = path(n);
                e[0].2 = 5;
                Self::from_matrix(linear(&e, n))?
            }
            _ => return Err(bad()),
        };
        sys.name = name.to_string();
        Ok(sys)
    }

    /// Loads `{"type": "A3"}` or `{"rank": r, "matrix": [[...]]}`.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, Error> {
        if let Some(t) = value.get("type").and_then(|t| t.as_str()) {
            return Self::parse_type(t);
        }
        let matrix: Vec<Vec<u32>> = value
            .get("matrix")
            .cloned()
            .map(serde_json::from_value)
            .transpose()
            .map_err(|e| Error::Parse(e.to_string()))?
            .ok_or_else(|| Error::Parse("expected `type` or `matrix`".into()))?;
        if let Some(rank) = value.get("rank").and_then(|r| r.as_u64()) {
            if rank as usize != matrix.len() {
                return Err(Error::InvalidCoxeterMatrix("rank does not match matrix".into()));
            }
        }
        Self::from_matrix(matrix)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn type_tag(&self) -> &TypeTag {
        &self.type_tag
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// A group element: a handle into one enumerated [`CoxeterGroup`].
///
/// Handles are ordered by `(length, normal form)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    system: SystemId,
    index: u32,
}

impl Element {
    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn system(self) -> SystemId {
        self.system
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

const NONE: u32 = u32::MAX;

/// A fully enumerated finite Coxeter group.
pub struct CoxeterGroup {
    id: SystemId,
    system: CoxeterSystem,
    words: Vec<Vec<u8>>,
    lengths: Vec<u32>,
    perms: Option<Vec<Vec<u8>>>,
    perm_index: HashMap<Vec<u8>, u32>,
    word_index: HashMap<Vec<u8>, u32>,
    /// `right[w * rank + s]` is the index of `w s`.
    right: Vec<u32>,
    left: Vec<u32>,
    inverse: Vec<u32>,
    left_descents: Vec<u64>,
    right_descents: Vec<u64>,
    longest: u32,
    bruhat: Vec<OnceLock<Arc<Vec<u64>>>>,
}

impl fmt::Debug for CoxeterGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterGroup")
            .field("system", &self.system.name)
            .field("order", &self.len())
            .finish()
    }
}

impl CoxeterGroup {
    pub fn new(system: CoxeterSystem) -> Result<Self, Error> {
        Self::with_cap(system, DEFAULT_ELEMENT_CAP)
    }

    /// Enumerates the group, failing with [`Error::CapExceeded`] when it has
    /// more than `cap` elements (or does not close up, if infinite).
    pub fn with_cap(system: CoxeterSystem, cap: usize) -> Result<Self, Error> {
        let rank = system.rank;
        let (right_bfs, perms_bfs) = match system.type_tag {
            TypeTag::TypeA(n) => enumerate_permutations(n, cap)?,
            TypeTag::General => (todd_coxeter(&system.matrix, cap)?, None),
        };
        let order = right_bfs.len() / rank;
        if order > cap {
            return Err(Error::CapExceeded { cap });
        }

        // Breadth-first search in generator order visits elements in ShortLex
        // order of their minimal words.
        let mut words_bfs: Vec<Option<Vec<u8>>> = vec![None; order];
        let mut bfs_order = Vec::with_capacity(order);
        words_bfs[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            bfs_order.push(w);
            for s in 0..rank {
                let ws = right_bfs[w * rank + s] as usize;
                if words_bfs[ws].is_none() {
                    let mut word = words_bfs[w].clone().unwrap();
                    word.push(s as u8);
                    words_bfs[ws] = Some(word);
                    queue.push_back(ws);
                }
            }
        }
        debug_assert_eq!(bfs_order.len(), order);

        // Final index order: (length, normal form).
        let mut sorted = bfs_order.clone();
        if let Some(perms) = &perms_bfs {
            sorted.sort_by(|&a, &b| {
                let wa = words_bfs[a].as_ref().unwrap();
                let wb = words_bfs[b].as_ref().unwrap();
                wa.len().cmp(&wb.len()).then_with(|| perms[a].cmp(&perms[b]))
            });
        }
        let mut new_index = vec![0u32; order];
        for (i, &old) in sorted.iter().enumerate() {
            new_index[old] = i as u32;
        }

        let mut right = vec![NONE; order * rank];
        let mut words = vec![Vec::new(); order];
        for (i, &old) in sorted.iter().enumerate() {
            for s in 0..rank {
                right[i * rank + s] = new_index[right_bfs[old * rank + s] as usize];
            }
            words[i] = words_bfs[old].take().unwrap();
        }
        let perms = perms_bfs.map(|p| sorted.iter().map(|&old| p[old].clone()).collect::<Vec<_>>());
        let lengths: Vec<u32> = words.iter().map(|w| w.len() as u32).collect();

        let mut inverse = vec![0u32; order];
        for (i, word) in words.iter().enumerate() {
            let mut x = 0usize;
            for &s in word.iter().rev() {
                x = right[x * rank + s as usize] as usize;
            }
            inverse[i] = x as u32;
        }
        let mut left = vec![NONE; order * rank];
        for w in 0..order {
            for s in 0..rank {
                let winv_s = right[inverse[w] as usize * rank + s] as usize;
                left[w * rank + s] = inverse[winv_s];
            }
        }
        let mut left_descents = vec![0u64; order];
        let mut right_descents = vec![0u64; order];
        for w in 0..order {
            for s in 0..rank {
                if lengths[right[w * rank + s] as usize] < lengths[w] {
                    right_descents[w] |= 1 << s;
                }
                if lengths[left[w * rank + s] as usize] < lengths[w] {
                    left_descents[w] |= 1 << s;
                }
            }
        }
        let longest = (order - 1) as u32;
        debug_assert_eq!(right_descents[longest as usize].count_ones() as usize, rank);

        let perm_index = perms
            .as_ref()
            .map(|p| p.iter().enumerate().map(|(i, x)| (x.clone(), i as u32)).collect())
            .unwrap_or_default();
        let word_index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();

        Ok(Self {
            id: SystemId(NEXT_SYSTEM_ID.fetch_add(1, Ordering::Relaxed)),
            system,
            words,
            lengths,
            perms,
            perm_index,
            word_index,
            right,
            left,
            inverse,
            left_descents,
            right_descents,
            longest,
            bruhat: (0..order).map(|_| OnceLock::new()).collect(),
        })
    }

    /// Convenience constructor for `S_{n}` (type `A_{n-1}`).
    pub fn symmetric(n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidCoxeterMatrix("S_0 is not a Coxeter group".into()));
        }
        if n == 1 {
            return Ok(Self::trivial());
        }
        Self::new(CoxeterSystem::type_a(n - 1))
    }

    /// The trivial group `S_1`, treated as type `A_0` with no generators.
    pub fn trivial() -> Self {
        Self {
            id: SystemId(NEXT_SYSTEM_ID.fetch_add(1, Ordering::Relaxed)),
            system: CoxeterSystem {
                rank: 0,
                matrix: Vec::new(),
                type_tag: TypeTag::TypeA(0),
                name: "A0".into(),
            },
            words: vec![Vec::new()],
            lengths: vec![0],
            perms: Some(vec![vec![1]]),
            perm_index: HashMap::from([(vec![1], 0)]),
            word_index: HashMap::from([(Vec::new(), 0)]),
            right: Vec::new(),
            left: Vec::new(),
            inverse: vec![0],
            left_descents: vec![0],
            right_descents: vec![0],
            longest: 0,
            bruhat: vec![OnceLock::new()],
        }
    }

    pub fn id(&self) -> SystemId {
        self.id
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn rank(&self) -> usize {
        self.system.rank
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `n` for `S_n` when this is a type A group.
    pub fn type_a_degree(&self) -> Option<usize> {
        match self.system.type_tag {
            TypeTag::TypeA(n) => Some(n + 1),
            TypeTag::General => None,
        }
    }

    pub fn element(&self, index: usize) -> Element {
        assert!(index < self.len(), "element index out of range");
        Element {
            system: self.id,
            index: index as u32,
        }
    }

    /// All elements sorted by `(length, normal form)`.
    pub fn enumerate(&self) -> impl ExactSizeIterator<Item = Element> + '_ {
        (0..self.len()).map(|i| self.element(i))
    }

    pub fn identity(&self) -> Element {
        self.element(0)
    }

    pub fn generator(&self, s: usize) -> Element {
        self.element(self.right[s] as usize)
    }

    pub fn longest_element(&self) -> Element {
        self.element(self.longest as usize)
    }

    pub fn check(&self, w: Element) -> Result<usize, Error> {
        if w.system != self.id {
            return Err(Error::SystemMismatch);
        }
        Ok(w.index())
    }

    fn idx(&self, w: Element) -> usize {
        assert_eq!(w.system, self.id, "element from a different Coxeter system");
        w.index()
    }

    pub fn length(&self, w: Element) -> usize {
        self.lengths[self.idx(w)] as usize
    }

    pub(crate) fn length_of(&self, w: usize) -> usize {
        self.lengths[w] as usize
    }

    /// ShortLex-minimal reduced word (0-based generator indices).
    pub fn word(&self, w: Element) -> &[u8] {
        &self.words[self.idx(w)]
    }

    pub(crate) fn word_of(&self, w: usize) -> &[u8] {
        &self.words[w]
    }

    /// One-line notation (values `1..=n`) for type A groups.
    pub fn permutation(&self, w: Element) -> Option<&[u8]> {
        let i = self.idx(w);
        self.perms.as_ref().map(|p| p[i].as_slice())
    }

    pub fn from_permutation(&self, perm: &[u8]) -> Option<Element> {
        self.perm_index.get(perm).map(|&i| self.element(i as usize))
    }

    /// Evaluates an arbitrary (not necessarily reduced) word.
    pub fn from_word(&self, word: &[u8]) -> Result<Element, Error> {
        let mut x = 0usize;
        for &s in word {
            if s as usize >= self.rank() {
                return Err(Error::Parse(format!("generator {} out of range", s + 1)));
            }
            x = self.right[x * self.rank() + s as usize] as usize;
        }
        Ok(self.element(x))
    }

    pub fn multiply(&self, a: Element, b: Element) -> Result<Element, Error> {
        let a = self.check(a)?;
        let b = self.check(b)?;
        Ok(self.element(self.mul_idx(a, b)))
    }

    pub(crate) fn mul_idx(&self, a: usize, b: usize) -> usize {
        let rank = self.rank();
        self.words[b]
            .iter()
            .fold(a, |x, &s| self.right[x * rank + s as usize] as usize)
    }

    /// `w s`
    pub(crate) fn right_mul(&self, w: usize, s: usize) -> usize {
        self.right[w * self.rank() + s] as usize
    }

    /// `s w`
    pub(crate) fn left_mul(&self, w: usize, s: usize) -> usize {
        self.left[w * self.rank() + s] as usize
    }

    pub fn inverse(&self, w: Element) -> Element {
        self.element(self.inverse[self.idx(w)] as usize)
    }

    /// Descent set as a bitmask over generator indices.
    pub fn descent_mask(&self, w: Element, side: Side) -> u64 {
        let i = self.idx(w);
        match side {
            Side::Left => self.left_descents[i],
            Side::Right => self.right_descents[i],
        }
    }

    pub(crate) fn left_descents_of(&self, w: usize) -> u64 {
        self.left_descents[w]
    }

    pub(crate) fn right_descents_of(&self, w: usize) -> u64 {
        self.right_descents[w]
    }

    pub fn descents(&self, w: Element, side: Side) -> Vec<usize> {
        let mask = self.descent_mask(w, side);
        (0..self.rank()).filter(|s| mask >> s & 1 == 1).collect()
    }

    pub fn w0_mult(&self, w: Element) -> Element {
        let i = self.idx(w);
        self.element(self.mul_idx(self.longest as usize, i))
    }

    pub fn w0_conjugate(&self, w: Element) -> Element {
        let i = self.idx(w);
        let w0 = self.longest as usize;
        self.element(self.mul_idx(self.mul_idx(w0, i), w0))
    }

    pub fn is_involution(&self, w: Element) -> bool {
        let i = self.idx(w);
        self.inverse[i] as usize == i
    }

    /// Bruhat order via the subword property on the ShortLex word of `y`.
    pub fn bruhat_leq(&self, x: Element, y: Element) -> Result<bool, Error> {
        let x = self.check(x)?;
        let y = self.check(y)?;
        Ok(self.bruhat_leq_idx(x, y))
    }

    pub(crate) fn bruhat_leq_idx(&self, x: usize, y: usize) -> bool {
        if self.lengths[x] > self.lengths[y] {
            return false;
        }
        if x == y || x == 0 {
            return true;
        }
        let ideal = self.lower_interval(y);
        ideal[x / 64] >> (x % 64) & 1 == 1
    }

    /// Bitset of `{x : x <= y}`, memoised per `y`.
    fn lower_interval(&self, y: usize) -> Arc<Vec<u64>> {
        if let Some(v) = self.bruhat[y].get() {
            return v.clone();
        }
        let words = self.len().div_ceil(64);
        let set = if y == 0 {
            let mut v = vec![0u64; words];
            v[0] = 1;
            v
        } else {
            // y = s y' with s the first letter of the ShortLex word; subwords
            // either skip s or keep it.
            let s = self.words[y][0] as usize;
            let tail = self.left_mul(y, s);
            let below = self.lower_interval(tail);
            let mut v = (*below).clone();
            for (chunk, &bits) in below.iter().enumerate() {
                let mut b = bits;
                while b != 0 {
                    let x = chunk * 64 + b.trailing_zeros() as usize;
                    b &= b - 1;
                    let sx = self.left_mul(x, s);
                    v[sx / 64] |= 1 << (sx % 64);
                }
            }
            v
        };
        let arc = Arc::new(set);
        let _ = self.bruhat[y].set(arc.clone());
        arc
    }

    /// Human-readable normal form: one-line notation in type A (`4231`, or
    /// comma separated beyond 9 letters), otherwise `s1s2s1`, with `e` for
    /// the identity.
    pub fn format(&self, w: Element) -> String {
        let i = self.idx(w);
        if let Some(perms) = &self.perms {
            let p = &perms[i];
            if p.len() <= 9 {
                return p.iter().map(|x| x.to_string()).collect();
            }
            return p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        }
        self.format_word(i)
    }

    pub fn format_word(&self, w: usize) -> String {
        if self.words[w].is_empty() {
            return "e".into();
        }
        self.words[w].iter().map(|s| format!("s{}", s + 1)).collect()
    }

    /// Parses `e`, a word `s1s2s1`, or (type A) one-line notation `4231` /
    /// `4,2,3,1`.
    pub fn parse(&self, text: &str) -> Result<Element, Error> {
        let t = text.trim();
        if t == "e" || t.is_empty() {
            return Ok(self.identity());
        }
        if t.starts_with('s') {
            let mut word = Vec::new();
            for part in t.split('s').skip(1) {
                let k: usize = part
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad word `{t}`")))?;
                if k == 0 || k > self.rank() {
                    return Err(Error::Parse(format!("generator s{k} out of range")));
                }
                word.push((k - 1) as u8);
            }
            return self.from_word(&word);
        }
        if self.perms.is_some() {
            let values: Vec<u8> = if t.contains(',') {
                t.split(',')
                    .map(|x| x.trim().parse::<u8>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| Error::Parse(format!("bad permutation `{t}`")))?
            } else {
                t.chars()
                    .map(|c| c.to_digit(10).map(|d| d as u8))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::Parse(format!("bad permutation `{t}`")))?
            };
            return self
                .from_permutation(&values)
                .ok_or_else(|| Error::Parse(format!("`{t}` is not a permutation of this group")));
        }
        Err(Error::Parse(format!("cannot parse element `{t}`")))
    }

    /// Element lookup by ShortLex word.
    pub fn from_shortlex(&self, word: &[u8]) -> Option<Element> {
        self.word_index.get(word).map(|&i| self.element(i as usize))
    }
}

/// Enumerates `S_{n+1}` by permutations. Returns the right-multiplication
/// table (with the identity at index 0) and the one-line forms.
#[allow(clippy::type_complexity)]
fn enumerate_permutations(n: usize, cap: usize) -> Result<(Vec<u32>, Option<Vec<Vec<u8>>>), Error> {
    let letters = n + 1;
    let order: usize = (1..=letters).try_fold(1usize, |acc, k| acc.checked_mul(k)).unwrap_or(usize::MAX);
    if order > cap {
        return Err(Error::CapExceeded { cap });
    }
    let mut perms: Vec<Vec<u8>> = vec![(1..=letters as u8).collect()];
    let mut index: HashMap<Vec<u8>, u32> = HashMap::new();
    index.insert(perms[0].clone(), 0);
    let mut right = Vec::with_capacity(order * n);
    let mut i = 0;
    while i < perms.len() {
        for s in 0..n {
            // w s_i swaps positions i, i+1 of the one-line form.
            let mut p = perms[i].clone();
            p.swap(s, s + 1);
            let next = perms.len() as u32;
            let j = *index.entry(p.clone()).or_insert_with(|| {
                perms.push(p);
                next
            });
            right.push(j);
        }
        i += 1;
    }
    Ok((right, Some(perms)))
}

/// Todd-Coxeter (HLT strategy) over the trivial subgroup. Returns the right
/// multiplication table, identity at index 0.
fn todd_coxeter(matrix: &[Vec<u32>], cap: usize) -> Result<Vec<u32>, Error> {
    let rank = matrix.len();
    let mut relators: Vec<Vec<usize>> = (0..rank).map(|i| vec![i, i]).collect();
    for i in 0..rank {
        for j in i + 1..rank {
            let m = matrix[i][j] as usize;
            relators.push((0..2 * m).map(|k| if k % 2 == 0 { i } else { j }).collect());
        }
    }
    relators.sort_by_key(|r| r.len());
    let limit = cap.saturating_mul(8).saturating_add(4096);
    let mut tc = CosetTable::new(rank, limit);
    let mut alpha = 0;
    while alpha < tc.parent.len() {
        if tc.is_alive(alpha) {
            for r in &relators {
                tc.scan_and_fill(alpha, r)?;
                if !tc.is_alive(alpha) {
                    break;
                }
            }
            if tc.is_alive(alpha) {
                for s in 0..rank {
                    if tc.get(alpha, s) == NONE {
                        tc.define(alpha, s)?;
                    }
                }
            }
        }
        alpha += 1;
    }
    let alive: Vec<usize> = (0..tc.parent.len()).filter(|&c| tc.is_alive(c)).collect();
    if alive.len() > cap {
        return Err(Error::CapExceeded { cap });
    }
    let mut renumber = vec![NONE; tc.parent.len()];
    for (i, &c) in alive.iter().enumerate() {
        renumber[c] = i as u32;
    }
    let mut right = Vec::with_capacity(alive.len() * rank);
    for &c in &alive {
        for s in 0..rank {
            right.push(renumber[tc.get(c, s) as usize]);
        }
    }
    Ok(right)
}

struct CosetTable {
    rank: usize,
    limit: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    dead: VecDeque<usize>,
}

impl CosetTable {
    fn new(rank: usize, limit: usize) -> Self {
        Self {
            rank,
            limit,
            table: vec![NONE; rank],
            parent: vec![0],
            dead: VecDeque::new(),
        }
    }

    fn get(&self, c: usize, s: usize) -> u32 {
        self.table[c * self.rank + s]
    }

    fn set(&mut self, c: usize, s: usize, d: u32) {
        self.table[c * self.rank + s] = d;
    }

    fn is_alive(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn define(&mut self, c: usize, s: usize) -> Result<(), Error> {
        let d = self.parent.len();
        if d >= self.limit {
            return Err(Error::CapExceeded {
                cap: self.limit / 8,
            });
        }
        self.parent.push(d as u32);
        self.table.extend(std::iter::repeat_n(NONE, self.rank));
        self.deduce(c, s, d);
        Ok(())
    }

    /// Records `c s = d` (and `d s = c`, generators being involutions).
    fn deduce(&mut self, c: usize, s: usize, d: usize) {
        self.set(c, s, d as u32);
        self.set(d, s, c as u32);
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut x = c;
        while x != r {
            let next = self.parent[x] as usize;
            self.parent[x] = r as u32;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi] = lo as u32;
            self.dead.push_back(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        while let Some(g) = self.dead.pop_front() {
            for s in 0..self.rank {
                let d = self.get(g, s);
                if d == NONE {
                    continue;
                }
                let d = d as usize;
                self.set(d, s, NONE);
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mu_s = self.get(mu, s);
                let nu_s = self.get(nu, s);
                if mu_s != NONE {
                    self.merge(nu, mu_s as usize);
                } else if nu_s != NONE {
                    self.merge(mu, nu_s as usize);
                } else {
                    self.deduce(mu, s, nu);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, alpha: usize, word: &[usize]) -> Result<(), Error> {
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0usize;
        let mut j = word.len() as isize - 1;
        loop {
            while (i as isize) <= j && self.get(f, word[i]) != NONE {
                f = self.get(f, word[i]) as usize;
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.get(b, word[j as usize]) != NONE {
                b = self.get(b, word[j as usize]) as usize;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.deduce(f, word[i], b);
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }
}
