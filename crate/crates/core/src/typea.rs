//! Type A: Robinson-Schensted, partitions and the partition a-function.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cells::{CellKind, CellPartition};
use crate::coxeter::{CoxeterGroup, Element};
use crate::error::Error;

/// A partition, parts weakly decreasing and positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let cols = self.0.first().copied().unwrap_or(0);
        Self((0..cols).map(|j| self.0.iter().filter(|&&p| p > j).count()).collect())
    }

    /// All partitions of `n`, in reverse lexicographic order starting at `(n)`.
    pub fn all(n: usize) -> Vec<Partition> {
        fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Compact rendering with exponents, e.g. `(4,1^3)`.
    pub fn compact(&self) -> String {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let p = self.0[i];
            let run = self.0[i..].iter().take_while(|&&q| q == p).count();
            out.push(if run > 1 { format!("{p}^{run}") } else { p.to_string() });
            i += run;
        }
        format!("({})", out.join(","))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// Accepts `5,1,1`, `(5,1,1)` and exponent shorthand `(4,1^3)`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = Vec::new();
        for tok in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let bad = || Error::Parse(format!("bad partition `{s}`"));
            let (p, k) = match tok.split_once('^') {
                Some((p, k)) => (p.parse::<usize>().map_err(|_| bad())?, k.parse::<usize>().map_err(|_| bad())?),
                None => (tok.parse::<usize>().map_err(|_| bad())?, 1),
            };
            if p == 0 {
                return Err(bad());
            }
            parts.extend(std::iter::repeat_n(p, k));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("parts of `{s}` are not weakly decreasing")));
        }
        Ok(Self(parts))
    }
}

/// `n(λ) = Σ (i-1) λ_i`, the value of the a-function on the two-sided cell
/// with RS shape `λ`.
pub fn shape_a(lambda: &Partition) -> usize {
    lambda.0.iter().enumerate().map(|(i, &p)| i * p).sum()
}

/// RS shape of `w₀ w` given the shape of `w`.
pub fn w0_shape(lambda: &Partition) -> Partition {
    lambda.transpose()
}

/// A standard Young tableau, stored row by row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StandardTableau {
    rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, Error> {
        let n: usize = rows.iter().map(Vec::len).sum();
        let mut seen = vec![false; n + 1];
        for (r, row) in rows.iter().enumerate() {
            if row.is_empty() {
                return Err(Error::InvalidTableau("empty row".into()));
            }
            if r > 0 && row.len() > rows[r - 1].len() {
                return Err(Error::InvalidTableau("row lengths increase".into()));
            }
            for (c, &x) in row.iter().enumerate() {
                if x == 0 || x > n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidTableau(format!("entry {x} out of range or repeated")));
                }
                if c > 0 && row[c - 1] >= x {
                    return Err(Error::InvalidTableau("row not increasing".into()));
                }
                if r > 0 && rows[r - 1][c] >= x {
                    return Err(Error::InvalidTableau("column not increasing".into()));
                }
            }
        }
        Ok(Self { rows })
    }

    /// The single-row tableau `1 2 … n`.
    pub fn row(n: usize) -> Self {
        Self {
            rows: if n == 0 { Vec::new() } else { vec![(1..=n).collect()] },
        }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition(self.rows.iter().map(Vec::len).collect())
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let r: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", r.join(" "))?;
        }
        Ok(())
    }
}

/// Row-insertion Robinson-Schensted: `w ↦ (P, Q)`.
pub fn rs(perm: &[usize]) -> Result<(StandardTableau, StandardTableau), Error> {
    check_permutation(perm)?;
    let mut p: Vec<Vec<usize>> = Vec::new();
    let mut q: Vec<Vec<usize>> = Vec::new();
    for (step, &x) in perm.iter().enumerate() {
        let mut bump = x;
        let mut r = 0;
        loop {
            if r == p.len() {
                p.push(vec![bump]);
                q.push(vec![step + 1]);
                break;
            }
            let row = &mut p[r];
            match row.iter().position(|&y| y > bump) {
                Some(k) => {
                    bump = std::mem::replace(&mut row[k], bump);
                    r += 1;
                }
                None => {
                    row.push(bump);
                    q[r].push(step + 1);
                    break;
                }
            }
        }
    }
    Ok((StandardTableau { rows: p }, StandardTableau { rows: q }))
}

/// Inverse of [`rs`].
pub fn rs_inverse(p: &StandardTableau, q: &StandardTableau) -> Result<Vec<usize>, Error> {
    if p.shape() != q.shape() {
        return Err(Error::ShapeMismatch);
    }
    StandardTableau::new(p.rows.clone())?;
    StandardTableau::new(q.rows.clone())?;
    let n = p.size();
    let mut p = p.rows.clone();
    let mut q = q.rows.clone();
    let mut out = vec![0; n];
    for step in (1..=n).rev() {
        let r = q
            .iter()
            .position(|row| row.last() == Some(&step))
            .expect("largest entry ends a row");
        q[r].pop();
        let mut bump = p[r].pop().unwrap();
        if q[r].is_empty() {
            q.pop();
            p.pop();
        }
        for row in p[..r].iter_mut().rev() {
            let k = row.iter().rposition(|&y| y < bump).expect("reverse bump");
            bump = std::mem::replace(&mut row[k], bump);
        }
        out[step - 1] = bump;
    }
    Ok(out)
}

fn check_permutation(perm: &[usize]) -> Result<(), Error> {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    for &x in perm {
        if x == 0 || x > n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::Parse(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

/// One-line notation of a type A element as `usize` values.
pub fn one_line(g: &CoxeterGroup, w: Element) -> Result<Vec<usize>, Error> {
    g.check(w)?;
    g.permutation(w)
        .map(|p| p.iter().map(|&x| x as usize).collect())
        .ok_or(Error::NotTypeA)
}

/// RS shape of `w`.
pub fn shape_of(g: &CoxeterGroup, w: Element) -> Result<Partition, Error> {
    Ok(rs(&one_line(g, w)?)?.0.shape())
}

/// Type A cells read off from RS: left cells by `Q`, right cells by `P`,
/// two-sided cells by shape.
pub fn cells_via_rs(g: &CoxeterGroup, kind: CellKind) -> Result<CellPartition, Error> {
    let mut ids: HashMap<Vec<Vec<usize>>, usize> = HashMap::new();
    let mut labels = Vec::with_capacity(g.len());
    for w in g.enumerate() {
        let (p, q) = rs(&one_line(g, w)?)?;
        let key = match kind {
            CellKind::Left => q.rows,
            CellKind::Right => p.rows,
            CellKind::TwoSided => vec![p.shape().0],
        };
        let next = ids.len();
        labels.push(*ids.entry(key).or_insert(next));
    }
    Ok(CellPartition::from_labels(g, kind, &labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterGroup;
    use proptest::prelude::*;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn s7_a_table() {
        let expected = [
            ("(7)", 0),
            ("(6,1)", 1),
            ("(5,2)", 2),
            ("(5,1,1)", 3),
            ("(4,3)", 3),
            ("(4,2,1)", 4),
            ("(4,1^3)", 6),
            ("(3,3,1)", 5),
            ("(3,2,2)", 6),
            ("(3,2,1,1)", 7),
            ("(3,1^4)", 10),
            ("(2,2,2,1)", 9),
            ("(2,2,1^3)", 11),
            ("(2,1^5)", 15),
            ("(1^7)", 21),
        ];
        assert_eq!(Partition::all(7).len(), 15);
        for (s, a) in expected {
            assert_eq!(shape_a(&part(s)), a, "{s}");
        }
    }

    #[test]
    fn w0_shapes_from_the_remark() {
        let x = w0_shape(&part("5,1,1"));
        assert_eq!(x, part("(3,1^4)"));
        assert_eq!(shape_a(&x), 10);
        let y = w0_shape(&part("4,3"));
        assert_eq!(y, part("(2,2,2,1)"));
        assert_eq!(shape_a(&y), 9);
        assert_eq!(w0_shape(&part("1^5")), part("5"));
    }

    #[test]
    fn extreme_permutations() {
        let (p, q) = rs(&[1, 2, 3, 4]).unwrap();
        assert_eq!(p, StandardTableau::row(4));
        assert_eq!(q, StandardTableau::row(4));
        let (p, q) = rs(&[4, 3, 2, 1]).unwrap();
        assert_eq!(p.shape(), part("1^4"));
        assert_eq!(q.shape(), part("1^4"));
        assert_eq!(rs_inverse(&StandardTableau::row(3), &StandardTableau::row(3)).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn rs_inverse_rejects_shape_mismatch() {
        let p = StandardTableau::row(3);
        let q = StandardTableau::new(vec![vec![1, 2], vec![3]]).unwrap();
        assert_eq!(rs_inverse(&p, &q), Err(Error::ShapeMismatch));
        assert!(StandardTableau::new(vec![vec![1, 3], vec![4, 2]]).is_err());
        assert!(StandardTableau::new(vec![vec![2, 3], vec![1]]).is_err());
    }

    #[test]
    fn s3_right_cells() {
        let g = CoxeterGroup::symmetric(3).unwrap();
        let r = cells_via_rs(&g, CellKind::Right).unwrap();
        let mut classes: Vec<Vec<String>> = r
            .classes()
            .iter()
            .map(|c| {
                let mut v: Vec<String> = c.iter().map(|&w| g.format_word(w.index())).collect();
                v.sort();
                v
            })
            .collect();
        classes.sort();
        assert_eq!(
            classes,
            vec![
                vec!["e".to_string()],
                vec!["s1".into(), "s1s2".into()],
                vec!["s1s2s1".into()],
                vec!["s2".into(), "s2s1".into()],
            ]
        );
    }

    #[test]
    fn s7_two_sided_cells() {
        let g = CoxeterGroup::symmetric(7).unwrap();
        assert_eq!(cells_via_rs(&g, CellKind::TwoSided).unwrap().len(), 15);
    }

    #[test]
    fn rs_is_a_bijection_for_small_n() {
        for n in 1..=6 {
            let g = CoxeterGroup::symmetric(n).unwrap();
            let mut pairs = std::collections::HashSet::new();
            for w in g.enumerate() {
                let perm = one_line(&g, w).unwrap();
                let (p, q) = rs(&perm).unwrap();
                assert_eq!(p.shape(), q.shape());
                StandardTableau::new(p.rows().to_vec()).unwrap();
                StandardTableau::new(q.rows().to_vec()).unwrap();
                assert_eq!(rs_inverse(&p, &q).unwrap(), perm);
                let inv = one_line(&g, g.inverse(w)).unwrap();
                assert_eq!(rs(&inv).unwrap(), (q.clone(), p.clone()));
                assert!(pairs.insert((p, q)));
            }
        }
    }

    #[test]
    fn equal_tableaux_give_involutions() {
        let g = CoxeterGroup::symmetric(5).unwrap();
        for w in g.enumerate() {
            let (p, q) = rs(&one_line(&g, w).unwrap()).unwrap();
            assert_eq!(p == q, g.is_involution(w));
        }
    }

    #[test]
    fn partition_parsing_and_rendering() {
        assert_eq!(part("(4,1^3)").parts(), &[4, 1, 1, 1]);
        assert_eq!(part("(4,1^3)").compact(), "(4,1^3)");
        assert_eq!(part("3,2,2").to_string(), "(3,2,2)");
        assert!("(1,2)".parse::<Partition>().is_err());
    }

    proptest! {
        #[test]
        fn transpose_is_involution(parts in proptest::collection::vec(1usize..8, 0..8)) {
            let p = Partition::new(parts);
            prop_assert_eq!(p.transpose().transpose(), p.clone());
            prop_assert_eq!(p.transpose().size(), p.size());
        }

        #[test]
        fn rs_roundtrip_random(perm in Just((1..=9usize).collect::<Vec<_>>()).prop_shuffle()) {
            let (p, q) = rs(&perm).unwrap();
            prop_assert_eq!(rs_inverse(&p, &q).unwrap(), perm);
        }
    }
}
