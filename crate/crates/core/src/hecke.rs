//! The Hecke algebra of a finite Coxeter group in Soergel's normalization.
//!
//! `H_s^2 = H_e + (v^-1 - v) H_s` and `H̲_s = H_s + v H_e`; the KL basis is
//! `H̲_y = sum_x h_{x,y} H_x` with `h_{x,y} ∈ vZ[v]` for `x < y`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::coxeter::{CoxeterGroup, Element, SystemId};
use crate::error::Error;
use crate::laurent::LaurentPoly;

/// A finite `Z[v, v^-1]`-combination of standard basis elements `H_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElt {
    system: SystemId,
    terms: BTreeMap<u32, LaurentPoly>,
}

impl HeckeElt {
    pub fn zero(g: &CoxeterGroup) -> Self {
        Self {
            system: g.id(),
            terms: BTreeMap::new(),
        }
    }

    /// `H_w`
    pub fn standard(g: &CoxeterGroup, w: Element) -> Result<Self, Error> {
        let i = g.check(w)?;
        Ok(Self::from_index(g.id(), i, LaurentPoly::one()))
    }

    fn from_index(system: SystemId, i: usize, p: LaurentPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !p.is_zero() {
            terms.insert(i as u32, p);
        }
        Self { system, terms }
    }

    pub fn from_terms<I>(g: &CoxeterGroup, terms: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Element, LaurentPoly)>,
    {
        let mut out = Self::zero(g);
        for (w, p) in terms {
            let i = g.check(w)?;
            out.add_at(i, &p, &BigInt::one(), 0);
        }
        Ok(out)
    }

    pub fn system(&self) -> SystemId {
        self.system
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: Element) -> LaurentPoly {
        self.terms.get(&(w.index() as u32)).cloned().unwrap_or_default()
    }

    /// Nonzero terms in element order.
    pub fn terms<'a>(&'a self, g: &'a CoxeterGroup) -> impl Iterator<Item = (Element, &'a LaurentPoly)> + 'a {
        self.terms.iter().map(move |(&i, p)| (g.element(i as usize), p))
    }

    fn add_at(&mut self, i: usize, p: &LaurentPoly, c: &BigInt, k: i32) {
        let entry = self.terms.entry(i as u32).or_default();
        entry.add_scaled(p, c, k);
        if entry.is_zero() {
            self.terms.remove(&(i as u32));
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.system != other.system {
            return Err(Error::SystemMismatch);
        }
        let mut out = self.clone();
        for (&i, p) in &other.terms {
            out.add_at(i as usize, p, &BigInt::one(), 0);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        if self.system != other.system {
            return Err(Error::SystemMismatch);
        }
        let mut out = self.clone();
        for (&i, p) in &other.terms {
            out.add_at(i as usize, p, &-BigInt::one(), 0);
        }
        Ok(out)
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        let mut terms = BTreeMap::new();
        for (&i, q) in &self.terms {
            let r = q * p;
            if !r.is_zero() {
                terms.insert(i, r);
            }
        }
        Self {
            system: self.system,
            terms,
        }
    }

    /// `self · H_s`
    fn mul_hs_right(&self, g: &CoxeterGroup, s: usize) -> Self {
        let mut out = Self {
            system: self.system,
            terms: BTreeMap::new(),
        };
        let one = BigInt::one();
        for (&x, p) in &self.terms {
            let x = x as usize;
            let xs = g.right_mul(x, s);
            out.add_at(xs, p, &one, 0);
            if g.length_of(xs) < g.length_of(x) {
                out.add_at(x, p, &one, -1);
                out.add_at(x, p, &-one.clone(), 1);
            }
        }
        out
    }

    /// `self · bar(H_s) = self · (H_s + v - v^-1)`
    fn mul_hs_bar_right(&self, g: &CoxeterGroup, s: usize) -> Self {
        let mut out = self.mul_hs_right(g, s);
        let one = BigInt::one();
        for (&x, p) in &self.terms {
            out.add_at(x as usize, p, &one, 1);
            out.add_at(x as usize, p, &-one.clone(), -1);
        }
        out
    }
}

/// Product in the standard basis.
pub fn mult_standard(g: &CoxeterGroup, a: &HeckeElt, b: &HeckeElt) -> Result<HeckeElt, Error> {
    if a.system != g.id() || b.system != g.id() {
        return Err(Error::SystemMismatch);
    }
    let mut out = HeckeElt::zero(g);
    for (&y, q) in &b.terms {
        let mut t = a.clone();
        for &s in g.word_of(y as usize) {
            t = t.mul_hs_right(g, s as usize);
        }
        for (&x, p) in &t.terms {
            out.add_at(x as usize, &(p * q), &BigInt::one(), 0);
        }
    }
    Ok(out)
}

/// The bar involution: `v ↦ v^-1`, `H_w ↦ H_{w^-1}^{-1}`.
pub fn bar(g: &CoxeterGroup, h: &HeckeElt) -> Result<HeckeElt, Error> {
    if h.system != g.id() {
        return Err(Error::SystemMismatch);
    }
    let mut out = HeckeElt::zero(g);
    for (&w, p) in &h.terms {
        let mut t = HeckeElt::from_index(g.id(), 0, p.bar());
        for &s in g.word_of(w as usize) {
            t = t.mul_hs_bar_right(g, s as usize);
        }
        for (&x, q) in &t.terms {
            out.add_at(x as usize, q, &BigInt::one(), 0);
        }
    }
    Ok(out)
}

/// Kazhdan-Lusztig polynomials `h_{x,y}` and `μ`-coefficients for a whole
/// group, filled by increasing length of `y`.
pub struct KLTable {
    group: Arc<CoxeterGroup>,
    /// `cols[y]`: nonzero `h_{x,y}` sorted by `x`.
    cols: Vec<Vec<(u32, LaurentPoly)>>,
    /// `mu_below[y]`: `(z, μ(z,y))` for `z < y` with `μ ≠ 0`.
    mu_below: Vec<Vec<(u32, i64)>>,
    /// Symmetrised `μ` graph.
    mu_graph: Vec<Vec<(u32, i64)>>,
}

impl std::fmt::Debug for KLTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KLTable").field("group", &self.group).finish()
    }
}

impl KLTable {
    pub fn new(group: Arc<CoxeterGroup>) -> Self {
        let n = group.len();
        let mut cols: Vec<Vec<(u32, LaurentPoly)>> = Vec::with_capacity(n);
        let mut mu_below: Vec<Vec<(u32, i64)>> = Vec::with_capacity(n);
        let mut buf: Vec<LaurentPoly> = vec![LaurentPoly::zero(); n];
        let mut touched: Vec<bool> = vec![false; n];
        let mut touched_list: Vec<usize> = Vec::new();
        let one = BigInt::one();

        cols.push(vec![(0, LaurentPoly::one())]);
        mu_below.push(Vec::new());
        for y in 1..n {
            let s = group.left_descents_of(y).trailing_zeros() as usize;
            let yp = group.left_mul(y, s);
            let mut touch = |i: usize, list: &mut Vec<usize>| {
                if !touched[i] {
                    touched[i] = true;
                    list.push(i);
                }
            };
            // H̲_s H̲_{y'}
            for (x, p) in &cols[yp] {
                let x = *x as usize;
                let sx = group.left_mul(x, s);
                touch(sx, &mut touched_list);
                buf[sx].add_scaled(p, &one, 0);
                touch(x, &mut touched_list);
                let k = if group.length_of(sx) < group.length_of(x) { -1 } else { 1 };
                buf[x].add_scaled(p, &one, k);
            }
            for &(z, mu) in &mu_below[yp] {
                let z = z as usize;
                if group.left_descents_of(z) >> s & 1 == 0 {
                    continue;
                }
                let c = BigInt::from(-mu);
                for (x, p) in &cols[z] {
                    let x = *x as usize;
                    touch(x, &mut touched_list);
                    buf[x].add_scaled(p, &c, 0);
                }
            }
            touched_list.sort_unstable();
            let mut col = Vec::with_capacity(touched_list.len());
            let mut mus = Vec::new();
            for &x in &touched_list {
                touched[x] = false;
                let p = std::mem::take(&mut buf[x]);
                if p.is_zero() {
                    continue;
                }
                if x != y {
                    debug_assert!(p.valuation().unwrap() >= 1, "h_{{x,y}} not in vZ[v]");
                    let m = p.coeff(1);
                    if !m.is_zero() {
                        mus.push((x as u32, m.to_i64().expect("mu exceeds i64")));
                    }
                }
                col.push((x as u32, p));
            }
            touched_list.clear();
            cols.push(col);
            mu_below.push(mus);
        }

        let mut mu_graph: Vec<Vec<(u32, i64)>> = mu_below.clone();
        for (y, list) in mu_below.iter().enumerate() {
            for &(z, m) in list {
                mu_graph[z as usize].push((y as u32, m));
            }
        }
        for list in &mut mu_graph {
            list.sort_unstable();
        }
        Self {
            group,
            cols,
            mu_below,
            mu_graph,
        }
    }

    pub fn group(&self) -> &Arc<CoxeterGroup> {
        &self.group
    }

    /// `h_{x,y}`
    pub fn kl_poly(&self, x: Element, y: Element) -> Result<LaurentPoly, Error> {
        let x = self.group.check(x)?;
        let y = self.group.check(y)?;
        Ok(self.h(x, y).cloned().unwrap_or_default())
    }

    pub(crate) fn h(&self, x: usize, y: usize) -> Option<&LaurentPoly> {
        let col = &self.cols[y];
        col.binary_search_by_key(&(x as u32), |(i, _)| *i)
            .ok()
            .map(|k| &col[k].1)
    }

    /// Coefficient of `v` in `h_{x,y}`; zero unless `x < y`.
    pub fn mu(&self, x: Element, y: Element) -> Result<i64, Error> {
        let x = self.group.check(x)?;
        let y = self.group.check(y)?;
        Ok(self.mu_idx(x, y))
    }

    pub(crate) fn mu_idx(&self, x: usize, y: usize) -> i64 {
        let list = &self.mu_below[y];
        list.binary_search_by_key(&(x as u32), |(i, _)| *i)
            .map(|k| list[k].1)
            .unwrap_or(0)
    }

    /// Neighbours of `y` in the symmetrised `μ`-graph.
    pub(crate) fn mu_neighbours(&self, y: usize) -> &[(u32, i64)] {
        &self.mu_graph[y]
    }

    /// `H̲_y` expanded in the standard basis.
    pub fn kl_basis_element(&self, y: Element) -> Result<HeckeElt, Error> {
        let y = self.group.check(y)?;
        Ok(self.kl_elt(y))
    }

    pub(crate) fn kl_elt(&self, y: usize) -> HeckeElt {
        HeckeElt {
            system: self.group.id(),
            terms: self.cols[y].iter().cloned().collect(),
        }
    }

    /// Rewrites a standard-basis element in the KL basis.
    pub fn to_kl_basis(&self, h: &HeckeElt) -> Result<BTreeMap<Element, LaurentPoly>, Error> {
        if h.system != self.group.id() {
            return Err(Error::SystemMismatch);
        }
        let g = &self.group;
        let mut rest = h.clone();
        let mut out = BTreeMap::new();
        while let Some((&w, _)) = rest.terms.iter().max_by_key(|(&w, _)| (g.length_of(w as usize), w)) {
            let c = rest.terms[&w].clone();
            let w = w as usize;
            for (x, p) in &self.cols[w] {
                rest.add_at(*x as usize, &(p * &c), &-BigInt::one(), 0);
            }
            debug_assert!(!rest.terms.contains_key(&(w as u32)));
            out.insert(g.element(w), c);
        }
        Ok(out)
    }

    /// Coefficients of `H̲_x H̲_y` in the KL basis.
    pub fn mult_kl(&self, x: Element, y: Element) -> Result<BTreeMap<Element, LaurentPoly>, Error> {
        let x = self.group.check(x)?;
        let y = self.group.check(y)?;
        let prod = mult_standard(&self.group, &self.kl_elt(x), &self.kl_elt(y))?;
        self.to_kl_basis(&prod)
    }

    /// `H̲_s · Σ c_w H̲_w`, computed in the KL basis through the W-graph:
    /// `H̲_s H̲_w = (v + v^-1) H̲_w` if `sw < w`, otherwise
    /// `H̲_{sw} + Σ_{z < w, sz < z} μ(z,w) H̲_z`.
    ///
    /// Only terms accepted by `keep` are retained.
    pub(crate) fn left_mul_kl_s(
        &self,
        s: usize,
        vec: &BTreeMap<u32, LaurentPoly>,
        keep: &dyn Fn(usize) -> bool,
    ) -> BTreeMap<u32, LaurentPoly> {
        let g = &self.group;
        let one = BigInt::one();
        let mut out: BTreeMap<u32, LaurentPoly> = BTreeMap::new();
        let mut add = |i: usize, p: &LaurentPoly, c: &BigInt, k: i32| {
            if keep(i) {
                out.entry(i as u32).or_default().add_scaled(p, c, k);
            }
        };
        for (&w, p) in vec {
            let w = w as usize;
            if g.left_descents_of(w) >> s & 1 == 1 {
                add(w, p, &one, 1);
                add(w, p, &one, -1);
            } else {
                add(g.left_mul(w, s), p, &one, 0);
                for &(z, m) in &self.mu_below[w] {
                    if g.left_descents_of(z as usize) >> s & 1 == 1 {
                        add(z as usize, p, &BigInt::from(m), 0);
                    }
                }
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// For fixed `y`, the KL-basis coefficients of `H̲_x H̲_y` for every `x`,
    /// restricted to the terms accepted by `keep`. `keep` must describe a set
    /// whose complement spans a left ideal in the KL basis.
    pub(crate) fn products_with(
        &self,
        y: usize,
        keep: &dyn Fn(usize) -> bool,
    ) -> Vec<BTreeMap<u32, LaurentPoly>> {
        let g = &self.group;
        let n = g.len();
        let mut t: Vec<BTreeMap<u32, LaurentPoly>> = Vec::with_capacity(n);
        let mut start = BTreeMap::new();
        if keep(y) {
            start.insert(y as u32, LaurentPoly::one());
        }
        t.push(start);
        for x in 1..n {
            let s = g.left_descents_of(x).trailing_zeros() as usize;
            let xp = g.left_mul(x, s);
            let mut cur = self.left_mul_kl_s(s, &t[xp], keep);
            for &(z, m) in &self.mu_below[xp] {
                let z = z as usize;
                if g.left_descents_of(z) >> s & 1 == 0 {
                    continue;
                }
                let c = BigInt::from(-m);
                for (&u, p) in &t[z] {
                    cur.entry(u).or_default().add_scaled(p, &c, 0);
                }
            }
            cur.retain(|_, p| !p.is_zero());
            t.push(cur);
        }
        t
    }

    /// `h · H̲_w`: the action of the projective functor `θ_w` on the
    /// Grothendieck group.
    pub fn act_theta(&self, h: &HeckeElt, w: Element) -> Result<HeckeElt, Error> {
        let w = self.group.check(w)?;
        mult_standard(&self.group, h, &self.kl_elt(w))
    }

    /// Graded dimension vector of `V(I_w)`, indexed by internal degree
    /// `0..=2ℓ(w₀)`. A copy of `∇_x` contributed by the `v^k` term of
    /// `h_{x,w}` sits at position `2ℓ(w₀) - ℓ(x) - ℓ(w) + k`.
    pub fn graded_injective_dim_vector(&self, w: Element) -> Result<Vec<u64>, Error> {
        let g = &self.group;
        let w = g.check(w)?;
        if g.type_a_degree().is_none() {
            return Err(Error::NotTypeA);
        }
        calibrate()?;
        let w0 = g.longest_element().index();
        let check = self.injective_vector_raw(w0);
        if check != length_profile(g) {
            return Err(Error::ConventionUncalibrated(format!(
                "w0 vector {check:?} is not the doubled length distribution"
            )));
        }
        Ok(self.injective_vector_raw(w))
    }

    fn injective_vector_raw(&self, w: usize) -> Vec<u64> {
        let g = &self.group;
        let top = 2 * g.length_of(g.longest_element().index()) as i64;
        let lw = g.length_of(w) as i64;
        let mut out = vec![0u64; top as usize + 1];
        for (x, p) in &self.cols[w] {
            let lx = g.length_of(*x as usize) as i64;
            for (k, c) in p.terms() {
                let pos = top - lx - lw + k as i64;
                let c = c.to_u64().expect("negative KL coefficient");
                out[pos as usize] += c;
            }
        }
        out
    }
}

/// Length distribution of `g` placed at even positions `2ℓ`.
fn length_profile(g: &CoxeterGroup) -> Vec<u64> {
    let top = 2 * g.length(g.longest_element());
    let mut out = vec![0u64; top + 1];
    for w in g.enumerate() {
        out[top - 2 * g.length(w)] += 1;
    }
    out
}

/// The `S_4` vector of `V(I_{w₀})` that fixes the degree placement.
pub const CALIBRATION_S4_W0: [u64; 13] = [1, 0, 3, 0, 5, 0, 6, 0, 5, 0, 3, 0, 1];

fn calibrate() -> Result<(), Error> {
    static RESULT: OnceLock<Result<(), Error>> = OnceLock::new();
    RESULT
        .get_or_init(|| {
            let g = Arc::new(CoxeterGroup::symmetric(4)?);
            let kl = KLTable::new(g.clone());
            let got = kl.injective_vector_raw(g.longest_element().index());
            if got == CALIBRATION_S4_W0 {
                Ok(())
            } else {
                Err(Error::ConventionUncalibrated(format!("S4 w0 vector {got:?}")))
            }
        })
        .clone()
}
