use serde::Serialize;

use super::module::GradedModule;
use crate::error::Error;
use crate::linalg::{q, Matrix, Span};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Obstruction {
    GradedDimensions,
    TopDimensions,
    SocleDimensions,
    /// Every homomorphism kills a common nonzero vector.
    CommonKernel,
    /// The images of all homomorphisms together do not span the target.
    ImagesDoNotSpan,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum IsoResult {
    /// An invertible degree-0 homomorphism.
    Isomorphic(Matrix),
    NotIsomorphic(Obstruction),
    /// No invertible map found and no obstruction certified.
    Inconclusive,
}

impl IsoResult {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoResult::Isomorphic(_))
    }
}

/// Decides `M ≅ N` by solving for degree-0 intertwiners. A witness is
/// searched among the basis of `Hom(M, N)` and then among deterministic
/// integer combinations chosen greedily to raise the rank.
pub fn is_isomorphic(m: &GradedModule, n: &GradedModule) -> Result<IsoResult, Error> {
    if !m.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    if m.graded_dims() != n.graded_dims() {
        return Ok(IsoResult::NotIsomorphic(Obstruction::GradedDimensions));
    }
    let dim = m.dim();
    if dim == 0 {
        return Ok(IsoResult::Isomorphic(Matrix::zeros(0, 0)));
    }
    if m.top().graded_dims() != n.top().graded_dims() {
        return Ok(IsoResult::NotIsomorphic(Obstruction::TopDimensions));
    }
    if m.socle().graded_dims() != n.socle().graded_dims() {
        return Ok(IsoResult::NotIsomorphic(Obstruction::SocleDimensions));
    }
    let homs = m.hom(n)?;
    if homs.is_empty() {
        return Ok(IsoResult::NotIsomorphic(Obstruction::CommonKernel));
    }
    for f in &homs {
        if f.rank() == dim {
            return Ok(IsoResult::Isomorphic(f.clone()));
        }
    }
    let mut f = Matrix::zeros(dim, dim);
    let mut best = 0;
    let range = homs.len() as i64 + 1;
    for h in &homs {
        let mut choice = None;
        for c in 1..=range {
            let cand = f.add(&h.scale(&q(c)));
            let r = cand.rank();
            if r > best {
                best = r;
                choice = Some(cand);
            }
        }
        if let Some(c) = choice {
            f = c;
        }
        if best == dim {
            return Ok(IsoResult::Isomorphic(f));
        }
    }
    let mut stacked = Matrix::zeros(0, dim);
    for h in &homs {
        stacked = stacked.vstack(h);
    }
    if stacked.rank() < dim {
        return Ok(IsoResult::NotIsomorphic(Obstruction::CommonKernel));
    }
    let mut images = Span::new(dim);
    for h in &homs {
        for j in 0..dim {
            images.insert(&h.column(j));
        }
    }
    if images.len() < dim {
        return Ok(IsoResult::NotIsomorphic(Obstruction::ImagesDoNotSpan));
    }
    Ok(IsoResult::Inconclusive)
}
