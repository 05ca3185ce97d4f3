//! Calabi-Yau shifts `θ_w L_d ↦ θ_w L_d⟨2(a(d) - a(w₀d))⟩[2a(w₀d)]` per
//! Duflo involution `d`, and the scatter of these shifts over all two-sided
//! cells.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cells::{CellKind, Cells};
use crate::coxeter::{CoxeterGroup, Element};
use crate::error::Error;
use crate::typea::{self, shape_a, w0_shape, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CYShift {
    pub hom_shift: i64,
    pub grade_shift: i64,
}

impl CYShift {
    /// Shift data from `a(d)` and `a(w₀d)`.
    pub fn from_a_values(a_d: u32, a_w0d: u32) -> Self {
        Self {
            hom_shift: 2 * a_w0d as i64,
            grade_shift: 2 * (a_d as i64 - a_w0d as i64),
        }
    }
}

/// Shift of a Duflo involution computed from the cell data.
pub fn shift_of(cells: &Cells<'_>, d: Element) -> Result<CYShift, Error> {
    let g = cells.group();
    g.check(d)?;
    let duflo = cells.duflo_involutions()?;
    if !duflo.duflo.contains(&d) {
        return Err(Error::NotDuflo(g.format(d)));
    }
    Ok(CYShift::from_a_values(
        cells.a_function(d)?,
        cells.a_function(g.w0_mult(d))?,
    ))
}

/// Type A shift of a Duflo involution (an involution) read off its RS shape.
pub fn shift_of_type_a(g: &CoxeterGroup, d: Element) -> Result<CYShift, Error> {
    g.check(d)?;
    if !g.is_involution(d) {
        return Err(Error::NotDuflo(g.format(d)));
    }
    Ok(shift_of_shape(&typea::shape_of(g, d)?))
}

/// Shift shared by every Duflo involution in the two-sided cell of shape `λ`.
pub fn shift_of_shape(lambda: &Partition) -> CYShift {
    CYShift::from_a_values(shape_a(lambda) as u32, shape_a(&w0_shape(lambda)) as u32)
}

/// `{2a(w₀d) : d Duflo}` from the cell data.
pub fn admissible_dims(cells: &Cells<'_>) -> Result<BTreeSet<i64>, Error> {
    let duflo = cells.duflo_involutions()?;
    duflo
        .duflo
        .iter()
        .map(|&d| shift_of(cells, d).map(|s| s.hom_shift))
        .collect()
}

/// `{2n(λ') : λ ⊢ n}`, the admissible dimensions for `S_n`.
pub fn admissible_dims_type_a(n: usize) -> BTreeSet<i64> {
    Partition::all(n).iter().map(|l| shift_of_shape(l).hom_shift).collect()
}

/// One dot per two-sided cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Figure1Dot {
    /// RS shape of the cell containing `d`.
    pub partition: Partition,
    /// RS shape of the cell containing `w₀d`.
    pub w0_partition: Partition,
    pub a: usize,
    pub a_w0: usize,
    pub x: i64,
    pub y: i64,
}

pub fn figure1_coordinates(n: usize) -> Vec<Figure1Dot> {
    Partition::all(n)
        .into_iter()
        .map(|lambda| {
            let s = shift_of_shape(&lambda);
            let w0 = w0_shape(&lambda);
            Figure1Dot {
                a: shape_a(&lambda),
                a_w0: shape_a(&w0),
                partition: lambda,
                w0_partition: w0,
                x: s.hom_shift,
                y: s.grade_shift,
            }
        })
        .collect()
}

/// Groups of dots sharing a homological position, for positions holding
/// more than one dot. Sorted by position.
pub fn hom_collisions(dots: &[Figure1Dot]) -> Vec<(i64, Vec<&Figure1Dot>)> {
    let positions: BTreeSet<i64> = dots.iter().map(|d| d.x).collect();
    positions
        .into_iter()
        .map(|x| (x, dots.iter().filter(|d| d.x == x).collect::<Vec<_>>()))
        .filter(|(_, v)| v.len() > 1)
        .collect()
}

/// Shift table for every two-sided cell of a general finite Coxeter group,
/// one row per Duflo involution.
pub fn shift_table(cells: &Cells<'_>) -> Result<Vec<(Element, u32, CYShift)>, Error> {
    let g = cells.group();
    let duflo = cells.duflo_involutions()?;
    let j = cells.partition(CellKind::TwoSided);
    let mut rows = Vec::new();
    for d in duflo.duflo {
        let s = CYShift::from_a_values(cells.a_function(d)?, cells.a_function(g.w0_mult(d))?);
        rows.push((d, j.class_of(d) as u32, s));
    }
    Ok(rows)
}

/// Static scatter plot: homological axis positive to the left, grading
/// positive up.
pub fn figure1_svg(dots: &[Figure1Dot]) -> String {
    let scale = 12.0;
    let margin = 60.0;
    let xs: Vec<i64> = dots.iter().map(|d| d.x).collect();
    let ys: Vec<i64> = dots.iter().map(|d| d.y).collect();
    let (xmin, xmax) = (xs.iter().min().copied().unwrap_or(0).min(0), xs.iter().max().copied().unwrap_or(0).max(0));
    let (ymin, ymax) = (ys.iter().min().copied().unwrap_or(0).min(0), ys.iter().max().copied().unwrap_or(0).max(0));
    let width = (xmax - xmin) as f64 * scale + 2.0 * margin;
    let height = (ymax - ymin) as f64 * scale + 2.0 * margin;
    let px = |x: i64| margin + (xmax - x) as f64 * scale;
    let py = |y: i64| margin + (ymax - y) as f64 * scale;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
        px(xmax),
        py(0),
        px(xmin),
        py(0)
    );
    let _ = writeln!(
        out,
        r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
        px(0),
        py(ymax),
        px(0),
        py(ymin)
    );
    for d in dots {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="magenta"/><text x="{:.1}" y="{:.1}" font-size="9">{}</text>"#,
            px(d.x),
            py(d.y),
            px(d.x) + 4.0,
            py(d.y) - 4.0,
            d.partition.compact()
        );
    }
    out.push_str("</svg>\n");
    out
}
