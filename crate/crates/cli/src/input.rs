//! Turning command-line arguments into groups, algebras and modules.

use std::path::Path;
use std::sync::Arc;

use klcy::catalog::{self, AlgebraPresentation};
use klcy::coxeter::{CoxeterGroup, CoxeterSystem, DEFAULT_ELEMENT_CAP};
use klcy::{Error, GradedAlgebra, GradedModule};

use crate::CliError;

pub fn group(ty: Option<&str>, matrix_file: Option<&Path>, cap: Option<usize>) -> Result<Arc<CoxeterGroup>, CliError> {
    let system = match (ty, matrix_file) {
        (Some(_), Some(_)) => return Err(CliError::Usage("pass either --type or --matrix-file, not both".into())),
        (Some(t), None) => CoxeterSystem::parse_type(t)?,
        (None, Some(path)) => {
            let text = read(path)?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            CoxeterSystem::from_json(&value)?
        }
        (None, None) => return Err(CliError::Usage("a Coxeter group is required: pass --type A3 or --matrix-file".into())),
    };
    Ok(Arc::new(CoxeterGroup::with_cap(system, cap.unwrap_or(DEFAULT_ELEMENT_CAP))?))
}

/// A catalog name, or a presentation file. `sl2.json` falls back to the
/// catalog entry `sl2` when no such file exists.
pub fn algebra(text: Option<&str>) -> Result<AlgebraPresentation, CliError> {
    let text = text.ok_or_else(|| CliError::Usage("an algebra is required: pass --algebra <name|file>".into()))?;
    let path = Path::new(text);
    if path.is_file() {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("algebra");
        return Ok(AlgebraPresentation::from_json(&read(path)?, stem)?);
    }
    let name = text.strip_suffix(".json").unwrap_or(text);
    Ok(catalog::by_name(name)?)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Parses `P_v`, `I_v`, `L_v`, `delta_e` or `nabla_e`, optionally followed
/// by a grading shift `<k>`.
pub fn module(alg: &Arc<GradedAlgebra>, text: &str) -> Result<GradedModule, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "bad module `{text}`; expected P_<vertex>, I_<vertex>, L_<vertex>, delta_e or nabla_e, optionally with <shift>"
        ))
    };
    let (body, shift) = match text.split_once('<') {
        Some((b, rest)) => {
            let k = rest.strip_suffix('>').ok_or_else(bad)?.trim().parse::<i32>().map_err(|_| bad())?;
            (b.trim(), k)
        }
        None => (text.trim(), 0),
    };
    let (kind, vertex) = match body {
        "delta_e" => ("P", "e"),
        "nabla_e" => ("I", "e"),
        _ => body.split_once('_').ok_or_else(bad)?,
    };
    let v = alg.vertex(vertex)?;
    let m = match kind {
        "P" => GradedModule::projective(alg, v),
        "I" => GradedModule::injective(alg, v),
        "L" => GradedModule::simple(alg, v),
        _ => return Err(bad()),
    };
    Ok(m.shift(shift))
}

/// Every indecomposable projective, injective and simple module.
pub fn standard_modules(alg: &Arc<GradedAlgebra>) -> Vec<(String, GradedModule)> {
    let mut out = Vec::new();
    for kind in ["L", "P", "I"] {
        for (v, name) in alg.vertices().iter().enumerate() {
            let m = match kind {
                "L" => GradedModule::simple(alg, v),
                "P" => GradedModule::projective(alg, v),
                _ => GradedModule::injective(alg, v),
            };
            out.push((format!("{kind}_{name}"), m));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> Arc<GradedAlgebra> {
        catalog::sl2_block().algebra().unwrap()
    }

    #[test]
    fn module_specs() {
        let a = sl2();
        let e = a.vertex("e").unwrap();
        assert_eq!(module(&a, "nabla_e").unwrap().graded_dims(), GradedModule::injective(&a, e).graded_dims());
        assert_eq!(module(&a, "P_s<1>").unwrap().graded_dims(), GradedModule::projective(&a, 0).shift(1).graded_dims());
        assert_eq!(module(&a, "L_e < -2 >").unwrap().min_degree(), Some(2));
        for bad in ["X_s", "P_q", "P_s<1", "Ps", "P_s<x>"] {
            assert!(module(&a, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn algebra_names_and_files() {
        assert_eq!(algebra(Some("sl2.json")).unwrap().name, "sl2");
        assert!(matches!(algebra(None), Err(CliError::Usage(_))));
        assert!(algebra(Some("nonesuch")).is_err());
    }

    #[test]
    fn group_needs_exactly_one_source() {
        assert_eq!(group(Some("A2"), None, None).unwrap().len(), 6);
        assert!(matches!(group(None, None, None), Err(CliError::Usage(_))));
        assert!(group(Some("A2"), Some(Path::new("m.json")), None).is_err());
        assert!(group(Some("A4"), None, Some(10)).is_err());
    }
}
