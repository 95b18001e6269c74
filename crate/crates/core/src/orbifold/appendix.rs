//! The bundled weight-14 relation among `L, U_{0,0}, …, U_{8,0}`.

use thiserror::Error;

use crate::algebra::{Element, ExprTree};
use crate::ope::{Engine, EngineError};
use crate::syntax::{parse_expr, SyntaxError};

const SOURCE: &str = include_str!("../../data/appendix_wt14.expr");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppendixError {
    #[error("bundled relation does not parse: {0}")]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// The relation as shipped, in the expression grammar.
pub fn appendix_source() -> &'static str {
    SOURCE
}

pub fn appendix_tree() -> Result<ExprTree, AppendixError> {
    Ok(parse_expr(SOURCE)?)
}

/// Normal form of the bundled relation; the zero element when it holds.
pub fn verify_appendix(engine: &mut Engine) -> Result<Element, AppendixError> {
    Ok(engine.normal_form(&appendix_tree()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sha2::{Digest, Sha256};

    #[test]
    fn bundled_file_is_unchanged() {
        let digest = Sha256::digest(SOURCE.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(hex, "156605c8852cd3108a7b885f867b3b991753e5bc4b56e71ca7c3d158c6c14660");
    }

    #[test]
    fn bundled_file_parses() {
        match appendix_tree().unwrap() {
            ExprTree::Sum(xs) => assert_eq!(xs.len(), 60),
            t => panic!("expected a sum, got {t:?}"),
        }
    }
}
