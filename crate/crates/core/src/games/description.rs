//! JSON game descriptions.
//!
//! ```json
//! {"kind": "function", "table_file": "f.txt", "views": [[1], [0]]}
//! {"kind": "function", "table": "2\n00 10 01 11", "views": [[1], [0]]}
//! {"kind": "transpose", "n": 2, "views": [[0], [1]]}
//! {"kind": "product", "n": 2, "x_views": [[0], [1]], "y_views": [[1], [0]]}
//! {"kind": "explicit", "question_bits": 2, "views": [[1], [0]], "answer_len": 1,
//!  "targets": [[0, 1, 0, 1], [0, 0, 1, 1]]}
//! ```
//!
//! All indices are 0-based. A relative `table_file` is resolved against the
//! directory of the description file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::builders::{build_gs, build_product_game, build_transpose_game};
use super::game::IndependentGame;
use crate::error::{Error, Result};
use crate::rigidity::function::{BooleanFunction, ViewFamily};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GameDescription {
    Function {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table_file: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table: Option<String>,
        views: Vec<Vec<usize>>,
    },
    Transpose {
        n: usize,
        views: Vec<Vec<usize>>,
    },
    Product {
        n: usize,
        x_views: Vec<Vec<usize>>,
        y_views: Vec<Vec<usize>>,
    },
    Explicit {
        question_bits: usize,
        views: Vec<Vec<usize>>,
        answer_len: usize,
        targets: Vec<Vec<u64>>,
    },
}

impl GameDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::from_json(&text)?, base))
    }

    /// Builds the game; `base` resolves relative truth-table paths.
    pub fn build(&self, base: &Path) -> Result<IndependentGame> {
        match self {
            GameDescription::Function { table_file, table, views } => {
                let text = match (table_file, table) {
                    (Some(file), None) => {
                        let path = base.join(file);
                        std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?
                    }
                    (None, Some(inline)) => inline.clone(),
                    _ => {
                        return Err(Error::InvalidArgument(
                            "function game needs exactly one of table_file and table".into(),
                        ))
                    }
                };
                let f = BooleanFunction::parse_text(&text)?;
                let s = views.first().map_or(0, Vec::len);
                build_gs(&f, &ViewFamily::new(f.arity(), s, views.clone())?)
            }
            GameDescription::Transpose { n, views } => build_transpose_game(*n, views),
            GameDescription::Product { n, x_views, y_views } => build_product_game(*n, x_views, y_views),
            GameDescription::Explicit {
                question_bits,
                views,
                answer_len,
                targets,
            } => IndependentGame::new(*question_bits, views.clone(), *answer_len, targets.clone()),
        }
    }
}
