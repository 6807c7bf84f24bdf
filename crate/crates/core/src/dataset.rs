//! Dataset files: UTF-8 CSV with a declared alphabet.
//!
//! ```text
//! #alphabet: tok1,tok2,...
//! id,label,seq
//! row1,0,tok1;tok2;tok1
//! row2,,tok2
//! ```
//!
//! The first line declares the alphabet in interning order, the second is the
//! fixed column header. `label` may be empty. `seq` is a semicolon-joined
//! token list and must be non-empty. Parse errors name the offending line.
//!
//! Substitution-cost files are plain CSV with the alphabet spelled along the
//! first row and first column and entry `(i, j)` holding the cost of
//! substituting token `i` by token `j`; the deletion cost travels separately.

use std::fs;
use std::path::Path;

use crate::alphabet::{Alphabet, Seq};
use crate::datagen::LabeledDataset;
use crate::error::{Error, Result};

const ALPHABET_PREFIX: &str = "#alphabet: ";
const HEADER: &str = "id,label,seq";

/// An ingested dataset: interned sequences with row ids and optional labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub alphabet: Alphabet,
    pub ids: Vec<String>,
    pub labels: Vec<Option<usize>>,
    pub sequences: Vec<Seq>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Wraps a generated dataset with row ids `0..m`.
    pub fn from_generated(data: &LabeledDataset) -> Dataset {
        Dataset {
            alphabet: data.alphabet.clone(),
            ids: (0..data.sequences.len()).map(|i| i.to_string()).collect(),
            labels: data.labels.iter().map(|&l| Some(l)).collect(),
            sequences: data.sequences.clone(),
        }
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Dataset> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> Result<Dataset> {
        let err = |line: usize, msg: String| Error::Parse {
            path: source.to_string(),
            line,
            msg,
        };
        let mut lines = text.lines().enumerate();

        let (_, first) = lines
            .next()
            .ok_or_else(|| err(1, "empty file".into()))?;
        let first = first.trim_end_matches('\r');
        let alphabet_list = first
            .strip_prefix(ALPHABET_PREFIX)
            .ok_or_else(|| err(1, format!("expected `{ALPHABET_PREFIX}tok1,tok2,...`")))?;
        let alphabet = Alphabet::new(alphabet_list.split(','))
            .map_err(|e| err(1, e.to_string()))?;

        let (_, second) = lines
            .next()
            .ok_or_else(|| err(2, format!("expected header `{HEADER}`")))?;
        if second.trim_end_matches('\r') != HEADER {
            return Err(err(2, format!("expected header `{HEADER}`")));
        }

        let mut ids = Vec::new();
        let mut labels = Vec::new();
        let mut sequences = Vec::new();
        for (i, raw) in lines {
            let line_no = i + 1;
            let row = raw.trim_end_matches('\r');
            if row.is_empty() {
                continue; // tolerate a trailing newline
            }
            let fields: Vec<&str> = row.split(',').collect();
            if fields.len() != 3 {
                return Err(err(
                    line_no,
                    format!("expected 3 comma-separated fields, got {}", fields.len()),
                ));
            }
            let id = fields[0];
            if id.is_empty() {
                return Err(err(line_no, "empty row id".into()));
            }
            if ids.iter().any(|x| x == id) {
                return Err(err(line_no, format!("duplicate row id {id:?}")));
            }
            let label = if fields[1].is_empty() {
                None
            } else {
                Some(fields[1].parse::<usize>().map_err(|_| {
                    err(line_no, format!("label {:?} is not a nonnegative integer", fields[1]))
                })?)
            };
            if fields[2].is_empty() {
                return Err(err(line_no, "empty sequence".into()));
            }
            let seq = alphabet
                .intern(fields[2].split(';'))
                .map_err(|e| err(line_no, e.to_string()))?;
            ids.push(id.to_string());
            labels.push(label);
            sequences.push(seq);
        }

        Ok(Dataset {
            alphabet,
            ids,
            labels,
            sequences,
        })
    }

    /// Canonical serialization; parsing it back yields an equal dataset.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(ALPHABET_PREFIX);
        out.push_str(&self.alphabet.tokens().join(","));
        out.push('\n');
        out.push_str(HEADER);
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(&self.ids[i]);
            out.push(',');
            if let Some(l) = self.labels[i] {
                out.push_str(&l.to_string());
            }
            out.push(',');
            out.push_str(&self.alphabet.render(&self.sequences[i]).join(";"));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    /// Labels of every row, failing on the first row without one.
    pub fn required_labels(&self) -> Result<Vec<usize>> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                l.ok_or_else(|| {
                    Error::BadEvalInput(format!("row {:?} has no label", self.ids[i]))
                })
            })
            .collect()
    }
}

/// Reads a substitution-cost CSV into a matrix ordered like `alphabet`.
pub fn read_cost_matrix(path: impl AsRef<Path>, alphabet: &Alphabet) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_cost_matrix(&text, &path.display().to_string(), alphabet)
}

pub fn parse_cost_matrix(text: &str, source: &str, alphabet: &Alphabet) -> Result<Vec<Vec<f64>>> {
    let err = |line: usize, msg: String| Error::Parse {
        path: source.to_string(),
        line,
        msg,
    };
    let n = alphabet.len();
    let mut lines = text.lines().enumerate();

    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let header: Vec<&str> = header.trim_end_matches('\r').split(',').collect();
    if header.len() != n + 1 || !header[0].is_empty() {
        return Err(err(
            1,
            format!("expected an empty cell followed by the {n} alphabet tokens"),
        ));
    }
    let col_of = |tok: &str| -> Result<usize> {
        alphabet
            .get(tok)
            .map(|s| s.id())
            .ok_or_else(|| Error::BadToken {
                token: tok.to_string(),
                reason: "not in the dataset alphabet".into(),
            })
    };
    let mut col_map = vec![usize::MAX; n];
    for (file_col, tok) in header[1..].iter().enumerate() {
        let id = col_of(tok).map_err(|e| err(1, e.to_string()))?;
        if col_map.contains(&file_col) || col_map[id] != usize::MAX {
            return Err(err(1, format!("duplicate column token {tok:?}")));
        }
        col_map[id] = file_col;
    }

    let mut matrix = vec![vec![f64::NAN; n]; n];
    let mut seen_rows = vec![false; n];
    for (i, raw) in lines {
        let line_no = i + 1;
        let row = raw.trim_end_matches('\r');
        if row.is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != n + 1 {
            return Err(err(
                line_no,
                format!("expected a token and {n} values, got {} fields", fields.len()),
            ));
        }
        let row_id = col_of(fields[0]).map_err(|e| err(line_no, e.to_string()))?;
        if seen_rows[row_id] {
            return Err(err(line_no, format!("duplicate row token {:?}", fields[0])));
        }
        seen_rows[row_id] = true;
        for target in alphabet.symbols() {
            let file_col = col_map[target.id()];
            let cell = fields[file_col + 1];
            let v: f64 = cell.parse().map_err(|_| {
                err(line_no, format!("cell {cell:?} is not a number"))
            })?;
            matrix[row_id][target.id()] = v;
        }
    }
    if let Some(missing) = seen_rows.iter().position(|&s| !s) {
        return Err(err(
            1,
            format!(
                "no row for token {:?}",
                alphabet.tokens()[missing]
            ),
        ));
    }
    Ok(matrix)
}
