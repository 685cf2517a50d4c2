//! JSON file formats: matrices, PVMs, calculi and discrete measure spaces.

use borel_core::multmodel::DiscreteMeasureSpace;
use borel_core::pvm::{Atom, Pvm};
use borel_core::{BorelCalculus, ComplexMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// `{ "re": [[...]], "im": [[...]] }`; `im` may be omitted for real input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let rows = m.rows();
        Self {
            re: rows.iter().map(|r| r.iter().map(|z| z.re).collect()).collect(),
            im: Some(rows.iter().map(|r| r.iter().map(|z| z.im).collect()).collect()),
        }
    }

    /// Whether the file carried no imaginary part.
    pub fn is_declared_real(&self) -> bool {
        self.im.is_none()
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        let n = self.re.len();
        if let Some(im) = &self.im {
            if im.len() != n || im.iter().zip(&self.re).any(|(a, b)| a.len() != b.len()) {
                return Err(CliError::Input("\"re\" and \"im\" have different shapes".into()));
            }
        }
        let rows: Vec<Vec<C64>> = self
            .re
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &x)| {
                        let y = self.im.as_ref().map_or(0.0, |im| im[i][j]);
                        C64::new(x, y)
                    })
                    .collect()
            })
            .collect();
        ComplexMatrix::from_rows(&rows).map_err(|e| CliError::Input(format!("matrix: {e}")))
    }
}

/// `[re, im]`.
pub type PointJson = [f64; 2];

fn point_json(z: C64) -> PointJson {
    [z.re, z.im]
}

fn point_value(p: PointJson) -> C64 {
    C64::new(p[0], p[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomJson {
    pub point: Vec<PointJson>,
    pub proj: MatrixJson,
}

/// `{ "d": int, "dim": int, "atoms": [...] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PvmJson {
    pub d: usize,
    pub dim: usize,
    pub atoms: Vec<AtomJson>,
}

impl PvmJson {
    pub fn from_pvm(e: &Pvm) -> Self {
        Self {
            d: e.d(),
            dim: e.dim(),
            atoms: e
                .atoms()
                .iter()
                .map(|a| AtomJson {
                    point: a.point.iter().copied().map(point_json).collect(),
                    proj: MatrixJson::from_matrix(&a.proj),
                })
                .collect(),
        }
    }

    pub fn to_pvm(&self) -> Result<Pvm, CliError> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| {
                Ok(Atom {
                    point: a.point.iter().copied().map(point_value).collect(),
                    proj: a.proj.to_matrix()?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Pvm::from_atoms(self.d, self.dim, atoms).map_err(|e| CliError::Input(format!("PVM: {e}")))
    }
}

/// PVM JSON with a `"kind"` tag naming how the calculus was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalculusJson {
    pub kind: String,
    #[serde(flatten)]
    pub pvm: PvmJson,
}

impl CalculusJson {
    pub fn new(kind: &str, phi: &BorelCalculus) -> Self {
        Self {
            kind: kind.to_string(),
            pvm: PvmJson::from_pvm(phi.pvm()),
        }
    }

    /// Rebuilds the calculus; the PVM axioms are checked on the way.
    pub fn to_calculus(&self) -> Result<BorelCalculus, CliError> {
        BorelCalculus::from_pvm(self.pvm.to_pvm()?).map_err(|e| CliError::Input(format!("calculus: {e}")))
    }
}

/// `{ "N": int, "weights": [...], "labels": [[re, im], ...] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub weights: Vec<f64>,
    pub labels: Vec<PointJson>,
}

impl SpaceJson {
    pub fn from_space(s: &DiscreteMeasureSpace) -> Self {
        Self {
            n: s.len(),
            weights: s.weights().to_vec(),
            labels: s.labels().iter().copied().map(point_json).collect(),
        }
    }

    pub fn to_space(&self) -> Result<DiscreteMeasureSpace, CliError> {
        if self.weights.len() != self.n || self.labels.len() != self.n {
            return Err(CliError::Input(format!(
                "space: N = {} but {} weights and {} labels",
                self.n,
                self.weights.len(),
                self.labels.len()
            )));
        }
        DiscreteMeasureSpace::new(self.weights.clone(), self.labels.iter().copied().map(point_value).collect())
            .map_err(|e| CliError::Input(format!("space: {e}")))
    }
}

/// Contents of a `--matrix` file: a bare matrix, a serialized calculus, or a
/// JSON report whose result is a calculus.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Matrix(MatrixJson),
    Calculus(CalculusJson),
}

impl Input {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("JSON: {e}")))?;
        // A saved `calc joint` report carries its calculus under "result".
        if value.get("tool").and_then(|t| t.as_str()) == Some(crate::report::TOOL) {
            value = match value.get_mut("result") {
                Some(r) if r.get("kind").is_some() => r.take(),
                _ => return Err(CliError::Input("report has no calculus in its result".into())),
            };
        }
        let is_calculus = value.get("kind").is_some();
        if is_calculus {
            serde_json::from_value(value)
                .map(Input::Calculus)
                .map_err(|e| CliError::Input(format!("calculus JSON: {e}")))
        } else {
            serde_json::from_value(value)
                .map(Input::Matrix)
                .map_err(|e| CliError::Input(format!("matrix JSON: {e}")))
        }
    }
}

pub fn point_list(points: &[C64]) -> Vec<PointJson> {
    points.iter().copied().map(point_json).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_matrix_may_omit_im() {
        let m: MatrixJson = serde_json::from_str(r#"{"re": [[1, 2], [2, 1]]}"#).unwrap();
        assert!(m.is_declared_real());
        let a = m.to_matrix().unwrap();
        assert_eq!(a, ComplexMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap());
    }

    #[test]
    fn shapes_are_checked() {
        let ragged: MatrixJson = serde_json::from_str(r#"{"re": [[1, 2], [3]]}"#).unwrap();
        assert!(matches!(ragged.to_matrix(), Err(CliError::Input(_))));
        let mixed: MatrixJson = serde_json::from_str(r#"{"re": [[1]], "im": [[1, 2]]}"#).unwrap();
        assert!(matches!(mixed.to_matrix(), Err(CliError::Input(_))));
        let empty: MatrixJson = serde_json::from_str(r#"{"re": []}"#).unwrap();
        assert!(empty.to_matrix().is_err());
    }

    #[test]
    fn calculus_round_trip() {
        let a = ComplexMatrix::real_diag(&[1.0, 2.0, 2.0]);
        let phi = BorelCalculus::from_normal(&a).unwrap();
        let text = serde_json::to_string(&CalculusJson::new("normal", &phi)).unwrap();
        let Input::Calculus(c) = Input::parse(&text).unwrap() else {
            panic!("expected a calculus");
        };
        assert_eq!(c.kind, "normal");
        assert_eq!(c.to_calculus().unwrap(), phi);
    }

    #[test]
    fn space_round_trip() {
        let s = DiscreteMeasureSpace::integers(4).unwrap();
        let j = SpaceJson::from_space(&s);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"N\":4"));
        let back: SpaceJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_space().unwrap(), s);
    }
}
