//! TOML descriptor files for user-defined data.
//!
//! ```toml
//! label = "my_l"
//! q = 1
//! Q = 0.5641895835477563
//! lambda = [0.5]
//! mu = [[0.0, 0.0]]
//! omega = [1.0, 0.0]
//! pole_order = 1
//! coeffs = "table:coeffs.csv"
//! ```
//!
//! Table files hold rows `n,re,im` for `n = 1, 2, ...` in order; a header
//! row is allowed. Relative table paths resolve against the descriptor.

use num_complex::Complex64;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::{CoefficientSource, SelbergDatum};
use crate::error::{AfeError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    pub label: String,
    pub q: usize,
    #[serde(rename = "Q")]
    pub scale: f64,
    pub lambda: Vec<f64>,
    pub mu: Vec<[f64; 2]>,
    pub omega: [f64; 2],
    pub pole_order: u32,
    pub coeffs: String,
    #[serde(default)]
    pub growth_epsilon: f64,
}

impl Descriptor {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| AfeError::Parse(e.to_string().replace('\n', " ")))
    }

    pub fn load(path: &Path) -> Result<SelbergDatum> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text)?.into_datum(&base)
    }

    /// Builds the datum; `base` resolves relative table paths.
    pub fn into_datum(self, base: &Path) -> Result<SelbergDatum> {
        if self.q != self.lambda.len() {
            return Err(AfeError::Validation {
                field: "q",
                reason: format!("q = {} but {} lambdas given", self.q, self.lambda.len()),
            });
        }
        let source = match self.coeffs.as_str() {
            "zeta" => CoefficientSource::zeta(),
            "delta" => CoefficientSource::cusp_form_delta(),
            "rankin_selberg" => CoefficientSource::rankin_selberg_delta(),
            other => match other.strip_prefix("table:") {
                Some(rel) => {
                    let mut path = PathBuf::from(rel);
                    if path.is_relative() {
                        path = base.join(path);
                    }
                    CoefficientSource::table(read_table(&path)?, self.growth_epsilon)?
                }
                None => {
                    return Err(AfeError::Validation {
                        field: "coeffs",
                        reason: format!("unknown coefficient source '{other}'"),
                    })
                }
            },
        };
        SelbergDatum::new(
            self.label,
            self.scale,
            self.lambda,
            self.mu.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
            Complex64::new(self.omega[0], self.omega[1]),
            self.pole_order,
            Arc::new(source),
        )
    }
}

fn read_table(path: &Path) -> Result<Vec<Complex64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => AfeError::Io(io),
            other => AfeError::Parse(format!("{other:?}")),
        })?;
    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| AfeError::Parse(format!("{}: {e}", path.display())))?;
        if row == 0 && record.get(0) == Some("n") {
            continue;
        }
        let field = |i: usize| -> Result<f64> {
            record
                .get(i)
                .ok_or_else(|| AfeError::Parse(format!("{}: short row {record:?}", path.display())))?
                .parse::<f64>()
                .map_err(|e| AfeError::Parse(format!("{}: {e}", path.display())))
        };
        let n = field(0)?;
        if n != (values.len() + 1) as f64 {
            return Err(AfeError::Parse(format!(
                "{}: expected n = {}, found {n}",
                path.display(),
                values.len() + 1
            )));
        }
        values.push(Complex64::new(field(1)?, field(2)?));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    const ZETA: &str = r#"
label = "zeta_copy"
q = 1
Q = 0.5641895835477563
lambda = [0.5]
mu = [[0.0, 0.0]]
omega = [1.0, 0.0]
pole_order = 1
coeffs = "zeta"
"#;

    #[test]
    fn parses_builtin_source() {
        let d = Descriptor::parse(ZETA).unwrap().into_datum(Path::new(".")).unwrap();
        assert_eq!(d.label(), "zeta_copy");
        assert_eq!(d.derived().d_f, 1.0);
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = format!("{ZETA}\nextra = 1\n");
        assert!(matches!(Descriptor::parse(&text), Err(AfeError::Parse(_))));
    }

    #[test]
    fn q_must_match() {
        let text = ZETA.replace("q = 1", "q = 2");
        let err = Descriptor::parse(&text).unwrap().into_datum(Path::new(".")).unwrap_err();
        assert!(matches!(err, AfeError::Validation { field: "q", .. }));
    }

    #[test]
    fn reads_relative_table() {
        let dir = tempfile::tempdir().unwrap();
        let mut f = std::fs::File::create(dir.path().join("a.csv")).unwrap();
        writeln!(f, "n,re,im\n1,1,0\n2,0.5,-0.25\n3,0,0").unwrap();
        let text = ZETA.replace("coeffs = \"zeta\"", "coeffs = \"table:a.csv\"");
        std::fs::write(dir.path().join("d.toml"), text).unwrap();
        let d = Descriptor::load(&dir.path().join("d.toml")).unwrap();
        let a = d.coefficients(3).unwrap();
        assert_eq!(a[1], Complex64::new(0.5, -0.25));
        assert!(!d.has_real_coefficients());
        assert!(matches!(d.coefficients(4), Err(AfeError::OutOfRange { .. })));
    }

    #[test]
    fn empty_table_is_invalid() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.csv"), "n,re,im\n").unwrap();
        let text = ZETA.replace("coeffs = \"zeta\"", "coeffs = \"table:a.csv\"");
        std::fs::write(dir.path().join("d.toml"), text).unwrap();
        let err = Descriptor::load(&dir.path().join("d.toml")).unwrap_err();
        assert!(matches!(err, AfeError::Validation { field: "coeffs", .. }));
    }
}
