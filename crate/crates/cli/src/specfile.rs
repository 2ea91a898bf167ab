//! On-disk formats: the inequality specification file and the grid file.
//!
//! Both are JSON; complex amplitudes are written as [re, im] pairs so
//! fixtures stay diff-able.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use steerbound::linalg::Ket;
use steerbound::scenario::{
    correlator_to_probability_form, CoeffTerm, ImprecisionProfile, SteeringFunctional,
    TargetMeasurements,
};
use steerbound::targets::{check_mub, family_from_label};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InequalitySpec {
    pub d: usize,
    pub n_x: usize,
    pub n_y: usize,
    pub coefficients: CoefficientSpec,
    pub targets: TargetSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<EpsilonSpec>,
    /// Idealized LHS bound supplied by the user for generalized scenarios
    /// (e.g. bounds restricted by an entanglement property); computed by
    /// enumeration when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta0: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientSpec {
    /// Named functional; currently "mub-correlation" (c_abxy = delta_ab
    /// delta_xy over n_x = n_y inputs).
    Named(String),
    /// Sparse entries (a, b, x, y, value).
    Sparse(Vec<(usize, usize, usize, usize, f64)>),
    /// Two-outcome correlator signs (x, y, +-1); converted to the
    /// nonnegative probability form with an attached back-map.
    Correlator(Vec<(usize, usize, i8)>),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum TargetSpec {
    /// One of: "computational", "mub-pair", "wh-mubs:n", "pauli-xyz",
    /// "pauli-xzy".
    Named(String),
    /// Explicit amplitudes indexed [basis y][outcome b][component] = [re, im].
    Explicit(Vec<Vec<Vec<[f64; 2]>>>),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonSpec {
    Uniform(f64),
    /// One value per basis, shared by its outcomes.
    PerBasis(Vec<f64>),
    /// Full matrix indexed [y][b].
    Matrix(Vec<Vec<f64>>),
}

impl InequalitySpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read spec file {}", path.display()))?;
        let spec: InequalitySpec = serde_json::from_str(&text)
            .map_err(|e| anyhow!("parse error in {} at line {}, column {}: {e}", path.display(), e.line(), e.column()))?;
        Ok(spec)
    }

    pub fn functional(&self) -> Result<SteeringFunctional> {
        match &self.coefficients {
            CoefficientSpec::Named(name) => match name.as_str() {
                "mub-correlation" => {
                    if self.n_x != self.n_y {
                        bail!("mub-correlation requires n_x = n_y, got {} and {}", self.n_x, self.n_y);
                    }
                    Ok(SteeringFunctional::mub_correlation(self.d, self.n_x))
                }
                other => bail!("unknown named functional '{other}'"),
            },
            CoefficientSpec::Sparse(entries) => {
                let terms: Vec<CoeffTerm> = entries
                    .iter()
                    .map(|&(a, b, x, y, value)| CoeffTerm { a, b, x, y, value })
                    .collect();
                Ok(SteeringFunctional::new(self.d, self.n_x, self.n_y, terms)?)
            }
            CoefficientSpec::Correlator(signs) => {
                if self.d != 2 {
                    bail!("correlator coefficients require d = 2, got {}", self.d);
                }
                Ok(correlator_to_probability_form(signs, self.n_x, self.n_y)?)
            }
        }
    }

    pub fn target_measurements(&self) -> Result<TargetMeasurements> {
        match &self.targets {
            TargetSpec::Named(label) => {
                let fam = family_from_label(label, self.d)?;
                if fam.n_bases() != self.n_y {
                    bail!(
                        "target family '{label}' provides {} bases but the scenario needs n_y = {}",
                        fam.n_bases(),
                        self.n_y
                    );
                }
                Ok(TargetMeasurements::from_family(&fam))
            }
            TargetSpec::Explicit(bases) => {
                if bases.len() != self.n_y {
                    bail!("explicit targets list {} bases, expected n_y = {}", bases.len(), self.n_y);
                }
                let mut kets: Vec<Vec<Ket>> = Vec::new();
                for (y, basis) in bases.iter().enumerate() {
                    let mut row = Vec::new();
                    for (b, amps) in basis.iter().enumerate() {
                        let v: Vec<_> = amps
                            .iter()
                            .map(|[re, im]| num_complex::Complex64::new(*re, *im))
                            .collect();
                        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                        if (norm - 1.0).abs() > 1e-8 {
                            bail!(
                                "target vector (b={b}, y={y}) is not unit norm: ||v|| = {norm}"
                            );
                        }
                        row.push(Ket::normalized(v)?);
                    }
                    kets.push(row);
                }
                Ok(TargetMeasurements::new(self.d, kets)?)
            }
        }
    }

    /// True when the target label claims mutual unbiasedness.
    pub fn claims_mub(&self) -> bool {
        matches!(
            &self.targets,
            TargetSpec::Named(label) if label == "mub-pair" || label.starts_with("wh-mubs:")
        )
    }

    pub fn imprecision_profile(&self) -> Result<ImprecisionProfile> {
        let profile = match &self.epsilons {
            None => ImprecisionProfile::uniform(self.n_y, self.d, 0.0)?,
            Some(EpsilonSpec::Uniform(e)) => ImprecisionProfile::uniform(self.n_y, self.d, *e)?,
            Some(EpsilonSpec::PerBasis(values)) => {
                if values.len() != self.n_y {
                    bail!(
                        "per-basis epsilons list {} entries, expected n_y = {}",
                        values.len(),
                        self.n_y
                    );
                }
                ImprecisionProfile::per_basis(values, self.d)?
            }
            Some(EpsilonSpec::Matrix(rows)) => {
                if rows.len() != self.n_y || rows.iter().any(|r| r.len() != self.d) {
                    bail!("epsilon matrix must be n_y x d = {} x {}", self.n_y, self.d);
                }
                ImprecisionProfile::new(rows.clone())?
            }
        };
        Ok(profile)
    }

    /// Runs every invariant, returning one report line per check.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut lines = Vec::new();
        let f = self.functional()?;
        lines.push(format!(
            "coefficients: {} nonnegative entries over d={}, n_x={}, n_y={}",
            f.terms().len(),
            self.d,
            self.n_x,
            self.n_y
        ));
        let targets = self.target_measurements()?;
        lines.push(format!("targets: {} bases of dimension {}", targets.n_y(), self.d));
        if self.claims_mub() {
            let fam = match &self.targets {
                TargetSpec::Named(label) => family_from_label(label, self.d)?,
                TargetSpec::Explicit(_) => unreachable!(),
            };
            if !check_mub(&fam, 1e-10) {
                bail!("target family fails the MUB check at tolerance 1e-10");
            }
            lines.push("MUB check passed (tolerance 1e-10)".into());
        }
        self.imprecision_profile()?;
        lines.push("imprecision parameters within [0, 1]".into());
        if let Some(b0) = self.beta0 {
            if !(b0 > 0.0) || !b0.is_finite() {
                bail!("beta0 must be positive and finite, got {b0}");
            }
            lines.push(format!("user-supplied beta0 = {b0}"));
        }
        Ok(lines)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub d: usize,
    /// Functional label; currently "mub-correlation" over two bases.
    pub functional: String,
    /// Imprecision values for the first basis; defaults to 0 plus 27
    /// geometrically spaced points in [1e-4, 0.1].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis1: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis2: Option<Vec<f64>>,
}

/// Default grid axis: zero plus a geometric ladder, 28 points total.
pub fn default_grid_axis() -> Vec<f64> {
    let mut axis = vec![0.0];
    let n = 27;
    for k in 0..n {
        let t = k as f64 / (n - 1) as f64;
        axis.push(1e-4 * (0.1f64 / 1e-4).powf(t));
    }
    axis
}

impl GridSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read grid file {}", path.display()))?;
        let spec: GridSpec = serde_json::from_str(&text)
            .map_err(|e| anyhow!("parse error in {} at line {}, column {}: {e}", path.display(), e.line(), e.column()))?;
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        if self.functional != "mub-correlation" {
            bail!("unsupported grid functional '{}'", self.functional);
        }
        for axis in [&self.axis1, &self.axis2].into_iter().flatten() {
            if axis.is_empty() {
                bail!("grid axes must be nonempty");
            }
            if axis.iter().any(|e| !(0.0..=1.0).contains(e)) {
                bail!("grid axis values must lie in [0, 1]");
            }
            if axis.windows(2).any(|w| w[0] > w[1]) {
                bail!("grid axis values must be ascending");
            }
        }
        Ok(())
    }

    pub fn axes(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.axis1.clone().unwrap_or_else(default_grid_axis),
            self.axis2.clone().unwrap_or_else(default_grid_axis),
        )
    }
}
